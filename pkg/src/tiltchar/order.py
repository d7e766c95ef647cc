"""Dot action, p-regularity, affine reflections and the up-arrow down-set.

The dot action is ``w . nu = w(nu + rho) - rho``.  An affine reflection
``s_{alpha, np}`` acts through the dot action as reflection in the hyperplane
``<nu + rho, alpha^vee> = np``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from .rootdata import RootSystem, Weight, dominance_leq, dominant_weights_below

__all__ = [
    "AffineContext",
    "dot_reflect",
    "is_p_regular",
    "dot_dominant_rep",
    "straighten_many",
    "up_down_set",
    "up_leq",
]


@dataclass(frozen=True)
class AffineContext:
    root_system: RootSystem
    p: int

    def __post_init__(self):
        if self.p < 2:
            raise ValueError(f"p must be at least 2, got {self.p}")

    @property
    def rs(self) -> RootSystem:
        return self.root_system

    def require_lcf(self):
        """Raise unless p > h (the range where the quantum LCF is available)."""
        h = self.root_system.coxeter_number
        if self.p <= h:
            raise ValueError(f"p={self.p} must exceed the Coxeter number h={h} of {self.root_system.name}")


def _shifted_pairing(rs: RootSystem, nu: Weight, k: int) -> int:
    """<nu + rho, alpha_k^vee> for the k-th positive root."""
    return sum(c * (a + 1) for c, a in zip(rs.positive_coroots[k], nu))


def dot_reflect(ctx: AffineContext, nu: Weight, root_index: int, n: int) -> Weight:
    """s_{alpha, np} . nu for the positive root with index ``root_index``."""
    rs = ctx.rs
    shift = _shifted_pairing(rs, nu, root_index) - n * ctx.p
    alpha = rs.roots_weight_coords[root_index]
    return tuple(a - shift * r for a, r in zip(nu, alpha))


def is_p_regular(ctx: AffineContext, nu: Weight) -> bool:
    rs = ctx.rs
    return all(_shifted_pairing(rs, nu, k) % ctx.p for k in range(len(rs.positive_roots)))


def dot_dominant_rep(rs: RootSystem, nu: Weight) -> tuple[Weight, int] | None:
    """Straighten ``chi(nu)``: return ``(mu, sign)`` with ``chi(nu) = sign * chi(mu)``.

    Returns None when nu + rho lies on a reflecting hyperplane, i.e. chi(nu) = 0.
    """
    y = [a + 1 for a in nu]
    sign = 1
    n = rs.rank
    while True:
        for i in range(n):
            c = y[i]
            if c < 0:
                root = rs.simple_roots[i]
                for k in range(n):
                    y[k] -= c * root[k]
                sign = -sign
                break
        else:
            break
    if 0 in y:
        return None
    return tuple(a - 1 for a in y), sign


def straighten_many(rs: RootSystem, shifted: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized straightening of many ``nu + rho`` rows at once.

    ``shifted`` is an ``(N, n)`` integer array holding nu + rho.  Returns
    ``(dominant, sign)``: the dominant W-conjugate of each row, and the sign
    det(w), replaced by 0 where the row lies on a wall (chi vanishes).
    """
    y = np.array(shifted, dtype=np.int64, copy=True)
    sign = np.ones(len(y), dtype=np.int64)
    if len(y) == 0:
        return y, sign
    simple = np.array(rs.simple_roots, dtype=np.int64)
    active = np.flatnonzero((y < 0).any(axis=1))
    while active.size:
        sub = y[active]
        neg = sub < 0
        idx = neg.argmax(axis=1)
        coeff = sub[np.arange(len(sub)), idx]
        sub -= coeff[:, None] * simple[idx]
        y[active] = sub
        sign[active] *= -1
        active = active[(sub < 0).any(axis=1)]
    sign[(y == 0).any(axis=1)] = 0
    return y, sign


def up_down_set(lam: Weight, ctx: AffineContext, method: str = "dominant") -> set[Weight]:
    """Psi^+(lam): dominant mu with (mu - rho) up-below (lam - rho).

    ``method="dominant"`` searches only through weights nu with nu + rho
    dominant, moving across hyperplanes H_{alpha, np} with n >= 1.
    ``method="full"`` is the unrestricted search: every down-moving affine
    reflection from every weight that can still lie above some dominant
    target, bounded by the largest height difference between lam and a
    dominant weight below it.
    """
    lam = tuple(lam)
    if min(lam) < 0:
        raise ValueError(f"{lam} is not dominant")
    if method == "dominant":
        return _down_set_dominant(lam, ctx)
    if method == "full":
        return _down_set_full(lam, ctx)
    raise ValueError(f"unknown method {method!r}")


def _down_set_dominant(lam: Weight, ctx: AffineContext) -> set[Weight]:
    rs = ctx.rs
    p = ctx.p
    coroots = rs.positive_coroots
    roots = rs.roots_weight_coords
    start = lam  # store mu = nu + rho directly
    seen = {start}
    queue = deque([start])
    while queue:
        mu = queue.popleft()
        for coroot, root in zip(coroots, roots):
            a = sum(c * x for c, x in zip(coroot, mu))
            n = 1
            while n * p < a:
                shift = a - n * p
                img = tuple(x - shift * r for x, r in zip(mu, root))
                if min(img) >= 0 and img not in seen:
                    seen.add(img)
                    queue.append(img)
                n += 1
    return seen


def _down_set_full(lam: Weight, ctx: AffineContext) -> set[Weight]:
    rs = ctx.rs
    p = ctx.p
    below = dominant_weights_below(rs, lam)
    budget = max(rs.scaled_height(lam) - rs.scaled_height(mu) for mu in below)
    det, _ = rs.inverse_cartan_scaled
    root_heights = [sum(r) * det for r in rs.positive_roots]
    coroots = rs.positive_coroots
    roots = rs.roots_weight_coords
    seen = {lam}  # nu + rho
    queue = deque([(lam, 0)])
    while queue:
        y, used = queue.popleft()
        for coroot, root, hgt in zip(coroots, roots, root_heights):
            a = sum(c * x for c, x in zip(coroot, y))
            # image y - (a - np) alpha; need a - np > 0 and used + (a - np) * hgt <= budget
            max_shift = (budget - used) // hgt
            n_low = -((max_shift - a) // p)  # smallest n with a - np <= max_shift
            n = n_low
            while n * p < a:
                shift = a - n * p
                img = tuple(x - shift * r for x, r in zip(y, root))
                if img not in seen:
                    seen.add(img)
                    queue.append((img, used + shift * hgt))
                n += 1
    return {y for y in seen if min(y) >= 0}


def up_leq(ctx: AffineContext, mu: Weight, lam: Weight) -> bool:
    """(mu - rho) up-below (lam - rho), for dominant mu and lam."""
    if not dominance_leq(ctx.rs, mu, lam):
        return False
    return tuple(mu) in up_down_set(tuple(lam), ctx)
