"""Steinberg quotients: the minimal characters M_p and the quantum t_zeta.

Both constructions are compared weight by weight over the down-set of the
highest weight.  Products chi((p-1)rho + p gamma) * eta are handled in bulk:
for each orbit sum s(mu) we straighten every (p-1)rho + p gamma + w mu at
once (all gamma in X_m, all w mu in the orbit) and keep the resulting
Weyl-basis targets as integer keys.
"""

from __future__ import annotations

import csv
import io
import random
from dataclasses import dataclass, field

import numpy as np

from .charring import (
    FullCharacter,
    OrbitCharacter,
    _orbit_array,
    divide_exact,
    expand,
    freudenthal,
    frobenius_twist,
    orbit_product,
    to_orbit,
)
from .kl import KLTable, simple_character
from .order import AffineContext, is_p_regular, straighten_many, up_down_set
from .rootdata import Weight, dominance_leq, format_weight, pairing, restricted_weights

__all__ = [
    "AlgorithmError",
    "SteinbergReport",
    "m_bound",
    "has_good_steinberg_multiplication",
    "minimal_character",
    "t_zeta",
    "steinberg_quotient_divide",
    "compare",
    "steinberg_weight",
    "steinberg_product_is_good",
    "MinimalTrace",
]


class AlgorithmError(RuntimeError):
    """An invariant of the minimal-character construction failed at runtime."""


def steinberg_weight(ctx: AffineContext) -> Weight:
    return tuple(ctx.p - 1 for _ in range(ctx.rs.rank))


def m_bound(eta: OrbitCharacter, p: int) -> int:
    """Least m with p*m > <sigma, alpha_0^vee> for every weight sigma of eta."""
    if not eta:
        raise ValueError("m_bound of the zero character")
    a0v = eta.rs.highest_coroot
    top = max(pairing(mu, a0v) for mu in eta.support())
    return top // p + 1


# ---------------------------------------------------------------------------
# bulk Steinberg products


class _Targets:
    """Straightened Weyl-basis targets of chi((p-1)rho + p gamma) s(mu) for all gamma in X_m."""

    def __init__(self, ctx: AffineContext, m: int, top: Weight):
        rs = ctx.rs
        self.rs = rs
        self.n = rs.rank
        self.gammas = restricted_weights(rs.rank, m)
        # nu + rho with nu = (p-1)rho + p gamma, i.e. p(rho + gamma)
        self.bases = ctx.p * (np.array(self.gammas, dtype=np.int64).reshape(-1, rs.rank) + 1)
        # every straightened target nu is dominant with nu <= p(m-1)rho + (p-1)rho + top,
        # so each coordinate is bounded by that weight's pairing with alpha_0^vee
        bound = pairing(tuple(ctx.p * m - 1 + t for t in top), rs.highest_coroot) + 1
        if len(self.gammas) * bound**self.n >= 2**62:
            raise OverflowError("target keys do not fit in 64 bits")
        self.radix = bound
        self.powers = bound ** np.arange(self.n, dtype=np.int64)

    def of(self, mu: Weight) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(keys, signs, direct) for s(mu), aggregated so keys are unique.

        ``direct`` marks keys hit by an unstraightened term, i.e. where
        (p-1)rho + p gamma + w mu is itself dominant.
        """
        orbit = _orbit_array(self.rs, mu)
        g = len(self.bases)
        rows = (self.bases[:, None, :] + orbit[None, :, :]).reshape(-1, self.n)
        gidx = np.repeat(np.arange(g, dtype=np.int64), len(orbit))
        direct = (rows > 0).all(axis=1)
        dom, sign = straighten_many(self.rs, rows)
        keep = sign != 0
        keys = gidx[keep] * self.radix**self.n + (dom[keep] - 1) @ self.powers
        uniq, inv = np.unique(keys, return_inverse=True)
        signs = np.zeros(len(uniq), dtype=np.int64)
        np.add.at(signs, inv.reshape(-1), sign[keep])
        hit = np.zeros(len(uniq), dtype=bool)
        hit[inv.reshape(-1)[direct[keep]]] = True
        nz = signs != 0
        return uniq[nz], signs[nz], hit[nz]

    def decode(self, key: int) -> tuple[Weight, Weight]:
        """(gamma, nu) for an encoded target key."""
        gi, rest = divmod(int(key), self.radix**self.n)
        nu = []
        for _ in range(self.n):
            rest, c = divmod(rest, self.radix)
            nu.append(c)
        return self.gammas[gi], tuple(nu)


def has_good_steinberg_multiplication(eta: OrbitCharacter, ctx: AffineContext) -> bool:
    """eta * chi((p-1)rho + p gamma) is a good filtration character for all gamma in X_m."""
    if not eta:
        raise ValueError("the zero character has no highest weight")
    m = m_bound(eta, ctx.p)
    top = max(eta.support(), key=lambda mu: pairing(mu, ctx.rs.highest_coroot))
    tg = _Targets(ctx, m, top)
    keys = []
    vals = []
    for mu, c in eta.items():
        k, s, _ = tg.of(mu)
        keys.append(k)
        vals.append(c * s)
    keys = np.concatenate(keys)
    vals = np.concatenate(vals)
    uniq, inv = np.unique(keys, return_inverse=True)
    total = np.zeros(len(uniq), dtype=np.int64)
    np.add.at(total, inv.reshape(-1), vals)
    if total.min(initial=0) < 0:
        return False
    # nonzero for every gamma (products of nonzero characters never vanish)
    present = np.unique(uniq[total != 0] // tg.radix**tg.n)
    return len(present) == len(tg.gammas)


# ---------------------------------------------------------------------------
# the minimal character M_p


@dataclass
class MinimalTrace:
    """Bookkeeping from one run of the minimal-character construction."""

    steps: list[tuple[Weight, int]] = field(default_factory=list)
    ties: int = 0
    contentions: int = 0


def minimal_character(
    lam: Weight,
    ctx: AffineContext,
    rng: random.Random | None = None,
    trace: MinimalTrace | None = None,
) -> OrbitCharacter:
    """M_p(lam): grow s(lam) by orbit sums over the down-set until Steinberg multiplication is good.

    Weights of the down-set are settled one at a time, each maximal among
    the unsettled ones.  By default the choice is by height then
    lexicographic; with ``rng`` a random maximal weight is taken instead.
    The coefficient put on s(mu) is -x_mu, where x_mu is the least current
    coefficient of chi((p-1)rho + p gamma + w mu) over gamma in X_m and
    those w in W for which that weight is already dominant.  Terms that only
    reach a Weyl character after straightening do not enter the minimum;
    taking them too over-corrects (it doubles some coefficients of M_p(4,4,4)
    in A3 at p = 5).
    """
    rs = ctx.rs
    lam = tuple(lam)
    if min(lam) < 0:
        raise ValueError(f"{lam} is not dominant")
    psi = up_down_set(lam, ctx)
    m = pairing(lam, rs.highest_coroot) // ctx.p + 1
    tg = _Targets(ctx, m, lam)

    order = sorted(psi, key=lambda mu: (-rs.scaled_height(mu), tuple(-a for a in mu)))
    data = {mu: tg.of(mu) for mu in order}
    all_keys, inverse = np.unique(np.concatenate([data[mu][0] for mu in order]), return_inverse=True)
    inverse = inverse.reshape(-1)
    index = {}
    start = 0
    for mu in order:
        size = len(data[mu][0])
        index[mu] = inverse[start : start + size]
        start += size
    product = np.zeros(len(all_keys), dtype=np.int64)

    coeffs = {lam: 1}
    product[index[lam]] += data[lam][1]
    unsettled = [mu for mu in order if mu != lam]
    while unsettled:
        if rng is None:
            mu = unsettled[0]
            maximal = None
        else:
            maximal = [a for a in unsettled if not any(b != a and dominance_leq(rs, a, b) for b in unsettled)]
            mu = rng.choice(maximal)
        if trace is not None:
            if maximal is None:
                maximal = [a for a in unsettled if not any(b != a and dominance_leq(rs, a, b) for b in unsettled)]
            if len(maximal) > 1:
                trace.ties += 1
                trace.contentions += _contending(mu, maximal, data, index)
        direct = index[mu][data[mu][2]]
        x = int(product[direct].min()) if direct.size else 0
        if x >= 0:
            raise AlgorithmError(f"x_mu = {x} is not negative at mu = {mu} for lambda = {lam}")
        coeffs[mu] = -x
        product[index[mu]] += -x * data[mu][1]
        unsettled.remove(mu)
        if trace is not None:
            trace.steps.append((mu, x))
    if product.min(initial=0) < 0:
        raise AlgorithmError(f"M_p{lam} fails the Steinberg product check on X_{m}")
    return OrbitCharacter(rs, coeffs)


def _contending(mu, maximal, data, index) -> int:
    """How many other maximal weights share a direct target with mu."""
    own = set(index[mu][data[mu][2]].tolist())
    count = 0
    for other in maximal:
        if other != mu and own.intersection(index[other][data[other][2]].tolist()):
            count += 1
    return count


# ---------------------------------------------------------------------------
# quantum Steinberg quotients


def t_zeta(
    lam: Weight,
    ctx: AffineContext,
    table: KLTable | None = None,
    convention: str = "w0",
) -> OrbitCharacter:
    """t_zeta(lam) from the simple characters, for p > h and lam - rho p-regular.

    Writing lam = lam0 + p lam1 with lam0 restricted, the restricted factor is
    sum over mu of |d(mu - rho, lam0 - rho)| s(mu) and the result is that
    factor times the Frobenius twist of chi(lam1).  For lam in pX the restricted
    factor is t_zeta(0) = s(0).
    """
    rs = ctx.rs
    p = ctx.p
    lam = tuple(lam)
    if min(lam) < 0:
        raise ValueError(f"{lam} is not dominant")
    ctx.require_lcf()
    lam1 = tuple(a // p for a in lam)
    lam0 = tuple(a % p for a in lam)
    twist = frobenius_twist(freudenthal(rs, lam1), p)
    if not any(lam0):
        return twist
    shifted = tuple(a - 1 for a in lam)
    if not is_p_regular(ctx, shifted):
        raise ValueError(f"{format_weight(lam)} - rho is p-singular for p={p}")
    if table is None:
        table = KLTable(rs, "spherical" if convention == "w0" else "regular")
    simple = simple_character(tuple(a - 1 for a in lam0), ctx, table, convention=convention)
    restricted = OrbitCharacter(rs, {tuple(a + 1 for a in nu): abs(d) for nu, d in simple.items()})
    if not any(lam1):
        return restricted
    return orbit_product(restricted, twist)


def steinberg_quotient_divide(f: FullCharacter, ctx: AffineContext) -> OrbitCharacter:
    """f / chi((p-1)rho) in the orbit basis."""
    rs = ctx.rs
    st = expand(freudenthal(rs, steinberg_weight(ctx)))
    return to_orbit(divide_exact(f, st))


# ---------------------------------------------------------------------------
# comparison


@dataclass(frozen=True)
class SteinbergReport:
    lam: Weight
    p: int
    type_label: str
    rows: tuple[tuple[Weight, int, int], ...]
    agrees: bool

    def differences(self) -> list[tuple[Weight, int, int]]:
        return [r for r in self.rows if r[1] != r[2]]

    def to_csv(self) -> str:
        buf = io.StringIO()
        out = csv.writer(buf, lineterminator="\n")
        out.writerow(["weight", "t_zeta", "m_p", "diff"])
        for mu, t, mp in self.rows:
            out.writerow([format_weight(mu), t, mp, t - mp])
        return buf.getvalue()


def compare(
    lam: Weight,
    ctx: AffineContext,
    table: KLTable | None = None,
    t_char: OrbitCharacter | None = None,
    m_char: OrbitCharacter | None = None,
) -> SteinbergReport:
    """Row-by-row comparison of t_zeta(lam) and M_p(lam) over the down-set of lam."""
    rs = ctx.rs
    lam = tuple(lam)
    if t_char is None:
        t_char = t_zeta(lam, ctx, table)
    if m_char is None:
        m_char = minimal_character(lam, ctx)
    psi = up_down_set(lam, ctx)
    extra = (t_char.support() | m_char.support()) - psi
    if extra:
        raise AlgorithmError(f"support outside the down-set: {sorted(extra)}")
    order = sorted(psi, key=lambda mu: (-rs.scaled_height(mu), mu))
    rows = tuple((mu, t_char[mu], m_char[mu]) for mu in order)
    return SteinbergReport(lam, ctx.p, rs.name, rows, all(t == m for _, t, m in rows))


def steinberg_product_is_good(eta: OrbitCharacter, ctx: AffineContext, gamma: Weight) -> bool:
    """Good-filtration test of eta * chi((p-1)rho + p gamma) for a single gamma."""
    from .charring import is_good_filtration, multiply_orbit_by_weyl

    base = tuple(ctx.p - 1 + ctx.p * g for g in gamma)
    return is_good_filtration(multiply_orbit_by_weyl(eta, base))

