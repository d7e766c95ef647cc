"""Exact arithmetic in Z[X]^W and Z[X].

Three finitely supported representations are used:

* :class:`OrbitCharacter` -- coefficients on orbit sums s(mu), mu dominant;
* :class:`WeylCombo` -- coefficients on Weyl characters chi(mu), mu dominant;
* :class:`FullCharacter` -- coefficients on individual weights e(mu).
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Iterable, Mapping

import numpy as np

from .order import dot_dominant_rep, straighten_many
from .rootdata import (
    RootSystem,
    Weight,
    build_root_system,
    dominant_representative,
    dominant_weights_below,
    weyl_orbit,
)

__all__ = [
    "Character",
    "OrbitCharacter",
    "WeylCombo",
    "FullCharacter",
    "NotDivisible",
    "freudenthal",
    "orbit_to_weyl",
    "weyl_to_orbit",
    "brauer_multiply",
    "multiply_orbit_by_weyl",
    "orbit_product",
    "is_good_filtration",
    "frobenius_twist",
    "dual",
    "expand",
    "to_orbit",
    "divide_exact",
    "orbit_sum",
    "weyl_character",
    "to_json",
    "from_json",
]


class NotDivisible(ArithmeticError):
    pass


class Character:
    """Finitely supported map from weights to integers; zero terms are never stored."""

    basis = ""

    __slots__ = ("rs", "terms")

    def __init__(self, rs: RootSystem, terms: Mapping[Weight, int] | Iterable[tuple[Weight, int]] = ()):
        self.rs = rs
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Weight, int] = {}
        for w, c in items:
            w = tuple(int(x) for x in w)
            acc[w] = acc.get(w, 0) + int(c)
        self.terms = {w: c for w, c in acc.items() if c}
        self._validate()

    def _validate(self):
        for w in self.terms:
            if len(w) != self.rs.rank:
                raise ValueError(f"weight {w} has wrong length for {self.rs.name}")

    def _same(self, other):
        if type(other) is not type(self) or other.rs != self.rs:
            raise TypeError(f"cannot combine {type(self).__name__} with {type(other).__name__}")

    def __getitem__(self, w) -> int:
        return self.terms.get(tuple(w), 0)

    def __iter__(self):
        return iter(self.terms)

    def __len__(self):
        return len(self.terms)

    def __bool__(self):
        return bool(self.terms)

    def items(self):
        return self.terms.items()

    def support(self) -> set[Weight]:
        return set(self.terms)

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return self.rs == other.rs and self.terms == other.terms

    def __hash__(self):
        return hash((type(self).__name__, self.rs, frozenset(self.terms.items())))

    def __add__(self, other):
        self._same(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, 0) + c
        return type(self)(self.rs, out)

    def __neg__(self):
        return type(self)(self.rs, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, k: int):
        return type(self)(self.rs, {w: k * c for w, c in self.terms.items()})

    def __rmul__(self, k):
        if isinstance(k, int):
            return self.scale(k)
        return NotImplemented

    def sorted_items(self):
        return sorted(self.terms.items())

    def __repr__(self):
        sym = {"orbit": "s", "weyl": "chi", "full": "e"}[self.basis]
        if not self.terms:
            return f"{type(self).__name__}({self.rs.name}, 0)"
        ordered = sorted(self.terms.items(), key=lambda kv: (-self.rs.scaled_height(kv[0]), kv[0]))
        parts = []
        for w, c in ordered:
            label = f"{sym}({','.join(map(str, w))})"
            parts.append(label if c == 1 else f"{c}*{label}")
        return f"{type(self).__name__}({self.rs.name}, {' + '.join(parts)})"


class _DominantKeyed(Character):
    __slots__ = ()

    def _validate(self):
        super()._validate()
        for w in self.terms:
            if min(w) < 0:
                raise ValueError(f"{type(self).__name__} keys must be dominant, got {w}")


class OrbitCharacter(_DominantKeyed):
    basis = "orbit"
    __slots__ = ()


class WeylCombo(_DominantKeyed):
    basis = "weyl"
    __slots__ = ()


class FullCharacter(Character):
    basis = "full"
    __slots__ = ()

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        self._same(other)
        out: dict[Weight, int] = {}
        for a, ca in self.terms.items():
            for b, cb in other.terms.items():
                w = tuple(x + y for x, y in zip(a, b))
                out[w] = out.get(w, 0) + ca * cb
        return FullCharacter(self.rs, out)


def orbit_sum(rs: RootSystem, mu: Weight, coeff: int = 1) -> OrbitCharacter:
    return OrbitCharacter(rs, {dominant_representative(rs, mu): coeff})


def weyl_character(rs: RootSystem, mu: Weight, coeff: int = 1) -> WeylCombo:
    return WeylCombo(rs, {tuple(mu): coeff})


# ---------------------------------------------------------------------------
# Freudenthal multiplicities


def _dominant_below(rs: RootSystem, lam: Weight) -> list[Weight]:
    return sorted(dominant_weights_below(rs, lam), key=lambda w: -rs.scaled_height(w))


def freudenthal(rs: RootSystem, lam: Weight) -> OrbitCharacter:
    """chi(lam) in the orbit basis, by Freudenthal's recursion."""
    lam = tuple(lam)
    if min(lam) < 0:
        raise ValueError(f"{lam} is not dominant")
    key = ("freudenthal", lam)
    cached = rs.cache.get(key)
    if cached is not None:
        return cached

    rho = rs.rho
    roots = rs.roots_weight_coords
    lr = tuple(a + b for a, b in zip(lam, rho))
    norm_top = rs.form(lr, lr)
    mult: dict[Weight, int] = {lam: 1}
    below = _dominant_below(rs, lam)
    below_set = set(below)
    for mu in below[1:]:
        total = 0
        for alpha in roots:
            k = 1
            while True:
                nu = tuple(a + k * b for a, b in zip(mu, alpha))
                dom = dominant_representative(rs, nu)
                if dom not in below_set:
                    break
                m = mult.get(dom, 0)
                if m:
                    total += m * rs.form(nu, alpha)
                k += 1
        mr = tuple(a + b for a, b in zip(mu, rho))
        denom = norm_top - rs.form(mr, mr)
        value = Fraction(2 * total, denom)
        if value.denominator != 1:
            raise ArithmeticError(f"non-integral Freudenthal multiplicity at {mu}")
        mult[mu] = int(value)
    result = OrbitCharacter(rs, mult)
    rs.cache[key] = result
    return result


def weyl_to_orbit(f: WeylCombo) -> OrbitCharacter:
    rs = f.rs
    out: dict[Weight, int] = {}
    for mu, c in f.items():
        for nu, m in freudenthal(rs, mu).items():
            out[nu] = out.get(nu, 0) + c * m
    return OrbitCharacter(rs, out)


def orbit_to_weyl(eta: OrbitCharacter) -> WeylCombo:
    """Triangular solve: peel off the highest remaining orbit each step."""
    rs = eta.rs
    rest = dict(eta.terms)
    out: dict[Weight, int] = {}
    while rest:
        top = max(rest, key=lambda w: (rs.scaled_height(w), w))
        c = rest[top]
        out[top] = c
        for nu, m in freudenthal(rs, top).items():
            v = rest.get(nu, 0) - c * m
            if v:
                rest[nu] = v
            else:
                rest.pop(nu, None)
    return WeylCombo(rs, out)


# ---------------------------------------------------------------------------
# products


def brauer_multiply(rs: RootSystem, lam: Weight, mu: Weight) -> WeylCombo:
    """chi(lam) s(mu) = sum over the distinct w mu of chi(lam + w mu), straightened."""
    out: dict[Weight, int] = {}
    for sigma in weyl_orbit(rs, mu):
        hit = dot_dominant_rep(rs, tuple(a + b for a, b in zip(lam, sigma)))
        if hit is not None:
            nu, sign = hit
            out[nu] = out.get(nu, 0) + sign
    return WeylCombo(rs, out)


def _orbit_array(rs: RootSystem, mu: Weight) -> np.ndarray:
    key = ("orbit_array", tuple(mu))
    arr = rs.cache.get(key)
    if arr is None:
        arr = np.array(sorted(weyl_orbit(rs, mu)), dtype=np.int64).reshape(-1, rs.rank)
        rs.cache[key] = arr
    return arr


def multiply_orbit_by_weyl(eta: OrbitCharacter, lam: Weight) -> WeylCombo:
    """chi(lam) * eta in the Weyl basis, via Brauer's formula term by term."""
    rs = eta.rs
    if not eta:
        return WeylCombo(rs)
    blocks = []
    weights = []
    for mu, c in eta.items():
        arr = _orbit_array(rs, mu)
        blocks.append(arr)
        weights.append(np.full(len(arr), c, dtype=np.int64))
    shifted = np.concatenate(blocks) + np.array(lam, dtype=np.int64) + 1
    coeffs = np.concatenate(weights)
    dom, sign = straighten_many(rs, shifted)
    keep = sign != 0
    return _accumulate(rs, dom[keep] - 1, coeffs[keep] * sign[keep], WeylCombo)


def _accumulate(rs, rows: np.ndarray, values: np.ndarray, cls):
    if len(rows) == 0:
        return cls(rs)
    uniq, inverse = np.unique(rows, axis=0, return_inverse=True)
    sums = np.zeros(len(uniq), dtype=np.int64)
    np.add.at(sums, inverse.reshape(-1), values)
    nz = sums != 0
    return cls(rs, zip(map(tuple, uniq[nz].tolist()), sums[nz].tolist()))


def orbit_product(a: OrbitCharacter, b: OrbitCharacter) -> OrbitCharacter:
    """Product of two orbit-basis characters, re-expanded in the orbit basis."""
    a._same(b)
    rs = a.rs
    rows = []
    vals = []
    for mu, cm in a.items():
        om = _orbit_array(rs, mu)
        for nu, cn in b.items():
            on = _orbit_array(rs, nu)
            sums = (om[:, None, :] + on[None, :, :]).reshape(-1, rs.rank)
            dom = sums[(sums >= 0).all(axis=1)]
            rows.append(dom)
            vals.append(np.full(len(dom), cm * cn, dtype=np.int64))
    if not rows:
        return OrbitCharacter(rs)
    return _accumulate(rs, np.concatenate(rows), np.concatenate(vals), OrbitCharacter)


def is_good_filtration(f: WeylCombo) -> bool:
    return bool(f.terms) and all(c >= 0 for c in f.terms.values())


def frobenius_twist(eta: Character, p: int) -> Character:
    return type(eta)(eta.rs, {tuple(p * x for x in w): c for w, c in eta.items()})


def dual(eta: Character) -> Character:
    rs = eta.rs
    if isinstance(eta, FullCharacter):
        return FullCharacter(rs, {tuple(-x for x in w): c for w, c in eta.items()})
    # -w0 mu is the dominant conjugate of -mu
    return type(eta)(rs, {dominant_representative(rs, tuple(-x for x in w)): c for w, c in eta.items()})


# ---------------------------------------------------------------------------
# Z[X]: expansion and exact division


def expand(eta: OrbitCharacter | WeylCombo) -> FullCharacter:
    rs = eta.rs
    if isinstance(eta, WeylCombo):
        eta = weyl_to_orbit(eta)
    out: dict[Weight, int] = {}
    for mu, c in eta.items():
        for sigma in weyl_orbit(rs, mu):
            out[sigma] = out.get(sigma, 0) + c
    return FullCharacter(rs, out)


def to_orbit(f: FullCharacter) -> OrbitCharacter:
    """Collapse a W-invariant element of Z[X] to the orbit basis."""
    rs = f.rs
    out = {w: c for w, c in f.items() if min(w) >= 0}
    for mu, c in out.items():
        for sigma in weyl_orbit(rs, mu):
            if f[sigma] != c:
                raise ValueError(f"character is not W-invariant at {sigma}")
    if sum(len(weyl_orbit(rs, mu)) for mu in out) != len(f):
        raise ValueError("character is not W-invariant")
    return OrbitCharacter(rs, out)


def _term_key(rs: RootSystem):
    # additive total order: height first, then lexicographic
    return lambda w: (rs.scaled_height(w), w)


def divide_exact(f: FullCharacter, g: FullCharacter) -> FullCharacter:
    """Return q with f = q * g, by leading-term elimination; raise NotDivisible otherwise."""
    f._same(g)
    if not g:
        raise ZeroDivisionError("division by the zero character")
    rs = f.rs
    key = _term_key(rs)
    g_lead = max(g.terms, key=key)
    g_low = min(g.terms, key=key)
    g_lc = g.terms[g_lead]
    rest = dict(f.terms)
    if not rest:
        return FullCharacter(rs)
    floor = key(tuple(a - b for a, b in zip(min(rest, key=key), g_low)))
    quotient: dict[Weight, int] = {}
    while rest:
        lead = max(rest, key=key)
        c = rest[lead]
        shift = tuple(a - b for a, b in zip(lead, g_lead))
        if c % g_lc or key(shift) < floor:
            raise NotDivisible(f"elimination stalls at e({','.join(map(str, lead))})")
        qc = c // g_lc
        quotient[shift] = qc
        for w, gc in g.terms.items():
            t = tuple(a + b for a, b in zip(shift, w))
            v = rest.get(t, 0) - qc * gc
            if v:
                rest[t] = v
            else:
                rest.pop(t, None)
    return FullCharacter(rs, quotient)


# ---------------------------------------------------------------------------
# JSON


def to_json(eta: Character, p: int | None = None) -> str:
    doc = {
        "type": eta.rs.name,
        "p": p,
        "basis": eta.basis,
        "terms": [{"weight": list(w), "coeff": c} for w, c in eta.sorted_items()],
    }
    return json.dumps(doc)


_BASES = {"orbit": OrbitCharacter, "weyl": WeylCombo, "full": FullCharacter}


def from_json(text: str) -> tuple[Character, int | None]:
    doc = json.loads(text)
    rs = build_root_system(doc["type"])
    cls = _BASES[doc["basis"]]
    return cls(rs, [(tuple(t["weight"]), t["coeff"]) for t in doc["terms"]]), doc.get("p")

