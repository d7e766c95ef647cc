"""Root systems of the simple types, built from Cartan matrices.

Weights are tuples of integers in the basis of fundamental weights, so the
pairing of a weight with the i-th simple coroot is its i-th coordinate.
Roots are stored in simple-root coordinates and coroots in simple-coroot
coordinates; the j-th simple root in fundamental-weight coordinates is the
j-th column of the Cartan matrix.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import product
from math import lcm

Weight = tuple[int, ...]

__all__ = [
    "Weight",
    "RootSystem",
    "UnsupportedRootSystem",
    "build_root_system",
    "cartan_matrix",
    "parse_type",
    "parse_weight",
    "format_weight",
    "pairing",
    "weyl_orbit",
    "dominant_representative",
    "dominance_leq",
    "dominant_weights_below",
]


class UnsupportedRootSystem(ValueError):
    pass


def cartan_matrix(type_label: str, rank: int) -> tuple[tuple[int, ...], ...]:
    """Cartan matrix with entry ``[i][j] = <alpha_j, alpha_i^vee>`` (Bourbaki numbering)."""
    t = type_label.upper()
    n = rank
    admissible = {
        "A": n >= 1, "B": n >= 2, "C": n >= 2, "D": n >= 4,
        "E": n in (6, 7, 8), "F": n == 4, "G": n == 2,
    }
    if not admissible.get(t, False):
        raise UnsupportedRootSystem(f"unsupported root system {type_label}{rank}")

    c = [[2 if i == j else 0 for j in range(n)] for i in range(n)]

    def link(i, j, a=-1, b=-1):
        # 1-based; c[i][j] = <alpha_j, alpha_i^vee>
        c[i - 1][j - 1] = a
        c[j - 1][i - 1] = b

    if t in "ABC":
        for i in range(1, n):
            link(i, i + 1)
        if t == "B":
            link(n - 1, n, -1, -2)  # alpha_n short
        elif t == "C":
            link(n - 1, n, -2, -1)  # alpha_n long
    elif t == "D":
        for i in range(1, n - 1):
            link(i, i + 1)
        link(n - 2, n)
    elif t == "E":
        link(1, 3)
        link(2, 4)
        for i in range(3, n):
            link(i, i + 1)
    elif t == "F":
        link(1, 2)
        link(2, 3, -1, -2)
        link(3, 4)
    elif t == "G":
        link(1, 2, -3, -1)  # alpha_1 short
    return tuple(tuple(row) for row in c)


_TYPE_RE = re.compile(r"^\s*([A-Ga-g])\s*_?\s*(\d+)\s*$")


def parse_type(label: str) -> tuple[str, int]:
    """``"A3"`` -> ``("A", 3)``."""
    m = _TYPE_RE.match(label)
    if not m:
        raise UnsupportedRootSystem(f"cannot parse root system label {label!r}")
    return m.group(1).upper(), int(m.group(2))


def parse_weight(text: str) -> Weight:
    """Parse the comma-separated weight format, e.g. ``"3,2,3"``."""
    try:
        return tuple(int(part) for part in text.replace(" ", "").strip("()").split(","))
    except ValueError:
        raise ValueError(f"malformed weight {text!r}") from None


def format_weight(weight: Weight) -> str:
    return ",".join(str(a) for a in weight)


@dataclass(frozen=True, eq=False)
class RootSystem:
    """A simple root system together with the data used throughout the package.

    Instances are immutable after construction.  ``cache`` is a scratch
    dictionary for memoized derived data (orbits, characters) and does not
    take part in equality.
    """

    type_label: str
    rank: int
    cartan_matrix: tuple[tuple[int, ...], ...]
    positive_roots: tuple[tuple[int, ...], ...]
    positive_coroots: tuple[tuple[int, ...], ...]
    cache: dict = field(default_factory=dict, repr=False)

    def __eq__(self, other):
        if not isinstance(other, RootSystem):
            return NotImplemented
        return (self.type_label, self.rank) == (other.type_label, other.rank)

    def __hash__(self):
        return hash((self.type_label, self.rank))

    def __reduce__(self):
        return build_root_system, (self.type_label, self.rank)

    @property
    def name(self) -> str:
        return f"{self.type_label}{self.rank}"

    @property
    def rho(self) -> Weight:
        return (1,) * self.rank

    @property
    def zero(self) -> Weight:
        return (0,) * self.rank

    @cached_property
    def simple_roots(self) -> tuple[Weight, ...]:
        """Simple roots in fundamental-weight coordinates (Cartan columns)."""
        n = self.rank
        return tuple(tuple(self.cartan_matrix[i][j] for i in range(n)) for j in range(n))

    @cached_property
    def roots_weight_coords(self) -> tuple[Weight, ...]:
        """Positive roots in fundamental-weight coordinates."""
        return tuple(self.root_to_weight(a) for a in self.positive_roots)

    def root_to_weight(self, root_coords) -> Weight:
        n = self.rank
        return tuple(
            sum(self.cartan_matrix[i][k] * root_coords[k] for k in range(n)) for i in range(n)
        )

    @cached_property
    def highest_coroot(self) -> tuple[int, ...]:
        """alpha_0^vee: the highest coroot, in simple-coroot coordinates."""
        return max(self.positive_coroots, key=sum)

    @property
    def alpha0_coroot(self) -> tuple[int, ...]:
        return self.highest_coroot

    @cached_property
    def highest_short_root(self) -> tuple[int, ...]:
        """alpha_0, the root whose coroot is alpha_0^vee (simple-root coordinates)."""
        return self.positive_roots[self.positive_coroots.index(self.highest_coroot)]

    @cached_property
    def coxeter_number(self) -> int:
        return 2 * len(self.positive_roots) // self.rank

    @cached_property
    def inverse_cartan_scaled(self) -> tuple[int, tuple[tuple[int, ...], ...]]:
        """``(det, det * C^{-1})`` with exact integer entries."""
        n = self.rank
        m = [[Fraction(self.cartan_matrix[i][j]) for j in range(n)] + [Fraction(int(i == j)) for j in range(n)]
             for i in range(n)]
        for col in range(n):
            piv = next(r for r in range(col, n) if m[r][col] != 0)
            m[col], m[piv] = m[piv], m[col]
            pv = m[col][col]
            m[col] = [x / pv for x in m[col]]
            for r in range(n):
                if r != col and m[r][col] != 0:
                    f = m[r][col]
                    m[r] = [a - f * b for a, b in zip(m[r], m[col])]
        inv = [row[n:] for row in m]
        det = lcm(*(x.denominator for row in inv for x in row))
        return det, tuple(tuple(int(x * det) for x in row) for row in inv)

    def to_root_coords(self, weight: Weight) -> tuple[Fraction, ...]:
        """Coordinates of ``weight`` on the simple roots (exact rationals)."""
        det, inv = self.inverse_cartan_scaled
        return tuple(Fraction(sum(inv[i][j] * weight[j] for j in range(self.rank)), det)
                     for i in range(self.rank))

    def height(self, weight: Weight) -> Fraction:
        return sum(self.to_root_coords(weight), Fraction(0))

    def scaled_height(self, weight: Weight) -> int:
        """``det(C) * height(weight)``, an integer; same ordering as ``height``."""
        _, inv = self.inverse_cartan_scaled
        return sum(inv[i][j] * weight[j] for i in range(self.rank) for j in range(self.rank))

    @cached_property
    def symmetrizer(self) -> tuple[int, ...]:
        """Integers d_i proportional to (alpha_i, alpha_i) / 2."""
        n = self.rank
        d: list[Fraction | None] = [None] * n
        d[0] = Fraction(1)
        queue = deque([0])
        while queue:
            i = queue.popleft()
            for j in range(n):
                if j != i and self.cartan_matrix[i][j] != 0 and d[j] is None:
                    # d_i c_ij = d_j c_ji
                    d[j] = d[i] * self.cartan_matrix[i][j] / self.cartan_matrix[j][i]
                    queue.append(j)
        scale = lcm(*(x.denominator for x in d))
        return tuple(int(x * scale) for x in d)

    @cached_property
    def gram(self) -> tuple[tuple[int, ...], ...]:
        """A W-invariant form on weights, scaled to integers: ``(w_i, w_j) ~ d_i (C^{-1})_{ij}``."""
        _, inv = self.inverse_cartan_scaled
        d = self.symmetrizer
        return tuple(tuple(d[i] * inv[i][j] for j in range(self.rank)) for i in range(self.rank))

    def form(self, a: Weight, b: Weight) -> int:
        g = self.gram
        n = self.rank
        return sum(a[i] * g[i][j] * b[j] for i in range(n) for j in range(n))

    def reflect(self, weight: Weight, i: int) -> Weight:
        """Simple reflection s_i(weight) = weight - <weight, alpha_i^vee> alpha_i."""
        c = weight[i]
        if c == 0:
            return weight
        root = self.simple_roots[i]
        return tuple(w - c * r for w, r in zip(weight, root))

    def __repr__(self):
        return f"RootSystem({self.name})"


def _generate_roots(cartan):
    n = len(cartan)
    simple = []
    for i in range(n):
        e = tuple(int(k == i) for k in range(n))
        simple.append((e, e))
    seen = set(simple)
    queue = deque(simple)
    while queue:
        a, c = queue.popleft()
        for j in range(n):
            # <alpha, alpha_j^vee> and <alpha_j, alpha^vee>
            aj = sum(a[k] * cartan[j][k] for k in range(n))
            cj = sum(c[k] * cartan[k][j] for k in range(n))
            na = tuple(x - aj * int(k == j) for k, x in enumerate(a))
            nc = tuple(x - cj * int(k == j) for k, x in enumerate(c))
            if (na, nc) not in seen:
                seen.add((na, nc))
                queue.append((na, nc))
    positive = sorted((a, c) for a, c in seen if all(x >= 0 for x in a))
    positive.sort(key=lambda ac: (sum(ac[0]), ac[0]))
    return tuple(a for a, _ in positive), tuple(c for _, c in positive)


_REGISTRY: dict[tuple[str, int], RootSystem] = {}


def build_root_system(type_label: str, rank: int | None = None) -> RootSystem:
    """Build (or fetch the shared instance of) the root system of a simple type.

    ``type_label`` may carry the rank (``"A3"``) or it may be given separately.
    """
    if rank is None:
        type_label, rank = parse_type(type_label)
    type_label = type_label.upper()
    key = (type_label, rank)
    if key not in _REGISTRY:
        cartan = cartan_matrix(type_label, rank)
        roots, coroots = _generate_roots(cartan)
        _REGISTRY[key] = RootSystem(type_label, rank, cartan, roots, coroots)
    return _REGISTRY[key]


def pairing(weight: Weight, coroot) -> int:
    """<weight, coroot> for a coroot given in simple-coroot coordinates."""
    return sum(c * a for c, a in zip(coroot, weight))


def weyl_orbit(rs: RootSystem, weight: Weight) -> frozenset[Weight]:
    """The W-orbit of ``weight``, by closure under simple reflections."""
    weight = tuple(weight)
    key = ("orbit", dominant_representative(rs, weight))
    orbit = rs.cache.get(key)
    if orbit is None:
        start = key[1]
        seen = {start}
        queue = deque([start])
        while queue:
            w = queue.popleft()
            for i in range(rs.rank):
                if w[i] > 0:  # only walk downwards; the orbit is connected this way
                    v = rs.reflect(w, i)
                    if v not in seen:
                        seen.add(v)
                        queue.append(v)
        orbit = frozenset(seen)
        rs.cache[key] = orbit
    return orbit


def dominant_representative(rs: RootSystem, weight: Weight) -> Weight:
    weight = tuple(weight)
    while True:
        for i, c in enumerate(weight):
            if c < 0:
                weight = rs.reflect(weight, i)
                break
        else:
            return weight


def dominance_leq(rs: RootSystem, mu: Weight, lam: Weight) -> bool:
    """mu <= lam: lam - mu is a non-negative integer combination of simple roots."""
    diff = tuple(a - b for a, b in zip(lam, mu))
    det, inv = rs.inverse_cartan_scaled
    for row in inv:
        s = sum(r * x for r, x in zip(row, diff))
        if s < 0 or s % det:
            return False
    return True


def dominant_weights_below(rs: RootSystem, lam: Weight) -> frozenset[Weight]:
    """Dominant mu with mu <= lam, for dominant lam.

    Every such mu is reached from lam through dominant weights by subtracting
    one positive root at a time.
    """
    lam = tuple(lam)
    key = ("dominant_below", lam)
    found = rs.cache.get(key)
    if found is None:
        roots = rs.roots_weight_coords
        seen = {lam}
        queue = deque([lam])
        while queue:
            mu = queue.popleft()
            for r in roots:
                nu = tuple(a - b for a, b in zip(mu, r))
                if min(nu) >= 0 and nu not in seen:
                    seen.add(nu)
                    queue.append(nu)
        found = rs.cache[key] = frozenset(seen)
    return found


def weyl_group_matrices(rs: RootSystem) -> list[tuple[tuple[tuple[int, ...], ...], int]]:
    """All elements of W as (matrix on fundamental-weight coords, det) pairs.

    Only meant for small ranks (test utility).
    """
    n = rs.rank
    ident = tuple(tuple(int(i == j) for j in range(n)) for i in range(n))

    def refl_matrix(i):
        # s_i(e_k) = e_k - delta_ik alpha_i
        cols = [rs.reflect(tuple(int(k == j) for k in range(n)), i) for j in range(n)]
        return tuple(tuple(cols[j][r] for j in range(n)) for r in range(n))

    gens = [refl_matrix(i) for i in range(n)]

    def mul(a, b):
        return tuple(tuple(sum(a[r][k] * b[k][c] for k in range(n)) for c in range(n)) for r in range(n))

    seen = {ident: 1}
    queue = deque([ident])
    while queue:
        m = queue.popleft()
        for g in gens:
            nm = mul(g, m)
            if nm not in seen:
                seen[nm] = -seen[m]
                queue.append(nm)
    return list(seen.items())


def apply_matrix(m, weight: Weight) -> Weight:
    return tuple(sum(m[r][c] * weight[c] for c in range(len(weight))) for r in range(len(m)))


def restricted_weights(rank: int, m: int):
    """X_m: weights with every coordinate in ``range(m)``."""
    return [tuple(w) for w in product(range(m), repeat=rank)]
