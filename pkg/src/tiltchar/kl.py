"""Affine Weyl group in the alcove model and Kazhdan-Lusztig polynomials.

An element w of W_p is identified with the alcove w C_0.  We work in the
normalized arrangement (p = 1) on shifted coordinates y = nu + rho, where
C_0 = {0 < <y, alpha^vee> < 1}; the alcove coordinates of w are the
integers k_alpha = floor(<c, alpha^vee>) for any interior point c of w C_0.
Each element also carries its affine map y -> M y + b (fundamental-weight
coordinates), which makes right multiplication by generators and the dot
action cheap.

Kazhdan-Lusztig polynomials are computed with the Soergel normalization
h_{x,w} = v^{l(w)-l(x)} P_{x,w}(v^{-2}) by building the self-dual basis of a
right Hecke module one generator at a time:

* the regular module gives P_{x,w} for all x;
* the spherical module (induced from the trivial representation of the
  finite Hecke algebra), indexed by dominant alcoves, gives h_{w0 y, w0 w};
* the antispherical module (induced from the sign representation) gives
  n_{y,w} = sum over z in W of (-v)^{l(z)} h_{zy, w}.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from pathlib import Path

from .order import AffineContext, is_p_regular
from .rootdata import RootSystem, Weight, apply_matrix

__all__ = [
    "AffineElement",
    "AffineWeylGroup",
    "KLTable",
    "affine_group",
    "apply_generator",
    "length",
    "bruhat_leq",
    "kl_polynomial",
    "lcf_simple_d_coefficients",
    "simple_character",
    "weight_to_affine",
    "fundamental_alcove_point",
    "CONVENTIONS",
]

CONVENTIONS = ("w0", "direct")
KINDS = ("regular", "spherical", "antispherical")

Matrix = tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class AffineElement:
    """An element of W_p, identified by its alcove coordinates (one per positive root)."""

    alcove_coords: tuple[int, ...]
    matrix: Matrix = field(compare=False, repr=False)
    translation: tuple[int, ...] = field(compare=False, repr=False)
    group: "AffineWeylGroup" = field(compare=False, repr=False)

    @property
    def length(self) -> int:
        return sum(abs(k) for k in self.alcove_coords)

    def __mul__(self, i: int) -> "AffineElement":
        return self.group.right_mul(self, i)

    def is_dominant(self) -> bool:
        return min(self.alcove_coords) >= 0

    def dot(self, nu: Weight, p: int) -> Weight:
        """w . nu for the arrangement at parameter p."""
        y = apply_matrix(self.matrix, tuple(a + 1 for a in nu))
        return tuple(a + p * b - 1 for a, b in zip(y, self.translation))


def _matmul(a: Matrix, b: Matrix) -> Matrix:
    n = len(a)
    return tuple(tuple(sum(a[r][k] * b[k][c] for k in range(n)) for c in range(n)) for r in range(n))


class AffineWeylGroup:
    """W_p for one root system, with interning and memoized multiplication."""

    def __init__(self, rs: RootSystem):
        self.rs = rs
        n = rs.rank
        self.rank = n
        self.h = rs.coxeter_number
        ident = tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
        gens = []
        for i in range(n):
            cols = [rs.reflect(tuple(int(k == j) for k in range(n)), i) for j in range(n)]
            gens.append((tuple(tuple(cols[j][r] for j in range(n)) for r in range(n)), (0,) * n))
        # s_0: y -> y - (<y, a0v> - 1) a0
        a0v = rs.highest_coroot
        a0 = rs.root_to_weight(rs.highest_short_root)
        m0 = tuple(tuple(int(r == c) - a0[r] * a0v[c] for c in range(n)) for r in range(n))
        self.generators = [(m0, a0)] + gens  # index 0 is the affine generator
        self._elements: dict[tuple[int, ...], AffineElement] = {}
        self._mul: dict[tuple[tuple[int, ...], int], AffineElement] = {}
        self._leq: dict[tuple[tuple[int, ...], tuple[int, ...]], bool] = {}
        self.identity = self._make(ident, (0,) * n)
        self.w0_matrix = self._longest_matrix()

    def __repr__(self):
        return f"AffineWeylGroup({self.rs.name})"

    # -- construction -----------------------------------------------------

    def _coords(self, m: Matrix, b: tuple[int, ...]) -> tuple[int, ...]:
        h = self.h
        point = tuple(x + h * t for x, t in zip(apply_matrix(m, self.rs.rho), b))
        return tuple(sum(c * x for c, x in zip(cv, point)) // h for cv in self.rs.positive_coroots)

    def _make(self, m: Matrix, b: tuple[int, ...]) -> AffineElement:
        coords = self._coords(m, b)
        el = self._elements.get(coords)
        if el is None:
            el = AffineElement(coords, m, tuple(b), self)
            self._elements[coords] = el
        return el

    def element(self, coords) -> AffineElement:
        """Look up an already constructed element by its alcove coordinates."""
        coords = tuple(coords)
        el = self._elements.get(coords)
        if el is None:
            el = self._from_coords(coords)
        return el

    def _from_coords(self, coords) -> AffineElement:
        w = self.identity
        target = tuple(coords)
        while w.alcove_coords != target:
            dist = _distance(w.alcove_coords, target)
            for i in range(self.rank + 1):
                nxt = self.right_mul(w, i)
                if _distance(nxt.alcove_coords, target) < dist:
                    w = nxt
                    break
            else:
                raise ValueError(f"{target} are not consistent alcove coordinates")
        return w

    def _longest_matrix(self) -> Matrix:
        rs = self.rs
        n = rs.rank
        m = tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
        x = rs.rho
        while True:
            for i in range(n):
                if x[i] > 0:
                    x = rs.reflect(x, i)
                    m = _matmul(self.generators[i + 1][0], m)
                    break
            else:
                return m

    # -- group operations -------------------------------------------------

    def right_mul(self, w: AffineElement, i: int) -> AffineElement:
        """w s_i: the alcove across the wall of type i of w C_0."""
        key = (w.alcove_coords, i)
        out = self._mul.get(key)
        if out is None:
            gm, gt = self.generators[i]
            m = _matmul(w.matrix, gm)
            b = tuple(x + y for x, y in zip(apply_matrix(w.matrix, gt), w.translation))
            out = self._mul[key] = self._make(m, b)
        return out

    def left_finite(self, u: Matrix, w: AffineElement) -> AffineElement:
        return self._make(_matmul(u, w.matrix), apply_matrix(u, w.translation))

    def w0_times(self, w: AffineElement) -> AffineElement:
        return self.left_finite(self.w0_matrix, w)

    def from_word(self, word) -> AffineElement:
        w = self.identity
        for i in word:
            w = self.right_mul(w, i)
        return w

    def right_descents(self, w: AffineElement) -> list[int]:
        return [i for i in range(self.rank + 1) if self.right_mul(w, i).length < w.length]

    def bruhat_leq(self, x: AffineElement, w: AffineElement) -> bool:
        """Bruhat order via min(x, x s) <= w s for a right descent s of w."""
        if x.length > w.length:
            return False
        if x == w:
            return True
        if x.length == w.length:
            return False
        key = (x.alcove_coords, w.alcove_coords)
        hit = self._leq.get(key)
        if hit is None:
            s = self.right_descents(w)[0]
            xs = self.right_mul(x, s)
            lower = xs if xs.length < x.length else x
            hit = self.bruhat_leq(lower, self.right_mul(w, s))
            self._leq[key] = hit
        return hit

    def elements_up_to(self, max_length: int, dominant: bool = False) -> list[AffineElement]:
        """All elements (or all dominant ones) of length at most ``max_length``."""
        seen = {self.identity.alcove_coords: self.identity}
        frontier = [self.identity]
        for _ in range(max_length):
            nxt = []
            for w in frontier:
                for i in range(self.rank + 1):
                    u = self.right_mul(w, i)
                    if u.length == w.length + 1 and u.alcove_coords not in seen:
                        if dominant and not u.is_dominant():
                            continue
                        seen[u.alcove_coords] = u
                        nxt.append(u)
            frontier = nxt
        return sorted(seen.values(), key=lambda u: (u.length, u.alcove_coords))

    # -- weights ----------------------------------------------------------

    def alcove_of(self, nu: Weight, p: int) -> tuple[int, ...]:
        """Alcove coordinates of the dot-alcove containing the p-regular weight nu."""
        y = tuple(a + 1 for a in nu)
        return tuple(sum(c * x for c, x in zip(cv, y)) // p for cv in self.rs.positive_coroots)

    def weight_to_affine(self, nu: Weight, p: int) -> AffineElement:
        return self._from_coords(self.alcove_of(nu, p))


def _distance(a, b) -> int:
    return sum(abs(x - y) for x, y in zip(a, b))


def affine_group(rs: RootSystem) -> AffineWeylGroup:
    grp = rs.cache.get("affine_group")
    if grp is None:
        grp = rs.cache["affine_group"] = AffineWeylGroup(rs)
    return grp


def apply_generator(w: AffineElement, i: int) -> AffineElement:
    return w.group.right_mul(w, i)


def length(w: AffineElement) -> int:
    return w.length


def bruhat_leq(x: AffineElement, w: AffineElement) -> bool:
    return w.group.bruhat_leq(x, w)


def weight_to_affine(nu: Weight, ctx: AffineContext) -> AffineElement:
    """The unique w with nu in the dot-alcove w . C_0."""
    if not is_p_regular(ctx, nu):
        raise ValueError(f"{tuple(nu)} is p-singular for p={ctx.p}")
    return affine_group(ctx.rs).weight_to_affine(tuple(nu), ctx.p)


def fundamental_alcove_point(nu: Weight, ctx: AffineContext) -> Weight:
    """The unique weight of C_0 (closure) in the dot-orbit W_p . nu."""
    rs = ctx.rs
    p = ctx.p
    y = tuple(a + 1 for a in nu)
    a0 = rs.root_to_weight(rs.highest_short_root)
    a0v = rs.highest_coroot
    while True:
        for i in range(rs.rank):
            if y[i] < 0:
                y = rs.reflect(y, i)
                break
        else:
            top = sum(c * x for c, x in zip(a0v, y))
            if top > p:
                shift = top - p
                y = tuple(x - shift * r for x, r in zip(y, a0))
                continue
            return tuple(x - 1 for x in y)


# ---------------------------------------------------------------------------
# Laurent polynomials in v, as {exponent: coefficient}


def _padd(acc: dict, poly: dict, scale: int = 1, shift: int = 0):
    for e, c in poly.items():
        k = e + shift
        v = acc.get(k, 0) + scale * c
        if v:
            acc[k] = v
        else:
            acc.pop(k, None)


def h_to_p(h: dict, d: int) -> tuple[int, ...]:
    """Soergel h_{x,w} (with l(w) - l(x) = d) to the coefficient list of P_{x,w}(q)."""
    if not h:
        return ()
    top = max((d - e) // 2 for e in h)
    coeffs = [0] * (top + 1)
    for e, c in h.items():
        if (d - e) % 2:
            raise ValueError("parity mismatch in KL polynomial")
        coeffs[(d - e) // 2] = c
    return tuple(coeffs)


def p_to_h(coeffs, d: int) -> dict:
    return {d - 2 * i: c for i, c in enumerate(coeffs) if c}


def mu_coefficient(coeffs, d: int) -> int:
    """Coefficient of q^{(d-1)/2} in P, zero when d is even."""
    if d % 2 == 0:
        return 0
    i = (d - 1) // 2
    return coeffs[i] if i < len(coeffs) else 0


# ---------------------------------------------------------------------------
# KL tables


_FORMAT = "# kltable v1"


class KLTable:
    """Memoized self-dual basis elements of a right Hecke module over W_p.

    ``kind="regular"``: column w holds P_{x,w} for all x <= w.
    ``kind="spherical"``: keys are dominant alcoves and column w holds
    P_{w0 x, w0 w} for all dominant x.
    ``kind="antispherical"``: keys are dominant alcoves and column w holds
    the antispherical polynomials n_{x,w}.

    With a ``path`` the table is persisted as an append-only text file; each
    record is ``type rank | x-coords | w-coords | coeff list | mu``.  A column
    is written with its diagonal record last, so columns cut short by an
    interrupted write are ignored on load.
    """

    def __init__(self, rs: RootSystem, kind: str = "spherical", path: str | os.PathLike | None = None):
        if kind not in KINDS:
            raise ValueError(f"unknown KL table kind {kind!r}")
        self.rs = rs
        self.kind = kind
        self.group = affine_group(rs)
        self.path = Path(path) if path is not None else None
        self._columns: dict[tuple[int, ...], dict[tuple[int, ...], dict]] = {}
        if self.path is not None and self.path.exists():
            self._load()

    def __len__(self):
        return len(self._columns)

    def __contains__(self, w: AffineElement):
        return w.alcove_coords in self._columns

    # -- persistence --------------------------------------------------------

    def _header(self) -> str:
        return f"{_FORMAT} kind={self.kind}\n"

    def _load(self):
        with open(self.path) as fh:
            header = fh.readline()
            if not header.startswith(_FORMAT):
                raise ValueError(f"{self.path} is not a KL table file")
            if f"kind={self.kind}" not in header:
                raise ValueError(f"{self.path} holds a different kind of KL table")
            pending: dict[tuple[int, ...], dict] = {}
            for line in fh:
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                label, xs, ws, cs, _mu = (part.strip() for part in line.split("|"))
                t, r = label.split()
                if (t, int(r)) != (self.rs.type_label, self.rs.rank):
                    continue
                x = tuple(int(a) for a in xs.split())
                w = tuple(int(a) for a in ws.split())
                coeffs = tuple(int(a) for a in cs.split())
                d = sum(map(abs, w)) - sum(map(abs, x))
                pending.setdefault(w, {})[x] = p_to_h(coeffs, d)
                if x == w:
                    self._columns[w] = pending.pop(w)

    def _append(self, w: tuple[int, ...], column: dict):
        if self.path is None:
            return
        self.path.parent.mkdir(parents=True, exist_ok=True)
        new = not self.path.exists() or self.path.stat().st_size == 0
        lw = sum(map(abs, w))
        lines = []
        for x in sorted(column, key=lambda c: (c == w, c)):
            d = lw - sum(map(abs, x))
            coeffs = h_to_p(column[x], d)
            lines.append(
                f"{self.rs.type_label} {self.rs.rank} | {' '.join(map(str, x))} | "
                f"{' '.join(map(str, w))} | {' '.join(map(str, coeffs))} | {mu_coefficient(coeffs, d)}\n"
            )
        with open(self.path, "a") as fh:
            if new:
                fh.write(self._header())
            fh.writelines(lines)

    # -- computation --------------------------------------------------------

    def _in_module(self, x: AffineElement) -> bool:
        return self.kind == "regular" or x.is_dominant()

    def column(self, w: AffineElement) -> dict[tuple[int, ...], dict]:
        """Self-dual basis element indexed by w, as {x-coords: h_{x,w}}."""
        if not self._in_module(w):
            raise ValueError(f"{w.alcove_coords} is not a dominant alcove")
        key = w.alcove_coords
        col = self._columns.get(key)
        if col is not None:
            return col
        # build bottom-up along a reduced path so recursion stays shallow
        chain = [w]
        while chain[-1].length > 0 and chain[-1].alcove_coords not in self._columns:
            chain.append(chain[-1] * self._descent(chain[-1]))
        for el in reversed(chain):
            if el.alcove_coords not in self._columns:
                self._compute(el)
        return self._columns[key]

    def _descent(self, w: AffineElement) -> int:
        grp = self.group
        for i in range(grp.rank + 1):
            u = w * i
            if u.length < w.length and self._in_module(u):
                return i
        raise AssertionError(f"no admissible descent for {w.alcove_coords}")

    def _compute(self, w: AffineElement):
        grp = self.group
        key = w.alcove_coords
        if w.length == 0:
            col = {key: {0: 1}}
            self._columns[key] = col
            self._append(key, col)
            return
        s = self._descent(w)
        lower = w * s
        base = self.column(lower)
        acc: dict[tuple[int, ...], dict] = {}
        for yc, hy in base.items():
            y = grp.element(yc)
            ys = y * s
            if not self._in_module(ys):
                # ys leaves the dominant region: C_s acts on N_y by v + v^-1
                # (spherical) or by 0 (antispherical)
                if self.kind == "spherical":
                    _padd(acc.setdefault(yc, {}), hy, shift=1)
                    _padd(acc.setdefault(yc, {}), hy, shift=-1)
                continue
            up = ys.length > y.length
            _padd(acc.setdefault(ys.alcove_coords, {}), hy)
            _padd(acc.setdefault(yc, {}), hy, shift=1 if up else -1)
        # subtract constant terms, top to bottom (subtractions only touch shorter elements)
        for L in range(w.length - 1, -1, -1):
            for yc in [c for c in acc if sum(map(abs, c)) == L]:
                c0 = acc[yc].get(0, 0)
                if c0:
                    for zc, hz in self.column(grp.element(yc)).items():
                        _padd(acc.setdefault(zc, {}), hz, scale=-c0)
        col = {yc: hp for yc, hp in acc.items() if hp}
        for yc, hp in col.items():
            if yc != key and min(hp) < 1:
                raise AssertionError(f"KL recursion produced a non-positive power at {yc} below {key}")
        self._columns[key] = col
        self._append(key, col)

    def polynomial(self, x: AffineElement, w: AffineElement) -> tuple[int, ...]:
        """Coefficient list (in q) of the stored polynomial for the pair (x, w)."""
        col = self.column(w)
        h = col.get(x.alcove_coords)
        if h is None:
            return ()
        return h_to_p(h, w.length - x.length)

    def mu(self, x: AffineElement, w: AffineElement) -> int:
        return mu_coefficient(self.polynomial(x, w), w.length - x.length)

    def values_at_one(self, w: AffineElement) -> dict[tuple[int, ...], int]:
        """{x-coords: polynomial evaluated at q = 1} for column w."""
        return {xc: sum(h.values()) for xc, h in self.column(w).items()}

    def warm(self, max_length: int) -> int:
        """Compute every column of length at most ``max_length``; return how many exist."""
        for w in self.group.elements_up_to(max_length, dominant=self.kind != "regular"):
            self.column(w)
        return len(self._columns)


def kl_polynomial(x: AffineElement, w: AffineElement, table: KLTable) -> tuple[int, ...]:
    """P_{x,w} as a coefficient list in q (empty tuple for the zero polynomial).

    With a spherical table the arguments must be maximal in their W-cosets,
    i.e. x = w0 x', w = w0 w' for dominant x', w'.
    """
    if table.kind == "regular":
        return table.polynomial(x, w)
    if table.kind != "spherical":
        raise ValueError("antispherical tables do not store ordinary KL polynomials")
    grp = table.group
    xd, wd = grp.w0_times(x), grp.w0_times(w)
    if not (xd.is_dominant() and wd.is_dominant()):
        raise ValueError("spherical tables only hold pairs of maximal coset representatives")
    return table.polynomial(xd, wd)


def lcf_simple_d_coefficients(
    w: AffineElement,
    ctx: AffineContext,
    table: KLTable,
    base: Weight | None = None,
    convention: str = "w0",
):
    """Weyl-basis expansion of the simple character with highest weight w . base.

    The alternating sum over dominant x of (-1)^{l(w)-l(x)} P(1) chi(x . base);
    ``convention="w0"`` evaluates P_{w0 x, w0 w} (spherical table) and
    ``convention="direct"`` evaluates P_{x, w} (regular table).  ``base``
    defaults to 0 and must lie in the open fundamental alcove.
    """
    from .charring import WeylCombo

    ctx.require_lcf()
    rs = ctx.rs
    if base is None:
        base = rs.zero
    base = tuple(base)
    if not w.is_dominant():
        raise ValueError(f"w . {base} is not dominant")
    if any(not (0 < sum(c * (a + 1) for c, a in zip(cv, base)) < ctx.p) for cv in rs.positive_coroots):
        raise ValueError(f"{base} is not in the open fundamental alcove for p={ctx.p}")
    if convention not in CONVENTIONS:
        raise ValueError(f"unknown LCF convention {convention!r}")
    want = "spherical" if convention == "w0" else "regular"
    if table.kind != want:
        raise ValueError(f"convention {convention!r} needs a {want} KL table")
    grp = table.group
    out = {}
    for xc, value in table.values_at_one(w).items():
        x = grp.element(xc)
        if not x.is_dominant():
            continue
        sign = -1 if (w.length - x.length) % 2 else 1
        out[x.dot(base, ctx.p)] = sign * value
    return WeylCombo(rs, out)


def simple_character(nu: Weight, ctx: AffineContext, table: KLTable, convention: str = "w0"):
    """LCF expansion of the simple character of a p-regular dominant weight nu."""
    w = weight_to_affine(nu, ctx)
    base = fundamental_alcove_point(nu, ctx)
    result = lcf_simple_d_coefficients(w, ctx, table, base=base, convention=convention)
    if tuple(nu) not in result.terms:
        raise AssertionError("translation to the fundamental alcove failed")
    return result
