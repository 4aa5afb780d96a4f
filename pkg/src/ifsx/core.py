"""Similitudes, iterated function systems and their algebra.

Map indices and word symbols are 1-based throughout the public API, so a
word ``(2, 3)`` addresses the cylinder ``phi_2(phi_3(E))``.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from mpmath import iv

from . import scalar as sc
from .errors import (
    BudgetExceeded,
    DimensionMismatch,
    NonContractingError,
    ValidationError,
)

Word = tuple  # tuple[int, ...], symbols in 1..N

DEFAULT_ORTHOGONALITY_TOL = Fraction(1, 10**12)
DEFAULT_HOMOGENEITY_TOL = Fraction(1, 10**9)
DEFAULT_DIMENSION_TOL = Fraction(1, 10**12)

SIGNED_PERMUTATION = "signed-permutation"
RATIONAL_ORTHOGONAL = "rational-orthogonal"
INTERVAL_ORTHOGONAL = "interval-orthogonal"


def _mode_of(values) -> str:
    return sc.INTERVAL if any(sc.is_interval(v) for v in values) else sc.EXACT


def _signed_permutation_shape(rows) -> bool:
    d = len(rows)
    for r in range(d):
        nonzero = [c for c in range(d) if not sc.is_zero(rows[r][c])]
        if len(nonzero) != 1:
            return False
        v = rows[r][nonzero[0]]
        if not (sc.is_zero(v - 1) or sc.is_zero(v + 1)):
            return False
    for c in range(d):
        if sum(1 for r in range(d) if not sc.is_zero(rows[r][c])) != 1:
            return False
    return True


def _gram_defect(rows) -> Fraction:
    """Upper bound on max |(M^T M - I)_{ab}|."""
    d = len(rows)
    worst = Fraction(0)
    for a in range(d):
        for b in range(d):
            s = 0
            for r in range(d):
                s = s + rows[r][a] * rows[r][b]
            if a == b:
                s = s - 1
            worst = max(worst, abs(sc.lo(s)), abs(sc.hi(s)))
    return worst


@dataclass(frozen=True)
class OrthogonalMap:
    """A d x d orthogonal matrix with exact or interval entries."""

    rows: tuple
    kind: str
    tol: Fraction = Fraction(0)

    @classmethod
    def from_rows(cls, rows, mode: str = sc.EXACT, tol=DEFAULT_ORTHOGONALITY_TOL):
        rows = tuple(tuple(sc.convert(v, mode) for v in row) for row in rows)
        d = len(rows)
        if d == 0 or any(len(row) != d for row in rows):
            raise ValidationError("orthogonal part must be a non-empty square matrix")
        return cls._classified(rows, mode, Fraction(tol), check=True)

    @classmethod
    def _classified(cls, rows, mode, tol, check):
        if _signed_permutation_shape(rows):
            return cls(rows, SIGNED_PERMUTATION)
        defect = _gram_defect(rows)
        if mode == sc.EXACT:
            if defect != 0:
                raise ValidationError("matrix is not orthogonal (M^T M != I)")
            return cls(rows, RATIONAL_ORTHOGONAL)
        if check and defect > tol:
            raise ValidationError(
                f"matrix is not orthogonal within {float(tol):.3g} (defect {float(defect):.3g})"
            )
        return cls(rows, INTERVAL_ORTHOGONAL, defect)

    @classmethod
    def identity(cls, d: int, mode: str = sc.EXACT):
        one, zero = sc.convert(1, mode), sc.convert(0, mode)
        rows = tuple(tuple(one if r == c else zero for c in range(d)) for r in range(d))
        return cls(rows, SIGNED_PERMUTATION)

    @classmethod
    def rotation(cls, angle, reflect: bool = False):
        """Planar rotation by ``angle`` radians, enclosed in interval mode."""
        t = sc.to_interval(angle)
        c, s = iv.cos(t), iv.sin(t)
        rows = ((c, -s), (s, c)) if not reflect else ((c, s), (s, -c))
        return cls._classified(rows, sc.INTERVAL, DEFAULT_ORTHOGONALITY_TOL, check=True)

    @property
    def dimension(self) -> int:
        return len(self.rows)

    @property
    def mode(self) -> str:
        return _mode_of(v for row in self.rows for v in row)

    def apply(self, vec):
        if self.kind == SIGNED_PERMUTATION and self.mode == sc.EXACT:
            out = []
            for row in self.rows:
                for c, v in enumerate(row):
                    if v:
                        out.append(vec[c] if v > 0 else -vec[c])
                        break
            return tuple(out)
        out = []
        for row in self.rows:
            s = 0
            for m, x in zip(row, vec):
                s = s + m * x
            out.append(s)
        return tuple(out)

    def transpose(self) -> "OrthogonalMap":
        d = self.dimension
        rows = tuple(tuple(self.rows[c][r] for c in range(d)) for r in range(d))
        return OrthogonalMap(rows, self.kind, self.tol)

    def __matmul__(self, other: "OrthogonalMap") -> "OrthogonalMap":
        d = self.dimension
        if other.dimension != d:
            raise DimensionMismatch("orthogonal maps of different dimension")
        rows = []
        for r in range(d):
            row = []
            for c in range(d):
                s = 0
                for k in range(d):
                    s = s + self.rows[r][k] * other.rows[k][c]
                row.append(s)
            rows.append(tuple(row))
        rows = tuple(rows)
        mode = sc.INTERVAL if sc.INTERVAL in (self.mode, other.mode) else sc.EXACT
        if self.kind == SIGNED_PERMUTATION and other.kind == SIGNED_PERMUTATION:
            return OrthogonalMap(rows, SIGNED_PERMUTATION)
        return OrthogonalMap._classified(rows, mode, DEFAULT_ORTHOGONALITY_TOL, check=False)

    def is_identity(self) -> bool:
        d = self.dimension
        return all(
            sc.is_zero(self.rows[r][c] - (1 if r == c else 0)) for r in range(d) for c in range(d)
        )


@dataclass(frozen=True)
class Similitude:
    """The contraction ``x -> ratio * orthogonal(x) + translation``."""

    ratio: object
    orthogonal: OrthogonalMap
    translation: tuple

    def __post_init__(self):
        if self.orthogonal.dimension != len(self.translation):
            raise DimensionMismatch("orthogonal part and translation disagree on dimension")
        if not (sc.lo(self.ratio) > 0 and sc.hi(self.ratio) < 1):
            raise NonContractingError(f"ratio {self.ratio} is not certifiably inside (0, 1)")

    @classmethod
    def make(cls, ratio, translation, orthogonal=None, mode: str = sc.EXACT):
        """Build a similitude from plain numbers or rational strings."""
        translation = tuple(sc.convert(t, mode) for t in translation)
        if orthogonal is None:
            orthogonal = OrthogonalMap.identity(len(translation), mode)
        elif not isinstance(orthogonal, OrthogonalMap):
            orthogonal = OrthogonalMap.from_rows(orthogonal, mode)
        return cls(sc.convert(ratio, mode), orthogonal, translation)

    @property
    def dimension(self) -> int:
        return len(self.translation)

    @property
    def mode(self) -> str:
        if sc.is_interval(self.ratio) or self.orthogonal.mode == sc.INTERVAL:
            return sc.INTERVAL
        return _mode_of(self.translation)

    def __call__(self, x):
        return apply_map(self, x)

    def __str__(self):
        if self.dimension == 1 and self.mode == sc.EXACT:
            sign = "" if self.orthogonal.rows[0][0] > 0 else "-"
            return f"{sign}{self.ratio}*x + {self.translation[0]}"
        return f"Similitude(ratio={self.ratio}, translation={self.translation})"


def _check_point(f: Similitude, x) -> tuple:
    x = tuple(x)
    if len(x) != f.dimension:
        raise DimensionMismatch(f"point of dimension {len(x)} for a map on R^{f.dimension}")
    return x


def apply_map(f: Similitude, x) -> tuple:
    x = _check_point(f, x)
    rx = f.orthogonal.apply(x)
    return tuple(f.ratio * v + a for v, a in zip(rx, f.translation))


def compose_similitudes(f: Similitude, g: Similitude) -> Similitude:
    """Return f o g."""
    if f.dimension != g.dimension:
        raise DimensionMismatch("cannot compose maps on different spaces")
    return Similitude(f.ratio * g.ratio, f.orthogonal @ g.orthogonal, apply_map(f, g.translation))


def left_quotient(f: Similitude, g: Similitude) -> Similitude:
    """Return f^{-1} o g; rejected unless it is a contraction."""
    if f.dimension != g.dimension:
        raise DimensionMismatch("cannot divide maps on different spaces")
    if not sc.hi(g.ratio) < sc.lo(f.ratio):
        raise NonContractingError("quotient f^-1 o g does not contract (ratio_g >= ratio_f)")
    rt = f.orthogonal.transpose()
    diff = tuple(a - b for a, b in zip(g.translation, f.translation))
    shift = tuple(v / f.ratio for v in rt.apply(diff))
    return Similitude(g.ratio / f.ratio, rt @ g.orthogonal, shift)


def fixed_point(f: Similitude) -> tuple:
    """Unique fixed point of a contraction.

    Exact mode solves (I - rho R) x = a by Gaussian elimination over the
    rationals. Interval mode returns a box enclosing the fixed point, built
    from a float approximation and the contraction estimate
    ``|x* - f(x0)| <= rho |f(x0) - x0| / (1 - rho)``.
    """
    d = f.dimension
    if f.mode == sc.EXACT:
        m = [[(1 if r == c else 0) - f.ratio * f.orthogonal.rows[r][c] for c in range(d)]
             + [f.translation[r]] for r in range(d)]
        return tuple(_solve(m))
    x0 = tuple(float(sc.midpoint(v)) for v in f.translation)
    for _ in range(200):
        nxt = tuple(float(sc.midpoint(v)) for v in apply_map(f, x0))
        if nxt == x0:
            break
        x0 = nxt
    x0 = tuple(sc.to_interval(v) for v in x0)
    y = apply_map(f, x0)
    step = sc.norm_hi(tuple(a - b for a, b in zip(y, x0)))
    rho_hi = sc.hi(f.ratio)
    err = step * rho_hi / (1 - rho_hi)
    e = sc.to_interval(err)
    return tuple(v + iv.mpf([-e.b, e.b]) for v in y)


def _solve(m):
    """Gauss-Jordan on an augmented rational matrix; matrix must be regular."""
    d = len(m)
    m = [list(row) for row in m]
    for col in range(d):
        piv = next(r for r in range(col, d) if m[r][col] != 0)
        m[col], m[piv] = m[piv], m[col]
        p = m[col][col]
        m[col] = [v / p for v in m[col]]
        for r in range(d):
            if r != col and m[r][col] != 0:
                factor = m[r][col]
                m[r] = [a - factor * b for a, b in zip(m[r], m[col])]
    return [m[r][d] for r in range(d)]


# -- systems ------------------------------------------------------------------

@dataclass(frozen=True)
class SimilarityDimension:
    """The similarity dimension s with a certified enclosure.

    For a homogeneous system the value is kept symbolically as the pair
    (count, ratio), which makes ``ratio**s == 1/count`` an exact identity.
    """

    lower: Fraction
    upper: Fraction
    count: int | None = None
    ratio: object = None

    @property
    def homogeneous(self) -> bool:
        return self.count is not None

    @property
    def value(self) -> float:
        return float((self.lower + self.upper) / 2)

    @property
    def radius(self) -> Fraction:
        return (self.upper - self.lower) / 2

    @property
    def is_exact(self) -> bool:
        return self.lower == self.upper

    def weight(self, ratio):
        """ratio**s; exact 1/N in the homogeneous case, an enclosure otherwise."""
        if self.homogeneous:
            return Fraction(1, self.count)
        s = iv.mpf([sc.to_interval(self.lower).a, sc.to_interval(self.upper).b])
        return sc.to_interval(ratio) ** s

    def symbolic(self) -> str:
        if self.is_exact:
            return sc.format_rational(self.lower)
        if self.homogeneous and not sc.is_interval(self.ratio):
            return f"log({self.count})/log({sc.format_rational(1 / Fraction(self.ratio))})"
        return f"{self.value:.12g}"

    def __str__(self):
        return f"{self.symbolic()} ~ {self.value:.6f}"


def _integer_root(n: int, k: int) -> int | None:
    r = round(n ** (1.0 / k))
    for c in (r - 1, r, r + 1):
        if c > 0 and c**k == n:
            return c
    return None


def _exact_log_ratio(n: int, m: int) -> Fraction | None:
    """Rational log(n)/log(m) when n, m are powers of one integer base."""
    if n < 2 or m < 2:
        return None
    for a in range(1, n.bit_length() + 1):
        base = _integer_root(n, a)
        if base is None or base < 2:
            continue
        b = 0
        t = m
        while t % base == 0:
            t //= base
            b += 1
        if t == 1 and b > 0:
            return Fraction(a, b)
    return None


class IFS:
    """An ordered family of N >= 2 similitudes on R^d.

    ``labels`` records for every map the word over the generating system it
    came from (plain systems use ``(i,)``); ``provenance`` records, for a
    composition ``Phi o Psi``, the pair (i, j) behind each composite map.
    ``osc`` carries the open set condition as an attribute: ``"declared"``,
    ``"witnessed"``, ``"ssc"``, ``"inherited"`` or None.
    """

    def __init__(self, maps: Sequence[Similitude], labels=None, provenance=None,
                 osc: str | None = None, name: str | None = None):
        maps = tuple(maps)
        if len(maps) < 2:
            raise ValidationError(f"an IFS needs at least two maps, got {len(maps)}")
        d = maps[0].dimension
        if any(f.dimension != d for f in maps):
            raise DimensionMismatch("all maps of an IFS must act on the same space")
        self.maps = maps
        self.labels = tuple(tuple(l) for l in labels) if labels is not None else tuple(
            (i,) for i in range(1, len(maps) + 1))
        if len(self.labels) != len(maps):
            raise ValidationError("one label per map required")
        self.provenance = tuple(provenance) if provenance is not None else None
        self.osc = osc
        self.name = name

    @classmethod
    def from_maps(cls, specs: Iterable, mode: str = sc.EXACT, **kw) -> "IFS":
        """Build from ``(ratio, translation[, orthogonal])`` tuples."""
        maps = []
        for spec in specs:
            ratio, translation, *rest = spec
            if not isinstance(translation, (tuple, list)):
                translation = (translation,)
            maps.append(Similitude.make(ratio, translation, rest[0] if rest else None, mode))
        return cls(maps, **kw)

    def __len__(self):
        return len(self.maps)

    def __getitem__(self, i: int) -> Similitude:
        """1-based access."""
        if not 1 <= i <= len(self.maps):
            raise IndexError(f"map index {i} outside 1..{len(self.maps)}")
        return self.maps[i - 1]

    def __iter__(self):
        return iter(self.maps)

    def __eq__(self, other):
        return isinstance(other, IFS) and self.maps == other.maps

    def __hash__(self):
        return hash(self.maps)

    def __repr__(self):
        name = f" {self.name}" if self.name else ""
        return f"<IFS{name}: {len(self)} maps on R^{self.dimension}, {self.mode}>"

    @property
    def dimension(self) -> int:
        return self.maps[0].dimension

    @functools.cached_property
    def mode(self) -> str:
        return sc.INTERVAL if any(f.mode == sc.INTERVAL for f in self.maps) else sc.EXACT

    @property
    def ratios(self) -> tuple:
        return tuple(f.ratio for f in self.maps)

    @functools.cached_property
    def is_homogeneous(self) -> bool:
        rs = self.ratios
        if self.mode == sc.EXACT:
            return all(r == rs[0] for r in rs)
        lo_max = max(sc.lo(r) for r in rs)
        hi_min = min(sc.hi(r) for r in rs)
        widest = max(sc.width(r) for r in rs)
        return lo_max <= hi_min and widest <= DEFAULT_HOMOGENEITY_TOL

    @property
    def common_ratio(self):
        if not self.is_homogeneous:
            raise ValidationError("system is not homogeneous")
        return self.maps[0].ratio

    @property
    def max_ratio_hi(self) -> Fraction:
        return max(sc.hi(r) for r in self.ratios)

    @functools.cached_property
    def dimension_info(self) -> SimilarityDimension:
        return similarity_dimension(self)

    def weights(self) -> tuple:
        """rho_i**s for every map."""
        s = self.dimension_info
        return tuple(s.weight(r) for r in self.ratios)

    def with_attributes(self, **kw) -> "IFS":
        attrs = dict(labels=self.labels, provenance=self.provenance, osc=self.osc, name=self.name)
        attrs.update(kw)
        return IFS(self.maps, **attrs)

    def check_word(self, w) -> tuple:
        w = tuple(w)
        for sym in w:
            if not isinstance(sym, int) or not 1 <= sym <= len(self.maps):
                raise ValidationError(f"word symbol {sym!r} outside 1..{len(self.maps)}")
        return w

    def label(self, i: int) -> str:
        return ".".join(str(v) for v in self.labels[i - 1])


def cylinder_map(ifs: IFS, w) -> Similitude:
    """phi_{w1} o ... o phi_{wm}; the empty word is rejected."""
    w = ifs.check_word(w)
    if not w:
        raise ValidationError("empty word: the identity is not a contraction")
    f = ifs[w[0]]
    for sym in w[1:]:
        f = compose_similitudes(f, ifs[sym])
    return f


def ifs_compose(phi: IFS, psi: IFS, osc: str | None = None) -> IFS:
    """All phi_i o psi_j in lexicographic (i, j) order."""
    if phi.dimension != psi.dimension:
        raise DimensionMismatch("cannot compose systems on different spaces")
    maps, labels, prov = [], [], []
    for i, f in enumerate(phi.maps, 1):
        for j, g in enumerate(psi.maps, 1):
            maps.append(compose_similitudes(f, g))
            labels.append(phi.labels[i - 1] + psi.labels[j - 1])
            prov.append((i, j))
    return IFS(maps, labels=labels, provenance=prov, osc=osc)


def ifs_power(phi: IFS, k: int, max_maps: int | None = None) -> IFS:
    """Phi^k = Phi o Phi^(k-1); the open set condition carries over."""
    if not isinstance(k, int) or k < 1:
        raise ValidationError(f"power must be a positive integer, got {k!r}")
    if max_maps is not None and len(phi) ** k > max_maps:
        raise BudgetExceeded(f"{len(phi)}^{k} maps exceed the budget of {max_maps}")
    osc = "inherited" if phi.osc else None
    if k == 1:
        return phi
    result = phi
    for _ in range(k - 1):
        result = ifs_compose(phi, result)
    name = f"{phi.name}^{k}" if phi.name else None
    return result.with_attributes(osc=osc, name=name)


def similarity_dimension(ifs: IFS, tol=DEFAULT_DIMENSION_TOL) -> SimilarityDimension:
    """Certified enclosure of the unique s with sum(rho_i**s) == 1."""
    n = len(ifs)
    if ifs.is_homogeneous:
        rho = ifs.common_ratio
        if not sc.is_interval(rho) and rho.numerator == 1:
            exact = _exact_log_ratio(n, rho.denominator)
            if exact is not None:
                return SimilarityDimension(exact, exact, n, rho)
        with sc.interval_precision(96):
            s = iv.log(iv.mpf(n)) / -iv.log(sc.to_interval(rho))
        return SimilarityDimension(sc.lo(s), sc.hi(s), n, rho)
    return SimilarityDimension(*_bisect_dimension(ifs.ratios, Fraction(tol)))


def _bisect_dimension(ratios, tol: Fraction) -> tuple[Fraction, Fraction]:
    """Bisection on the decreasing map s -> sum(rho_i**s) - 1.

    Midpoints are dyadic rationals and the sign of each evaluation is
    certified by interval arithmetic; an undecidable sign raises the working
    precision, and the enclosure stops shrinking once precision is exhausted.
    """
    n = len(ratios)
    r_min = min(sc.lo(r) for r in ratios)
    r_max = max(sc.hi(r) for r in ratios)
    # s lies between log N / log(1/r_min) and log N / log(1/r_max)
    lower = Fraction(math.floor(math.log(n) / -math.log(r_min) * 2**20) - 1, 2**20)
    upper = Fraction(math.ceil(math.log(n) / -math.log(r_max) * 2**20) + 1, 2**20)
    lower = max(lower, Fraction(0))
    prec = 80
    while upper - lower > tol:
        mid = (lower + upper) / 2
        with sc.interval_precision(prec):
            s = sc.to_interval(mid)
            total = -1
            for r in ratios:
                total = total + sc.to_interval(r) ** s
        if sc.lo(total) > 0:
            lower = mid
        elif sc.hi(total) < 0:
            upper = mid
        elif prec < 400 and not any(sc.is_interval(r) for r in ratios):
            prec *= 2
        else:
            break
    return lower, upper
