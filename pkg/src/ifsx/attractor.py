"""Certified geometry of attractors: enclosing balls, cylinder covers,
periodic points and branch-and-bound distance bounds.

All enclosures are balls with rational centre and rational radius. In
interval mode the uncertainty of an image centre is folded into the radius,
so every comparison below is an exact rational comparison.
"""
from __future__ import annotations

import functools
import heapq
import itertools
import os
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.spatial import cKDTree

from . import scalar as sc
from .core import IFS, Similitude, apply_map, compose_similitudes, cylinder_map, fixed_point
from .errors import BudgetExceeded, DimensionMismatch, ValidationError

DEFAULT_NODE_BUDGET = 10**6
DEFAULT_DEPTH_CAP = 40


def _env_nodes() -> int:
    raw = os.environ.get("IFSX_BUDGET")
    if raw:
        try:
            return int(raw)
        except ValueError:
            raise ValidationError(f"IFSX_BUDGET must be an integer, got {raw!r}") from None
    return DEFAULT_NODE_BUDGET


@dataclass(frozen=True)
class Budget:
    """Search limits: node expansions, word-length cap and witness search space."""

    nodes: int = field(default_factory=_env_nodes)
    depth: int = DEFAULT_DEPTH_CAP
    witness_preperiod: int = 6
    witness_period: int = 2

    @classmethod
    def coerce(cls, budget) -> "Budget":
        if budget is None:
            return cls()
        if isinstance(budget, Budget):
            return budget
        if isinstance(budget, int):
            return cls(nodes=budget)
        raise TypeError(f"cannot use {budget!r} as a budget")


@dataclass(frozen=True)
class Ball:
    center: tuple
    radius: Fraction

    def __post_init__(self):
        if self.radius < 0:
            raise ValidationError("negative radius")

    @property
    def dimension(self) -> int:
        return len(self.center)


def _enclose(point, radius: Fraction) -> Ball:
    """Ball with rational centre containing the (possibly interval) point
    fattened by ``radius``."""
    if any(sc.is_interval(v) for v in point):
        center = tuple(sc.midpoint(v) for v in point)
        half = tuple(sc.to_interval(sc.width(v) / 2) for v in point)
        return Ball(center, Fraction(radius) + sc.norm_hi(half))
    return Ball(tuple(Fraction(v) for v in point), Fraction(radius))


def _distance_lo(a, b) -> Fraction:
    return sc.norm_lo(tuple(x - y for x, y in zip(a, b)))


def _distance_hi(a, b) -> Fraction:
    return sc.norm_hi(tuple(x - y for x, y in zip(a, b)))


def ball_gap(a: Ball, b: Ball) -> Fraction:
    """Lower bound on the distance between two balls (may be negative)."""
    return _distance_lo(a.center, b.center) - a.radius - b.radius


# -- periodic points -----------------------------------------------------------

def periodic_point(ifs: IFS, preperiod, period) -> tuple:
    """phi_u(fix(phi_w)): exact in exact mode, an enclosing box otherwise."""
    period = ifs.check_word(period)
    preperiod = ifs.check_word(preperiod)
    if not period:
        raise ValidationError("period word must be non-empty")
    x = _fixed_point_of_word(ifs, period)
    if preperiod:
        x = apply_map(cylinder_map(ifs, preperiod), x)
    return x


@functools.lru_cache(maxsize=4096)
def _fixed_point_of_word(ifs: IFS, period: tuple) -> tuple:
    return fixed_point(cylinder_map(ifs, period))


def _words(n: int, length: int):
    return itertools.product(range(1, n + 1), repeat=length)


def period_words(ifs: IFS, max_period: int) -> list:
    """Period words of length 1..max_period, skipping proper powers."""
    out = []
    for length in range(1, max_period + 1):
        for w in _words(len(ifs), length):
            if any(length % p == 0 and w == w[:p] * (length // p) for p in range(1, length)):
                continue
            out.append(w)
    return out


@functools.lru_cache(maxsize=512)
def base_samples(ifs: IFS, max_period: int = 2) -> tuple:
    """(period word, fixed point) for all short period words."""
    return tuple((w, _fixed_point_of_word(ifs, w)) for w in period_words(ifs, max_period))


def periodic_points(ifs: IFS, max_preperiod: int, max_period: int = 2, limit: int | None = None):
    """Distinct periodic points phi_u(fix phi_w) with |u| <= max_preperiod.

    Yields ``(u, w, point)``; exact-mode duplicates are skipped.
    """
    seen = set()
    count = 0
    for plen in range(0, max_preperiod + 1):
        for u in _words(len(ifs), plen):
            f = cylinder_map(ifs, u) if u else None
            for w, p in base_samples(ifs, max_period):
                x = apply_map(f, p) if f is not None else p
                if ifs.mode == sc.EXACT:
                    if x in seen:
                        continue
                    seen.add(x)
                yield u, w, x
                count += 1
                if limit is not None and count >= limit:
                    return


# -- enclosing balls -----------------------------------------------------------

def invariant_ball(ifs: IFS) -> Ball:
    """Ball B(c, R) with phi_i(B) inside B for every i.

    c is the fixed point of the first map (its midpoint in interval mode) and
    R = max_i |phi_i(c) - c| / (1 - rho_max).
    """
    c = fixed_point(ifs.maps[0])
    if ifs.mode == sc.INTERVAL:
        c = tuple(sc.midpoint(v) for v in c)
        c_eval = tuple(sc.to_interval(v) for v in c)
    else:
        c_eval = c
    reach = Fraction(0)
    for f in ifs.maps:
        img = apply_map(f, c_eval)
        reach = max(reach, _distance_hi(img, c_eval))
    denominator = 1 - ifs.max_ratio_hi
    return Ball(tuple(Fraction(v) for v in c), reach / denominator)


def _hull_interval(ifs: IFS):
    """Exact convex hull [a, b] of a 1-D attractor, or None.

    The extremes of E are always of the form phi_u(fix phi_w) with |u| <= 1
    and |w| <= 2; candidates are points of E, so [min, max] lies inside the
    hull, and invariance of [min, max] under every map proves equality.
    """
    pts = [p for _, _, p in periodic_points(ifs, 1, 2)]
    a = min(sc.lo(p[0]) for p in pts)
    b = max(sc.hi(p[0]) for p in pts)
    ia, ib = (a,), (b,)
    if ifs.mode == sc.INTERVAL:
        ia, ib = (sc.to_interval(a),), (sc.to_interval(b),)
    for f in ifs.maps:
        for end in (ia, ib):
            y = apply_map(f, end)[0]
            if sc.lo(y) < a or sc.hi(y) > b:
                return None
    return a, b


@functools.lru_cache(maxsize=512)
def attractor_ball(ifs: IFS) -> Ball:
    """A tight ball containing E (not necessarily invariant).

    1-D systems use the exact convex hull. Otherwise the centre is moved to
    the middle of the bounding box of short periodic points and the radius is
    read off a depth-k cover of the invariant ball.
    """
    base = invariant_ball(ifs)
    if base.radius == 0:
        return base
    if ifs.dimension == 1:
        hull = _hull_interval(ifs)
        if hull is not None:
            a, b = hull
            return Ball(((a + b) / 2,), (b - a) / 2)
    pts = [p for _, _, p in periodic_points(ifs, 1, 2)]
    d = ifs.dimension
    center = tuple(
        (min(sc.lo(p[k]) for p in pts) + max(sc.hi(p[k]) for p in pts)) / 2 for k in range(d))
    depth = 1
    while len(ifs) ** (depth + 1) <= 512:
        depth += 1
    best = Fraction(0)
    for entry in _plain_cover(ifs, base, depth):
        best = max(best, _distance_hi(entry.center, center) + entry.radius)
    if best < base.radius:
        return Ball(center, best)
    return base


def _cylinder_ball(f: Similitude, base: Ball, mode: str) -> Ball:
    c = base.center if mode == sc.EXACT else tuple(sc.to_interval(v) for v in base.center)
    return _enclose(apply_map(f, c), sc.hi(f.ratio) * base.radius)


def _plain_cover(ifs: IFS, base: Ball, depth: int):
    return [_cylinder_ball(cylinder_map(ifs, w), base, ifs.mode) for w in _words(len(ifs), depth)]


# -- covers --------------------------------------------------------------------

@dataclass(frozen=True)
class CylinderCover:
    """Balls enclosing every depth-k cylinder phi_w(E)."""

    depth: int
    base: Ball
    entries: tuple  # ((word, Ball), ...)
    contraction: Fraction

    def __len__(self):
        return len(self.entries)

    @property
    def balls(self):
        return [b for _, b in self.entries]


def refine_cover(ifs: IFS, depth: int, budget=None, tighten: bool = True) -> CylinderCover:
    budget = Budget.coerce(budget)
    if depth < 1:
        raise ValidationError("cover depth must be at least 1")
    if len(ifs) ** depth > budget.nodes:
        raise BudgetExceeded(f"{len(ifs)}^{depth} cylinders exceed the budget of {budget.nodes}")
    base = attractor_ball(ifs) if tighten else invariant_ball(ifs)
    entries = []
    contraction = Fraction(0)
    for w in _words(len(ifs), depth):
        f = cylinder_map(ifs, w)
        contraction = max(contraction, sc.hi(f.ratio))
        entries.append((w, _cylinder_ball(f, base, ifs.mode)))
    return CylinderCover(depth, base, tuple(entries), contraction)


def moran_cover(ifs: IFS, scale: Fraction, budget=None, tighten: bool = True, roots=None):
    """Cylinders cut at the first level where the contraction drops to ``scale``.

    ``roots`` restricts the cover to cylinders below the given words.
    """
    budget = Budget.coerce(budget)
    base = attractor_ball(ifs) if tighten else invariant_ball(ifs)
    out = []
    if roots is None:
        roots = [(i,) for i in range(1, len(ifs) + 1)]
    stack = [(tuple(w), cylinder_map(ifs, w)) for w in reversed(list(roots))]
    while stack:
        w, f = stack.pop()
        if sc.hi(f.ratio) <= scale or len(w) >= budget.depth:
            out.append((w, _cylinder_ball(f, base, ifs.mode)))
            if len(out) > budget.nodes:
                raise BudgetExceeded(f"cover at scale {float(scale):.3g} exceeds {budget.nodes} cylinders")
            continue
        for i in range(len(ifs), 0, -1):
            stack.append((w + (i,), compose_similitudes(f, ifs.maps[i - 1])))
    return base, out


# -- branch and bound ----------------------------------------------------------

@dataclass(frozen=True)
class DistanceBounds:
    """lower <= dist <= upper, with an exact witness when upper is 0."""

    lower: Fraction
    upper: Fraction | None
    depth: int
    nodes: int
    witness: tuple | None = None  # (point, (side_a_u, side_a_w), (side_b_u, side_b_w))

    @property
    def disjoint(self) -> bool:
        return self.lower > 0

    @property
    def intersecting(self) -> bool:
        return self.witness is not None


class _Piece:
    """One cylinder phi_w(E) of one system, or a single point."""

    __slots__ = ("ifs", "word", "map", "ball", "_samples")

    def __init__(self, ifs, word, f, ball):
        self.ifs = ifs
        self.word = word
        self.map = f
        self.ball = ball
        self._samples = None

    @classmethod
    def cylinder(cls, ifs, word, base):
        f = cylinder_map(ifs, word)
        return cls(ifs, word, f, _cylinder_ball(f, base, ifs.mode))

    @classmethod
    def point(cls, x):
        return cls(None, (), None, _enclose(x, Fraction(0)))

    def can_split(self, cap, base) -> bool:
        if self.ifs is None or len(self.word) >= cap:
            return False
        # once rounding dominates the ball, children stop shrinking
        return self.ball.radius <= 2 * sc.hi(self.map.ratio) * base.radius or base.radius == 0

    def children(self, base):
        out = []
        for i, g in enumerate(self.ifs.maps, 1):
            f = compose_similitudes(self.map, g)
            out.append(_Piece(self.ifs, self.word + (i,), f, _cylinder_ball(f, base, self.ifs.mode)))
        return out

    def representative(self):
        if self.ifs is None:
            return self.ball.center
        return apply_map(self.map, base_samples(self.ifs, 1)[0][1])

    def samples(self, max_period):
        """{exact point: period word} for phi_word(fix phi_w)."""
        if self._samples is None:
            if self.ifs is None:
                self._samples = {self.ball.center: None}
            else:
                self._samples = {}
                for w, p in base_samples(self.ifs, max_period):
                    self._samples.setdefault(apply_map(self.map, p), w)
        return self._samples


def _bnb(pairs, bases, budget: Budget, gap_tol=None, exact=True):
    """Best-first search over pairs of pieces ordered by (ball gap, words)."""
    heap = []
    counter = itertools.count()

    def push(gap, a, b):
        heapq.heappush(heap, (gap, a.word, b.word, next(counter), a, b))

    upper = None
    witness = None
    stuck = None
    expanded = 0
    reached = 0
    for a, b in pairs:
        push(ball_gap(a.ball, b.ball), a, b)

    def current_lower():
        cands = [heap[0][0]] if heap else []
        if stuck is not None:
            cands.append(stuck)
        if upper is not None:
            cands.append(upper)
        return max(min(cands), Fraction(0)) if cands else Fraction(0)

    while heap:
        lower = current_lower()
        if upper == 0:
            break
        if gap_tol is None:
            if lower > 0:
                break
        elif upper is not None and upper - lower <= gap_tol:
            break
        if expanded >= budget.nodes:
            break
        gap, _, _, _, a, b = heapq.heappop(heap)
        reached = max(reached, len(a.word), len(b.word))
        d_hi = _distance_hi(a.representative(), b.representative())
        if upper is None or d_hi < upper:
            upper = d_hi
        if exact and gap <= 0 and max(len(a.word), len(b.word)) <= budget.witness_preperiod:
            sa = a.samples(budget.witness_period)
            sb = b.samples(budget.witness_period)
            small, large = (sa, sb) if len(sa) <= len(sb) else (sb, sa)
            hit = next((x for x in small if x in large), None)
            if hit is not None:
                upper = Fraction(0)
                witness = (hit, (a.word, sa[hit]), (b.word, sb[hit]))
                break
        if upper is not None and gap > upper:
            continue
        split_a = a.can_split(budget.depth, bases.get(id(a.ifs)))
        split_b = b.can_split(budget.depth, bases.get(id(b.ifs)))
        if split_a and split_b:
            if b.ball.radius > a.ball.radius:
                split_a = False
            else:
                split_b = False
        if split_a:
            for child in a.children(bases[id(a.ifs)]):
                push(max(ball_gap(child.ball, b.ball), gap), child, b)
        elif split_b:
            for child in b.children(bases[id(b.ifs)]):
                push(max(ball_gap(a.ball, child.ball), gap), a, child)
        else:
            stuck = gap if stuck is None else min(stuck, gap)
            continue
        expanded += 1
    return DistanceBounds(current_lower() if upper != 0 else Fraction(0), upper, reached, expanded, witness)


def _words_arg(ifs: IFS, words):
    out = []
    for w in words:
        if isinstance(w, int):
            w = (w,)
        w = ifs.check_word(w)
        if not w:
            raise ValidationError("empty word in a cylinder set")
        out.append(w)
    if not out:
        raise ValidationError("cylinder set must be non-empty")
    return out


def set_distance(ifs: IFS, A, B, budget=None, gap_tol=None) -> DistanceBounds:
    """Bounds on dist(U_{w in A} phi_w(E), U_{v in B} phi_v(E)).

    Stops at the first certified positive gap (or, with ``gap_tol``, once
    upper - lower <= gap_tol), at an exact witness, or when the budget runs
    out; an exhausted budget yields lower 0 rather than an error.
    """
    return cross_distance(ifs, A, ifs, B, budget, gap_tol)


def cross_distance(ifs_a: IFS, A, ifs_b: IFS, B, budget=None, gap_tol=None) -> DistanceBounds:
    """set_distance between cylinders of two possibly different systems."""
    if ifs_a.dimension != ifs_b.dimension:
        raise DimensionMismatch("systems act on different spaces")
    budget = Budget.coerce(budget)
    A, B = _words_arg(ifs_a, A), _words_arg(ifs_b, B)
    bases = {id(ifs_a): attractor_ball(ifs_a), id(ifs_b): attractor_ball(ifs_b)}
    pa = [_Piece.cylinder(ifs_a, w, bases[id(ifs_a)]) for w in A]
    pb = [_Piece.cylinder(ifs_b, w, bases[id(ifs_b)]) for w in B]
    exact = ifs_a.mode == sc.EXACT and ifs_b.mode == sc.EXACT
    return _bnb([(a, b) for a in pa for b in pb], bases, budget, gap_tol, exact)


def point_distance(ifs: IFS, x, budget=None, gap_tol=None) -> DistanceBounds:
    """Bounds on dist(x, E) for an exact point x."""
    budget = Budget.coerce(budget)
    base = attractor_ball(ifs)
    bases = {id(ifs): base}
    pieces = [_Piece.cylinder(ifs, (i,), base) for i in range(1, len(ifs) + 1)]
    px = _Piece.point(tuple(x))
    return _bnb([(px, p) for p in pieces], bases, budget, gap_tol, ifs.mode == sc.EXACT)


# -- diameter, Hausdorff distance, affine hull ---------------------------------

def diameter_bounds(ifs: IFS, depth: int = 3) -> tuple[Fraction, Fraction]:
    """(lower, upper) on diam(E)."""
    ball = attractor_ball(ifs)
    upper = 2 * ball.radius
    k = max(1, depth)
    while k > 1 and len(ifs) ** k > 256:
        k -= 1
    cover = refine_cover(ifs, k, Budget(nodes=max(256, len(ifs))))
    balls = cover.balls
    pair_upper = Fraction(0)
    for a, b in itertools.combinations(balls, 2):
        pair_upper = max(pair_upper, _distance_hi(a.center, b.center) + a.radius + b.radius)
    pair_upper = max(pair_upper, max(2 * b.radius for b in balls))
    upper = min(upper, pair_upper)
    pts = [p for _, _, p in periodic_points(ifs, max(1, min(depth, 2)), 2, limit=200)]
    lower = Fraction(0)
    for p, q in itertools.combinations(pts, 2):
        lower = max(lower, _distance_lo(p, q))
    return lower, max(upper, lower)


def hausdorff_distance_bound(phi: IFS, psi: IFS, depth: int = 8, budget=None) -> Fraction:
    """Upper bound on d_H(E_phi, E_psi).

    Both attractors are covered by cylinders cut at the common scale
    rho_max**depth (rho_max over both systems); each cover ball holds a point
    of its attractor, so d_H <= max over balls of (own radius + distance to
    some ball of the other cover + that ball's radius).
    """
    if phi.dimension != psi.dimension:
        raise DimensionMismatch("systems act on different spaces")
    rho = max(phi.max_ratio_hi, psi.max_ratio_hi)
    scale = rho**depth
    return union_hausdorff_bound(phi, None, psi, None, scale, budget)


def union_hausdorff_bound(ifs_a: IFS, words_a, ifs_b: IFS, words_b, scale, budget=None) -> Fraction:
    """Upper bound on the Hausdorff distance between two unions of cylinders
    (``None`` meaning the whole attractor), from covers at ``scale``."""
    _, cov_a = moran_cover(ifs_a, scale, budget, roots=words_a)
    _, cov_b = moran_cover(ifs_b, scale, budget, roots=words_b)
    balls_a = [b for _, b in cov_a]
    balls_b = [b for _, b in cov_b]
    return max(_directed_bound(balls_a, balls_b), _directed_bound(balls_b, balls_a))


def _directed_bound(src, dst) -> Fraction:
    pts = np.array([[float(v) for v in b.center] for b in dst])
    tree = cKDTree(pts)
    k = min(4, len(dst))
    query = np.array([[float(v) for v in b.center] for b in src])
    _, idx = tree.query(query, k=k)
    idx = np.asarray(idx).reshape(len(src), k)
    worst = Fraction(0)
    for b, cands in zip(src, idx):
        best = None
        for j in cands:
            t = dst[int(j)]
            v = _distance_hi(b.center, t.center) + t.radius
            if best is None or v < best:
                best = v
        worst = max(worst, best + b.radius)
    return worst


@dataclass(frozen=True)
class AffineSubspace:
    """base + span(directions); directions are linearly independent rows."""

    base: tuple
    directions: tuple

    @property
    def dimension(self) -> int:
        return len(self.directions)

    def orthonormal_basis(self):
        """Rational orthonormal basis when one is reachable by Gram-Schmidt,
        else None."""
        basis = []
        for v in self.directions:
            u = [Fraction(x) for x in v]
            for e in basis:
                dot = sum(a * b for a, b in zip(u, e))
                u = [a - dot * b for a, b in zip(u, e)]
            n2 = sum(a * a for a in u)
            low, high = sc.sqrt_bounds(n2)
            if low != high:
                return None
            basis.append([a / low for a in u])
        return tuple(tuple(e) for e in basis)


def _independent_rows(vectors, d):
    """Greedy certified-rank elimination; pivots must certainly be non-zero."""
    reduced = []  # (pivot column, row)
    chosen = []
    for v in vectors:
        row = list(v)
        for col, r in reduced:
            factor = row[col] / r[col]
            row = [a - factor * b for a, b in zip(row, r)]
        col = None
        best = Fraction(0)
        for c in range(d):
            m = max(sc.lo(row[c]), -sc.hi(row[c]), Fraction(0))
            if m > best:
                best, col = m, c
        if col is not None:
            reduced.append((col, row))
            chosen.append(tuple(v))
            if len(reduced) == d:
                break
    return chosen


def affine_hull(ifs: IFS, depth: int = 2) -> AffineSubspace:
    """Affine span of periodic points with preperiod <= depth.

    The dimension is a certified lower bound on dim aff(E), nondecreasing in
    depth, and exact once it reaches d.
    """
    pts = [p for _, _, p in periodic_points(ifs, depth, 2, limit=2000)]
    base = pts[0]
    d = ifs.dimension
    diffs = [tuple(a - b for a, b in zip(p, base)) for p in pts[1:]]
    rows = _independent_rows(diffs, d)
    if ifs.mode == sc.INTERVAL:
        base = tuple(sc.midpoint(v) for v in base)
    return AffineSubspace(tuple(base), tuple(rows))


def restrict_to_subspace(ifs: IFS, hull: AffineSubspace) -> IFS:
    """Conjugate an IFS leaving ``hull`` invariant into hull coordinates.

    Uses y -> Q^T (f(p + Q y) - p) with Q a rational orthonormal basis, so it
    stays exact; raises when no rational orthonormal basis exists.
    """
    from .core import OrthogonalMap

    q = hull.orthonormal_basis()
    if q is None:
        raise ValidationError("affine hull has no rational orthonormal basis")
    p = hull.base
    m = len(q)
    if m == 0:
        raise ValidationError("attractor is a single point")
    maps = []
    for f in ifs.maps:
        cols = []
        for e in q:
            image = f.orthogonal.apply(e)
            coords = tuple(sum(a * b for a, b in zip(image, g)) for g in q)
            back = tuple(sum(coords[k] * q[k][t] for k in range(m)) for t in range(len(p)))
            if any(not sc.is_zero(x - y) for x, y in zip(back, image)):
                raise ValidationError("map does not preserve the affine hull")
            cols.append(coords)
        rows = tuple(tuple(cols[c][r] for c in range(m)) for r in range(m))
        shift = tuple(a - b for a, b in zip(apply_map(f, p), p))
        t = tuple(sum(a * b for a, b in zip(shift, g)) for g in q)
        back = tuple(sum(t[k] * q[k][c] for k in range(m)) for c in range(len(p)))
        if any(not sc.is_zero(x - y) for x, y in zip(back, shift)):
            raise ValidationError("map moves the affine hull off itself")
        rot = OrthogonalMap.from_rows(rows, ifs.mode)
        maps.append(Similitude(f.ratio, rot, t))
    return IFS(maps, labels=ifs.labels, provenance=ifs.provenance, osc=ifs.osc, name=ifs.name)


# -- same-attractor certificates -----------------------------------------------

def _as_cylinder(phi: IFS, f: Similitude, max_len: int = 12):
    """A word w with phi_w == f exactly, or None."""
    frontier = [((), None)]
    for _ in range(max_len):
        nxt = []
        for w, g in frontier:
            for i, h in enumerate(phi.maps, 1):
                c = h if g is None else compose_similitudes(g, h)
                if c == f:
                    return w + (i,)
                if c.ratio > f.ratio:
                    nxt.append((w + (i,), c))
        if not nxt:
            return None
        frontier = nxt
    return None


def _complete_code(words, n: int) -> bool:
    """Does every infinite sequence over 1..n start with one of ``words``?"""
    words = set(words)
    longest = max(len(w) for w in words)

    def covered(prefix):
        if any(prefix[:k] in words for k in range(1, len(prefix) + 1)):
            return True
        if len(prefix) >= longest:
            return False
        return all(covered(prefix + (i,)) for i in range(1, n + 1))

    return covered(())


def same_attractor_certificate(phi: IFS, psi: IFS):
    """Exact proof that E_phi == E_psi, or None.

    Holds when every map of one system is a cylinder map of the other and
    those words cover all infinite sequences: then E_phi is invariant under
    the other system's Hutchinson operator and hence is its attractor.
    """
    if phi.mode != sc.EXACT or psi.mode != sc.EXACT or phi.dimension != psi.dimension:
        return None
    for a, b in ((phi, psi), (psi, phi)):
        words = [_as_cylinder(a, f) for f in b.maps]
        if all(w is not None for w in words) and _complete_code(words, len(a)):
            return f"every map of the second system is a cylinder of the first: {words}"
    return None
