"""Intersection verdicts, the adjacency relation, components and the
separation conditions (SSC, OSC witnesses)."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from . import scalar as sc
from .attractor import Budget, periodic_point, set_distance
from .core import IFS, SIGNED_PERMUTATION, apply_map, cylinder_map
from .errors import NotSSCError, UnsupportedWitnessShape, ValidationError


# -- verdicts ------------------------------------------------------------------

@dataclass(frozen=True)
class CertifiedDisjoint:
    gap: Fraction  # certified lower bound, > 0

    certified = True
    intersect = False


@dataclass(frozen=True)
class CertifiedIntersect:
    """A common point phi_u(fix phi_w) == phi_u'(fix phi_w')."""

    point: tuple
    address: tuple  # (u, w)
    other_address: tuple  # (u', w')

    certified = True
    intersect = True


@dataclass(frozen=True)
class Undecided:
    gap_upper: Fraction | None
    nodes: int

    certified = False
    intersect = None


def check_witness(ifs: IFS, verdict: CertifiedIntersect) -> bool:
    """Re-evaluate both addresses exactly and compare with the witness."""
    (u, w), (u2, w2) = verdict.address, verdict.other_address
    return periodic_point(ifs, u, w) == verdict.point == periodic_point(ifs, u2, w2)


def decide_intersection(ifs: IFS, i: int, j: int, budget=None):
    """Three-valued answer to phi_i(E) cap phi_j(E) != {}."""
    if i == j:
        raise ValidationError("self-pairs are not decided")
    ifs.check_word((i, j))
    res = set_distance(ifs, [(i,)], [(j,)], budget)
    if res.witness is not None:
        point, (u, w), (u2, w2) = res.witness
        return CertifiedIntersect(point, (u, w), (u2, w2))
    if res.lower > 0:
        return CertifiedDisjoint(res.lower)
    return Undecided(res.upper, res.nodes)


# -- adjacency graph and components ---------------------------------------------

@dataclass(frozen=True)
class AdjacencyGraph:
    n: int
    edges: tuple  # sorted (i, j), i < j
    undecided: tuple
    verdicts: dict = field(compare=False, repr=False)

    @property
    def certified(self) -> bool:
        return not self.undecided


def adjacency_graph(ifs: IFS, budget=None) -> AdjacencyGraph:
    budget = Budget.coerce(budget)
    n = len(ifs)
    edges, undecided, verdicts = [], [], {}
    for i, j in itertools.combinations(range(1, n + 1), 2):
        v = decide_intersection(ifs, i, j, budget)
        verdicts[(i, j)] = v
        if isinstance(v, CertifiedIntersect):
            edges.append((i, j))
        elif isinstance(v, Undecided):
            undecided.append((i, j))
    return AdjacencyGraph(n, tuple(edges), tuple(undecided), verdicts)


class UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            # smaller root wins so representatives are deterministic
            if rb < ra:
                ra, rb = rb, ra
            self.parent[rb] = ra

    def groups(self):
        out = {}
        for x in self.parent:
            out.setdefault(self.find(x), []).append(x)
        return out


@dataclass(frozen=True)
class ComponentPartition:
    components: tuple  # tuples of 1-based indices, sorted by smallest member
    provisional: bool = False

    @property
    def sizes(self) -> tuple:
        return tuple(len(c) for c in self.components)

    @property
    def certified(self) -> bool:
        return not self.provisional

    def component_of(self, i: int) -> tuple:
        return next(c for c in self.components if i in c)

    def labelled(self, ifs: IFS):
        return [[ifs.labels[i - 1] for i in c] for c in self.components]


def components(graph: AdjacencyGraph) -> ComponentPartition:
    """Connected components over certified edges (union-find)."""
    uf = UnionFind(range(1, graph.n + 1))
    for i, j in graph.edges:
        uf.union(i, j)
    comps = sorted(tuple(sorted(g)) for g in uf.groups().values())
    return ComponentPartition(tuple(comps), provisional=bool(graph.undecided))


def partition(ifs: IFS, budget=None) -> ComponentPartition:
    return components(adjacency_graph(ifs, budget))


@dataclass(frozen=True)
class ComponentCheck:
    component: tuple
    separated: bool | None  # property (i); None when undecided
    connected: bool  # property (ii)
    gap: Fraction | None = None

    @property
    def passed(self) -> bool:
        return bool(self.separated) and self.connected


def verify_component_properties(ifs: IFS, part: ComponentPartition, budget=None):
    """Re-check both characterising properties of each component.

    (i) the union of the component's images is at positive distance from the
    rest; (ii) the component is connected through exactly re-verified
    witnesses.
    """
    budget = Budget.coerce(budget)
    n = len(ifs)
    report = []
    for comp in part.components:
        rest = [i for i in range(1, n + 1) if i not in comp]
        gap = None
        if not rest:
            separated = True
        else:
            res = set_distance(ifs, [(i,) for i in comp], [(i,) for i in rest], budget)
            separated = True if res.lower > 0 else (False if res.upper == 0 else None)
            gap = res.lower
        report.append(ComponentCheck(comp, separated, _connected(ifs, comp, budget), gap))
    return report


def _connected(ifs, comp, budget) -> bool:
    if len(comp) == 1:
        return True
    uf = UnionFind(comp)
    for i, j in itertools.combinations(comp, 2):
        if uf.find(i) == uf.find(j):
            continue
        v = decide_intersection(ifs, i, j, budget)
        if isinstance(v, CertifiedIntersect) and check_witness(ifs, v):
            uf.union(i, j)
    return len(uf.groups()) == 1


# -- separation conditions -------------------------------------------------------

SSC = "ssc"
NOT_SSC = "not-ssc"
UNDECIDED = "undecided"


@dataclass(frozen=True)
class SSCResult:
    status: str
    delta: Fraction | None = None  # min certified gap when SSC
    witness_pair: tuple | None = None
    undecided: tuple = ()

    @property
    def is_ssc(self) -> bool:
        return self.status == SSC

    @property
    def is_not_ssc(self) -> bool:
        return self.status == NOT_SSC


def check_ssc(ifs: IFS, budget=None) -> SSCResult:
    budget = Budget.coerce(budget)
    gaps, undecided = [], []
    for i, j in itertools.combinations(range(1, len(ifs) + 1), 2):
        v = decide_intersection(ifs, i, j, budget)
        if isinstance(v, CertifiedIntersect):
            return SSCResult(NOT_SSC, witness_pair=(i, j))
        if isinstance(v, CertifiedDisjoint):
            gaps.append(v.gap)
        else:
            undecided.append((i, j))
    if undecided:
        return SSCResult(UNDECIDED, undecided=tuple(undecided))
    return SSCResult(SSC, delta=min(gaps))


@dataclass(frozen=True)
class OSCWitnessResult:
    valid: bool
    images: tuple  # per map, the image boxes
    failures: tuple = ()

    def __bool__(self):
        return self.valid


def _box_image(f, box):
    lo_pt, hi_pt = box
    if f.orthogonal.kind != SIGNED_PERMUTATION:
        raise UnsupportedWitnessShape("box witnesses need signed-permutation orthogonal parts")
    a = apply_map(f, lo_pt)
    b = apply_map(f, hi_pt)
    return (tuple(min(sc.lo(x), sc.lo(y)) for x, y in zip(a, b)),
            tuple(max(sc.hi(x), sc.hi(y)) for x, y in zip(a, b)))


def _boxes_overlap(p, q) -> bool:
    """Open boxes intersect iff every axis overlaps with positive length."""
    return all(pl < qh and ql < ph for pl, ph, ql, qh in zip(p[0], p[1], q[0], q[1]))


def _box_in_union(box, union) -> bool:
    """Is the open box contained in the union of open boxes?

    Breakpoints of all boxes split every axis into open gaps and single
    points; each product cell is either inside or outside each open box, so
    testing one representative per cell inside ``box`` is exact.
    """
    d = len(box[0])
    axes = []
    for k in range(d):
        cuts = sorted({box[0][k], box[1][k]} | {b[0][k] for b in union} | {b[1][k] for b in union})
        cuts = [c for c in cuts if box[0][k] <= c <= box[1][k]]
        reps = [(a + b) / 2 for a, b in zip(cuts, cuts[1:])]
        reps += [c for c in cuts if box[0][k] < c < box[1][k]]
        axes.append(reps)
    for x in itertools.product(*axes):
        if not any(all(b[0][k] < x[k] < b[1][k] for k in range(d)) for b in union):
            return False
    return True


def check_osc_witness(ifs: IFS, boxes) -> OSCWitnessResult:
    """Check that U = union of open boxes witnesses the open set condition.

    ``boxes`` is a list of (lower corner, upper corner). Needs
    phi_i(U) inside U for all i and pairwise disjoint images; touching
    closures are allowed.
    """
    union = []
    for lo_pt, hi_pt in boxes:
        lo_pt = tuple(Fraction(v) if not isinstance(v, str) else sc.parse_rational(v) for v in lo_pt)
        hi_pt = tuple(Fraction(v) if not isinstance(v, str) else sc.parse_rational(v) for v in hi_pt)
        if len(lo_pt) != ifs.dimension or len(hi_pt) != ifs.dimension:
            raise ValidationError("box dimension does not match the system")
        if any(a >= b for a, b in zip(lo_pt, hi_pt)):
            raise ValidationError("empty box in witness")
        union.append((lo_pt, hi_pt))
    if not union:
        raise ValidationError("witness must contain at least one box")
    images = []
    for f in ifs.maps:
        if ifs.mode == sc.INTERVAL:
            images.append(tuple(_box_image(f, (tuple(map(sc.to_interval, b[0])),
                                               tuple(map(sc.to_interval, b[1])))) for b in union))
        else:
            images.append(tuple(_box_image(f, b) for b in union))
    failures = []
    for i, imgs in enumerate(images, 1):
        for b in imgs:
            if not _box_in_union(b, union):
                failures.append(("containment", i))
                break
    for i, j in itertools.combinations(range(len(images)), 2):
        if any(_boxes_overlap(p, q) for p in images[i] for q in images[j]):
            failures.append(("overlap", i + 1, j + 1))
    return OSCWitnessResult(not failures, tuple(images), tuple(failures))


@dataclass(frozen=True)
class NeighbourhoodWitness:
    """The open set V_eps(E) witnessing OSC for an SSC system."""

    epsilon: Fraction
    delta: Fraction
    description: str


def osc_witness_from_ssc(ifs: IFS, delta=None, budget=None) -> NeighbourhoodWitness:
    """eps = delta/3, so phi_i(V_eps(E)) = V_{rho_i eps}(phi_i(E)) stays inside
    V_eps(E) and the images are disjoint because eps < delta/2."""
    res = check_ssc(ifs, budget)
    if not res.is_ssc:
        raise NotSSCError(f"system is {res.status}, not certified SSC")
    delta = res.delta if delta is None else Fraction(delta)
    if delta <= 0:
        raise ValidationError("gap must be positive")
    eps = delta / 3
    text = (f"U = V_eps(E) with eps = {sc.format_rational(eps)}; "
            f"phi_i(U) = V_(rho_i*eps)(phi_i(E)) is inside U and the images are "
            f"pairwise disjoint since eps < delta/2 = {sc.format_rational(delta / 2)}")
    return NeighbourhoodWitness(eps, delta, text)
