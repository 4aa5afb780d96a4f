"""Characteristic vectors and the top-down lexicographic order on them."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from . import scalar as sc
from .attractor import Budget, hausdorff_distance_bound, diameter_bounds, same_attractor_certificate
from .core import IFS, ifs_compose
from .errors import PreconditionError, ValidationError
from .separation import ComponentPartition, check_ssc, partition

LESS = "less"
EQUAL = "equal"
GREATER = "greater"
INCOMPARABLE = "incomparable"

SAME_ATTRACTOR_RTOL = Fraction(1, 10**6)


def _is_certainly_zero(v) -> bool:
    return sc.is_zero(v)


class CharVec:
    """A finitely supported vector (x_1, x_2, ...), stored sparsely.

    Entries are Fractions (exact) or intervals; ``provisional`` marks a vector
    computed from a partition that still has undecided pairs.
    """

    __slots__ = ("_entries", "provisional")

    def __init__(self, entries: Mapping[int, object] | Sequence = (), provisional: bool = False):
        if not isinstance(entries, Mapping):
            entries = {n: v for n, v in enumerate(entries, 1)}
        clean = {}
        for n, v in entries.items():
            if not isinstance(n, int) or n < 1:
                raise ValidationError(f"index {n!r} must be a positive integer")
            if not sc.is_interval(v):
                v = Fraction(v)
            if not _is_certainly_zero(v):
                clean[n] = v
        self._entries = dict(sorted(clean.items()))
        self.provisional = provisional

    @property
    def entries(self) -> dict:
        return dict(self._entries)

    @property
    def exact(self) -> bool:
        return not any(sc.is_interval(v) for v in self._entries.values())

    @property
    def support(self) -> int:
        """Largest index with a non-zero entry (0 for the zero vector)."""
        return max(self._entries, default=0)

    def __getitem__(self, n: int):
        return self._entries.get(n, Fraction(0))

    def as_tuple(self, length: int | None = None) -> tuple:
        length = self.support if length is None else length
        return tuple(self[n] for n in range(1, length + 1))

    def total(self):
        s = Fraction(0)
        for v in self._entries.values():
            s = sc.add(s, v)
        return s

    def _combine(self, other, op):
        keys = set(self._entries) | set(other._entries)
        out = {n: op(self[n], other[n]) for n in keys}
        return CharVec(out, self.provisional or other.provisional)

    def __add__(self, other):
        return self._combine(_as_charvec(other), sc.add)

    def __sub__(self, other):
        return self._combine(_as_charvec(other), sc.sub)

    def __mul__(self, a):
        if not sc.is_interval(a):
            a = Fraction(a)
        return CharVec({n: sc.mul(a, v) for n, v in self._entries.items()}, self.provisional)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, (list, tuple)):
            other = CharVec(other)
        if not isinstance(other, CharVec):
            return NotImplemented
        return self.exact and other.exact and self._entries == other._entries

    def __hash__(self):
        return hash(tuple(self._entries.items()))

    def is_zero(self) -> bool:
        return not self._entries

    def to_triples(self) -> list:
        """[(n, numerator, denominator), ...]; exact vectors only."""
        if not self.exact:
            raise ValidationError("only exact vectors serialise as rational triples")
        return [(n, v.numerator, v.denominator) for n, v in self._entries.items()]

    @classmethod
    def from_triples(cls, triples, provisional=False) -> "CharVec":
        return cls({int(n): Fraction(int(p), int(q)) for n, p, q in triples}, provisional)

    def __repr__(self):
        return f"CharVec({self})"

    def __str__(self):
        def fmt(v):
            if sc.is_interval(v):
                return f"[{float(sc.lo(v)):.9g}, {float(sc.hi(v)):.9g}]"
            return sc.format_rational(v)

        body = ", ".join(fmt(v) for v in self.as_tuple())
        return f"({body}{', ' if body else ''}0, ...)"


def _as_charvec(x) -> CharVec:
    return x if isinstance(x, CharVec) else CharVec(x)


@dataclass(frozen=True)
class OrderResult:
    """Outcome of comparing x against y under the top-down order.

    ``index`` is the deciding coordinate; for incomparable results ``gap``
    encloses y_m - x_m and ``needed_precision`` is the width that would have
    to shrink below the gap's distance from 0.
    """

    relation: str
    index: int | None = None
    gap: tuple | None = None

    @property
    def needed_precision(self):
        if self.gap is None:
            return None
        return self.gap[1] - self.gap[0]

    def __str__(self):
        return self.relation.capitalize()


def compare(x, y) -> OrderResult:
    """x versus y: scan down from the highest index where they differ."""
    x, y = _as_charvec(x), _as_charvec(y)
    top = max(x.support, y.support)
    for n in range(top, 0, -1):
        a, b = x[n], y[n]
        if not sc.is_interval(a) and not sc.is_interval(b):
            if a == b:
                continue
            return OrderResult(LESS if a < b else GREATER, n, (b - a, b - a))
        diff = sc.to_interval(b) - sc.to_interval(a)
        low, high = sc.lo(diff), sc.hi(diff)
        if low == high == 0:
            continue
        if low > 0:
            return OrderResult(LESS, n, (low, high))
        if high < 0:
            return OrderResult(GREATER, n, (low, high))
        return OrderResult(INCOMPARABLE, n, (low, high))
    return OrderResult(EQUAL)


def precedes_or_equal(x, y) -> bool:
    return compare(x, y).relation in (LESS, EQUAL)


def characteristic_vector(ifs: IFS, part: ComponentPartition | None = None, budget=None) -> CharVec:
    """gamma_n = sum over n-components of sum of rho_i**s."""
    if part is None:
        part = partition(ifs, budget)
    weights = ifs.weights()
    entries = {}
    for comp in part.components:
        n = len(comp)
        for i in comp:
            entries[n] = sc.add(entries.get(n, Fraction(0)), weights[i - 1])
    return CharVec(entries, provisional=part.provisional)


def _certainly_nonnegative(c) -> bool:
    return sc.lo(c) >= 0


def linear_combine(coeffs, vecs) -> CharVec:
    """Convex combination sum_j c_j v_j; the coefficients must sum to 1."""
    coeffs = list(coeffs)
    vecs = [_as_charvec(v) for v in vecs]
    if len(coeffs) != len(vecs):
        raise ValidationError("one coefficient per vector required")
    coeffs = [c if sc.is_interval(c) else Fraction(c) for c in coeffs]
    if not all(_certainly_nonnegative(c) for c in coeffs):
        raise ValidationError("coefficients must be non-negative")
    total = Fraction(0)
    for c in coeffs:
        total = sc.add(total, c)
    if not (sc.lo(total) <= 1 <= sc.hi(total)):
        raise ValidationError(f"coefficients sum to {total}, not 1")
    out = CharVec({})
    for c, v in zip(coeffs, vecs):
        out = out + c * v
    return out


@dataclass(frozen=True)
class MonotonicityReport:
    relation: OrderResult
    gamma_psi: CharVec
    gamma_composed: CharVec
    merged: tuple  # components of phi o psi not of the form {i} x Lambda, as (i, j) pairs
    evidence: str
    provisional: bool

    @property
    def holds(self) -> bool:
        return self.relation.relation == LESS and not self.provisional


def same_attractor_evidence(phi: IFS, psi: IFS, depth: int = 8, budget=None,
                            rtol: Fraction = SAME_ATTRACTOR_RTOL):
    """(ok, text): an exact cylinder-code proof or the heuristic Hausdorff gate."""
    cert = same_attractor_certificate(phi, psi)
    if cert is not None:
        return True, "exact: " + cert
    bound = hausdorff_distance_bound(phi, psi, depth, budget)
    diam = diameter_bounds(phi)[1]
    ok = bound <= rtol * diam
    return ok, (f"heuristic: Hausdorff bound {float(bound):.3g} "
                f"{'<=' if ok else '>'} {float(rtol):.0e} * diam")


def _osc_attributed(ifs: IFS, budget) -> bool:
    return bool(ifs.osc) or check_ssc(ifs, budget).is_ssc


def verify_monotonicity(phi: IFS, psi: IFS, budget=None, same_attractor: bool | None = None,
                        depth: int = 8) -> MonotonicityReport:
    """Check gamma(psi) < gamma(phi o psi) for a non-SSC phi sharing psi's attractor."""
    budget = Budget.coerce(budget)
    if not _osc_attributed(phi, budget) or not _osc_attributed(psi, budget):
        raise PreconditionError("both systems must carry the open set condition")
    ssc = check_ssc(phi, budget)
    if not ssc.is_not_ssc:
        raise PreconditionError(f"phi must be certified not-SSC (got {ssc.status})")
    if same_attractor is None:
        ok, evidence = same_attractor_evidence(phi, psi, depth, budget)
        if not ok:
            raise PreconditionError("no evidence that phi and psi share an attractor: " + evidence)
    else:
        if not same_attractor:
            raise PreconditionError("systems asserted to have different attractors")
        evidence = "asserted by caller"
    part_psi = partition(psi, budget)
    composed = ifs_compose(phi, psi, osc="inherited")
    part_comp = partition(composed, budget)
    g_psi = characteristic_vector(psi, part_psi)
    g_comp = characteristic_vector(composed, part_comp)
    psi_components = {frozenset(c) for c in part_psi.components}
    merged = []
    for comp in part_comp.components:
        pairs = [composed.provenance[k - 1] for k in comp]
        firsts = {i for i, _ in pairs}
        if len(firsts) == 1 and frozenset(j for _, j in pairs) in psi_components:
            continue
        merged.append(tuple(pairs))
    return MonotonicityReport(compare(g_psi, g_comp), g_psi, g_comp, tuple(merged), evidence,
                              part_psi.provisional or part_comp.provisional)
