"""Executable walk through the argument that a homogeneous non-SSC system
with OSC cannot share its attractor with an SSC system.

Each stage returns certified data or fails loudly; ``contradiction_trace``
strings the stages together and records which one stopped the run.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import scalar as sc
from .attractor import (
    Budget,
    affine_hull,
    cross_distance,
    diameter_bounds,
    periodic_points,
    point_distance,
    restrict_to_subspace,
    union_hausdorff_bound,
)
from .charvec import (
    LESS,
    EQUAL,
    CharVec,
    characteristic_vector,
    compare,
    linear_combine,
    same_attractor_evidence,
)
from .core import IFS, ifs_compose, ifs_power, left_quotient
from .errors import (
    BudgetExceeded,
    IfsError,
    IncompatibleInputs,
    NotSSCError,
    PreconditionError,
    ValidationError,
)
from .separation import check_ssc, partition

CONTRADICTION = "contradiction-demonstrated"
TRIVIAL = "trivially-consistent"
INCOMPATIBLE = "inputs-incompatible"
UNDECIDED = "undecided"

MAX_ELL = 10_000
MAXIMALITY_NOTE = (
    "Theta is taken as a power of Phi inside the band; the selection of a "
    "maximal Theta over all homogeneous generating systems with ratio in the "
    "band is not constructive and is not reproduced."
)


def _exact_ratio(ifs: IFS, who: str) -> Fraction:
    if ifs.mode != sc.EXACT or not ifs.is_homogeneous:
        raise PreconditionError(f"{who} must be an exact homogeneous system")
    return ifs.common_ratio


# -- gap and band ------------------------------------------------------------------

def min_gap(psi: IFS, budget=None) -> Fraction:
    """Certified positive lower bound on min_{j != j'} dist(psi_j(E), psi_j'(E))."""
    res = check_ssc(psi, budget)
    if not res.is_ssc:
        raise NotSSCError(f"system is {res.status}, not certified SSC")
    return res.delta


@dataclass(frozen=True)
class BandParams:
    ell: int
    epsilon: Fraction
    rho: Fraction

    @property
    def band(self) -> tuple[Fraction, Fraction]:
        """Right-open interval [rho*eps, eps)."""
        return self.rho * self.epsilon, self.epsilon

    def contains(self, x: Fraction) -> bool:
        low, high = self.band
        return low <= x < high


def choose_band(phi: IFS, psi: IFS, delta, diam) -> BandParams:
    """Smallest ell with rho**ell < min r_j, and the largest admissible eps."""
    rho = _exact_ratio(phi, "phi")
    delta, diam = Fraction(delta), Fraction(diam)
    if delta <= 0 or diam <= 0:
        raise ValidationError("gap and diameter must be positive")
    r_min = min(sc.lo(r) for r in psi.ratios)
    if any(sc.hi(r) >= rho for r in psi.ratios):
        raise PreconditionError("every ratio of psi must be below rho; replace psi by a power first")
    ell, p = 1, rho
    while p >= r_min:
        ell += 1
        p *= rho
        if ell > MAX_ELL:
            raise PreconditionError("no admissible ell below the cap")
    eps = p * delta / diam
    if eps >= p:
        raise PreconditionError("eps must stay below rho**ell (gap exceeds the diameter)")
    return BandParams(ell, eps, rho)


def band_power(rho: Fraction, band: BandParams) -> int:
    """The unique k >= 1 with rho**k in [rho*eps, eps)."""
    k, p = 1, rho
    while p >= band.epsilon:
        k += 1
        p *= rho
    if not band.contains(p):
        raise PreconditionError("power skipped the band")
    return k


def _as_band(band, rho: Fraction) -> BandParams:
    if isinstance(band, BandParams):
        if band.rho != rho:
            raise ValidationError("band was built for a different ratio")
        return band
    low, high = (Fraction(x) for x in band)
    if low != rho * high:
        raise ValidationError("band must have the form [rho*eps, eps)")
    return BandParams(0, high, rho)


# -- cells and quotients -----------------------------------------------------------

@dataclass(frozen=True)
class CellPartition:
    cells: tuple  # one tuple of 1-based theta indices per psi map
    residuals: tuple  # per cell, upper bound on the Hausdorff distance of the union identity
    scale: Fraction

    @property
    def assignment(self) -> dict:
        return {i: j for j, cell in enumerate(self.cells, 1) for i in cell}

    def cell_of(self, i: int) -> int:
        return self.assignment[i]


def partition_cells(theta: IFS, psi: IFS, delta, budget=None, diam=None, scale=None) -> CellPartition:
    """Assign each theta_i to the one psi_j image it can meet.

    theta_i(E) is small against the gap, so meeting psi_j(E) puts it inside
    psi_j(E) once the attractors agree. An index certified disjoint from
    every psi_j(E) shows the attractors differ.
    """
    budget = Budget.coerce(budget)
    delta = Fraction(delta)
    if diam is None:
        diam = diameter_bounds(theta)[1]
    if theta.max_ratio_hi * Fraction(diam) >= delta:
        raise PreconditionError("theta's pieces must be smaller than the gap of psi")
    m = len(psi)
    cells = [[] for _ in range(m)]
    for i in range(1, len(theta) + 1):
        open_js = []
        for j in range(1, m + 1):
            res = cross_distance(theta, [(i,)], psi, [(j,)], budget)
            if not res.lower > 0:
                open_js.append(j)
        if not open_js:
            raise IncompatibleInputs(f"theta_{i}(E) is certified disjoint from every psi_j(E)")
        if len(open_js) > 1:
            raise PreconditionError(f"theta_{i} could not be separated from cells {open_js}")
        cells[open_js[0] - 1].append(i)
    if scale is None:
        scale = theta.max_ratio_hi ** 2
    residuals = tuple(
        union_hausdorff_bound(theta, [(i,) for i in cell], psi, [(j,)], scale, budget) if cell else None
        for j, cell in enumerate(cells, 1)
    )
    return CellPartition(tuple(tuple(c) for c in cells), residuals, scale)


def quotient_ifs(theta: IFS, psi: IFS, j: int, cells: CellPartition) -> IFS:
    """Gamma_j = {psi_j^-1 o theta_i : i in A_j}."""
    if not 1 <= j <= len(psi):
        raise ValidationError(f"cell {j} out of range")
    cell = cells.cells[j - 1]
    if len(cell) < 2:
        raise IncompatibleInputs(f"cell {j} has {len(cell)} maps; no quotient system")
    maps = [left_quotient(psi[j], theta[i]) for i in cell]
    labels = [theta.labels[i - 1] for i in cell]
    return IFS(maps, labels=labels, osc="inherited", name=f"Gamma_{j}")


def normalize_into_band(phi: IFS, gamma: IFS, band, build: bool = True, max_maps: int | None = None):
    """(k, Phi^k o Gamma) with rho**k * rho_Gamma in the right-open band."""
    rho = _exact_ratio(phi, "phi")
    r = _exact_ratio(gamma, "gamma")
    band = _as_band(band, rho)
    if r <= band.epsilon:
        raise IncompatibleInputs("gamma's ratio is already at or below eps")
    k, p = 1, rho * r
    while p >= band.epsilon:
        k += 1
        p *= rho
    if not band.contains(p):
        raise PreconditionError("normalised ratio fell outside the band")
    if not build:
        return k, None
    if max_maps is not None and len(phi) ** k * len(gamma) > max_maps:
        raise BudgetExceeded(f"Phi^{k} o Gamma would have {len(phi) ** k * len(gamma)} maps")
    return k, ifs_compose(ifs_power(phi, k), gamma, osc="inherited")


# -- decomposition -----------------------------------------------------------------

@dataclass(frozen=True)
class DecompositionReport:
    residual: CharVec
    components_in_cells: bool  # (a)
    components_match: bool  # (b)
    gamma_theta: CharVec
    gamma_quotients: tuple
    coefficients: tuple
    provisional: bool

    @property
    def holds(self) -> bool:
        return self.components_in_cells and self.components_match and self.residual.is_zero()


def decomposition_identity(gamma_theta, coeffs, gammas) -> CharVec:
    """gamma(Theta) - sum_j c_j gamma(Gamma_j) on plain vectors."""
    gamma_theta = gamma_theta if isinstance(gamma_theta, CharVec) else CharVec(gamma_theta)
    return gamma_theta - linear_combine(coeffs, gammas)


def decomposition_check(theta: IFS, psi: IFS, cells: CellPartition, quotients, budget=None) -> DecompositionReport:
    budget = Budget.coerce(budget)
    quotients = list(quotients)
    part_theta = partition(theta, budget)
    assign = cells.assignment
    in_cells = all(len({assign[i] for i in comp}) == 1 for comp in part_theta.components)
    match = True
    provisional = part_theta.provisional
    gammas = []
    for j, (cell, gamma) in enumerate(zip(cells.cells, quotients), 1):
        part_gamma = partition(gamma, budget)
        provisional |= part_gamma.provisional
        gammas.append(characteristic_vector(gamma, part_gamma))
        mapped = {frozenset(cell[k - 1] for k in comp) for comp in part_gamma.components}
        own = {frozenset(comp) for comp in part_theta.components if assign[comp[0]] == j}
        match &= mapped == own
    gamma_theta = characteristic_vector(theta, part_theta)
    coeffs = psi.weights()
    residual = decomposition_identity(gamma_theta, coeffs, gammas)
    residual.provisional = provisional
    return DecompositionReport(residual, in_cells, match, gamma_theta, tuple(gammas),
                               tuple(coeffs), provisional)


# -- full trace --------------------------------------------------------------------

@dataclass
class Stage:
    name: str
    ok: bool | None
    detail: str = ""


@dataclass
class HarnessReport:
    phi: str
    psi: str
    status: str = UNDECIDED
    stages: list = field(default_factory=list)
    delta: Fraction | None = None
    band: BandParams | None = None
    theta_power: int | None = None
    cells: tuple | None = None
    quotient_ratios: tuple = ()
    k: tuple = ()
    residual: CharVec | None = None
    chain: list = field(default_factory=list)
    precondition_failure: str | None = None
    notes: tuple = (MAXIMALITY_NOTE,)

    def add(self, name, ok, detail=""):
        self.stages.append(Stage(name, ok, detail))
        return ok

    @property
    def first_failure(self) -> Stage | None:
        return next((s for s in self.stages if s.ok is not True), None)

    def to_dict(self) -> dict:
        frac = lambda x: None if x is None else sc.format_rational(x)  # noqa: E731
        return {
            "phi": self.phi,
            "psi": self.psi,
            "status": self.status,
            "precondition_failure": self.precondition_failure,
            "stages": [{"name": s.name, "ok": s.ok, "detail": s.detail} for s in self.stages],
            "delta": frac(self.delta),
            "band": None if self.band is None else {
                "ell": self.band.ell,
                "epsilon": frac(self.band.epsilon),
                "interval": [frac(x) for x in self.band.band],
            },
            "theta_power": self.theta_power,
            "cells": None if self.cells is None else [list(c) for c in self.cells],
            "quotient_ratios": [frac(r) for r in self.quotient_ratios],
            "k": list(self.k),
            "residual": None if self.residual is None else str(self.residual),
            "chain": [{"link": a, "relation": b} for a, b in self.chain],
            "notes": list(self.notes),
        }


def _name(ifs: IFS, fallback: str) -> str:
    return ifs.name or fallback


def _certified_difference(phi: IFS, psi: IFS, budget) -> str | None:
    """A periodic point of one attractor at certified positive distance from the other."""
    for a, b, tag in ((phi, psi, "phi"), (psi, phi, "psi")):
        for u, w, x in periodic_points(a, 1, 2, limit=40):
            res = point_distance(b, x, budget)
            if res.lower > 0:
                other = "psi" if tag == "phi" else "phi"
                return (f"point {tuple(sc.format_rational(c) for c in x)} of E_{tag} "
                        f"(address {u}+{w}*) lies at distance >= {float(res.lower):.6g} from E_{other}")
    return None


def _osc_attributed(ifs: IFS, ssc_status) -> bool:
    return bool(ifs.osc) or ssc_status.is_ssc


def contradiction_trace(phi: IFS, psi: IFS, budget=None, depth: int = 8) -> HarnessReport:
    """Run every stage of the argument and report where it stops."""
    budget = Budget.coerce(budget)
    rep = HarnessReport(_name(phi, "Phi"), _name(psi, "Psi"))

    def fail(reason, status=TRIVIAL):
        rep.precondition_failure = reason
        rep.status = status
        rep.add("preconditions", False, reason)
        return rep

    if phi.mode != sc.EXACT or psi.mode != sc.EXACT:
        return fail("the trace needs exact systems", UNDECIDED)
    if phi.dimension != psi.dimension:
        return fail("systems live in different dimensions", INCOMPATIBLE)
    if not phi.is_homogeneous:
        return fail("Phi must be homogeneous")
    phi_ssc = check_ssc(phi, budget)
    if not _osc_attributed(phi, phi_ssc):
        return fail("Phi must carry the open set condition")
    if phi_ssc.is_ssc:
        return fail("Phi must be not-SSC (it is certified SSC)")
    if not phi_ssc.is_not_ssc:
        return fail("Phi could not be certified not-SSC", UNDECIDED)
    psi_ssc = check_ssc(psi, budget)
    if psi_ssc.is_not_ssc:
        return fail(f"Psi must be SSC (maps {psi_ssc.witness_pair} intersect)")
    if not psi_ssc.is_ssc:
        return fail("Psi could not be certified SSC", UNDECIDED)
    rep.add("preconditions", True, f"Phi not-SSC via pair {phi_ssc.witness_pair}; Psi SSC")

    # same attractor
    diff = _certified_difference(phi, psi, budget)
    if diff is not None:
        rep.add("same-attractor", False, "certified different: " + diff)
        rep.status = INCOMPATIBLE
        return rep
    ok, evidence = same_attractor_evidence(phi, psi, depth, budget)
    if not rep.add("same-attractor", ok, evidence):
        rep.status = INCOMPATIBLE if not evidence.startswith("exact") else UNDECIDED
        return rep

    try:
        _run_pipeline(phi, psi, budget, rep)
    except IncompatibleInputs as exc:
        rep.add("pipeline", False, str(exc))
        rep.status = INCOMPATIBLE
    except IfsError as exc:
        rep.add("pipeline", False, f"{type(exc).__name__}: {exc}")
        rep.status = UNDECIDED
    return rep


def _run_pipeline(phi, psi, budget, rep):
    hull = affine_hull(phi)
    if hull.dimension < phi.dimension:
        phi = restrict_to_subspace(phi, hull)
        psi = restrict_to_subspace(psi, hull)
        rep.add("affine-hull", True, f"reduced to dimension {hull.dimension}")
    rho = phi.common_ratio
    n = 1
    while any(sc.hi(r) ** n >= rho for r in psi.ratios):
        n += 1
    if n > 1:
        if len(psi) ** n > budget.nodes:
            raise BudgetExceeded(f"Psi^{n} exceeds the node budget")
        psi = ifs_power(psi, n)
    rep.add("psi-power", True, f"Psi replaced by its power {n}")

    rep.delta = delta = min_gap(psi, budget)
    rep.add("gap", True, f"delta >= {sc.format_rational(delta)}")
    diam = diameter_bounds(phi)[1]
    rep.band = band = choose_band(phi, psi, delta, diam)
    rep.add("band", True, f"ell={band.ell}, eps={sc.format_rational(band.epsilon)}")

    k = band_power(rho, band)
    rep.theta_power = k
    if len(phi) ** k > budget.nodes:
        raise BudgetExceeded(f"Theta = Phi^{k} has {len(phi) ** k} maps")
    theta = ifs_power(phi, k)
    rep.add("theta", True, f"Theta = Phi^{k}, ratio {sc.format_rational(theta.common_ratio)}")

    cells = partition_cells(theta, psi, delta, budget, diam)
    rep.cells = cells.cells
    rep.add("cells", True, f"sizes {[len(c) for c in cells.cells]}")

    quotients = [quotient_ifs(theta, psi, j, cells) for j in range(1, len(psi) + 1)]
    rep.quotient_ratios = tuple(g.common_ratio for g in quotients)
    rep.add("quotients", True, "")

    ks, composed = [], []
    for g in quotients:
        kj, sys_ = normalize_into_band(phi, g, band, build=True, max_maps=budget.nodes)
        ks.append(kj)
        composed.append(sys_)
    rep.k = tuple(ks)
    rep.add("normalise", True, f"k_j = {ks}")

    dec = decomposition_check(theta, psi, cells, quotients, budget)
    rep.residual = dec.residual
    if not rep.add("decomposition", dec.holds and not dec.provisional, f"residual {dec.residual}"):
        rep.status = UNDECIDED
        return

    gamma_theta = dec.gamma_theta
    certified = True
    for j, (g, kj) in enumerate(zip(quotients, ks), 1):
        cur, cur_vec = g, dec.gamma_quotients[j - 1]
        for step in range(1, kj + 1):
            nxt = ifs_compose(phi, cur, osc="inherited")
            vec = characteristic_vector(nxt, budget=budget)
            rel = compare(cur_vec, vec)
            rep.chain.append((f"Gamma_{j} step {step}", str(rel)))
            certified &= rel.relation == LESS and not vec.provisional
            cur, cur_vec = nxt, vec
        rel = compare(cur_vec, gamma_theta)
        rep.chain.append((f"Gamma_{j} vs Theta", str(rel)))
        certified &= rel.relation in (LESS, EQUAL) and not cur_vec.provisional
    rep.add("chain", certified, "")
    rep.status = CONTRADICTION if certified else UNDECIDED


# -- power chain -----------------------------------------------------------------

@dataclass(frozen=True)
class PowerChain:
    vectors: tuple  # gamma(Phi^k), k = 1..K
    relations: tuple  # compare(gamma(Phi^k), gamma(Phi^(k+1)))

    @property
    def strictly_increasing(self) -> bool:
        return all(r.relation == LESS for r in self.relations) and not any(v.provisional for v in self.vectors)


def power_chain(phi: IFS, K: int, budget=None) -> PowerChain:
    budget = Budget.coerce(budget)
    if K < 1:
        raise ValidationError("K must be positive")
    if len(phi) ** K > budget.nodes:
        raise BudgetExceeded(f"Phi^{K} would have {len(phi) ** K} maps")
    ssc = check_ssc(phi, budget)
    if not (phi.osc or ssc.is_ssc):
        raise PreconditionError("Phi must carry the open set condition")
    if not ssc.is_not_ssc:
        raise PreconditionError(f"Phi must be certified not-SSC (got {ssc.status})")
    vectors, relations = [], []
    cur = phi
    for k in range(1, K + 1):
        if k > 1:
            cur = ifs_compose(phi, cur, osc="inherited")
        vectors.append(characteristic_vector(cur, budget=budget))
        if k > 1:
            relations.append(compare(vectors[-2], vectors[-1]))
    return PowerChain(tuple(vectors), tuple(relations))
