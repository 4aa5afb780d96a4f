"""Acceptance criteria, one reported line each (see the terminal summary)."""
import bisect
import random
import time
from fractions import Fraction as F

import pytest

from ifsx import (
    IFS,
    Budget,
    CertifiedDisjoint,
    CertifiedIntersect,
    CharVec,
    adjacency_graph,
    characteristic_vector,
    choose_band,
    compare,
    contradiction_trace,
    decide_intersection,
    decomposition_check,
    decomposition_identity,
    hausdorff_distance_bound,
    ifs_compose,
    ifs_power,
    invariant_ball,
    min_gap,
    normalize_into_band,
    partition,
    partition_cells,
    power_chain,
    quotient_ifs,
)
from ifsx.charvec import EQUAL, GREATER, LESS
from ifsx.harness import CONTRADICTION, BandParams

import oracles
from conftest import ACCEPTANCE_LINES, c4, f5, halves


def report(name, ok, detail=""):
    ACCEPTANCE_LINES.append(f"{'PASS' if ok else 'FAIL'}  {name}" + (f"  [{detail}]" if detail else ""))
    assert ok, f"{name}: {detail}"


def test_f5_gamma_exact():
    t = time.perf_counter()
    ifs = f5()
    part = partition(ifs)
    g = characteristic_vector(ifs, part)
    elapsed = time.perf_counter() - t
    ok = (g.exact and g == (F(1, 3), F(2, 3)) and part.certified
          and part.components == ((1,), (2, 3)) and elapsed < 1)
    report("F5 gamma = (1/3, 2/3, 0, ...), partition {{1},{2,3}}", ok, f"{g}, {elapsed:.3f}s")


def test_ssc_gamma_is_unit():
    t = time.perf_counter()
    gammas = [characteristic_vector(s) for s in (c4(), ifs_power(c4(), 2),
                                                 IFS.from_maps([("1/3", 0), ("1/3", "2/3")]))]
    elapsed = time.perf_counter() - t
    ok = all(g.exact and g == (1,) for g in gammas) and elapsed < 1
    report("SSC instances give gamma = (1, 0, ...)", ok, f"{elapsed:.3f}s")


def test_connected_attractor_single_component():
    h = halves()
    part = partition(h)
    g = characteristic_vector(h, part)
    v = decide_intersection(h, 1, 2)
    ok = (part.components == ((1, 2),) and part.certified and g == (0, 1) and g[len(h)] == 1
          and isinstance(v, CertifiedIntersect) and v.point == (F(1, 2),))
    report("connected attractor gives one component, gamma_N = 1, witness 1/2", ok, str(g))


def test_power_chain_f5():
    t = time.perf_counter()
    chain = power_chain(f5(), 3)
    elapsed = time.perf_counter() - t
    maps = oracles.maps_1d([("1/5", 1, 0), ("1/5", 1, "3/5"), ("1/5", 1, "4/5")])
    intervals = oracles.cylinder_intervals(maps, 2)
    comps = oracles.closure_components(sorted(intervals), oracles.interval_edges(intervals))
    brute = oracles.gamma_from_components(comps, 9)
    ok = (len(intervals) == 9 and chain.vectors[1].entries == brute
          and brute == {1: F(2, 9), 2: F(4, 9), 3: F(1, 3)}
          and [r.relation for r in chain.relations] == [LESS, LESS]
          and all(v.exact for v in chain.vectors) and elapsed < 60)
    report("power chain gamma(F5) < gamma(F5^2) < gamma(F5^3)", ok, f"{elapsed:.2f}s")


@pytest.mark.parametrize("name", ["F5,F5", "C4,C4^2"])
def test_composition_hausdorff(name):
    phi, psi = (f5(), f5()) if name == "F5,F5" else (c4(), ifs_power(c4(), 2))
    comp = ifs_compose(phi, psi)
    rho = max(phi.ratios)
    r0 = invariant_ball(phi).radius
    bounds = [hausdorff_distance_bound(comp, phi, d) for d in range(1, 9)]
    limit = 2 * rho ** 8 * r0
    monotone = all(b <= a for a, b in zip(bounds, bounds[1:])) and bounds[-1] < bounds[0]
    ok = bounds[-1] <= limit and monotone
    report(f"d_H({name.replace(',', ' o ')}, {name.split(',')[0]}) at depth 8 <= 2 rho^8 R0, monotone",
           ok, f"{bounds[-1]} <= {limit}")


def test_decomposition_identity():
    psi = c4()
    residuals = []
    for m in (2, 3):
        theta = ifs_power(psi, m)
        cells = partition_cells(theta, psi, min_gap(psi))
        quotients = [quotient_ifs(theta, psi, j, cells) for j in (1, 2)]
        residuals.append(decomposition_check(theta, psi, cells, quotients).residual)
    synthetic = decomposition_identity((F(1, 3), F(2, 3)), (F(1, 3), F(2, 3)), [(1, 0), (0, 1)])
    ok = all(r.is_zero() for r in residuals) and synthetic.is_zero()
    report("decomposition residual is exactly zero for C4^2, C4^3 and the synthetic case", ok)


def test_band_arithmetic():
    phi = f5()
    k, _ = normalize_into_band(phi, phi, (F(1, 625), F(1, 125)), build=False)
    right_open = k == 3 and not (F(1, 5) ** 2 * F(1, 5) < F(1, 125))
    c = c4()
    checks = []
    for m in (2, 3):
        psi = ifs_power(c, m)
        band = choose_band(c, psi, min_gap(psi), 1)
        for gamma in (c, ifs_power(c, 2)):
            kk, built = normalize_into_band(c, gamma, band)
            value = F(1, 4) ** kk * gamma.common_ratio
            checks.append(band.contains(value) and built.common_ratio == value
                          and not band.contains(value * 4))
    band = BandParams(0, F(1, 125), F(1, 5))
    checks.append(band.band == (F(1, 625), F(1, 125)) and not band.contains(F(1, 125)))
    ok = right_open and all(checks)
    report("band normalisation lands in [rho eps, eps); rho = 1/5 boundary gives k = 3", ok, f"k={k}")


def _random_system(rng):
    q = rng.choice([2, 3, 4, 5, 6])
    n = rng.choice([2, 3, 4])
    rho = F(1, q)
    grid = q * rng.choice([1, 2, 3])
    specs, maps = [], []
    for _ in range(n):
        t = F(rng.randrange(0, grid + 1), grid)
        sign = rng.choice([1, 1, 1, -1])
        specs.append((rho, t, [[sign]]))
        maps.append((rho, sign, t))
    return IFS.from_maps(specs), maps


def _min_distance(a, b):
    b = sorted(b)
    best = None
    for x in a:
        k = bisect.bisect_left(b, x)
        for y in b[max(k - 1, 0):k + 1]:
            d = abs(x - y)
            if best is None or d < best:
                best = d
    return best


def _address_point(maps, address):
    u, w = address
    p = oracles.fix(oracles.word_map(maps, w))
    return oracles.apply(oracles.word_map(maps, u), p) if u else p


def test_verdict_soundness():
    rng = random.Random(20240611)
    violations = disjoint = intersect = undecided = 0
    for _ in range(200):
        ifs, maps = _random_system(rng)
        graph = adjacency_graph(ifs, Budget(nodes=4000))
        for (i, j), v in graph.verdicts.items():
            if isinstance(v, CertifiedDisjoint):
                disjoint += 1
                a = oracles.image_sample(maps, i, 2, 3)
                b = oracles.image_sample(maps, j, 2, 3)
                if _min_distance(a, b) < v.gap:
                    violations += 1
            elif isinstance(v, CertifiedIntersect):
                intersect += 1
                (u, w), (u2, w2) = v.address, v.other_address
                first = u[0] if u else w[0]
                second = u2[0] if u2 else w2[0]
                p, p2 = _address_point(maps, v.address), _address_point(maps, v.other_address)
                if not (p == p2 == v.point[0] and first == i and second == j):
                    violations += 1
            else:
                undecided += 1
    ok = violations == 0 and disjoint > 0 and intersect > 0
    report("verdict soundness on 200 random systems", ok,
           f"{violations} violations; {disjoint} disjoint, {intersect} intersect, {undecided} undecided")


def _sparse(rng):
    out = {}
    for _ in range(rng.randrange(0, 5)):
        out[rng.randrange(1, 8)] = F(rng.randrange(0, 7), rng.choice([1, 2, 3, 5]))
    return CharVec(out)


def _le(x, y):
    return compare(x, y).relation in (LESS, EQUAL)


def test_order_algebra():
    rng = random.Random(7)
    vecs = [_sparse(rng) for _ in range(1000)]
    violations = 0
    for n in range(1000):
        x, y, z, w = (vecs[rng.randrange(1000)] for _ in range(4))
        rel, back = compare(x, y).relation, compare(y, x).relation
        length = max(x.support, y.support, 1)
        kx, ky = oracles.lex_key(x.entries, length), oracles.lex_key(y.entries, length)
        expected = LESS if kx < ky else GREATER if kx > ky else EQUAL
        if rel != expected:
            violations += 1
        if {rel, back} not in ({LESS, GREATER}, {EQUAL}):
            violations += 1
        if _le(x, y) and _le(y, z) and not _le(x, z):
            violations += 1
        a = F(rng.randrange(1, 50), rng.randrange(1, 10))
        if _le(x, y) and not _le(a * x, a * y):
            violations += 1
        if _le(x, y) and _le(z, w) and not _le(x + z, y + w):
            violations += 1
    report("order algebra on 1000 random sparse vectors", violations == 0, f"{violations} violations")


def test_contradiction_surrogate():
    c3 = IFS.from_maps([("1/3", 0), ("1/3", "2/3")], name="C3")
    statuses = []
    for phi in (f5(), ifs_power(f5(), 2).with_attributes(osc="inherited"), halves()):
        for psi in (c4(), ifs_power(c4(), 2), c3):
            statuses.append(contradiction_trace(phi, psi).status)
    never = CONTRADICTION not in statuses
    # each stage on the SSC instances
    psi = c4()
    theta = ifs_power(psi, 2)
    delta = min_gap(psi)
    band = choose_band(psi, ifs_power(psi, 2), min_gap(ifs_power(psi, 2)), 1)
    cells = partition_cells(theta, psi, delta)
    quotients = [quotient_ifs(theta, psi, j, cells) for j in (1, 2)]
    k, normalised = normalize_into_band(psi, psi, band)
    dec = decomposition_check(theta, psi, cells, quotients)
    stages = (delta == F(1, 2) and band.ell == 3 and cells.cells == ((1, 2), (3, 4))
              and all(q == psi for q in quotients) and band.contains(normalised.common_ratio)
              and dec.holds)
    report("no contradiction reached; every stage certifies on C4 instances", never and stages,
           ", ".join(sorted(set(statuses))))
