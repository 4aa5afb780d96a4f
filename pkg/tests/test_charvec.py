from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st
from mpmath import iv

from ifsx import (
    IFS,
    CharVec,
    characteristic_vector,
    compare,
    ifs_compose,
    ifs_power,
    linear_combine,
    partition,
    precedes_or_equal,
    verify_monotonicity,
)
from ifsx.charvec import EQUAL, GREATER, INCOMPARABLE, LESS
from ifsx.errors import PreconditionError, ValidationError

import oracles

F5_MAPS = oracles.maps_1d([("1/5", 1, 0), ("1/5", 1, "3/5"), ("1/5", 1, "4/5")])

entries = st.dictionaries(st.integers(1, 6), st.fractions(min_value=0, max_value=5, max_denominator=9), max_size=4)
vectors = entries.map(CharVec)


def test_gamma_examples(F5, C4):
    assert characteristic_vector(F5) == (F(1, 3), F(2, 3))
    assert str(characteristic_vector(F5)) == "(1/3, 2/3, 0, ...)"
    assert characteristic_vector(C4) == (1,)
    assert characteristic_vector(ifs_power(F5, 2)) == (F(2, 9), F(4, 9), F(1, 3))


def test_gamma_connected_attractor(H2):
    g = characteristic_vector(H2)
    assert g == (0, 1) and g[len(H2)] == 1


@pytest.mark.parametrize("k", [1, 2, 3])
def test_gamma_matches_bruteforce(F5, k):
    intervals = oracles.cylinder_intervals(F5_MAPS, k)
    comps = oracles.closure_components(sorted(intervals), oracles.interval_edges(intervals))
    expected = oracles.gamma_from_components(comps, 3 ** k)
    assert characteristic_vector(ifs_power(F5, k)).entries == expected


@pytest.mark.parametrize("k", [1, 2, 3])
def test_unit_sum_and_support(F5, k):
    ifs = ifs_power(F5, k)
    g = characteristic_vector(ifs)
    assert g.total() == 1
    assert g.support <= len(ifs)


def test_compare_examples(F5):
    r = compare((1,), (F(1, 3), F(2, 3)))
    assert r.relation == LESS and r.index == 2
    x = CharVec((F(1, 3), F(2, 3)))
    assert compare(x, x).relation == EQUAL
    r = compare(characteristic_vector(F5), characteristic_vector(ifs_power(F5, 2)))
    assert r.relation == LESS and r.index == 3
    assert str(r) == "Less"


def test_compare_interval_incomparable():
    x = CharVec({1: iv.mpf([0.3, 0.4])})
    y = CharVec({1: iv.mpf([0.35, 0.5])})
    r = compare(x, y)
    assert r.relation == INCOMPARABLE and r.index == 1
    assert r.needed_precision > 0
    z = CharVec({1: iv.mpf([0.6, 0.7])})
    assert compare(x, z).relation == LESS


@settings(max_examples=300)
@given(vectors, vectors)
def test_compare_agrees_with_reversed_tuple_order(x, y):
    n = max(x.support, y.support, 1)
    kx, ky = oracles.lex_key(x.entries, n), oracles.lex_key(y.entries, n)
    expected = LESS if kx < ky else GREATER if kx > ky else EQUAL
    assert compare(x, y).relation == expected


@given(vectors, vectors)
def test_order_antisymmetric(x, y):
    a, b = compare(x, y).relation, compare(y, x).relation
    assert {a, b} in ({LESS, GREATER}, {EQUAL})


@given(vectors, vectors, vectors)
def test_order_transitive(x, y, z):
    if precedes_or_equal(x, y) and precedes_or_equal(y, z):
        assert precedes_or_equal(x, z)


@given(vectors, vectors, st.fractions(min_value=F(1, 100), max_value=100))
def test_order_scaling(x, y, a):
    if precedes_or_equal(x, y):
        assert precedes_or_equal(a * x, a * y)


@given(vectors, vectors, vectors, vectors)
def test_order_additive(x, y, u, v):
    if precedes_or_equal(x, y) and precedes_or_equal(u, v):
        assert precedes_or_equal(x + u, y + v)


def test_linear_combine_examples(F5):
    assert linear_combine([F(1, 2)] * 2, [(1,), (1,)]) == (1,)
    assert linear_combine([F(1, 3), F(2, 3)], [(1, 0), (0, 1)]) == (F(1, 3), F(2, 3))
    g1, g2 = characteristic_vector(F5), characteristic_vector(ifs_power(F5, 2))
    assert linear_combine([F(1, 2)] * 2, [g1, g2]) == (F(5, 18), F(5, 9), F(1, 6))


def test_linear_combine_validation():
    with pytest.raises(ValidationError):
        linear_combine([F(1, 2), F(1, 3)], [(1,), (1,)])
    with pytest.raises(ValidationError):
        linear_combine([F(3, 2), F(-1, 2)], [(1,), (1,)])
    with pytest.raises(ValidationError):
        linear_combine([1], [(1,), (1,)])


def test_triples_round_trip(F5):
    g = characteristic_vector(ifs_power(F5, 2))
    assert g.to_triples() == [(1, 2, 9), (2, 4, 9), (3, 1, 3)]
    assert CharVec.from_triples(g.to_triples()) == g


def test_charvec_rejects_bad_index():
    with pytest.raises(ValidationError):
        CharVec({0: F(1)})


def test_monotonicity_examples(F5, C4):
    rep = verify_monotonicity(F5, F5)
    assert rep.holds and rep.relation.index == 3
    assert rep.merged == (((2, 2), (2, 3), (3, 1)),)
    rep = verify_monotonicity(F5, ifs_power(F5, 2).with_attributes(osc="inherited"))
    assert rep.holds
    assert rep.gamma_composed == characteristic_vector(ifs_power(F5, 3))
    with pytest.raises(PreconditionError):
        verify_monotonicity(C4, C4)


def test_monotonicity_requires_osc():
    g = IFS.from_maps([("1/5", 0), ("1/5", "3/5"), ("1/5", "4/5")])
    with pytest.raises(PreconditionError):
        verify_monotonicity(g, g)


def test_monotonicity_requires_same_attractor(F5, H2):
    with pytest.raises(PreconditionError):
        verify_monotonicity(F5, H2)


def test_monotonicity_caller_assertion(F5):
    rep = verify_monotonicity(F5, F5, same_attractor=True)
    assert rep.evidence == "asserted by caller" and rep.holds


def test_nonhomogeneous_gamma_is_enclosure():
    ifs = IFS.from_maps([("3/4", 0), ("1/4", "3/4")], osc="declared")
    g = characteristic_vector(ifs)
    assert not g.exact
    assert partition(ifs).components == ((1, 2),)
    total = g.total()
    assert total.a <= 1 <= total.b


def test_composed_weights_follow_provenance(F5):
    comp = ifs_compose(F5, F5)
    assert comp.weights() == (F(1, 9),) * 9
