import math
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st
from mpmath import mp, mpf

from ifsx import (
    IFS,
    OrthogonalMap,
    Similitude,
    cylinder_map,
    fixed_point,
    ifs_compose,
    ifs_power,
    left_quotient,
    similarity_dimension,
)
from ifsx import scalar as sc
from ifsx.core import apply_map, compose_similitudes
from ifsx.errors import DimensionMismatch, NonContractingError, ValidationError


def sim(ratio, *t, R=None):
    return Similitude.make(ratio, t, R)


def _mpf(q):
    return mpf(q.numerator) / q.denominator


def as_affine(f):
    """(ratio*sign, offset) of a 1D exact map."""
    return f.ratio * f.orthogonal.rows[0][0], f.translation[0]


# -- maps --------------------------------------------------------------------

def test_apply_map_examples():
    assert apply_map(sim("1/5", 0), (1,)) == (F(1, 5),)
    assert apply_map(sim("1/5", "3/5"), (0,)) == (F(3, 5),)
    swap = sim("1/2", 1, 0, R=[[0, -1], [1, 0]])
    assert apply_map(swap, (0, 0)) == (1, 0)


def test_apply_map_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        apply_map(sim("1/5", 0), (1, 2))


def test_compose_examples():
    assert as_affine(compose_similitudes(sim("1/5", 0), sim("1/5", "3/5"))) == (F(1, 25), F(3, 25))
    assert as_affine(compose_similitudes(sim("1/5", "4/5"), sim("1/5", 0))) == (F(1, 25), F(20, 25))
    h = sim("1/2", 0)
    assert as_affine(compose_similitudes(h, h)) == (F(1, 4), 0)


def test_compose_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        compose_similitudes(sim("1/2", 0), sim("1/2", 0, 0))


def test_left_quotient_examples():
    assert as_affine(left_quotient(sim("1/4", 0), sim("1/16", 0))) == (F(1, 4), 0)
    f, g = sim("1/4", "3/4"), sim("1/16", "3/16")
    q = left_quotient(f, g)
    # (x+3)/4 undone on (x+3)/16 gives x/4 - 9/4; check by re-applying f
    assert as_affine(q) == (F(1, 4), F(-9, 4))
    for x in (F(0), F(1), F(-7, 3)):
        assert apply_map(f, apply_map(q, (x,))) == apply_map(g, (x,))
    with pytest.raises(NonContractingError):
        left_quotient(sim("1/4", 0), sim("1/2", 0))


# 2D exact similitudes with signed permutations and a Pythagorean rotation
ORTHO = [
    [[1, 0], [0, 1]], [[0, -1], [1, 0]], [[-1, 0], [0, 1]], [[0, 1], [1, 0]],
    [["3/5", "-4/5"], ["4/5", "3/5"]],
]
small = st.fractions(min_value=-3, max_value=3, max_denominator=12)
similitudes = st.builds(
    lambda r, R, a, b: Similitude.make(r, (a, b), R),
    st.fractions(min_value=F(1, 20), max_value=F(19, 20), max_denominator=20),
    st.sampled_from(ORTHO), small, small,
)


@given(similitudes, similitudes, similitudes)
def test_compose_associative(f, g, h):
    assert compose_similitudes(compose_similitudes(f, g), h) == compose_similitudes(f, compose_similitudes(g, h))


@given(similitudes, similitudes)
def test_left_quotient_inverts_compose(f, g):
    assert left_quotient(f, compose_similitudes(f, g)) == g


@given(similitudes, similitudes, st.tuples(small, small))
def test_compose_acts_as_composition(f, g, x):
    assert apply_map(compose_similitudes(f, g), x) == apply_map(f, apply_map(g, x))


@given(similitudes)
def test_fixed_point_is_fixed(f):
    p = fixed_point(f)
    assert apply_map(f, p) == p


def test_fixed_point_interval_encloses():
    f = Similitude.make("0.3", ("0.7",), mode=sc.INTERVAL)
    (p,) = fixed_point(f)
    assert sc.lo(p) <= F(1) <= sc.hi(p)


def test_orthogonality_enforced():
    with pytest.raises(ValidationError):
        OrthogonalMap.from_rows([[1, 0], [0, 2]])
    assert OrthogonalMap.from_rows([["3/5", "-4/5"], ["4/5", "3/5"]]).kind == "rational-orthogonal"


def test_interval_rotation_records_tolerance():
    R = OrthogonalMap.rotation(1.0)
    assert R.kind == "interval-orthogonal"
    assert R.tol < F(1, 10**12)


@pytest.mark.parametrize("ratio", ["5/4", "1", "0", "-1/2"])
def test_ratio_must_contract(ratio):
    with pytest.raises(NonContractingError):
        sim(ratio, 0)


def test_similitude_is_immutable():
    f = sim("1/2", 0)
    with pytest.raises(AttributeError):
        f.ratio = F(1, 3)


# -- systems -------------------------------------------------------------------

def test_ifs_needs_two_maps():
    with pytest.raises(ValidationError):
        IFS([sim("1/2", 0)])


def test_ifs_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        IFS([sim("1/2", 0), sim("1/2", 0, 0)])


def test_cylinder_map_examples(F5, C4):
    assert as_affine(cylinder_map(F5, (2, 3))) == (F(1, 25), F(19, 25))
    assert as_affine(cylinder_map(F5, (1,))) == (F(1, 5), 0)
    assert as_affine(cylinder_map(C4, (2, 2))) == (F(1, 16), F(15, 16))
    with pytest.raises(ValidationError):
        cylinder_map(F5, ())
    with pytest.raises(ValidationError):
        cylinder_map(F5, (4,))


def test_compose_examples_systems(F5, C4):
    ff = ifs_compose(F5, F5)
    assert len(ff) == 9
    assert sorted(f.translation[0] * 25 for f in ff) == [0, 3, 4, 15, 18, 19, 20, 23, 24]
    assert ff.provenance == tuple((i, j) for i in (1, 2, 3) for j in (1, 2, 3))
    assert ff.labels[4] == (2, 2)
    cc = ifs_compose(C4, C4)
    assert [f.translation[0] * 16 for f in cc] == [0, 3, 12, 15]


def test_compose_dimension_mismatch_systems(F5):
    planar = IFS.from_maps([("1/2", (0, 0)), ("1/2", ("1/2", 0))])
    with pytest.raises(DimensionMismatch):
        ifs_compose(F5, planar)


def test_power_examples(F5, C4):
    assert ifs_power(F5, 1) is F5
    assert ifs_power(F5, 2) == ifs_compose(F5, F5)
    c3 = ifs_power(C4, 3)
    assert len(c3) == 8 and c3.is_homogeneous and c3.common_ratio == F(1, 64)
    with pytest.raises(ValidationError):
        ifs_power(F5, 0)


def test_power_labels_are_words(F5):
    f3 = ifs_power(F5, 3)
    for i, w in enumerate(f3.labels, 1):
        assert f3[i] == cylinder_map(F5, w)


def test_dimension_homogeneous(F5, C4):
    s = similarity_dimension(F5)
    assert s.symbolic() == "log(3)/log(5)"
    assert s.lower <= F(math.log(3) / math.log(5)) + F(1, 10**12)
    assert abs(s.value - 0.682606194485) < 1e-9
    # N * rho^s == 1 exactly in the symbolic form
    assert F5.weights() == (F(1, 3),) * 3
    c = similarity_dimension(C4)
    assert c.is_exact and c.lower == c.upper == F(1, 2)


def test_dimension_general_matches_closed_form():
    sys_ = IFS.from_maps([("1/2", 0), ("1/4", "3/4")])
    s = similarity_dimension(sys_)
    # t + t^2 = 1 with t = 2^-s
    with mp.workdps(40):
        exact = -mp.log((mp.sqrt(5) - 1) / 2, 2)
        assert _mpf(s.lower) <= exact <= _mpf(s.upper)
    assert s.upper - s.lower <= F(1, 10**12)
    assert abs(s.value - 0.694242) < 1e-6


@given(st.lists(st.fractions(min_value=F(1, 50), max_value=F(9, 10), max_denominator=50), min_size=2, max_size=5))
def test_dimension_enclosure_brackets_root(ratios):
    sys_ = IFS([sim(r, i) for i, r in enumerate(ratios)])
    s = similarity_dimension(sys_)

    def total(t):
        return sum(_mpf(r) ** t for r in ratios)

    with mp.workdps(50):
        assert total(_mpf(s.lower)) >= 1 - mpf(10) ** -30
        assert total(_mpf(s.upper)) <= 1 + mpf(10) ** -30


def test_dimension_preserved_by_composition(F5):
    a = similarity_dimension(F5)
    b = similarity_dimension(ifs_compose(F5, F5))
    assert max(a.lower, b.lower) <= min(a.upper, b.upper)


def test_interval_homogeneity():
    sys_ = IFS.from_maps([("0.2", 0), ("0.2", "0.6"), ("0.2", "0.8")], mode=sc.INTERVAL)
    assert sys_.is_homogeneous
    w = sys_.weights()
    assert all(sc.lo(x) <= F(1, 3) <= sc.hi(x) for x in w)
