from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from sheafradon.exactlin import (
    ChainComplex, ChainMap, GradedDims, Mat, cohomology, cone, fiber, fmt_rat, induced_rank, nullspace, rank, rat,
)

small = st.integers(-3, 3)


@st.composite
def matrices(draw, max_dim=4):
    r = draw(st.integers(0, max_dim))
    c = draw(st.integers(0, max_dim))
    rows = [[draw(small) for _ in range(c)] for _ in range(r)]
    return Mat.from_rows(rows, cols=c)


@st.composite
def chain_maps(draw):
    """A random map between two-term complexes a0 -> a1 and b0 -> b1 built to commute."""
    a0, a1, b0, b1 = (draw(st.integers(0, 3)) for _ in range(4))
    dA = Mat.from_rows([[draw(small) for _ in range(a0)] for _ in range(a1)], cols=a0)
    f0 = Mat.from_rows([[draw(small) for _ in range(a0)] for _ in range(b0)], cols=a0)
    dB = Mat.from_rows([[draw(small) for _ in range(b0)] for _ in range(b1)], cols=b0)
    # f1 must satisfy f1 dA = dB f0; take the zero target differential when no solution is obvious
    f1 = Mat.zeros(b1, a1)
    if not (dB @ f0).is_zero():
        dB = Mat.zeros(b1, b0)
    A = ChainComplex({0: a0, 1: a1}, {0: dA})
    B = ChainComplex({0: b0, 1: b1}, {0: dB})
    return ChainMap(A, B, {0: f0, 1: f1})


def test_rank_examples():
    assert rank(Mat.identity(2)) == 2
    assert rank(Mat.zeros(1, 1)) == 0
    assert rank(Mat.from_rows([[1, 2], [2, 4]])) == 1


def test_rank_exact_over_rationals():
    m = Mat.from_rows([[Fraction(1, 3), Fraction(1, 7)], [Fraction(7, 3), 1]])
    assert rank(m) == 1


def test_nullspace_dimension():
    m = Mat.from_rows([[1, 2, 3], [2, 4, 6]])
    ns = nullspace(m)
    assert len(ns) == 2
    for v in ns:
        assert m.apply(v) == {}


def test_cohomology_examples():
    assert cohomology(ChainComplex({0: 1})) == {0: 1}
    acyclic = ChainComplex({0: 1, 1: 1}, {0: Mat.identity(1)})
    assert cohomology(acyclic) == {}
    # cellular cochains of [a, b]: two vertices in degree 0, one edge in degree 1
    interval = ChainComplex({0: 2, 1: 1}, {0: Mat.from_rows([[-1, 1]])})
    assert cohomology(interval) == {0: 1}


def test_cone_and_fiber_examples():
    Q = ChainComplex({0: 1})
    assert cohomology(cone(ChainMap.identity(Q))) == {}
    assert cohomology(fiber(ChainMap.zero(Q, ChainComplex.zero()))) == {0: 1}
    assert cohomology(cone(ChainMap.zero(ChainComplex.zero(), Q))) == {0: 1}


def test_cone_of_zero_map_is_sum_with_shift():
    Q = ChainComplex({0: 1})
    assert cohomology(cone(ChainMap.zero(Q, Q))) == {-1: 1, 0: 1}


def test_induced_rank():
    Q = ChainComplex({0: 1})
    assert induced_rank(ChainMap.identity(Q), 0) == 1
    assert induced_rank(ChainMap.zero(Q, Q), 0) == 0


def test_shape_checks():
    import pytest
    with pytest.raises(ValueError):
        ChainComplex({0: 2, 1: 1}, {0: Mat.identity(2)})
    with pytest.raises(ValueError):
        ChainComplex({0: 1, 1: 1, 2: 1}, {0: Mat.identity(1), 1: Mat.identity(1)})


def test_graded_dims():
    g = GradedDims({0: 1, -1: 2, 3: 0})
    assert g.total == 3 and g.euler == -1
    assert g.shift(1) == {-1: 1, -2: 2}
    assert (g + GradedDims({0: 1})) == {0: 2, -1: 2}
    assert g.to_json() == {"-1": 2, "0": 1}


def test_rat_roundtrip():
    for s in ("3/4", "-2", "0", "10/5"):
        assert rat(fmt_rat(rat(s))) == rat(s)
    assert fmt_rat(Fraction(-3, 6)) == "-1/2"


@settings(max_examples=300, deadline=None)
@given(matrices())
def test_rank_equals_transpose_rank(m):
    assert rank(m) == rank(m.transpose())


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_rank_nullity(m):
    assert rank(m) + len(nullspace(m)) == m.cols


@settings(max_examples=150, deadline=None)
@given(chain_maps())
def test_cone_euler_characteristic(f):
    assert cone(f).euler() == f.target.euler() - f.source.euler()
    assert cohomology(cone(f)).euler == cone(f).euler()


@settings(max_examples=100, deadline=None)
@given(chain_maps(), st.dictionaries(st.integers(-1, 2), st.integers(0, 2), max_size=3))
def test_cohomology_invariant_under_padding(f, extra):
    C = cone(f)
    padded = C.pad(extra)
    expect = cohomology(C) + GradedDims(extra)
    assert cohomology(padded) == expect
