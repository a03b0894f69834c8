from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sheafradon.plgeom import (
    Arrangement1D, Arrangement2D, LCSet, Line, Pred, box, build, halfplane, interval,
)

coef = st.integers(-3, 3)
rats = st.fractions(min_value=-4, max_value=4, max_denominator=6)


@st.composite
def lines(draw):
    a, b = draw(coef), draw(coef)
    if (a, b) == (0, 0):
        a = 1
    return Line(a, b, draw(st.integers(-3, 3)))


arrangements = st.lists(lines(), max_size=5).map(Arrangement2D)
points = st.tuples(rats, rats)


def test_counts_examples():
    assert build([Line(0, 1, 0)]).counts() == (0, 1, 2)
    assert build([Line(1, 0, 0), Line(0, 1, 0)]).counts() == (1, 4, 4)
    assert build([Line(1, 0, 0), Line(0, 1, 0), Line(1, 1, 1)]).counts() == (3, 9, 7)


def test_line_normalization():
    assert Line(2, 4, 6) == Line(1, 2, 3)
    assert Line(-1, 0, 2) == Line(1, 0, -2)


def test_pred_flips_relation_on_negative_scale():
    p = Pred.of(-2, 0, 2, "<=")
    assert p.holds((-1, 5)) and not p.holds((-2, 0))


def test_refine_by_present_line_is_identity():
    B = build([Line(1, 0, 0)])
    new, parent = B.refine([Line(1, 0, 0)])
    assert parent == list(range(len(B.cells)))


def test_refine_creates_vertex():
    B = build([Line(1, 0, 0)])
    new, _ = B.refine([Line(0, 1, 0)])
    assert new.counts()[0] == 1


def test_refine_square_by_midline():
    S = build(box(0, 1, 0, 1).hyperplanes())
    new, parent = S.refine([Line(1, 0, Fraction(1, 2))])
    inner = S.locate((Fraction(1, 2), Fraction(1, 2)))
    kids = [c for c, p in enumerate(parent) if p == inner]
    assert sorted(new.cells[c].dim for c in kids) == [1, 2, 2]


def test_locate_examples():
    B = build([Line(1, 0, 1)])
    assert B.cells[B.locate((0, 0))].dim == 2
    assert B.cells[B.locate((1, 0))].dim == 1
    C = build([Line(1, 0, 0), Line(0, 1, 0)])
    assert C.cells[C.locate((0, 0))].dim == 0


def test_compile_examples():
    B = build([Line(0, 1, 0)])
    closed = B.cells_in(halfplane((0, 1), 0, ">="))
    opened = B.cells_in(halfplane((0, 1), 0, ">"))
    assert sorted(B.cells[c].dim for c in closed) == [1, 2]
    assert sorted(B.cells[c].dim for c in opened) == [2]
    S = build(box(0, 1, 0, 1).hyperplanes())
    dims = sorted(S.cells[c].dim for c in S.cells_in(box(0, 1, 0, 1)))
    assert dims == [0, 0, 0, 0, 1, 1, 1, 1, 2]


def test_cells_in_requires_hyperplanes():
    B = build([Line(0, 1, 0)])
    with pytest.raises(ValueError):
        B.cells_in(halfplane((1, 0), 0))


def test_star_and_closure():
    C = build([Line(1, 0, 0), Line(0, 1, 0)])
    v = C.locate((0, 0))
    assert len(C.star(v)) == 9
    e = C.locate((1, 0))
    assert {C.cells[c].dim for c in C.closure(e)} == {0, 1} and len(C.closure(e)) == 2
    f = C.locate((1, 1))
    assert C.star(f) == {f}


def test_interval_arrangement():
    A = Arrangement1D([0, 1])
    assert len(A.cells) == 5
    ids = A.cells_in(interval(0, 1, True, False))
    assert sorted(A.cells[c].dim for c in ids) == [0, 1]


def test_everything_set():
    assert LCSet.everything().contains((100, -7))


@settings(max_examples=100, deadline=None)
@given(arrangements)
def test_affine_euler_characteristic(B):
    assert B.euler_affine() == 1


@settings(max_examples=100, deadline=None)
@given(arrangements, st.lists(lines(), min_size=1, max_size=2), st.lists(points, min_size=1, max_size=8))
def test_refine_commutes_with_locate(B, extra, pts):
    new, parent = B.refine(extra)
    for p in pts:
        assert parent[new.locate(p)] == B.locate(p)


@settings(max_examples=100, deadline=None)
@given(arrangements, st.tuples(coef, coef).filter(lambda v: v != (0, 0)), st.integers(-3, 3))
def test_halfplanes_partition(B, n, r):
    new, _ = B.refine([Line.level(n, r)])
    lo = new.cells_in(halfplane(n, r, "<="))
    hi = new.cells_in(halfplane(n, r, ">"))
    assert lo.isdisjoint(hi) and lo | hi == set(range(len(new.cells)))
