import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sheafradon import acceptance, radon
from sheafradon.cellsheaf import compile_sheaf, constant_sheaf, direct_sum, indicator, zero_sheaf
from sheafradon.exactlin import GradedDims
from sheafradon.plgeom import Arrangement2D, box
from sheafradon.radon import LineQuery, UnsupportedCovector

HALF = Fraction(1, 2)


def test_stalk_examples(sheaves):
    S, H = sheaves["square"], sheaves["upper_closed"]
    assert radon.radon_stalk(S, LineQuery((1, 0), HALF)) == {0: 1}
    assert radon.radon_stalk(H, LineQuery((0, 1), 0)) == {1: 1}
    for r in (-3, 0, HALF, 4):
        assert radon.radon_stalk(H, LineQuery((1, 1), r)) == {}


def test_query_normalizes_by_norm():
    # {x . (0,2) <= 1 * 2} is {x2 <= 1}
    q = LineQuery((0, 2), 1)
    assert q.contains((0, 1)) and not q.contains((0, Fraction(3, 2)))
    # irrational norm: {x1 + x2 <= sqrt 2}
    q = LineQuery((1, 1), 1)
    assert q.contains((Fraction(7, 10), Fraction(7, 10))) and not q.contains((Fraction(71, 100), Fraction(71, 100)))


def test_wall_examples(sheaves):
    assert radon.wall_offsets(sheaves["square"], (1, 0)) == [0, 1]
    assert radon.wall_offsets(sheaves["upper_closed"], (0, 1)) == [0]
    assert radon.wall_offsets(sheaves["constant"], (3, 1)) == []
    ws = radon.wall_set(sheaves["square"], [(1, 2)])
    assert ws.offsets[(1, 2)] == [0, 1, 2, 3]


def test_barcode_examples(sheaves):
    bc, _ = radon.direction_barcode(sheaves["square"], (1, 0))
    assert [str(b) for b in bc] == ["H^0 [0, +inf) x1"]
    bc, _ = radon.direction_barcode(sheaves["upper_closed"], (0, 1))
    assert [str(b) for b in bc] == ["H^1 [0, +inf) x1"]
    bc, _ = radon.direction_barcode(zero_sheaf(Arrangement2D([])), (1, 0))
    assert len(bc) == 0


def test_barcode_matches_stalks(sheaves):
    for name, F in sheaves.items():
        for d in [(1, 0), (1, 1), (-1, 2)]:
            bc, table = radon.direction_barcode(F, d)
            for t, g in table:
                assert bc.stalk(t) == g, (name, d, t)


def test_ss_image(sheaves):
    rep = radon.ss_image_check(sheaves["upper_closed"])
    assert rep.passed
    assert rep.wall_base_points() == {((0, 1), 0)}
    K = radon.ss_image_check(sheaves["constant"])
    assert K.passed and not K.predictions
    S = radon.ss_image_check(sheaves["square"], radon.direction_grid(3))
    assert S.passed and len(S.grid) == 32


def test_square_walls_are_vertex_sinusoids(sheaves):
    S = sheaves["square"]
    corners = [(0, 0), (1, 0), (0, 1), (1, 1)]
    for d in radon.direction_grid():
        walls = radon.effective_walls(S, d)
        # the only wall of the square is the support-function minimum
        assert walls == [min(d[0] * v[0] + d[1] * v[1] for v in corners)]


def test_simpleness_examples(sheaves):
    r = radon.simpleness_transfer(sheaves["upper_closed"], (0, 0), (0, 1))
    assert r.passed and r.microstalk_dim == 1 and r.endpoint_multiplicity == 1
    assert radon.conormal_samples(sheaves["constant"]) == []
    r = radon.simpleness_transfer(sheaves["doubled_square"], (1, 1), (-1, -1))
    assert r.passed and r.microstalk_dim == 2


def test_simpleness_rejects_transverse_covector(sheaves):
    with pytest.raises(UnsupportedCovector):
        radon.simpleness_transfer(sheaves["square"], (1, 0), (1, 1))


def test_direct_sum_additivity(sheaves):
    F, G = sheaves["square"], sheaves["upper_open"]
    S = direct_sum(F, G)
    rng = random.Random(11)
    for _ in range(30):
        q = acceptance.random_query(rng)
        assert radon.radon_stalk(S, q) == radon.radon_stalk(F, q) + radon.radon_stalk(G, q)
    for d in [(1, 0), (0, 1), (1, -1)]:
        bs = radon.direction_barcode(S, d)[0]
        bf, bg = radon.direction_barcode(F, d)[0], radon.direction_barcode(G, d)[0]
        for t in (-2, 0, HALF, 1, 3):
            assert bs.stalk(t) == bf.stalk(t) + bg.stalk(t)


def test_positive_covector_confinement(sheaves):
    """Bars are born closed and never die: ranks only change as the half-plane grows."""
    for name, F in sheaves.items():
        for d in radon.direction_grid():
            for b in radon.direction_barcode(F, d)[0]:
                assert b.birth is None or b.birth_closed, (name, d, str(b))


@pytest.mark.parametrize("name", sorted(acceptance.acceptance_sheaves()))
def test_chamber_constancy(name, sheaves):
    F = sheaves[name]
    rng = random.Random(hash(name) % 1000)
    for d in [(1, 0), (1, 1), (2, -1), (0, -1)]:
        walls = radon.wall_offsets(F, d)
        bounds = [None] + walls + [None]
        for lo, hi in zip(bounds, bounds[1:]):
            ref = radon.radon_stalk(F, LineQuery(d, acceptance.rational_between(d, lo, hi)))
            for _ in range(20):
                lo_f = float(lo) if lo is not None else (float(hi) - 5 if hi is not None else -5)
                hi_f = float(hi) if hi is not None else lo_f + 5
                c = Fraction(rng.uniform(lo_f, hi_f)).limit_denominator(10 ** 6)
                if (lo is not None and c <= lo) or (hi is not None and c >= hi):
                    continue
                norm2 = d[0] ** 2 + d[1] ** 2
                r = Fraction(float(c) / norm2 ** 0.5).limit_denominator(10 ** 9)
                q = LineQuery(d, r)
                if (lo is not None and q.cmp_offset(lo) <= 0) or (hi is not None and q.cmp_offset(hi) >= 0):
                    continue
                assert radon.radon_stalk(F, q) == ref


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(sorted(acceptance.acceptance_sheaves())), st.integers(-3, 3), st.integers(-3, 3),
       st.fractions(min_value=-5, max_value=5, max_denominator=5))
def test_euler_compatibility(name, a, b, r):
    from sheafradon.euler import EulerRadonTransform, local_euler
    if (a, b) == (0, 0):
        a = 1
    F = acceptance.acceptance_sheaves()[name]
    q = LineQuery((a, b), r)
    assert radon.radon_stalk(F, q).euler == EulerRadonTransform(local_euler(F)).at_query(q)
