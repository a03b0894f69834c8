import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sheafradon.cellsheaf import (
    IndicatorSpec, SheafError, SheafSpec, compact_cohomology, compile_sheaf, cone_of, constant_sheaf, direct_sum,
    identity_morphism, indicator, microstalk, random_morphism, sections, singular_support, stalk_at,
    tamarkin_project, zero_sheaf,
)
from sheafradon.exactlin import GradedDims
from sheafradon.plgeom import Arrangement1D, Arrangement2D, LCSet, Line, Pred, box, halfplane, interval

H = halfplane((0, 1), 0, ">=")
HOPEN = halfplane((0, 1), 0, ">")
SQUARE = box(0, 1, 0, 1)
HALF = Fraction(1, 2)


def test_constant_sheaf_stalks():
    K = constant_sheaf()
    assert stalk_at(K, (3, -1)) == {0: 1}
    assert singular_support(K).is_empty()


def test_indicator_stalks():
    F = compile_sheaf(indicator(H))
    assert stalk_at(F, (0, 0)) == {0: 1}
    assert stalk_at(F, (0, 5)) == {0: 1}
    assert stalk_at(F, (0, -1)) == {}
    assert stalk_at(compile_sheaf(indicator(HOPEN)), (0, 0)) == {}


def test_superposition_stalk(sheaves):
    F = sheaves["superposition"]
    assert stalk_at(F, (HALF, HALF)) == {0: 1, -1: 1}


def test_sections_examples():
    K = constant_sheaf()
    assert sections(K, range(len(K.base.cells))) == {0: 1}
    F = compile_sheaf(indicator(H))
    lower = F.base.cells_in(halfplane((0, 1), 0, "<"))
    assert sections(F, lower) == {}
    S = compile_sheaf(indicator(SQUARE))
    inner = S.base.locate((HALF, HALF))
    assert sections(S, S.base.star(inner)) == {0: 1}


def test_compact_cohomology_examples():
    K = compile_sheaf(SheafSpec((IndicatorSpec(LCSet.everything()),)),
                      base=Arrangement2D([Line(0, 1, 0), Line(1, 0, 0), Line(1, 0, 1)]))
    B = K.base
    seg = B.cells_in(LCSet.of(Pred.of(0, 1, 0, "="), Pred.of(1, 0, 0, ">="), Pred.of(1, 0, 1, "<=")))
    open_seg = B.cells_in(LCSet.of(Pred.of(0, 1, 0, "="), Pred.of(1, 0, 0, ">"), Pred.of(1, 0, 1, "<")))
    assert compact_cohomology(K, seg) == {0: 1}
    assert compact_cohomology(K, open_seg) == {1: 1}
    assert compact_cohomology(K, B.cells_in(H)) == {}


def test_microstalk_examples():
    F = compile_sheaf(indicator(H))
    assert microstalk(F, (0, 0), (0, 1)).total == 1
    assert microstalk(F, (0, 0), (0, -1)).is_zero()
    K = constant_sheaf()
    for xi in ((1, 0), (0, -1), (3, 7)):
        assert microstalk(K, (1, 2), xi).is_zero()


def test_singular_support_halfplanes():
    for S, sign in ((H, 1), (HOPEN, -1)):
        rep = singular_support(compile_sheaf(indicator(S)))
        assert rep.entries
        for e in rep.entries:
            assert e.sector.kind == "ray"
            assert e.sector.u[0] == 0 and e.sector.u[1] * sign > 0


def test_cone_examples(sheaves):
    F = compile_sheaf(indicator(SQUARE))
    C = cone_of(F, F, identity_morphism(F))
    assert all(C.stalk_dims(c).is_zero() for c in range(len(C.base.cells)))
    lower = compile_sheaf(indicator(halfplane((0, 1), 0, "<=")))
    G = sheaves["lower_cone"]
    for p in ((0, 0), (0, 1), (0, -1), (5, HALF), (-2, -HALF)):
        assert stalk_at(G, p) == stalk_at(lower, p)
    Z = zero_sheaf(F.base)
    C0 = cone_of(Z, F, {})
    for c in range(len(F.base.cells)):
        assert C0.stalk_dims(c) == F.stalk_dims(c)


def test_half_open_quadrant():
    F = compile_sheaf(indicator(LCSet.of(Pred.of(1, 0, 0, ">"), Pred.of(0, 1, 0, ">="))))
    assert stalk_at(F, (1, 0)) == {0: 1} and stalk_at(F, (0, 1)) == {}
    assert microstalk(F, (1, 0), (0, 1)).total == 1
    assert microstalk(F, (0, 1), (-1, 0)).total == 1


def test_projector_examples():
    P1 = tamarkin_project(compile_sheaf(indicator(interval(0, 1), dimension=1))).sheaf
    assert [stalk_at(P1, t) for t in (-1, 0, HALF, 1, 5)] == [{}, {0: 1}, {0: 1}, {0: 1}, {0: 1}]
    P2 = tamarkin_project(compile_sheaf(indicator(interval(0, 1, False, False), dimension=1))).sheaf
    assert [stalk_at(P2, t) for t in (-1, 0, HALF, 1, 5)] == [{}, {}, {}, {1: 1}, {1: 1}]
    P0 = tamarkin_project(zero_sheaf(Arrangement1D([]))).sheaf
    assert stalk_at(P0, 0) == {}


def test_projector_rejects_unbounded():
    F = compile_sheaf(indicator(interval(None, 0), dimension=1))
    with pytest.raises(SheafError):
        tamarkin_project(F, strict=False)
    G = compile_sheaf(indicator(interval(0, None), dimension=1))
    with pytest.raises(SheafError):
        tamarkin_project(G)
    assert tamarkin_project(G, strict=False).barcode


# ---------------------------------------------------------------------------
# properties

small = st.integers(-2, 2)


@st.composite
def indicator_specs(draw, max_terms=2):
    terms = []
    for _ in range(draw(st.integers(1, max_terms))):
        kind = draw(st.sampled_from(["box", "half"]))
        if kind == "box":
            x0, y0 = draw(small), draw(small)
            s = box(x0, x0 + draw(st.integers(1, 2)), y0, y0 + draw(st.integers(1, 2)), closed=draw(st.booleans()))
        else:
            n = draw(st.sampled_from([(1, 0), (0, 1), (1, 1), (1, -1)]))
            s = halfplane(n, draw(small), draw(st.sampled_from(["<=", "<", ">=", ">"])))
        terms.append(IndicatorSpec(s, draw(st.integers(-1, 1)), draw(st.integers(1, 2))))
    return SheafSpec(tuple(terms))


probe_points = [(HALF, HALF), (0, 0), (1, 0), (-1, 1), (Fraction(3, 2), HALF), (2, 2)]
probe_covectors = [(0, 1), (1, 0), (-1, -1), (1, -2)]


@settings(max_examples=25, deadline=None)
@given(indicator_specs(), st.sampled_from([Line(1, 1, 1), Line(1, -2, 0), Line(0, 1, HALF)]))
def test_refinement_invariance(spec, extra):
    F = compile_sheaf(spec)
    G = compile_sheaf(spec, extra=[extra])
    for p in probe_points:
        assert stalk_at(F, p) == stalk_at(G, p)
    for p in probe_points[:3]:
        for xi in probe_covectors:
            assert microstalk(F, p, xi) == microstalk(G, p, xi)
    S = halfplane((0, 1), 0, "<=")
    if Line(0, 1, 0) in F.base.lines:
        assert compact_cohomology(F, F.base.cells_in(S)) == compact_cohomology(G, G.base.cells_in(S))


@settings(max_examples=20, deadline=None)
@given(indicator_specs(), indicator_specs())
def test_microstalk_additivity(a, b):
    F, G = compile_sheaf(a), compile_sheaf(b)
    S = direct_sum(F, G)
    for p in probe_points[:4]:
        for xi in probe_covectors:
            assert microstalk(S, p, xi) == microstalk(F, p, xi) + microstalk(G, p, xi)


@settings(max_examples=15, deadline=None)
@given(indicator_specs(1), indicator_specs(1), st.integers(0, 10 ** 6))
def test_singular_support_triangle_inequality(a, b, seed):
    base = Arrangement2D(a.hyperplanes() + b.hyperplanes())
    F, G = compile_sheaf(a, base=base), compile_sheaf(b, base=base)
    f = random_morphism(F, G, random.Random(seed))
    C = cone_of(F, G, f)
    sf, sg = singular_support(F), singular_support(G)
    for e in singular_support(C).entries:
        assert sf.covers(e.cell, e.covector) or sg.covers(e.cell, e.covector)


@st.composite
def sheaves_1d(draw):
    terms = []
    for _ in range(draw(st.integers(1, 3))):
        lo = Fraction(draw(st.integers(-4, 4)), 2)
        hi = lo + Fraction(draw(st.integers(0, 4)), 2)
        lc, hc = draw(st.booleans()), draw(st.booleans())
        if lo == hi:
            lc = hc = True
        terms.append(IndicatorSpec(interval(lo, hi, lc, hc), draw(st.integers(-1, 1)), draw(st.integers(1, 2))))
    return compile_sheaf(SheafSpec(tuple(terms), 1))


@settings(max_examples=40, deadline=None)
@given(sheaves_1d())
def test_projector_properties(F):
    P = tamarkin_project(F)
    assert not singular_support(P.sheaf).has_negative()
    PP = tamarkin_project(P.sheaf, strict=False)
    pts = sorted(set(P.sheaf.base.breakpoints) | set(F.base.breakpoints))
    probes = [pts[0] - 1] + pts + [(x + y) / 2 for x, y in zip(pts, pts[1:])] + [pts[-1] + 1] if pts else [0]
    for t in probes:
        assert stalk_at(PP.sheaf, t) == stalk_at(P.sheaf, t)
    # stalk of P(F) at t is compactly supported cohomology of F on (-inf, t]
    for t in probes:
        G = F.refine([t])
        assert stalk_at(P.sheaf, t) == compact_cohomology(G, G.base.cells_in(interval(hi=t)))
