import io
from fractions import Fraction

import pytest

from sheafradon import contact, knotlab
from sheafradon.knotlab import KnotError, PLKnot


def test_square_unknot_sampling():
    k = knotlab.square_unknot()
    s = knotlab.sample_conormal(k, 1, 4)
    assert len(s) == 16
    for smp in s:
        assert abs(sum(a * b for a, b in zip(smp.p, smp.tangent))) < 1e-15


def test_exact_sampling_is_exactly_normal():
    s = knotlab.sample_conormal(knotlab.square_unknot(), 3, 8, exact=True)
    for smp in s:
        assert sum(a * b for a, b in zip(smp.p, smp.tangent)) == 0
        assert sum(a * a for a in smp.p) == 1
    assert knotlab.map_conormal(s).passed()


def test_exact_sampling_needs_rational_lengths():
    k = PLKnot(((0, 0, 0), (1, 1, 0), (0, 1, 0)))
    with pytest.raises(KnotError):
        knotlab.sample_conormal(k, 1, 4, exact=True)


def test_planar_unknot_vertical_covector():
    q = (Fraction(1, 2), 0, 0)
    c = contact.chi(contact.CotPoint(q, (0, 0, 1)))
    assert c == contact.CylCotPoint((0, 0, 1), 0, (Fraction(-1, 2), 0, 0), 1)


def test_trefoil():
    k = knotlab.trefoil()
    assert len(k.points) == 12
    assert list(k.points) == knotlab.trefoil_vertices()
    s = knotlab.sample_conormal(k, 10, 16)
    assert len(s) == 1920
    rep = knotlab.map_conormal(s)
    assert rep.passed()
    assert rep.route_agreement < 1e-12 and rep.legendrian_residual < 1e-6
    assert all(c.etar > 0 for c in rep.images)


def test_degenerate_knots_rejected():
    with pytest.raises(KnotError):
        PLKnot(((0, 0, 0), (0, 0, 0), (1, 0, 0)))
    with pytest.raises(KnotError):
        PLKnot(((0, 0, 0), (1, 0, 0)))
    with pytest.raises(KnotError):
        knotlab.sample_conormal(knotlab.square_unknot(), 0, 4)


def test_json_roundtrip():
    k = knotlab.trefoil()
    assert PLKnot.from_json(k.to_json()) == k


def test_csv_dump():
    rep = knotlab.map_conormal(knotlab.sample_conormal(knotlab.square_unknot(), 1, 4))
    buf = io.StringIO()
    knotlab.write_csv(rep, buf)
    lines = buf.getvalue().splitlines()
    assert lines[0].split(",") == knotlab.CSV_COLUMNS
    assert len(lines) == 17


def test_legendrian_residual_sees_a_non_legendrian_lift():
    """Shifting r by a function of the base point breaks the contact condition."""
    s = knotlab.sample_conormal(knotlab.square_unknot(), 2, 4)
    h = 1e-4
    worst = 0.0
    for smp in s:
        def lift(q):
            c = contact.chi(contact.CotPoint(tuple(map(float, q)), tuple(map(float, smp.p))))
            return contact.CylCotPoint(c.nhat, c.r + q[0], c.eta, c.etar)
        q = tuple(map(float, smp.q))
        t = smp.tangent
        qp = tuple(a + h * b for a, b in zip(q, t))
        qm = tuple(a - h * b for a, b in zip(q, t))
        worst = max(worst, knotlab._one_form(lift(q), lift(qp), lift(qm), h))
    assert worst > 0.5
