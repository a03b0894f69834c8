import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sheafradon import contact
from sheafradon.contact import (
    CotPoint, CylCotPoint, KernelPredicate, SphCotPoint, antipodal, chi, chi_inv, chi_minus, chi_plus, chi_plus_inv,
    iota_phi,
)

F = Fraction
seeds = st.integers(0, 10 ** 9)


def test_chi_examples():
    c = chi(CotPoint((F(1), F(0)), (F(0), F(2))))
    assert c == CylCotPoint((0, 1), 0, (-2, 0), 2)
    c = chi(CotPoint((F(0), F(0)), (F(3), F(4))))
    assert c == CylCotPoint((F(3, 5), F(4, 5)), 0, (0, 0), 5)


def test_chi_inv_examples():
    assert chi_inv(CylCotPoint((F(0), F(1)), F(0), (F(-2), F(0)), F(2))) == CotPoint((1, 0), (0, 2))
    r = F(3, 7)
    p = chi_inv(CylCotPoint((F(1), F(0), F(0)), r, (F(0), F(0), F(0)), F(1)))
    assert p == CotPoint((r, 0, 0), (1, 0, 0))


def test_chi_inv_rejects_invalid():
    with pytest.raises(contact.ContactError):
        chi_inv(CylCotPoint((F(1), F(1)), F(0), (F(0), F(0)), F(1)))
    with pytest.raises(contact.ContactError):
        chi_inv(CylCotPoint((F(1), F(0)), F(0), (F(0), F(0)), F(-1)))


def test_sphere_maps_examples():
    p = SphCotPoint((F(1), F(0), F(0)), (F(0), F(2), F(0)))
    assert chi_plus(p) == SphCotPoint((0, -1, 0), (F(1, 2), 0, 0))
    assert chi_minus(p) == SphCotPoint((0, 1, 0), (F(-1, 2), 0, 0))
    assert antipodal(chi_plus(p)) == chi_minus(p)
    assert chi_plus_inv(chi_plus(p)) == p


def test_iota_phi_examples():
    assert iota_phi((F(1), F(0), F(0)), (F(0), F(1), F(0))) == CylCotPoint((0, 1, 0), 0, (-1, 0, 0), 1)
    p = (F(3, 5), F(4, 5))
    assert iota_phi(p, p) == CylCotPoint(p, 1, (0, 0), 1)


def test_radon_sphere_example():
    x, b = (F(1), F(1)), ((F(0), F(1)), F(2))
    assert KernelPredicate("Radon").expression(x, b) == -1
    ra, sa = contact.emb_RaS_j1(x)
    rb, sb = contact.emb_RaS_j2(b)
    assert contact.vdot(ra, rb) == -1 and sa * sb == 15
    assert KernelPredicate("Radon")(x, b) == KernelPredicate("SphMinus")(ra, rb)


def test_restriction_identities():
    for name in ("raS", "ftRa", "ftS", "fsSph", "iotaPhi"):
        r = contact.diagram_check(name, 2, 500, seed=3)
        assert r["pass"] and r["mismatches"] == 0, name
    r = contact.diagram_check("raS", 3, 300, seed=4)
    assert r["pass"]


def test_negative_embedding_matches_positive_kernel():
    r = contact.diagram_check("raSneg", 2, 500, seed=5)
    assert r["matches"] == ["SphPlus"]


def test_wrong_kernel_is_detected():
    rng = random.Random(0)
    rep = contact.kernel_restriction_check("RaS_j1", "RaS_j2", "Radon", "SphPlus", contact.radon_samples(rng, 2, 200))
    assert not rep.passed and rep.mismatches


def test_symplectic_residuals():
    assert contact.symplectic_check("chi", 2, 10, seed=1).max_residual < 1e-8
    assert contact.symplectic_check("chi", 3, 10, seed=2).max_residual < 1e-8
    # the identity is exact; what remains is central-difference roundoff, about eps / h
    assert contact.symplectic_check("identity", 2, 5).max_residual < 1e-10
    assert contact.symplectic_check("chiPlusHom", 2, 10).max_residual < 1e-7


def test_displayed_chi_plus_is_not_symplectic():
    assert contact.symplectic_check("chiPlus", 2, 10).max_residual > 1.0


def test_chi_residual_at_spec_point():
    s, l = contact.chi_symplectic_residual([1.0, 0.0], [0.0, 2.0], 1e-5)
    assert max(s, l) < 1e-8


def test_chi_residual_under_covector_scaling():
    a = max(contact.chi_symplectic_residual([1.0, 0.5], [0.3, 1.1], 1e-5))
    b = max(contact.chi_symplectic_residual([1.0, 0.5], [0.6, 2.2], 1e-5))
    assert a < 1e-8 and b < 1e-8


def test_vacuous_batteries():
    assert contact.exact_chi_battery(2, 0).passed
    assert contact.symplectic_check("chi", 2, 0).max_residual == 0.0


@settings(max_examples=200, deadline=None)
@given(seeds, st.integers(2, 4))
def test_chi_roundtrip_and_constraints(seed, n):
    rng = random.Random(seed)
    p = contact.random_cotpoint(rng, n)
    c = chi(p)
    assert chi_inv(c) == p
    assert c.is_exactly_valid() and c.etar == contact.vnorm(p.xi)


@settings(max_examples=200, deadline=None)
@given(seeds, st.fractions(min_value=F(1, 50), max_value=50))
def test_chi_dilation_equivariance(seed, lam):
    p = contact.random_cotpoint(random.Random(seed), 3)
    c = chi(p)
    d = chi(CotPoint(p.x, contact.vscale(lam, p.xi)))
    assert d.nhat == c.nhat and d.r == c.r
    assert d.eta == contact.vscale(lam, c.eta) and d.etar == lam * c.etar
    assert chi_inv(d) == CotPoint(p.x, contact.vscale(lam, p.xi))


@settings(max_examples=200, deadline=None)
@given(seeds, st.integers(1, 3))
def test_sphere_squares_commute(seed, n):
    p = contact.random_sph_cotpoint(random.Random(seed), n)
    assert antipodal(chi_plus(p)) == chi_minus(p)
    assert chi_plus(antipodal(p)) == chi_minus(p)
    assert chi_plus(p).check() and chi_minus(p).check()
    assert chi_plus_inv(chi_plus(p)) == p
    assert chi_plus_inv(chi_plus(p, True), True) == p


@settings(max_examples=300, deadline=None)
@given(seeds)
def test_ft_kernel_swapped_pair(seed):
    rng = random.Random(seed)
    for (x, s), (y, t) in contact.ft_samples(rng, 2, 5):
        ft = KernelPredicate("FT")((x, s), (y, t))
        assert ft == KernelPredicate("FTInv")((contact.vscale(-1, x), t), (y, s))


@settings(max_examples=200, deadline=None)
@given(seeds)
def test_fourier_sato_restriction(seed):
    rng = random.Random(seed)
    for x, y in contact.sphere_samples(rng, 2, 5):
        assert KernelPredicate("SphMinus")(x, y) == KernelPredicate("FS_A")(x, y)


@settings(max_examples=100, deadline=None)
@given(seeds, st.integers(2, 4))
def test_iota_phi_agrees_with_chi(seed, n):
    rng = random.Random(seed)
    q = contact.random_rational_vector(rng, n)
    p = contact.pythagorean_unit(rng, n)
    assert iota_phi(q, p) == chi(CotPoint(q, p))


@settings(max_examples=100, deadline=None)
@given(seeds, st.integers(2, 5))
def test_pythagorean_units_are_unit(seed, n):
    u = contact.pythagorean_unit(random.Random(seed), n)
    assert contact.vdot(u, u) == 1


def test_householder_is_orthogonal():
    rng = random.Random(1)
    for _ in range(20):
        x = contact.pythagorean_unit(rng, 3)
        H = contact.householder_to(x)
        assert H((F(0), F(0), F(1))) == x
        e = [H(v) for v in ((F(1), F(0), F(0)), (F(0), F(1), F(0)))]
        assert contact.vdot(e[0], e[1]) == 0 and contact.vdot(e[0], e[0]) == 1


def test_float_chi_matches_exact():
    p = contact.random_cotpoint(random.Random(8), 3)
    exact = chi(p)
    fl = chi(CotPoint(tuple(map(float, p.x)), tuple(map(float, p.xi))))
    assert max(abs(a - float(b)) for a, b in zip(fl.as_array(), exact.as_array())) < 1e-12
    assert math.isclose(fl.etar, float(exact.etar))
