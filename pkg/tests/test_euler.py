import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sheafradon import euler
from sheafradon.cellsheaf import compile_sheaf, indicator
from sheafradon.euler import (
    CFun, CFunCircle, EulerRadonTransform, NonConstructible, dual_of_transform, euler_integral, euler_radon,
    euler_radon_dual, inversion_check, local_euler,
)
from sheafradon.plgeom import Arrangement2D, Line, box, halfplane
from sheafradon.radon import LineQuery

HALF = Fraction(1, 2)


def square_fn(value=1, closed=True):
    B = Arrangement2D(box(0, 1, 0, 1).hyperplanes())
    return CFun.indicator(B, B.cells_in(box(0, 1, 0, 1, closed=closed)), value)


def test_local_euler_examples(sheaves):
    phi = local_euler(sheaves["upper_closed"])
    assert phi((0, 0)) == 1 and phi((0, 3)) == 1 and phi((0, -1)) == 0
    psi = local_euler(sheaves["open_square_shifted"])
    assert psi((HALF, HALF)) == -1 and psi((0, 0)) == 0
    low = local_euler(sheaves["lower_cone"])
    assert low((0, 0)) == 1 and low((2, -1)) == 1 and low((0, 1)) == 0


def test_integral_examples():
    assert euler_integral(square_fn()) == 1
    assert euler_integral(square_fn(closed=False)) == 1
    B = Arrangement2D([Line(0, 1, 0)])
    assert euler_integral(CFun.indicator(B, B.cells_in(halfplane((0, 1), 0, ">=")))) == 0


def test_transform_examples():
    assert euler_radon(square_fn(), LineQuery((1, 0), HALF)) == 1
    B = Arrangement2D([Line(0, 1, 0)])
    upper = CFun.indicator(B, B.cells_in(halfplane((0, 1), 0, ">=")))
    assert euler_radon(upper, LineQuery((0, 1), 0)) == -1
    assert euler_radon(CFun.zero(), LineQuery((1, 2), 3)) == 0


def test_dual_examples():
    R = EulerRadonTransform(square_fn())
    assert dual_of_transform(R, (2, 2), check_arcs=True) == 1
    assert dual_of_transform(R, (HALF, HALF), check_arcs=True) == 0


def test_dual_rejects_non_compact():
    with pytest.raises(NonConstructible):
        euler_radon_dual(lambda n, c: 1, (0, 0), [(1, 0)], lambda n: [])


def test_kernel_constants():
    K = euler.derive_kernel_constants()
    assert (K.off_diagonal, K.diagonal) == (1, 0)


def test_inversion_examples():
    assert inversion_check(square_fn()).passed
    assert inversion_check(CFun.zero()).passed
    S = square_fn()
    v = S.base.locate((0, 0))
    phi = S + CFun.indicator(S.base, [v], -2)
    assert phi((0, 0)) == -1
    assert inversion_check(phi, check_arcs=True).passed


def test_inversion_detects_mismatched_inputs():
    """Integral of one function with the transform of another does not reproduce either."""
    phi = square_fn()
    bad = CFun(phi.base, list(phi.values))
    bad.values[phi.base.locate((HALF, HALF))] = 5
    K = euler.derive_kernel_constants()
    y = (2, 2)
    recovered = Fraction(K.off_diagonal * euler_integral(phi) - dual_of_transform(EulerRadonTransform(bad), y),
                         K.denominator)
    assert recovered != phi(y) and recovered != bad(y)


def test_random_inversion_smoke():
    rng = random.Random(99)
    for _ in range(5):
        assert inversion_check(euler.random_cfun(rng, 4)).passed


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(-3, 3), st.integers(-3, 3))
def test_transform_linearity(seed, a, b):
    rng = random.Random(seed)
    f, g = euler.random_cfun(rng, 3), euler.random_cfun(rng, 3)
    h = f.scale(a) + g.scale(b)
    Rf, Rg, Rh = EulerRadonTransform(f), EulerRadonTransform(g), EulerRadonTransform(h)
    for _ in range(10):
        n = (rng.randint(-3, 3), rng.randint(1, 3))
        c = Fraction(rng.randint(-20, 20), rng.randint(1, 4))
        assert Rh(n, c) == a * Rf(n, c) + b * Rg(n, c)
    assert euler_integral(h) == a * euler_integral(f) + b * euler_integral(g)
    y = (Fraction(rng.randint(-6, 6), 2), Fraction(rng.randint(-6, 6), 2))
    assert dual_of_transform(Rh, y) == a * dual_of_transform(Rf, y) + b * dual_of_transform(Rg, y)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_transform_dilation_invariance(seed):
    """R phi(lambda n, lambda c) = R phi(n, c) for lambda > 0."""
    rng = random.Random(seed)
    R = EulerRadonTransform(euler.random_cfun(rng, 4))
    for _ in range(10):
        n = (rng.randint(-3, 3), rng.randint(-3, 3)) or (1, 0)
        if n == (0, 0):
            continue
        c = Fraction(rng.randint(-20, 20), rng.randint(1, 4))
        lam = Fraction(rng.randint(1, 9), rng.randint(1, 9))
        assert R((lam * n[0], lam * n[1]), lam * c) == R(n, c)


# ---------------------------------------------------------------------------
# the circle model

def test_circle_examples():
    whole = CFunCircle.constant(1)
    assert whole.integral() == 0
    assert euler.r_plus(whole)((0, 1)) == 1
    assert euler.r_proj(whole)((0, 1)) == 2
    assert euler.circle_dualities(whole).passed
    p = (Fraction(3, 5), Fraction(4, 5))
    point = CFunCircle.build({p: 1})
    rp = euler.r_plus(point)
    for y in [(1, 0), (-1, 0), (-4, 3), (4, -3), (0, -1), (-1, -1)]:
        assert rp(y) == (1 if p[0] * y[0] + p[1] * y[1] >= 0 else 0)
    assert euler.circle_dualities(point).passed
    zero = CFunCircle.constant(0)
    assert euler.same_function(euler.r_plus(zero), zero)


def test_circle_rejects_bad_points():
    with pytest.raises(ValueError):
        CFunCircle(((Fraction(1), Fraction(1)),), (1,), (0,))
    with pytest.raises(ValueError):
        CFunCircle(((Fraction(0), Fraction(1)), (Fraction(1), Fraction(0))), (1, 1), (0, 0))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_circle_tau_involution_and_polarization(seed):
    phi = euler.random_cfun_circle(random.Random(seed))
    assert euler.same_function(euler.tau(euler.tau(phi)), phi)
    pl = euler.polarize(phi)
    assert euler.same_function(euler.tau(pl), pl)
    assert euler.circle_dualities(phi).passed


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(-3, 3))
def test_circle_linearity(seed, k):
    rng = random.Random(seed)
    f, g = euler.random_cfun_circle(rng), euler.random_cfun_circle(rng)
    lhs = euler.r_plus(euler.add(euler.scale_circle(f, k), g))
    rhs = euler.add(euler.scale_circle(euler.r_plus(f), k), euler.r_plus(g))
    assert euler.same_function(lhs, rhs)
