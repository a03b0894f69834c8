"""Decategorified Radon inversion: recover a constructible function from its half-plane integrals."""
import random
from fractions import Fraction

from sheafradon import euler
from sheafradon.euler import CFun, EulerRadonTransform, dual_of_transform, euler_integral
from sheafradon.plgeom import Arrangement2D, box

B = Arrangement2D(box(0, 1, 0, 1).hyperplanes())
phi = CFun.indicator(B, B.cells_in(box(0, 1, 0, 1)))
K = euler.derive_kernel_constants()
print("composed kernel: off-diagonal", K.off_diagonal, "diagonal", K.diagonal)
R = EulerRadonTransform(phi)
I = euler_integral(phi)
for y in [(Fraction(1, 2), Fraction(1, 2)), (0, 0), (2, 2), (1, Fraction(1, 3))]:
    rr = dual_of_transform(R, y)
    print(f"  y={tuple(map(str, y))}: phi={phi(y)}  R'R phi={rr}  recovered={(K.off_diagonal * I - rr) // K.denominator}")

rng = random.Random(1)
ok = sum(euler.inversion_check(euler.random_cfun(rng, 5)).passed for _ in range(10))
print(f"random functions inverted: {ok}/10")

print("\ncircle model")
circle = euler.random_cfun_circle(random.Random(4))
print("  phi:", circle.to_json())
print("  dualities:", euler.circle_dualities(circle).to_json())
