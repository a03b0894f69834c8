"""The contact transform on rational points, its symplectic residual, and the trefoil conormal."""
import random
from fractions import Fraction

from sheafradon import contact, knotlab

p = contact.CotPoint((Fraction(1), Fraction(0)), (Fraction(0), Fraction(2)))
c = contact.chi(p)
print("chi((1,0),(0,2)) =", c)
print("round trip:", contact.chi_inv(c) == p)

rng = random.Random(0)
q = contact.random_cotpoint(rng, 3)
print("random Pythagorean point", q, "->", contact.chi(q))

for name in ("chi", "chiPlus", "chiPlusHom"):
    rep = contact.symplectic_check(name, 2, 20)
    print(f"symplectic residual of {name}: {rep.max_residual:.2e}")

for ident in contact.DIAGRAM_IDENTITIES:
    print("diagram", ident, contact.diagram_check(ident, 2, 300, seed=1))

rep = knotlab.map_conormal(knotlab.sample_conormal(knotlab.trefoil(), 10, 16))
print("trefoil conormal:", rep.to_json())
