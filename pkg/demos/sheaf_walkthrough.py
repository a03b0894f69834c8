"""Walk through the half-plane and the unit square: stalks, singular support, Radon stalks and barcodes."""
from fractions import Fraction

from sheafradon import radon
from sheafradon.cellsheaf import compile_sheaf, indicator, microstalk, singular_support, stalk_at
from sheafradon.plgeom import box, halfplane

H = compile_sheaf(indicator(halfplane((0, 1), 0, ">=")))
S = compile_sheaf(indicator(box(0, 1, 0, 1)))

print("k on the closed upper half-plane")
print("  stalk at the origin:", dict(stalk_at(H, (0, 0))))
print("  microstalk up / down:", dict(microstalk(H, (0, 0), (0, 1))), dict(microstalk(H, (0, 0), (0, -1))))
for e in singular_support(H).entries:
    print("  SS entry at cell", e.cell, e.sector.to_json())

print("\nRadon transform of k_H")
for nhat, r in [((0, 1), 0), ((0, 1), Fraction(-1, 2)), ((1, 1), 3)]:
    q = radon.LineQuery(nhat, r)
    print(f"  stalk at nhat={nhat}, r={r}:", dict(radon.radon_stalk(H, q)))
bc, _ = radon.direction_barcode(H, (0, 1))
print("  barcode along (0,1):", [str(b) for b in bc])

print("\nthe unit square")
for d in radon.direction_grid(1):
    bc, _ = radon.direction_barcode(S, d)
    print(f"  direction {tuple(map(str, d))}: walls {list(map(str, radon.wall_offsets(S, d)))},",
          "bars", [str(b) for b in bc])
rep = radon.ss_image_check(S)
print("  walls explained by chi(SS):", rep.passed)
