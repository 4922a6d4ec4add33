"""Walk through Z --2--> Z: homology, normal form, truncations, weights.

Run with ``python3 demos/torsion_walkthrough.py``.
"""

from weightkit import Complex, ZZ, truncate, without_weights
from weightkit.complexes import homology
from weightkit.detectors import detect_weight_range
from weightkit.normal_form import normal_form

T = Complex.two_term(ZZ, 0, [[2]])
print("complex: Z --2--> Z in degrees 0 and 1")
for i in (0, 1):
    print(f"  H^{i} = {homology(T, i)}")

nf = normal_form(T)
print("normal form pieces:")
for p in nf.pieces:
    print(f"  {p.kind} in degrees {p.degrees}, invariants {p.invariants}")

# Each stupid truncation comes with a triangle certificate.
for l in (-2, -1, 0):
    dec = truncate(T, l)
    print(f"truncation at weight {l}: X in degrees {dec.X.degrees}, "
          f"Y in degrees {dec.Y.degrees}, certificate ok {dec.verify()}")

print("weights read off homology:", detect_weight_range(T))
for win in ((0, 0), (-1, -1), (-2, -2), (1, 1)):
    v = without_weights(T, win)
    print(f"without weights {list(win)}: {v.verdict} ({v.summary()})")
