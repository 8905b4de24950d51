"""The exceptional family S_i on the n-Kronecker quiver and its Hom pattern.

Run: python3 demos/pn_family.py [n]
"""
import sys

from bridgeland.chambers import sigma_minus_one
from bridgeland.derived import hom_complex, pn_object
from bridgeland.stability import object_phase, object_status
from bridgeland.subreps import BudgetExceeded

n = int(sys.argv[1]) if len(sys.argv) > 1 else 2
family = {i: pn_object(n, i) for i in range(-2, 6)}

print(f"P_{n} family: classes")
for i, E in family.items():
    print(f"  S_{i:<2d} {E.klass}")

# Hom from S_i to S_j is concentrated in a single degree once i < j
print("\ngraded Hom(S_i, S_j)")
for i in range(-2, 2):
    row = [repr(hom_complex(family[i], family[j])) for j in range(i + 1, i + 4)]
    print(f"  i={i:<2d}", "  ".join(row))

sg = sigma_minus_one(n)
print("\nphases under sigma_{-1} (heart <S_0[1], S_1>, charges -1 and 1+i)")
for i, E in family.items():
    ph = object_phase(E, sg)
    shown = str(ph.exact()) if ph.exact() is not None else f"{float(ph):.4f}"
    try:
        status = object_status(E, sg)
    except BudgetExceeded:
        status = "undecided (subobject budget)"
    print(f"  S_{i:<2d} phase {shown:<7} {status}")
