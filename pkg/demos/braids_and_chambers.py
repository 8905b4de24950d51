"""Braid moves on an exceptional triple and the chamber it cuts out.

Writes triple_slice.svg next to the working directory.
Run: python3 demos/braids_and_chambers.py
"""
from fractions import Fraction
from pathlib import Path

from bridgeland.braid import BraidWord, act_braid, b3_word_identity
from bridgeland.chambers import chamber_region, realize, rho, sample_point, theta_membership
from bridgeland.corpus import corpus
from bridgeland.derived import collections_isomorphic
from bridgeland.plot import slice_polygon, slice_svg

C = corpus()["A3_11_projectives"]
print("collection:", [E.klass for E in C.objects])

for a in (1, 2, 3):
    lhs, rhs = f"R1 R0 R1^{a}", f"R0^{a} R1 R0"
    same = collections_isomorphic(act_braid(C, lhs), act_braid(C, rhs))
    # lhs * rhs^-1 should be the identity braid
    trivial = b3_word_identity(BraidWord.parse(lhs) + BraidWord.parse(rhs).inverse())
    print(f"  {lhs:>12} ~ {rhs:<12} on C: {same}   trivial in B_3: {trivial}")

R = chamber_region(C)
print("\nchamber inequalities:")
for q in sorted(R.inequalities, key=lambda q: (q.low, q.high)):
    print("  ", q)

pt = sample_point(R, seed=1, index=0)
sg = realize(C, pt)
print("\nsampled point phases:", [str(p) for p in pt.phases])
print("rho(realize(pt)) == pt:", rho(sg, C) == pt, " in Theta_C:", theta_membership(sg, C))

fixed = {1: Fraction(3, 2)}
print("\nslice phi_1 = 3/2, polygon in (phi_0, phi_2):", [(str(x), str(y)) for x, y in slice_polygon(R, -2, 2, fixed)])
Path("triple_slice.svg").write_text(slice_svg(R, -2, 2, fixed))
print("wrote triple_slice.svg")
