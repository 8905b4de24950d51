"""Harder-Narasimhan filtrations of Kronecker modules over F_5 as the charge turns.

Run: python3 demos/kronecker_hn.py
"""
from bridgeland.derived import pn_pair
from bridgeland.linalg import GF
from bridgeland.quiver import kronecker
from bridgeland.representation import Representation
from bridgeland.stability import HeartSpec, build_stability, hn_filtration

F5 = GF(5)
heart = HeartSpec(pn_pair(2, 0), (1, 0))
K = kronecker(2)

modules = {
    "projective (1,2)": Representation(K, F5, (1, 2), {"a0": [[1], [0]], "a1": [[0], [1]]}),
    "regular (1,1), lambda=2": Representation(K, F5, (1, 1), {"a0": [[1]], "a1": [[2]]}),
    "semisimple (1,1)": Representation(K, F5, (1, 1), {"a0": [[0]], "a1": [[0]]}),
}

for z in (["-1", "1+i"], ["i", "i"], ["1+i", "-1"]):
    sg = build_stability(heart, z)
    print(f"Z(S_0) = {z[0]}, Z(S_1) = {z[1]}")
    for name, M in modules.items():
        filt = hn_filtration(M, sg)
        parts = ", ".join(f"{f.dims}@{float(p):.3f}" for f, p in zip(filt.factors, filt.phases))
        print(f"  {name:<24} {parts}")
