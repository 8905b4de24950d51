"""The twelve acceptance criteria, each at its stated tolerance and time limit."""

import math
import random
import time
from fractions import Fraction

import pytest

from bridgeland.braid import act_braid
from bridgeland.chambers import (
    chamber_region,
    degenerate_point,
    ext_shifts,
    glue_witness,
    k_table,
    presentable_shifts,
    probe_intersection,
    realize,
    sample_point,
    stable_pair_search,
    theta_membership,
)
from bridgeland.corpus import corpus
from bridgeland.derived import (
    DerivedObject,
    collections_isomorphic,
    euler_form,
    hom_complex,
    k_mutate_left,
    k_mutate_right,
    mutate_collection,
    mutate_left,
    mutate_right,
    mutation_cone_cohomology,
    pn_object,
    pn_pair,
)
from bridgeland.homological import euler_matrix
from bridgeland.linalg import GF
from bridgeland.phase import Gauss
from bridgeland.quiver import beilinson
from bridgeland.representation import Representation
from bridgeland.stability import HeartSpec, build_stability, hn_filtration, is_stable, object_phase

from conftest import ACCEPTANCE
from oracles import KroneckerLattice, beilinson_euler_oracle, kronecker_iso_classes

pytestmark = pytest.mark.acceptance


class Clock:
    def __init__(self, n: int, limit: float):
        self.n, self.limit = n, limit
        self.t0 = time.perf_counter()

    def finish(self, ok: bool, detail: str = ""):
        secs = time.perf_counter() - self.t0
        within = secs < self.limit
        ACCEPTANCE[self.n] = (ok and within, secs, self.limit, detail if within else f"{detail} (over time)")
        assert ok, detail
        assert within, f"took {secs:.1f}s, limit {self.limit}s"


@pytest.fixture(scope="module")
def cor():
    return corpus()


def test_c01_region_of_strong_triple(cor):
    clk = Clock(1, 1)
    C = cor["A3_11_projectives"]
    K = k_table(C)
    assert all(K[ij] == 0 for ij in K.entries), K.to_json()
    R = chamber_region(C)
    expected = {(0, 1, 0), (1, 2, 0), (0, 2, -1)}
    clk.finish(R.relations == expected, f"{sorted(R.relations)}")


def test_c02_braid_relations(cor):
    clk = Clock(2, 30)
    names = [k for k in cor if k.startswith(("P2", "P3", "T2"))]
    failures = []
    for name in names:
        C = cor[name]
        for i in range(len(C) - 1):
            for w in (f"R{i} L{i}", f"L{i} R{i}"):
                if not collections_isomorphic(act_braid(C, w), C):
                    failures.append((name, w))
        if len(C) == 3:
            if not collections_isomorphic(act_braid(C, "R0 R1 R0"), act_braid(C, "R1 R0 R1")):
                failures.append((name, "R0 R1 R0 = R1 R0 R1"))
            for a in (1, 2, 3):
                lhs = act_braid(C, f"R1 R0 R1^{a}")
                rhs = act_braid(C, f"R0^{a} R1 R0")
                if not collections_isomorphic(lhs, rhs):
                    failures.append((name, f"a={a}"))
    clk.finish(len(names) >= 10 and not failures, f"{len(names)} collections, failures {failures}")


def test_c03_hom_pattern():
    clk = Clock(3, 60)
    bad = []
    for n in (2, 3):
        for i in range(-3, 6):
            for j in range(-3, 6):
                if i == j:
                    continue
                h = hom_complex(pn_object(n, i), pn_object(n, j))
                allowed = {0} if i < j else {1}
                if set(h.support) - allowed:
                    bad.append((n, i, j, sorted(h.support)))
    clk.finish(not bad, f"bad {bad}")


def test_c04_sigma_minus_one():
    clk = Clock(4, 1)
    sg = build_stability(HeartSpec(pn_pair(2, 0), (1, 0)), ["-1", "1+i"])
    a = object_phase(pn_object(2, 0).shift(1), sg).exact()
    b = object_phase(pn_object(2, 1), sg).exact()
    clk.finish(a == 1 and b == Fraction(1, 4), f"phi(S_0[1]) = {a}, phi(S_1) = {b}")


def test_c05_intersection_probe():
    clk = Clock(5, 600)
    details, ok = [], True
    for n in (2, 3):
        rep = probe_intersection(n, 0, 1, 1000, 1)
        frac = len(rep.indeterminate) / rep.samples
        valid = all(m.get("certificate", {}).get("valid") for m in rep.members)
        ok &= valid and not rep.counterexamples and frac < 0.01
        details.append(f"P_{n}: {len(rep.members)} members, {len(rep.counterexamples)} counterexamples, indeterminate {frac:.3f}")
    clk.finish(ok, "; ".join(details))


def _random_charges(count: int, seed: int) -> list:
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        re0, re1 = (Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(2))
        im0, im1 = (Fraction(rng.randint(0, 9), rng.randint(1, 4)) for _ in range(2))
        if (im0 == 0 and re0 >= 0) or (im1 == 0 and re1 >= 0):
            continue
        out.append(((re0, im0), (re1, im1)))
    return out


def test_c06_hn_oracle_equivalence():
    clk = Clock(6, 600)
    H = HeartSpec(pn_pair(2, 0), (1, 0))
    Q = H.heart_quiver
    charges = _random_charges(20, 6)
    classes = kronecker_iso_classes(3, 5)
    lattices = [KroneckerLattice(d, m, 5) for d, m in classes]
    mismatches = checked = 0
    for z in charges:
        sg = build_stability(H, [Gauss(z[0][0], z[0][1]), Gauss(z[1][0], z[1][1])])
        for (d, m), lat in zip(classes, lattices):
            M = Representation(Q, GF(5), d, {"a0": m[0], "a1": m[1]})
            got = hn_filtration(M, sg).factors
            want = lat.hn(z)
            phases = [f.phase for f in got]
            same = [tuple(f.dims) for f in got] == [w[0] for w in want]
            same &= all(
                math.isclose(float(f.phase), math.atan2(w[1][1], w[1][0]) / math.pi, abs_tol=1e-12)
                for f, w in zip(got, want)
            )
            same &= all(phases[i + 1] < phases[i] for i in range(len(phases) - 1))
            mismatches += not same
            checked += 1
    clk.finish(mismatches == 0, f"{checked} (module, charge) cases, {mismatches} mismatches")


def test_c07_heart_simples_stable(cor):
    clk = Clock(7, 60)
    names = [k for k in cor if k.startswith(("P2", "P3", "T2"))]
    rng = random.Random(7)

    def rq():
        return Fraction(rng.randint(-12, 12), rng.choice([1, 2, 3, 4]))

    def rz():
        if rng.random() < 0.1:
            return Gauss(-abs(rq()) - 1, 0)
        return Gauss(rq(), Fraction(rng.randint(1, 12), rng.choice([1, 2, 3, 4])))

    bad = []
    for s in range(100):
        C = cor[names[s % len(names)]]
        shifts = presentable_shifts(C) if s % 2 == 0 else ext_shifts(C)
        sg = build_stability(HeartSpec(C, shifts), [rz() for _ in C])
        for E, p in zip(C.objects, shifts):
            X = DerivedObject.from_json(C.quiver, E.to_json()).shift(p)
            if not is_stable(X, sg):
                bad.append((s, E.label))
    clk.finish(not bad, f"100 points, unstable simples {bad}")


def test_c08_glue_witnesses(cor):
    clk = Clock(8, 60)
    bad, pairs = [], 0
    for name, C in cor.items():
        for j in range(len(C) - 1):
            if C.hom(j, j + 1).is_zero:
                continue
            pairs += 1
            w = glue_witness(C, j)
            if not (w.member_original and w.member_mutated and w.in_window):
                bad.append((name, j))
    clk.finish(pairs > 0 and not bad, f"{pairs} pairs, failures {bad}")


def test_c09_euler_matrix_oracle():
    clk = Clock(9, 30)
    bad = []
    for N in range(1, 5):
        got = [[int(x) for x in row] for row in euler_matrix(beilinson(N)).tolist()]
        if got != beilinson_euler_oracle(N):
            bad.append(N)
    clk.finish(not bad, f"N = 1..4, mismatches at {bad}")


def test_c10_mutation_concentration(cor):
    clk = Clock(10, 30)
    bad, pairs = [], 0
    for name, C in cor.items():
        if C.tier != "concrete":
            continue
        eu = euler_form(C.quiver)
        for i in range(len(C)):
            for j in range(i + 1, len(C)):
                E, F = C[i], C[j]
                pairs += 1
                coh = mutation_cone_cohomology(E, F)
                ok = len(coh) == 1
                ok &= mutate_left(E, F).klass == k_mutate_left(eu, E.klass, F.klass)
                ok &= mutate_right(F, E).klass == k_mutate_right(eu, E.klass, F.klass)
                if not ok:
                    bad.append((name, i, j))
    clk.finish(pairs > 0 and not bad, f"{pairs} pairs, failures {bad}")


def test_c11_degenerate_exclusivity(cor):
    clk = Clock(11, 30)
    bad = []
    for name, C in cor.items():
        sg = degenerate_point(C)
        if not theta_membership(sg, C):
            bad.append((name, "own"))
        for i in range(len(C) - 1):
            if C.hom(i, i + 1).is_zero:
                continue
            for d in ("right", "left"):
                if theta_membership(sg, mutate_collection(C, i, d)):
                    bad.append((name, i, d))
    clk.finish(not bad, f"{len(cor)} collections, failures {bad}")


def test_c12_stable_pair_search():
    clk = Clock(12, 60)
    misses = []
    for s in range(50):
        k = -2 + s % 5
        C = pn_pair(2, k)
        pt = sample_point(chamber_region(C), 12, s)
        if stable_pair_search(realize(C, pt), 2, 6) is None:
            misses.append((s, k))
    clk.finish(not misses, f"50 points, misses {misses}")
