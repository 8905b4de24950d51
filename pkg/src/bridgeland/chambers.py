"""Chambers of stability conditions attached to an exceptional collection.

For a complete exceptional collection C = (E_0, ..., E_n), the chamber of C
is the set of stability conditions that, up to the universal cover of
GL+(2, R), come from a heart generated by an Ext shift of C. It is
parametrized by the charges and phases of the E_i, and the image is an
explicit open region cut out by strict inequalities ``phi_a < phi_b + alpha``.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Sequence

from . import linalg as la
from .derived import DerivedObject, ExceptionalCollection, GradedHom, mutate_collection, pn_object, pn_pair
from .linalg import QQ
from .hn import Indeterminate
from .phase import Gauss, GLElement, PhaseValue, Q, cross, in_H, phase_of, qstr
from .stability import (
    CentralCharge,
    HeartSpec,
    StabilityError,
    StabilityPoint,
    UnsupportedObject,
    build_stability,
    gl_action,
    is_semistable,
    is_stable,
    locate,
    object_phase,
)
from .subreps import BudgetExceeded

INF = math.inf
SCHEMA_VERSION = "1.0"
REGION_BOUND = 12


class ChamberError(ValueError):
    pass


class SearchExhausted(ChamberError):
    """A bounded search ended without a witness; widening the bounds may help."""


class NotInChamber(ChamberError):
    """A collection object is not stable, so the point is outside the chamber."""


# ------------------------------------------------------------ k and alpha


@dataclass(frozen=True)
class KTable:
    """``k[i, j] = min{k : Hom^k(E_i, E_j) != 0}`` for i < j, or +inf."""

    size: int
    entries: dict

    def __getitem__(self, ij) -> int | float:
        return self.entries[ij]

    def to_json(self) -> dict:
        return {f"{i},{j}": ("inf" if k == INF else k) for (i, j), k in sorted(self.entries.items())}


def _min_degree(h: GradedHom) -> int | float:
    return INF if h.is_zero else min(h.support)


def k_table(C: ExceptionalCollection) -> KTable:
    if C.hom_table is None:
        raise ChamberError("k-table needs graded-Hom data for the collection")
    n = len(C)
    return KTable(n, {(i, j): _min_degree(C.hom(i, j)) for i in range(n) for j in range(i + 1, n)})


@dataclass(frozen=True)
class AlphaTable:
    indices: tuple  # l_0 < ... < l_s
    alphas: tuple  # alpha_i per position; the last is 0

    def to_json(self) -> dict:
        return {"indices": list(self.indices), "alpha": [("inf" if a == INF else a) for a in self.alphas]}


def alpha_table(K: KTable | ExceptionalCollection, indices: Sequence[int]) -> AlphaTable:
    if isinstance(K, ExceptionalCollection):
        K = k_table(K)
    idx = tuple(indices)
    if len(idx) < 2 or list(idx) != sorted(set(idx)):
        raise ChamberError("subcollection needs at least two increasing indices")
    s = len(idx) - 1
    alpha = [INF] * (s + 1)
    alpha[s] = 0
    for i in range(s - 1, -1, -1):
        best = min(K[idx[i], idx[j]] + alpha[j] for j in range(i + 1, s + 1))
        alpha[i] = best - (s - i - 1) if best != INF else INF
    return AlphaTable(idx, tuple(alpha))


# ------------------------------------------------------------------ region


@dataclass(frozen=True, order=True)
class Inequality:
    """``phi_low < phi_high + alpha``."""

    low: int
    high: int
    alpha: int

    def __str__(self):
        a = self.alpha
        tail = "" if a == 0 else (f" + {a}" if a > 0 else f" - {-a}")
        return f"phi_{self.low} < phi_{self.high}{tail}"

    def to_json(self) -> dict:
        return {"low": self.low, "high": self.high, "alpha": self.alpha, "text": str(self)}


@dataclass(frozen=True)
class ChamberRegion:
    """Masses positive, plus the strict phase inequalities (vacuous ones dropped)."""

    size: int
    inequalities: tuple
    ktable: KTable | None = field(default=None, compare=False)

    @property
    def relations(self) -> frozenset:
        return frozenset((q.low, q.high, q.alpha) for q in self.inequalities)

    def to_json(self) -> dict:
        return {
            "size": self.size,
            "masses": [f"m_{i} > 0" for i in range(self.size)],
            "inequalities": [q.to_json() for q in self.inequalities],
        }


def chamber_region(C: ExceptionalCollection | KTable, bound: int = REGION_BOUND) -> ChamberRegion:
    """One inequality per subcollection; for each (low, high) keep the strongest."""
    if isinstance(C, ExceptionalCollection):
        if not C.is_complete():
            raise ChamberError("chamber region needs a complete collection")
        K = k_table(C)
    else:
        K = C
    n = K.size
    if n > bound:
        raise ChamberError(f"{n} objects exceed the subcollection enumeration bound {bound}")
    best: dict = {}
    for size in range(2, n + 1):
        for idx in combinations(range(n), size):
            a = alpha_table(K, idx).alphas[0]
            key = (idx[0], idx[-1])
            if a < best.get(key, INF):
                best[key] = a
    ineqs = tuple(sorted(Inequality(lo, hi, int(a)) for (lo, hi), a in best.items()))
    return ChamberRegion(n, ineqs, K)


# ------------------------------------------------------------ chamber point


@dataclass(frozen=True)
class ChamberPoint:
    """Charges ``z_i = Z(E_i)`` and windings: ``phi_i = arg(z_i)/pi + 2 w_i``, arg in (-pi, pi].

    The mass coordinate is ``|z_i|``; comparisons use ``|z_i|^2``.
    """

    z: tuple
    windings: tuple

    def __post_init__(self):
        z = tuple(Gauss.parse(v) for v in self.z)
        if any(v.is_zero for v in z):
            raise ChamberError("chamber points need nonzero charges")
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "windings", tuple(int(w) for w in self.windings))
        if len(self.windings) != len(z):
            raise ChamberError("one winding per charge")

    def __len__(self):
        return len(self.z)

    def phase(self, i: int) -> PhaseValue:
        return phase_of(self.z[i], 2 * self.windings[i])

    @property
    def phases(self) -> list[PhaseValue]:
        return [self.phase(i) for i in range(len(self))]

    @property
    def masses2(self) -> list:
        return [v.norm2 for v in self.z]

    @classmethod
    def from_phases(cls, phases: Sequence[PhaseValue], masses: Sequence | None = None) -> "ChamberPoint":
        z, w = [], []
        for k, ph in enumerate(phases):
            m = Q(masses[k]) if masses is not None else Q(1)
            if ph.winding % 2 == 0:
                z.append(ph.ray * m)
                w.append(ph.winding // 2)
            else:
                z.append(-ph.ray * m)
                w.append((ph.winding + 1) // 2)
        return cls(tuple(z), tuple(w))

    def to_json(self) -> dict:
        return {
            "z": [v.to_json() for v in self.z],
            "windings": list(self.windings),
            "phases": [p.to_json() for p in self.phases],
            "mass2": [qstr(m) for m in self.masses2],
        }


def region_contains(R: ChamberRegion, p: ChamberPoint) -> bool:
    if R.size != len(p):
        raise ChamberError("region and point have different sizes")
    ph = p.phases
    return all(ph[q.low] < ph[q.high] + q.alpha for q in R.inequalities)


def tight_inequalities(R: ChamberRegion, p: ChamberPoint) -> tuple[list, list]:
    """(equalities, violations) of the region's inequalities at p."""
    ph = p.phases
    eq, bad = [], []
    for q in R.inequalities:
        lhs, rhs = ph[q.low], ph[q.high] + q.alpha
        if lhs == rhs:
            eq.append(q)
        elif lhs > rhs:
            bad.append(q)
    return eq, bad


# ------------------------------------------------------------------ rho


def _winding_for(phi: PhaseValue, z: Gauss) -> int:
    base = phase_of(z, 0)
    if cross(base.ray, phi.ray) != 0 or (base.winding - phi.winding) % 2:
        raise AssertionError("phase and charge disagree")
    return (phi.winding - base.winding) // 2


def object_charge(X: DerivedObject, sigma: StabilityPoint) -> Gauss:
    return sigma.Z(X.klass)


def rho(sigma: StabilityPoint, C: ExceptionalCollection, prime=None, budget=None) -> ChamberPoint:
    """Charges and phases of the collection objects; each must be stable."""
    kw = {} if budget is None else {"budget": budget}
    z, w = [], []
    for i, E in enumerate(C.objects):
        if not is_stable(E, sigma, prime, **kw):
            raise NotInChamber(f"E_{i} is not stable")
        zi = object_charge(E, sigma)
        z.append(zi)
        w.append(_winding_for(object_phase(E, sigma), zi))
    return ChamberPoint(tuple(z), tuple(w))


def theta_membership(sigma: StabilityPoint, C: ExceptionalCollection, prime=None, budget=None) -> bool:
    """True iff every object of C is stable and the coordinates lie in the chamber region.

    Budget and indeterminacy errors propagate: they are never read as False.
    """
    try:
        pt = rho(sigma, C, prime, budget)
    except NotInChamber:
        return False
    return region_contains(chamber_region(C), pt)


# ------------------------------------------------------------ realization


def _shifted_ext(C: ExceptionalCollection, p: Sequence[int]) -> bool:
    n = len(C)
    for i in range(n):
        for j in range(i + 1, n):
            h = C.hom(i, j)
            if not h.is_zero and min(h.support) + p[i] - p[j] < 1:
                return False
    return True


def ext_shifts(C: ExceptionalCollection) -> tuple:
    """Smallest non-negative shifts, last one 0, making C Ext."""
    K = k_table(C)
    n = len(C)
    p = [0] * n
    for i in range(n - 2, -1, -1):
        p[i] = max([0] + [p[j] + 1 - K[i, j] for j in range(i + 1, n) if K[i, j] != INF])
    return tuple(p)


def presentable_shifts(C: ExceptionalCollection, spread: int = 3) -> tuple:
    """Ext shifts whose heart has a quiver presentation, smallest first.

    Falls back to ``ext_shifts`` when no vector within ``spread`` of it works.
    """
    base = ext_shifts(C)
    n = len(C)
    best = None
    for extra in product(range(spread + 1), repeat=n - 1):
        p = tuple(b + e for b, e in zip(base, extra + (0,)))
        if not _shifted_ext(C, p):
            continue
        key = (max(p), sum(p), p)
        if best is not None and key >= best[0]:
            continue
        if HeartSpec(C, p).kind != "other":
            best = (key, p)
    return base if best is None else best[1]


def _spread_below_one(psi: Sequence[PhaseValue]) -> bool:
    return all(a < b + 1 for a in psi for b in psi)


def realization_shifts(C: ExceptionalCollection, pt: ChamberPoint) -> tuple | None:
    """Shifts p with C[p] Ext and all shifted phases in a window shorter than 1."""
    ph = pt.phases
    opts = [[0]]
    for i in range(1, len(C)):
        c = round(float(ph[0]) - float(ph[i]))
        opts.append(list(range(c - 2, c + 3)))
    for p in product(*opts):
        psi = [phi + s for phi, s in zip(ph, p)]
        if _spread_below_one(psi) and _shifted_ext(C, p):
            return tuple(p)
    return None


def _real_matrix(c: Gauss):
    return ((c.re, -c.im), (c.im, c.re))


def realize(C: ExceptionalCollection, pt: ChamberPoint) -> StabilityPoint:
    """A heart-and-charge stability point with the given coordinates for C."""
    p = realization_shifts(C, pt)
    if p is None:
        raise ChamberError("no Ext shift puts the phases in a window shorter than 1")
    psi = [phi + s for phi, s in zip(pt.phases, p)]
    u = [z * (-1 if s % 2 else 1) for z, s in zip(pt.z, p)]  # charges of E_i[p_i]
    lo = min(range(len(psi)), key=lambda i: psi[i])
    hi = max(range(len(psi)), key=lambda i: psi[i])
    if psi[lo] == psi[hi]:
        M = _real_matrix(Gauss(0, 1) / u[lo])
    else:
        a, b = u[lo], u[hi]
        det = cross(a, b)
        # columns a, b -> 1+i, -1+i
        Ainv = ((b.im / det, -b.re / det), (-a.im / det, a.re / det))
        B = ((Q(1), Q(-1)), (Q(1), Q(1)))
        M = tuple(tuple(sum(B[r][k] * Ainv[k][c] for k in range(2)) for c in range(2)) for r in range(2))
    g0 = GLElement(M, 0)
    base = [_apply(M, x) for x in u]
    for w in base:
        if not in_H(w):
            raise AssertionError("base charge left the half plane")
    got = g0.transport(phase_of(base[lo]))
    diff = psi[lo].winding - got.winding
    if cross(got.ray, psi[lo].ray) != 0 or diff % 2:
        raise AssertionError("inconsistent lift")
    sigma = StabilityPoint(HeartSpec(C, p), CentralCharge(tuple(base)), GLElement(M, diff // 2))
    for i in range(len(C)):
        if sigma.simple_phase(i) != psi[i]:
            raise AssertionError("realized phases differ from the chamber point")
    return sigma


def _apply(M, z: Gauss) -> Gauss:
    return Gauss(M[0][0] * z.re + M[0][1] * z.im, M[1][0] * z.re + M[1][1] * z.im)


def degenerate_point(C: ExceptionalCollection, shifts: Sequence[int] | None = None) -> StabilityPoint:
    """All heart simples at charge i, on a presentable heart unless shifts are given."""
    p = tuple(shifts) if shifts is not None else presentable_shifts(C)
    return build_stability(HeartSpec(C, p), ["i"] * len(C))


# ------------------------------------------------------------ sampling


def _rand_rational(rng: random.Random, lo: int, hi: int):
    return Q(rng.randint(lo * 6, hi * 6)) / rng.choice((1, 2, 3, 6))


def sample_point(R: ChamberRegion, seed: int, index: int, windings: int = 1, tries: int = 2000) -> ChamberPoint:
    """Rejection sample of a rational point of the region.

    Counter-indexed: the stream for ``index`` depends only on (seed, index).
    """
    rng = random.Random(f"{seed}:{index}")
    for _ in range(tries):
        z = []
        for _ in range(R.size):
            v = Gauss(0)
            while v.is_zero:
                v = Gauss(_rand_rational(rng, -2, 2), _rand_rational(rng, -2, 2))
            z.append(v)
        w = [rng.randint(-windings, windings) for _ in range(R.size)]
        pt = ChamberPoint(tuple(z), tuple(w))
        if region_contains(R, pt):
            return pt
    raise ChamberError("rejection sampling found no point of the region")


# ------------------------------------------------------------ gluing


@dataclass
class GlueWitness:
    """A point of both chambers plus the displayed mutated collection.

    ``displayed`` is C with (E_j, E_{j+1}) replaced by E_{j+1}[p_{j+1} + 1] and
    the right mutation of E_j shifted by p_j - 1. ``window`` is a GL~ element
    after which all displayed phases lie in [-1/2, 1/2).
    """

    sigma: StabilityPoint
    j: int
    shifts: tuple
    mutated: ExceptionalCollection
    member_original: bool
    member_mutated: bool
    displayed: tuple
    displayed_phases: tuple
    window: GLElement
    window_phases: tuple
    displayed_stable: bool

    @property
    def mutated_phase(self) -> PhaseValue:
        return self.displayed_phases[self.j + 1]

    @property
    def in_window(self) -> bool:
        return all(_in_half_window(ph) for ph in self.window_phases)

    def to_json(self) -> dict:
        return {
            "j": self.j,
            "shifts": list(self.shifts),
            "stability": self.sigma.to_json(),
            "member_original": self.member_original,
            "member_mutated": self.member_mutated,
            "displayed_classes": [list(X.klass) for X in self.displayed],
            "displayed_phases": [ph.to_json() for ph in self.displayed_phases],
            "displayed_stable": self.displayed_stable,
            "mutated_object_phase": self.mutated_phase.to_json(),
            "window_element": self.window.to_json(),
            "window_phases": [ph.to_json() for ph in self.window_phases],
            "phases_in_window": self.in_window,
        }


def glue_shifts(C: ExceptionalCollection, j: int) -> tuple:
    """Shifts killing Hom^{<=1} between distinct members, except Hom^1(E_j, E_{j+1}) != 0."""
    K = k_table(C)
    n = len(C)
    if K[j, j + 1] == INF:
        raise ChamberError(f"(E_{j}, E_{j + 1}) is an orthogonal pair")
    c0 = 1 - K[j, j + 1]
    p = [0] * n
    for i in range(n - 2, -1, -1):
        need = max([0] + [p[t] + 2 - K[i, t] for t in range(i + 1, n) if K[i, t] != INF and (i, t) != (j, j + 1)])
        if i == j:
            if p[j + 1] + c0 < need:
                p[j + 1] = need - c0
                # raising p_{j+1} only tightens constraints on earlier indices
            need = p[j + 1] + c0
        p[i] = need
    p = tuple(p)
    for a in range(n):
        for b in range(a + 1, n):
            h = C.hom(a, b)
            low = {d + p[a] - p[b] for d in h.support}
            if (a, b) == (j, j + 1):
                if 1 not in low or any(k < 1 for k in low):
                    raise ChamberError("no admissible shift vector")
            elif any(k <= 1 for k in low):
                raise ChamberError("no admissible shift vector")
    return p


def _direction(ph: PhaseValue) -> Gauss:
    """A charge with phase ph modulo 2."""
    return ph.ray if ph.winding % 2 == 0 else -ph.ray


def window_element(lo: PhaseValue, hi: PhaseValue) -> GLElement:
    """A GL~ element moving lo to -1/2 and hi into [-1/2, 0]; needs hi - lo < 1."""
    if not hi < lo + 1 or hi < lo:
        raise ChamberError("phases do not fit in a window of length one")
    a, b = _direction(lo), _direction(hi)
    if cross(a, b) == 0:
        b = Gauss(-a.im, a.re)  # only lo matters; any ray counterclockwise from a
    # T sends (0,-1) to a and (1,0) to b, so charges move by T^{-1}: a -> -i, b -> 1
    T = ((b.re, -a.re), (b.im, -a.im))
    target = PhaseValue(-1, Gauss(0, 1))
    for lift in range(-2 - abs(lo.winding), 3 + abs(lo.winding)):
        g = GLElement(T, lift)
        if g.transport(lo) == target:
            return g
    raise ArithmeticError("no lift sends the lowest phase to -1/2")


def glue_witness(C: ExceptionalCollection, j: int, prime=None) -> GlueWitness:
    """A point in the chambers of C and of its right mutation at j."""
    if not 0 <= j < len(C) - 1:
        raise ChamberError("glue index out of range")
    p = glue_shifts(C, j)
    z = ["i"] * len(C)
    z[j], z[j + 1] = "-1", "1+i"
    sigma = build_stability(HeartSpec(C, p), z)
    D = mutate_collection(C, j, "right")
    q = list(p)
    q[j], q[j + 1] = p[j + 1] + 1, p[j] - 1
    shown = tuple(X.shift(s) for X, s in zip(D.objects, q))
    phases = tuple(object_phase(X, sigma) for X in shown)
    stable = all(is_stable(X, sigma, prime) for X in shown)
    g = window_element(min(phases), max(phases))
    moved = gl_action(sigma, g)
    window = tuple(object_phase(X, moved) for X in shown)
    return GlueWitness(
        sigma,
        j,
        p,
        D,
        theta_membership(sigma, C, prime),
        theta_membership(sigma, D, prime),
        shown,
        phases,
        g,
        window,
        stable,
    )


def _in_half_window(ph: PhaseValue) -> bool:
    """-1/2 <= phi < 1/2."""
    lo = PhaseValue(-1, Gauss(0, 1))  # 1/2 - 1
    hi = PhaseValue(0, Gauss(0, 1))
    return lo <= ph < hi


# ------------------------------------------------------------ P_n overlap


def sigma_minus_one(n: int) -> StabilityPoint:
    """The heart <S_0[1], S_1> with charges (-1, 1+i)."""
    return build_stability(HeartSpec(pn_pair(n, 0), (1, 0)), ["-1", "1+i"])


@dataclass
class Certificate:
    matrix: tuple
    det: object
    lift: int
    phases: tuple  # transported phases of S_0[1], S_1
    ok: bool
    reason: str = ""

    def to_json(self) -> dict:
        return {
            "matrix": [[qstr(x) for x in row] for row in self.matrix],
            "det": qstr(self.det),
            "lift": self.lift,
            "phases": [p.to_json() for p in self.phases],
            "valid": self.ok,
            "reason": self.reason,
        }


def reduction_certificate(sigma: StabilityPoint, n: int, prime=None) -> Certificate:
    """A GL~+ element sending sigma to sigma^{-1}, checked on (S_0[1], S_1)."""
    A, B = pn_object(n, 0).shift(1), pn_object(n, 1)
    za, zb = object_charge(A, sigma), object_charge(B, sigma)
    det = cross(za, zb)
    if det == 0:
        return Certificate(((Q(0), Q(0)), (Q(0), Q(0))), Q(0), 0, (), False, "charges are parallel")
    # M: za -> -1, zb -> 1+i ;  M = B A^{-1}
    Ainv = ((zb.im / det, -zb.re / det), (-za.im / det, za.re / det))
    Bm = ((Q(-1), Q(1)), (Q(0), Q(1)))
    M = tuple(tuple(sum(Bm[r][k] * Ainv[k][c] for k in range(2)) for c in range(2)) for r in range(2))
    dM = M[0][0] * M[1][1] - M[0][1] * M[1][0]
    if dM <= 0:
        return Certificate(M, dM, 0, (), False, "determinant is not positive")
    stable = is_stable(A, sigma, prime) and is_stable(B, sigma, prime)
    # g acts with T = M^{-1} in the charge convention Z -> T^{-1} Z
    Minv = ((M[1][1] / dM, -M[0][1] / dM), (-M[1][0] / dM, M[0][0] / dM))
    g0 = GLElement(Minv, 0)
    pa, pb = object_phase(A, sigma), object_phase(B, sigma)
    fa = g0.transport(pa)
    target_a = PhaseValue(0, Gauss(-1, 0))
    diff = target_a.winding - fa.winding
    if cross(fa.ray, target_a.ray) != 0 or diff % 2:
        return Certificate(M, dM, 0, (), False, "no lift sends phi(S_0[1]) to 1")
    lift = diff // 2
    ta, tb = fa + diff, g0.transport(pb) + diff
    ok = stable and ta == target_a and tb == PhaseValue(0, Gauss(1, 1))
    reason = "" if ok else ("S_0[1] or S_1 not stable" if not stable else "phases not transported consistently")
    return Certificate(M, dM, lift, (ta, tb), ok, reason)


@dataclass
class IntersectionReport:
    n: int
    k: int
    h: int
    seed: int
    samples: int
    members: list
    non_members: int
    indeterminate: list
    window_members: int  # samples meeting phi(S_{k+1}) < phi(S_k[1]) < phi(S_{k+1}) + 1

    @property
    def counterexamples(self) -> list:
        return [m for m in self.members if "counterexample" in m]

    def to_json(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "quiver": f"P_{self.n}",
            "k": self.k,
            "h": self.h,
            "seed": self.seed,
            "samples": self.samples,
            "member_count": len(self.members),
            "non_members": self.non_members,
            "window_members": self.window_members,
            "counterexample_count": len(self.counterexamples),
            "members": self.members,
            "indeterminate": self.indeterminate,
        }


def probe_intersection(n: int, k: int, h: int, samples: int, seed: int, prime=None) -> IntersectionReport:
    """Sample the chamber of (S_k, S_{k+1}); test membership in the chamber of (S_h, S_{h+1})."""
    if n < 1:
        raise ChamberError("need n >= 1")
    Ck, Ch = pn_pair(n, k), pn_pair(n, h)
    Rk = chamber_region(Ck)
    members, indet = [], []
    non = window = 0
    for s in range(samples):
        pt = sample_point(Rk, seed, s)
        sigma = realize(Ck, pt)
        ph0, ph1 = pt.phase(0) + 1, pt.phase(1)
        in_win = ph1 < ph0 < ph1 + 1
        window += in_win
        try:
            member = k == h or theta_membership(sigma, Ch, prime)
        except (Indeterminate, BudgetExceeded, UnsupportedObject) as e:
            indet.append({"index": s, "point": pt.to_json(), "reason": f"{type(e).__name__}: {e}"})
            continue
        if not member:
            non += 1
            continue
        entry = {"index": s, "point": pt.to_json(), "window": in_win}
        if k != h:
            try:
                cert = reduction_certificate(sigma, n, prime)
            except (Indeterminate, BudgetExceeded, UnsupportedObject, StabilityError) as e:
                indet.append({"index": s, "point": pt.to_json(), "reason": f"certificate: {type(e).__name__}: {e}"})
                continue
            if cert.ok:
                entry["certificate"] = cert.to_json()
            else:
                entry["counterexample"] = cert.to_json()
        else:
            entry["certificate"] = {"valid": True, "reason": "k = h: the chamber itself"}
        members.append(entry)
    return IntersectionReport(n, k, h, seed, samples, members, non, indet, window)


def stable_pair_search(sigma: StabilityPoint, n: int, W: int = 6, prime=None) -> int | None:
    """Index i with S_i and S_{i+1} both stable, searching 0, 1, -1, 2, -2, ... up to W."""
    order = [0]
    for t in range(1, W + 1):
        order += [t, -t]
    for i in order:
        try:
            if is_stable(pn_object(n, i), sigma, prime) and is_stable(pn_object(n, i + 1), sigma, prime):
                return i
        except (Indeterminate, BudgetExceeded, UnsupportedObject):
            continue
    return None


# ------------------------------------------------------------ boundary


@dataclass
class BoundaryResult:
    case: str  # "adjacent" or "non-adjacent"
    i: int
    j: int
    collection: ExceptionalCollection
    sigma: StabilityPoint
    member: bool
    semistability_verified: bool  # original objects checked semistable at the limit phases

    def to_json(self) -> dict:
        return {
            "case": self.case,
            "i": self.i,
            "j": self.j,
            "collection": self.collection.to_json(),
            "stability": self.sigma.to_json(),
            "member": self.member,
            "limit_phases_match": True,
            "semistability_verified": self.semistability_verified,
        }


def _limit_indices(C: ExceptionalCollection, pt: ChamberPoint) -> tuple[int, int]:
    R = chamber_region(C)
    eq, bad = tight_inequalities(R, pt)
    if bad:
        raise ChamberError("limit point violates the chamber inequalities")
    if not eq:
        raise ChamberError("limit point is interior: no tight inequality")
    if len(eq) > 1:
        raise ChamberError("several tight inequalities: multi-wall limits are unsupported")
    q = eq[0]
    # low sits one above high after shifting, so high is the object that moves
    return q.high, q.low


def _consistent(sigma: StabilityPoint, C: ExceptionalCollection, pt: ChamberPoint, prime=None):
    """(phases match, semistability verified) for C's objects against the limit point.

    Each object must sit in a shift of sigma's heart with the limit phase.
    Semistability needs a module presentation; without one it is left
    unverified rather than assumed.
    """
    verified = True
    for a, E in enumerate(C.objects):
        loc = locate(E, sigma.heart)
        if not loc.in_heart_shift or object_phase(E, sigma) != pt.phase(a):
            return False, False
        try:
            if not is_semistable(E, sigma, prime):
                return False, False
        except UnsupportedObject:
            verified = False
    return True, verified


def _try_collection(D: ExceptionalCollection, Z_of, C, pt, W: int, prime=None):
    """Windings for D's objects that realize the limit point, if any."""
    zs = [Z_of(E) for E in D.objects]
    if any(z.is_zero for z in zs):
        return None
    fixed = {}
    for a, E in enumerate(D.objects):
        for b, F in enumerate(C.objects):
            if E is F:
                fixed[a] = pt.windings[b]
    choices = [[fixed[a]] if a in fixed else list(range(-W, W + 1)) for a in range(len(D))]
    R = chamber_region(D)
    for w in product(*choices):
        cand = ChamberPoint(tuple(zs), w)
        if not region_contains(R, cand):
            continue
        try:
            sigma = realize(D, cand)
        except ChamberError:
            continue
        try:
            ok, verified = _consistent(sigma, C, pt, prime)
            if ok and theta_membership(sigma, D, prime):
                return sigma, verified
        except (UnsupportedObject, Indeterminate, BudgetExceeded):
            continue
    return None


def boundary_probe(C: ExceptionalCollection, pt: ChamberPoint, W: int = 3, depth: int = 3, prime=None) -> BoundaryResult:
    """A collection whose chamber contains a limit point on one wall of C's chamber."""
    i, j = _limit_indices(C, pt)
    A = la.convert(QQ, la.transpose([list(E.klass) for E in C.objects]))

    def Z_of(X: DerivedObject) -> Gauss:
        # Z is linear; express X's class in the basis of C's classes
        x = la.solve(QQ, A, [QQ(v) for v in X.klass])
        if x is None:
            raise ChamberError("class outside the span of the collection")
        out = Gauss(0)
        for c, z in zip(x, pt.z):
            out = out + z * Q(c)
        return out

    if j == i - 1:
        # iterated mutations of the tight pair, nearest first
        cur = {"right": C, "left": C}
        for _ in range(depth):
            for direction in ("right", "left"):
                cur[direction] = mutate_collection(cur[direction], i - 1, direction)
                found = _try_collection(cur[direction], Z_of, C, pt, W, prime)
                if found is not None:
                    return BoundaryResult("adjacent", i, j, cur[direction], found[0], True, found[1])
        raise SearchExhausted("search exhausted: no iterated mutation of the tight pair contains the limit point")
    # E''': (E_{i-1}, E_i) -> (E_i[1], R_{E_i} E_{i-1}[-1])
    D = mutate_collection(C, i - 1, "right")
    shifted = list(D.objects)
    shifted[i - 1] = shifted[i - 1].shift(1)
    shifted[i] = shifted[i].shift(-1)
    D3 = ExceptionalCollection(tuple(shifted))
    found = _try_collection(D3, Z_of, C, pt, W, prime)
    if found is None:
        raise SearchExhausted("the displayed collection does not contain the limit point within the winding window")
    return BoundaryResult("non-adjacent", i, j, D3, found[0], True, found[1])
