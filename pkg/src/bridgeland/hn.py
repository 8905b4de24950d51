"""Harder-Narasimhan filtrations of modules for a stability function on simples.

Subobjects are searched over F_p. Non-sink vertices are enumerated in
topological order (every subspace containing the image of what is already
chosen); at a sink only the extreme choices matter, because the phase of
``c + t * z_sink`` is monotone in ``t``. So each sink takes the image, the
whole space, or one step inside either end (needed for proper/nonzero
subobjects).

Rational modules are reduced mod p; a destabilizing candidate is trusted only
after it is lifted back to QQ and re-verified. An unliftable candidate that
outranks the chosen one forces a retry with the next prime, and the search
reports ``Indeterminate`` when the primes run out.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from . import linalg as la
from .linalg import QQ, Field, rational_reconstruction, symmetric_lift
from .phase import Gauss, PhaseValue, phase_of
from .representation import Representation, is_invariant, quotient_by, subrepresentation
from .subreps import (
    DEFAULT_BUDGET,
    DEFAULT_PRIME,
    BudgetExceeded,
    _canonical,
    _image,
    _superspaces,
    _topological_order,
    count_subspaces,
    enumerate_subreps,
    subspaces,
)

PRIMES = (5, 7, 11, 13)


class Indeterminate(RuntimeError):
    """The F_p search could not settle a question about a rational module."""


def class_charge(z, dims) -> Gauss:
    out = Gauss(0, 0)
    for zi, d in zip(z, dims):
        if d:
            out = out + zi * d
    return out


def class_phase(z, dims) -> PhaseValue:
    """Phase in (0, 1] of a nonzero effective class."""
    return phase_of(class_charge(z, dims))


class _PhaseMemo(dict):
    def __init__(self, z):
        super().__init__()
        self.z = z

    def __missing__(self, dims):
        v = self[dims] = class_phase(self.z, dims)
        return v


# ------------------------------------------------------------ candidates


@dataclass(frozen=True)
class Candidate:
    dims: tuple
    nonsink: tuple  # per vertex: basis rows, or None at sinks
    kinds: tuple  # per vertex: None, or one of "low", "high", "low+1", "high-1"


def _rank_mod(rows: list, p: int) -> int:
    rows = [list(r) for r in rows]
    rank = 0
    cols = len(rows[0]) if rows else 0
    for c in range(cols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][c], -1, p)
        pr = [(x * inv) % p for x in rows[rank]]
        rows[rank] = pr
        for i in range(rank + 1, len(rows)):
            f = rows[i][c]
            if f:
                rows[i] = [(x - f * y) % p for x, y in zip(rows[i], pr)]
        rank += 1
        if rank == len(rows):
            break
    return rank


def _sinks(Q) -> list[int]:
    return [v for v in range(Q.n) if not Q.out_arrows(v)]


def _sink_basis(F: Field, low: tuple, d: int, kind: str):
    """Basis of the chosen sink subspace given the forced part ``low``."""
    if kind == "low":
        return [list(r) for r in low]
    if kind == "high":
        return [[F.one if i == j else F.zero for i in range(d)] for j in range(d)]
    piv = {next(c for c, x in enumerate(r) if x) for r in low}
    free = [c for c in range(d) if c not in piv]
    e = lambda c: [F.one if i == c else F.zero for i in range(d)]  # noqa: E731
    if kind == "low+1":
        return [list(r) for r in low] + [e(free[0])]
    if kind == "high-1":
        return [list(r) for r in low] + [e(c) for c in free[:-1]]
    raise ValueError(kind)


def _sink_options(low_dim: int, d: int) -> list[str]:
    opts = ["low"]
    if d > low_dim:
        opts.append("high")
    if d - low_dim >= 2:
        opts += ["low+1", "high-1"]
    return opts


def _kind_dim(kind: str, low_dim: int, d: int) -> int:
    return {"low": low_dim, "high": d, "low+1": low_dim + 1, "high-1": d - 1}[kind]


def candidate_space_size(M: Representation) -> int:
    sinks = set(_sinks(M.quiver))
    size = 1
    for v, d in enumerate(M.dims):
        if v not in sinks:
            size *= count_subspaces(d, M.field.p)
    return size * 4 ** len(sinks)


def candidates(M: Representation, budget: int = DEFAULT_BUDGET) -> list[Candidate]:
    """Subobjects of an F_p module sufficient for every phase extremum."""
    F, Q = M.field, M.quiver
    if F.is_rational:
        raise ValueError("candidates are enumerated over F_p")
    order = _topological_order(Q)
    if order is None:
        return [Candidate(tuple(len(U) for U in s), tuple(s), (None,) * Q.n) for s in enumerate_subreps(M, budget)]
    size = candidate_space_size(M)
    if size > budget:
        raise BudgetExceeded(f"{size} candidate subobjects exceed budget {budget}")
    sinks = set(_sinks(Q))
    out: list[Candidate] = []
    chosen: dict[int, tuple] = {}
    p = F.p
    mats = {a.name: M.maps[a.name] for a in Q.arrows}

    def gens_into(y):
        gens = []
        for a in Q.in_arrows(y):
            U = chosen.get(Q.src(a))
            if U:
                m = mats[a]
                for b in U:
                    g = [sum(x * y for x, y in zip(r, b)) % p for r in m]
                    if any(g):
                        gens.append(g)
        return gens

    nonsinks = [v for v in order if v not in sinks]
    sink_list = sorted(sinks)

    def emit():
        base = [0] * Q.n
        for v in nonsinks:
            base[v] = len(chosen[v])
        low = [_rank_mod(gens_into(s), p) if M.dims[s] else 0 for s in sink_list]
        opts = [_sink_options(l, M.dims[s]) for l, s in zip(low, sink_list)]
        nonsink = tuple(chosen[v] if v not in sinks else None for v in range(Q.n))
        for combo in product(*opts):
            dims = list(base)
            kinds = [None] * Q.n
            for s, l, k in zip(sink_list, low, combo):
                dims[s] = _kind_dim(k, l, M.dims[s])
                kinds[s] = k
            out.append(Candidate(tuple(dims), nonsink, tuple(kinds)))

    def rec(i):
        if i == len(nonsinks):
            emit()
            return
        y = nonsinks[i]
        d = M.dims[y]
        if not d:
            chosen[y] = ()
            rec(i + 1)
        else:
            gens = gens_into(y)
            W = _canonical(F, gens) if gens else ()
            it = (U for k in range(d + 1) for U in subspaces(d, k, p)) if not W else _superspaces(F, W, d)
            for U in it:
                chosen[y] = U
                rec(i + 1)
        chosen.pop(y, None)

    rec(0)
    return out


def realize(M: Representation, cand: Candidate, nonsink_bases=None) -> list | None:
    """Per-vertex bases of the candidate inside M (over M's field), or None."""
    F, Q = M.field, M.quiver
    order = _topological_order(Q) or list(range(Q.n))
    bases: list = [None] * Q.n
    src = nonsink_bases if nonsink_bases is not None else cand.nonsink
    for v in order:
        if cand.kinds[v] is None:
            bases[v] = [list(r) for r in src[v]]
            continue
        gens = []
        for a in Q.in_arrows(v):
            x = Q.src(a)
            if bases[x]:
                for b in bases[x]:
                    m = M.mat(a)
                    img = [sum((r[j] * b[j] for j in range(len(b))), F.zero) for r in m]
                    if F.p:
                        img = [c % F.p for c in img]
                    gens.append(img)
        low = tuple(tuple(r) for r in la.rref(F, gens)[0]) if gens and M.dims[v] else ()
        bases[v] = _sink_basis(F, low, M.dims[v], cand.kinds[v])
    if tuple(len(b) for b in bases) != cand.dims:
        return None
    return bases


def lift_bases(M: Representation, cand: Candidate, p: int) -> list | None:
    """Lift an F_p candidate to an invariant family of the rational module M."""
    for lift in (symmetric_lift, rational_reconstruction):
        nonsink = []
        ok = True
        for v, U in enumerate(cand.nonsink):
            if cand.kinds[v] is not None:
                nonsink.append(None)
                continue
            rows = []
            for r in U:
                vals = [lift(int(x), p) for x in r]
                if any(x is None for x in vals):
                    ok = False
                    break
                rows.append([QQ(x) for x in vals])
            if not ok or (rows and la.rank(QQ, rows) != len(rows)):
                ok = False
                break
            nonsink.append(rows)
        if not ok:
            continue
        bases = realize(M, cand, nonsink)
        if bases is not None and is_invariant(M, bases):
            return bases
    return None


# ------------------------------------------------------------------ core


def _rank_key(phases, dims):
    """Sort key: larger is a better destabilizer (phase, total dim, lex-smallest)."""
    return (phases[dims], sum(dims), tuple(-d for d in dims))


def _reduce(M: Representation, p: int) -> Representation | None:
    try:
        return M.reduce_mod(p)
    except ZeroDivisionError:
        return None


def _primes(M: Representation, prime: int | None):
    if not M.field.is_rational:
        return [M.field.p]
    first = prime or DEFAULT_PRIME
    return [first] + [q for q in PRIMES if q != first]


def max_destabilizer(M: Representation, z, prime: int | None = None, budget: int = DEFAULT_BUDGET):
    """(dims, bases) of the maximal subobject of maximal phase."""
    for p in _primes(M, prime):
        Mp = M if not M.field.is_rational else _reduce(M, p)
        if Mp is None:
            continue
        cands = [c for c in candidates(Mp, budget) if any(c.dims)]
        # stable sort keeps enumeration order among exact ties
        phases = _PhaseMemo(z)
        cands.sort(key=lambda c: _rank_key(phases, c.dims), reverse=True)
        failed = None  # best key among candidates that did not lift
        for c in cands:
            if not M.field.is_rational:
                return c.dims, realize(M, c)
            bases = lift_bases(M, c, p)
            key = _rank_key(phases, c.dims)
            if bases is not None:
                if failed is None or not failed > key:
                    return c.dims, bases
                break
            if failed is None:
                failed = key
    raise Indeterminate("maximal destabilizing subobject could not be certified over QQ")


@dataclass(frozen=True)
class HNFactor:
    module: Representation
    dims: tuple
    phase: PhaseValue

    def to_json(self) -> dict:
        return {"class": list(self.dims), "phase": self.phase.to_json()}


def hn_factors(M: Representation, z, prime: int | None = None, budget: int = DEFAULT_BUDGET) -> list[HNFactor]:
    """HN factors (phases strictly decreasing) of a module for charges z on simples."""
    out = []
    cur = M
    while not cur.is_zero:
        dims, bases = max_destabilizer(cur, z, prime, budget)
        S, _ = subrepresentation(cur, bases)
        out.append(HNFactor(S, dims, class_phase(z, dims)))
        if dims == cur.dims:
            break
        cur, _ = quotient_by(cur, bases)
    for a, b in zip(out, out[1:]):
        if not a.phase > b.phase:
            raise AssertionError("HN phases not strictly decreasing")
    return out


def stability_status(M: Representation, z, prime: int | None = None, budget: int = DEFAULT_BUDGET) -> str:
    """'stable', 'semistable' or 'unstable'."""
    if M.is_zero:
        raise ValueError("zero module")
    phi = class_phase(z, M.dims)
    for p in _primes(M, prime):
        Mp = M if not M.field.is_rational else _reduce(M, p)
        if Mp is None:
            continue
        proper = [c for c in candidates(Mp, budget) if any(c.dims) and c.dims != M.dims]
        phases = _PhaseMemo(z)
        above = [c for c in proper if phases[c.dims] > phi]
        equal = [c for c in proper if phases[c.dims] == phi]
        if not M.field.is_rational:
            return "unstable" if above else ("semistable" if equal else "stable")
        if any(lift_bases(M, c, p) is not None for c in above):
            return "unstable"
        if above:
            continue
        if not equal:
            return "stable"
        if any(lift_bases(M, c, p) is not None for c in equal):
            return "semistable"
    raise Indeterminate("stability of a rational module could not be certified")
