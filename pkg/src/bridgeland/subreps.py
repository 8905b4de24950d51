"""Subrepresentation search over small prime fields.

Over the rationals the set of subrepresentations is infinite, so the search
runs over F_p. Integral rational modules are reduced mod p first; every
rational subrepresentation reduces to one of the same dimension vector, so the
F_p answer is a superset, and any subobject we actually use is lifted back
and re-verified over QQ.
"""

from __future__ import annotations

import os
from itertools import combinations, product

from . import linalg as la
from .linalg import QQ, Field
from .representation import Representation, RepresentationError, is_invariant

DEFAULT_PRIME = int(os.environ.get("BRIDGELAND_PRIME", "5"))
DEFAULT_BUDGET = int(os.environ.get("BRIDGELAND_SUBREP_BUDGET", str(10**7)))


class BudgetExceeded(RuntimeError):
    """The subspace search space is larger than the configured budget."""


def gaussian_binomial(d: int, k: int, p: int) -> int:
    if k < 0 or k > d:
        return 0
    num = den = 1
    for i in range(k):
        num *= p ** (d - i) - 1
        den *= p ** (i + 1) - 1
    return num // den


def count_subspaces(d: int, p: int) -> int:
    return sum(gaussian_binomial(d, k, p) for k in range(d + 1))


def subspaces(d: int, k: int, p: int):
    """All k-dimensional subspaces of F_p^d as RREF row bases."""
    if k == 0:
        yield ()
        return
    for piv in combinations(range(d), k):
        free = [(r, c) for r in range(k) for c in range(piv[r] + 1, d) if c not in piv]
        for vals in product(range(p), repeat=len(free)):
            rows = [[0] * d for _ in range(k)]
            for r, c in enumerate(piv):
                rows[r][c] = 1
            for (r, c), v in zip(free, vals):
                rows[r][c] = v
            yield tuple(tuple(r) for r in rows)


def _canonical(F: Field, rows) -> tuple:
    if not rows:
        return ()
    return tuple(tuple(r) for r in la.rref(F, [list(r) for r in rows])[0])


def _superspaces(F: Field, W: tuple, d: int):
    """All subspaces of F_p^d containing W, canonical form."""
    w = len(W)
    piv = [next(c for c, x in enumerate(r) if x) for r in W]
    free = [c for c in range(d) if c not in piv]
    for k in range(d - w + 1):
        for U in subspaces(d - w, k, F.p):
            rows = [list(r) for r in W]
            for u in U:
                v = [0] * d
                for c, x in zip(free, u):
                    v[c] = x
                rows.append(v)
            yield _canonical(F, rows)


def _topological_order(Q) -> list[int] | None:
    indeg = [0] * Q.n
    for a in Q.arrows:
        indeg[Q.tgt(a.name)] += 1
    order, stack = [], [v for v in range(Q.n) if indeg[v] == 0]
    while stack:
        v = stack.pop(0)
        order.append(v)
        for a in Q.out_arrows(v):
            t = Q.tgt(a)
            indeg[t] -= 1
            if indeg[t] == 0:
                stack.append(t)
    return order if len(order) == Q.n else None


def _image(F: Field, M: Representation, a: str, basis) -> list:
    m = M.mat(a)
    out = []
    for b in basis:
        out.append([sum(r[j] * b[j] for j in range(len(b))) % F.p for r in m])
    return out


def search_space_size(M: Representation) -> int:
    p = M.field.p
    size = 1
    for d in M.dims:
        size *= count_subspaces(d, p)
    return size


def enumerate_subreps(M: Representation, budget: int = DEFAULT_BUDGET) -> list[tuple]:
    """Every subrepresentation of M (over F_p) as a tuple of per-vertex RREF bases."""
    F = M.field
    if F.is_rational:
        raise RepresentationError("reduce rational modules mod p before enumerating")
    size = search_space_size(M)
    if size > budget:
        raise BudgetExceeded(f"{size} candidate subspace tuples exceed budget {budget}")
    Q = M.quiver
    order = _topological_order(Q)
    results = []
    if order is None:
        per_vertex = [
            [U for k in range(d + 1) for U in subspaces(d, k, F.p)] for d in M.dims
        ]
        for choice in product(*per_vertex):
            bases = [[list(r) for r in U] for U in choice]
            if is_invariant(M, bases):
                results.append(tuple(choice))
        return results

    def rec(i, chosen):
        if i == len(order):
            results.append(tuple(chosen[v] for v in range(Q.n)))
            return
        y = order[i]
        d = M.dims[y]
        gens = []
        for a in Q.in_arrows(y):
            x = Q.src(a)
            if chosen[x]:
                gens.extend(_image(F, M, a, chosen[x]))
        W = _canonical(F, [g for g in gens if any(g)]) if d else ()
        for U in _superspaces(F, W, d) if d else [()]:
            chosen[y] = U
            rec(i + 1, chosen)
        chosen.pop(y, None)

    rec(0, {})
    return results


def _reduced(M: Representation, p: int) -> Representation:
    if M.field.is_rational:
        if not all(x.denominator % p for m in M.maps.values() for r in m for x in r):
            raise ZeroDivisionError(f"{p} divides a denominator")
        return M.reduce_mod(p)
    return M


def subrep_dimvectors(M: Representation, p: int = DEFAULT_PRIME, budget: int = DEFAULT_BUDGET) -> set:
    """Dimension vectors of subrepresentations (searched over F_p)."""
    Mp = _reduced(M, p)
    return {tuple(len(U) for U in s) for s in enumerate_subreps(Mp, budget)}


def contains(F: Field, U, V) -> bool:
    """Does the span of U contain the span of V (row bases)?"""
    if not V:
        return True
    if not U:
        return False
    return la.rank(F, [list(r) for r in U] + [list(r) for r in V]) == len(U)


# ---------------------------------------------------------------- lifting


def lift_subrep(M: Representation, bases_mod_p, p: int) -> list | None:
    """Lift an F_p subspace family to an invariant rational family of M, or None."""
    from .linalg import rational_reconstruction, symmetric_lift

    for lift in (symmetric_lift, rational_reconstruction):
        bases = []
        ok = True
        for U in bases_mod_p:
            rows = []
            for r in U:
                vals = [lift(int(x), p) for x in r]
                if any(v is None for v in vals):
                    ok = False
                    break
                rows.append([QQ(v) for v in vals])
            if not ok:
                break
            if rows and la.rank(QQ, rows) != len(rows):
                ok = False
                break
            bases.append(rows)
        if ok and is_invariant(M, bases):
            return bases
    return None
