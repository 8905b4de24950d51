"""Independent brute-force oracles. Nothing here imports the package's algorithms.

The HN oracle works over F_p with subspaces stored as explicit vector sets,
enumerates every subrepresentation, and searches every chain of
subrepresentations for the one meeting the HN conditions.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product
from math import comb


# ------------------------------------------------------------ F_p subspaces


def _span(vectors, n: int, p: int) -> frozenset:
    out = {tuple([0] * n)}
    for v in vectors:
        new = set(out)
        for c in range(1, p):
            w = tuple(c * x % p for x in v)
            for u in out:
                new.add(tuple((a + b) % p for a, b in zip(u, w)))
        out = new
    return frozenset(out)


def _rref_bases(n: int, p: int):
    """Row bases of every reduced row echelon form with n columns over F_p."""
    for k in range(n + 1):
        for pivots in combinations(range(n), k):
            free = [(r, c) for r in range(k) for c in range(pivots[r] + 1, n) if c not in pivots]
            for vals in product(range(p), repeat=len(free)):
                rows = [[0] * n for _ in range(k)]
                for r, c in enumerate(pivots):
                    rows[r][c] = 1
                for (r, c), v in zip(free, vals):
                    rows[r][c] = v
                yield [tuple(r) for r in rows]


@lru_cache(maxsize=None)
def all_subspaces(n: int, p: int) -> tuple:
    """Every subspace of F_p^n as (vector set, basis)."""
    out = []
    for basis in _rref_bases(n, p):
        vecs = frozenset(
            tuple(sum(c * b[i] for c, b in zip(cs, basis)) % p for i in range(n))
            for cs in product(range(p), repeat=len(basis))
        )
        out.append((vecs, basis))
    return tuple(out)


def _apply(m, v, p):
    return tuple(sum(r[j] * v[j] for j in range(len(v))) % p for r in m)


# ---------------------------------------------------- Kronecker HN oracle


def kronecker_subreps(dims: tuple, maps: list, p: int) -> list:
    """All (U0, U1) with every map sending U0 into U1, with their dimensions."""
    a, b = dims
    out = []
    subs1 = all_subspaces(b, p)
    for U0, B0 in all_subspaces(a, p):
        image = _span([_apply(m, v, p) for m in maps for v in B0], b, p)
        for U1, B1 in subs1:
            if image <= U1:
                out.append(((U0, U1), (len(B0), len(B1))))
    return out


def charge(z, d) -> tuple:
    return (z[0][0] * d[0] + z[1][0] * d[1], z[0][1] * d[0] + z[1][1] * d[1])


def phase_less(u, v) -> bool:
    """phi(u) < phi(v) for u, v in the upper half plane with negative reals."""
    return u[0] * v[1] - u[1] * v[0] > 0


class KroneckerLattice:
    """The subrepresentation lattice of one Kronecker module over F_p."""

    def __init__(self, dims: tuple, maps: list, p: int = 5):
        self.dims = tuple(dims)
        subs = kronecker_subreps(dims, maps, p)
        self.dv = [d for _, d in subs]
        n = len(subs)
        self.below = [0] * n  # bit j set when U_j is inside U_i
        for i, ((A0, A1), _) in enumerate(subs):
            m = 0
            for j, ((B0, B1), _) in enumerate(subs):
                if B0 <= A0 and B1 <= A1:
                    m |= 1 << j
            self.below[i] = m
        self.above = [0] * n
        for i in range(n):
            m = self.below[i]
            while m:
                low = m & -m
                j = low.bit_length() - 1
                self.above[j] |= 1 << i
                m ^= low
        self.bottom = self.dv.index((0, 0))
        self.top = self.dv.index(self.dims)
        self._between = {}

    def between_dims(self, lo: int, hi: int) -> frozenset:
        """Classes U/lo for lo < U <= hi."""
        key = (lo, hi)
        if key not in self._between:
            m = self.below[hi] & self.above[lo] & ~(1 << lo)
            base = self.dv[lo]
            out = set()
            while m:
                low = m & -m
                j = low.bit_length() - 1
                out.add((self.dv[j][0] - base[0], self.dv[j][1] - base[1]))
                m ^= low
            self._between[key] = frozenset(out)
        return self._between[key]

    def hn(self, z) -> list:
        """(class, charge) of each HN factor, by search over every chain of subobjects.

        A chain qualifies when each factor is semistable (no subfactor of larger
        phase) and factor phases strictly decrease. Exactly one type may qualify.
        """
        rank = _phase_ranks(z, self.dims)
        found = []

        def search(cur, chain, last):
            if cur == self.top:
                found.append(list(chain))
                return
            m = self.above[cur] & ~(1 << cur)
            while m:
                low = m & -m
                nxt = low.bit_length() - 1
                m ^= low
                d = (self.dv[nxt][0] - self.dv[cur][0], self.dv[nxt][1] - self.dv[cur][1])
                r = rank[d]
                if last is not None and r >= last:
                    continue
                if any(rank[e] > r for e in self.between_dims(cur, nxt)):
                    continue
                chain.append(d)
                search(nxt, chain, r)
                chain.pop()

        search(self.bottom, [], None)
        types = {tuple(c) for c in found}
        if len(types) != 1:
            raise AssertionError(f"expected a unique HN type, found {len(types)}")
        classes = found[0]
        return [(d, charge(z, d)) for d in classes]


def _phase_ranks(z, dims) -> dict:
    """Integer phase rank of every nonzero class up to dims; equal phases share a rank."""
    classes = [(a, b) for a in range(dims[0] + 1) for b in range(dims[1] + 1) if a or b]
    ch = {d: charge(z, d) for d in classes}
    order = []
    for d in classes:
        # insertion by counting classes of strictly smaller phase
        order.append((sum(1 for e in classes if phase_less(ch[e], ch[d])), d))
    return {d: r for r, d in order}


def hn_oracle(dims: tuple, maps: list, z, p: int = 5) -> list:
    return KroneckerLattice(dims, maps, p).hn(z)


# --------------------------------------------- Kronecker modules over F_p


def _eye(k):
    return [[int(i == j) for j in range(k)] for i in range(k)]


def _jordan(k, lam, p):
    return [[(lam if i == j else 1 if j == i + 1 else 0) % p for j in range(k)] for i in range(k)]


def _companion(coeffs, p):
    """Companion matrix of x^d + c_{d-1} x^{d-1} + ... + c_0."""
    d = len(coeffs)
    m = [[0] * d for _ in range(d)]
    for i in range(1, d):
        m[i][i - 1] = 1
    for i in range(d):
        m[i][d - 1] = (-coeffs[i]) % p
    return m


def _irreducible(d: int, p: int) -> list:
    """Monic irreducibles of degree d (d <= 3: no roots, and for d = 2, 3 that suffices)."""
    out = []
    for coeffs in product(range(p), repeat=d):
        if all((x**d + sum(c * x**i for i, c in enumerate(coeffs))) % p for x in range(p)):
            out.append(coeffs)
    return out


def kronecker_indecomposables(max_dim: int = 3, p: int = 5) -> list:
    """(dims, [A0, A1]) for every indecomposable with dims <= (max_dim, max_dim)."""
    out = []
    for k in range(max_dim):
        # preprojective (k, k+1) and preinjective (k+1, k)
        a0 = [[int(i == j) for j in range(k)] for i in range(k + 1)]
        a1 = [[int(i == j + 1) for j in range(k)] for i in range(k + 1)]
        out.append(((k, k + 1), [a0, a1]))
        b0 = [[int(i == j) for j in range(k + 1)] for i in range(k)]
        b1 = [[int(j == i + 1) for j in range(k + 1)] for i in range(k)]
        out.append(((k + 1, k), [b0, b1]))
    for k in range(1, max_dim + 1):
        for lam in range(p):
            out.append(((k, k), [_eye(k), _jordan(k, lam, p)]))
        out.append(((k, k), [_jordan(k, 0, p), _eye(k)]))  # the point at infinity
    for d in (2, 3):
        if d <= max_dim:
            for f in _irreducible(d, p):
                out.append(((d, d), [_eye(d), _companion(f, p)]))
    return out


def direct_sum(parts: list) -> tuple:
    a = sum(d[0] for d, _ in parts)
    b = sum(d[1] for d, _ in parts)
    maps = []
    for k in range(2):
        m = [[0] * a for _ in range(b)]
        r0 = c0 = 0
        for d, ms in parts:
            for i in range(d[1]):
                for j in range(d[0]):
                    m[r0 + i][c0 + j] = ms[k][i][j]
            r0 += d[1]
            c0 += d[0]
        maps.append(m)
    return (a, b), maps


def kronecker_iso_classes(max_dim: int = 3, p: int = 5) -> list:
    """Every isomorphism class with dims <= (max_dim, max_dim), as multisets of indecomposables."""
    ind = kronecker_indecomposables(max_dim, p)
    out = []

    def rec(start, parts, a, b):
        if parts:
            out.append(direct_sum(parts))
        for i in range(start, len(ind)):
            d = ind[i][0]
            if a + d[0] <= max_dim and b + d[1] <= max_dim:
                parts.append(ind[i])
                rec(i, parts, a + d[0], b + d[1])
                parts.pop()

    rec(0, [], 0, 0)
    return out


# -------------------------------------------------- Euler matrix of T_N


def beilinson_euler_oracle(N: int) -> list:
    """chi(L_i, L_j) on T_N by counting monomials.

    The projective at i has dimension C(k - i + N, N) at vertex k >= i (degree
    k - i monomials in N + 1 variables). chi(P_i, L_j) = delta_ij makes the
    Euler matrix the inverse of that unipotent matrix D; it is computed as the
    alternating sum of powers of D - I.
    """
    n = N + 1
    D = [[comb(k - i + N, N) if k >= i else 0 for k in range(n)] for i in range(n)]
    U = [[D[i][k] - (i == k) for k in range(n)] for i in range(n)]
    inv = [[int(i == k) for k in range(n)] for i in range(n)]
    power = [[int(i == k) for k in range(n)] for i in range(n)]
    for m in range(1, n):
        power = [[sum(power[i][t] * U[t][k] for t in range(n)) for k in range(n)] for i in range(n)]
        for i in range(n):
            for k in range(n):
                inv[i][k] += (-1) ** m * power[i][k]
    return inv


def frac_gauss(re, im) -> tuple:
    return (Fraction(re), Fraction(im))
