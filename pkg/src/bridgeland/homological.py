"""Projective resolutions, Ext groups and the Euler form."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from gmpy2 import mpq

from . import linalg as la
from .quiver import Quiver
from .representation import (
    Morphism,
    Representation,
    RepresentationError,
    direct_sum,
    kernel,
    map_from_projective,
    projective,
    simple,
)


class ResolutionTruncated(RuntimeError):
    """The resolution was cut at ``max_length`` before reaching zero."""


@dataclass(frozen=True, eq=False)
class ProjectiveTerm:
    summands: tuple  # vertex index of each indecomposable projective summand
    module: Representation

    def multiplicities(self, n: int) -> tuple:
        return tuple(self.summands.count(v) for v in range(n))


@dataclass(frozen=True, eq=False)
class Resolution:
    """``... -> P_1 -> P_0 -> M -> 0``.

    ``differentials[0]`` is the augmentation ``P_0 -> M``; ``differentials[k]``
    for k >= 1 is ``P_k -> P_{k-1}``.
    """

    module: Representation
    terms: tuple
    differentials: tuple
    truncated: bool

    @property
    def length(self) -> int:
        return len(self.terms) - 1

    def multiplicity_table(self) -> list[tuple]:
        n = self.module.quiver.n
        return [t.multiplicities(n) for t in self.terms]


def _top_vectors(M: Representation, x: int) -> list[list]:
    """Vectors of M_x spanning a complement of the radical at x."""
    F, Q = M.field, M.quiver
    d = M.dims[x]
    if d == 0:
        return []
    rad = []
    for a in Q.in_arrows(x):
        rad.extend(la.column_space(F, M.mat(a)) if M.dims[Q.src(a)] else [])
    piv = set()
    if rad:
        _, p = la.rref(F, rad)
        piv = set(p)
    return [[F.one if k == j else F.zero for k in range(d)] for j in range(d) if j not in piv]


def _generator_offsets(Q: Quiver, summands) -> list[int]:
    """Coordinate of the generator e_y of each summand inside the sum at vertex y."""
    A = Q.path_algebra
    offs = []
    for i, y in enumerate(summands):
        before = sum(A.dim(s, y) for s in summands[:i])
        offs.append(before + A.basis[(y, y)].index(()))
    return offs


def projective_cover(M: Representation) -> tuple[ProjectiveTerm, Morphism]:
    Q, F = M.quiver, M.field
    summands = []
    images = []
    for x in range(Q.n):
        for v in _top_vectors(M, x):
            summands.append(x)
            images.append(v)
    P = direct_sum([projective(Q, x, F) for x in summands]) if summands else None
    if P is None:
        raise RepresentationError("zero module has no nonzero cover")
    pieces = [map_from_projective(projective(Q, x, F), x, M, v) for x, v in zip(summands, images)]
    comps = []
    for y in range(Q.n):
        rows = [[] for _ in range(M.dims[y])]
        for f in pieces:
            c = f.comp(y)
            for r in range(M.dims[y]):
                rows[r].extend(c[r] if c else [])
        comps.append(rows)
    return ProjectiveTerm(tuple(summands), P), Morphism(P, M, comps)


def minimal_projective_resolution(M: Representation, max_length: int = 12) -> Resolution:
    """Minimal projective resolution by iterated projective covers of kernels."""
    if M.is_zero:
        raise RepresentationError("zero module")
    Q = M.quiver
    if Q.has_oriented_cycle and not Q.relations:
        raise RepresentationError("infinite-dimensional path algebra")
    term, eps = projective_cover(M)
    terms, diffs = [term], [eps]
    K, inc = kernel(eps)
    truncated = False
    while not K.is_zero:
        if len(terms) > max_length:
            truncated = True
            break
        t, cov = projective_cover(K)
        diffs.append(cov.then(inc))
        terms.append(t)
        K, inc = kernel(cov)
    return Resolution(M, tuple(terms), tuple(diffs), truncated)


def check_exact(res: Resolution) -> bool:
    """Rank check: exact at every P_k and the augmentation is onto."""
    F = res.module.field
    n = res.module.quiver.n
    eps = res.differentials[0]
    if eps.rank_vector() != res.module.dims:
        return False
    for k in range(1, len(res.terms)):
        d_in = res.differentials[k].rank_vector()
        d_out = res.differentials[k - 1].rank_vector()
        dims = res.terms[k - 1].module.dims
        if any(dims[v] - d_out[v] != d_in[v] for v in range(n)):
            return False
        if k >= 2 and not res.differentials[k].then(res.differentials[k - 1]).is_zero():
            return False
    if not res.truncated:
        last = res.differentials[-1].rank_vector()
        if last != res.terms[-1].module.dims:
            return False
    return True


def _path_matrices(N: Representation, x: int, paths) -> dict:
    """Matrix of each path from x acting on N, sharing prefixes."""
    F = N.field
    cache = {(): la.identity(F, N.dims[x])}

    def get(p):
        if p not in cache:
            prev = get(p[:-1])
            cache[p] = la.matmul(F, N.mat(p[-1]), prev, inner=len(prev), cols=N.dims[x])
        return cache[p]

    return {p: get(tuple(p)) for p in paths}


def _hom_from_term(term: ProjectiveTerm, N: Representation) -> list[Morphism]:
    """Basis of Hom(P, N) for P a sum of indecomposable projectives.

    The basis element for summand i and vector e_j of N_y sends the generator
    of that summand to e_j; on the basis path p it is column j of p acting on N.
    """
    Q, F = N.quiver, N.field
    A = Q.path_algebra
    Ps = [projective(Q, y, F) for y in term.summands]
    zero = F.zero
    mats = {}
    for y in set(term.summands):
        for v in range(Q.n):
            mats[(y, v)] = _path_matrices(N, y, A.basis[(y, v)])
    out = []
    for i, y in enumerate(term.summands):
        for j in range(N.dims[y]):
            comps = []
            for v in range(Q.n):
                rows = [[] for _ in range(N.dims[v])]
                for l, z in enumerate(term.summands):
                    if l != i:
                        width = Ps[l].dims[v]
                        for r in range(N.dims[v]):
                            rows[r].extend([zero] * width)
                        continue
                    pm = mats[(y, v)]
                    for p in A.basis[(y, v)]:
                        m = pm[p]
                        for r in range(N.dims[v]):
                            rows[r].append(m[r][j])
                comps.append(rows)
            out.append(Morphism(term.module, N, comps))
    return out


def _pullback_matrix(d: Morphism, src_term: ProjectiveTerm, basis: list[Morphism], N: Representation) -> list:
    """Matrix of g -> g . d from Hom(P_{k}, N) to Hom(P_{k+1}, N) in generator coordinates.

    g . d is determined by its values on the generators of P_{k+1}, so only
    the generator columns of d are pushed through g.
    """
    Q, F = N.quiver, N.field
    offs = _generator_offsets(Q, src_term.summands)
    gens = [(y, [row[off] for row in d.comp(y)]) for y, off in zip(src_term.summands, offs)]
    p = F.p
    cols = []
    for g in basis:
        col = []
        for y, vec in gens:
            for row in g.comp(y):
                s = sum(a * b for a, b in zip(row, vec) if a and b)
                col.append(s % p if p else mpq(s))
        cols.append(col)
    rows = sum(N.dims[y] for y in src_term.summands)
    return la.transpose(cols, rows=rows) if cols else la.zeros(F, rows, 0)


def ext_dims(M: Representation, N: Representation, max_degree: int | None = None, res: Resolution | None = None) -> list[int]:
    """[dim Ext^0, dim Ext^1, ...] up to the resolution length (or max_degree)."""
    if M.quiver != N.quiver or M.field != N.field:
        raise RepresentationError("quiver or field mismatch")
    if M.is_zero or N.is_zero:
        return [0]
    res = res or minimal_projective_resolution(M)
    F = M.field
    top = res.length if max_degree is None else max_degree
    if res.truncated and top >= res.length:
        raise ResolutionTruncated(f"resolution truncated before degree {top}")
    bases = [_hom_from_term(t, N) for t in res.terms]
    ranks = []  # rank of d_{k+1}^*: Hom(P_k) -> Hom(P_{k+1})
    for k in range(len(res.terms)):
        if k + 1 < len(res.terms) and bases[k]:
            m = _pullback_matrix(res.differentials[k + 1], res.terms[k + 1], bases[k], N)
            ranks.append(la.rank(F, m))
        else:
            ranks.append(0)
    out = []
    for k in range(min(top, res.length) + 1):
        dim_k = len(bases[k])
        prev = ranks[k - 1] if k > 0 else 0
        out.append(dim_k - ranks[k] - prev)
    while len(out) < top + 1:
        out.append(0)
    return out


def ext_dim(M: Representation, N: Representation, k: int) -> int:
    if k < 0:
        return 0
    if M.is_zero or N.is_zero:
        return 0
    res = _cached_resolution(M)
    if k > res.length:
        if res.truncated:
            raise ResolutionTruncated(f"resolution truncated before degree {k}")
        return 0
    return ext_dims(M, N, max_degree=k, res=res)[k]


@lru_cache(maxsize=512)
def _cached_resolution(M: Representation) -> Resolution:
    return minimal_projective_resolution(M)


@lru_cache(maxsize=2048)
def ext_profile(M: Representation, N: Representation) -> tuple:
    """All nonzero-capable Ext dimensions, as a tuple indexed by degree."""
    if M.is_zero or N.is_zero:
        return (0,)
    res = _cached_resolution(M)
    if res.truncated:
        raise ResolutionTruncated("resolution truncated")
    return tuple(ext_dims(M, N, res=res))


# -------------------------------------------------------------- Euler form


@dataclass(frozen=True)
class EulerMatrix:
    """``E[i][j] = chi(L_i, L_j)`` in the basis of simples."""

    entries: tuple

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(tuple(int(x) for x in r) for r in self.entries))

    @property
    def n(self) -> int:
        return len(self.entries)

    def __call__(self, d, e) -> int:
        return sum(d[i] * self.entries[i][j] * e[j] for i in range(self.n) for j in range(self.n) if d[i] and e[j])

    def tolist(self) -> list:
        return [list(r) for r in self.entries]


def hereditary_euler(Q: Quiver) -> EulerMatrix:
    n = Q.n
    E = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    for a in Q.arrows:
        E[Q.src(a.name)][Q.tgt(a.name)] -= 1
    return EulerMatrix(E)


@lru_cache(maxsize=64)
def euler_matrix(Q: Quiver, max_length: int = 12) -> EulerMatrix:
    """Alternating sums of Ext dimensions between simples, from resolutions."""
    simples = [simple(Q, v) for v in range(Q.n)]
    E = []
    for i, Li in enumerate(simples):
        res = minimal_projective_resolution(Li, max_length=max_length)
        if res.truncated:
            raise ResolutionTruncated(f"resolution of simple {Q.vertices[i]} does not terminate within {max_length}")
        row = []
        for Lj in simples:
            dims = ext_dims(Li, Lj, res=res)
            row.append(sum((-1) ** k * d for k, d in enumerate(dims)))
        E.append(row)
        selfext = ext_dims(Li, Li, res=res)
        assert selfext[0] == 1
        if all(d == 0 for d in selfext[1:]):
            assert row[i] == 1
    return EulerMatrix(E)
