"""Finite-dimensional representations of quivers with relations."""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Sequence

from . import linalg as la
from .linalg import QQ, Field
from .quiver import Quiver


class RepresentationError(ValueError):
    pass


def _freeze(m) -> tuple:
    return tuple(tuple(r) for r in m)


@dataclass(frozen=True, eq=False)
class Representation:
    """Vector spaces ``F^dims[v]`` at vertices and a matrix per arrow.

    ``maps[a]`` has shape ``(dims[target], dims[source])``. Every relation of
    the quiver is checked to evaluate to zero at construction.
    """

    quiver: Quiver
    field: Field
    dims: tuple
    maps: dict

    def __post_init__(self):
        Q, F = self.quiver, self.field
        dims = tuple(int(d) for d in self.dims)
        if len(dims) != Q.n or any(d < 0 for d in dims):
            raise RepresentationError(f"bad dimension vector {dims} for {Q!r}")
        object.__setattr__(self, "dims", dims)
        maps = {}
        for a in Q.arrows:
            s, t = dims[Q.index[a.source]], dims[Q.index[a.target]]
            m = self.maps.get(a.name)
            if m is None:
                m = la.zeros(F, t, s)
            m = [[F(x) for x in row] for row in m]
            if len(m) != t or any(len(r) != s for r in m):
                if not (t == 0 and len(m) == 0):
                    raise RepresentationError(f"arrow {a.name}: expected {t}x{s} matrix")
            maps[a.name] = _freeze(m)
        extra = set(self.maps) - set(maps)
        if extra:
            raise RepresentationError(f"unknown arrows {sorted(extra)}")
        object.__setattr__(self, "maps", maps)
        for rel in Q.relations:
            x, y = Q.path_endpoints(rel.terms[0][1])
            acc = la.zeros(F, dims[y], dims[x])
            for c, p in rel.terms:
                acc = la.matadd(F, acc, la.scale(F, F(c), self.path_matrix(p)))
            if not la.is_zero(acc):
                raise RepresentationError("representation violates a relation")

    # ----------------------------------------------------------- basics

    def mat(self, a: str) -> list:
        return [list(r) for r in self.maps[a]]

    def path_matrix(self, p: Sequence[str]) -> list:
        F, Q = self.field, self.quiver
        if not p:
            raise ValueError("use identity for trivial paths")
        out = self.mat(p[0])
        for a in p[1:]:
            out = la.matmul(F, self.mat(a), out, inner=self.dims[Q.src(a)], cols=self.dims[Q.src(p[0])])
        return out

    @property
    def total_dim(self) -> int:
        return sum(self.dims)

    @property
    def is_zero(self) -> bool:
        return self.total_dim == 0

    def __repr__(self):
        return f"Rep{self.dims}/{self.field.tag}"

    def _key(self):
        return (self.quiver, self.field, self.dims, tuple(sorted(self.maps.items())))

    def __eq__(self, other):
        return isinstance(other, Representation) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def reduce_mod(self, p: int) -> "Representation":
        if not self.field.is_rational:
            raise RepresentationError("only rational representations can be reduced")
        F = Field(p)
        return Representation(
            self.quiver, F, self.dims, {a: la.reduce_mod(p, m) for a, m in self.maps.items()}
        )

    def is_integral(self) -> bool:
        return all(Fraction(x).denominator == 1 for m in self.maps.values() for r in m for x in r)

    # ------------------------------------------------------ serialization

    def to_json(self) -> dict:
        def s(x):
            if self.field.is_rational:
                x = Fraction(x)
                return f"{x.numerator}/{x.denominator}"
            return str(x)

        return {
            "field": self.field.tag,
            "dims": list(self.dims),
            "maps": {a: [[s(x) for x in r] for r in m] for a, m in self.maps.items()},
        }

    @classmethod
    def from_json(cls, Q: Quiver, data) -> "Representation":
        if isinstance(data, str):
            data = json.loads(data)
        F = Field.parse(data.get("field", "QQ"))
        maps = {a: [[F(Fraction(x)) for x in r] for r in m] for a, m in data.get("maps", {}).items()}
        return cls(Q, F, tuple(data["dims"]), maps)


# -------------------------------------------------------------- morphisms


@dataclass(frozen=True, eq=False)
class Morphism:
    """Per-vertex matrices ``comps[v]`` of shape ``(target.dims[v], source.dims[v])``."""

    source: Representation
    target: Representation
    comps: tuple

    def __post_init__(self):
        object.__setattr__(self, "comps", tuple(_freeze(c) for c in self.comps))

    def comp(self, v: int) -> list:
        return [list(r) for r in self.comps[v]]

    def is_homomorphism(self) -> bool:
        M, N, Q, F = self.source, self.target, self.source.quiver, self.source.field
        for a in Q.arrows:
            x, y = Q.index[a.source], Q.index[a.target]
            lhs = la.matmul(F, self.comp(y), M.mat(a.name), inner=M.dims[y], cols=M.dims[x])
            rhs = la.matmul(F, N.mat(a.name), self.comp(x), inner=N.dims[x], cols=M.dims[x])
            if lhs != rhs:
                return False
        return True

    def then(self, g: "Morphism") -> "Morphism":
        """``g . self``."""
        F = self.source.field
        comps = [
            la.matmul(F, g.comp(v), self.comp(v), inner=self.target.dims[v], cols=self.source.dims[v])
            for v in range(self.source.quiver.n)
        ]
        return Morphism(self.source, g.target, comps)

    def is_zero(self) -> bool:
        return all(la.is_zero(c) for c in self.comps)

    def is_iso(self) -> bool:
        F = self.source.field
        if self.source.dims != self.target.dims:
            return False
        return all(la.rank(F, self.comp(v)) == d for v, d in enumerate(self.source.dims))

    def inverse(self) -> "Morphism":
        F = self.source.field
        comps = [la.inverse(F, self.comp(v)) if d else [] for v, d in enumerate(self.source.dims)]
        return Morphism(self.target, self.source, comps)

    def rank_vector(self) -> tuple:
        F = self.source.field
        return tuple(la.rank(F, self.comp(v)) if self.comps[v] else 0 for v in range(len(self.comps)))


def zero_morphism(M: Representation, N: Representation) -> Morphism:
    return Morphism(M, N, [la.zeros(M.field, N.dims[v], M.dims[v]) for v in range(M.quiver.n)])


def identity_morphism(M: Representation) -> Morphism:
    return Morphism(M, M, [la.identity(M.field, d) for d in M.dims])


def _check_compatible(M: Representation, N: Representation):
    if M.quiver != N.quiver:
        raise RepresentationError("representations over different quivers")
    if M.field != N.field:
        raise RepresentationError(f"field mismatch {M.field} vs {N.field}")


def hom_basis(M: Representation, N: Representation) -> list[Morphism]:
    """Basis of Hom(M, N): solve ``f_y M_a = N_a f_x`` for every arrow ``a: x -> y``."""
    _check_compatible(M, N)
    Q, F = M.quiver, M.field
    offsets = []
    total = 0
    for v in range(Q.n):
        offsets.append(total)
        total += N.dims[v] * M.dims[v]
    if total == 0:
        return []

    def var(v, i, j):  # entry (i, j) of f_v
        return offsets[v] + i * M.dims[v] + j

    rows = []
    for a in Q.arrows:
        x, y = Q.index[a.source], Q.index[a.target]
        Ma, Na = M.mat(a.name), N.mat(a.name)
        # (f_y M_a - N_a f_x)[i][j] for i < N.dims[y], j < M.dims[x]
        for i in range(N.dims[y]):
            for j in range(M.dims[x]):
                row = [F.zero] * total
                for k in range(M.dims[y]):
                    if Ma[k][j]:
                        row[var(y, i, k)] = F.add(row[var(y, i, k)], Ma[k][j])
                for k in range(N.dims[x]):
                    if Na[i][k]:
                        row[var(x, k, j)] = F.sub(row[var(x, k, j)], Na[i][k])
                if any(row):
                    rows.append(row)
    basis = []
    for vec in la.nullspace(F, rows, cols=total):
        comps = []
        for v in range(Q.n):
            comps.append(
                [[vec[var(v, i, j)] for j in range(M.dims[v])] for i in range(N.dims[v])]
            )
        basis.append(Morphism(M, N, comps))
    return basis


def hom_dim(M: Representation, N: Representation) -> int:
    return len(hom_basis(M, N))


def combine(F: Field, coeffs: Sequence, maps: Sequence[Morphism], M: Representation, N: Representation) -> Morphism:
    comps = [la.zeros(F, N.dims[v], M.dims[v]) for v in range(M.quiver.n)]
    for c, f in zip(coeffs, maps):
        for v in range(M.quiver.n):
            comps[v] = la.matadd(F, comps[v], la.scale(F, F(c), f.comp(v)))
    return Morphism(M, N, comps)


# ------------------------------------------------------------ constructors


def simple(Q: Quiver, v, F: Field = QQ) -> Representation:
    i = Q.simple_index(v)
    return Representation(Q, F, tuple(1 if j == i else 0 for j in range(Q.n)), {})


def zero_rep(Q: Quiver, F: Field = QQ) -> Representation:
    return Representation(Q, F, (0,) * Q.n, {})


def projective(Q: Quiver, x, F: Field = QQ) -> Representation:
    """P_x = e_x A: basis at y are the basis paths from x to y."""
    return _projective(Q, Q.simple_index(x), F)


@lru_cache(maxsize=256)
def _projective(Q: Quiver, x: int, F: Field) -> Representation:
    A = Q.path_algebra
    dims = tuple(A.dim(x, y) for y in range(Q.n))
    maps = {}
    for a in Q.arrows:
        s, t = Q.src(a.name), Q.tgt(a.name)
        src_basis = A.basis[(x, s)]
        tgt_basis = A.basis[(x, t)]
        tindex = {p: i for i, p in enumerate(tgt_basis)}
        m = la.zeros(F, len(tgt_basis), len(src_basis))
        for j, p in enumerate(src_basis):
            for q, c in A.normal_form(x, p + (a.name,)).items():
                m[tindex[q]][j] = F(c)
        maps[a.name] = m
    return Representation(Q, F, dims, maps)


def direct_sum(reps: Sequence[Representation]) -> Representation:
    reps = list(reps)
    if not reps:
        raise RepresentationError("empty direct sum")
    Q, F = reps[0].quiver, reps[0].field
    for r in reps[1:]:
        _check_compatible(reps[0], r)
    dims = tuple(sum(r.dims[v] for r in reps) for v in range(Q.n))
    maps = {}
    for a in Q.arrows:
        s, t = Q.src(a.name), Q.tgt(a.name)
        maps[a.name] = la.block_diag(F, [r.mat(a.name) for r in reps], [(r.dims[t], r.dims[s]) for r in reps])
    return Representation(Q, F, dims, maps)


def path_action(M: Representation, x: int, p, vec: list) -> list:
    """Apply the path ``p`` (starting at x) to a vector of ``M_x``."""
    F = M.field
    cur = list(vec)
    Q = M.quiver
    for a in p:
        m = M.mat(a)
        cur = [sum((F.mul(r[j], cur[j]) for j in range(len(cur))), F.zero) for r in m]
        if F.p:
            cur = [c % F.p for c in cur]
    return cur


def map_from_projective(P: Representation, x: int, M: Representation, vec: list) -> Morphism:
    """The morphism ``P_x -> M`` sending ``e_x`` to ``vec`` in ``M_x``."""
    Q, F = M.quiver, M.field
    A = Q.path_algebra
    comps = []
    for y in range(Q.n):
        cols = [path_action(M, x, p, vec) for p in A.basis[(x, y)]]
        comps.append(la.transpose(cols, rows=M.dims[y]) if cols else [[] for _ in range(M.dims[y])])
    return Morphism(P, M, comps)


# ---------------------------------------------------- kernels and cokernels


def _restrict(M: Representation, bases: Sequence[list]) -> Representation:
    """Subrepresentation spanned by per-vertex column bases (must be invariant)."""
    Q, F = M.quiver, M.field
    dims = tuple(len(b) for b in bases)
    maps = {}
    for a in Q.arrows:
        x, y = Q.src(a.name), Q.tgt(a.name)
        Ma = M.mat(a.name)
        cols = []
        By = la.transpose(bases[y], rows=M.dims[y]) if bases[y] else [[] for _ in range(M.dims[y])]
        for b in bases[x]:
            img = [sum((F.mul(r[j], b[j]) for j in range(len(b))), F.zero) for r in Ma]
            if F.p:
                img = [c % F.p for c in img]
            if dims[y] == 0:
                if any(img):
                    raise RepresentationError("subspace family is not invariant")
                cols.append([])
                continue
            sol = la.solve(F, By, img)
            if sol is None:
                raise RepresentationError("subspace family is not invariant")
            cols.append(sol)
        maps[a.name] = la.transpose(cols, rows=dims[y]) if cols else la.zeros(F, dims[y], 0)
    return Representation(Q, F, dims, maps)


def is_invariant(M: Representation, bases: Sequence[list]) -> bool:
    try:
        _restrict(M, bases)
    except RepresentationError:
        return False
    return True


def subrepresentation(M: Representation, bases: Sequence[list]) -> tuple[Representation, Morphism]:
    S = _restrict(M, bases)
    comps = [la.transpose(b, rows=M.dims[v]) if b else la.zeros(M.field, M.dims[v], 0) for v, b in enumerate(bases)]
    return S, Morphism(S, M, comps)


def kernel(f: Morphism) -> tuple[Representation, Morphism]:
    M = f.source
    bases = [la.nullspace(M.field, f.comp(v), cols=M.dims[v]) if M.dims[v] else [] for v in range(M.quiver.n)]
    return subrepresentation(M, bases)


def _projection(F: Field, m: list, rows: int) -> list:
    """Rows spanning the left kernel of ``m``: a surjection with kernel im(m)."""
    if rows == 0:
        return []
    if not m or not m[0]:
        return la.identity(F, rows)
    return la.nullspace(F, la.transpose(m), cols=rows)


def quotient_by(M: Representation, bases: Sequence[list]) -> tuple[Representation, Morphism]:
    """Quotient of M by an invariant subspace family, with the projection."""
    Q, F = M.quiver, M.field
    proj = []
    for v in range(Q.n):
        cols = la.transpose(bases[v], rows=M.dims[v]) if bases[v] else []
        proj.append(_projection(F, cols, M.dims[v]))
    return _quotient_from_projections(M, proj)


def _quotient_from_projections(M: Representation, proj: list) -> tuple[Representation, Morphism]:
    Q, F = M.quiver, M.field
    dims = tuple(len(p) for p in proj)
    sections = []
    for v in range(Q.n):
        if dims[v] == 0:
            sections.append(la.zeros(F, M.dims[v], 0))
            continue
        cols = []
        for i in range(dims[v]):
            e = [F.one if k == i else F.zero for k in range(dims[v])]
            cols.append(la.solve(F, proj[v], e))
        sections.append(la.transpose(cols))
    maps = {}
    for a in Q.arrows:
        x, y = Q.src(a.name), Q.tgt(a.name)
        if dims[x] == 0 or dims[y] == 0:
            maps[a.name] = la.zeros(F, dims[y], dims[x])
            continue
        t = la.matmul(F, M.mat(a.name), sections[x], inner=M.dims[x], cols=dims[x])
        maps[a.name] = la.matmul(F, proj[y], t, inner=M.dims[y], cols=dims[x])
    C = Representation(Q, F, dims, maps)
    pi = Morphism(M, C, [p if p else la.zeros(F, 0, M.dims[v]) for v, p in enumerate(proj)])
    return C, pi


def cokernel(f: Morphism) -> tuple[Representation, Morphism]:
    N = f.target
    proj = [_projection(N.field, f.comp(v), N.dims[v]) for v in range(N.quiver.n)]
    return _quotient_from_projections(N, proj)


def image_bases(f: Morphism) -> list[list]:
    F = f.source.field
    return [la.column_space(F, f.comp(v)) if f.target.dims[v] else [] for v in range(f.source.quiver.n)]


# ------------------------------------------------------------- extensions


def ext1_cocycles(M: Representation, N: Representation) -> list[dict]:
    """Cocycles representing a basis of Ext^1(M, N).

    Ext^1 is the cokernel of ``(f_v) -> (f_y M_a - N_a f_x)_a``, restricted
    under relations to the cocycles whose extension still satisfies them.
    Returns dicts ``arrow -> matrix (N_y x M_x)``.
    """
    _check_compatible(M, N)
    Q, F = M.quiver, M.field
    # coordinates of the arrow space
    arrow_off = {}
    total = 0
    for a in Q.arrows:
        x, y = Q.src(a.name), Q.tgt(a.name)
        arrow_off[a.name] = total
        total += N.dims[y] * M.dims[x]
    if total == 0:
        return []
    images = []
    for v in range(Q.n):
        for i in range(N.dims[v]):
            for j in range(M.dims[v]):
                vec = [F.zero] * total
                for a in Q.arrows:
                    x, y = Q.src(a.name), Q.tgt(a.name)
                    off = arrow_off[a.name]
                    Ma, Na = M.mat(a.name), N.mat(a.name)
                    if y == v:  # f_y M_a, f_y = E_ij
                        for c in range(M.dims[x]):
                            if Ma[j][c]:
                                k = off + i * M.dims[x] + c
                                vec[k] = F.add(vec[k], Ma[j][c])
                    if x == v:  # - N_a f_x
                        for r in range(N.dims[y]):
                            if Na[r][i]:
                                k = off + r * M.dims[x] + j
                                vec[k] = F.sub(vec[k], Na[r][i])
                if any(vec):
                    images.append(vec)
    span = la.row_basis(F, images) if images else []
    if not Q.hereditary:
        return _ext1_with_relations(M, N, arrow_off, total, span)
    piv = set()
    for row in span:
        piv.add(next(c for c, x in enumerate(row) if x != 0))
    out = []
    for c in range(total):
        if c in piv:
            continue
        coc = {}
        for a in Q.arrows:
            x, y = Q.src(a.name), Q.tgt(a.name)
            off = arrow_off[a.name]
            m = la.zeros(F, N.dims[y], M.dims[x])
            if off <= c < off + N.dims[y] * M.dims[x]:
                r, s = divmod(c - off, M.dims[x])
                m[r][s] = F.one
            coc[a.name] = m
        out.append(coc)
    return out


def _relation_block(M: Representation, N: Representation, path, coc: dict) -> list:
    """Upper-right block of a path matrix in the extension with cocycle ``coc``."""
    F, Q = M.field, M.quiver
    x = Q.src(path[0])
    out = None
    for t, a in enumerate(path):
        left = path[t + 1 :]
        right = path[:t]
        blk = coc[a]
        if right:
            blk = la.matmul(F, blk, M.path_matrix(right), inner=M.dims[Q.src(a)], cols=M.dims[x])
        if left:
            blk = la.matmul(F, N.path_matrix(left), blk, inner=N.dims[Q.tgt(a)], cols=M.dims[x])
        out = blk if out is None else la.matadd(F, out, blk)
    return out


def _ext1_with_relations(M, N, arrow_off, total, span) -> list[dict]:
    Q, F = M.quiver, M.field

    def as_cocycle(vec):
        coc = {}
        for a in Q.arrows:
            x, y = Q.src(a.name), Q.tgt(a.name)
            off = arrow_off[a.name]
            coc[a.name] = [[vec[off + r * M.dims[x] + c] for c in range(M.dims[x])] for r in range(N.dims[y])]
        return coc

    # each relation block is linear in the cocycle; evaluate on unit vectors
    cols = []
    for c in range(total):
        unit = [F.one if k == c else F.zero for k in range(total)]
        coc = as_cocycle(unit)
        entries = []
        for rel in Q.relations:
            x, y = Q.path_endpoints(rel.terms[0][1])
            acc = la.zeros(F, N.dims[y], M.dims[x])
            for coef, p in rel.terms:
                acc = la.matadd(F, acc, la.scale(F, F(coef), _relation_block(M, N, p, coc)))
            entries.extend(v for row in acc for v in row)
        cols.append(entries)
    rows = la.transpose(cols, len(cols[0]) if cols else 0) if cols and cols[0] else []
    Z = la.nullspace(F, rows, cols=total) if rows else [
        [F.one if k == c else F.zero for k in range(total)] for c in range(total)
    ]
    basis = [list(v) for v in span]
    r = len(basis)
    out = []
    for z in Z:
        if la.rank(F, basis + [z]) > r:
            basis.append(list(z))
            r += 1
            out.append(as_cocycle(z))
    return out


def extension(M: Representation, N: Representation, cocycles: Sequence[dict], copies: str = "M") -> Representation:
    """Universal extension built from cocycles.

    ``copies == "M"``: ``0 -> N -> E -> M^r -> 0`` (one copy of M per cocycle).
    ``copies == "N"``: ``0 -> N^r -> E -> M -> 0``.
    """
    Q, F = M.quiver, M.field
    r = len(cocycles)
    maps = {}
    if copies == "M":
        dims = tuple(N.dims[v] + r * M.dims[v] for v in range(Q.n))
    else:
        dims = tuple(r * N.dims[v] + M.dims[v] for v in range(Q.n))
    for a in Q.arrows:
        x, y = Q.src(a.name), Q.tgt(a.name)
        m = la.zeros(F, dims[y], dims[x])
        Ma, Na = M.mat(a.name), N.mat(a.name)
        if copies == "M":
            blocks = [(0, 0, Na)]
            for k, coc in enumerate(cocycles):
                blocks.append((0, N.dims[x] + k * M.dims[x], coc[a.name]))
                blocks.append((N.dims[y] + k * M.dims[y], N.dims[x] + k * M.dims[x], Ma))
        else:
            blocks = []
            for k, coc in enumerate(cocycles):
                blocks.append((k * N.dims[y], k * N.dims[x], Na))
                blocks.append((k * N.dims[y], r * N.dims[x], coc[a.name]))
            blocks.append((r * N.dims[y], r * N.dims[x], Ma))
        for r0, c0, blk in blocks:
            for i, row in enumerate(blk):
                for j, val in enumerate(row):
                    m[r0 + i][c0 + j] = val
        maps[a.name] = m
    return Representation(Q, F, dims, maps)


def is_isomorphic(M: Representation, N: Representation, attempts: int = 6, seed: int = 0) -> Morphism | None:
    """An explicit isomorphism M -> N, or None.

    Tries seeded random elements of Hom(M, N); a generic element of Hom is
    invertible exactly when M and N are isomorphic. The returned map is
    verified exactly.
    """
    _check_compatible(M, N)
    if M.dims != N.dims:
        return None
    if M.is_zero:
        return zero_morphism(M, N)
    basis = hom_basis(M, N)
    if not basis or len(basis) != len(hom_basis(M, M)):
        return None
    rng = random.Random(seed)
    F = M.field
    for _ in range(attempts):
        coeffs = [rng.randint(-50, 50) if F.is_rational else rng.randrange(F.p) for _ in basis]
        f = combine(F, coeffs, basis, M, N)
        if f.is_iso():
            return f
    return None
