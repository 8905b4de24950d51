"""Quivers with relations and their path algebras.

Paths are tuples of arrow names in traversal order: ``("a", "b")`` means
first ``a``, then ``b``. A representation evaluates such a path as the
matrix product ``M_b @ M_a`` (maps act on column vectors).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations

from .linalg import QQ, rref


class QuiverError(ValueError):
    """Malformed quiver data or an unsupported path algebra."""


class InfiniteDimensionalError(QuiverError):
    pass


Path = tuple  # tuple[str, ...]


@dataclass(frozen=True)
class PathRelation:
    terms: tuple  # tuple[tuple[Fraction, Path], ...]

    def __post_init__(self):
        object.__setattr__(
            self, "terms", tuple((Fraction(c), tuple(p)) for c, p in self.terms if Fraction(c) != 0)
        )
        if not self.terms:
            raise QuiverError("empty relation")


@dataclass(frozen=True)
class Arrow:
    name: str
    source: str
    target: str


@dataclass(frozen=True, eq=False)
class Quiver:
    """A finite quiver with an (admissible) ideal of relations."""

    vertices: tuple
    arrows: tuple  # tuple[Arrow, ...]
    relations: tuple = ()
    name: str = ""
    path_bound: int = 16

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(str(v) for v in self.vertices))
        object.__setattr__(
            self, "arrows", tuple(a if isinstance(a, Arrow) else Arrow(*map(str, a)) for a in self.arrows)
        )
        object.__setattr__(
            self,
            "relations",
            tuple(r if isinstance(r, PathRelation) else PathRelation(r) for r in self.relations),
        )
        if len(set(self.vertices)) != len(self.vertices):
            raise QuiverError("duplicate vertex")
        names = [a.name for a in self.arrows]
        if len(set(names)) != len(names):
            raise QuiverError("duplicate arrow name")
        for a in self.arrows:
            if a.source not in self.vertices or a.target not in self.vertices:
                raise QuiverError(f"arrow {a.name} has a dangling endpoint")
        for rel in self.relations:
            ends = set()
            for _, p in rel.terms:
                if len(p) < 2:
                    raise QuiverError(f"relation path {p} has length < 2")
                ends.add(self.path_endpoints(p))
            if len(ends) != 1:
                raise QuiverError("relation paths do not share source and target")

    # equality by presentation, so representations can be compared cheaply
    def _key(self):
        return (self.vertices, self.arrows, self.relations)

    def __eq__(self, other):
        return isinstance(other, Quiver) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f"Quiver({self.name or '?'}: {len(self.vertices)} vertices, {len(self.arrows)} arrows, {len(self.relations)} relations)"

    @property
    def hereditary(self) -> bool:
        return not self.relations

    @property
    def n(self) -> int:
        return len(self.vertices)

    @cached_property
    def index(self) -> dict:
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def arrow(self) -> dict:
        return {a.name: a for a in self.arrows}

    def src(self, a: str) -> int:
        return self.index[self.arrow[a].source]

    def tgt(self, a: str) -> int:
        return self.index[self.arrow[a].target]

    def path_endpoints(self, p: Path) -> tuple[int, int]:
        for a in p:
            if a not in self.arrow:
                raise QuiverError(f"unknown arrow {a!r}")
        for a, b in zip(p, p[1:]):
            if self.arrow[a].target != self.arrow[b].source:
                raise QuiverError(f"path {p} is not composable")
        return self.src(p[0]), self.tgt(p[-1])

    def out_arrows(self, v: int) -> list[str]:
        return [a.name for a in self.arrows if self.index[a.source] == v]

    def in_arrows(self, v: int) -> list[str]:
        return [a.name for a in self.arrows if self.index[a.target] == v]

    @cached_property
    def has_oriented_cycle(self) -> bool:
        indeg = [0] * self.n
        for a in self.arrows:
            indeg[self.tgt(a.name)] += 1
        stack = [v for v in range(self.n) if indeg[v] == 0]
        seen = 0
        while stack:
            v = stack.pop()
            seen += 1
            for a in self.out_arrows(v):
                t = self.tgt(a)
                indeg[t] -= 1
                if indeg[t] == 0:
                    stack.append(t)
        return seen < self.n

    # ------------------------------------------------------- path algebra

    def paths_from(self, x: int, max_len: int) -> list[Path]:
        out = [()]
        frontier = [((), x)]
        for _ in range(max_len):
            nxt = []
            for p, v in frontier:
                for a in self.out_arrows(v):
                    q = p + (a,)
                    out.append(q)
                    nxt.append((q, self.tgt(a)))
            frontier = nxt
            if not frontier:
                break
        return out

    def _end(self, x: int, p: Path) -> int:
        return x if not p else self.tgt(p[-1])

    @cached_property
    def path_algebra(self) -> "PathAlgebra":
        return PathAlgebra(self)

    def simple_index(self, v) -> int:
        return self.index[str(v)] if not isinstance(v, int) else v


class PathAlgebra:
    """Normal forms for paths modulo the relation ideal.

    For every ordered pair of vertices ``(x, y)`` we keep a basis of
    ``e_x A e_y`` (paths from x to y modulo relations). The basis consists of
    the paths that are not leading terms of the ideal, where longer paths
    lead; this is a fixed confluent rewriting of every path to a
    combination of basis paths.
    """

    def __init__(self, Q: Quiver):
        self.Q = Q
        if Q.has_oriented_cycle and Q.hereditary:
            raise InfiniteDimensionalError("quiver has an oriented cycle and no relations")
        bound = Q.n if not Q.has_oriented_cycle else Q.path_bound
        max_rel = max((len(p) for r in Q.relations for _, p in r.terms), default=0)
        self.basis: dict[tuple[int, int], list[Path]] = {}
        self._normal: dict[tuple[int, int], dict[Path, dict[Path, Fraction]]] = {}
        for x in range(Q.n):
            paths = Q.paths_from(x, bound + max_rel)
            by_end: dict[int, list[Path]] = {}
            for p in paths:
                by_end.setdefault(Q._end(x, p), []).append(p)
            gens = self._ideal_generators(x, bound + max_rel)
            for y in range(Q.n):
                ps = by_end.get(y, [])
                self._reduce_pair(x, y, ps, gens.get(y, []), bound)

    def _ideal_generators(self, x: int, max_len: int) -> dict[int, list[dict]]:
        """Elements ``p1 . r . p2`` of the ideal starting at x, as dicts path->coef."""
        Q = self.Q
        gens: dict[int, list[dict]] = {}
        if not Q.relations:
            return gens
        prefixes = Q.paths_from(x, max_len)
        for r in Q.relations:
            rs, rt = Q.path_endpoints(r.terms[0][1])
            rlen = max(len(p) for _, p in r.terms)
            for p1 in prefixes:
                if Q._end(x, p1) != rs or len(p1) + rlen > max_len:
                    continue
                for p2 in Q.paths_from(rt, max_len - len(p1) - rlen):
                    elt = {}
                    for c, p in r.terms:
                        q = p1 + p + p2
                        elt[q] = elt.get(q, 0) + c
                    gens.setdefault(Q._end(rt, p2), []).append(elt)
        return gens

    def _reduce_pair(self, x, y, paths, gens, bound):
        # longest paths first so they become pivots (leading terms)
        order = sorted(paths, key=lambda p: (-len(p), p))
        col = {p: i for i, p in enumerate(order)}
        seen = set()
        rows = []
        for g in gens:
            row = [QQ.zero] * len(order)
            for p, c in g.items():
                row[col[p]] += QQ(c)
            key = tuple(row)
            if any(row) and key not in seen:
                seen.add(key)
                rows.append(row)
        pivots: list[int] = []
        red = []
        if rows:
            red, pivots = rref(QQ, rows)
        pivset = set(pivots)
        basis = [p for p in order if col[p] not in pivset]
        for p in basis:
            if len(p) >= bound and self.Q.has_oriented_cycle:
                raise InfiniteDimensionalError(
                    f"path {p} of length {len(p)} survives the relations; path algebra looks infinite-dimensional"
                )
        basis.sort(key=lambda p: (len(p), p))
        normal = {}
        for p in basis:
            normal[p] = {p: Fraction(1)}
        for row, pc in zip(red, pivots):
            p = order[pc]
            normal[p] = {order[c]: -v for c, v in enumerate(row) if c != pc and v != 0}
        self.basis[(x, y)] = basis
        self._normal[(x, y)] = normal

    def normal_form(self, x: int, p: Path) -> dict:
        """Coordinates of the path ``p`` (starting at x) in the basis."""
        y = self.Q._end(x, p)
        nf = self._normal[(x, y)]
        if p not in nf:
            return {}
        return nf[p]

    def dim(self, x: int, y: int) -> int:
        return len(self.basis[(x, y)])

    @property
    def total_dim(self) -> int:
        return sum(len(b) for b in self.basis.values())


# ------------------------------------------------------------ constructors


def kronecker(n: int = 2) -> Quiver:
    """The quiver P_n: two vertices, n parallel arrows from 0 to 1."""
    if n < 0:
        raise QuiverError("n must be non-negative")
    return Quiver(("0", "1"), tuple((f"a{j}", "0", "1") for j in range(n)), name=f"P_{n}")


def beilinson(N: int) -> Quiver:
    """T_N: vertices 0..N, arrows f{i}_{j}: i -> i+1 (j = 0..N), commutativity relations."""
    verts = tuple(str(i) for i in range(N + 1))
    arrows = tuple((f"f{i}_{j}", str(i), str(i + 1)) for i in range(N) for j in range(N + 1))
    rels = []
    for i in range(N - 1):
        for j, k in combinations(range(N + 1), 2):
            rels.append(
                [(1, (f"f{i}_{k}", f"f{i + 1}_{j}")), (-1, (f"f{i}_{j}", f"f{i + 1}_{k}"))]
            )
    return Quiver(verts, arrows, tuple(rels), name=f"T_{N}")


def linear_quiver(n: int, multiplicities=None) -> Quiver:
    """0 -> 1 -> ... -> n-1 with the given number of parallel arrows per step."""
    mult = multiplicities or [1] * (n - 1)
    arrows = tuple((f"b{i}_{j}", str(i), str(i + 1)) for i in range(n - 1) for j in range(mult[i]))
    return Quiver(tuple(str(i) for i in range(n)), arrows, name=f"A_{n}{tuple(mult)}")


# ----------------------------------------------------------------- parsing

_TERM = re.compile(r"\(\s*([^,()\[\]]+?)\s*,\s*\[([^\]]*)\]\s*\)")
_ARROW = re.compile(r"^\s*([A-Za-z_][\w^']*)\s*:\s*(\S+)\s*->\s*(\S+)\s*$")


def parse_quiver(text: str, name: str = "") -> Quiver:
    """Parse the sectioned quiver format.

    ::

        [vertices]
        0 1
        [arrows]
        a: 0 -> 1
        b: 0 -> 1
        [relations]
        (1, [a, c]), (-1, [b, d])

    Each line of ``[relations]`` is one relation: a comma separated list of
    ``(coefficient, [arrows in traversal order])`` terms.
    """
    section = None
    vertices: list[str] = []
    arrows: list[tuple] = []
    relations: list[list] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]") and line[1:-1].strip().isalpha():
            section = line[1:-1].strip().lower()
            if section not in ("vertices", "arrows", "relations", "quiver"):
                raise QuiverError(f"line {lineno}: unknown section [{section}]")
            continue
        if section == "quiver":
            key, _, val = line.partition("=")
            if key.strip() == "name":
                name = name or val.strip().strip('"')
            continue
        if section == "vertices":
            vertices.extend(v for v in re.split(r"[,\s]+", line) if v)
        elif section == "arrows":
            m = _ARROW.match(line)
            if not m:
                raise QuiverError(f"line {lineno}: malformed arrow {line!r}")
            arrows.append(m.groups())
        elif section == "relations":
            terms = []
            consumed = 0
            for m in _TERM.finditer(line):
                coef = Fraction(m.group(1).strip())
                path = tuple(s.strip() for s in m.group(2).split(",") if s.strip())
                terms.append((coef, path))
                consumed += len(m.group(0))
            leftover = _TERM.sub("", line).replace(",", "").strip()
            if not terms or leftover:
                raise QuiverError(f"line {lineno}: malformed relation {line!r}")
            relations.append(terms)
        else:
            raise QuiverError(f"line {lineno}: content outside a section")
    if not vertices:
        raise QuiverError("no vertices")
    return Quiver(tuple(vertices), tuple(arrows), tuple(relations), name=name)


def format_quiver(Q: Quiver) -> str:
    lines = ["[vertices]", " ".join(Q.vertices), "[arrows]"]
    lines += [f"{a.name}: {a.source} -> {a.target}" for a in Q.arrows]
    lines.append("[relations]")
    for r in Q.relations:
        lines.append(", ".join(f"({c}, [{', '.join(p)}])" for c, p in r.terms))
    return "\n".join(lines) + "\n"
