"""Stability conditions built from a finite-length heart and a central charge.

The heart is the extension closure of a shifted exceptional collection that
is Ext (all Homs between distinct members live in positive degree). Two kinds
of heart are concrete enough for subobject search:

* ``module``: the shifted objects are the simple modules of the quiver, all at
  one shift, so the heart is a shift of the module category;
* ``ext-quiver``: the Hom^1 quiver between the shifted objects has no path of
  length two, so the heart is the module category of that quiver with no
  relations. Every pair is of this kind (a Kronecker quiver).

Other hearts still know their simple objects, which are always stable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import linalg as la
from .derived import (
    DerivedError,
    DerivedObject,
    ExceptionalCollection,
    GradedHom,
    hom_complex,
    is_exceptional,
    pn_object,
)
from .hn import HNFactor, Indeterminate, class_phase, hn_factors, stability_status
from .linalg import QQ
from .phase import IDENTITY, Gauss, GLElement, PhaseValue, cross, in_H, phase_of
from .quiver import Quiver, kronecker
from .representation import Representation, direct_sum, simple
from .subreps import DEFAULT_BUDGET


class StabilityError(ValueError):
    pass


class UnsupportedObject(StabilityError):
    """The object cannot be presented as a module over the heart's quiver."""


# ---------------------------------------------------------- central charge


@dataclass(frozen=True)
class CentralCharge:
    values: tuple

    def __post_init__(self):
        vals = tuple(Gauss.parse(v) for v in self.values)
        object.__setattr__(self, "values", vals)

    def check_H(self):
        for i, z in enumerate(self.values):
            if not in_H(z):
                raise StabilityError(f"z_{i} = {z!r} is not in the half plane H (need 0 < phase <= 1)")
        return self

    def __call__(self, coords) -> Gauss:
        out = Gauss(0, 0)
        for c, z in zip(coords, self.values):
            if c:
                out = out + z * c
        return out

    def __len__(self):
        return len(self.values)

    def __getitem__(self, i):
        return self.values[i]

    def to_json(self) -> list:
        return [z.to_json() for z in self.values]

    @classmethod
    def from_json(cls, data) -> "CentralCharge":
        return cls(tuple(Gauss.parse(d) for d in data))


# ------------------------------------------------------------------ heart


def _shifted_hom(h: GradedHom, p_src: int, p_tgt: int) -> GradedHom:
    """Hom•(A[p_src], B[p_tgt]) from Hom•(A, B)."""
    return GradedHom(tuple((k + p_src - p_tgt, d) for k, d in h.dims))


@dataclass(frozen=True, eq=False)
class HeartSpec:
    collection: ExceptionalCollection
    shifts: tuple

    def __post_init__(self):
        C = self.collection
        shifts = tuple(int(p) for p in self.shifts)
        object.__setattr__(self, "shifts", shifts)
        if len(shifts) != len(C):
            raise StabilityError("one shift per collection member")
        if C.hom_table is None:
            raise StabilityError("heart needs graded-Hom data for its collection")
        for (i, j), h in C.hom_table.items():
            if i != j and any(k <= 0 for k in _shifted_hom(h, shifts[i], shifts[j]).support):
                raise StabilityError(f"shifted collection is not Ext: Hom•(E_{i}[{shifts[i]}], E_{j}[{shifts[j]}]) has degree <= 0")
        if not C.is_complete():
            raise StabilityError("heart collection must be complete")
        kind, data = self._detect()
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "_data", data)

    # structure ----------------------------------------------------------

    @property
    def simples(self) -> list[DerivedObject]:
        return [E.shift(p) for E, p in zip(self.collection.objects, self.shifts)]

    def simple_hom(self, i: int, j: int) -> GradedHom:
        return _shifted_hom(self.collection.hom(i, j), self.shifts[i], self.shifts[j])

    def _detect(self):
        Q = self.collection.quiver
        objs = self.simples
        try:
            pieces = [o.single for o in objs]
        except DerivedError:
            pieces = None
        if pieces is not None and len(objs) == Q.n:
            verts = []
            for M, _ in pieces:
                if M.total_dim != 1:
                    break
                verts.append(M.dims.index(1))
            else:
                if len({s for _, s in pieces}) == 1 and sorted(verts) == list(range(Q.n)):
                    return "module", {"quiver": Q, "vertex_of": tuple(verts), "shift": pieces[0][1]}
        n = len(objs)
        arrows = {(i, j): self.simple_hom(i, j)[1] for i in range(n) for j in range(n) if i != j}
        arrows = {k: v for k, v in arrows.items() if v}
        heads = {j for _, j in arrows}
        tails = {i for i, _ in arrows}
        if heads & tails:
            return "other", {}
        if n == 2:
            m = arrows.get((0, 1), 0)
            return "ext-quiver", {"quiver": kronecker(m), "arrows": arrows}
        HQ = Quiver(
            tuple(str(i) for i in range(n)),
            tuple((f"h{i}_{j}_{c}", str(i), str(j)) for (i, j), r in sorted(arrows.items()) for c in range(r)),
            name=f"heart{n}",
        )
        return "ext-quiver", {"quiver": HQ, "arrows": arrows}

    @property
    def heart_quiver(self) -> Quiver | None:
        return self._data.get("quiver")

    def heart_vertex(self, i: int) -> int:
        """Vertex of the heart quiver whose simple is the i-th heart simple."""
        if self.kind == "module":
            return self._data["vertex_of"][i]
        return i

    def vertex_charges(self, z: Sequence[Gauss]) -> list[Gauss]:
        """Charges indexed by heart-quiver vertex."""
        out = [None] * len(z)
        for i, zi in enumerate(z):
            out[self.heart_vertex(i)] = zi
        return out

    @property
    def class_matrix(self) -> list:
        return [list(o.klass) for o in self.simples]

    def coordinates(self, klass: Sequence[int]) -> tuple:
        """Coordinates of a K-class in the basis of heart simples."""
        A = la.convert(QQ, la.transpose(self.class_matrix))
        x = la.solve(QQ, A, [QQ(v) for v in klass])
        if x is None or any(v.denominator != 1 for v in x):
            raise StabilityError("class not in the lattice spanned by heart simples")
        return tuple(int(v) for v in x)

    def to_json(self) -> dict:
        return {"kind": self.kind, "shifts": list(self.shifts), "collection": self.collection.to_json()}


# -------------------------------------------------------------- location


@dataclass(frozen=True)
class Location:
    """``X ≅ Y[shift]`` with Y in the heart, or ``in_heart_shift = False``."""

    in_heart_shift: bool
    shift: int | None = None
    coords: tuple | None = None  # class of Y in heart-simple basis
    module: Representation | None = None  # Y over the heart quiver, when known

    @property
    def is_heart_simple(self) -> bool:
        return self.coords is not None and sorted(self.coords) == [0] * (len(self.coords) - 1) + [1]


def _kronecker_exceptional(m: int, dims: tuple) -> Representation | None:
    """The exceptional m-Kronecker module with the given dimension vector, if any."""
    Q = kronecker(m)
    if dims in ((1, 0), (0, 1)):
        return simple(Q, dims.index(1))
    if m == 0:
        return None
    total = sum(dims)
    for step in (1, -1):
        i = 1 if step == 1 else 0
        while abs(i) < 64:
            M, _ = pn_object(m, i).single
            if M.dims == dims:
                return M
            if M.total_dim > total or m == 1 and abs(i) > 4:
                break
            i += step
    return None


def _ext_quiver_module(heart: "HeartSpec", y: tuple, exceptional: bool) -> Representation | None:
    """Module over the heart's Ext quiver for an object with heart class y.

    Only classes that pin the module down are handled: a simple, or an
    exceptional object supported on the two ends of one bundle of arrows
    (exceptional Kronecker modules are determined by their dimension vector,
    whatever basis the arrows are given in).
    """
    HQ = heart.heart_quiver
    supp = [v for v, d in enumerate(y) if d]
    if len(supp) == 1 and y[supp[0]] == 1:
        return simple(HQ, supp[0])
    if len(supp) != 2 or not exceptional:
        return None
    a, b = supp
    r = heart._data["arrows"].get((a, b), 0)
    if not r:
        return None
    K = _kronecker_exceptional(r, (y[a], y[b]))
    if K is None:
        return None
    names = [ar.name for ar in HQ.arrows if HQ.src(ar.name) == a and HQ.tgt(ar.name) == b]
    maps = {nm: K.mat(f"a{c}") for c, nm in enumerate(names)}
    return Representation(HQ, K.field, y, maps)


def locate(X: DerivedObject, heart: HeartSpec) -> Location:
    for i, E in enumerate(heart.collection.objects):
        if X is E:
            p = heart.shifts[i]
            coords = tuple(int(k == i) for k in range(len(heart.shifts)))
            module = simple(heart.heart_quiver, heart.heart_vertex(i)) if heart.heart_quiver else None
            return Location(True, -p, coords, module)
    if not X.has_homs:
        raise UnsupportedObject("object carries no graded-Hom data")
    sims = heart.simples
    to_x = [hom_complex(H, X) for H in sims]
    from_x = [hom_complex(X, H) for H in sims]
    lows = [min(h.support) for h in to_x if not h.is_zero]
    if not lows:
        raise StabilityError("object has no Hom from any heart simple")
    m = -min(lows)
    if any(not h.is_zero and min(h.support) < m for h in from_x):
        return Location(False)
    coords = heart.coordinates(X.klass)
    sign = -1 if m % 2 else 1
    y = tuple(sign * c for c in coords)
    if any(c < 0 for c in y):
        raise AssertionError("object in a heart shift with a non-effective class")
    module = None
    if heart.kind == "module":
        ps = X.pieces()
        shift = heart._data["shift"]
        if all(s - shift == m for _, s in ps):
            module = ps[0][0] if len(ps) == 1 else direct_sum([M for M, _ in ps])
    elif heart.kind == "ext-quiver":
        module = _ext_quiver_module(heart, y, sum(y) > 1 and is_exceptional(X))
    return Location(True, m, y, module)


# --------------------------------------------------------- stability point


@dataclass(frozen=True, eq=False)
class StabilityPoint:
    heart: HeartSpec
    charge: CentralCharge  # base charges in H, one per heart simple
    gl: GLElement = IDENTITY
    meta: dict = field(default_factory=dict, compare=False)

    @property
    def collection(self) -> ExceptionalCollection:
        return self.heart.collection

    @property
    def quiver(self) -> Quiver:
        return self.collection.quiver

    @property
    def degenerate(self) -> bool:
        zs = self.charge.values
        return all(cross(zs[0], w) == 0 for w in zs[1:])

    def simple_charge(self, i: int) -> Gauss:
        return self.gl.charge(self.charge[i])

    def simple_phase(self, i: int) -> PhaseValue:
        return self.gl.transport(phase_of(self.charge[i]))

    def Z(self, klass: Sequence[int]) -> Gauss:
        """Actual central charge of a K-class."""
        return self.gl.charge(self.charge(self.heart.coordinates(klass)))

    def heart_phase(self, coords: Sequence[int]) -> PhaseValue:
        """Phase of a semistable heart object with the given heart class."""
        return self.gl.transport(phase_of(self.charge(coords)))

    def vertex_charges(self) -> list[Gauss]:
        return self.heart.vertex_charges(self.charge.values)

    def to_json(self) -> dict:
        return {
            "representation": "heart-and-charge",
            "heart": self.heart.to_json(),
            "charge": self.charge.to_json(),
            "gl": self.gl.to_json(),
            "degenerate": self.degenerate,
            "simple_phases": [self.simple_phase(i).to_json() for i in range(len(self.charge))],
        }


def build_stability(heart: HeartSpec, z) -> StabilityPoint:
    if not isinstance(z, CentralCharge):
        z = CentralCharge(tuple(z))
    if len(z) != len(heart.simples):
        raise StabilityError("one charge per heart simple")
    z.check_H()
    return StabilityPoint(heart, z)


def gl_action(sigma: StabilityPoint, T, lift: int = 0) -> StabilityPoint:
    g = T if isinstance(T, GLElement) else GLElement(T, lift)
    return StabilityPoint(sigma.heart, sigma.charge, sigma.gl.then(g), dict(sigma.meta))


# --------------------------------------------------------- HN of objects


@dataclass(frozen=True)
class HNFiltration:
    factors: tuple  # HNFactor with actual phases; module is None for heart simples found by class
    shift: int = 0

    @property
    def phases(self) -> list[PhaseValue]:
        return [f.phase for f in self.factors]

    def to_json(self) -> dict:
        return {"shift": self.shift, "factors": [f.to_json() for f in self.factors]}


def _heart_module_hn(Y: Representation, sigma: StabilityPoint, prime, budget) -> list[HNFactor]:
    zs = sigma.vertex_charges()
    facs = hn_factors(Y, zs, prime, budget)
    out = []
    for f in facs:
        coords = [0] * len(zs)
        for i in range(len(zs)):
            coords[i] = f.dims[sigma.heart.heart_vertex(i)]
        out.append(HNFactor(f.module, tuple(coords), sigma.heart_phase(coords)))
    return out


def hn_filtration(M, sigma: StabilityPoint, prime: int | None = None, budget: int = DEFAULT_BUDGET) -> HNFiltration:
    """HN filtration of a heart module (over the heart quiver) or of a derived object."""
    if isinstance(M, Representation):
        if M.quiver != sigma.heart.heart_quiver:
            raise StabilityError("module is not over the heart quiver")
        return HNFiltration(tuple(_heart_module_hn(M, sigma, prime, budget)))
    loc = locate(M, sigma.heart)
    if not loc.in_heart_shift:
        raise UnsupportedObject("object is not in a shift of the heart; its HN factors lie in several shifts")
    if loc.module is None:
        if loc.is_heart_simple:
            ph = sigma.heart_phase(loc.coords) + loc.shift
            return HNFiltration((HNFactor(None, loc.coords, ph),), loc.shift)
        raise UnsupportedObject("no module presentation for this object in the heart")
    facs = _heart_module_hn(loc.module, sigma, prime, budget)
    return HNFiltration(tuple(HNFactor(f.module, f.dims, f.phase + loc.shift) for f in facs), loc.shift)


def module_status(M: Representation, sigma: StabilityPoint, prime=None, budget=DEFAULT_BUDGET) -> str:
    return stability_status(M, sigma.vertex_charges(), prime, budget)


def object_status(X: DerivedObject, sigma: StabilityPoint, prime=None, budget=DEFAULT_BUDGET) -> str:
    """'stable', 'semistable' or 'unstable' for a derived object."""
    loc = locate(X, sigma.heart)
    if not loc.in_heart_shift:
        return "unstable"
    if loc.is_heart_simple:
        return "stable"
    if loc.module is None:
        raise UnsupportedObject("no module presentation for this object in the heart")
    return module_status(loc.module, sigma, prime, budget)


def is_semistable(X, sigma: StabilityPoint, prime=None, budget=DEFAULT_BUDGET) -> bool:
    st = module_status(X, sigma, prime, budget) if isinstance(X, Representation) else object_status(X, sigma, prime, budget)
    return st in ("stable", "semistable")


def is_stable(X, sigma: StabilityPoint, prime=None, budget=DEFAULT_BUDGET) -> bool:
    if isinstance(X, Representation):
        return module_status(X, sigma, prime, budget) == "stable"
    if not X.has_homs and sigma.degenerate:
        # every heart simple has the same phase, so a stable object is a
        # shifted heart simple; other classes are decided without Homs
        coords = sigma.heart.coordinates(X.klass)
        if sorted(abs(c) for c in coords) != [0] * (len(coords) - 1) + [1]:
            return False
    return object_status(X, sigma, prime, budget) == "stable"


def object_phase(X: DerivedObject, sigma: StabilityPoint) -> PhaseValue:
    """Phase of an object lying in a shift of the heart (meaningful when semistable)."""
    loc = locate(X, sigma.heart)
    if not loc.in_heart_shift:
        raise StabilityError("object not in a shift of the heart")
    return sigma.heart_phase(loc.coords) + loc.shift


# ------------------------------------------------------------- distance


@dataclass(frozen=True)
class DistanceBound:
    value: float
    exact: Fraction | None
    terms: tuple

    def to_json(self) -> dict:
        return {
            "lower_bound": self.value,
            "exact": None if self.exact is None else str(self.exact),
            "terms": [list(t) for t in self.terms],
        }


def _phase_gap(a: PhaseValue, b: PhaseValue) -> tuple[float, Fraction | None]:
    if cross(a.ray, b.ray) == 0:
        d = Fraction(abs(a.winding - b.winding))
        return float(d), d
    ea, eb = a.exact(), b.exact()
    if ea is not None and eb is not None:
        return float(abs(ea - eb)), abs(ea - eb)
    return abs(float(a) - float(b)), None


def _mass(sigma: StabilityPoint, hn: HNFiltration) -> tuple[float, tuple]:
    norms = []
    for f in hn.factors:
        z = sigma.gl.charge(sigma.charge(f.dims))
        norms.append(z.norm2)
    return sum(math.sqrt(float(n)) for n in norms), tuple(sorted(norms))


def distance_lower_bound(s1: StabilityPoint, s2: StabilityPoint, objects: Sequence[DerivedObject]) -> DistanceBound:
    """Max over test objects of the phase-top, phase-bottom and log-mass gaps.

    A lower bound for the generalized metric: the true supremum runs over all
    nonzero objects.
    """
    if not objects:
        raise StabilityError("empty test set")
    best, best_exact, terms = 0.0, Fraction(0), []
    for X in objects:
        h1, h2 = hn_filtration(X, s1), hn_filtration(X, s2)
        top = _phase_gap(h1.factors[0].phase, h2.factors[0].phase)
        bot = _phase_gap(h1.factors[-1].phase, h2.factors[-1].phase)
        m1, n1 = _mass(s1, h1)
        m2, n2 = _mass(s2, h2)
        logm = (0.0, Fraction(0)) if n1 == n2 else (abs(math.log(m2 / m1)), None)
        for val, ex in (top, bot, logm):
            terms.append((X.label or repr(X), val, None if ex is None else str(ex)))
            if val > best or (val == best and ex is None):
                best, best_exact = val, ex
    if best_exact is not None and float(best_exact) != best:
        best_exact = None
    return DistanceBound(best, best_exact, tuple(terms))
