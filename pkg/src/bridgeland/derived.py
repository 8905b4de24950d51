"""Objects of the bounded derived category, exceptional collections, mutations.

Two tiers:

* ``concrete``: a finite direct sum of shifted modules. Only for quivers
  without relations, where every complex splits into its shifted cohomology.
* ``K``: a class in the Grothendieck group, in the basis of simples. A K-tier
  object may carry a *witness* (a single shifted module) so that graded Homs
  can still be computed from projective resolutions, e.g. for the simples of
  a Beilinson quiver. Mutations of K-tier objects drop the witness.

Shifts follow ``Hom^k(M[s], N[t]) = Ext^{k+t-s}(M, N)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

from . import linalg as la
from .homological import EulerMatrix, euler_matrix, ext_profile, hereditary_euler
from .quiver import Quiver, kronecker
from .representation import (
    Morphism,
    Representation,
    cokernel,
    direct_sum,
    ext1_cocycles,
    extension,
    hom_basis,
    is_isomorphic,
    kernel,
    simple,
)


class DerivedError(ValueError):
    pass


class ConcentrationError(DerivedError):
    """A mutation cone had more than one nonzero cohomology module."""


class NotExceptionalError(DerivedError):
    pass


# ------------------------------------------------------------- graded hom


@dataclass(frozen=True)
class GradedHom:
    """Finitely supported ``k -> dim Hom^k``. Zero entries are dropped."""

    dims: tuple = ()  # sorted ((k, d), ...)

    def __post_init__(self):
        items = dict(self.dims) if not isinstance(self.dims, dict) else self.dims
        if any(d < 0 for d in items.values()):
            raise DerivedError("negative dimension in graded Hom")
        object.__setattr__(self, "dims", tuple(sorted((int(k), int(d)) for k, d in items.items() if d)))

    @classmethod
    def of(cls, mapping: dict) -> "GradedHom":
        return cls(tuple(mapping.items()))

    def __getitem__(self, k: int) -> int:
        return dict(self.dims).get(k, 0)

    @property
    def support(self) -> tuple:
        return tuple(k for k, _ in self.dims)

    @property
    def is_zero(self) -> bool:
        return not self.dims

    @property
    def euler(self) -> int:
        return sum((-1) ** k * d for k, d in self.dims)

    def concentrated_in(self) -> int | None:
        """The single degree carrying everything, if there is one."""
        return self.dims[0][0] if len(self.dims) == 1 else None

    def shifted(self, m: int) -> "GradedHom":
        """Graded Hom after replacing the target B by B[m]: degree k moves to k - m."""
        return GradedHom(tuple((k - m, d) for k, d in self.dims))

    def to_json(self) -> dict:
        return {str(k): d for k, d in self.dims}

    def __repr__(self):
        return "Hom•{" + ", ".join(f"{k}:{d}" for k, d in self.dims) + "}"


# ---------------------------------------------------------- derived object


def _class_of(summands) -> tuple:
    n = len(summands[0][0].dims)
    out = [0] * n
    for M, s in summands:
        sign = -1 if s % 2 else 1
        for v, d in enumerate(M.dims):
            out[v] += sign * d
    return tuple(out)


@dataclass(frozen=True, eq=False)
class DerivedObject:
    quiver: Quiver
    tier: str
    klass: tuple
    summands: tuple = ()  # ((Representation, shift), ...) sorted by shift
    witness: tuple | None = None  # K tier only: (Representation, shift)
    label: str = field(default="", compare=False)

    # construction -----------------------------------------------------

    @classmethod
    def concrete(cls, pairs: Sequence[tuple], label: str = "") -> "DerivedObject":
        pairs = [(M, int(s)) for M, s in pairs if not M.is_zero]
        if not pairs:
            raise DerivedError("zero object")
        Q = pairs[0][0].quiver
        if not Q.hereditary:
            raise DerivedError("concrete tier needs a quiver without relations; use the K tier")
        by_shift: dict[int, list] = {}
        for M, s in pairs:
            if M.quiver != Q:
                raise DerivedError("summands over different quivers")
            by_shift.setdefault(s, []).append(M)
        merged = tuple(
            (ms[0] if len(ms) == 1 else direct_sum(ms), s) for s, ms in sorted(by_shift.items())
        )
        return cls(Q, "concrete", _class_of(merged), merged, None, label)

    @classmethod
    def module(cls, M: Representation, shift: int = 0, label: str = "") -> "DerivedObject":
        return cls.concrete([(M, shift)], label)

    @classmethod
    def k_class(cls, Q: Quiver, klass: Sequence[int], label: str = "", witness: tuple | None = None) -> "DerivedObject":
        klass = tuple(int(x) for x in klass)
        if len(klass) != Q.n:
            raise DerivedError(f"class of length {len(klass)} on a quiver with {Q.n} vertices")
        if not any(klass):
            raise DerivedError("zero class")
        if witness is not None:
            M, s = witness
            if _class_of(((M, s),)) != klass:
                raise DerivedError("witness does not match the class")
            witness = (M, int(s))
        return cls(Q, "K", klass, (), witness, label)

    @classmethod
    def k_module(cls, M: Representation, shift: int = 0, label: str = "") -> "DerivedObject":
        return cls.k_class(M.quiver, _class_of(((M, shift),)), label, (M, shift))

    # views --------------------------------------------------------------

    @property
    def is_concrete(self) -> bool:
        return self.tier == "concrete"

    @property
    def has_homs(self) -> bool:
        return self.is_concrete or self.witness is not None

    def pieces(self) -> tuple:
        """(module, shift) pairs usable for Hom computations."""
        if self.is_concrete:
            return self.summands
        if self.witness is None:
            raise DerivedError("K-tier object without a module witness has no graded Hom")
        return (self.witness,)

    @property
    def single(self) -> tuple:
        """The unique (module, shift) of an indecomposable-looking object."""
        ps = self.pieces()
        if len(ps) != 1:
            raise DerivedError(f"object has {len(ps)} shifted summands")
        return ps[0]

    def shift(self, m: int) -> "DerivedObject":
        if m == 0:
            return self
        sign = -1 if m % 2 else 1
        klass = tuple(sign * x for x in self.klass)
        lab = f"{self.label}[{m}]" if self.label else ""
        if self.is_concrete:
            return DerivedObject(self.quiver, "concrete", klass, tuple((M, s + m) for M, s in self.summands), None, lab)
        w = None if self.witness is None else (self.witness[0], self.witness[1] + m)
        return DerivedObject(self.quiver, "K", klass, (), w, lab)

    def relabel(self, label: str) -> "DerivedObject":
        return DerivedObject(self.quiver, self.tier, self.klass, self.summands, self.witness, label)

    def to_json(self) -> dict:
        out = {"tier": self.tier, "class": list(self.klass)}
        if self.label:
            out["label"] = self.label
        if self.is_concrete:
            out["summands"] = [{"shift": s, "module": M.to_json()} for M, s in self.summands]
        elif self.witness is not None:
            out["witness"] = {"shift": self.witness[1], "module": self.witness[0].to_json()}
        return out

    @classmethod
    def from_json(cls, Q: Quiver, data: dict) -> "DerivedObject":
        lab = data.get("label", "")
        if data["tier"] == "concrete":
            return cls.concrete(
                [(Representation.from_json(Q, s["module"]), s["shift"]) for s in data["summands"]], lab
            )
        w = data.get("witness")
        witness = None if w is None else (Representation.from_json(Q, w["module"]), w["shift"])
        return cls.k_class(Q, data["class"], lab, witness)

    def __repr__(self):
        name = self.label or "Obj"
        if self.is_concrete:
            body = " ⊕ ".join(f"{M.dims}[{s}]" for M, s in self.summands)
        else:
            body = f"class {self.klass}"
        return f"{name}<{body}>"


# ------------------------------------------------------------- hom complex


def hom_complex(A: DerivedObject, B: DerivedObject) -> GradedHom:
    """Graded Hom from Ext groups of the shifted pieces."""
    if A.quiver != B.quiver:
        raise DerivedError("objects over different quivers")
    out: dict[int, int] = {}
    for M, s in A.pieces():
        for N, t in B.pieces():
            for j, d in enumerate(ext_profile(M, N)):
                if d:
                    k = j + s - t
                    out[k] = out.get(k, 0) + d
    return GradedHom.of(out)


def is_exceptional(E: DerivedObject) -> bool:
    h = hom_complex(E, E)
    return h.dims == ((0, 1),)


def euler_form(Q: Quiver) -> EulerMatrix:
    return hereditary_euler(Q) if Q.hereditary else euler_matrix(Q)


def chi(E: DerivedObject, F: DerivedObject) -> int:
    return euler_form(E.quiver)(E.klass, F.klass)


# --------------------------------------------------------------- mutations


def _pair_data(E: DerivedObject, F: DerivedObject):
    if not (E.is_concrete and F.is_concrete):
        raise DerivedError("concrete mutation needs concrete-tier objects")
    return _module_pair_data(E, F)


def _module_pair_data(E: DerivedObject, F: DerivedObject):
    (M, a), (N, b) = E.single, F.single
    prof = ext_profile(M, N)
    nz = [j for j, d in enumerate(prof) if d]
    if len(nz) > 1:
        raise ConcentrationError(f"Hom•(E, F) has Ext in degrees {nz}; not an exceptional pair")
    return M, a, N, b, (nz[0] if nz else None)


def _check_pair(E: DerivedObject, F: DerivedObject):
    for X in (E, F):
        if not is_exceptional(X):
            raise NotExceptionalError(f"{X!r} is not exceptional")
    if not hom_complex(F, E).is_zero:
        raise NotExceptionalError("Hom•(F, E) is nonzero")


def _single_cohomology(K: Representation, C: Representation, shift_k: int, shift_c: int, what: str):
    if not K.is_zero and not C.is_zero:
        raise ConcentrationError(f"{what}: kernel {K.dims} and cokernel {C.dims} both nonzero")
    if K.is_zero and C.is_zero:
        raise ConcentrationError(f"{what}: evaluation map is an isomorphism")
    return (K, shift_k) if not K.is_zero else (C, shift_c)


def _stack(maps: Sequence[Morphism], M: Representation, N: Representation, horizontal: bool):
    """[f_1 ... f_r]: M^r -> N, or the column (f_1; ...; f_r): M -> N^r."""
    F, Q = M.field, M.quiver
    r = len(maps)
    comps = []
    for v in range(Q.n):
        if horizontal:
            rows = [[] for _ in range(N.dims[v])]
            for f in maps:
                c = f.comp(v)
                for i in range(N.dims[v]):
                    rows[i].extend(c[i] if c else [])
        else:
            rows = []
            for f in maps:
                rows.extend(f.comp(v))
            rows = rows if rows else la.zeros(F, r * N.dims[v], M.dims[v])
        comps.append(rows)
    src = direct_sum([M] * r) if horizontal else M
    tgt = N if horizontal else direct_sum([N] * r)
    return Morphism(src, tgt, comps)


def mutate_left(E: DerivedObject, F: DerivedObject, check: bool = True) -> DerivedObject:
    """``L_E F``: the cone of ``Hom•(E,F) ⊗ E -> F``, shifted by -1."""
    if check:
        _check_pair(E, F)
    M, a, N, b, j = _pair_data(E, F)
    lab = f"L({E.label},{F.label})" if E.label and F.label else ""
    if j is None:
        return F.shift(-1).relabel(lab)
    if j == 0:
        basis = hom_basis(M, N)
        ev = _stack(basis, M, N, horizontal=True)
        K, _ = kernel(ev)
        C, _ = cokernel(ev)
        X, s = _single_cohomology(K, C, b, b - 1, "left mutation")
        return DerivedObject.module(X, s, lab)
    cocs = ext1_cocycles(M, N)
    return DerivedObject.module(extension(M, N, cocs, copies="M"), b - 1, lab)


def mutate_right(F: DerivedObject, E: DerivedObject, check: bool = True) -> DerivedObject:
    """``R_F E``: the cone of ``E -> Hom•(E,F)* ⊗ F``."""
    if check:
        _check_pair(E, F)
    M, a, N, b, j = _pair_data(E, F)
    lab = f"R({F.label},{E.label})" if E.label and F.label else ""
    if j is None:
        return E.shift(1).relabel(lab)
    if j == 0:
        basis = hom_basis(M, N)
        coev = _stack(basis, M, N, horizontal=False)
        K, _ = kernel(coev)
        C, _ = cokernel(coev)
        X, s = _single_cohomology(K, C, a + 1, a, "right mutation")
        return DerivedObject.module(X, s, lab)
    cocs = ext1_cocycles(M, N)
    return DerivedObject.module(extension(M, N, cocs, copies="N"), a + 1, lab)


def _single_or_none(K: Representation, C: Representation, shift_k: int, shift_c: int) -> tuple | None:
    if not K.is_zero and not C.is_zero:
        return None
    return (C, shift_c) if K.is_zero else (K, shift_k)


def _k_witness(E: DerivedObject, F: DerivedObject, direction: str) -> tuple | None:
    """Module witness of a K-tier mutation, when both inputs have one.

    The cone of a map of modules has the kernel and cokernel as cohomology,
    and Ext^1 is realized by a universal extension, so the module formulas
    hold over any quiver with relations. A cone with both kernel and
    cokernel, or Hom concentrated in degree 2 or higher, is a genuine
    complex: no witness.
    """
    if E.witness is None or F.witness is None:
        return None
    try:
        M, a, N, b, j = _module_pair_data(E, F)
    except ConcentrationError:
        return None
    if j is None:
        return (N, b - 1) if direction == "left" else (M, a + 1)
    if j == 0:
        basis = hom_basis(M, N)
        if direction == "left":
            ev = _stack(basis, M, N, horizontal=True)
            K, C = kernel(ev)[0], cokernel(ev)[0]
            return _single_or_none(K, C, b, b - 1)
        coev = _stack(basis, M, N, horizontal=False)
        K, C = kernel(coev)[0], cokernel(coev)[0]
        return _single_or_none(K, C, a + 1, a)
    if j == 1:
        cocs = ext1_cocycles(M, N)
        if direction == "left":
            return extension(M, N, cocs, copies="M"), b - 1
        return extension(M, N, cocs, copies="N"), a + 1
    return None


def mutation_cone_cohomology(E: DerivedObject, F: DerivedObject) -> list:
    """Nonzero cohomology modules of the left-mutation cone, with degrees.

    Computed independently of ``mutate_left``'s case split: the kernel and the
    cokernel of the evaluation map, or the universal extension.
    """
    M, a, N, b, j = _pair_data(E, F)
    if j is None:
        return [(N, b - 1)]
    if j == 0:
        ev = _stack(hom_basis(M, N), M, N, horizontal=True)
        out = []
        K, _ = kernel(ev)
        C, _ = cokernel(ev)
        if not K.is_zero:
            out.append((K, b))
        if not C.is_zero:
            out.append((C, b - 1))
        return out
    return [(extension(M, N, ext1_cocycles(M, N), copies="M"), b - 1)]


def k_mutate_left(euler: EulerMatrix, e: Sequence[int], f: Sequence[int]) -> tuple:
    c = euler(e, f)
    return tuple(c * x - y for x, y in zip(e, f))


def k_mutate_right(euler: EulerMatrix, e: Sequence[int], f: Sequence[int]) -> tuple:
    c = euler(e, f)
    return tuple(c * y - x for x, y in zip(e, f))


def k_mutation(euler: EulerMatrix, classes: Sequence[Sequence[int]], i: int, direction: str) -> list:
    """Mutate a list of classes at the adjacent pair (i, i+1)."""
    classes = [tuple(c) for c in classes]
    if not 0 <= i < len(classes) - 1:
        raise DerivedError(f"mutation index {i} out of range")
    e, f = classes[i], classes[i + 1]
    if direction in ("left", "L"):
        classes[i : i + 2] = [k_mutate_left(euler, e, f), e]
    elif direction in ("right", "R"):
        classes[i : i + 2] = [f, k_mutate_right(euler, e, f)]
    else:
        raise DerivedError(f"unknown direction {direction!r}")
    return classes


# ---------------------------------------------------------- isomorphism


def isomorphic(A: DerivedObject, B: DerivedObject) -> bool:
    """Concrete: same shifts and isomorphic modules per shift. K tier: equal classes."""
    if A.quiver != B.quiver:
        return False
    if A.is_concrete and B.is_concrete:
        if [s for _, s in A.summands] != [s for _, s in B.summands]:
            return False
        return all(is_isomorphic(M, N) is not None for (M, _), (N, _) in zip(A.summands, B.summands))
    return A.klass == B.klass


def isomorphic_up_to_shift(A: DerivedObject, B: DerivedObject) -> int | None:
    """The m with A ≅ B[m], or None."""
    if A.is_concrete and B.is_concrete:
        m = A.summands[0][1] - B.summands[0][1]
        return m if isomorphic(A, B.shift(m)) else None
    if A.klass == B.klass:
        return 0
    if A.klass == tuple(-x for x in B.klass):
        return 1
    return None


# -------------------------------------------------------- collections


@dataclass(frozen=True, eq=False)
class ExceptionalCollection:
    objects: tuple
    hom_table: dict | None = None

    def __post_init__(self):
        objs = tuple(self.objects)
        object.__setattr__(self, "objects", objs)
        if not objs:
            raise DerivedError("empty collection")
        Q = objs[0].quiver
        if any(o.quiver != Q for o in objs):
            raise DerivedError("objects over different quivers")
        tiers = {o.tier for o in objs}
        if len(tiers) != 1:
            raise DerivedError("mixed tiers in one collection")
        if self.hom_table is None and all(o.has_homs for o in objs):
            table = {(i, j): hom_complex(a, b) for i, a in enumerate(objs) for j, b in enumerate(objs)}
            object.__setattr__(self, "hom_table", table)

    @property
    def quiver(self) -> Quiver:
        return self.objects[0].quiver

    @property
    def tier(self) -> str:
        return self.objects[0].tier

    def __len__(self):
        return len(self.objects)

    def __getitem__(self, i):
        return self.objects[i]

    @property
    def classes(self) -> list:
        return [o.klass for o in self.objects]

    def hom(self, i: int, j: int) -> GradedHom:
        if self.hom_table is None:
            raise DerivedError("collection carries no graded-Hom data (K tier without witnesses)")
        return self.hom_table[(i, j)]

    def class_determinant(self) -> int:
        return la.int_det([list(c) for c in self.classes])

    def violations(self) -> list[str]:
        """Reasons this is not an exceptional collection (empty list if it is)."""
        out = []
        n = len(self)
        if self.hom_table is not None:
            for i in range(n):
                if self.hom(i, i).dims != ((0, 1),):
                    out.append(f"E_{i} not exceptional: {self.hom(i, i)!r}")
                for j in range(i):
                    if not self.hom(i, j).is_zero:
                        out.append(f"Hom•(E_{i}, E_{j}) nonzero: {self.hom(i, j)!r}")
        else:
            eu = euler_form(self.quiver)
            for i in range(n):
                if eu(self[i].klass, self[i].klass) != 1:
                    out.append(f"chi(E_{i}, E_{i}) != 1")
                for j in range(i):
                    if eu(self[i].klass, self[j].klass) != 0:
                        out.append(f"chi(E_{i}, E_{j}) != 0")
        if n == self.quiver.n and abs(self.class_determinant()) != 1:
            out.append("classes are not a basis of the Grothendieck group")
        return out

    def is_exceptional(self) -> bool:
        return not self.violations()

    def is_complete(self) -> bool:
        return len(self) == self.quiver.n and abs(self.class_determinant()) == 1

    def assert_exceptional(self):
        v = self.violations()
        if v:
            raise NotExceptionalError("; ".join(v))
        return self

    def shifted(self, shifts: Sequence[int]) -> "ExceptionalCollection":
        return ExceptionalCollection(tuple(o.shift(p) for o, p in zip(self.objects, shifts)))

    def sub(self, indices: Sequence[int]) -> "ExceptionalCollection":
        idx = list(indices)
        table = None
        if self.hom_table is not None:
            table = {(a, b): self.hom_table[(i, j)] for a, i in enumerate(idx) for b, j in enumerate(idx)}
        return ExceptionalCollection(tuple(self.objects[i] for i in idx), table)

    def to_json(self) -> dict:
        out = {"tier": self.tier, "objects": [o.to_json() for o in self.objects]}
        if self.hom_table is not None:
            out["hom_table"] = [
                {"i": i, "j": j, "hom": h.to_json()} for (i, j), h in sorted(self.hom_table.items())
            ]
        return out


def mutate_collection(C: ExceptionalCollection, i: int, direction: str) -> ExceptionalCollection:
    """``R_i`` or ``L_i`` on the adjacent pair (E_i, E_{i+1})."""
    if not 0 <= i < len(C) - 1:
        raise DerivedError(f"mutation index {i} out of range for length {len(C)}")
    objs = list(C.objects)
    e, f = objs[i], objs[i + 1]
    if C.tier == "concrete":
        if direction in ("right", "R"):
            objs[i : i + 2] = [f, mutate_right(f, e, check=False)]
        else:
            objs[i : i + 2] = [mutate_left(e, f, check=False), e]
    else:
        eu = euler_form(C.quiver)
        new = k_mutation(eu, [e.klass, f.klass], 0, direction)
        if direction in ("right", "R"):
            objs[i : i + 2] = [f, DerivedObject.k_class(C.quiver, new[1], witness=_k_witness(e, f, "right"))]
        else:
            objs[i : i + 2] = [DerivedObject.k_class(C.quiver, new[0], witness=_k_witness(e, f, "left")), e]
    return ExceptionalCollection(tuple(objs))


def collections_isomorphic(A: ExceptionalCollection, B: ExceptionalCollection, up_to_shift: bool = True) -> bool:
    if len(A) != len(B):
        return False
    for a, b in zip(A.objects, B.objects):
        if up_to_shift:
            if isomorphic_up_to_shift(a, b) is None:
                return False
        elif not isomorphic(a, b):
            return False
    return True


@dataclass(frozen=True)
class CollectionFlags:
    strong: bool
    ext: bool
    regular: bool
    orthogonal: bool

    def to_json(self) -> dict:
        return {"strong": self.strong, "Ext": self.ext, "regular": self.regular, "orthogonal": self.orthogonal}


def classify_collection(C: ExceptionalCollection) -> CollectionFlags:
    n = len(C)
    pairs = [(i, j) for i in range(n) for j in range(n)]
    strong = all(k == 0 for i, j in pairs for k in C.hom(i, j).support)
    ext = all(k > 0 for i, j in pairs if i != j for k in C.hom(i, j).support)
    regular = all(sum(1 for k in C.hom(i, j).support if k >= 0) <= 1 for i, j in pairs)
    orthogonal = all(C.hom(i, j).is_zero for i, j in pairs if i != j)
    return CollectionFlags(strong, ext, regular, orthogonal)


# ---------------------------------------------------------- the P_n family


def pn_seed(n: int) -> tuple[DerivedObject, DerivedObject]:
    """(S_0, S_1): S_0[1] is the source simple, S_1 the sink simple."""
    Q = kronecker(n)
    return (
        DerivedObject.module(simple(Q, "0"), -1, "S_0"),
        DerivedObject.module(simple(Q, "1"), 0, "S_1"),
    )


@lru_cache(maxsize=None)
def pn_object(n: int, i: int) -> DerivedObject:
    """S_i: right mutations going up from (S_0, S_1), left mutations going down."""
    if n < 1:
        raise DerivedError("need at least one arrow")
    if i in (0, 1):
        return pn_seed(n)[i]
    if i >= 2:
        return mutate_right(pn_object(n, i - 1), pn_object(n, i - 2)).relabel(f"S_{i}")
    return mutate_left(pn_object(n, i + 1), pn_object(n, i + 2)).relabel(f"S_{i}")


def pn_exceptional_family(n: int, i_min: int, i_max: int) -> dict[int, DerivedObject]:
    """S_i for i_min <= i <= i_max."""
    if i_min > i_max:
        raise DerivedError("empty index range")
    out = {}
    for i in range(i_min, i_max + 1):
        S = pn_object(n, i)
        if not is_exceptional(S):
            raise NotExceptionalError(f"S_{i} is not exceptional")
        out[i] = S
    return out


def pn_pair(n: int, k: int) -> ExceptionalCollection:
    """The strong pair (S_k, S_{k+1})."""
    fam = pn_exceptional_family(n, min(k, 0), max(k + 1, 1))
    return ExceptionalCollection((fam[k], fam[k + 1]))
