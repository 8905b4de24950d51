"""Named exceptional collections and the JSON collection-spec loader.

A collection spec looks like::

    {"quiver": "pn:2", "tier": "concrete",
     "objects": [{"pn": 0}, {"pn": 1}]}

``quiver`` is ``pn:<n>``, ``tn:<N>``, ``linear:<n>[:m1,m2,...]`` or a path to a
quiver file. Objects are ``{"simple": v}``, ``{"projective": v}``, ``{"pn": i}``
or (K tier only) ``{"class": [...]}``, each with an optional ``"shift"``.
"""

from __future__ import annotations

import json
from pathlib import Path

from .derived import DerivedError, DerivedObject, ExceptionalCollection, pn_object, pn_pair
from .quiver import Quiver, QuiverError, beilinson, kronecker, linear_quiver, parse_quiver
from .representation import projective, simple


def load_quiver(ref: str, base: Path | None = None) -> Quiver:
    kind, _, rest = ref.partition(":")
    if kind == "pn" and rest:
        return kronecker(int(rest))
    if kind == "tn" and rest:
        return beilinson(int(rest))
    if kind == "linear" and rest:
        n, _, mult = rest.partition(":")
        return linear_quiver(int(n), [int(m) for m in mult.split(",")] if mult else None)
    path = Path(ref) if base is None else base / ref
    if not path.exists():
        raise QuiverError(f"unknown quiver reference {ref!r}")
    return parse_quiver(path.read_text(), name=path.stem)


def _object(Q: Quiver, tier: str, spec: dict, pn_n: int | None) -> DerivedObject:
    shift = int(spec.get("shift", 0))
    label = spec.get("label", "")
    if "pn" in spec:
        if pn_n is None:
            raise DerivedError("'pn' objects need a pn:<n> quiver")
        X = pn_object(pn_n, int(spec["pn"]))
        if tier == "K":
            M, s = X.single
            X = DerivedObject.k_module(M, s, X.label)
        X = X.shift(shift)
        return X.relabel(label) if label else X
    if "class" in spec:
        if tier != "K":
            raise DerivedError("class-only objects need the K tier")
        return DerivedObject.k_class(Q, spec["class"], label).shift(shift)
    for key, make in (("simple", simple), ("projective", projective)):
        if key in spec:
            v = str(spec[key])
            M = make(Q, v)
            lab = label or f"{key[0].upper()}{v}"
            if tier == "K":
                return DerivedObject.k_module(M, shift, lab)
            return DerivedObject.module(M, shift, lab)
    raise DerivedError(f"cannot read object spec {spec!r}")


def collection_from_spec(data: dict, base: Path | None = None) -> ExceptionalCollection:
    ref = str(data["quiver"])
    Q = load_quiver(ref, base)
    tier = data.get("tier") or ("concrete" if Q.hereditary else "K")
    pn_n = int(ref[3:]) if ref.startswith("pn:") else None
    objs = tuple(_object(Q, tier, o, pn_n) for o in data["objects"])
    return ExceptionalCollection(objs).assert_exceptional()


def load_collection(path: str | Path) -> ExceptionalCollection:
    path = Path(path)
    return collection_from_spec(json.loads(path.read_text()), path.parent)


def _modules(Q: Quiver, make, order, k_tier: bool = False) -> ExceptionalCollection:
    build = DerivedObject.k_module if k_tier else DerivedObject.module
    name = "S" if make is simple else "P"
    return ExceptionalCollection(tuple(build(make(Q, v), 0, f"{name}{v}") for v in order))


def corpus() -> dict[str, ExceptionalCollection]:
    """The fixed test corpus: P_2, P_3, hereditary triples and T_2 in the K tier."""
    out: dict[str, ExceptionalCollection] = {}
    for n in (2, 3):
        for k in (-1, 0, 1, 2):
            out[f"P{n}_pair_{k}"] = pn_pair(n, k)
    for mult in ((1, 1), (2, 1), (1, 2)):
        Q = linear_quiver(3, list(mult))
        tag = "".join(map(str, mult))
        out[f"A3_{tag}_simples"] = _modules(Q, simple, ("0", "1", "2"))
        out[f"A3_{tag}_projectives"] = _modules(Q, projective, ("2", "1", "0"))
    T = beilinson(2)
    out["T2_simples"] = _modules(T, simple, ("0", "1", "2"), k_tier=True)
    out["T2_projectives"] = _modules(T, projective, ("2", "1", "0"), k_tier=True)
    return out
