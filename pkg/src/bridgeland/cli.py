"""Batch driver: every subcommand writes one deterministic JSON report.

Exit codes: 0 success, 1 domain error (a structured error report is still
written), 2 budget exhausted or result indeterminate.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import chambers as ch
from . import plot
from .braid import act_braid
from .corpus import _object, load_collection, load_quiver
from .derived import (
    DerivedError,
    classify_collection,
    euler_form,
    hom_complex,
    mutation_cone_cohomology,
    pn_exceptional_family,
)
from .hn import Indeterminate
from .homological import ResolutionTruncated, check_exact, ext_dims, minimal_projective_resolution
from .phase import Gauss, GLElement, rational_phase_ray
from .quiver import QuiverError
from .representation import Representation, RepresentationError
from .stability import (
    HeartSpec,
    StabilityError,
    build_stability,
    gl_action,
    hn_filtration,
    object_phase,
    object_status,
)
from .subreps import BudgetExceeded

SCHEMA_VERSION = ch.SCHEMA_VERSION

DOMAIN_ERRORS = (QuiverError, DerivedError, RepresentationError, StabilityError, ch.ChamberError, KeyError, ValueError)
BUDGET_ERRORS = (BudgetExceeded, Indeterminate, ResolutionTruncated, ch.SearchExhausted)


# ------------------------------------------------------------------ parsing


def _range(text: str) -> tuple[int, int]:
    a, sep, b = text.partition("..")
    if not sep:
        raise argparse.ArgumentTypeError("range must look like a..b")
    return int(a), int(b)


def _rational(text: str) -> Fraction:
    return Fraction(text)


def _shifts(text: str) -> list[int]:
    return [int(s) for s in text.split(",") if s.strip()]


def _fixed(items) -> dict:
    out = {}
    for it in items or []:
        k, _, v = it.partition("=")
        out[int(k)] = Fraction(v)
    return out


def _collection(args):
    if args.collection:
        return load_collection(args.collection)
    if args.corpus:
        from .corpus import corpus

        table = corpus()
        if args.corpus not in table:
            raise KeyError(f"unknown corpus collection {args.corpus!r}; known: {', '.join(sorted(table))}")
        return table[args.corpus]
    raise DerivedError("pass --collection FILE or --corpus NAME")


def _object_from_arg(Q, ref: str, text: str):
    spec = json.loads(text)
    tier = spec.pop("tier", None) or ("concrete" if Q.hereditary else "K")
    pn_n = int(ref[3:]) if ref.startswith("pn:") else None
    return _object(Q, tier, spec, pn_n)


def _point(C, args) -> ch.ChamberPoint:
    if args.phases:
        if len(args.phases) != len(C):
            raise ch.ChamberError("one phase per collection object")
        masses = args.masses or None
        return ch.ChamberPoint.from_phases([rational_phase_ray(Fraction(p)) for p in args.phases], masses)
    if not args.z:
        raise ch.ChamberError("pass --z with --windings, or --phases")
    w = args.windings or [0] * len(args.z)
    return ch.ChamberPoint(tuple(Gauss.parse(z) for z in args.z), tuple(w))


def _sigma(C, args):
    shifts = args.shifts if args.shifts is not None else ch.ext_shifts(C)
    sigma = build_stability(HeartSpec(C, tuple(shifts)), [Gauss.parse(z) for z in args.z])
    if args.gl:
        sigma = gl_action(sigma, GLElement.from_json(json.loads(args.gl)))
    return sigma


# ------------------------------------------------------------- commands


def cmd_quiver_check(args):
    Q = load_quiver(args.quiver)
    out = {
        "name": Q.name,
        "vertices": list(Q.vertices),
        "arrows": [{"name": a.name, "source": a.source, "target": a.target} for a in Q.arrows],
        "relations": len(Q.relations),
        "hereditary": Q.hereditary,
        "acyclic": not Q.has_oriented_cycle,
    }
    if not Q.has_oriented_cycle:
        out["euler_matrix"] = euler_form(Q).tolist()
    return out


def cmd_hom(args):
    Q = load_quiver(args.quiver)
    A = _object_from_arg(Q, args.quiver, args.source)
    B = _object_from_arg(Q, args.quiver, args.target)
    h = hom_complex(A, B)
    return {"source": A.to_json(), "target": B.to_json(), "hom": h.to_json(), "euler": h.euler}


def cmd_resolve(args):
    Q = load_quiver(args.quiver)
    X = _object_from_arg(Q, args.quiver, args.module)
    M, _ = X.single
    res = minimal_projective_resolution(M, args.max_length)
    return {
        "module": M.to_json(),
        "length": res.length,
        "truncated": res.truncated,
        "exact": check_exact(res),
        "multiplicities": [list(r) for r in res.multiplicity_table()],
        "ext_self": ext_dims(M, M, res=res),
    }


def cmd_exceptional_pn(args):
    lo, hi = args.range
    fam = pn_exceptional_family(args.n, lo, hi)
    rows = []
    for i, S in fam.items():
        M, s = S.single
        rows.append({"i": i, "dims": list(M.dims), "shift": s, "class": list(S.klass), "object": S.to_json()})
    return {"n": args.n, "family": rows}


def cmd_mutate(args):
    C = _collection(args)
    D = act_braid(C, args.word)
    cones = []
    if C.tier == "concrete":
        for a in range(len(D) - 1):
            try:
                cones.append({"pair": a, "cohomology": [{"degree": k, "module": M.to_json()} for M, k in mutation_cone_cohomology(D[a], D[a + 1])]})
            except DerivedError as e:
                cones.append({"pair": a, "error": str(e)})
    return {"word": args.word, "input": C.to_json(), "output": D.to_json(), "exceptional": D.is_exceptional(), "cones": cones}


def cmd_classify(args):
    C = _collection(args)
    return {"flags": classify_collection(C).to_json(), "k_table": ch.k_table(C).to_json()}


def cmd_stability_build(args):
    C = _collection(args)
    sigma = _sigma(C, args)
    objs = []
    for a, E in enumerate(C.objects):
        objs.append({"index": a, "status": object_status(E, sigma, args.prime), "phase": object_phase(E, sigma).to_json()})
    return {"stability": sigma.to_json(), "objects": objs}


def cmd_hn(args):
    C = _collection(args)
    sigma = _sigma(C, args)
    if args.heart_module:
        Hq = sigma.heart.heart_quiver
        if Hq is None:
            raise StabilityError("this heart has no quiver presentation")
        M = Representation.from_json(Hq, json.loads(args.heart_module))
        filt = hn_filtration(M, sigma, args.prime, args.budget)
    else:
        X = _object_from_arg(C.quiver, args.quiver_ref or "", args.object)
        filt = hn_filtration(X, sigma, args.prime, args.budget)
    return {"stability": sigma.to_json(), "filtration": filt.to_json()}


def cmd_chamber_region(args):
    C = _collection(args)
    R = ch.chamber_region(C)
    return {"collection": C.to_json(), "region": R.to_json()}


def cmd_chamber_contains(args):
    C = _collection(args)
    R = ch.chamber_region(C)
    pt = _point(C, args)
    inside = ch.region_contains(R, pt)
    eq, bad = ch.tight_inequalities(R, pt)
    out = {
        "point": pt.to_json(),
        "inside": inside,
        "tight": [q.to_json() for q in eq],
        "violated": [q.to_json() for q in bad],
    }
    if inside:
        sigma = ch.realize(C, pt)
        out["realization"] = sigma.to_json()
        out["theta_membership"] = ch.theta_membership(sigma, C, args.prime, args.budget)
        out["rho_roundtrip"] = ch.rho(sigma, C, args.prime, args.budget).phases == pt.phases
    return out


def cmd_glue(args):
    C = _collection(args)
    js = [args.j] if args.j is not None else range(len(C) - 1)
    out = []
    for j in js:
        if C.hom(j, j + 1).is_zero:
            out.append({"j": j, "skipped": "orthogonal pair"})
            continue
        out.append(ch.glue_witness(C, j, args.prime).to_json())
    return {"witnesses": out}


def cmd_probe(args):
    if args.quiver != "pn":
        raise QuiverError("probe-intersection supports --quiver pn")
    rep = ch.probe_intersection(args.n, args.k, args.h, args.samples, args.seed, args.prime)
    out = rep.to_json()
    if rep.indeterminate:
        out["_exit"] = 2
    return out


def cmd_boundary(args):
    C = _collection(args)
    pt = _point(C, args)
    res = ch.boundary_probe(C, pt, args.W, args.depth, args.prime)
    return {"point": pt.to_json(), "result": res.to_json()}


def cmd_plot_slice(args):
    C = _collection(args)
    R = ch.chamber_region(C)
    fixed = _fixed(args.fixed)
    rows = plot.slice_grid(R, args.lo, args.hi, args.resolution, fixed)
    axes, _ = plot._slice_setup(R, fixed)
    poly = plot.slice_polygon(R, args.lo, args.hi, fixed)
    csv_path = Path(args.csv)
    svg_path = Path(args.svg)
    csv_path.write_text(plot.grid_csv(rows, axes), newline="")
    svg_path.write_text(plot.slice_svg(R, args.lo, args.hi, fixed))
    return {
        "region": R.to_json(),
        "axes": list(axes),
        "fixed": {str(k): str(v) for k, v in sorted(fixed.items())},
        "polygon": [[str(x), str(y)] for x, y in poly],
        "polygon_display": [[float(x), float(y)] for x, y in poly],
        "inside_count": sum(1 for r in rows if r[2]),
        "grid_points": len(rows),
        "csv": str(csv_path),
        "svg": str(svg_path),
    }


# ----------------------------------------------------------------- parser


def _add_collection(p):
    g = p.add_mutually_exclusive_group()
    g.add_argument("--collection", help="collection spec JSON file")
    g.add_argument("--corpus", help="named corpus collection")


def _add_sigma(p):
    p.add_argument("--shifts", type=_shifts, default=None, help="comma separated heart shifts (default: the least Ext shifts)")
    p.add_argument("--z", nargs="+", required=True, help="one charge per heart simple, e.g. -1 1+i")
    p.add_argument("--gl", default=None, help='GL~ element as JSON {"T": [[...],[...]], "lift": 0}')


def _add_point(p):
    p.add_argument("--z", nargs="+", default=None)
    p.add_argument("--windings", nargs="+", type=int, default=None)
    p.add_argument("--phases", nargs="+", default=None, help="quarter-integer phases")
    p.add_argument("--masses", nargs="+", default=None)


def build_parser() -> argparse.ArgumentParser:
    env_prime = os.environ.get("BRIDGELAND_PRIME")
    env_budget = os.environ.get("BRIDGELAND_SUBREP_BUDGET")
    top = argparse.ArgumentParser(prog="bridgeland", description=__doc__.splitlines()[0])
    top.add_argument("--out", default=None, help="report path (default <command>.json, '-' for stdout)")
    top.add_argument("--prime", type=int, default=int(env_prime) if env_prime else 5)
    top.add_argument("--budget", type=int, default=int(env_budget) if env_budget else 10**7)
    sub = top.add_subparsers(dest="command", required=True)

    q = sub.add_parser("quiver").add_subparsers(dest="action", required=True)
    p = q.add_parser("check")
    p.add_argument("--quiver", required=True)
    p.set_defaults(func=cmd_quiver_check, name="quiver-check")

    p = sub.add_parser("hom")
    p.add_argument("--quiver", required=True)
    p.add_argument("--source", required=True, help='object spec JSON, e.g. {"simple": "0"}')
    p.add_argument("--target", required=True)
    p.set_defaults(func=cmd_hom, name="hom")

    p = sub.add_parser("resolve")
    p.add_argument("--quiver", required=True)
    p.add_argument("--module", required=True)
    p.add_argument("--max-length", type=int, default=12)
    p.set_defaults(func=cmd_resolve, name="resolve")

    e = sub.add_parser("exceptional").add_subparsers(dest="action", required=True)
    p = e.add_parser("pn")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--range", type=_range, default=(0, 1))
    p.set_defaults(func=cmd_exceptional_pn, name="exceptional-pn")

    p = sub.add_parser("mutate")
    _add_collection(p)
    p.add_argument("--word", required=True, help="braid word such as 'R0 L1'")
    p.set_defaults(func=cmd_mutate, name="mutate")

    p = sub.add_parser("classify")
    _add_collection(p)
    p.set_defaults(func=cmd_classify, name="classify")

    s = sub.add_parser("stability").add_subparsers(dest="action", required=True)
    p = s.add_parser("build")
    _add_collection(p)
    _add_sigma(p)
    p.set_defaults(func=cmd_stability_build, name="stability-build")

    p = sub.add_parser("hn")
    _add_collection(p)
    _add_sigma(p)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--object", help="object spec JSON over the collection's quiver")
    g.add_argument("--heart-module", help="module JSON over the heart quiver (dims, maps)")
    p.add_argument("--quiver-ref", default=None, help="quiver reference for 'pn' object specs")
    p.set_defaults(func=cmd_hn, name="hn")

    c = sub.add_parser("chamber").add_subparsers(dest="action", required=True)
    p = c.add_parser("region")
    _add_collection(p)
    p.set_defaults(func=cmd_chamber_region, name="chamber-region")
    p = c.add_parser("contains")
    _add_collection(p)
    _add_point(p)
    p.set_defaults(func=cmd_chamber_contains, name="chamber-contains")

    p = sub.add_parser("glue")
    _add_collection(p)
    p.add_argument("--j", type=int, default=None)
    p.set_defaults(func=cmd_glue, name="glue")

    p = sub.add_parser("probe-intersection")
    p.add_argument("--quiver", default="pn")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, default=0)
    p.add_argument("--h", type=int, default=1)
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=42)
    p.set_defaults(func=cmd_probe, name="probe-intersection")

    p = sub.add_parser("boundary-probe")
    _add_collection(p)
    _add_point(p)
    p.add_argument("--W", type=int, default=3)
    p.add_argument("--depth", type=int, default=3)
    p.set_defaults(func=cmd_boundary, name="boundary-probe")

    p = sub.add_parser("plot-slice")
    _add_collection(p)
    p.add_argument("--fixed", nargs="*", default=None, help="index=phase for the coordinates held fixed")
    p.add_argument("--lo", type=_rational, default=Fraction(-2))
    p.add_argument("--hi", type=_rational, default=Fraction(2))
    p.add_argument("--resolution", type=int, default=40)
    p.add_argument("--csv", default="slice.csv")
    p.add_argument("--svg", default="slice.svg")
    p.set_defaults(func=cmd_plot_slice, name="plot-slice")
    return top


def _config(args) -> dict:
    out = {}
    for k, v in sorted(vars(args).items()):
        if k in ("func",):
            continue
        if isinstance(v, Fraction):
            v = str(v)
        elif isinstance(v, tuple):
            v = list(v)
        elif isinstance(v, str):
            v = v.strip()
        elif isinstance(v, list):
            v = [x.strip() if isinstance(x, str) else x for x in v]
        out[k] = v
    return out


def _write(path: str, report: dict):
    text = json.dumps(report, indent=2, sort_keys=True, default=str) + "\n"
    if path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _protect_negatives(argv):
    # "-1..3" or "-1+i" would otherwise be taken for option flags
    return [" " + a if len(a) > 1 and a[0] == "-" and (a[1].isdigit() or a[1] == ".") else a for a in argv]


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(_protect_negatives(sys.argv[1:] if argv is None else list(argv)))
    out = args.out or f"{args.name}.json"
    report = {"schema_version": SCHEMA_VERSION, "command": args.name, "config": _config(args)}
    code = 0
    try:
        result = args.func(args)
        code = result.pop("_exit", 0) if isinstance(result, dict) else 0
        report["status"] = "ok" if code == 0 else "indeterminate"
        report["result"] = result
    except BUDGET_ERRORS as e:
        code = 2
        report["status"] = "indeterminate"
        report["error"] = {"type": type(e).__name__, "message": str(e)}
    except DOMAIN_ERRORS as e:
        code = 1
        report["status"] = "error"
        report["error"] = {"type": type(e).__name__, "message": str(e)}
    _write(out, report)
    if out != "-":
        print(out)
    return code


if __name__ == "__main__":
    sys.exit(main())
