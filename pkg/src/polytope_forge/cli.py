"""polytope-forge command line.

Exit status: 0 success, 1 input error, 2 certificate failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import constructor, enumerative, fixtures, normalizer, oracle, serialize
from .errors import (
    BoundViolationError,
    CertificateError,
    FacetDegeneratedError,
    PolytopeError,
    SearchExhaustedError,
    TypeChangeError,
)
from .geometry import HPolytope, certify_type, f_vector_of, hull, realize, verify_realization
from .off import export_off

CERT_FAILURES = (CertificateError, BoundViolationError, SearchExhaustedError, TypeChangeError, FacetDegeneratedError)


class InputError(Exception):
    pass


def _read(path):
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(str(exc)) from exc
    return serialize.loads(text)


def _write(doc, path=None):
    text = serialize.dumps(doc)
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _polytope(path):
    return serialize.polytope_from_doc(_read(path))[0]


def _as_h(P):
    return P if isinstance(P, HPolytope) else hull(P.vertices)[1]


def cmd_normalize(args):
    P = _as_h(_polytope(args.input))
    log = normalizer.normalize_cube(P, keep_snapshots=bool(args.snapshots))
    doc = serialize.log_to_doc(log)
    if args.snapshots:
        os.makedirs(args.snapshots, exist_ok=True)
        for i, S in enumerate(log.snapshots):
            _write(serialize.polytope_to_doc(S), os.path.join(args.snapshots, f"step{i:02d}.json"))
    _write(doc, args.log)


def cmd_relate(args):
    A, B = _as_h(_polytope(args.a)), _as_h(_polytope(args.b))
    _write(serialize.log_to_doc(normalizer.relate_cubes(A, B)), args.log)


def cmd_tower(args):
    A, B = _as_h(_polytope(args.q)), _as_h(_polytope(args.q2))
    if A.dim != args.dim - 1 or B.dim != args.dim - 1:
        raise InputError(f"a {args.dim}-tower needs two ({args.dim - 1})-cubes")
    T = constructor.build_tower(A, B, pad_to=args.cubes)
    prov = {
        "cube_count": T.cube_count,
        "bottom_facet": T.bottom_facet,
        "top_facet": T.top_facet,
        "glue_parameters": [serialize.fmt(p) for p in T.parameters],
    }
    _write(serialize.polytope_to_doc(T.polytope.V, provenance=prov), args.out)


def cmd_connect(args):
    A, B = _polytope(args.p1), _polytope(args.p2)
    R, prov = constructor.c_connected_sum(A, args.facet1, B, args.facet2, connector_cubes=args.connector_cubes)
    _write(serialize.polytope_to_doc(R.V, provenance=prov), args.out)


def _fvector(P):
    if isinstance(P, HPolytope):
        _, _, inc = realize(P)
    else:
        _, _, inc = hull(P.vertices)
    return f_vector_of(inc)


def cmd_fvector(args):
    f = _fvector(_polytope(args.input))
    print(json.dumps({"dim": f.d, "f": list(f.entries)}))


def cmd_gc(args):
    f = _fvector(_polytope(args.input))
    g = enumerative.gc_of_f(f)
    print(json.dumps({"dim": g.d, "gc": [serialize.fmt(x) for x in g.entries]}))


def cmd_verify(args):
    P = _polytope(args.input)
    if isinstance(P, HPolytope):
        V, H, inc = realize(P)
    else:
        V, H, inc = hull(P.vertices)
    out = {"realization": verify_realization(V, inc.facets).to_dict()}
    out["type"] = None
    for kind in ("combinatorial-cube", "combinatorial-crosspolytope"):
        try:
            out["type"] = certify_type(V, inc, kind).to_dict()
            break
        except PolytopeError:
            pass
    if args.oracle:
        V2, _, inc2 = oracle.brute_force_hull(V.vertices)
        if not oracle.same_incidence(V, inc, V2, inc2):
            raise CertificateError("oracle", "incidence differs from brute_force_hull")
        out["oracle"] = "match"
    print(json.dumps(out))


def cmd_export_off(args):
    P = _polytope(args.input)
    with open(args.output, "w") as fh:
        fh.write(export_off(P, args.digits))


def cmd_schedule(args):
    target = [serialize.parse(x.strip()) for x in args.target.split(",")]
    d = args.dim if args.dim is not None else 2 * len(target)
    gens = None
    if args.generators:
        raw = _read(args.generators)
        try:
            gens = {
                int(i): enumerative.Generator(int(i), int(g["power"]), serialize.parse(g.get("coeff", "1")))
                for i, g in raw.items()
            }
        except (KeyError, TypeError, ValueError, AttributeError) as exc:
            raise InputError(f"bad generators file: {exc}") from exc
    steps = enumerative.density_schedule(target, d, gens, m_values=range(d, d + args.steps))
    for s in steps:
        print(json.dumps({
            "m": s.m,
            "indices": [list(p) for p in s.indices],
            "cos2": serialize.fmt(s.cos2),
            "cos2_float": float(s.cos2),
        }))


def cmd_random(args):
    if args.kind == "cube":
        P = fixtures.random_cube(args.dim, args.seed)
    else:
        P = fixtures.random_crosspolytope(args.dim, args.seed)
    _write(serialize.polytope_to_doc(P), args.out)


def build_parser():
    p = argparse.ArgumentParser(prog="polytope-forge")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("normalize")
    s.add_argument("input")
    s.add_argument("--log")
    s.add_argument("--snapshots")
    s.set_defaults(func=cmd_normalize)

    s = sub.add_parser("relate")
    s.add_argument("a")
    s.add_argument("b")
    s.add_argument("--log")
    s.set_defaults(func=cmd_relate)

    s = sub.add_parser("tower")
    s.add_argument("q")
    s.add_argument("q2")
    s.add_argument("--dim", type=int, required=True)
    s.add_argument("--cubes", type=int, help="pad with right prisms to this many cubes")
    s.add_argument("--out")
    s.set_defaults(func=cmd_tower)

    s = sub.add_parser("connect")
    s.add_argument("p1")
    s.add_argument("p2")
    s.add_argument("--facet1", type=int, required=True)
    s.add_argument("--facet2", type=int, required=True)
    s.add_argument("--connector-cubes", type=int)
    s.add_argument("--out")
    s.set_defaults(func=cmd_connect)

    for name, fn in (("fvector", cmd_fvector), ("gc", cmd_gc)):
        s = sub.add_parser(name)
        s.add_argument("input")
        s.set_defaults(func=fn)

    s = sub.add_parser("verify")
    s.add_argument("input")
    s.add_argument("--oracle", action="store_true")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("export-off")
    s.add_argument("input")
    s.add_argument("output")
    s.add_argument("--digits", type=int, default=12)
    s.set_defaults(func=cmd_export_off)

    s = sub.add_parser("schedule")
    s.add_argument("--target", required=True)
    s.add_argument("--generators")
    s.add_argument("--steps", type=int, default=10)
    s.add_argument("--dim", type=int)
    s.set_defaults(func=cmd_schedule)

    s = sub.add_parser("random")
    s.add_argument("kind", choices=("cube", "crosspolytope"))
    s.add_argument("--dim", type=int, required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out")
    s.set_defaults(func=cmd_random)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code else 0
    try:
        args.func(args)
    except BoundViolationError as exc:
        print(f"error: bound violated at step {exc.step}: {exc}", file=sys.stderr)
        return 2
    except CERT_FAILURES as exc:
        print(f"certificate failure: {exc}", file=sys.stderr)
        return 2
    except (InputError, serialize.SchemaError, PolytopeError, ValueError, OSError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
