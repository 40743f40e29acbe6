"""Command-line front end.

Structured results go to stdout as JSON (one object, or JSON lines for
`enumerate`); `--pretty` switches to aligned key/value text.  Errors are one
JSON object on stderr.  Exit codes: 0 success, 1 semantic failure, 2 usage or
parse error.
"""

import argparse
import json
import sys

from .formula import (
    FormulaSyntaxError, build_Bh, glivenko_translate, mn_axiom, parse,
    pretrans_axiom, unparse,
)
from .frame import (
    Frame, bits, cluster_decomposition, is_m_transitive, is_mn_frame,
    pretransitivity_index,
)
from .model import Model, model_check, truth_sets
from .oracle import ClassSpec, enumerate_frames, frame_valid_witness
from .partition import Partition, is_proper
from .refine import filtration_pipeline, proper_refinement
from .verify import SUITES, run_suite

__all__ = ["run", "main"]


class CliError(Exception):
    """Carries the exit code; message becomes the stderr error JSON."""

    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError(message, 2)


def _load_json(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as e:
        raise CliError(str(e), 1) from None
    except json.JSONDecodeError as e:
        raise CliError("%s: %s" % (path, e), 2) from None


def _dump_json(path, obj):
    try:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(obj, fh)
            fh.write("\n")
    except OSError as e:
        raise CliError(str(e), 1) from None


def _emit(obj, pretty):
    if pretty:
        for k, v in obj.items():
            if isinstance(v, (dict, list)):
                v = json.dumps(v)
            print("%-24s %s" % (k, v))
    else:
        print(json.dumps(obj))


def _cmd_classify(args):
    F = Frame.from_dict(_load_json(args.frame))
    dec = cluster_decomposition(F)
    hist = {}
    for c in dec.clusters.blocks:
        hist[c.bit_count()] = hist.get(c.bit_count(), 0) + 1
    out = {
        "points": F.n,
        "edges": F.edge_count(),
        "pretransitivity_index": pretransitivity_index(F),
        "height": dec.height,
        "cluster_sizes": {str(k): v for k, v in sorted(hist.items())},
    }
    if args.n is not None and args.m is None:
        raise CliError("--n makes no sense without --m", 2)
    if args.m is not None:
        out["m_transitive"] = is_m_transitive(F, args.m)
        if args.n is not None:
            out["mn_frame"] = is_mn_frame(F, args.m, args.n)
    _emit(out, args.pretty)
    return 0


def _cmd_check(args):
    M = Model.from_dict(_load_json(args.model))
    f = parse(args.formula)
    if args.point is not None:
        out = {"point": args.point, "satisfied": model_check(M, args.point, f)}
    else:
        pts = list(bits(truth_sets(M, f)[f]))
        out = {"points": M.frame.n, "satisfying_points": pts, "count": len(pts)}
    _emit(out, args.pretty)
    return 0


def _cmd_valid(args):
    F = Frame.from_dict(_load_json(args.frame))
    ok, witness = frame_valid_witness(F, parse(args.formula))
    out = {"valid": ok}
    if witness is not None:
        out["witness"] = {"p%d" % i: list(pts) for i, pts in sorted(witness.items())}
    _emit(out, args.pretty)
    return 0


def _cmd_filtrate(args):
    M = Model.from_dict(_load_json(args.model))
    f = parse(args.formula)
    spec = ClassSpec.from_text(args.cls)
    out_model, report = filtration_pipeline(M, f, spec)
    payload = {"model": out_model.to_dict(), "report": report.to_dict()}
    if args.out_model:
        _dump_json(args.out_model, payload["model"])
    if args.out_report:
        _dump_json(args.out_report, payload["report"])
    _emit(payload if not args.pretty else payload["report"], args.pretty)
    return 0


def _cmd_proper_refine(args):
    F = Frame.from_dict(_load_json(args.frame))
    A = Partition.from_dict(_load_json(args.partition))
    B = proper_refinement(F, A)
    _emit({"partition": B.to_dict(), "proper": is_proper(F, B)}, args.pretty)
    return 0


def _cmd_gen(args):
    if args.kind == "bh":
        f = build_Bh(args.h, args.m)
    elif args.kind == "mn-axiom":
        f = mn_axiom(args.m, args.n)
    elif args.kind == "pretrans-axiom":
        f = pretrans_axiom(args.m)
    else:
        f = glivenko_translate(parse(args.formula), args.m)
    print(unparse(f))
    return 0


def _cmd_enumerate(args):
    spec = ClassSpec.from_text(args.cls)
    for F in enumerate_frames(args.size, spec):
        print(json.dumps(F.to_dict()))
    return 0


def _cmd_verify(args):
    failures = run_suite(args.suite, args.cases, args.seed)
    out = {"suite": args.suite, "cases": args.cases, "seed": args.seed,
           "passed": not failures, "failures": failures}
    _emit(out, args.pretty)
    return 0 if not failures else 1


def _build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--pretty", action="store_true",
                        help="aligned text instead of JSON")

    p = _Parser(prog="kfl", description="finite-model constructions on "
                                        "pretransitive Kripke frames")
    sub = p.add_subparsers(dest="command", required=True)

    q = sub.add_parser("classify", parents=[common],
                       help="frame shape and class verdicts")
    q.add_argument("--frame", required=True, help="frame JSON file")
    q.add_argument("--m", type=int)
    q.add_argument("--n", type=int)
    q.set_defaults(func=_cmd_classify)

    q = sub.add_parser("check", parents=[common], help="model checking")
    q.add_argument("--model", required=True, help="model JSON file")
    q.add_argument("--formula", required=True, help="formula text")
    q.add_argument("--point", type=int)
    q.set_defaults(func=_cmd_check)

    q = sub.add_parser("valid", parents=[common],
                       help="frame validity by exhaustive valuations")
    q.add_argument("--frame", required=True)
    q.add_argument("--formula", required=True)
    q.set_defaults(func=_cmd_valid)

    q = sub.add_parser("filtrate", parents=[common],
                       help="run the full small-model pipeline")
    q.add_argument("--model", required=True)
    q.add_argument("--formula", required=True)
    q.add_argument("--class", dest="cls", required=True,
                   help="mn:M,N or g:M")
    q.add_argument("--out-model", help="also write the output model here")
    q.add_argument("--out-report", help="also write the report here")
    q.set_defaults(func=_cmd_filtrate)

    q = sub.add_parser("proper-refine", parents=[common],
                       help="refine a partition until it is proper")
    q.add_argument("--frame", required=True)
    q.add_argument("--partition", required=True)
    q.set_defaults(func=_cmd_proper_refine)

    g = sub.add_parser("gen", help="print schema instances as formula text")
    gs = g.add_subparsers(dest="kind", required=True)
    q = gs.add_parser("bh")
    q.add_argument("--h", type=int, required=True)
    q.add_argument("--m", type=int, required=True)
    q.set_defaults(func=_cmd_gen)
    q = gs.add_parser("mn-axiom")
    q.add_argument("--m", type=int, required=True)
    q.add_argument("--n", type=int, required=True)
    q.set_defaults(func=_cmd_gen)
    q = gs.add_parser("pretrans-axiom")
    q.add_argument("--m", type=int, required=True)
    q.set_defaults(func=_cmd_gen)
    q = gs.add_parser("glivenko")
    q.add_argument("--m", type=int, required=True)
    q.add_argument("--formula", required=True)
    q.set_defaults(func=_cmd_gen)

    q = sub.add_parser("enumerate", parents=[common],
                       help="stream all frames of a size in a class")
    q.add_argument("--size", type=int, required=True)
    q.add_argument("--class", dest="cls", default="any")
    q.set_defaults(func=_cmd_enumerate)

    q = sub.add_parser("verify", parents=[common],
                       help="run a randomized invariant suite")
    q.add_argument("--suite", required=True, choices=sorted(SUITES))
    q.add_argument("--cases", type=int, default=100)
    q.add_argument("--seed", type=int, default=0)
    q.set_defaults(func=_cmd_verify)

    return p


def _fail(message):
    print(json.dumps({"error": str(message)}), file=sys.stderr)


def run(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except CliError as e:
        _fail(e)
        return e.code
    except SystemExit as e:  # --help
        return int(e.code or 0)
    try:
        return args.func(args)
    except CliError as e:
        _fail(e)
        return e.code
    except FormulaSyntaxError as e:
        _fail("formula syntax: %s" % e)
        return 2
    except (ValueError, OSError, RuntimeError) as e:
        _fail(e)
        return 1


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
