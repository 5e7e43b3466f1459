"""Command-line interface: ``bfml <command> ...`` (or ``python -m bfml``).

Exit codes: 0 ok, 1 other error, 2 usage, 3 schema, 4 undefined minor,
5 verification found counterexamples.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Optional, Sequence

from . import __version__
from .classes import (
    LINEAR,
    MATROIDAL,
    RANKABLE,
    STABLE,
    ClassId,
    class_violations,
    gf2_matroid_rank,
    graphic_matroid_rank,
    least_polymatroid_k,
    uniform_matroid_rank,
)
from .core import MinorSpec, minor
from .errors import (
    BadEmptySetValue,
    BadParameters,
    BFMLError,
    SchemaError,
    UndefinedMinor,
    UnknownTheorem,
)
from .harness import THEOREMS, theorem_ids, verify_theorem
from .io import dumps, function_to_document, parse_function, parse_rank, serialize_function, subset_key
from .minors import certify_excluded_minor, has_minor_isomorphic, search_excluded_minors
from .rank import RankValue, from_rank_function, rank, rank_function

EXIT_OK, EXIT_ERROR, EXIT_USAGE, EXIT_SCHEMA, EXIT_UNDEFINED, EXIT_COUNTEREXAMPLE = 0, 1, 2, 3, 4, 5


class UsageError(BFMLError):
    pass


def _read(path: str) -> bytes:
    if path == "-":
        return sys.stdin.buffer.read()
    with open(path, "rb") as fh:
        return fh.read()


def _labels(text: Optional[str]) -> list[str]:
    if not text:
        return []
    return [x.strip() for x in text.split(",") if x.strip()]


def _grid(text: str) -> list[Fraction]:
    try:
        return [Fraction(x.strip()) for x in text.split(",") if x.strip()]
    except (ValueError, ZeroDivisionError):
        raise UsageError("--grid must be a comma-separated list of rationals, got %r" % text) from None


def _class_id(args) -> ClassId:
    return ClassId.parse(args.cls, args.k)


def _emit(args, doc: dict, text: str) -> None:
    if args.json:
        sys.stdout.write(dumps(doc))
    else:
        sys.stdout.write(text.rstrip("\n") + "\n")


def _rank_entry(v: RankValue) -> dict:
    return {"ratio": str(v.ratio), "log2": v.integer_log, "approx": round(v.log2(), 6)}


# ---------------------------------------------------------------- commands


def cmd_classify(args) -> int:
    f = parse_function(_read(args.file))
    if args.cls:
        classes = [_class_id(args)]
    else:
        classes = [STABLE, RANKABLE, LINEAR, MATROIDAL]
    results = []
    lines = []
    for cls in classes:
        v = class_violations(f, cls)
        verdict = "NotInClass" if v else "InClass"
        results.append({"class": str(cls), "verdict": verdict, "violations": [x.to_dict() for x in v]})
        lines.append("%-16s %s" % (str(cls), verdict))
        for x in v:
            detail = ", ".join("%s=%s" % kv for kv in sorted(x.to_dict()["detail"].items()))
            lines.append("    %s at {%s}%s%s" % (x.axiom, ",".join(x.subset),
                                                  " elements {%s}" % ",".join(x.elements) if x.elements else "",
                                                  " (%s)" % detail if detail else ""))
    doc = {"classes": results}
    if not args.cls:
        k = least_polymatroid_k(f)
        doc["least_polymatroid_k"] = k
        lines.append("least polymatroid k: %s" % ("none" if k is None else k))
    _emit(args, doc, "\n".join(lines))
    return EXIT_OK


def cmd_rank(args) -> int:
    f = parse_function(_read(args.file))
    if args.subset is not None:
        subset = _labels(args.subset)
        v = rank(f, subset)
        doc = {"subset": subset_key(subset), **_rank_entry(v)}
        text = "Q({%s}) = %s  (ratio %s, ~%.6f)" % (",".join(sorted(subset)), v, v.ratio, v.log2())
        _emit(args, doc, text)
        return EXIT_OK
    rf = rank_function(f)
    entries = {}
    lines = []
    for m, v in enumerate(rf.values):
        key = subset_key(f.subset(m))
        entries[key] = _rank_entry(v)
    for key in sorted(entries, key=lambda k: (len(_labels(k)), k)):
        e = entries[key]
        lines.append("{%s}: %s  (ratio %s, ~%.6f)" % (key, e["log2"] if e["log2"] is not None else "log2(%s)" % e["ratio"],
                                                      e["ratio"], e["approx"]))
    _emit(args, {"ground_set": list(f.ground_set), "ranks": entries}, "\n".join(lines))
    return EXIT_OK


def _write_function(args, f) -> None:
    text = serialize_function(f)
    if getattr(args, "output", None):
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_minor(args) -> int:
    f = parse_function(_read(args.file))
    spec = MinorSpec(_labels(args.contract), _labels(args.delete))
    _write_function(args, minor(f, spec))
    return EXIT_OK


def cmd_from_rank(args) -> int:
    gs, values = parse_rank(_read(args.file))
    _write_function(args, from_rank_function(gs, values))
    return EXIT_OK


def _parse_matrix(text: str) -> list[str]:
    rows = [line.strip() for line in text.splitlines() if line.strip() and not line.lstrip().startswith("#")]
    for r in rows:
        if set(r) - {"0", "1"}:
            raise SchemaError("matrix row %r must contain only 0 and 1" % r)
    if not rows:
        raise SchemaError("matrix file is empty")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise SchemaError("matrix rows have different lengths")
    return ["".join(r[j] for r in rows) for j in range(width)]


def _parse_edges(text: str) -> list[tuple[str, str]]:
    edges = []
    for no, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise SchemaError("edge file line %d: expected 'u v', got %r" % (no, line))
        edges.append((parts[0], parts[1]))
    if not edges:
        raise SchemaError("edge file has no edges")
    return edges


def cmd_from_matroid(args) -> int:
    labels = _labels(args.labels) or None
    if args.uniform:
        try:
            r, n = (int(x) for x in args.uniform.split(","))
        except ValueError:
            raise UsageError("--uniform expects r,n") from None
        m = uniform_matroid_rank(r, n, labels)
    elif args.gf2:
        m = gf2_matroid_rank(_parse_matrix(_read(args.gf2).decode()), labels)
    else:
        m = graphic_matroid_rank(_parse_edges(_read(args.graphic).decode()), labels)
    _write_function(args, from_rank_function(m))
    return EXIT_OK


def cmd_find_minor(args) -> int:
    host = parse_function(_read(args.file))
    pattern = parse_function(_read(args.pattern))
    w = has_minor_isomorphic(host, pattern)
    if w is None:
        _emit(args, {"witness": None}, "none")
        return EXIT_OK
    d = w.to_dict()
    text = "contract {%s} delete {%s}; map %s" % (
        ",".join(d["contract"]), ",".join(d["delete"]),
        ", ".join("%s->%s" % kv for kv in d["bijection"].items()))
    _emit(args, {"witness": d}, text)
    return EXIT_OK


def cmd_certify(args) -> int:
    f = parse_function(_read(args.file))
    cert = certify_excluded_minor(f, _class_id(args))
    lines = ["%s: %s" % (cert.class_id, cert.verdict)]
    for v in cert.minors:
        lines.append("  %s %s: %s" % (v.operation, v.element, v.status))
    for x in cert.violations:
        lines.append("  violation %s at {%s}" % (x.axiom, ",".join(x.subset)))
    _emit(args, cert.to_dict(), "\n".join(lines))
    return EXIT_OK


def cmd_search(args) -> int:
    found = search_excluded_minors(_class_id(args), args.order, _grid(args.grid))
    docs = [function_to_document(f) for f in found]
    lines = ["%d canonical excluded minor(s)" % len(found)]
    lines += ["  (%s)" % ", ".join(str(v) for v in f.table) for f in found]
    _emit(args, {"class": str(_class_id(args)), "order": args.order, "found": docs}, "\n".join(lines))
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.list or not args.theorem:
        for tid in theorem_ids():
            print("%-26s %s" % (tid, THEOREMS[tid].title))
        return EXIT_OK
    params = {"order": args.order, "k": args.k, "seed": args.seed, "samples": args.samples}
    if args.grid is not None:
        params["grid"] = [str(v) for v in _grid(args.grid)]
    defaults = THEOREMS[args.theorem].defaults if args.theorem in THEOREMS else {}
    # flags the theorem does not take are ignored rather than rejected
    params = {k: v for k, v in params.items() if v is not None and k in defaults}
    report = verify_theorem(args.theorem, params)
    text = "%s: %s, %d instances, %d counterexample(s)" % (
        report.theorem_id, "PASS" if report.ok else "FAIL", report.instances_checked, len(report.counterexamples))
    if args.timing:
        text += " in %.2fs" % report.wall_time
    for c in report.counterexamples[:10]:
        text += "\n  %s: %s" % (c["reason"], json.dumps(c["case"], sort_keys=True))
    _emit(args, report.to_dict(timing=args.timing), text)
    return EXIT_OK if report.ok else EXIT_COUNTEREXAMPLE


# ---------------------------------------------------------------- parser


def _add_class(p, required: bool) -> None:
    p.add_argument("--class", dest="cls", required=required,
                   help="stable, rankable, linear, matroidal or polymatroidal (with --k)")
    p.add_argument("--k", type=int, help="k for the polymatroidal class (default 2)")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")

    parser = argparse.ArgumentParser(prog="bfml", description="Binary functions, their minors and rank transforms.")
    parser.add_argument("--version", action="version", version="%(prog)s " + __version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", parents=[common], help="class membership with violation witnesses")
    p.add_argument("file")
    _add_class(p, False)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("rank", parents=[common], help="rank transform, exact")
    p.add_argument("file")
    p.add_argument("--subset", help="comma-separated labels; whole table if omitted")
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("minor", help="f/C\\D as a function document")
    p.add_argument("file")
    p.add_argument("--contract", default="")
    p.add_argument("--delete", default="")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_minor)

    p = sub.add_parser("from-rank", help="inverse rank transform of a rank document")
    p.add_argument("file")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_from_rank)

    p = sub.add_parser("from-matroid", help="binary function of a matroid rank oracle")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--uniform", metavar="R,N")
    g.add_argument("--gf2", metavar="MATRIXFILE", help="rows of 0/1, one column per element")
    g.add_argument("--graphic", metavar="EDGEFILE", help="one 'u v' pair per line")
    p.add_argument("--labels", help="comma-separated element labels")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_from_matroid)

    p = sub.add_parser("find-minor", parents=[common], help="a minor of FILE isomorphic to the pattern")
    p.add_argument("file")
    p.add_argument("--pattern", required=True)
    p.set_defaults(func=cmd_find_minor)

    p = sub.add_parser("certify", parents=[common], help="excluded-minor certificate")
    p.add_argument("file")
    _add_class(p, True)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("search", parents=[common], help="excluded minors on a value grid")
    _add_class(p, True)
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--grid", required=True, help="comma-separated rationals, e.g. -1,0,1/2,2")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("verify", parents=[common], help="run a theorem check")
    p.add_argument("theorem", nargs="?")
    p.add_argument("--list", action="store_true")
    p.add_argument("--order", type=int)
    p.add_argument("--grid")
    p.add_argument("--k", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--samples", type=int)
    p.add_argument("--timing", action="store_true", help="include wall time (breaks byte-identical output)")
    p.set_defaults(func=cmd_verify)
    return parser


def _glue_negative_values(argv: Sequence[str]) -> list[str]:
    # argparse would read "--grid -1,0,1" as two options
    out = []
    it = iter(argv)
    for a in it:
        if a in ("--grid", "--uniform"):
            nxt = next(it, None)
            if nxt is not None and nxt.startswith("-") and nxt[1:2].isdigit():
                out.append("%s=%s" % (a, nxt))
                continue
            out.append(a)
            if nxt is not None:
                out.append(nxt)
            continue
        out.append(a)
    return out


def run_command(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    argv = _glue_negative_values(sys.argv[1:] if argv is None else list(argv))
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (SchemaError, BadEmptySetValue) as exc:
        print("schema error: %s" % exc, file=sys.stderr)
        return EXIT_SCHEMA
    except UndefinedMinor as exc:
        print("undefined minor: %s" % exc, file=sys.stderr)
        return EXIT_UNDEFINED
    except (UsageError, UnknownTheorem, BadParameters) as exc:
        print("usage error: %s" % exc, file=sys.stderr)
        return EXIT_USAGE
    except BFMLError as exc:
        print("error: %s: %s" % (type(exc).__name__, exc), file=sys.stderr)
        return EXIT_ERROR
    except ValueError as exc:
        print("usage error: %s" % exc, file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_ERROR


def main() -> None:
    sys.exit(run_command())


if __name__ == "__main__":
    main()
