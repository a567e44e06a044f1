"""Command line front end.

Every command writes a schema-versioned report.  ``scan`` and
``enumerate-lines`` stream JSON lines (header, one record per item,
summary); the others write a single JSON document.  Exit codes: 0 success,
2 usage error, 3 failed mathematical check, 4 internal inconsistency.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor

import jsonschema

from . import __version__
from .algebra import FieldSpec, RationalCurveMap
from .cigeom import CIModel, freeness_verdict
from .construct import enumerate_lines, iter_profiles, validate_profile, verify_line_instance
from .errors import ContainmentError, FreeCurvesError, ProfileError, SplittingInconsistencyError
from .nodal import random_instance, verify_vanishings

SCHEMA_VERSION = "freecurves.report/1"

EXIT_OK, EXIT_USAGE, EXIT_MATH, EXIT_INTERNAL = 0, 2, 3, 4

_FORM_SCHEMA = {
    "type": "object",
    "required": ["char", "n", "degree", "terms"],
    "properties": {
        "char": {"type": "integer", "minimum": 0},
        "n": {"type": "integer", "minimum": 1},
        "degree": {"type": "integer", "minimum": 0},
        "terms": {
            "type": "array",
            "items": {
                "type": "array",
                "minItems": 2,
                "maxItems": 2,
                "prefixItems": [{"type": "array", "items": {"type": "integer", "minimum": 0}}, {"type": "string"}],
            },
        },
    },
}

_BINARY_SCHEMA = {
    "type": "object",
    "required": ["char", "coeffs"],
    "properties": {
        "char": {"type": "integer", "minimum": 0},
        "degree": {"type": ["integer", "null"]},
        "coeffs": {"type": "array", "items": {"type": "string"}},
    },
}

SPLITTING_INPUT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["model", "curve"],
    "properties": {
        "model": {
            "type": "object",
            "required": ["char", "n"],
            "properties": {
                "char": {"type": "integer", "minimum": 0},
                "n": {"type": "integer", "minimum": 1},
                "F": {"type": "array", "items": _FORM_SCHEMA},
                "G": {"type": "array", "items": _FORM_SCHEMA},
            },
        },
        "curve": {
            "type": "object",
            "required": ["char", "n", "components"],
            "properties": {
                "char": {"type": "integer", "minimum": 0},
                "n": {"type": "integer", "minimum": 1},
                "components": {"type": "array", "minItems": 2, "items": _BINARY_SCHEMA},
            },
        },
    },
}

MODEL_SCHEMA = SPLITTING_INPUT_SCHEMA["properties"]["model"]


class UsageError(Exception):
    pass


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _int_list(text: str) -> list:
    text = text.strip()
    if not text:
        return []
    try:
        return [int(x) for x in text.split(",")]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma separated integers, got {text!r}") from exc


def _int_range(text: str) -> list:
    """``"3"``, ``"1-5"`` or ``"1,3,5"``."""
    text = text.strip()
    if "-" in text:
        lo, hi = text.split("-", 1)
        return list(range(int(lo), int(hi) + 1))
    return _int_list(text)


def _header(args, command: str, inputs: dict) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "tool_version": __version__,
        "command": command,
        "inputs": inputs,
    }


class _Out:
    def __init__(self, args):
        self.fmt = args.format
        self.timing = args.timing
        self.start = time.perf_counter()
        self.fh = open(args.out, "w", encoding="utf-8") if args.out else sys.stdout

    def line(self, text: str):
        self.fh.write(text + "\n")
        self.fh.flush()

    def emit(self, obj: dict, text: str | None = None):
        if self.fmt == "text" and text is not None:
            self.line(text)
        else:
            self.line(_dumps(obj))

    def finish(self, report: dict):
        if self.timing:
            report["wall_time"] = round(time.perf_counter() - self.start, 6)

    def close(self):
        if self.fh is not sys.stdout:
            self.fh.close()


def _field(args, default: int = 5) -> FieldSpec:
    return FieldSpec(default if args.char is None else args.char)


# ---------------------------------------------------------------------------


def _line_record(n, d, db, p):
    try:
        prof = validate_profile(n, d, db, p)
        return verify_line_instance(prof, FieldSpec(p)).to_json()
    except SplittingInconsistencyError:
        raise
    except FreeCurvesError as exc:
        return {"profile": {"n": n, "d": list(d), "d_b": db, "char": p}, "status": "error", "error": str(exc)}


def cmd_verify_line(args, out: _Out) -> int:
    K = _field(args)
    try:
        prof = validate_profile(args.n, args.d, args.db, K.characteristic)
    except ProfileError as exc:
        raise UsageError(str(exc)) from exc
    rec = verify_line_instance(prof, K).to_json()
    report = _header(args, "verify-line", {"n": args.n, "d": args.d, "db": args.db, "char": K.characteristic})
    report["result"] = rec
    ok = rec["status"] == "pass" or (rec["status"] == "wild" and args.allow_wild)
    report["summary"] = {"ok": ok}
    out.finish(report)
    text = f"{rec['status']}: n={args.n} d={args.d} d_b={args.db} p={K.characteristic} splitting={rec['splitting']}"
    out.emit(report, text)
    return EXIT_OK if ok else EXIT_MATH


def cmd_scan(args, out: _Out) -> int:
    chars = args.chars if args.chars is not None else ([args.char] if args.char is not None else [2, 3, 5])
    cells = [(n, d, db, p) for p in chars for (n, d, db) in iter_profiles(args.n, args.l_max, args.db_min)]
    head = _header(args, "scan", {"n": args.n, "l_max": args.l_max, "db_min": args.db_min, "chars": chars})
    out.emit(head, f"# scan of {len(cells)} cells")
    counts = {"pass": 0, "fail": 0, "wild": 0, "error": 0}
    if args.jobs > 1 and cells:
        with ProcessPoolExecutor(args.jobs) as pool:
            records = pool.map(_line_record, *zip(*cells), chunksize=16)
            for rec in records:
                counts[rec["status"]] += 1
                out.emit(rec, _text_cell(rec))
    else:
        for cell in cells:
            rec = _line_record(*cell)
            counts[rec["status"]] += 1
            out.emit(rec, _text_cell(rec))
    summary = {"summary": dict(counts, total=len(cells))}
    out.finish(summary)
    out.emit(summary, "# " + " ".join(f"{k}={v}" for k, v in sorted(summary["summary"].items())))
    return EXIT_OK if counts["fail"] == 0 and counts["error"] == 0 else EXIT_MATH


def _text_cell(rec) -> str:
    p = rec["profile"]
    return f"{rec['status']:5s} n={p['n']} d={p['d']} d_b={p['d_b']} p={p['char']} {rec.get('splitting')}"


def _pointer(err: jsonschema.ValidationError) -> str:
    return "/" + "/".join(str(x) for x in err.absolute_path)


def _load_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc


def _schema_errors(obj, schema) -> list:
    validator = jsonschema.Draft202012Validator(schema)
    errs = sorted(validator.iter_errors(obj), key=lambda e: list(e.absolute_path))
    return [{"pointer": _pointer(e), "message": e.message} for e in errs]


def cmd_splitting(args, out: _Out) -> int:
    obj = _load_json(args.file)
    report = _header(args, "splitting", {"file": args.file})
    errors = _schema_errors(obj, SPLITTING_INPUT_SCHEMA)
    if errors:
        report["error"] = {"kind": "schema", "errors": errors}
        out.emit(report, "\n".join(f"schema error at {e['pointer']}: {e['message']}" for e in errors))
        return EXIT_USAGE
    try:
        X = CIModel.from_json(obj["model"])
        phi = RationalCurveMap.from_json(obj["curve"])
    except (ValueError, KeyError, FreeCurvesError) as exc:
        report["error"] = {"kind": "invalid_input", "message": str(exc)}
        out.emit(report, f"invalid input: {exc}")
        return EXIT_USAGE
    try:
        verdict = freeness_verdict(X, phi)
    except ContainmentError as exc:
        report["error"] = {"kind": "containment", "message": str(exc)}
        out.emit(report, f"containment failure: {exc}")
        return EXIT_MATH
    report["result"] = verdict.to_json()
    out.finish(report)
    st = verdict.splitting.render() if verdict.splitting else "-"
    out.emit(report, f"{verdict.status}: {st}")
    return EXIT_OK


def _nodal_record(seed, rmax, p):
    inst = random_instance(seed, rmax, FieldSpec(p))
    return verify_vanishings(inst).to_json()


def cmd_nodal(args, out: _Out) -> int:
    base = 0 if args.seed is None else args.seed
    p = 101 if args.char is None else args.char
    seeds = [base * 1_000_003 + i for i in range(args.count)]
    if args.jobs > 1 and seeds:
        with ProcessPoolExecutor(args.jobs) as pool:
            records = list(pool.map(_nodal_record, seeds, [args.rmax] * len(seeds), [p] * len(seeds)))
    else:
        records = [_nodal_record(s, args.rmax, p) for s in seeds]
    failures = [r for r in records if not r["passed"]]
    report = _header(args, "nodal", {"count": args.count, "rmax": args.rmax, "seed": base, "char": p})
    report["results"] = records
    report["failures"] = [r["instance"] for r in failures]
    report["summary"] = {"total": len(records), "passed": len(records) - len(failures), "failed": len(failures)}
    out.finish(report)
    out.emit(report, f"nodal: {report['summary']['passed']}/{len(records)} passed")
    return EXIT_OK if not failures else EXIT_MATH


def cmd_enumerate_lines(args, out: _Out) -> int:
    obj = _load_json(args.model)
    errors = _schema_errors(obj, MODEL_SCHEMA)
    if errors:
        report = _header(args, "enumerate-lines", {"model": args.model})
        report["error"] = {"kind": "schema", "errors": errors}
        out.emit(report, "\n".join(f"schema error at {e['pointer']}: {e['message']}" for e in errors))
        return EXIT_USAGE
    X = CIModel.from_json(obj)
    if not X.field.characteristic:
        raise UsageError("line enumeration needs a finite field")
    out.emit(_header(args, "enumerate-lines", {"model": args.model, "max_count": args.max_count}), "# lines")
    found = enumerate_lines(X, args.max_count)
    for L, v in found:
        rec = {"line": L.to_json(), "verdict": v.to_json()}
        out.emit(rec, f"{L}: {v.status} {v.splitting.render() if v.splitting else '-'}")
    summary = {"summary": {"found": len(found)}}
    out.finish(summary)
    out.emit(summary, f"# found {len(found)}")
    return EXIT_OK


# ---------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _common(suppress: bool) -> argparse.ArgumentParser:
    # flags are accepted before or after the subcommand; the subcommand copy
    # must not overwrite values given earlier, hence SUPPRESS defaults there
    dflt = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--char", type=int, default=dflt(None), help="field characteristic (0 for Q)")
    common.add_argument("--seed", type=int, default=dflt(None))
    common.add_argument("--out", default=dflt(None), help="write the report to this file")
    common.add_argument("--format", choices=["json", "text"], default=dflt("json"))
    common.add_argument("--timing", action="store_true", default=dflt(False), help="include wall time (breaks byte-reproducibility)")
    common.add_argument("--jobs", type=int, default=dflt(1), help="worker processes for batch commands")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common(True)
    parser = _Parser(prog="freecurves", description=__doc__.splitlines()[0], parents=[_common(False)])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("verify-line", parents=[common], help="check the explicit line witness of one profile")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=_int_list, default=[], help="equation degrees, e.g. 2,2")
    p.add_argument("--db", type=int, default=1, help="boundary degree")
    p.add_argument("--allow-wild", action="store_true", help="exit 0 for a wild profile")
    p.set_defaults(func=cmd_verify_line)

    p = sub.add_parser("scan", parents=[common], help="run verify-line over a grid of profiles")
    p.add_argument("--n", type=_int_range, default=list(range(1, 6)), help="n values, e.g. 1-5")
    p.add_argument("--l-max", type=int, default=2)
    p.add_argument("--db-min", type=int, default=1)
    p.add_argument("--chars", type=_int_list, default=None, help="characteristics, e.g. 2,3,5")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("splitting", parents=[common], help="freeness verdict for a model and curve file")
    p.add_argument("file")
    p.set_defaults(func=cmd_splitting)

    p = sub.add_parser("nodal", parents=[common], help="verify the vanishings on seeded transform instances")
    p.add_argument("--count", type=int, default=200)
    p.add_argument("--rmax", type=int, default=6)
    p.set_defaults(func=cmd_nodal)

    p = sub.add_parser("enumerate-lines", parents=[common], help="all lines of a model over its prime field")
    p.add_argument("model", help="model JSON file")
    p.add_argument("--max-count", type=int, default=None)
    p.set_defaults(func=cmd_enumerate_lines)
    return parser


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    out = _Out(args)
    try:
        return args.func(args, out)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SplittingInconsistencyError as exc:
        print(f"internal inconsistency: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    finally:
        out.close()


if __name__ == "__main__":
    sys.exit(main())
