"""Command-line interface: ``loopgas <command> ...``."""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from .braided import CategoryData, validate_category
from .catalog import (
    CATALOG,
    bundled_path,
    catalog_entry,
    catalog_names,
    content_hash,
    emit_category,
    load_bundled,
    parse_algebra,
    parse_category,
)
from .entropy import CONJECTURE_TOL, entropy_report, ww_delta
from .errors import LoopGasError, ParseError, Unsupported
from .smat import Classification, classify, gram_spectrum

SCHEMA = 1
ENTROPY_FIELDS = {"SC", "gamma", "Gamma", "delta", "deltaConjecture", "deltaBullet", "deltaCirc", "TEE", "logDsqMueger"}

CONJECTURE_COLUMNS = [
    ("catId", "Cat. ID"),
    ("name", "Name"),
    ("rank", "Rank"),
    ("Dsq", "D²"),
    ("valid", "Valid"),
    ("muegerRank", "rk Müger"),
    ("premodular", "Premodular?"),
    ("pointed", "Pointed?"),
    ("tyLike", "TY?"),
    ("TEE", "TEE"),
    ("logDsqMueger", "log D²_Müger"),
    ("conjectureOk", "Conjecture true?"),
    ("hash", "Hash"),
]

PREMODULAR_MARK = {
    Classification.SYMMETRIC: "Symm.",
    Classification.MODULAR: "Mod.",
    Classification.PROPERLY_PREMODULAR: "✓",
}


class UsageError(LoopGasError):
    exit_code = 1


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _json_default(obj):
    if isinstance(obj, np.generic):
        return obj.item()
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _dumps(obj) -> str:
    return json.dumps(obj, ensure_ascii=False, indent=2, default=_json_default)


def _mark(flag: bool) -> str:
    return "✓" if flag else "✗"


def load_category(arg: str, tol: float) -> CategoryData:
    """A file path, or the name of a bundled category (with or without ``.json``)."""
    path = Path(arg)
    if path.exists():
        return parse_category(path, tol)
    stem = arg[:-5] if arg.endswith(".json") else arg
    if stem in CATALOG:
        return parse_category(bundled_path(stem), tol)
    raise ParseError(f"no such file or bundled category: {arg}")


def _conjecture_fields(data: CategoryData, tol: float, cat_id: str = "-") -> dict:
    valid = validate_category(data, tol).ok
    suite = classify(data, tol)
    delta, ok = ww_delta(data, suite, gram_spectrum(data, suite, tol), CONJECTURE_TOL)
    return {
        "catId": cat_id,
        "name": data.name,
        "rank": data.rank,
        "Dsq": data.ring.Dsq,
        "valid": valid,
        "muegerRank": suite.muegerRank,
        "premodular": PREMODULAR_MARK[suite.classification],
        "pointed": data.ring.is_pointed(tol),
        "tyLike": suite.tyLike,
        "TEE": delta,
        "logDsqMueger": math.log(suite.muegerDsq),
        "conjectureOk": ok,
        "hash": content_hash(data),
    }


def conjecture_row(name: str, tol: float) -> dict:
    """One row of the conjecture table for a bundled category."""
    return _conjecture_fields(load_bundled(name), tol, catalog_entry(name).table_id or "-")


def _convert(obj, base: str):
    if base == "e":
        return obj
    if isinstance(obj, list):
        return [_convert(x, base) for x in obj]
    if isinstance(obj, dict):
        return {
            k: (v / math.log(2) if k in ENTROPY_FIELDS and isinstance(v, float) else _convert(v, base))
            for k, v in obj.items()
        }
    return obj


def _cell(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return _mark(bool(v))
    if isinstance(v, float):
        return f"{v:.3e}" if 0 < abs(v) < 1e-4 else f"{v:.6f}"
    if v is None:
        return "-"
    return str(v)


def _table(rows: list[dict], columns: list[tuple[str, str]]) -> str:
    header = [title for _, title in columns]
    body = [[_cell(r.get(k)) for k, _ in columns] for r in rows]
    widths = [max(len(h), *(len(b[i]) for b in body)) if body else len(h) for i, h in enumerate(header)]
    lines = ["  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip()]
    lines.append("  ".join("-" * w for w in widths))
    lines += ["  ".join(c.ljust(w) for c, w in zip(b, widths)).rstrip() for b in body]
    return "\n".join(lines)


def _csv(rows: list[dict], columns: list[tuple[str, str]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["schema"] + [k for k, _ in columns])
    for r in rows:
        writer.writerow([SCHEMA] + [_csv_cell(r.get(k)) for k, _ in columns])
    return buf.getvalue().rstrip("\n")


def _csv_cell(v):
    if isinstance(v, float):
        return format(v, ".17g")
    if v is None:
        return ""
    return v


def _emit(payload: dict, rows: list[dict], columns, fmt: str, preamble: list[tuple[str, object]] = ()) -> str:
    if fmt == "json":
        return _dumps(payload)
    if fmt == "csv":
        return _csv(rows, columns)
    parts = [f"{k} = {_cell(v)}" for k, v in preamble]
    if rows:
        if parts:
            parts.append("")
        parts.append(_table(rows, columns))
    return "\n".join(parts)


def cmd_validate(args) -> int:
    data = load_category(args.category, args.tol)
    result = data.validation if data.validation is not None else validate_category(data, args.tol)
    rows = [
        {"axiom": c.name, "residual": float(c.residual), "passed": bool(c.passed),
         "worst": None if c.worst is None else str(c.worst)}
        for c in result.checks
    ]
    payload = {"schema": SCHEMA, "command": "validate", "name": data.name, "hash": content_hash(data),
               "ok": result.ok, "checks": rows}
    columns = [("axiom", "Axiom"), ("residual", "Residual"), ("passed", "Pass"), ("worst", "Worst index")]
    print(_emit(payload, rows, columns, args.format, [("name", data.name), ("ok", result.ok)]))
    return 0 if result.ok else 3


def cmd_classify(args) -> int:
    data = load_category(args.category, args.tol)
    data.validation.raise_for_failure()
    suite = classify(data, args.tol)
    row = {
        "name": data.name,
        "hash": content_hash(data),
        "rank": data.rank,
        "Dsq": data.ring.Dsq,
        "classification": suite.classification.value,
        "muegerRank": suite.muegerRank,
        "muegerDsq": suite.muegerDsq,
        "tyLike": suite.tyLike,
        "pointed": data.ring.is_pointed(args.tol),
    }
    payload = {"schema": SCHEMA, "command": "classify", **row}
    if args.format == "table":
        print("\n".join(f"{k} = {_cell(v)}" for k, v in row.items()))
    else:
        print(_emit(payload, [row], [(k, k) for k in row], args.format))
    return 0


BOUNDARY_COLUMNS = [
    ("algebra", "Algebra"),
    ("dA", "d_A"),
    ("deltaBullet", "Δ•"),
    ("deltaCirc", "Δ∘"),
    ("status", "Status"),
    ("method", "Method"),
]


def cmd_tee(args) -> int:
    data = load_category(args.category, args.tol)
    algebras = None
    if args.algebra:
        algebras = [parse_algebra(Path(a), data) for a in args.algebra]
    report = _convert(entropy_report(data, algebras, args.tol).as_dict(), args.log_base)
    report["command"] = "tee"
    report["hash"] = content_hash(data)
    report["logBase"] = args.log_base
    unsupported = any(b["status"] != "ok" for b in report["boundary"])
    if args.format == "json":
        print(_dumps(report))
    elif args.format == "csv":
        rows = [{**b, "name": report["name"], "delta": report["delta"], "conjectureOk": report["conjectureOk"]}
                for b in report["boundary"]]
        cols = [("name", "name"), ("delta", "delta"), ("conjectureOk", "conjectureOk")] + BOUNDARY_COLUMNS
        print(_csv(rows, cols))
    else:
        pre = [
            ("name", report["name"]),
            ("classification", report["classification"]),
            ("S[C]", report["SC"]),
            ("γ", report["gamma"]),
            ("Γ", report["Gamma"]),
            ("δ", report["delta"]),
            ("log D²_Müger", report["deltaConjecture"]),
            ("conjecture", report["conjectureOk"]),
            ("gram method", report["gramMethod"]),
        ]
        print(_emit(report, report["boundary"], BOUNDARY_COLUMNS, "table", pre))
    if unsupported:
        reasons = "; ".join(f'{b["algebra"]}: {b["status"]}: {b["method"]}' for b in report["boundary"] if b["status"] != "ok")
        print(f"error: unsupported boundary entropy ({reasons})", file=sys.stderr)
        return Unsupported.exit_code
    return 0


def cmd_conjecture(args) -> int:
    if args.catalog:
        names = catalog_names()
        if args.jobs > 1:
            with ProcessPoolExecutor(max_workers=args.jobs) as pool:
                rows = list(pool.map(conjecture_row, names, [args.tol] * len(names)))
        else:
            rows = [conjecture_row(n, args.tol) for n in names]
    else:
        if not args.categories:
            raise UsageError("give category files or --catalog")
        rows = []
        for arg in args.categories:
            data = load_category(arg, args.tol)
            data.validation.raise_for_failure()
            rows.append(_conjecture_fields(data, args.tol))
        rows.sort(key=lambda r: r["name"])
    rows = _convert(rows, args.log_base)
    payload = {"schema": SCHEMA, "command": "conjecture", "logBase": args.log_base, "rows": rows}
    print(_emit(payload, rows, CONJECTURE_COLUMNS, args.format))
    return 0 if all(r["conjectureOk"] for r in rows) else 3


def cmd_catalog(args) -> int:
    if args.action == "list":
        rows = [
            {"name": n, "catId": CATALOG[n].table_id or "-", "rank": load_bundled(n).rank,
             "hash": content_hash(load_bundled(n)), "provenance": CATALOG[n].provenance}
            for n in catalog_names()
        ]
        columns = [("name", "Name"), ("catId", "Cat. ID"), ("rank", "Rank"), ("hash", "Hash"), ("provenance", "Provenance")]
        print(_emit({"schema": SCHEMA, "command": "catalog list", "rows": rows}, rows, columns, args.format))
        return 0
    if not args.name:
        raise UsageError("catalog emit needs a name")
    text = emit_category(load_bundled(args.name))
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def _global_flags(parser: argparse.ArgumentParser, suppress: bool) -> None:
    default = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--tol", type=float, default=default(1e-9), help="axiom tolerance (default 1e-9)")
    parser.add_argument("--log-base", choices=["e", "2"], default=default("e"), help="entropy units")
    parser.add_argument("--format", choices=["table", "json", "csv"], default=default("table"))
    parser.add_argument("--jobs", type=int, default=default(1), help="worker processes for catalog runs")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="loopgas", description="Loop-gas entanglement entropy diagnostics for premodular categories.")
    parser.add_argument("--version", action="version", version=f"loopgas {__version__}")
    _global_flags(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        _global_flags(p, suppress=True)
        p.set_defaults(func=func)
        return p

    add("validate", cmd_validate, "axiom residual table").add_argument("category")
    add("classify", cmd_classify, "S-matrix classification").add_argument("category")
    p = add("tee", cmd_tee, "entanglement entropy report")
    p.add_argument("category")
    p.add_argument("--algebra", action="append", help="algebra file (repeatable)")
    p = add("conjecture", cmd_conjecture, "bulk entropy conjecture table")
    p.add_argument("--catalog", action="store_true", help="run every bundled category")
    p.add_argument("categories", nargs="*")
    p = add("catalog", cmd_catalog, "list or emit bundled categories")
    p.add_argument("action", choices=["list", "emit"])
    p.add_argument("name", nargs="?")
    p.add_argument("-o", "--output")
    return parser


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.tol <= 0 or args.jobs < 1:
            raise UsageError("--tol must be positive and --jobs at least 1")
        return args.func(args)
    except LoopGasError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
