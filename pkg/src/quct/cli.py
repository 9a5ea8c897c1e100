"""quct: spectra and invariants of quadratic unitary Cayley graphs.

    quct report <spec> [--method closed|oracle|both] [--format table|json|csv]
    quct survey --max-order N
    quct verify [<spec> | --max-order N]

Exit codes: 0 ok, 1 verification failure, 2 parse error, 3 unsupported
ring class, 4 size cap exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass

from . import report as rp
from .errors import (
    EvenCharacteristicUnsupported,
    ParseError,
    SizeCapExceeded,
    UnsupportedRingClass,
)
from .rings import parse_ring_spec, size_cap

EXIT_OK, EXIT_VERIFY, EXIT_PARSE, EXIT_UNSUPPORTED, EXIT_CAP = 0, 1, 2, 3, 4

REPORT_CSV_COLUMNS = [
    "ring", "order", "classification", "degree", "energy", "energy_approx",
    "hyperenergetic", "hyperenergetic_classifier", "ramanujan", "ramanujan_classifier",
    "triangles", "triangles_oracle", "moments", "moments_oracle", "diameter",
    "tensor_decomposes", "spectrum_match",
]
VERIFY_CSV_COLUMNS = ["ring", "invariant", "status"]


@dataclass
class CliConfig:
    command: str
    spec: str | None = None
    method: str = rp.BOTH
    format: str = "table"
    k_max: int = 4
    cap: int | None = None
    max_order: int | None = None
    out: str | None = None
    jobs: int = 1


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, list):
        return ";".join(_cell(x) for x in v)
    return str(v)


def _csv(rows: list[dict], columns: list[str]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([_cell(row.get(c)) for c in columns])
    return buf.getvalue()


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def _table(rows: list[list[str]]) -> str:
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    return "".join(
        "  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() + "\n" for r in rows
    )


def _emit(text: str, cfg: CliConfig) -> None:
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# -- report ------------------------------------------------------------------

def _report_row(data: dict) -> dict:
    energy = data["energy"] or {}
    hyper = data["hyperenergetic"] or {}
    rama = data["ramanujan"] or {}
    return {
        "ring": data["ring"],
        "order": data["order"],
        "classification": data["classification"],
        "degree": data["degree"],
        "energy": energy.get("text"),
        "energy_approx": energy.get("approx"),
        "hyperenergetic": hyper.get("computed"),
        "hyperenergetic_classifier": hyper.get("classifier"),
        "ramanujan": rama.get("computed"),
        "ramanujan_classifier": rama.get("classifier"),
        "triangles": data["triangles"].get("closed"),
        "triangles_oracle": data["triangles"].get("oracle"),
        "moments": data["moments"].get("closed"),
        "moments_oracle": data["moments"].get("oracle"),
        "diameter": data["diameter"],
        "tensor_decomposes": data["tensor_decomposes"],
        "spectrum_match": all(m["pass"] for m in data["matches"]) if data["matches"] else None,
    }


def render_report(data: dict, fmt: str) -> str:
    if fmt == "json":
        return _json(data)
    row = _report_row(data)
    if fmt == "csv":
        return _csv([row], REPORT_CSV_COLUMNS)
    lines = [[k, _cell(row[k])] for k in REPORT_CSV_COLUMNS if row[k] is not None]
    out = _table(lines)
    if data["spectrum"]:
        spec_rows = [["eigenvalue", "approx", "multiplicity"]]
        from .qext import QuadExt

        for e in data["spectrum"]:
            spec_rows.append([str(QuadExt.from_json(e["value"])), f"{e['approx']:.10g}", str(e["multiplicity"])])
        out += "\nspectrum (closed form)\n" + _table(spec_rows)
    elif data["numeric_spectrum"]:
        spec_rows = [["approx", "multiplicity"]]
        spec_rows += [[f"{e['approx']:.10g}", str(e["multiplicity"])] for e in data["numeric_spectrum"]]
        out += "\nspectrum (character sums)\n" + _table(spec_rows)
    if data["matches"]:
        m_rows = [["oracle", "max_dev", "tol", "pass"]]
        m_rows += [[m["method"], f"{m['max_dev']:.3e}", f"{m['tol']:g}", _cell(m["pass"])] for m in data["matches"]]
        out += "\nmatch\n" + _table(m_rows)
    return out


def cmd_report(cfg: CliConfig) -> int:
    ring = parse_ring_spec(cfg.spec)
    rep = rp.build_report(ring, cfg.method, cfg.k_max, cfg.cap)
    _emit(render_report(rep.to_json(), cfg.format), cfg)
    if cfg.method == rp.BOTH and not rep.sources["closed"]:
        print(f"error: {ring.canonical} is {ring.classification}; only oracle fields were emitted", file=sys.stderr)
        return EXIT_UNSUPPORTED
    return EXIT_OK


# -- survey ------------------------------------------------------------------

def render_survey(rows: list[dict], fmt: str) -> str:
    if fmt == "json":
        return _json(rows)
    if fmt == "csv":
        return _csv(rows, rp.SURVEY_COLUMNS)
    cols = [c for c in rp.SURVEY_COLUMNS if c != "energy"]
    return _table([cols] + [[_cell(r[c]) for c in cols] for r in rows])


def cmd_survey(cfg: CliConfig) -> int:
    rows = rp.survey(cfg.max_order, cfg.method, cfg.cap, cfg.jobs)
    _emit(render_survey(rows, cfg.format), cfg)
    return EXIT_OK


# -- verify ------------------------------------------------------------------

def cmd_verify(cfg: CliConfig) -> int:
    if cfg.spec is not None:
        rings = [parse_ring_spec(cfg.spec)]
    else:
        rings = rp.verify_survey_rings(cfg.max_order, cfg.cap)
    results = rp.verify_rings(rings, cfg.cap)
    failures = [
        {"ring": name, **c.to_json()} for name, checks in results for c in checks if c.passed is False
    ]
    status = "FAIL" if failures else "PASS"
    n_checks = sum(len(c) for _, c in results)
    if cfg.format == "json":
        text = _json({
            "status": status,
            "rings": [{"ring": name, "checks": [c.to_json() for c in checks]} for name, checks in results],
            "failures": failures,
        })
    elif cfg.format == "csv":
        rows = [{"ring": name, "invariant": c.name, "status": c.to_json()["status"]}
                for name, checks in results for c in checks]
        text = _csv(rows, VERIFY_CSV_COLUMNS)
    else:
        rows = [["ring", "invariant", "status"]]
        rows += [[name, c.name, c.to_json()["status"]] for name, checks in results for c in checks]
        text = _table(rows) + f"\n{len(results)} rings, {n_checks} checks, {len(failures)} failed: {status}\n"
        if failures:
            text += _json({"status": status, "failures": failures})
    _emit(text, cfg)
    return EXIT_VERIFY if failures else EXIT_OK


# -- entry point -------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--method", choices=[rp.CLOSED, rp.ORACLE, rp.BOTH], default=rp.BOTH)
    common.add_argument("--format", choices=["table", "json", "csv"], default="table")
    common.add_argument("--k-max", type=int, default=4, help="highest spectral moment to report")
    common.add_argument("--cap", type=int, default=None, help="size cap (default $QUCT_CAP or 100000)")
    common.add_argument("--out", default=None, help="write output to this file")

    parser = argparse.ArgumentParser(prog="quct", description="Quadratic unitary Cayley graph spectra and invariants.")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("report", parents=[common], help="invariants of one ring")
    p.add_argument("spec", help='ring spec, e.g. Z45, "F9*F5", "F5[x]/(x^2)*Z7"')
    p = sub.add_parser("survey", parents=[common], help="one row per supported ring up to an order")
    p.add_argument("--max-order", type=int, required=True)
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    p = sub.add_parser("verify", parents=[common], help="closed forms against the oracles")
    p.add_argument("spec", nargs="?", default=None)
    p.add_argument("--max-order", type=int, default=None)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else EXIT_OK
    cfg = CliConfig(
        command=args.command,
        spec=getattr(args, "spec", None),
        method=args.method,
        format=args.format,
        k_max=args.k_max,
        cap=size_cap(args.cap),
        max_order=getattr(args, "max_order", None),
        out=args.out,
        jobs=getattr(args, "jobs", 1),
    )
    if cfg.command == "verify" and (cfg.spec is None) == (cfg.max_order is None):
        print("error: verify needs exactly one of <spec> or --max-order", file=sys.stderr)
        return EXIT_PARSE
    if cfg.k_max < 1:
        print("error: --k-max must be >= 1", file=sys.stderr)
        return EXIT_PARSE
    handler = {"report": cmd_report, "survey": cmd_survey, "verify": cmd_verify}[cfg.command]
    try:
        return handler(cfg)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (UnsupportedRingClass, EvenCharacteristicUnsupported) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except SizeCapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP


if __name__ == "__main__":
    sys.exit(main())
