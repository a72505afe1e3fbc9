"""hecke-cells: command-line driver for KL bases, p-cells and their verifications."""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

from . import __version__
from .canonical import builtin_table, load_table
from .cells import CellDecomposition, cells
from .cellular import (
    build_cell_datum, rs_cross_check, struct_coeff_independence, verify_axioms, verify_orders, verify_property_A,
)
from .characters import irreducible_characters
from .coxeter import build_system, load_cartan, preset
from .errors import (
    HeckeCellsError, InfiniteGroup, MalformedCartan, MalformedDocument, MissingTable, NonUnitriangular,
    UnknownElement, UnsupportedType, ValidationFailed,
)
from .hecke import kl_basis
from .perron import (
    EIGEN_TOL, POWER_MAX_ITER, POWER_RESIDUAL, WeightVector, conjecture_check, ej_idempotent, families,
    perron_data, special_module,
)

EXIT_OK = 0
EXIT_BUILD = 2
EXIT_VALIDATION = 3
EXIT_FAILED = 4
EXIT_UNSUPPORTED = 5

VERIFIERS = ("axioms", "property-a", "orders", "independence", "conjecture", "perron")
FORMATS = ("json", "csv", "dot")

DEFAULTS = {
    "system": None, "cartan": None, "table": None, "p": "kl", "weights": "uniform", "seed": 0,
    "out": "hecke-cells-out", "format": "json", "tol": EIGEN_TOL, "jobs": 1,
}


@dataclass
class RunConfig:
    system: str | None
    cartan: str | None
    table: str | None
    p: int
    weights: str
    seed: int
    out: Path
    formats: tuple[str, ...]
    tol: float
    jobs: int
    extra: dict = field(default_factory=dict)

    def header(self, table=None) -> dict:
        return {
            "tool": f"hecke-cells {__version__}",
            "system": self.system or self.cartan,
            "p": self.p,
            "table": self.table or ("built-in" if table is not None else None),
            "table_provenance": getattr(table, "provenance", None),
            "weights": self.weights if self.weights != "random" else f"random:{self.seed}",
            "tolerances": {"eigen": self.tol, "power_residual": POWER_RESIDUAL, "power_max_iter": POWER_MAX_ITER},
        }


class _Usage(Exception):
    pass


def _parse_p(value) -> int:
    if isinstance(value, int):
        return value
    text = str(value).strip().lower()
    if text in ("kl", "0"):
        return 0
    try:
        return int(text)
    except ValueError:
        raise _Usage(f"--p must be 'kl' or a prime, got {value!r}") from None


def make_config(args: argparse.Namespace) -> RunConfig:
    merged = dict(DEFAULTS)
    if args.config:
        try:
            with open(args.config) as fh:
                file_cfg = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise _Usage(f"cannot read config {args.config}: {exc}") from exc
        unknown = set(file_cfg) - set(DEFAULTS)
        if unknown:
            raise _Usage(f"unknown config keys: {sorted(unknown)}")
        merged.update(file_cfg)
    for key in DEFAULTS:
        value = getattr(args, key, None)
        if value is not None:
            merged[key] = value
    if not merged["system"] and not merged["cartan"]:
        raise _Usage("one of --system or --cartan is required")
    formats = merged["format"]
    if isinstance(formats, str):
        formats = [f.strip() for f in formats.split(",") if f.strip()]
    bad = [f for f in formats if f not in FORMATS]
    if bad:
        raise _Usage(f"unknown format(s) {bad}; choose from {FORMATS}")
    tol = float(merged["tol"])
    jobs = int(merged["jobs"])
    if tol <= 0:
        raise _Usage("--tol must be positive")
    if jobs < 1:
        raise _Usage("--jobs must be at least 1")
    return RunConfig(merged["system"], merged["cartan"], merged["table"], _parse_p(merged["p"]),
                     str(merged["weights"]), int(merged["seed"]), Path(merged["out"]), tuple(formats), tol, jobs)


# -- pipeline pieces -------------------------------------------------------------

def _system(cfg: RunConfig):
    spec = load_cartan(cfg.cartan) if cfg.cartan else preset(cfg.system)
    return build_system(spec)


def _table(cfg: RunConfig, W):
    kl = kl_basis(W)
    if cfg.table:
        table = load_table(cfg.table, W, kl=kl)
    else:
        table = builtin_table(W, cfg.p, kl=kl)
    table.ensure_validated()
    return table


def _weights(cfg: RunConfig, W) -> WeightVector:
    if cfg.weights == "uniform":
        return WeightVector.uniform(W)
    if cfg.weights == "random" or cfg.weights.startswith("random:"):
        seed = int(cfg.weights.split(":", 1)[1]) if ":" in cfg.weights else cfg.seed
        return WeightVector.random(W, seed)
    return WeightVector.from_file(W, cfg.weights)


def _write_json(path: Path, doc) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    return path


def _write_text(path: Path, text: str) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)
    return path


def _executor(cfg: RunConfig):
    return ThreadPoolExecutor(max_workers=cfg.jobs) if cfg.jobs > 1 else None


def _map(cfg: RunConfig, fn: Callable, items):
    """Ordered map, threaded when --jobs > 1; results join by input position."""
    ex = _executor(cfg)
    if ex is None:
        return [fn(x) for x in items]
    with ex:
        return list(ex.map(fn, items))


# -- commands ----------------------------------------------------------------------

def cmd_kl(cfg: RunConfig) -> int:
    W = _system(cfg)
    kl = kl_basis(W, eager=True)
    doc = {
        "header": cfg.header(),
        "order": W.order,
        "generators": list(W.labels),
        "elements": [kl.to_json(w) for w in range(W.order)],
    }
    path = _write_json(cfg.out / "kl.json", doc)
    print(f"{cfg.system or cfg.cartan}: |W| = {W.order}, KL basis written to {path}")
    return EXIT_OK


def _decompositions(table) -> dict[str, CellDecomposition]:
    return {side: cells(table, side) for side in ("left", "right", "two-sided")}


def cmd_cells(cfg: RunConfig) -> int:
    W = _system(cfg)
    table = _table(cfg, W)
    decs = _decompositions(table)
    doc = {"header": cfg.header(table), "decompositions": {k: d.to_json() for k, d in decs.items()}}
    if W.is_type_a:
        doc["rs_cross_check"] = rs_cross_check(table, decs["left"], decs["right"], decs["two-sided"]).to_json()
    if table.p != 0 or table.corrected:
        # the Kazhdan-Lusztig condensations, for side-by-side inspection
        kl_table = builtin_table(W, 0, kl=table.kl).ensure_validated()
        doc["kl_reference"] = {k: d.to_json() for k, d in _decompositions(kl_table).items()}
    written = []
    if "json" in cfg.formats:
        written.append(_write_json(cfg.out / "cells.json", doc))
    if "dot" in cfg.formats:
        for side, d in decs.items():
            written.append(_write_text(cfg.out / f"cells_{side}.dot", d.to_dot()))
    if "csv" in cfg.formats:
        buf = io.StringIO()
        wr = csv.writer(buf, lineterminator="\n")
        wr.writerow(["side", "cell", "members"])
        for side, d in decs.items():
            for i, c in enumerate(d.cells):
                wr.writerow([side, i, " ".join(W.name(x) for x in c)])
        written.append(_write_text(cfg.out / "cells.csv", buf.getvalue()))
    print(f"{'side':<10} {'cells':>6}")
    for side, d in decs.items():
        print(f"{side:<10} {len(d):>6}")
    if "rs_cross_check" in doc:
        print(f"RS fibers agree: {doc['rs_cross_check']['passed']}")
    for p in written:
        print(f"wrote {p}")
    if "rs_cross_check" in doc and not doc["rs_cross_check"]["passed"]:
        return EXIT_FAILED
    return EXIT_OK


def _perron_report(cfg: RunConfig, table, decs, weights) -> dict:
    W = table.system
    left, two = decs["left"], decs["two-sided"]
    try:
        chars = irreducible_characters(W)
    except UnsupportedType:
        chars = None

    def per_cell(c):
        J = two.cells[two.cell_of[c[0]]]
        pd = perron_data(c, table, weights, restrict_to=J)
        entry = pd.to_json(W)
        entry["two_sided_cell"] = two.cell_of[c[0]]
        if chars is not None:
            sm = special_module(c, table, weights, chars, cfg.tol)
            entry["special"] = sm.label
            entry["multiplicities"] = {k: v for k, v in sm.multiplicities.items() if v}
        return entry

    def per_J(J):
        return ej_idempotent(J, table, weights, left, two, cfg.tol).to_json(W)

    cell_entries = _map(cfg, per_cell, left.cells)
    J_entries = _map(cfg, per_J, two.cells)
    fams = None
    if chars is not None:
        fams = {str(j): sorted(f) for j, f in families(table, chars, two).items()}
    passed = all(e["ok"] for e in J_entries)
    witnesses = [{"J": e["J"], "idempotency_residual": e["idempotency_residual"],
                  "offdiagonal_residual": e["offdiagonal_residual"], "block_residual": e["block_residual"],
                  "positive": e["positive"]} for e in J_entries if not e["ok"]]
    return {"name": "perron", "passed": passed, "cells": cell_entries, "two_sided": J_entries,
            "families": fams, "witnesses": witnesses}


def _perron_csv(report: dict) -> str:
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(["cell", "lambda", "L_C", "family"])
    fams = report.get("families") or {}
    for e in report["cells"]:
        fam = fams.get(str(e["two_sided_cell"]), [])
        wr.writerow([" ".join(e["members"]), repr(e["lambda"]), e.get("special", ""), " ".join(fam)])
    return buf.getvalue()


def cmd_verify(cfg: RunConfig, which: str) -> int:
    W = _system(cfg)
    table = _table(cfg, W)
    weights = _weights(cfg, W)
    selected = VERIFIERS if which == "all" else (which,)
    type_a_only = {"axioms", "orders", "independence"}
    if which != "all" and which in type_a_only and not W.is_type_a:
        raise UnsupportedType(f"'{which}' is only available for symmetric groups")
    decs = _decompositions(table)
    results: dict[str, dict] = {}
    for name in selected:
        if name in type_a_only and not W.is_type_a:
            results[name] = {"name": name, "passed": True, "skipped": "type A only"}
            continue
        if name == "axioms":
            results[name] = verify_axioms(build_cell_datum(table), table, decs["two-sided"]).to_json()
        elif name == "property-a":
            results[name] = verify_property_A(table, decs["left"], decs["right"], decs["two-sided"]).to_json()
        elif name == "orders":
            results[name] = verify_orders(table, two_sided=decs["two-sided"]).to_json()
        elif name == "independence":
            results[name] = struct_coeff_independence(table, left=decs["left"]).to_json()
        elif name == "conjecture":
            ex = _executor(cfg)
            try:
                results[name] = conjecture_check(table, weights, cfg.tol, decs["left"], decs["two-sided"],
                                                 executor=ex)
            finally:
                if ex is not None:
                    ex.shutdown()
        elif name == "perron":
            results[name] = _perron_report(cfg, table, decs, weights)
    doc = {"header": cfg.header(table), "results": results,
           "passed": all(r["passed"] for r in results.values())}
    path = _write_json(cfg.out / f"verify_{which}.json", doc)
    if "perron" in results and "csv" in cfg.formats:
        _write_text(cfg.out / "perron.csv", _perron_csv(results["perron"]))
    print(f"{'check':<14} {'result':>8}")
    for name, r in results.items():
        status = "skipped" if r.get("skipped") else ("pass" if r["passed"] else "FAIL")
        print(f"{name:<14} {status:>8}")
    print(f"report: {path}")
    if not doc["passed"]:
        first = next(r for r in results.values() if not r["passed"])
        wit = (first.get("witnesses") or [None])[0]
        print(f"first failure in '{first.get('name')}': {json.dumps(wit, sort_keys=True)}", file=sys.stderr)
        print(f"witness report: {path}", file=sys.stderr)
        return EXIT_FAILED
    return EXIT_OK


# -- argument parsing -------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--system", help="preset name such as A3, B2, B3")
    common.add_argument("--cartan", help="JSON file with a Cartan matrix")
    common.add_argument("--table", help="p-canonical table JSON")
    common.add_argument("--p", help="'kl' (default) or a prime; a prime without --table uses a built-in table")
    common.add_argument("--weights", help="uniform (default), random, random:SEED or a JSON file of weights")
    common.add_argument("--seed", type=int, help="seed for --weights random")
    common.add_argument("--out", help="output directory for reports")
    common.add_argument("--format", help="comma separated: json, csv, dot")
    common.add_argument("--tol", type=float, help="tolerance for numerical checks")
    common.add_argument("--jobs", type=int, help="worker threads for per-cell tasks")
    common.add_argument("--config", help="JSON config file; flags take precedence")

    parser = argparse.ArgumentParser(prog="hecke-cells", description=__doc__)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("kl", parents=[common], help="write the Kazhdan-Lusztig basis")
    sub.add_parser("cells", parents=[common], help="left, right and two-sided cells")
    v = sub.add_parser("verify", parents=[common], help="run verifications")
    v.add_argument("which", choices=VERIFIERS + ("all",))
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = make_config(args)
        if args.command == "kl":
            return cmd_kl(cfg)
        if args.command == "cells":
            return cmd_cells(cfg)
        return cmd_verify(cfg, args.which)
    except _Usage as exc:
        print(f"hecke-cells: {exc}", file=sys.stderr)
        return EXIT_BUILD
    except UnsupportedType as exc:
        print(f"hecke-cells: unsupported: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except ValidationFailed as exc:
        print(f"hecke-cells: table validation failed: {exc}", file=sys.stderr)
        if exc.report is not None:
            for c in exc.report.failures():
                print(f"  {c.name}: {c.witnesses[:3]}", file=sys.stderr)
        return EXIT_VALIDATION
    except (MalformedCartan, InfiniteGroup, MalformedDocument, UnknownElement, NonUnitriangular,
            MissingTable, OSError, KeyError, ValueError) as exc:
        print(f"hecke-cells: build error: {exc}", file=sys.stderr)
        return EXIT_BUILD
    except HeckeCellsError as exc:
        print(f"hecke-cells: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
