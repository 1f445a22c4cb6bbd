#!/usr/bin/env python3
"""
SAILKIT - COMMAND LINE FRONT END
================================

PURPOSE:
--------
One entry point for every computation in the library: continued fractions
and indecomposables of real quadratic fields, Shanks' simplest cubic
fields, units and signature ranks of real biquadratic fields, the
Q(sqrt 5, sqrt p_n) family, polytope geometry, rank bounds, grid scans and
sail coordinate dumps.

SUBCOMMANDS:
-----------
  quad      --d D        cf | convergents | indecomposables | unit | iota
  cubic     --a A        verify [--bruteforce] | iota     (alias: shanks)
  biquad    --d1 --d2    sgnrk [--oracle] | units | usr-bound | iota
  family    --n N        verify [--assume-squarefree]
  geometry  FILE|-       IV, ID, certificate and facets of JSON polytopes
  bounds    --u U | --kitaoka R
  scan      biquad|cubic|family --max M --out FILE.csv [--jobs J]
  iota      --field JSON --strategy bruteforce|cf|sail [--bound N]
  dump-sail --d D        x y per line for plotting

EXIT CODES:
----------
  0  success, every verification check passed
  1  a verification check failed (or a library error)
  2  usage error
  3  a resource cap was hit (box too large, precision exhausted)
  130 interrupted, or a scan worker died

CONCURRENCY:
-----------
scan runs grid cells in a bounded ProcessPoolExecutor driven by asyncio and
writes rows in grid order from the main process. A PID file keeps two scans
from running at once; SIGINT/SIGTERM stop the scan after the current batch.
"""

import argparse
import asyncio
import csv
import json
import logging
import os
import signal
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from concurrent.futures.process import BrokenProcessPool
from contextlib import contextmanager
from fractions import Fraction
from typing import Dict, List, Optional, Sequence

import mpmath

import cfrac
import families
import field_core
import indecomp
import latgeo
import sailconfig
import units
from field_core import Biquadratic, Field, FieldElement, Quadratic, SimplestCubic, make_field
from report_logger import ReportLogger
from sail_errors import IncompleteSailData, Interrupted, NotApplicable, SailkitError, UsageError

logger = logging.getLogger("sailkit")

PID_FILE = "sailkit_scan.pid"

# Global flag for graceful shutdown
shutdown_flag = False


# ---------------------------------------------------------------------------
# Process control
# ---------------------------------------------------------------------------
def signal_handler(signum, frame):
    """Handle shutdown signals gracefully"""
    global shutdown_flag
    signal_name = signal.Signals(signum).name
    logger.info(f"Received {signal_name}, stopping after the current batch...")
    shutdown_flag = True


def _pid_path():
    return sailconfig.LOG_DIR / PID_FILE


def create_pid_file():
    """Create PID file to prevent concurrent scans"""
    path = _pid_path()
    if path.exists():
        try:
            existing_pid = int(path.read_text().strip())
            try:
                os.kill(existing_pid, 0)
                raise UsageError(f"another scan is already running (PID: {existing_pid})")
            except OSError:
                path.unlink()
                logger.info("Removed stale PID file")
        except ValueError:
            path.unlink()
            logger.info("Removed invalid PID file")
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(str(os.getpid()))
    logger.info(f"Created PID file: {path}")


def remove_pid_file():
    path = _pid_path()
    if path.exists():
        path.unlink()
        logger.info(f"Removed PID file: {path}")


@contextmanager
def pid_lock():
    """Context manager for PID file locking"""
    create_pid_file()
    try:
        yield
    finally:
        remove_pid_file()


# ---------------------------------------------------------------------------
# Output helpers
# ---------------------------------------------------------------------------
def to_jsonable(value):
    """Rationals become strings, field elements their coordinate lists."""
    if isinstance(value, FieldElement):
        return [str(c) for c in value.coords]
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, mpmath.mpf):
        return mpmath.nstr(value, 30)
    if hasattr(value, "to_json"):
        return to_jsonable(value.to_json())
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    return value


def format_cf(expansion: cfrac.ContinuedFractionExpansion) -> str:
    return f"[{expansion.u0}; {','.join(str(u) for u in expansion.period)}]"


def emit(args, result: dict, started: float, status: str = "success") -> None:
    if args.json:
        payload = to_jsonable(result)
        payload["completion_summary"] = sailconfig.completion_summary(status, time.time() - started)
        print(json.dumps(payload, indent=2, ensure_ascii=False))
        return
    print(sailconfig.SEPARATOR)
    print(f"{result.get('title', args.command.upper())} - {sailconfig.get_report_time_str()}")
    print(sailconfig.SEPARATOR)
    for key, value in result.items():
        if key == "title":
            continue
        if key == "checks":
            for c in value:
                mark = "PASS" if c["passed"] else "FAIL"
                print(f"  [{mark}] {c['name']}: {c['detail']}")
                for w in c["witnesses"][:10]:
                    print(f"         - {w}")
            continue
        print(f"{key}: {to_jsonable(value)}")
    print(sailconfig.SEPARATOR)


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------
def cmd_quad(args) -> dict:
    D = args.d
    if args.action == "cf":
        expansion = cfrac.expand(D)
        return {"title": f"CONTINUED FRACTION OF omega_{D}", "D": D, "cf": format_cf(expansion),
                "expansion": expansion.to_json()}
    if args.action == "convergents":
        table = cfrac.convergents(D, args.count)
        return {"title": f"CONVERGENTS OF omega_{D}", "D": D, "convergents": [c.to_json() for c in table]}
    if args.action == "unit":
        eps, n = cfrac.fundamental_unit(D)
        return {"title": f"FUNDAMENTAL UNIT OF Q(sqrt {D})", "D": D, "unit": eps, "norm": n,
                "totally_positive_unit": cfrac.totally_positive_unit(D)}
    strategy = "continued_fraction" if args.action == "indecomposables" else args.strategy
    value, result = indecomp.iota(make_field(Quadratic(D)), strategy, args.bound)
    return {"title": f"INDECOMPOSABLES OF Q(sqrt {D})", "iota": value, "result": result.to_json()}


def cmd_cubic(args) -> dict:
    if args.action == "verify":
        report = families.shanks_verify(args.a, bruteforce=args.bruteforce, assume_monogenic=args.assume_monogenic)
        return dict(report.to_json(), title=f"SHANKS VERIFICATION a={args.a}")
    field = make_field(SimplestCubic(args.a, args.assume_monogenic))
    if args.strategy == "sail":
        report = families.shanks_verify(args.a, assume_monogenic=args.assume_monogenic)
        return {"title": f"IOTA a={args.a}", "iota": report.values.get("iota"), "passed": report.passed}
    value, result = indecomp.iota(field, "bruteforce", args.bound)
    return {"title": f"IOTA a={args.a}", "iota": value, "result": result.to_json()}


def cmd_biquad(args) -> dict:
    D1, D2 = args.d1, args.d2
    field = make_field(Biquadratic(D1, D2))
    if args.action == "sgnrk":
        rank, basis = units.signature_rank(D1, D2)
        result = {"title": f"SIGNATURE RANK {field.descriptor.label}", "sgnrk": rank,
                  "basis": [str(s) for s in basis], "unit_norms": units.verify_unit_norms(field)}
        if args.oracle:
            oracle = units.exhaustive_signature_rank(D1, D2, args.box)
            result["oracle"] = oracle
            result["passed"] = oracle == rank
        return result
    if args.action == "units":
        system = units.kubota_unit_system(D1, D2)
        return {"title": f"UNIT SYSTEM {field.descriptor.label}", "system": system.to_json(),
                "signatures": [str(s) for s in system.signatures()],
                "index_check": units.unit_index_check(field)}
    if args.action == "usr-bound":
        bound = families.usr_lower_bound(D1, D2, override=args.override_c12)
        return {"title": f"UNIVERSAL RANK LOWER BOUND {field.descriptor.label}", "bound": bound.to_json()}
    value, result = indecomp.iota(field, "bruteforce", args.bound)
    return {"title": f"IOTA {field.descriptor.label}", "iota": value, "result": result.to_json()}


def cmd_family(args) -> dict:
    report = families.verify_family(args.n, assume_squarefree=args.assume_squarefree)
    return dict(report.to_json(), title=f"FAMILY VERIFICATION n={args.n}")


IOTA_STRATEGIES = {"bruteforce": "bruteforce", "cf": "continued_fraction", "sail": "sail"}


def _read_field(value: str) -> Field:
    text = value
    if not value.lstrip().startswith("{"):
        try:
            with open(value, "r", encoding="utf-8") as f:
                text = f.read()
        except OSError as exc:
            raise UsageError(f"cannot read a field descriptor from {value}: {exc}") from exc
    try:
        data = json.loads(text)
        if not isinstance(data, dict):
            raise UsageError("a field descriptor must be a JSON object")
        return make_field(field_core.descriptor_from_json(data))
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"bad field descriptor {value!r}: {exc}") from exc


def cmd_iota(args) -> dict:
    field = _read_field(args.field)
    sail = None
    if args.strategy == "sail":
        if field.kind != "cubic":
            raise IncompleteSailData(f"no built-in sail faces for {field.descriptor.label}")
        sail = families.shanks_sail(field)
    value, result = indecomp.iota(field, IOTA_STRATEGIES[args.strategy], args.bound, sail=sail)
    return {"title": f"IOTA {field.descriptor.label}", "iota": value, "result": result.to_json()}


def _read_geometry_input(path: str) -> dict:
    if path == "-":
        return json.load(sys.stdin)
    with open(path, "r", encoding="utf-8") as f:
        return json.load(f)


def cmd_geometry(args) -> dict:
    try:
        data = _read_geometry_input(args.file)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read polytopes from {args.file}: {exc}") from exc
    if "field" not in data or "polytopes" not in data:
        raise UsageError("geometry input needs 'field' and 'polytopes' keys")
    field = make_field(field_core.descriptor_from_json(data["field"]))
    polytopes = [latgeo.polytope_from_json(p, field) for p in data["polytopes"]]
    reports = []
    for S in polytopes:
        entry = latgeo.polytope_report(S)
        if args.facets and S.dim >= 1:
            entry["facets"] = [[[str(c) for c in v.coords] for v in F.vertices] for F in latgeo.facets(S)]
        reports.append(entry)
    result = {"title": f"GEOMETRY {field.descriptor.label}", "polytopes": reports}
    if args.match:
        generators = indecomp.totally_positive_unit_generators(field)
        result["matching"] = latgeo.match_facets(polytopes, generators, args.window).to_json()
    return result


def cmd_bounds(args) -> dict:
    result = {"title": "RANK BOUNDS", "override_c12": args.override_c12}
    if args.kitaoka is not None:
        result["kitaoka"] = families.kitaoka_bound(args.kitaoka, args.classical, args.override_c12).to_json()
    if args.u is not None:
        result["u"] = args.u
        result["classical"] = args.classical
        result["rank_lower_bound"] = families.rank_lower_bound(args.u, args.classical, args.override_c12)
    if len(result) == 2:
        raise UsageError("bounds needs --u or --kitaoka")
    return result


def cmd_dump_sail(args) -> dict:
    rows = cfrac.dump_sail(args.d, args.periods)
    lines = [f"{mpmath.nstr(x, 20)} {mpmath.nstr(y, 20)}" for _, x, y in rows]
    if args.out:
        with open(args.out, "w", encoding="utf-8") as f:
            f.write("\n".join(lines) + "\n")
        logger.info(f"Wrote {len(lines)} sail points to {args.out}")
    elif not args.json:
        print("\n".join(lines))
    result = {"title": f"SAIL OF Q(sqrt {args.d})", "points": len(lines), "out": args.out or "stdout",
              "elements": [p for p, _, _ in rows]}
    if args.json and not args.out:
        result["lines"] = lines
    return result


# ---------------------------------------------------------------------------
# Scans
# ---------------------------------------------------------------------------
SCAN_COLUMNS = {
    "biquad": ["D1", "D2", "D3", "case", "norms", "sgnrk", "oracle", "u", "R_cls_min", "R_min", "error"],
    "cubic": ["a", "discriminant", "iota_formula", "iota_sail", "passed", "error"],
    "family": ["n", "p", "discriminant", "iota", "passed", "error"],
}


def scan_grid(kind: str, maximum: int) -> List[tuple]:
    if kind == "biquad":
        radicands = [d for d in range(2, maximum + 1) if field_core.is_squarefree(d)]
        return [(D1, D2) for i, D1 in enumerate(radicands) for D2 in radicands[i + 1:]]
    if kind == "cubic":
        return [(a,) for a in range(-1, maximum + 1)]
    return [(n,) for n in range(0, maximum + 1)]


def scan_cell(kind: str, params: tuple, oracle: bool = False) -> dict:
    """One CSV row; errors are recorded in the row, never raised."""
    row: Dict[str, object] = {}
    try:
        if kind == "biquad":
            D1, D2 = params
            system = units.kubota_unit_system(D1, D2)
            rank, _ = units.signature_rank(D1, D2)
            row.update(D1=D1, D2=D2, D3=system.field.radicands[3], case=system.case_label,
                       norms=" ".join(str(n) for n in system.norms), sgnrk=rank)
            if oracle:
                row["oracle"] = units.exhaustive_signature_rank(D1, D2)
            try:
                bound = families.usr_lower_bound(D1, D2)
                row.update(u=bound.u, R_cls_min=bound.R_cls_min, R_min=bound.R_min)
            except NotApplicable:
                pass
        elif kind == "cubic":
            (a,) = params
            report = families.shanks_verify(a)
            row.update(a=a, discriminant=report.values["discriminant"], iota_formula=families.shanks_iota_formula(a),
                       iota_sail=report.values.get("iota"), passed=report.passed)
        else:
            (n,) = params
            report = families.verify_family(n)
            row.update(n=n, p=report.values["p"], discriminant=report.values["discriminant"],
                       iota=report.values.get("iota"), passed=report.passed)
    except SailkitError as exc:
        names = ["D1", "D2"] if kind == "biquad" else (["a"] if kind == "cubic" else ["n"])
        row.update(dict(zip(names, params)))
        row["error"] = f"{type(exc).__name__}: {exc}"
    return row


async def run_scan_async(kind: str, grid: Sequence[tuple], jobs: int, writer, oracle: bool,
                         scan_log: Optional[logging.Logger] = None) -> int:
    loop = asyncio.get_running_loop()
    written = 0
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        for start in range(0, len(grid), jobs):
            if shutdown_flag:
                logger.info(f"Scan stopped after {written} of {len(grid)} cells")
                break
            batch = grid[start:start + jobs]
            try:
                rows = await asyncio.gather(*(loop.run_in_executor(pool, scan_cell, kind, p, oracle) for p in batch))
            except BrokenProcessPool as exc:
                raise Interrupted(f"worker pool broke after {written} of {len(grid)} cells: {exc}") from exc
            for params, row in zip(batch, rows):
                writer.writerow(row)
                written += 1
                if scan_log:
                    outcome = row.get("error") or ("PASS" if row.get("passed", True) else "FAIL")
                    scan_log.info(f"{sailconfig.get_report_time_str()} | {kind} {params} | {outcome}")
    return written


def cmd_scan(args) -> dict:
    global shutdown_flag
    shutdown_flag = False
    previous = {s: signal.signal(s, signal_handler) for s in (signal.SIGTERM, signal.SIGINT)}
    grid = scan_grid(args.kind, args.max)
    jobs = max(1, args.jobs)
    logger.info(f"Scanning {len(grid)} {args.kind} cells with {jobs} workers into {args.out}")
    scan_log = sailconfig.setup_logger("sailkit.scan", f"scan_{args.kind}.log")
    scan_log.info(sailconfig.SEPARATOR)
    scan_log.info(f"SCAN {args.kind.upper()} max={args.max} cells={len(grid)} - {sailconfig.get_report_time_str()}")
    try:
        with pid_lock():
            with open(args.out, "w", newline="", encoding="utf-8") as f:
                writer = csv.DictWriter(f, fieldnames=SCAN_COLUMNS[args.kind], restval="")
                writer.writeheader()
                written = asyncio.run(run_scan_async(args.kind, grid, jobs, writer, args.oracle, scan_log))
    finally:
        for s, handler in previous.items():
            signal.signal(s, handler)
        for handler in list(scan_log.handlers):
            handler.close()
            scan_log.removeHandler(handler)
    return {"title": f"SCAN {args.kind.upper()}", "cells": len(grid), "written": written, "out": args.out,
            "passed": written == len(grid)}


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------
def _common_options(top_level: bool) -> argparse.ArgumentParser:
    """Output and logging flags, accepted before or after the subcommand."""
    common = argparse.ArgumentParser(add_help=False)
    flag = {} if top_level else {"default": argparse.SUPPRESS}
    common.add_argument("--json", action="store_true", help="Emit JSON instead of text", **flag)
    common.add_argument("--log-reports", action="store_true", help="Persist each report through ReportLogger", **flag)
    common.add_argument("--quiet", action="store_true", help="Log to file only", **flag)
    common.add_argument("--log-file", default=flag.get("default", "sailkit.log"),
                        help="Log file name inside SAILKIT_LOG_DIR")
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sailkit",
        description="Sails, indecomposables, unit signature ranks and universal-form rank bounds",
        epilog="CSV scan columns: " + "; ".join(f"{k}: {','.join(v)}" for k, v in SCAN_COLUMNS.items()),
        parents=[_common_options(top_level=True)],
    )
    common = _common_options(top_level=False)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, **kwargs) -> argparse.ArgumentParser:
        return sub.add_parser(name, parents=[common], **kwargs)

    quad = add("quad", help="Real quadratic fields")
    quad.add_argument("--d", type=int, required=True)
    quad.add_argument("action", choices=["cf", "convergents", "indecomposables", "unit", "iota"])
    quad.add_argument("--count", type=int, default=10)
    quad.add_argument("--strategy", choices=["continued_fraction", "bruteforce"], default="continued_fraction")
    quad.add_argument("--bound", type=int)

    cubic = add("cubic", aliases=["shanks"], help="Shanks' simplest cubic fields")
    cubic.add_argument("--a", type=int, required=True)
    cubic.add_argument("action", choices=["verify", "iota"])
    cubic.add_argument("--bruteforce", action="store_true", help="Cross-check iota by enumeration")
    cubic.add_argument("--strategy", choices=["sail", "bruteforce"], default="sail")
    cubic.add_argument("--bound", type=int)
    cubic.add_argument("--assume-monogenic", action="store_true")

    biquad = add("biquad", help="Real biquadratic fields")
    biquad.add_argument("--d1", type=int, required=True)
    biquad.add_argument("--d2", type=int, required=True)
    biquad.add_argument("action", choices=["sgnrk", "units", "usr-bound", "iota"])
    biquad.add_argument("--oracle", action="store_true", help="Compare with the exhaustive signature search")
    biquad.add_argument("--box", type=int, default=4)
    biquad.add_argument("--override-c12", action="store_true")
    biquad.add_argument("--bound", type=int)

    family = add("family", help="Q(sqrt 5, sqrt p_n)")
    family.add_argument("--n", type=int, required=True)
    family.add_argument("action", choices=["verify"])
    family.add_argument("--assume-squarefree", action="store_true")

    geometry = add("geometry", help="Polytopes from a JSON file or stdin")
    geometry.add_argument("file", help="JSON file, or - for stdin")
    geometry.add_argument("--facets", action="store_true")
    geometry.add_argument("--match", action="store_true", help="Glue facets by totally positive units")
    geometry.add_argument("--window", type=int, default=2)

    bounds = add("bounds", help="Rank bound calculators")
    bounds.add_argument("--u", type=int)
    bounds.add_argument("--kitaoka", type=int, metavar="R")
    bounds.add_argument("--classical", action="store_true")
    bounds.add_argument("--override-c12", action="store_true")

    scan = add("scan", help="Parallel grid scan with CSV output")
    scan.add_argument("kind", choices=sorted(SCAN_COLUMNS))
    scan.add_argument("--max", type=int, required=True)
    scan.add_argument("--out", required=True)
    scan.add_argument("--jobs", type=int, default=sailconfig.JOBS)
    scan.add_argument("--oracle", action="store_true")

    iota = add("iota", help="Indecomposable count of any supported field")
    iota.add_argument("--field", required=True, help="Field descriptor as a JSON string or a JSON file")
    iota.add_argument("--strategy", choices=sorted(IOTA_STRATEGIES), default="bruteforce")
    iota.add_argument("--bound", type=int, help="Norm bound for the brute force strategy")

    dump = add("dump-sail", help="Quadratic sail coordinates for plotting")
    dump.add_argument("--d", type=int, required=True)
    dump.add_argument("--periods", type=int, default=1)
    dump.add_argument("--out")
    return parser


COMMANDS = {
    "quad": cmd_quad,
    "cubic": cmd_cubic,
    "shanks": cmd_cubic,
    "biquad": cmd_biquad,
    "family": cmd_family,
    "geometry": cmd_geometry,
    "bounds": cmd_bounds,
    "scan": cmd_scan,
    "iota": cmd_iota,
    "dump-sail": cmd_dump_sail,
}


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else UsageError.exit_code
    sailconfig.configure_cli_logging(args.log_file, quiet=args.quiet or args.json)
    started = time.time()
    try:
        result = COMMANDS[args.command](args)
    except SailkitError as exc:
        logger.error(f"{args.command} failed: {type(exc).__name__}: {exc}")
        if args.json:
            print(json.dumps(exc.to_json()), file=sys.stderr)
        else:
            print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except KeyboardInterrupt:
        logger.error(f"{args.command} interrupted")
        if args.json:
            print(json.dumps(Interrupted("keyboard interrupt").to_json()), file=sys.stderr)
        else:
            print("error: interrupted", file=sys.stderr)
        return Interrupted.exit_code
    passed = result.get("passed", True)
    if args.command != "dump-sail" or args.out or args.json:
        emit(args, result, started, "success" if passed else "verification failed")
    if args.log_reports:
        ReportLogger().log_report(" ".join(argv if argv is not None else sys.argv[1:]), to_jsonable(result))
    return 0 if passed else 1


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
