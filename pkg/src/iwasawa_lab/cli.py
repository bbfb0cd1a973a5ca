"""Command-line entry point.

Defaults come from the built-in values, then from a ``key = value`` file
named by ``IWASAWA_LAB_CONFIG``, then from command-line flags (highest).
Exit codes: 0 success, 1 a checked property failed, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import asdict
from datetime import datetime, timezone
from typing import Optional, Sequence

import numpy as np

from . import __version__
from .checks import SUITES
from .closed_forms import GROUP_TAGS, GroupSpec, RankOneParams
from .integrators import (
    DOMAINS,
    PROPOSALS,
    IntegrandSpec,
    Proposal,
    ScanThresholds,
    log_integrand,
    log_rho2,
    radial_scan,
)
from .iwasawa import iwasawa, reconstruction_error

CONFIG_ENV = "IWASAWA_LAB_CONFIG"
CSV_COLUMNS = ("R", "estimate", "stderr", "cumulative_samples")
DEFAULT_SAMPLES = {
    "iwasawa": 1000,
    "closed-forms": 1000,
    "inequalities": 100_000,
    "appendix-a": 10_000,
    "appendix-b": 1000,
}


class UsageError(Exception):
    pass


# ---------------------------------------------------------------- parsing helpers

def _float_list(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _seed(text: str) -> int:
    v = int(text)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def _positive_int(text: str) -> int:
    v = int(float(text))
    if v <= 0:
        raise argparse.ArgumentTypeError("expected a positive integer")
    return v


def parse_matrix(text: str) -> np.ndarray:
    """JSON array of rows; complex entries are ``[re, im]`` pairs."""
    try:
        rows = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"cannot parse matrix: {exc}")
    if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
        raise UsageError("matrix must be a non-empty JSON array of rows")
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise UsageError("matrix must be square")

    def entry(e):
        if isinstance(e, bool):
            raise UsageError(f"bad matrix entry {e!r}")
        if isinstance(e, (int, float)):
            return complex(e)
        if isinstance(e, list) and len(e) == 2 and all(isinstance(t, (int, float)) and not isinstance(t, bool) for t in e):
            return complex(e[0], e[1])
        raise UsageError(f"bad matrix entry {e!r}")

    m = np.array([[entry(e) for e in r] for r in rows])
    is_complex = any(isinstance(e, list) for r in rows for e in r)
    m = m if is_complex else m.real
    if not np.all(np.isfinite(m)):
        raise UsageError("matrix entries must be finite")
    return m


def _encode(m: np.ndarray):
    m = np.asarray(m)
    if np.iscomplexobj(m):
        return np.stack([m.real, m.imag], axis=-1).tolist()
    return m.tolist()


def read_config(path: str) -> dict[str, str]:
    out = {}
    try:
        lines = open(path, encoding="utf-8").read().splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}")
    for lineno, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key = value")
        key, value = (t.strip() for t in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out


# ---------------------------------------------------------------- parser

def _add_group_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--group", choices=GROUP_TAGS, default="sl")
    p.add_argument("--field", choices=("R", "C"), default="R")
    p.add_argument("--n", type=int, default=2, help="SL(n); SO(n+2, 2)")
    p.add_argument("--domain", choices=DOMAINS, default="full")
    p.add_argument("--rho-coeff", type=float, default=-1.0)
    p.add_argument("--alpha", type=float, default=0.0)
    p.add_argument("--log-power", type=float, default=0.0)
    p.add_argument("--m-lambda", type=int, default=1)
    p.add_argument("--m-2lambda", type=int, default=0)
    p.add_argument("--lamH", type=float, default=1.0)


def _add_output_flags(p: argparse.ArgumentParser, formats=("json",)) -> None:
    p.add_argument("--out", help="report path (default: stdout)")
    p.add_argument("--format", choices=formats, default="json")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="iwasawa-lab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decompose", help="Iwasawa factors of a matrix")
    p.add_argument("matrix", help="JSON array of rows, or a path to a file holding one")
    p.add_argument("--tolerance", type=float, default=1e-9)
    _add_output_flags(p)

    p = sub.add_parser("eval", help="a^{2 rho} and the integrand at one point")
    _add_group_flags(p)
    p.add_argument("--coords", type=_float_list, required=True, help="real coordinates, comma separated")
    _add_output_flags(p)

    p = sub.add_parser("check", help="run a property suite")
    p.add_argument("suite", help="one of: " + ", ".join(SUITES))
    p.add_argument("--seed", type=_seed)
    p.add_argument("--samples", type=_positive_int)
    p.add_argument("--tolerance", type=float)
    _add_output_flags(p)

    p = sub.add_parser("scan", help="radial convergence scan of an integrand")
    _add_group_flags(p)
    p.add_argument("--radii", type=_float_list, default=_float_list("10,100,1000,10000"))
    p.add_argument("--samples", type=_positive_int, default=1_000_000, help="samples per shell")
    p.add_argument("--seed", type=_seed)
    p.add_argument("--proposal", choices=PROPOSALS, default="radial")
    p.add_argument("--workers", type=_positive_int, default=1)
    for name, default in asdict(ScanThresholds()).items():
        p.add_argument("--" + name.replace("_", "-"), type=float, default=default)
    _add_output_flags(p, ("json", "csv"))
    return parser


def _apply_config(parser: argparse.ArgumentParser, config: dict[str, str]) -> None:
    subparsers = next(a for a in parser._actions if isinstance(a, argparse._SubParsersAction))
    known = set()
    for sp in subparsers.choices.values():
        dests = {a.dest for a in sp._actions}
        hits = {k: v for k, v in config.items() if k in dests}
        sp.set_defaults(**hits)  # string defaults go through the flag's type
        known |= hits.keys()
    unknown = sorted(set(config) - known)
    if unknown:
        raise UsageError(f"unknown config keys: {', '.join(unknown)}")


# ---------------------------------------------------------------- commands

def _spec_from_args(args) -> IntegrandSpec:
    rank_one = None
    if args.group == "rank1":
        rank_one = RankOneParams(args.m_lambda, args.m_2lambda, args.lamH)
    group = GroupSpec(args.group, args.n, args.field, rank_one)
    return IntegrandSpec(group, args.domain, args.rho_coeff, args.alpha, args.log_power)


def _dump(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def _emit(text: str, out: Optional[str], argv: Sequence[str]) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    with open(out, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    meta = {
        "created": datetime.now(timezone.utc).isoformat(),
        "argv": list(argv),
        "version": __version__,
    }
    with open(out + ".meta.json", "w", encoding="utf-8") as fh:
        fh.write(_dump(meta))


def _status(msg: str, to_stdout: bool) -> None:
    print(msg, file=sys.stdout if to_stdout else sys.stderr)


def cmd_decompose(args, argv) -> int:
    text = args.matrix
    if not text.lstrip().startswith("["):
        try:
            text = open(text, encoding="utf-8").read()
        except OSError as exc:
            raise UsageError(f"cannot read matrix file: {exc}")
    g = parse_matrix(text)
    f = iwasawa(g)
    residual = reconstruction_error(g, f)
    payload = {
        "vbar": _encode(f.vbar),
        "a": f.a.tolist(),
        "k": _encode(f.k),
        "residual": residual,
        "tolerance": args.tolerance,
    }
    _emit(_dump(payload), args.out, argv)
    ok = residual <= args.tolerance
    _status(f"residual {residual:.3e} ({'ok' if ok else 'above tolerance'})", args.out is not None)
    return 0 if ok else 1


def cmd_eval(args, argv) -> int:
    spec = _spec_from_args(args)
    x = np.asarray(args.coords, dtype=float)
    if x.shape[0] != spec.dim:
        raise UsageError(f"expected {spec.dim} coordinates, got {x.shape[0]}")
    payload = {
        "coords": x.tolist(),
        "log_rho2": float(log_rho2(spec, x)),
        "log_integrand": float(log_integrand(spec, x)),
        "integrand": float(np.exp(log_integrand(spec, x))),
    }
    if spec.group.tag != "rank1":
        payload["log_rho2_oracle"] = float(log_rho2(spec, x[None, :], "oracle")[0])
    _emit(_dump(payload), args.out, argv)
    return 0


def cmd_check(args, argv) -> int:
    if args.suite not in SUITES:
        raise UsageError(f"unknown suite {args.suite!r}; choose from {', '.join(SUITES)}")
    if args.seed is None:
        raise UsageError("--seed is required")
    samples = args.samples or DEFAULT_SAMPLES[args.suite]
    kwargs = {}
    if args.tolerance is not None:
        if args.suite not in ("iwasawa", "closed-forms", "appendix-a"):
            raise UsageError(f"suite {args.suite!r} has no tolerance override")
        kwargs["tol"] = args.tolerance
    results = SUITES[args.suite](samples, args.seed, **kwargs)
    passed = all(r.passed for r in results)
    payload = {
        "suite": args.suite,
        "seed": args.seed,
        "samples": samples,
        "passed": passed,
        "properties": [r.to_dict() for r in results],
    }
    _emit(_dump(payload), args.out, argv)
    for r in results:
        _status(f"{'PASS' if r.passed else 'FAIL'}  {r.name}  worst={r.worst:.3e}", args.out is not None)
    return 0 if passed else 1


def scan_csv(report) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for row in report.csv_rows():
        w.writerow([repr(float(row[0])), repr(float(row[1])), repr(float(row[2])), int(row[3])])
    return buf.getvalue()


def cmd_scan(args, argv) -> int:
    if args.seed is None:
        raise UsageError("--seed is required")
    spec = _spec_from_args(args)
    th = ScanThresholds(**{k: getattr(args, k) for k in asdict(ScanThresholds())})
    report = radial_scan(spec, args.radii, args.samples, args.seed, Proposal(args.proposal), args.workers, th)
    text = _dump(report.to_dict()) if args.format == "json" else scan_csv(report)
    _emit(text, args.out, argv)
    _status(f"classification: {report.classification}", args.out is not None)
    return 0


COMMANDS = {"decompose": cmd_decompose, "eval": cmd_eval, "check": cmd_check, "scan": cmd_scan}


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        path = os.environ.get(CONFIG_ENV)
        if path:
            _apply_config(parser, read_config(path))
        args = parser.parse_args(argv)
        return COMMANDS[args.command](args, argv)
    except SystemExit as exc:  # argparse usage errors and --help
        return int(exc.code or 0)
    except (UsageError, ValueError, ZeroDivisionError, np.linalg.LinAlgError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
