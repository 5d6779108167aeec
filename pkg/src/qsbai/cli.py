"""Command-line entry point.

    qsbai run CONFIG [--mode M] [--horizon T] [--seed S] [--out PATH] [--format F]
    qsbai batch CONFIG... [--workers N]

Exit codes: 0 success, 2 parse error, 3 validation error, 4 a theorem bound
was violated in verify mode.  Errors are reported on stderr as one JSON
object.  ``QSBAI_LOG_LEVEL`` sets log verbosity (default WARNING).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from .analysis import run_sweep, sample_arm, verify_theorem
from .config import FORMATS, MODES, RunConfig, load_config
from .errors import ConfigParseError, QSBAIError

log = logging.getLogger("qsbai")

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_VALIDATION = 3
EXIT_BOUND_VIOLATED = 4


def _fmt(p: float) -> str:
    return format(float(p), ".12g")


def sweep_csv(curve: np.ndarray) -> str:
    """``t,vertex,prob`` rows, one per step and arm, 12 significant digits."""
    lines = ["t,vertex,prob"]
    for t, row in enumerate(curve):
        lines.extend(f"{t},{w},{_fmt(p)}" for w, p in enumerate(row))
    return "\n".join(lines) + "\n"


def record_csv(record: dict) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(record.keys())
    writer.writerow([json.dumps(v) if isinstance(v, (list, dict)) else v for v in record.values()])
    return buf.getvalue()


def record_json(record: dict) -> str:
    return json.dumps(record, indent=2) + "\n"


def execute(config: RunConfig) -> tuple[str, int]:
    """Run one validated config; returns (file contents, exit status)."""
    g, env = config.validate()
    fmt = config.output.format
    if config.mode == "sweep":
        result = run_sweep(g, env, config.horizon)
        if fmt == "csv":
            return sweep_csv(result.curve), EXIT_OK
        return record_json({
            "horizon": result.horizon,
            "best_arm": result.best_arm,
            "first_max_step": result.first_max_step,
            "curve": result.curve.tolist(),
        }), EXIT_OK
    if config.mode == "verify":
        report = verify_theorem(g, env, config.resolved_family())
        record = report.to_dict()
        status = EXIT_OK if report.bound_satisfied else EXIT_BOUND_VIOLATED
        return (record_csv(record) if fmt == "csv" else record_json(record)), status
    result = run_sweep(g, env, config.horizon)
    dist = result.curve[config.horizon]
    arm = sample_arm(dist, config.seed)
    record = {
        "arm": arm,
        "horizon": config.horizon,
        "seed": config.seed,
        "probability": float(dist[arm]),
    }
    return (record_csv(record) if fmt == "csv" else record_json(record)), EXIT_OK


def _write(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    out = Path(path)
    if out.parent != Path("."):
        out.parent.mkdir(parents=True, exist_ok=True)
    with open(out, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _error(kind: str, exc: Exception, source: str) -> None:
    record = {"status": "error", "kind": kind, "error": type(exc).__name__, "message": str(exc), "config": source}
    sys.stderr.write(json.dumps(record) + "\n")


def run_file(path: str, **overrides) -> int:
    try:
        config = load_config(path).with_overrides(**overrides)
    except ConfigParseError as exc:
        _error("parse", exc, path)
        return EXIT_PARSE
    try:
        text, status = execute(config)
    except QSBAIError as exc:
        _error("validation", exc, path)
        return EXIT_VALIDATION
    _write(text, config.output.path)
    if status == EXIT_BOUND_VIOLATED:
        _error("bound_violated", RuntimeError("simulated probability is below the theorem bound"), path)
    log.info("%s: mode=%s exit=%d", path, config.mode, status)
    return status


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qsbai", description="Quantum-walk best-arm identification on graphs")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="execute one run config")
    run.add_argument("config")
    run.add_argument("--mode", choices=MODES)
    run.add_argument("--horizon", type=int)
    run.add_argument("--seed", type=int)
    run.add_argument("--out", help="output file ('-' for stdout)")
    run.add_argument("--format", choices=FORMATS)

    batch = sub.add_parser("batch", help="execute several configs in parallel")
    batch.add_argument("configs", nargs="+")
    batch.add_argument("--workers", type=int, default=os.cpu_count() or 1)
    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(
        level=os.environ.get("QSBAI_LOG_LEVEL", "WARNING").upper(),
        format="%(levelname)s %(name)s: %(message)s",
    )
    args = _build_parser().parse_args(argv)
    if args.command == "run":
        return run_file(
            args.config,
            mode=args.mode,
            horizon=args.horizon,
            seed=args.seed,
            out=args.out,
            format=args.format,
        )
    with ProcessPoolExecutor(max_workers=max(1, args.workers)) as pool:
        statuses = list(pool.map(run_file, args.configs))
    return max(statuses)


if __name__ == "__main__":
    sys.exit(main())
