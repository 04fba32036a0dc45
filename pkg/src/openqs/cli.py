"""Command line: ``openqs run <config>``, ``openqs verify``, ``openqs list-scenarios``.

Exit codes: 0 success, 2 config or argument error, 3 invariant violation or
failed verification, 4 numerical failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import sys
from pathlib import Path
from typing import Sequence, TextIO

import numpy as np

from . import __version__
from .config import ConfigError, Params, ScenarioConfig, load_config
from .scenarios import SCENARIOS, Context, NumericalError, Table

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_INVARIANT = 3
EXIT_NUMERICAL = 4


def format_value(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".15g")
    return str(v)


def render_csv(table: Table, cfg: ScenarioConfig, seed: int) -> str:
    buf = io.StringIO()
    buf.write(f"# openqs {__version__}\n")
    buf.write(f"# scenario: {cfg.name}\n")
    for key in sorted(cfg.params):
        buf.write(f"# param {key} = {cfg.params[key]}\n")
    buf.write(f"# seed: {seed}\n")
    units = ", ".join(f"{c} [{table.units[c]}]" for c in table.columns if c in table.units)
    if units:
        buf.write(f"# units: {units}; other columns dimensionless\n")
    else:
        buf.write("# units: all columns dimensionless\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(table.columns)
    for row in table.rows:
        writer.writerow([format_value(v) for v in row])
    return buf.getvalue()


def execute(cfg: ScenarioConfig, ctx: Context) -> Table:
    """Run one scenario; raises ``ConfigError``, ``ValueError`` or ``NumericalError``."""
    if cfg.name not in SCENARIOS:
        raise ConfigError("scenario.name", f"unknown scenario {cfg.name!r}")
    params = Params(dict(cfg.params))
    try:
        with np.errstate(invalid="raise", divide="raise", over="raise"):
            table = SCENARIOS[cfg.name].runner(params, ctx)
    except (FloatingPointError, np.linalg.LinAlgError, OverflowError, ZeroDivisionError) as exc:
        raise NumericalError(str(exc)) from None
    extra = params.unused()
    if extra:
        raise ConfigError(extra[0], f"not a parameter of scenario {cfg.name!r}")
    table.check_finite()
    return table


def _emit(text: str, path: str | None, stdout: TextIO) -> None:
    if path is None or path == "-":
        stdout.write(text)
        return
    out = Path(path)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(text)


def _run_config(cfg: ScenarioConfig, args, stdout: TextIO, stderr: TextIO) -> int:
    seed_text = cfg.params.pop("seed", None)
    if args.seed is not None:
        seed = args.seed
    elif seed_text is not None:
        try:
            seed = int(seed_text)
        except ValueError:
            raise ConfigError("seed", f"not an integer: {seed_text!r}") from None
    else:
        seed = 0
    table = execute(cfg, Context(seed=seed, threads=max(1, args.threads)))
    _emit(render_csv(table, cfg, seed), args.output or cfg.output_path, stdout)
    if table.failed:
        stderr.write(f"verification failed: {', '.join(table.failed)}\n")
        return EXIT_INVARIANT
    return EXIT_OK


def _guarded(fn, stderr: TextIO) -> int:
    try:
        return fn()
    except ConfigError as exc:
        stderr.write(f"config error: {exc}\n")
        return EXIT_PARSE
    except NumericalError as exc:
        stderr.write(f"numerical failure: {exc}\n")
        return EXIT_NUMERICAL
    except ValueError as exc:
        stderr.write(f"invariant violation: {exc}\n")
        return EXIT_INVARIANT


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="openqs", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"openqs {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--output", "-o", help="CSV destination ('-' for stdout)")
        p.add_argument("--threads", type=int, default=1, help="worker threads for grid cells")
        p.add_argument("--seed", type=int, default=None, help="seed for random draws (default 0)")

    run = sub.add_parser("run", help="run a scenario config")
    run.add_argument("config")
    common(run)
    ver = sub.add_parser("verify", help="check closed forms against the brute-force simulator")
    ver.add_argument("--pairs", type=int, default=50)
    ver.add_argument("--n-max", type=int, default=50)
    common(ver)
    sub.add_parser("list-scenarios", help="list scenario names")
    return ap


def main(argv: Sequence[str] | None = None, stdout: TextIO | None = None,
         stderr: TextIO | None = None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_PARSE

    if args.command == "list-scenarios":
        for s in SCENARIOS.values():
            stdout.write(f"{s.name:22s}{s.summary}\n")
        return EXIT_OK
    if args.command == "verify":
        cfg = ScenarioConfig("verify", {"pairs": str(args.pairs), "n_max": str(args.n_max)})
        code = _guarded(lambda: _run_config(cfg, args, stdout, stderr), stderr)
        return code
    return _guarded(lambda: _run_config(load_config(args.config), args, stdout, stderr), stderr)


if __name__ == "__main__":
    sys.exit(main())
