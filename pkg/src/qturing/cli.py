"""Command-line entry point: ``qturing run | verify | zeno``.

Exit codes: 0 success, 1 verification failure, 2 usage or config error,
3 any other engine error.  Records go to the output file (or stdout);
diagnostics go to stderr.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
from typing import Optional, Sequence, TextIO

import numpy as np

from . import analytic
from . import machine as mach
from .clusterops import cluster_index, expect_k, format_index
from .config import RunConfig, parse_config
from .errors import ConfigError, QTuringError
from .records import CorrelationRecord, dump_records, infer_format, resolve_output
from .verify import TOLERANCE, Predictor, describe, random_rational_machine, verify_machine

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_ENGINE = 0, 1, 2, 3


def collect_records(config: RunConfig) -> list[CorrelationRecord]:
    """Brute-force records after every step plus end-of-cycle closed forms."""
    spec = config.spec
    cycles = config.cycles or 1
    standard = analytic.standard_indices(spec.M)
    indices = standard if config.indices == "standard" else list(config.indices)
    records = []

    def hook(label, psi):
        for q in indices:
            records.append(CorrelationRecord(label.m, label.j, format_index(q), expect_k(psi, q)))

    mach.run(spec, cycles, hook=hook)
    if spec.uniform:
        wanted = {tuple(q) for q in indices}
        for m in range(1, cycles + 1):
            records += [r for r in analytic.predict(m, spec).records() if cluster_index(r.index) in wanted]
    return sorted(records, key=lambda r: r.sort_key)


def _emit(rows_writer, output: Optional[str], fmt: Optional[str], stdout: TextIO) -> None:
    if output is None:
        rows_writer(stdout, fmt or "csv")
        return
    path = resolve_output(output)
    with open(path, "w", newline="") as fh:
        rows_writer(fh, infer_format(path, fmt))


def cmd_run(config: RunConfig, stdout: TextIO = sys.stdout) -> int:
    records = collect_records(config)
    _emit(lambda fh, fmt: dump_records(records, fh, fmt), config.output, config.format, stdout)
    return EXIT_OK


def cmd_verify(
    config: RunConfig,
    stdout: TextIO = sys.stdout,
    stderr: TextIO = sys.stderr,
    predictor: Optional[Predictor] = None,
) -> int:
    """Differential suite over the configured machine plus ``trials`` random ones."""
    predictor = predictor or analytic.predict
    rng = np.random.default_rng(config.seed)
    machines = [config.spec]
    machines += [random_rational_machine(config.spec.M, rng) for _ in range(config.trials)]
    failed = False
    for spec in machines:
        report = verify_machine(spec, cycles=config.cycles, predictor=predictor)
        for line in describe(report):
            print(line, file=stdout)
        for fam in report.failures(TOLERANCE):
            failed = True
            m, j, where = fam.worst
            print(
                f"FAIL {fam.name}: residual {fam.max_residual:.3e} > {TOLERANCE:g} "
                f"at m={m} j={j} index={where} ({spec.name})",
                file=stderr,
            )
    return EXIT_FAIL if failed else EXIT_OK


def zeno_rows(Ms: Sequence[int]) -> list[dict]:
    rows = []
    for M in Ms:
        psi = mach.run(mach.zeno(M), 1)
        q = (3,) + (0,) * M
        exact, brute = analytic.zeno(M), expect_k(psi, q)
        rows.append({"M": M, "m": 1, "j": 2 * M, "index": format_index(q),
                     "analytic": exact, "bruteforce": brute, "abs_diff": abs(exact - brute)})
    return rows


def _dump_zeno(rows: list[dict], fh: TextIO, fmt: str) -> None:
    if fmt == "json":
        json.dump(rows, fh, indent=1)
        fh.write("\n")
        return
    writer = csv.DictWriter(fh, fieldnames=list(rows[0]), lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: format(v, ".17g") if isinstance(v, float) else v for k, v in row.items()})


def cmd_zeno(Ms: Sequence[int], output: Optional[str] = None, fmt: Optional[str] = None,
             stdout: TextIO = sys.stdout) -> int:
    bad = [M for M in Ms if not 2 <= M <= mach.MAX_M]
    if bad or not Ms:
        raise ConfigError(f"Zeno machines need 2 <= M <= {mach.MAX_M}, got {list(Ms) or 'nothing'}")
    rows = zeno_rows(Ms)
    _emit(lambda fh, f: _dump_zeno(rows, fh, f), output, fmt, stdout)
    return EXIT_OK


def parse_range(text: str) -> list[int]:
    """``"2:10"`` (inclusive) or ``"2,4,8"``."""
    try:
        if ":" in text:
            lo, hi = text.split(":", 1)
            return list(range(int(lo), int(hi) + 1))
        return [int(part) for part in text.split(",")]
    except ValueError:
        raise ConfigError(f"bad M range {text!r}") from None


def _load_config(args) -> RunConfig:
    if args.config:
        if args.preset:
            raise ConfigError("give a config file or --preset, not both")
        if args.config == "-":
            config = parse_config(sys.stdin.read())
        else:
            with open(args.config) as fh:
                config = parse_config(fh.read())
    elif args.preset:
        text = f"preset = {args.preset}\n"
        if args.M is not None:
            text += f"M = {args.M}\n"
        config = parse_config(text)
    else:
        raise ConfigError("need a config file or --preset")
    if getattr(args, "cycles", None) is not None:
        config.cycles = args.cycles
    if getattr(args, "output", None) is not None:
        config.output = args.output
    if getattr(args, "format", None) is not None:
        config.format = args.format
    if getattr(args, "seed", None) is not None:
        config.seed = args.seed
    if getattr(args, "trials", None) is not None:
        config.trials = args.trials
    return config


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qturing", description="Cyclic quantum Turing machine simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    def machine_args(p):
        p.add_argument("config", nargs="?", help="config file ('-' for stdin)")
        p.add_argument("--preset", choices=sorted(mach.PRESETS))
        p.add_argument("--M", type=int, help="memory cells for --preset (default 4)")
        p.add_argument("--cycles", type=int)

    run = sub.add_parser("run", help="simulate and write correlation records")
    machine_args(run)
    run.add_argument("--output", "-o")
    run.add_argument("--format", choices=("csv", "json"))

    verify = sub.add_parser("verify", help="closed forms and identities against brute force")
    machine_args(verify)
    verify.add_argument("--seed", type=int)
    verify.add_argument("--trials", type=int, help="extra random rational machines")

    zeno = sub.add_parser("zeno", help="Zeno machine head polarization for a range of M")
    zeno.add_argument("--range", dest="Ms", default="2:10", help="e.g. 2:10 or 2,4,8")
    zeno.add_argument("--output", "-o")
    zeno.add_argument("--format", choices=("csv", "json"))
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "zeno":
            return cmd_zeno(parse_range(args.Ms), args.output, args.format)
        config = _load_config(args)
        if args.command == "run":
            return cmd_run(config)
        return cmd_verify(config)
    except ConfigError as exc:
        print(f"qturing: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (QTuringError, ValueError, OSError) as exc:
        print(f"qturing: error: {exc}", file=sys.stderr)
        return EXIT_ENGINE


if __name__ == "__main__":
    sys.exit(main())
