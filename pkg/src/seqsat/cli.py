"""Command line: ``seqsat {mine,encode,oracle,verify,bench}``.

Exit codes: 0 patterns found / sets identical, 1 no pattern, 2 usage or
input error, 3 verify mismatch.
"""
from __future__ import annotations

import argparse
import csv
import itertools
import json
import sys
import time
from dataclasses import asdict, dataclass, field

from . import __version__
from .cnf import export_dimacs
from .dataset import Dataset, MiningConfig, load_gap_table, parse_dataset, resolve_minsup, stats
from .encoder import encode
from .enumerator import mine
from .exceptions import SeqSatError
from .oracle import oracle_mine
from .patterns import PatternSet


@dataclass
class RunReport:
    config: dict
    stats: dict
    patterns: int
    solver_calls: int
    conflicts: int
    encode_time: float
    solve_time: float
    total_time: float
    extra: dict = field(default_factory=dict)

    @classmethod
    def from_result(cls, dataset: Dataset, config: MiningConfig, result: PatternSet, total: float):
        cfg = asdict(config)
        if cfg["dep_gap"] is not None:
            cfg["dep_gap"] = {f"{p},{t}": g for (p, t), g in cfg["dep_gap"].items()}
        return cls(
            config=cfg,
            stats=asdict(stats(dataset)),
            patterns=len(result),
            solver_calls=result.solver_calls,
            conflicts=result.conflicts,
            encode_time=result.encode_time,
            solve_time=result.solve_time,
            total_time=total,
        )


def _add_common(p: argparse.ArgumentParser, output=True) -> None:
    p.add_argument("-i", "--input", required=True, help="dataset path, '-' for stdin")
    p.add_argument("--format", choices=("tokens", "spmf"), default="tokens")
    p.add_argument("--minsup", required=True,
                   help="absolute count, or a percentage like 5%% (rounded up)")
    p.add_argument("--mode", choices=("all", "closed", "maximal"), default="closed")
    p.add_argument("--max-gap", type=int)
    p.add_argument("--dep-gap", metavar="FILE", help="CSV rows position,token,maxgap")
    p.add_argument("--max-span", type=int)
    p.add_argument("--regex")
    p.add_argument("--seed", type=int)
    if output:
        p.add_argument("-o", "--output")
        p.add_argument("--json", action="store_true")
        p.add_argument("--witness", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="seqsat", description="SAT-based frequent sequence mining")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("mine", help="mine patterns with the SAT solver")
    _add_common(p)
    p.add_argument("--solver-cmd", help="external DIMACS solver command instead of the built-in one")

    p = sub.add_parser("oracle", help="mine patterns with the brute-force oracle")
    _add_common(p)

    p = sub.add_parser("encode", help="write the formula as DIMACS plus a variable map")
    _add_common(p, output=False)
    p.add_argument("-o", "--output", help="DIMACS path (default stdout)")
    p.add_argument("--varmap", help="JSON sidecar path (default OUTPUT.varmap.json)")

    p = sub.add_parser("verify", help="compare SAT miner and oracle; exit 3 on mismatch")
    _add_common(p, output=False)

    p = sub.add_parser("bench", help="run the miner over a grid of settings, CSV out")
    _add_common(p, output=False)
    p.add_argument("--grid", action="append", default=[],
                   help="key=v1,v2 with key in gaps, spans, minsups, modes, regexes; 'none' disables")
    p.add_argument("-o", "--output")
    return parser


def _read_dataset(args) -> Dataset:
    if args.input == "-":
        raw = sys.stdin.buffer.read()
    else:
        with open(args.input, "rb") as fh:
            raw = fh.read()
    return parse_dataset(raw, args.format, name=args.input)


def _config(args, dataset: Dataset) -> MiningConfig:
    dep = None
    if args.dep_gap:
        with open(args.dep_gap, encoding="utf-8") as fh:
            dep = load_gap_table(fh.read())
    config = MiningConfig(
        minsup=resolve_minsup(args.minsup, len(dataset)),
        max_gap=args.max_gap,
        dep_gap=dep,
        max_span=args.max_span,
        regex=args.regex,
        mode=args.mode,
    )
    config.validate(dataset)
    return config


def _emit(args, result: PatternSet, report: RunReport) -> None:
    if args.json:
        payload = json.loads(result.to_json())
        payload["report"] = asdict(report)
        text = json.dumps(payload, indent=1, ensure_ascii=False) + "\n"
    else:
        text = "".join(line + "\n" for line in result.lines())
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if not args.json:
        print(json.dumps(asdict(report), ensure_ascii=False), file=sys.stderr)


def cmd_mine(args) -> int:
    t0 = time.perf_counter()
    dataset = _read_dataset(args)
    config = _config(args, dataset)
    result = mine(dataset, config, witness=args.witness, seed=args.seed, solver_command=args.solver_cmd)
    _emit(args, result, RunReport.from_result(dataset, config, result, time.perf_counter() - t0))
    return 0 if len(result) else 1


def cmd_oracle(args) -> int:
    t0 = time.perf_counter()
    dataset = _read_dataset(args)
    config = _config(args, dataset)
    result = oracle_mine(dataset, config)
    _emit(args, result, RunReport.from_result(dataset, config, result, time.perf_counter() - t0))
    return 0 if len(result) else 1


def cmd_encode(args) -> int:
    dataset = _read_dataset(args)
    enc = encode(dataset, _config(args, dataset))
    sidecar_path = args.varmap or (f"{args.output}.varmap.json" if args.output else None)
    sidecar = open(sidecar_path, "w", encoding="utf-8") if sidecar_path else None
    try:
        if args.output:
            with open(args.output, "w") as fh:
                export_dimacs(enc.cnf, enc.varmap, fh, sidecar)
        else:
            export_dimacs(enc.cnf, enc.varmap, sys.stdout, sidecar)
    finally:
        if sidecar:
            sidecar.close()
    print(f"c vars={enc.varmap.total_vars} clauses={len(enc.cnf)} K={enc.K}", file=sys.stderr)
    return 0


def diff_results(got: dict, want: dict) -> list[tuple]:
    """Differences as ``(pattern, sat_support, oracle_support)``, shortest first."""
    keys = set(got) | set(want)
    out = [(k, got.get(k), want.get(k)) for k in keys if got.get(k) != want.get(k)]
    out.sort(key=lambda d: (len(d[0]), d[0]))
    return out


def cmd_verify(args) -> int:
    dataset = _read_dataset(args)
    config = _config(args, dataset)
    got = mine(dataset, config, seed=args.seed, check_models=True).as_dict()
    want = oracle_mine(dataset, config).as_dict()
    diffs = diff_results(got, want)
    if not diffs:
        print(f"OK: {len(got)} {config.mode} patterns agree")
        return 0
    pattern, sat, orc = diffs[0]
    print(f"MISMATCH ({len(diffs)} differences); smallest: {' '.join(pattern)!r} "
          f"sat={sat if sat is not None else 'absent'} oracle={orc if orc is not None else 'absent'}")
    return 3


GRID_KEYS = {"gaps": "max_gap", "spans": "max_span", "minsups": "minsup", "modes": "mode", "regexes": "regex"}
CSV_FIELDS = ["dataset", "minsup", "mode", "max_gap", "max_span", "regex", "dep_gap",
              "transaction_count", "vocab_size", "max_length", "avg_length",
              "patterns", "solver_calls", "conflicts", "encode_time", "solve_time", "total_time"]


def _parse_grid(specs: list[str]) -> list[dict]:
    axes = []
    for spec in specs:
        key, sep, values = spec.partition("=")
        if not sep or key not in GRID_KEYS:
            raise SeqSatError(f"bad grid axis {spec!r}; keys are {', '.join(GRID_KEYS)}")
        vals = []
        for raw in values.split(","):
            raw = raw.strip()
            if raw.lower() == "none":
                vals.append(None)
            elif key in ("gaps", "spans"):
                vals.append(int(raw))
            else:
                vals.append(raw)
        axes.append([(GRID_KEYS[key], v) for v in vals])
    return [dict(cell) for cell in itertools.product(*axes)] or [{}]


def cmd_bench(args) -> int:
    dataset = _read_dataset(args)
    base = _config(args, dataset)
    cells = _parse_grid(args.grid)
    rows = []
    for cell in cells:
        cfg = MiningConfig(**{**asdict(base), **cell})
        cfg.minsup = resolve_minsup(cfg.minsup, len(dataset))
        cfg.validate(dataset)
        t0 = time.perf_counter()
        result = mine(dataset, cfg, seed=args.seed)
        rep = RunReport.from_result(dataset, cfg, result, time.perf_counter() - t0)
        row = {"dataset": dataset.name, **{k: rep.config[k] for k in ("minsup", "mode", "max_gap", "max_span", "regex")},
               "dep_gap": args.dep_gap, **rep.stats, "patterns": rep.patterns,
               "solver_calls": rep.solver_calls, "conflicts": rep.conflicts,
               "encode_time": f"{rep.encode_time:.6f}", "solve_time": f"{rep.solve_time:.6f}",
               "total_time": f"{rep.total_time:.6f}"}
        rows.append(row)
    out = open(args.output, "w", newline="", encoding="utf-8") if args.output else sys.stdout
    try:
        writer = csv.DictWriter(out, fieldnames=CSV_FIELDS)
        writer.writeheader()
        writer.writerows(rows)
    finally:
        if args.output:
            out.close()
    return 0


COMMANDS = {"mine": cmd_mine, "oracle": cmd_oracle, "encode": cmd_encode,
            "verify": cmd_verify, "bench": cmd_bench}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (ValueError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
