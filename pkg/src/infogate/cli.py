"""Batch command-line surface.

Subcommands: gate-info, geometry, analyze, build-dd, potential.  Every run
writes a report.json envelope into --out; build-dd additionally writes
dd.dot, trace.csv and (with --oracle) orderings.csv.  Machine output uses
six decimal places, the human summary two, and identical inputs produce
byte-identical files.

Exit codes: 0 ok, 2 parse error, 3 config error, 4 semantic error,
5 vitality undefined.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path

from . import __version__
from .diagram import (
    ORDERING_CEILING_DEFAULT,
    build_entropy_dd,
    exhaustive_best_ordering,
    to_dot,
    trace_to_csv,
)
from .errors import ConfigError, ParseError, SemanticError, VitalityUndefinedError
from .gates import (
    GeometrySpec,
    default_library,
    gate_report,
    geometry_capacity,
    library_max_measure,
    load_library_json,
    round2,
)
from .metrics import InputDistribution, function_entropy
from .netlist import (
    enumerate_implementations,
    flow_report,
    function_of,
    information_potential,
    parse_blif,
    to_blif,
    vitality,
)
from .truthtable import N_MAX, parse_pla, random_table

LOSSLESS_TOL = 1e-12


def _checked_n_max(args) -> int:
    if not 1 <= args.n_max <= N_MAX:
        raise ConfigError(f"--n-max must lie in 1..{N_MAX}")
    return args.n_max


def _round_floats(obj):
    if isinstance(obj, float):
        return round(obj, 6)
    if isinstance(obj, dict):
        return {k: _round_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_floats(v) for v in obj]
    return obj


def _read(path: str) -> str:
    p = Path(path)
    if not p.is_file():
        raise ConfigError(f"no such file: {path}")
    return p.read_text()


def _build_dist(tokens: list[str]) -> InputDistribution:
    kind = tokens[0]
    if kind == "uniform":
        if len(tokens) != 1:
            raise ConfigError("--dist uniform takes no argument")
        return InputDistribution.uniform()
    if kind == "biases":
        if len(tokens) != 2:
            raise ConfigError("--dist biases needs a comma-separated list")
        try:
            biases = [float(t) for t in tokens[1].split(",")]
            return InputDistribution.independent(biases)
        except ValueError as exc:
            raise ConfigError(f"bad biases: {exc}") from None
    if kind == "weights":
        if len(tokens) != 2:
            raise ConfigError("--dist weights needs a file path")
        try:
            weights = json.loads(_read(tokens[1]))
            return InputDistribution.explicit(weights)
        except (json.JSONDecodeError, ValueError) as exc:
            raise ConfigError(f"bad weights file: {exc}") from None
    raise ConfigError(f"unknown distribution kind: {kind}")


def _load_library(args):
    if args.lib is None:
        return default_library(), "builtin"
    return load_library_json(_read(args.lib)), args.lib


def _envelope(args, payload: dict, warnings: list[str]) -> dict:
    return {
        "tool": {"name": "infogate", "version": __version__},
        "command": args.command,
        "argv": args._argv,
        "config": {
            "dist": list(args.dist),
            "lib": getattr(args, "lib", None) or "builtin",
            "out": args.out,
        },
        "payload": payload,
        "warnings": warnings,
    }


def _write_report(args, payload: dict, warnings: list[str]) -> dict:
    envelope = _round_floats(_envelope(args, payload, warnings))
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    text = json.dumps(envelope, indent=2, sort_keys=True) + "\n"
    (out / "report.json").write_text(text)
    return envelope


def _transmission_warnings(report) -> list[str]:
    # A lossless gate has H(f|x) = 0 yet carries all its information through;
    # classic per-gate tables print I(f;x) in the transmission row there, so
    # the two readings disagree and we flag it instead of picking one.
    notes = []
    for t in report.transmission:
        if t.h_given <= LOSSLESS_TOL and report.h_output > LOSSLESS_TOL:
            notes.append(
                f"{report.gate}/{t.input}: conditional-entropy transmission is "
                f"{t.h_given:.6f} but mutual information is {t.mutual_info:.6f}; "
                "legacy gate tables print the mutual-information value here"
            )
    return notes


def cmd_gate_info(args) -> int:
    lib, _ = _load_library(args)
    dist = _build_dist(args.dist)
    if dist.kind != "uniform" and len({g.table.n for g in lib.gates}) > 1:
        raise ConfigError("non-uniform distributions need a library of one arity")
    rows = []
    warnings = []
    for gate in lib.gates:
        rep = gate_report(gate, dist)
        warnings.extend(_transmission_warnings(rep))
        rows.append({
            "gate": rep.gate,
            "h_inputs": rep.h_inputs,
            "h_output": rep.h_output,
            "i_gate": rep.i_gate,
            "transmission": [
                {"input": t.input, "h_given": t.h_given, "mutual_info": t.mutual_info}
                for t in rep.transmission
            ],
        })
        trans = "  ".join(f"{t.input}:{t.h_given:.2f}" for t in rep.transmission)
        print(f"{rep.gate:<8} H(X)={rep.h_inputs:.2f}  H(f)={rep.h_output:.2f}  "
              f"I={rep.i_gate:.2f}  H(f|x): {trans}")
    for w in warnings:
        print(f"warning: {w}")
    _write_report(args, {"gates": rows}, warnings)
    return 0


def cmd_geometry(args) -> int:
    lib, _ = _load_library(args)
    overrides = _parse_multipliers(args.multiplier)
    spec = GeometrySpec.for_side(lib, args.side, overrides)
    max_measure = library_max_measure(lib)
    capacity = geometry_capacity(spec)
    payload = {
        "side": spec.side,
        "multiplier": spec.multiplier,
        "max_measure": max_measure,
        "max_measure_rounded": round2(max_measure),
        "capacity": capacity,
        "capacity_unrounded": spec.multiplier * max_measure,
    }
    print(f"{spec.side}x{spec.side} capacity = {capacity:.4f} "
          f"(unrounded {payload['capacity_unrounded']:.4f})")
    _write_report(args, payload, [])
    return 0


def _parse_multipliers(entries) -> dict[int, float]:
    table = {}
    for entry in entries or []:
        side, eq, value = entry.partition("=")
        if not eq:
            raise ConfigError(f"--multiplier needs k=value, got {entry!r}")
        try:
            table[int(side)] = float(value)
        except ValueError as exc:
            raise ConfigError(f"bad multiplier {entry!r}: {exc}") from None
    return table


def cmd_analyze(args) -> int:
    lib, _ = _load_library(args)
    dist = _build_dist(args.dist)
    n_max = _checked_n_max(args)
    nw = parse_blif(_read(args.netlist), lib)
    if len(nw.primary_inputs) > n_max:
        raise ConfigError(
            f"netlist has {len(nw.primary_inputs)} inputs, above --n-max {n_max}"
        )
    f = function_of(nw, lib)

    vitality_value = None
    potential_payload = None
    if args.vitality or args.candidates:
        if args.candidates:
            candidates = [parse_blif(_read(p), lib) for p in args.candidates]
        else:
            candidates = [nw]
        potential = information_potential(f, candidates, lib, dist)
        vitality_value = vitality(f, potential, dist)
        potential_payload = {
            "min_work": potential.min_work,
            "witness": potential.witness.name,
            "candidates_examined": potential.candidates_examined,
            "exhaustive": potential.exhaustive,
        }

    report = flow_report(nw, lib, dist, vitality_value)
    non_increase_ok = all(s.entropy <= report.h_inputs + 1e-12 for s in report.nets)
    payload = {
        "model": nw.name,
        "h_inputs": report.h_inputs,
        "i_nw": report.i_nw,
        "logical_work": report.logical_work,
        "isentropic": report.isentropic,
        "vitality": report.vitality,
        "non_increase_ok": non_increase_ok,
        "nets": [
            {"net": s.net, "entropy": s.entropy,
             "bits": "".join(str(int(b)) for b in s.table)}
            for s in report.nets
        ],
        "instances": [
            {"index": s.index, "gate": s.gate, "output": s.output,
             "input_entropy": s.input_entropy, "output_entropy": s.output_entropy,
             "i_gate": s.i_gate}
            for s in report.instances
        ],
        "potential": potential_payload,
    }
    print(f"{nw.name}: I_NW={report.i_nw:.2f}  q={report.logical_work:.2f}  "
          f"isentropic={report.isentropic}")
    if vitality_value is not None:
        print(f"vitality T={vitality_value:.2f}")
    _write_report(args, payload, [])
    return 0


def cmd_build_dd(args) -> int:
    dist = _build_dist(args.dist)
    n_max = _checked_n_max(args)
    if args.random is not None:
        if args.random > n_max:
            raise ConfigError(f"--random {args.random} above --n-max {n_max}")
        rng = random.Random(args.seed)
        f = random_table(rng, args.random)
        source = f"random(n={args.random}, seed={args.seed})"
    else:
        if args.function is None:
            raise ConfigError("build-dd needs a PLA file or --random N")
        f = parse_pla(_read(args.function), n_max=n_max)
        source = args.function
    if f.m > 1:
        if args.output is None:
            raise ConfigError("multi-output function: select one output with --output")
        f = f.select_output(args.output)
    elif args.output is not None and args.output not in f.output_names:
        raise ConfigError(f"unknown output {args.output}")

    dd, trace = build_entropy_dd(f, dist, mode=args.mode)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "dd.dot").write_text(to_dot(dd))
    (out / "trace.csv").write_text(trace_to_csv(trace))

    payload = {
        "source": source,
        "inputs": list(f.input_names),
        "output": f.output_names[0],
        "mode": args.mode,
        "h_f": trace.h_f,
        "steps": len(trace.steps),
        "final_h_f_given_dd": trace.steps[-1].h_f_given_dd,
        "dd_size": dd.size(),
        "files": {"dot": "dd.dot", "trace": "trace.csv"},
    }
    if args.oracle:
        sweep = exhaustive_best_ordering(f, ceiling=args.ordering_ceiling)
        lines = ["order,size"]
        lines.extend(f"{' '.join(order)},{size}" for order, size in sweep.sizes)
        (out / "orderings.csv").write_text("\n".join(lines) + "\n")
        payload["oracle"] = {
            "best_order": list(sweep.best_order),
            "best_size": sweep.best_size,
            "greedy_size": dd.size(),
            "greedy_ge_best": dd.size() >= sweep.best_size,
            "orderings_file": "orderings.csv",
        }
    print(f"{source}: H(f)={trace.h_f:.2f}  size={dd.size()}  steps={len(trace.steps)}")
    if args.oracle:
        print(f"oracle: best size {payload['oracle']['best_size']} "
              f"(greedy {payload['oracle']['greedy_size']})")
    _write_report(args, payload, [])
    return 0


def cmd_potential(args) -> int:
    lib, _ = _load_library(args)
    dist = _build_dist(args.dist)
    f = parse_pla(_read(args.function), n_max=_checked_n_max(args))
    if args.candidates:
        candidates = [parse_blif(_read(p), lib) for p in args.candidates]
        exhaustive = False
    elif args.enumerate:
        candidates = enumerate_implementations(f, lib, args.max_gates)
        exhaustive = True
        if not candidates:
            raise SemanticError(
                f"no implementation of the function within {args.max_gates} gates"
            )
    else:
        raise ConfigError("potential needs --candidates or --enumerate")
    result = information_potential(f, candidates, lib, dist, exhaustive=exhaustive)
    h_f = function_entropy(f, dist)
    payload = {
        "min_work": result.min_work,
        "witness": result.witness.name,
        "witness_blif": to_blif(result.witness, lib),
        "candidates_examined": result.candidates_examined,
        "exhaustive": result.exhaustive,
        "h_f": h_f,
        "vitality": (result.min_work / h_f) if h_f > 0 else None,
    }
    print(f"Q={result.min_work:.2f} over {result.candidates_examined} candidates "
          f"(exhaustive={result.exhaustive}), witness {result.witness.name}")
    _write_report(args, payload, [])
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="infogate",
        description="Entropy measures of gate libraries and netlists, "
                    "and entropy-guided decision diagram construction.",
    )
    parser.add_argument("--version", action="version", version=f"infogate {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--dist", nargs="+", default=["uniform"],
                       metavar=("KIND", "ARG"),
                       help="input model: uniform | biases <csv> | weights <file>")
        p.add_argument("--lib", help="gate library JSON (default: built-in NOT/AND/OR/XOR)")
        p.add_argument("--out", default=".", help="output directory for report files")
        p.add_argument("--seed", type=int, default=0, help="seed for random inputs")
        p.add_argument("--n-max", type=int, default=N_MAX,
                       help=f"cap on function/netlist input count (hard limit {N_MAX})")

    p = sub.add_parser("gate-info", help="per-gate entropy report for a library")
    common(p)
    p.set_defaults(func=cmd_gate_info)

    p = sub.add_parser("geometry", help="information capacity of a k x k geometry")
    common(p)
    p.add_argument("--side", type=int, required=True, help="grid side length k")
    p.add_argument("--multiplier", action="append", metavar="K=VALUE",
                   help="override or add a geometry multiplier")
    p.set_defaults(func=cmd_geometry)

    p = sub.add_parser("analyze", help="information flow through a BLIF netlist")
    common(p)
    p.add_argument("netlist", help="BLIF file")
    p.add_argument("--candidates", nargs="+", metavar="BLIF",
                   help="candidate netlists for the potential/vitality computation")
    p.add_argument("--vitality", action="store_true",
                   help="report vitality (against --candidates, or the netlist itself)")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("build-dd", help="entropy-guided decision diagram construction")
    common(p)
    p.add_argument("function", nargs="?", help="PLA file")
    p.add_argument("--random", type=int, metavar="N",
                   help="build for a seeded random N-input function instead of a file")
    p.add_argument("--output", help="output name to build for a multi-output function")
    p.add_argument("--mode", choices=("ordered", "free"), default="ordered")
    p.add_argument("--oracle", action="store_true",
                   help="also sweep every variable order exhaustively")
    p.add_argument("--ordering-ceiling", type=int, default=ORDERING_CEILING_DEFAULT,
                   help="max inputs for the --oracle sweep (hard limit 10)")
    p.set_defaults(func=cmd_build_dd)

    p = sub.add_parser("potential", help="minimum logical work over candidate netlists")
    common(p)
    p.add_argument("function", help="PLA file with the target function")
    p.add_argument("--candidates", nargs="+", metavar="BLIF",
                   help="candidate netlists (must implement the function)")
    p.add_argument("--enumerate", action="store_true",
                   help="search all netlists of at most --max-gates instances")
    p.add_argument("--max-gates", type=int, default=2,
                   help="enumeration bound (hard limit 4; growth is steep)")
    p.set_defaults(func=cmd_potential)
    return parser


def main(argv=None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    parser = build_parser()
    args = parser.parse_args(argv)
    args._argv = list(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except SemanticError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except VitalityUndefinedError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 5


if __name__ == "__main__":
    sys.exit(main())
