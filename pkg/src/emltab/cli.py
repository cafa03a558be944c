"""Command-line interface.

Exit codes: 0 satisfiable (or true / model found), 1 unsatisfiable (or
false / no model), 2 usage, parse or input errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from .bench import default_timeout_ms, run_bench
from .dot import to_dot
from .expansion import CutMode
from .formula import Formula, agents_of, conj, sorted_formulas
from .gen import GenParams, corpus
from .oracle import brute_force_sat
from .parser import ParseError, parse, parse_set
from .semantics import (
    ModelError,
    extension,
    format_model,
    hintikka_from_tableau,
    parse_model,
    pseudo_model_from_hintikka,
)
from .tableau import Phase, TableauRun, run

EXIT_SAT, EXIT_UNSAT, EXIT_ERROR = 0, 1, 2
NO_CUT_WARNING = (
    "warning: no-cut mode is unsound and only meant for diagnostics; "
    "a 'sat' verdict may be wrong"
)


class UsageError(Exception):
    pass


def _add_input(p: argparse.ArgumentParser) -> None:
    p.add_argument("formula", nargs="?", help="formula text")
    p.add_argument("-f", "--file", help="file with one formula per line, read as a set")


def _add_mode(p: argparse.ArgumentParser) -> None:
    p.add_argument(
        "--mode",
        choices=[m.value for m in CutMode],
        default=CutMode.RESTRICTED.value,
        help="cut mode (default: restricted)",
    )


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="emltab", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="decide satisfiability, or model-check with --kripke")
    _add_input(p)
    _add_mode(p)
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.add_argument("--dot", choices=[ph.value for ph in Phase], help="print a tableau phase as DOT")
    p.add_argument("--model", action="store_true", help="print the extracted pseudo-model")
    p.add_argument("--trace", action="store_true", help="print the elimination log")
    p.add_argument("--kripke", metavar="FILE", help="model-check against this model file")
    p.add_argument("--state", help="state to check (with --kripke; default: all)")

    p = sub.add_parser("model", help="print a pseudo-model of a satisfiable input")
    _add_input(p)
    _add_mode(p)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("dot", help="print a tableau phase as DOT")
    _add_input(p)
    _add_mode(p)
    p.add_argument("--phase", choices=[ph.value for ph in Phase], default=Phase.FINAL.value)
    p.add_argument("-o", "--output", help="write to this file instead of stdout")

    p = sub.add_parser("oracle", help="brute-force search for a small model")
    _add_input(p)
    p.add_argument("--max-states", type=int, default=3, help="largest model size (1-4)")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("bench", help="solve a random or given corpus in several modes")
    p.add_argument("-f", "--file", help="corpus file, one formula per line")
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--depth", type=int, default=4)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--agents", default="a,b,c")
    p.add_argument("--atoms", default="p,q")
    p.add_argument(
        "--modes",
        default="restricted,unrestricted",
        help="comma-separated cut modes",
    )
    p.add_argument("--timeout-ms", type=int, help="per-run limit (default: $EMLTAB_TIMEOUT_MS or 10000)")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--csv", metavar="FILE", help="write per-run records as CSV")
    p.add_argument("--json", action="store_true")
    return ap


def _read_input(args: argparse.Namespace) -> list[Formula]:
    if args.formula is not None and args.file is not None:
        raise UsageError("give either a formula or -f FILE, not both")
    if args.file is not None:
        fs = parse_set(Path(args.file).read_text())
        if not fs:
            raise UsageError(f"{args.file}: no formulas")
        return fs
    if args.formula is None:
        raise UsageError("missing formula (or -f FILE)")
    return [parse(args.formula)]


def _mode(args: argparse.Namespace) -> CutMode:
    mode = CutMode(args.mode)
    if mode is CutMode.NO_CUT:
        print(NO_CUT_WARNING, file=sys.stderr)
    return mode


def _model_text(r: TableauRun, theta: list[Formula]) -> str | None:
    if not r.verdict.satisfiable:
        return None
    h = hintikka_from_tableau(r.final, theta)
    pm = pseudo_model_from_hintikka(h, sorted(agents_of(r.pretableau.index.formulas)))
    witness = sorted(r.final.alive).index(r.verdict.witness)
    return f"# witness: {pm.states[witness]}\n" + format_model(pm)


def _trace_lines(r: TableauRun) -> list[str]:
    ix = r.final.index
    lines = []
    for rem in r.final.log:
        rule = rem.rule if rem.eventuality is None else f"{rem.rule}({rem.eventuality})"
        lines.append(f"cycle {rem.cycle}: {rule} removes D{rem.state} {ix.format(r.final.states[rem.state])}")
    return lines


def cmd_check(args: argparse.Namespace) -> int:
    if args.kripke is not None:
        return _kripke_check(args)
    if args.state is not None:
        raise UsageError("--state needs --kripke")
    if args.json and args.dot:
        raise UsageError("--json and --dot both write to stdout; pick one")
    if args.dot and (args.model or args.trace):
        raise UsageError("--dot cannot be combined with --model or --trace")
    theta = _read_input(args)
    mode = _mode(args)
    r = run(theta, mode)
    v = r.verdict
    code = EXIT_SAT if v.satisfiable else EXIT_UNSAT
    if args.dot:
        sys.stdout.write(to_dot(r, args.dot))
        return code
    model = _model_text(r, theta) if args.model else None
    if args.json:
        out = {
            "verdict": v.status,
            "witness_label": None
            if v.witness_label is None
            else [str(f) for f in sorted_formulas(v.witness_label)],
            "stats": v.stats.as_dict(),
            "mode": mode.value,
            "diagnostic": v.diagnostic,
        }
        if args.trace:
            out["trace"] = _trace_lines(r)
        if args.model:
            out["model"] = model
        print(json.dumps(out, indent=2))
        return code
    print(v.status)
    if v.witness_label is not None:
        print("witness: {" + ", ".join(str(f) for f in sorted_formulas(v.witness_label)) + "}")
    print("stats: " + " ".join(f"{k}={val}" for k, val in v.stats.as_dict().items()))
    if args.trace:
        for line in _trace_lines(r):
            print(line)
    if args.model:
        if model is None:
            print("no model: input is unsatisfiable", file=sys.stderr)
        else:
            sys.stdout.write(model)
    return code


def _kripke_check(args: argparse.Namespace) -> int:
    if args.dot or args.model or args.trace or args.mode != CutMode.RESTRICTED.value:
        raise UsageError("--kripke cannot be combined with --dot, --model, --trace or --mode")
    theta = _read_input(args)
    m = parse_model(Path(args.kripke).read_text())
    ext = extension(m, conj(*theta))
    states = [m.state_index(args.state)] if args.state is not None else range(m.size)
    results = {m.states[s]: bool(ext >> s & 1) for s in states}
    if args.json:
        print(json.dumps({"results": results}))
    else:
        for s, ok in results.items():
            print(f"{s}: {'true' if ok else 'false'}")
    return EXIT_SAT if all(results.values()) else EXIT_UNSAT


def cmd_model(args: argparse.Namespace) -> int:
    theta = _read_input(args)
    r = run(theta, _mode(args))
    model = _model_text(r, theta)
    if args.json:
        print(json.dumps({"verdict": r.verdict.status, "model": model}))
    elif model is None:
        print("unsat")
    else:
        sys.stdout.write(model)
    return EXIT_SAT if model is not None else EXIT_UNSAT


def cmd_dot(args: argparse.Namespace) -> int:
    theta = _read_input(args)
    r = run(theta, _mode(args))
    text = to_dot(r, args.phase)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_SAT if r.verdict.satisfiable else EXIT_UNSAT


def cmd_oracle(args: argparse.Namespace) -> int:
    if not 1 <= args.max_states <= 4:
        raise UsageError("--max-states must be between 1 and 4")
    theta = _read_input(args)
    found = brute_force_sat(theta, args.max_states)
    if args.json:
        print(json.dumps({
            "found": found is not None,
            "state": None if found is None else found[0].states[found[1]],
            "model": None if found is None else format_model(found[0]),
        }))
    elif found is None:
        print(f"no model with at most {args.max_states} states")
    else:
        m, s = found
        print(f"# satisfied at: {m.states[s]}")
        sys.stdout.write(format_model(m))
    return EXIT_SAT if found is not None else EXIT_UNSAT


def cmd_bench(args: argparse.Namespace) -> int:
    modes = [CutMode(m.strip()) for m in args.modes.split(",") if m.strip()]
    if not modes:
        raise UsageError("--modes is empty")
    if CutMode.NO_CUT in modes:
        print(NO_CUT_WARNING, file=sys.stderr)
    if args.file:
        items: list = parse_set(Path(args.file).read_text())
    else:
        params = GenParams(
            max_depth=args.depth,
            agents=tuple(a for a in args.agents.split(",") if a),
            atoms=tuple(a for a in args.atoms.split(",") if a),
            seed=args.seed,
        )
        items = corpus(params, args.count)
    timeout = args.timeout_ms if args.timeout_ms is not None else default_timeout_ms()
    report = run_bench(items, modes, timeout, args.workers)
    if args.csv:
        Path(args.csv).write_text(report.to_csv())
    if args.json:
        print(json.dumps({"totals": report.totals(), "disagreements": report.disagreements}))
    else:
        print(report.summary())
    return EXIT_UNSAT if report.disagreements else EXIT_SAT


COMMANDS = {
    "check": cmd_check,
    "model": cmd_model,
    "dot": cmd_dot,
    "oracle": cmd_oracle,
    "bench": cmd_bench,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_ERROR if e.code else 0
    try:
        return COMMANDS[args.command](args)
    except (UsageError, ParseError, ModelError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
