"""Command-line front end.

    qdual run FILE.qc --model both --exact
    qdual run --builtin figure2 --model collapse --trials 100000 --seed 7 --format csv
    qdual demo figure3 --model both
    qdual grover --qubits 3 --marked 101 --iterations 2

Exit status: 0 on success, 1 when the circuit cannot be read or parsed,
2 on usage errors.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from typing import Optional, Sequence

from .dsl import MAX_QUBITS, ParseError, parse_circuit
from .grover import grover_search, optimal_iterations
from .interpretation import BUILTIN_CIRCUITS, Circuit, builtin_circuit, run_ensemble, run_exact
from .state import bitstring, born_probabilities, total_variation

MODELS = ("unitary", "collapse")
BAR_WIDTH = 40


def _sig12(x: float) -> float:
    return float(f"{x:.12g}")


class _Failure(Exception):
    """Input could not be read or parsed (exit status 1)."""


# -- report assembly ---------------------------------------------------------


def build_report(
    circuit: Circuit, source: str, model: str, trials: int, seed: Optional[int], workers: int = 1
) -> dict:
    """Run ``circuit`` and collect the results as a JSON-ready dict."""
    models = MODELS if model == "both" else (model,)
    n = 2**circuit.qubits
    results = {}
    probs = {}
    for name in models:
        if trials == 0:
            p = run_exact(circuit, name)
            counts = None
        else:
            dist = run_ensemble(circuit, name, trials, seed, workers=workers)
            p = dist.frequencies()
            counts = {bitstring(i, circuit.qubits): dist.counts[i] for i in range(n)}
        probs[name] = p
        results[name] = {
            "qubits": circuit.qubits,
            "trials": trials,
            "counts": counts,
            "frequencies": {bitstring(i, circuit.qubits): _sig12(p[i]) for i in range(n)},
        }
    report = {
        "source": source,
        "qubits": circuit.qubits,
        "model": model,
        "mode": "exact" if trials == 0 else "monte_carlo",
        "trials": trials,
        "seed": seed,
        "results": results,
    }
    if model == "both":
        report["total_variation"] = _sig12(total_variation(probs["unitary"], probs["collapse"]))
    return report


def render_json(report: dict) -> str:
    return json.dumps(report, indent=2) + "\n"


def render_csv(report: dict) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    both = report["model"] == "both"
    header = ["outcome", "bitstring", "count", "frequency"]
    writer.writerow(["model"] + header if both else header)
    for name, res in report["results"].items():
        for i, (bits, freq) in enumerate(res["frequencies"].items()):
            count = "" if res["counts"] is None else res["counts"][bits]
            row = [i, bits, count, f"{freq:.12g}"]
            writer.writerow([name] + row if both else row)
    if both:
        buf.write(f"# total_variation,{report['total_variation']:.12g}\n")
    return buf.getvalue()


def _bar(p: float) -> str:
    return "#" * int(round(p * BAR_WIDTH))


def render_text(report: dict) -> str:
    lines = [
        f"source: {report['source']}  qubits: {report['qubits']}  mode: {report['mode']}"
        + (f"  trials: {report['trials']}  seed: {report['seed']}" if report["trials"] else "")
    ]
    for name, res in report["results"].items():
        lines.append(f"[{name}]")
        for bits, freq in res["frequencies"].items():
            count = "" if res["counts"] is None else f" {res['counts'][bits]:>10}"
            lines.append(f"  |{bits}>{count} {freq:7.4f}  {_bar(freq)}".rstrip())
    if "total_variation" in report:
        lines.append(f"total variation distance: {report['total_variation']:.4f}")
    return "\n".join(lines) + "\n"


RENDERERS = {"text": render_text, "csv": render_csv, "json": render_json}


def grover_report(qubits: int, marked: int, iterations: int) -> dict:
    run = grover_search(qubits, marked, iterations)
    p = born_probabilities(run.final_state)
    return {
        "qubits": qubits,
        "marked": bitstring(marked, qubits),
        "iterations": iterations,
        "success_probability": _sig12(run.success_probability),
        "probabilities": {bitstring(i, qubits): _sig12(x) for i, x in enumerate(p)},
    }


def render_grover(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["outcome", "bitstring", "probability"])
        for i, (bits, p) in enumerate(report["probabilities"].items()):
            writer.writerow([i, bits, f"{p:.12g}"])
        return buf.getvalue()
    lines = [
        f"qubits: {report['qubits']}  marked: |{report['marked']}>  iterations: {report['iterations']}",
        f"success probability: {report['success_probability']:.4f}",
    ]
    for bits, p in report["probabilities"].items():
        lines.append(f"  |{bits}> {p:7.4f}  {_bar(p)}".rstrip())
    return "\n".join(lines) + "\n"


# -- argument handling -------------------------------------------------------


def _add_run_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--model", choices=MODELS + ("both",), default="both")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--exact", action="store_true", help="exact distributions (default)")
    mode.add_argument("--trials", type=int, default=0, help="Monte Carlo trials; 0 means exact")
    p.add_argument("--seed", type=int, help="master seed, required with --trials")
    p.add_argument("--format", choices=tuple(RENDERERS), default="text")
    p.add_argument("--workers", type=int, default=1, help="processes for Monte Carlo trials")


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qdual", description="Compare unitary and collapse predictions for small circuits."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a circuit file or a builtin circuit")
    run.add_argument("file", nargs="?", help="circuit source (.qc)")
    run.add_argument("--builtin", choices=BUILTIN_CIRCUITS)
    _add_run_options(run)

    demo = sub.add_parser("demo", help="same as run --builtin NAME")
    demo.add_argument("builtin", choices=BUILTIN_CIRCUITS)
    _add_run_options(demo)

    grover = sub.add_parser("grover", help="Grover search for one marked state")
    grover.add_argument("--qubits", type=int, required=True)
    grover.add_argument("--marked", required=True, help="bitstring, qubit 0 leftmost")
    grover.add_argument("--iterations", type=int, help="default: optimal iteration count")
    grover.add_argument("--format", choices=tuple(RENDERERS), default="text")
    return parser


def _check_run_args(parser: argparse.ArgumentParser, args: argparse.Namespace) -> None:
    if args.command == "run" and (args.file is None) == (args.builtin is None):
        parser.error("run: give exactly one of FILE or --builtin")
    if args.trials < 0:
        parser.error("--trials must be >= 0")
    if args.trials > 0 and args.seed is None:
        parser.error("--seed is required with --trials")
    if args.seed is not None and not 0 <= args.seed < 2**64:
        parser.error("--seed must be in [0, 2**64)")
    if args.workers < 1:
        parser.error("--workers must be >= 1")


def _load(args: argparse.Namespace) -> tuple[Circuit, str]:
    if args.builtin is not None:
        return builtin_circuit(args.builtin), f"builtin:{args.builtin}"
    path = args.file
    try:
        with open(path, encoding="utf-8", newline="") as fh:
            text = fh.read()
    except (OSError, UnicodeDecodeError) as exc:
        raise _Failure(f"{path}: cannot read circuit: {exc}") from None
    try:
        return parse_circuit(text), path
    except ParseError as exc:
        raise _Failure(f"{path}:{exc.line}:{exc.column}: {exc.message}") from None


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)

    if args.command == "grover":
        q = args.qubits
        if not 1 <= q <= MAX_QUBITS:
            parser.error(f"--qubits must be in 1..{MAX_QUBITS}")
        if len(args.marked) != q or set(args.marked) - {"0", "1"}:
            parser.error(f"--marked must be a bitstring of length {q}, got {args.marked!r}")
        k = optimal_iterations(q) if args.iterations is None else args.iterations
        if k < 0:
            parser.error("--iterations must be >= 0")
        sys.stdout.write(render_grover(grover_report(q, int(args.marked, 2), k), args.format))
        return 0

    _check_run_args(parser, args)
    try:
        circuit, source = _load(args)
        if args.trials > 0 and not circuit.measured:
            raise _Failure(f"{source}: circuit has no 'measure' statement; use --exact")
    except _Failure as exc:
        print(f"qdual: {exc}", file=sys.stderr)
        return 1
    report = build_report(circuit, source, args.model, args.trials, args.seed, args.workers)
    sys.stdout.write(RENDERERS[args.format](report))
    return 0


if __name__ == "__main__":
    sys.exit(main())
