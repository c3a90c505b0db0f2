"""Line-oriented circuit text format (``.qc``).

::

    # comment
    qubits 2            required header, first statement
    init 00             optional, directly after the header (default all zeros)
    h all | h <k>       Hadamard on every qubit / on qubit k
    cpf <bits>          phase flip of basis state <bits>
    cps <bits> <angle>  phase shift by <angle> radians
    diffuse             inversion about the mean
    checkpoint <name>   point where the two semantics diverge
    measure             optional, final statement only

``<bits>`` has one character per qubit, qubit 0 leftmost. ``<angle>`` is a
decimal or a multiple of pi: ``pi``, ``-pi``, ``pi/2``, ``2pi``, ``3*pi/4``.
Parsing stops at the first error.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass

from .gates import PhaseShiftSpec
from .interpretation import Checkpoint, Circuit, Diffuse, Hadamard, Measure, PhaseShift, Stage
from .state import bitstring

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
_UINT = re.compile(r"[0-9]+\Z")
_BITS = re.compile(r"[01]+\Z")
_PI_ANGLE = re.compile(r"(?P<sign>[+-])?(?:(?P<k>[0-9]+)\*?)?pi(?:/(?P<m>[0-9]+))?\Z")
MAX_QUBITS = 20

_DECIMAL = re.compile(r"[+-]?(?:[0-9]+\.?[0-9]*|\.[0-9]+)(?:[eE][+-]?[0-9]+)?\Z")


class ParseError(ValueError):
    def __init__(self, line: int, column: int, message: str, token: str = ""):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column
        self.message = message
        self.token = token


@dataclass(frozen=True)
class _Token:
    text: str
    line: int
    column: int

    def error(self, message: str) -> ParseError:
        return ParseError(self.line, self.column, message, self.text)


def _tokenize(raw: str, lineno: int) -> list[_Token]:
    code = raw.split("#", 1)[0]
    return [_Token(m.group(), lineno, m.start() + 1) for m in re.finditer(r"\S+", code)]


def parse_angle(text: str) -> float:
    """Radians from a decimal or pi-multiple literal; ``ValueError`` if malformed."""
    m = _PI_ANGLE.match(text)
    if m:
        k = int(m["k"]) if m["k"] else 1
        mdiv = int(m["m"]) if m["m"] else 1
        if mdiv == 0:
            raise ValueError("division by zero in angle")
        value = k * math.pi / mdiv
        return -value if m["sign"] == "-" else value
    if _DECIMAL.match(text):
        value = float(text)
        if math.isfinite(value):
            return value
    raise ValueError(f"malformed angle {text!r}")


def format_angle(theta: float) -> str:
    if theta == math.pi:
        return "pi"
    if theta == math.pi / 2:
        return "pi/2"
    return f"{theta:.17g}"


def _arity(head: _Token, args: list[_Token], n: int, usage: str) -> None:
    if len(args) < n:
        raise head.error(f"'{head.text}' expects {usage}")
    if len(args) > n:
        raise args[n].error(f"unexpected token after '{head.text}' statement; expected {usage}")


def _bits(tok: _Token, qubits: int) -> int:
    if not _BITS.match(tok.text):
        raise tok.error(f"expected a bitstring of 0/1 characters, got {tok.text!r}")
    if len(tok.text) != qubits:
        raise tok.error(f"bitstring length {len(tok.text)} != qubit count {qubits}")
    return int(tok.text, 2)


def parse_circuit(text: str) -> Circuit:
    """Parse circuit source text; raises :class:`ParseError` with a position."""
    qubits = None
    initial = 0
    stages: list[Stage] = []
    labels: set[str] = set()
    measure_tok = None
    init_seen = False

    for lineno, raw in enumerate(text.split("\n"), start=1):
        tokens = _tokenize(raw.rstrip("\r"), lineno)
        if not tokens:
            continue
        head, args = tokens[0], tokens[1:]
        kw = head.text

        if measure_tok is not None:
            raise measure_tok.error("'measure' must be the final statement")

        if kw == "qubits":
            if qubits is not None:
                raise head.error("duplicate 'qubits' header")
            _arity(head, args, 1, "a qubit count")
            if not _UINT.match(args[0].text) or not 1 <= int(args[0].text) <= MAX_QUBITS:
                raise args[0].error(
                    f"qubit count must be an integer in 1..{MAX_QUBITS}, got {args[0].text!r}"
                )
            qubits = int(args[0].text)
            continue
        if qubits is None:
            raise head.error(f"expected header 'qubits <n>' before {kw!r}")

        if kw == "init":
            if stages or init_seen:
                raise head.error("'init' must directly follow the 'qubits' header")
            _arity(head, args, 1, "a bitstring")
            initial = _bits(args[0], qubits)
            init_seen = True
        elif kw == "h":
            _arity(head, args, 1, "a qubit index or 'all'")
            arg = args[0]
            if arg.text == "all":
                stages.append(Hadamard())
            elif _UINT.match(arg.text):
                k = int(arg.text)
                if k >= qubits:
                    raise arg.error(f"qubit index {k} out of range (qubit count {qubits})")
                stages.append(Hadamard(k))
            else:
                raise arg.error(f"expected a qubit index or 'all', got {arg.text!r}")
        elif kw == "cpf":
            _arity(head, args, 1, "a bitstring")
            stages.append(PhaseShift(PhaseShiftSpec(_bits(args[0], qubits), math.pi)))
        elif kw == "cps":
            _arity(head, args, 2, "a bitstring and an angle")
            marked = _bits(args[0], qubits)
            try:
                theta = parse_angle(args[1].text)
            except ValueError:
                raise args[1].error(
                    f"malformed angle {args[1].text!r}; expected a decimal or k*pi/m"
                ) from None
            stages.append(PhaseShift(PhaseShiftSpec(marked, theta)))
        elif kw == "diffuse":
            _arity(head, args, 0, "no arguments")
            stages.append(Diffuse())
        elif kw == "checkpoint":
            _arity(head, args, 1, "a label")
            label = args[0].text
            if not _IDENT.match(label):
                raise args[0].error(f"invalid checkpoint label {label!r}")
            if label in labels:
                raise args[0].error(f"duplicate checkpoint label {label!r}")
            labels.add(label)
            stages.append(Checkpoint(label))
        elif kw == "measure":
            _arity(head, args, 0, "no arguments")
            stages.append(Measure())
            measure_tok = head
        else:
            raise head.error(
                f"unknown keyword {kw!r}; expected one of h, cpf, cps, diffuse, checkpoint, measure"
            )

    if qubits is None:
        raise ParseError(1, 1, "missing header 'qubits <n>'")
    return Circuit(qubits, tuple(stages), initial)


def print_circuit(circuit: Circuit) -> str:
    """Canonical source text; ``parse_circuit(print_circuit(c)) == c``."""
    q = circuit.qubits
    lines = [f"qubits {q}"]
    if circuit.initial:
        lines.append(f"init {bitstring(circuit.initial, q)}")
    for stage in circuit.stages:
        if isinstance(stage, Hadamard):
            lines.append("h all" if stage.qubit is None else f"h {stage.qubit}")
        elif isinstance(stage, PhaseShift):
            bits = bitstring(stage.spec.marked, q)
            if stage.spec.is_flip:
                lines.append(f"cpf {bits}")
            else:
                lines.append(f"cps {bits} {format_angle(stage.spec.theta)}")
        elif isinstance(stage, Diffuse):
            lines.append("diffuse")
        elif isinstance(stage, Checkpoint):
            lines.append(f"checkpoint {stage.label}")
        elif isinstance(stage, Measure):
            lines.append("measure")
    return "\n".join(lines) + "\n"
