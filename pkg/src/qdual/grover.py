"""Grover search on ``q`` qubits for a single marked basis state."""
from __future__ import annotations

import math
from dataclasses import dataclass

from .gates import conditional_phase_flip, diffusion_via_hadamards, hadamard_all, inversion_about_mean
from .state import StateVector, basis_state, born_probabilities, check_index


@dataclass(frozen=True)
class GroverRun:
    qubits: int
    marked: int
    iterations: int
    final_state: StateVector

    @property
    def success_probability(self) -> float:
        return float(born_probabilities(self.final_state)[self.marked])


def grover_search(qubits: int, marked: int, iterations: int, diffusion: str = "mean") -> GroverRun:
    """Run ``iterations`` rounds of (phase flip on ``marked``, diffusion) from ``H|0...0>``.

    ``diffusion="mean"`` reflects about the mean amplitude directly;
    ``diffusion="hadamard"`` uses the H / flip |0...0> / H spelling, which
    differs only by a global sign.
    """
    check_index(qubits, marked)
    if iterations < 0:
        raise ValueError(f"iterations must be >= 0, got {iterations}")
    if diffusion == "mean":
        diffuse = lambda s: inversion_about_mean(s)[0]  # noqa: E731
    elif diffusion == "hadamard":
        diffuse = diffusion_via_hadamards
    else:
        raise ValueError(f"unknown diffusion form {diffusion!r}; expected 'mean' or 'hadamard'")

    state = hadamard_all(basis_state(qubits, 0))
    for _ in range(iterations):
        state = diffuse(conditional_phase_flip(state, marked))
    return GroverRun(qubits, marked, iterations, state)


def grover_angle(qubits: int) -> float:
    return math.asin(2.0 ** (-qubits / 2))


def analytic_success_probability(qubits: int, iterations: int) -> float:
    """``sin^2((2k + 1) * asin(2**(-q/2)))`` for ``k`` iterations."""
    return math.sin((2 * iterations + 1) * grover_angle(qubits)) ** 2


def optimal_iterations(qubits: int) -> int:
    """``round(pi / (4 * asin(2**(-q/2))) - 1/2)``, at least 1. Halves round up."""
    if qubits < 1:
        raise ValueError(f"qubit count must be >= 1, got {qubits}")
    x = math.pi / (4 * grover_angle(qubits)) - 0.5
    return max(1, math.floor(x + 0.5))
