"""Hadamard, conditional phase shift and inversion about the mean.

Gates act on a copy of the amplitude array by pairing indices that differ in
one bit (stride ``2**(qubits - 1 - k)`` for qubit ``k``); no ``2**q x 2**q``
matrix is ever built.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .state import StateVector, check_index

INV_SQRT2 = 1.0 / math.sqrt(2.0)


@dataclass(frozen=True)
class PhaseShiftSpec:
    """Multiply the amplitude of basis state ``marked`` by ``exp(i*theta)``.

    ``theta == pi`` is the conditional phase flip.
    """

    marked: int
    theta: float = math.pi

    def __post_init__(self):
        if not math.isfinite(self.theta):
            raise ValueError(f"phase angle must be finite, got {self.theta!r}")

    @property
    def is_flip(self) -> bool:
        return self.theta == math.pi


@dataclass(frozen=True)
class InversionTrace:
    """Mean amplitude and the states on either side of a reflection about it."""

    mean: complex
    before: StateVector
    after: StateVector


def phase_factor(theta: float) -> complex:
    """``exp(i*theta)``, exact for multiples of pi/2 (so a flip is exactly -1)."""
    quarter = theta / (math.pi / 2)
    if quarter == int(quarter):
        return (1.0, 1j, -1.0, -1j)[int(quarter) % 4]
    return complex(math.cos(theta), math.sin(theta))


def _butterfly(amps: np.ndarray, qubits: int, k: int) -> np.ndarray:
    # view as (high bits, bit k, low bits); bit k of the index is the middle axis
    v = amps.reshape(2**k, 2, 2 ** (qubits - 1 - k))
    a0 = v[:, 0, :].copy()
    a1 = v[:, 1, :]
    out = np.empty_like(v)
    out[:, 0, :] = a0 + a1
    out[:, 1, :] = a0 - a1
    return out.reshape(-1)


def hadamard_on_qubit(state: StateVector, k: int) -> StateVector:
    """Apply the Hadamard (half-silvered mirror) transform to qubit ``k``.

    >>> hadamard_on_qubit(StateVector(1, [0, 1]), 0).amps.real.round(6).tolist()
    [0.707107, -0.707107]
    """
    if not 0 <= k < state.qubits:
        raise ValueError(f"qubit label {k} out of range for {state.qubits} qubit(s)")
    return StateVector(state.qubits, _butterfly(state.amps, state.qubits, k) * INV_SQRT2)


def hadamard_all(state: StateVector) -> StateVector:
    """Walsh-Hadamard transform on every qubit.

    Same map as :func:`hadamard_on_qubit` over labels ``0..q-1``, but the
    unnormalized butterflies run first and the ``2**(-q/2)`` factor is applied
    once. For even ``q`` that factor is a power of two, so dyadic amplitudes
    such as the uniform 2-qubit superposition come out exact.
    """
    q = state.qubits
    amps = state.amps
    for k in range(q):
        amps = _butterfly(amps, q, k)
    scale = 2.0 ** -(q // 2)
    if q % 2:
        scale *= INV_SQRT2
    return StateVector(q, amps * scale)


def conditional_phase_shift(state: StateVector, spec: PhaseShiftSpec) -> StateVector:
    check_index(state.qubits, spec.marked)
    amps = state.amps.copy()
    amps[spec.marked] *= phase_factor(spec.theta)
    return StateVector(state.qubits, amps)


def conditional_phase_flip(state: StateVector, marked: int) -> StateVector:
    return conditional_phase_shift(state, PhaseShiftSpec(marked, math.pi))


def inversion_about_mean(state: StateVector) -> tuple[StateVector, InversionTrace]:
    """Reflect every amplitude about the mean amplitude: ``a_i -> 2*mu - a_i``.

    Returns the reflected state together with an :class:`InversionTrace`
    holding ``mu``.
    """
    mean = complex(state.amps.sum() / state.dim)
    after = StateVector(state.qubits, 2 * mean - state.amps)
    return after, InversionTrace(mean, state, after)


def diffusion_via_hadamards(state: StateVector) -> StateVector:
    """Hadamard on all qubits, flip ``|0...0>``, Hadamard on all qubits.

    This equals ``-1`` times :func:`inversion_about_mean`; the global sign is
    left in place rather than normalized away.
    """
    s = hadamard_all(state)
    s = conditional_phase_flip(s, 0)
    return hadamard_all(s)
