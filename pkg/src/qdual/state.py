"""State vectors, Born probabilities and seeded measurement sampling.

Basis index convention: the leftmost label of a ket is the most significant
bit, so with two qubits ``|11>`` is index 3 and ``|01>`` is index 1. Qubit
``k`` therefore lives at bit position ``qubits - 1 - k`` of the index.
"""
from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from itertools import accumulate
from typing import Sequence, Union

import numpy as np

NORM_TOL = 1e-9

ProbabilityLike = Union["MeasurementDistribution", Sequence[float], np.ndarray]


def check_index(qubits: int, index: int) -> int:
    """Validate a basis index for a ``qubits``-qubit register and return it."""
    if not 0 <= index < 2**qubits:
        raise ValueError(
            f"basis index {index} out of range for {qubits} qubit(s) "
            f"(expected 0 <= index < {2**qubits})"
        )
    return int(index)


def bitstring(index: int, qubits: int) -> str:
    """Ket label of ``index``, e.g. ``bitstring(1, 2) == '01'``."""
    return format(index, f"0{qubits}b")


def parse_bitstring(bits: str, qubits: int | None = None) -> int:
    """Inverse of :func:`bitstring`; leftmost character is qubit 0."""
    if not bits or set(bits) - {"0", "1"}:
        raise ValueError(f"not a bitstring: {bits!r}")
    if qubits is not None and len(bits) != qubits:
        raise ValueError(f"bitstring length {len(bits)} != qubit count {qubits}")
    return int(bits, 2)


@dataclass(frozen=True, eq=False)
class StateVector:
    """Normalized amplitudes over the ``2**qubits`` computational basis states.

    ``amps`` is stored as a read-only ``complex128`` array; every gate returns
    a new instance.
    """

    qubits: int
    amps: np.ndarray

    def __post_init__(self):
        if self.qubits < 1:
            raise ValueError(f"qubit count must be >= 1, got {self.qubits}")
        amps = np.array(self.amps, dtype=np.complex128).reshape(-1)
        if amps.shape[0] != 2**self.qubits:
            raise ValueError(
                f"expected {2**self.qubits} amplitudes for {self.qubits} qubit(s), "
                f"got {amps.shape[0]}"
            )
        if not np.all(np.isfinite(amps)):
            raise ValueError("amplitudes must be finite")
        norm = float(np.vdot(amps, amps).real)
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"state is not normalized: sum |a|^2 = {norm!r}")
        amps.flags.writeable = False
        object.__setattr__(self, "amps", amps)

    @classmethod
    def from_amplitudes(cls, amps: Sequence[complex]) -> StateVector:
        """Build a state from a power-of-two length amplitude sequence."""
        n = len(amps)
        qubits = n.bit_length() - 1
        if n < 2 or n != 2**qubits:
            raise ValueError(f"amplitude count must be a power of two >= 2, got {n}")
        return cls(qubits, np.asarray(amps, dtype=np.complex128))

    @property
    def dim(self) -> int:
        return self.amps.shape[0]

    def norm_squared(self) -> float:
        return float(np.vdot(self.amps, self.amps).real)

    def __eq__(self, other):
        if not isinstance(other, StateVector):
            return NotImplemented
        return self.qubits == other.qubits and np.array_equal(self.amps, other.amps)

    __hash__ = None

    def __repr__(self):
        return f"StateVector(qubits={self.qubits}, amps={self.amps.tolist()})"


def basis_state(qubits: int, index: int = 0) -> StateVector:
    """The computational basis state ``|index>`` on ``qubits`` qubits.

    >>> basis_state(2, 0).amps.real.tolist()
    [1.0, 0.0, 0.0, 0.0]
    """
    if qubits < 1:
        raise ValueError(f"qubit count must be >= 1, got {qubits}")
    check_index(qubits, index)
    amps = np.zeros(2**qubits, dtype=np.complex128)
    amps[index] = 1.0
    return StateVector(qubits, amps)


def born_probabilities(state: StateVector) -> np.ndarray:
    """Outcome probabilities ``|a_i|^2`` of a computational-basis measurement.

    The squared magnitudes are divided by their sum, which removes the few-ulp
    norm drift that products of ``1/sqrt(2)`` leave behind.
    """
    amps = state.amps
    p = amps.real * amps.real + amps.imag * amps.imag
    return p / p.sum()


def cumulative(probabilities: Sequence[float]) -> list[float]:
    """Left-to-right running sums used by the inverse-CDF sampler."""
    return list(accumulate(float(p) for p in probabilities))


def draw_index(cdf: Sequence[float], u: float) -> int:
    """Map a uniform ``u`` in ``[0, 1)`` to an outcome.

    Outcome ``i`` owns the half-open interval ``[cdf[i-1], cdf[i])``. If
    rounding leaves ``cdf[-1]`` below ``u`` the last outcome with non-zero
    weight is returned.
    """
    i = bisect_right(cdf, u)
    if i < len(cdf):
        return i
    i = len(cdf) - 1
    while i > 0 and cdf[i] == cdf[i - 1]:
        i -= 1
    return i


def sample_measurement(state: StateVector, rng: np.random.Generator) -> int:
    """Born-sample a basis index from ``state``.

    Consumes exactly one ``rng.random()`` draw per call, so a seeded generator
    reproduces the same sequence of outcomes.
    """
    return draw_index(cumulative(born_probabilities(state)), rng.random())


def trial_rng(master_seed: int, trial_index: int) -> np.random.Generator:
    """Private generator for one trial of an ensemble.

    Splitting rule: ``PCG64(SeedSequence(master_seed, spawn_key=(trial_index,)))``,
    which is the ``trial_index``-th child of ``SeedSequence(master_seed).spawn``.
    Trials can then run in any order or process and still reproduce.
    """
    seq = np.random.SeedSequence(master_seed, spawn_key=(trial_index,))
    return np.random.Generator(np.random.PCG64(seq))


def equal_up_to_global_phase(a: StateVector, b: StateVector, tol: float = 1e-12) -> bool:
    """True if ``a == c * b`` for some unit complex ``c``, component-wise within ``tol``.

    ``c`` is taken from the largest-magnitude component of ``b``.
    """
    if a.qubits != b.qubits:
        raise ValueError(f"qubit count mismatch: {a.qubits} vs {b.qubits}")
    j = int(np.argmax(np.abs(b.amps)))
    ratio = a.amps[j] / b.amps[j]
    c = ratio / abs(ratio) if ratio != 0 else 1.0
    return float(np.max(np.abs(a.amps - c * b.amps))) <= tol


@dataclass(frozen=True)
class MeasurementDistribution:
    """Outcome counts from an ensemble of ``trials`` measurements."""

    qubits: int
    counts: tuple[int, ...]
    trials: int

    def __post_init__(self):
        counts = tuple(int(c) for c in self.counts)
        if len(counts) != 2**self.qubits:
            raise ValueError(
                f"expected {2**self.qubits} counts for {self.qubits} qubit(s), got {len(counts)}"
            )
        if any(c < 0 for c in counts):
            raise ValueError("counts must be non-negative")
        if sum(counts) != self.trials:
            raise ValueError(f"counts sum to {sum(counts)}, expected {self.trials} trials")
        object.__setattr__(self, "counts", counts)

    @classmethod
    def from_outcomes(cls, qubits: int, outcomes: Sequence[int]) -> MeasurementDistribution:
        counts = np.bincount(np.asarray(outcomes, dtype=np.int64), minlength=2**qubits)
        return cls(qubits, tuple(counts.tolist()), len(outcomes))

    def frequency(self, index: int) -> float:
        return self.counts[index] / self.trials

    def frequencies(self) -> np.ndarray:
        return np.asarray(self.counts, dtype=float) / self.trials

    def __add__(self, other: MeasurementDistribution) -> MeasurementDistribution:
        if other.qubits != self.qubits:
            raise ValueError(f"qubit count mismatch: {self.qubits} vs {other.qubits}")
        counts = tuple(x + y for x, y in zip(self.counts, other.counts))
        return MeasurementDistribution(self.qubits, counts, self.trials + other.trials)


def _as_probabilities(p: ProbabilityLike) -> np.ndarray:
    if isinstance(p, MeasurementDistribution):
        return p.frequencies()
    return np.asarray(p, dtype=float).reshape(-1)


def total_variation(p: ProbabilityLike, q: ProbabilityLike) -> float:
    """Total variation distance ``0.5 * sum |p_i - q_i|``.

    Either argument may be a :class:`MeasurementDistribution` (its
    frequencies are used) or a sequence of probabilities.
    """
    p, q = _as_probabilities(p), _as_probabilities(q)
    if p.shape != q.shape:
        raise ValueError(f"outcome spaces differ: {p.shape[0]} vs {q.shape[0]} outcomes")
    return float(0.5 * np.abs(p - q).sum())
