"""Run circuits under unitary or collapse-at-checkpoint semantics.

Under ``UNITARY`` a checkpoint does nothing: the superposition passes through
unchanged. Under ``COLLAPSE`` the state at a checkpoint is replaced by a single
basis state, drawn from the Born weights of the pre-checkpoint amplitudes (or
from weights supplied for that checkpoint label).

Random draws per trial, in circuit order: one per checkpoint (``COLLAPSE``
only), then one for the final measurement.
"""
from __future__ import annotations

import enum
import math
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence, Union

import numpy as np

from .gates import PhaseShiftSpec, conditional_phase_shift, hadamard_all, hadamard_on_qubit, inversion_about_mean
from .state import (
    MeasurementDistribution,
    StateVector,
    basis_state,
    born_probabilities,
    check_index,
    cumulative,
    draw_index,
    trial_rng,
)

DEFAULT_MAX_BRANCHES = 10**6


class BranchLimitError(RuntimeError):
    """Exact collapse enumeration would exceed the configured branch bound."""


# -- stages ------------------------------------------------------------------


@dataclass(frozen=True)
class Hadamard:
    qubit: Optional[int] = None  # None means every qubit


@dataclass(frozen=True)
class PhaseShift:
    spec: PhaseShiftSpec


@dataclass(frozen=True)
class Diffuse:
    pass


@dataclass(frozen=True)
class Checkpoint:
    label: str


@dataclass(frozen=True)
class Measure:
    pass


Stage = Union[Hadamard, PhaseShift, Diffuse, Checkpoint, Measure]


@dataclass(frozen=True)
class Circuit:
    qubits: int
    stages: tuple[Stage, ...]
    initial: int = 0

    def __post_init__(self):
        if self.qubits < 1:
            raise ValueError(f"qubit count must be >= 1, got {self.qubits}")
        stages = tuple(self.stages)
        object.__setattr__(self, "stages", stages)
        check_index(self.qubits, self.initial)
        labels = set()
        for pos, stage in enumerate(stages):
            if isinstance(stage, Hadamard):
                if stage.qubit is not None and not 0 <= stage.qubit < self.qubits:
                    raise ValueError(f"stage {pos}: qubit {stage.qubit} out of range for {self.qubits} qubit(s)")
            elif isinstance(stage, PhaseShift):
                check_index(self.qubits, stage.spec.marked)
            elif isinstance(stage, Checkpoint):
                if stage.label in labels:
                    raise ValueError(f"stage {pos}: duplicate checkpoint label {stage.label!r}")
                labels.add(stage.label)
            elif isinstance(stage, Measure):
                if pos != len(stages) - 1:
                    raise ValueError(f"stage {pos}: measure must be the final stage")
            elif not isinstance(stage, Diffuse):
                raise TypeError(f"stage {pos}: not a stage: {stage!r}")

    @property
    def measured(self) -> bool:
        return bool(self.stages) and isinstance(self.stages[-1], Measure)

    @property
    def checkpoints(self) -> tuple[str, ...]:
        return tuple(s.label for s in self.stages if isinstance(s, Checkpoint))


def apply_stage(state: StateVector, stage: Stage) -> StateVector:
    """Apply a transform stage. Checkpoints and measurement are not transforms."""
    if isinstance(stage, Hadamard):
        if stage.qubit is None:
            return hadamard_all(state)
        return hadamard_on_qubit(state, stage.qubit)
    if isinstance(stage, PhaseShift):
        return conditional_phase_shift(state, stage.spec)
    if isinstance(stage, Diffuse):
        return inversion_about_mean(state)[0]
    raise TypeError(f"{type(stage).__name__} is not a transform stage")


# -- semantics ---------------------------------------------------------------


class Semantics(str, enum.Enum):
    UNITARY = "unitary"
    COLLAPSE = "collapse"


@dataclass(frozen=True)
class InterpretationModel:
    """Execution semantics, with optional fixed definite-state weights.

    ``definite_states`` maps a checkpoint label to the probabilities of the
    basis state the system is assumed to occupy there. Labels not listed use
    Born weights. Only meaningful under ``COLLAPSE``.
    """

    kind: Semantics
    definite_states: Mapping[str, Sequence[float]] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "kind", Semantics(self.kind))
        fixed = {}
        for label, weights in dict(self.definite_states).items():
            w = tuple(float(x) for x in weights)
            if any(x < 0 or not math.isfinite(x) for x in w):
                raise ValueError(f"checkpoint {label!r}: weights must be finite and non-negative")
            if abs(sum(w) - 1.0) > 1e-9:
                raise ValueError(f"checkpoint {label!r}: weights sum to {sum(w)!r}, expected 1")
            fixed[label] = w
        object.__setattr__(self, "definite_states", fixed)

    def __hash__(self):
        return hash((self.kind, tuple(sorted(self.definite_states.items()))))

    def checkpoint_weights(self, label: str, state: StateVector) -> np.ndarray:
        if label in self.definite_states:
            return np.asarray(self.definite_states[label])
        return born_probabilities(state)

    def check_circuit(self, circuit: Circuit) -> None:
        known = set(circuit.checkpoints)
        for label, w in self.definite_states.items():
            if label not in known:
                raise ValueError(f"no checkpoint labelled {label!r} in circuit")
            if len(w) != 2**circuit.qubits:
                raise ValueError(
                    f"checkpoint {label!r}: {len(w)} weights given, expected {2**circuit.qubits}"
                )


UNITARY = InterpretationModel(Semantics.UNITARY)
COLLAPSE = InterpretationModel(Semantics.COLLAPSE)

ModelLike = Union[InterpretationModel, Semantics, str]


def as_model(model: ModelLike) -> InterpretationModel:
    if isinstance(model, InterpretationModel):
        return model
    return InterpretationModel(Semantics(model))


@dataclass(frozen=True)
class TrialRecord:
    outcome: int
    collapsed_at: dict[str, int] = field(default_factory=dict)


# -- execution ---------------------------------------------------------------


def run_trial(circuit: Circuit, model: ModelLike, rng: np.random.Generator) -> TrialRecord:
    """Execute one trial, sampling at checkpoints (``COLLAPSE``) and at the end."""
    model = as_model(model)
    if not circuit.measured:
        raise ValueError("circuit has no final measure stage; use run_exact for its distribution")
    model.check_circuit(circuit)
    collapse = model.kind is Semantics.COLLAPSE
    state = basis_state(circuit.qubits, circuit.initial)
    collapsed_at = {}
    for stage in circuit.stages:
        if isinstance(stage, Checkpoint):
            if collapse:
                w = model.checkpoint_weights(stage.label, state)
                j = draw_index(cumulative(w), rng.random())
                collapsed_at[stage.label] = j
                state = basis_state(circuit.qubits, j)
        elif isinstance(stage, Measure):
            outcome = draw_index(cumulative(born_probabilities(state)), rng.random())
            return TrialRecord(outcome, collapsed_at)
        else:
            state = apply_stage(state, stage)
    raise AssertionError("unreachable: measured circuit ended without a measure stage")


def final_state(circuit: Circuit) -> StateVector:
    """The state reaching the end of ``circuit`` with every checkpoint as identity."""
    state = basis_state(circuit.qubits, circuit.initial)
    for stage in circuit.stages:
        if not isinstance(stage, (Checkpoint, Measure)):
            state = apply_stage(state, stage)
    return state


def run_exact(circuit: Circuit, model: ModelLike, max_branches: int = DEFAULT_MAX_BRANCHES) -> np.ndarray:
    """Exact outcome probabilities of ``circuit`` under ``model``.

    ``COLLAPSE`` enumerates every checkpoint outcome with non-zero weight and
    mixes the branch results by the product of weights along each branch.
    Branches that collapse to the same basis state are merged; ``max_branches``
    bounds the total number of branches created.
    """
    model = as_model(model)
    model.check_circuit(circuit)
    if model.kind is Semantics.UNITARY:
        return born_probabilities(final_state(circuit))

    branches: list[tuple[float, StateVector]] = [(1.0, basis_state(circuit.qubits, circuit.initial))]
    created = 1
    for stage in circuit.stages:
        if isinstance(stage, Measure):
            break
        if isinstance(stage, Checkpoint):
            merged: dict[int, float] = defaultdict(float)
            for weight, state in branches:
                for j, p in enumerate(model.checkpoint_weights(stage.label, state)):
                    if p > 0:
                        merged[j] += weight * float(p)
                        created += 1
                        if created > max_branches:
                            raise BranchLimitError(
                                f"exact enumeration exceeds {max_branches} branches at checkpoint "
                                f"{stage.label!r}; use run_ensemble (Monte Carlo) instead"
                            )
            branches = [(merged[j], basis_state(circuit.qubits, j)) for j in sorted(merged)]
        else:
            branches = [(w, apply_stage(s, stage)) for w, s in branches]

    probs = np.zeros(2**circuit.qubits)
    for weight, state in branches:
        probs += weight * born_probabilities(state)
    return probs


class _Plan:
    """Per-trial sampling reduced to table lookups.

    After a collapse the state is a basis state, so the CDF at the next
    boundary depends only on (segment, collapsed index) and is computed once.
    """

    def __init__(self, circuit: Circuit, model: InterpretationModel):
        self.circuit = circuit
        self.model = model
        segments: list[list[Stage]] = [[]]
        self.boundaries: list[Optional[str]] = []
        collapse = model.kind is Semantics.COLLAPSE
        for stage in circuit.stages:
            if isinstance(stage, Checkpoint):
                if collapse:
                    self.boundaries.append(stage.label)
                    segments.append([])
            elif not isinstance(stage, Measure):
                segments[-1].append(stage)
        self.boundaries.append(None)  # the final measurement
        self.segments = segments
        self._cache: dict[tuple[int, int], list[float]] = {}
        self.first = self._cdf(0, circuit.initial)

    def _cdf(self, seg: int, start: int) -> list[float]:
        key = (seg, start)
        if key not in self._cache:
            state = basis_state(self.circuit.qubits, start)
            for stage in self.segments[seg]:
                state = apply_stage(state, stage)
            label = self.boundaries[seg]
            if label is None:
                w = born_probabilities(state)
            else:
                w = self.model.checkpoint_weights(label, state)
            self._cache[key] = cumulative(w)
        return self._cache[key]

    def counts(self, master_seed: int, start: int, stop: int) -> list[int]:
        counts = [0] * 2**self.circuit.qubits
        nseg = len(self.segments)
        for i in range(start, stop):
            rng = trial_rng(master_seed, i)
            j = draw_index(self.first, rng.random())
            for seg in range(1, nseg):
                j = draw_index(self._cdf(seg, j), rng.random())
            counts[j] += 1
        return counts


def _count_chunk(args) -> list[int]:
    circuit, model, master_seed, start, stop = args
    return _Plan(circuit, model).counts(master_seed, start, stop)


def _chunks(trials: int, parts: int) -> Iterable[tuple[int, int]]:
    step = -(-trials // parts)
    for start in range(0, trials, step):
        yield start, min(start + step, trials)


def run_ensemble(
    circuit: Circuit, model: ModelLike, trials: int, master_seed: int, workers: int = 1
) -> MeasurementDistribution:
    """Outcome counts over ``trials`` independent seeded trials.

    Trial ``i`` uses :func:`~qdual.state.trial_rng` ``(master_seed, i)``, so
    the counts do not depend on ``workers``.
    """
    model = as_model(model)
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    if master_seed < 0:
        raise ValueError(f"seed must be non-negative, got {master_seed}")
    if not circuit.measured:
        raise ValueError("circuit has no final measure stage; use run_exact for its distribution")
    model.check_circuit(circuit)

    if workers <= 1:
        counts = _Plan(circuit, model).counts(master_seed, 0, trials)
    else:
        jobs = [(circuit, model, master_seed, a, b) for a, b in _chunks(trials, workers)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_count_chunk, jobs))
        counts = [sum(col) for col in zip(*parts)]
    return MeasurementDistribution(circuit.qubits, tuple(counts), trials)


# -- circuits reconstructed from the experiment descriptions -----------------

BUILTIN_CIRCUITS = ("figure1", "figure2", "figure3")


def builtin_circuit(name: str) -> Circuit:
    """One of the three experiment pipelines.

    ``figure1``: two-qubit search for ``|11>``; H on all, flip ``|11>``,
    then H / flip ``|00>`` / H as the reflection about the mean.
    ``figure2``: ``figure1`` with a ``merge`` checkpoint after the first
    flip, where the paths are recombined additively.
    ``figure3``: one qubit, H, a ``stage3`` checkpoint, H.
    """
    if name in ("figure1", "figure2"):
        stages: list[Stage] = [Hadamard(), PhaseShift(PhaseShiftSpec(0b11))]
        if name == "figure2":
            stages.append(Checkpoint("merge"))
        stages += [Hadamard(), PhaseShift(PhaseShiftSpec(0b00)), Hadamard(), Measure()]
        return Circuit(2, tuple(stages))
    if name == "figure3":
        return Circuit(1, (Hadamard(0), Checkpoint("stage3"), Hadamard(0), Measure()))
    raise ValueError(f"unknown builtin circuit {name!r}; choose from {', '.join(BUILTIN_CIRCUITS)}")
