import math

import numpy as np
import pytest

from qdual import analytic_success_probability, grover_search, optimal_iterations
from qdual.state import born_probabilities

from oracles import dense_grover_success


def test_two_qubit_search_finds_11_in_one_round():
    run = grover_search(2, 0b11, 1)
    assert abs(run.success_probability - 1.0) <= 1e-12
    np.testing.assert_allclose(run.final_state.amps, [0, 0, 0, 1], atol=1e-12)


def test_zero_iterations_is_uniform():
    assert grover_search(2, 3, 0).success_probability == 0.25


def test_three_qubit_two_rounds():
    # 121/128 from the dense-matrix oracle
    expected = 0.9453125
    assert abs(dense_grover_success(3, 5, 2) - expected) <= 1e-12
    assert abs(analytic_success_probability(3, 2) - expected) <= 1e-12
    assert abs(grover_search(3, 5, 2).success_probability - expected) <= 1e-12


def test_run_record_fields():
    run = grover_search(3, 5, 2)
    assert (run.qubits, run.marked, run.iterations) == (3, 5, 2)
    assert run.success_probability == born_probabilities(run.final_state)[5]


def test_bad_arguments():
    with pytest.raises(ValueError, match="basis index 4"):
        grover_search(2, 4, 1)
    with pytest.raises(ValueError, match="iterations"):
        grover_search(2, 1, -1)
    with pytest.raises(ValueError, match="diffusion"):
        grover_search(2, 1, 1, diffusion="other")


@pytest.mark.parametrize("q, expected", [(1, 1), (2, 1), (4, 3)])
def test_optimal_iterations(q, expected):
    assert optimal_iterations(q) == expected


def test_optimal_iterations_maximizes_success_for_four_qubits():
    sweep = {k: grover_search(4, 9, k).success_probability for k in range(1, 7)}
    assert max(sweep, key=sweep.get) == optimal_iterations(4) == 3


@pytest.mark.parametrize("q", range(2, 9))
def test_success_follows_sine_law(q):
    rng = np.random.default_rng(q)
    for marked in rng.integers(0, 2**q, size=3):
        for k in range(0, optimal_iterations(q) + 2):
            p = grover_search(q, int(marked), k).success_probability
            assert abs(p - analytic_success_probability(q, k)) <= 1e-9


@pytest.mark.parametrize("q", [2, 3, 4])
def test_success_independent_of_marked_index(q):
    k = optimal_iterations(q)
    probs = {grover_search(q, m, k).success_probability for m in range(2**q)}
    assert len(probs) == 1


@pytest.mark.parametrize("q", [2, 3, 5, 7])
def test_hadamard_diffusion_changes_no_probability(q):
    k = optimal_iterations(q)
    a = grover_search(q, 1, k, diffusion="mean")
    b = grover_search(q, 1, k, diffusion="hadamard")
    np.testing.assert_allclose(born_probabilities(a.final_state), born_probabilities(b.final_state), atol=1e-12)
