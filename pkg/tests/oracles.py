"""Independent reference computations used only by the tests.

Everything here builds full 2**q x 2**q matrices with numpy.kron, so it shares
no code with the stride-based kernels under test.
"""
import math

import numpy as np

H1 = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)


def dense_hadamard(q, k=None):
    """H on qubit k (or every qubit); qubit 0 is the leftmost kron factor."""
    mats = [H1 if (k is None or j == k) else np.eye(2) for j in range(q)]
    out = np.array([[1.0 + 0j]])
    for m in mats:
        out = np.kron(out, m)
    return out


def dense_phase(q, marked, theta=math.pi):
    d = np.ones(2**q, dtype=complex)
    d[marked] = np.exp(1j * theta)
    return np.diag(d)


def dense_inversion(q):
    n = 2**q
    return 2.0 / n * np.ones((n, n)) - np.eye(n)


def dense_grover_success(q, marked, iterations):
    n = 2**q
    psi = np.zeros(n, dtype=complex)
    psi[0] = 1
    psi = dense_hadamard(q) @ psi
    step = dense_inversion(q) @ dense_phase(q, marked)
    for _ in range(iterations):
        psi = step @ psi
    return abs(psi[marked]) ** 2


def binomial_halfwidth(n, p, sigmas):
    return sigmas * math.sqrt(n * p * (1 - p))


def random_amplitudes(q, rng):
    v = rng.normal(size=2**q) + 1j * rng.normal(size=2**q)
    return v / np.linalg.norm(v)
