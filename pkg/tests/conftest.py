"""Shared test oracles.

Everything here recomputes physics by a route the library never takes:
explicit ladder-operator matrices, dense matrix powers and traces, and an
exponential-map beam splitter.  Library results are checked against these.
"""

from __future__ import annotations

import math

import numpy as np
from numpy.linalg import matrix_power
from scipy.linalg import expm

from duality_lab import TwoModeState


def annihilation_matrix(n_max: int) -> np.ndarray:
    a = np.zeros((n_max + 1, n_max + 1), dtype=complex)
    n = np.arange(1, n_max + 1)
    a[n - 1, n] = np.sqrt(n)
    return a


def two_mode_ladders(n_max: int) -> tuple[np.ndarray, np.ndarray]:
    """(a_1, a_2) as dense matrices on the (n_max+1)^2 product space."""
    a = annihilation_matrix(n_max)
    eye = np.eye(n_max + 1, dtype=complex)
    return np.kron(a, eye), np.kron(eye, a)


def oracle_auto_moment(state: TwoModeState, mode: int, k: int) -> float:
    a1, a2 = two_mode_ladders(state.n_max)
    a = a1 if mode == 1 else a2
    op = matrix_power(a.conj().T, k) @ matrix_power(a, k)
    return float(np.trace(state.rho @ op).real)


def oracle_cross_moment(state: TwoModeState, k: int) -> complex:
    a1, a2 = two_mode_ladders(state.n_max)
    op = matrix_power(a1.conj().T, k) @ matrix_power(a2, k)
    return complex(np.trace(state.rho @ op))


def oracle_splitter(n_max: int, phi: float) -> np.ndarray:
    """Beam-splitter unitary built from the exponential of its generator.

    Exact on complete total-photon blocks (total <= n_max) only; the
    truncated generator misbehaves above.
    """
    a1, a2 = two_mode_ladders(n_max)
    gen = (np.pi / 4.0) * (a1.conj().T @ a2 - a2.conj().T @ a1)
    j = np.tile(np.arange(n_max + 1), n_max + 1)
    flip = np.diag((-1.0 + 0.0j) ** j)
    phase = np.diag(np.exp(1j * phi * j))
    return flip @ expm(gen) @ phase


def poisson_tail(mean: float, n_max: int) -> float:
    """P(X > n_max) for X ~ Poisson(mean), by direct summation."""
    pmf = math.exp(-mean)
    cdf = pmf
    for n in range(1, n_max + 1):
        pmf *= mean / n
        cdf += pmf
    return 1.0 - cdf


def total_photon_index(n_max: int) -> np.ndarray:
    grid = np.arange(n_max + 1)
    i, j = np.meshgrid(grid, grid, indexing="ij")
    return (i + j).ravel()
