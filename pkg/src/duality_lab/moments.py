"""Normally-ordered kth-order correlation functions of a two-mode state.

All moments reduce to index arithmetic on density-matrix elements with exact
integer falling-factorial weights; nothing here multiplies ladder-operator
matrices.  <(a^dag)^k a^k> acts on |n> as the falling factorial
ff(n, k) = n(n-1)...(n-k+1), and the cross coherence <(a1^dag)^k a2^k>
collects the off-diagonal elements <i j|rho|i+k j-k>, which preserve the
total photon number.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import OrderOutOfRange, UndefinedOrder
from .states import TwoModeState, tensor_diagonal_probabilities


def falling_factorial(n: int, k: int) -> int:
    """n(n-1)...(n-k+1) as an exact integer; 0 when k > n, 1 when k = 0."""
    if k < 0:
        raise OrderOutOfRange(f"order must be >= 0, got {k}")
    if k > n:
        return 0
    out = 1
    for m in range(n, n - k, -1):
        out *= m
    return out


def falling_factorial_table(n_max: int, k: int) -> np.ndarray:
    """ff(n, k) for n = 0..n_max, exact integers converted to float64."""
    return np.array([float(falling_factorial(n, k)) for n in range(n_max + 1)])


def _check_order(k: int) -> None:
    if not isinstance(k, (int, np.integer)) or k < 1:
        raise OrderOutOfRange(f"correlation order must be a positive integer, got {k!r}")


def auto_moment(state: TwoModeState, mode: int, k: int) -> float:
    """kth-order auto-correlation <(a_mode^dag)^k a_mode^k>.

    Depends only on the joint photon-number distribution.
    """
    _check_order(k)
    if mode not in (1, 2):
        raise ValueError(f"mode must be 1 or 2, got {mode}")
    probs = tensor_diagonal_probabilities(state)
    ff = falling_factorial_table(state.n_max, k)
    per_n = probs.sum(axis=1) if mode == 1 else probs.sum(axis=0)
    return float(per_n @ ff)


def cross_moment(state: TwoModeState, k: int) -> complex:
    """kth-order cross coherence <(a_1^dag)^k a_2^k>.

    Only elements <i j|rho|(i+k) (j-k)> contribute, weighted by
    sqrt(ff(i+k, k) ff(j, k)).
    """
    _check_order(k)
    n_max = state.n_max
    if k > n_max:
        return 0.0 + 0.0j
    n = n_max + 1
    i = np.arange(0, n_max - k + 1)
    j = np.arange(k, n_max + 1)
    ff = falling_factorial_table(n_max, k)
    # sqrt(ff(i+k,k)) per row block, sqrt(ff(j,k)) per column within it
    w = np.sqrt(ff[i + k])[:, None] * np.sqrt(ff[j])[None, :]
    rows = (i[:, None] * n + j[None, :]).ravel()
    cols = ((i[:, None] + k) * n + (j[None, :] - k)).ravel()
    return complex(np.sum(w.ravel() * state.rho[rows, cols]))


def definedness_threshold(state: TwoModeState) -> float:
    """Relative floor below which a normalization denominator counts as zero."""
    largest_first_order = max(auto_moment(state, 1, 1), auto_moment(state, 2, 1))
    return 1e-12 * max(1.0, largest_first_order)


def order_denominator(state: TwoModeState, k: int) -> float:
    """Normalization <(a_1^dag)^k a_1^k> + <(a_2^dag)^k a_2^k>."""
    return auto_moment(state, 1, k) + auto_moment(state, 2, k)


def is_defined(state: TwoModeState, k: int) -> bool:
    return order_denominator(state, k) > definedness_threshold(state)


def distinguishability_diagonal_formula(state: TwoModeState, k: int) -> float:
    """Signed kth-order distinguishability from diagonal elements alone.

    Evaluates the binomial-weighted double sum
    sum_{i=k}^{n} sum_{j=0}^{n} (P(i,j) -/+ P(j,i)) C(i,k) as a ratio.  The
    binomial weight C(i,k) differs from ff(i,k) by k!, which cancels, so this
    must agree with the operator-path ratio exactly.
    """
    _check_order(k)
    n_max = state.n_max
    probs = tensor_diagonal_probabilities(state)
    num = 0.0
    den = 0.0
    for i in range(k, n_max + 1):
        weight = math.comb(i, k)
        row = probs[i, :].sum()       # sum_j P(i, j)
        col = probs[:, i].sum()       # sum_j P(j, i)
        num += (row - col) * weight
        den += (row + col) * weight
    if den * math.factorial(k) <= definedness_threshold(state):
        raise UndefinedOrder(f"order-{k} normalization vanishes; distinguishability undefined")
    return num / den
