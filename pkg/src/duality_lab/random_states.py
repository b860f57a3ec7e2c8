"""Random state generators used by property tests and demos."""

from __future__ import annotations

import numpy as np

from .states import FockCutoff, TwoModeState


def ginibre_state(cutoff: FockCutoff, rng: np.random.Generator) -> TwoModeState:
    """Full-rank random mixed state rho = G G^dag / tr(G G^dag), G complex Gaussian.

    Positive semidefinite and unit trace by construction.
    """
    d = cutoff.dim
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    rho = g @ g.conj().T
    rho /= np.trace(rho).real
    return TwoModeState(cutoff, rho, pure=False)


def random_pure_state(cutoff: FockCutoff, rng: np.random.Generator) -> TwoModeState:
    """Haar-like random pure state on the full truncated space."""
    d = cutoff.dim
    psi = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    psi /= np.linalg.norm(psi)
    return TwoModeState(cutoff, np.outer(psi, psi.conj()), pure=True)


def random_fixed_total_pure_state(cutoff: FockCutoff, total: int, rng: np.random.Generator) -> TwoModeState:
    """Random pure state supported on exactly `total` photons, span of |total,0>..|0,total>."""
    if total > cutoff.n_max:
        raise ValueError(f"total={total} exceeds n_max={cutoff.n_max}")
    amps = rng.standard_normal(total + 1) + 1j * rng.standard_normal(total + 1)
    amps /= np.linalg.norm(amps)
    psi = np.zeros(cutoff.dim, dtype=complex)
    for i, a in enumerate(amps):
        psi[cutoff.index(i, total - i)] = a
    return TwoModeState(cutoff, np.outer(psi, psi.conj()), pure=True)
