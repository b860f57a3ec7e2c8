"""Phase shifter plus 50:50 beam splitter on the truncated two-mode Fock space.

Port convention: the two output modes are
    c = (a_1 + a_2 e^{i phi}) / sqrt(2),    d = (a_1 - a_2 e^{i phi}) / sqrt(2),
with the phase applied to path 2 before the splitter.  The returned unitary U
satisfies U^dag a_1 U = c and U^dag a_2 U = d, so photon counting on the
transformed state in modes (1, 2) is counting in ports (c, d).

The splitter conserves the total photon number, so U is built block by block.
Blocks with total N <= n_max are complete on the truncated space and get the
exact physical unitary; the incomplete blocks above (which a state supported
within the cutoff in *both* modes can still reach, e.g. |n_max, n_max>) are
left as the identity to keep U exactly unitary.  Measurement code embeds
states at per-mode cutoff 2*n_max first, where all blocks they can occupy
are complete, making the port statistics exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import CutoffMismatch
from .states import FockCutoff, TwoModeState


@dataclass(frozen=True, eq=False)
class BeamSplitterUnitary:
    cutoff: FockCutoff
    phi: float
    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)


@lru_cache(maxsize=32)
def _splitter_base(n_max: int) -> np.ndarray:
    """The phi = 0 splitter: exact on every complete total-photon block.

    Within block N, the image of |i, N-i> follows from expanding
    (a1^dag + a2^dag)^i (a1^dag - a2^dag)^{N-i} |0,0> binomially, i.e. the
    coefficient of x^m y^{N-m} in (x+y)^i (x-y)^{N-i}, with bosonic
    normalization factors.
    """
    n = n_max + 1
    d = n * n
    u = np.eye(d, dtype=complex)
    log_fact = [math.lgamma(m + 1) for m in range(n)]
    for total in range(1, n_max + 1):
        for i in range(total + 1):
            col = i * n + (total - i)
            plus = np.array([math.comb(i, r) for r in range(i + 1)], dtype=float)
            minus = np.array(
                [math.comb(total - i, s) * (-1.0) ** (total - i - s) for s in range(total - i + 1)],
                dtype=float,
            )
            coeff = np.convolve(plus, minus)  # coeff[m] multiplies x^m y^{total-m}
            u[:, col] = 0.0
            for m in range(total + 1):
                if coeff[m] == 0.0:
                    continue
                norm = math.exp(0.5 * (log_fact[m] + log_fact[total - m] - log_fact[i] - log_fact[total - i]))
                u[m * n + (total - m), col] = coeff[m] * norm * 2.0 ** (-0.5 * total)
    return u


def build_beam_splitter(cutoff: FockCutoff, phi: float) -> BeamSplitterUnitary:
    """Unitary for the phase shifter on path 2 followed by the 50:50 splitter."""
    n = cutoff.n_max + 1
    base = _splitter_base(cutoff.n_max)
    j = np.tile(np.arange(n), n)  # mode-2 occupation per flat index
    phases = np.exp(1j * phi * j)
    return BeamSplitterUnitary(cutoff, float(phi), base * phases[None, :])


def transform(state: TwoModeState, bs: BeamSplitterUnitary) -> TwoModeState:
    """Conjugate the density matrix: rho -> U rho U^dag."""
    if bs.cutoff != state.cutoff:
        raise CutoffMismatch(f"state has n_max={state.n_max}, splitter has n_max={bs.cutoff.n_max}")
    u = bs.matrix
    rho = u @ state.rho @ u.conj().T
    return TwoModeState(state.cutoff, rho, pure=state.pure, tail_mass=state.tail_mass)


def total_photon_numbers(cutoff: FockCutoff) -> np.ndarray:
    """Total occupation i+j per flat basis index (block labels of the splitter)."""
    i, j = cutoff.occupations()
    return i + j
