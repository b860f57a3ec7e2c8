"""Detector statistics behind the closed interferometer and their estimation.

R^+_{k,phi} and R^-_{k,phi} are the sum and difference of the kth-order
falling-factorial counting statistics <(c^dag)^k c^k> and <(d^dag)^k d^k> of
the two output ports at phase phi.  Signed sums of these statistics over k
phase nodes isolate the e^{+-ik phi} harmonic and recover the modulus of the
kth-order cross coherence without tomography:

    odd k:   <(a1^d)^k a2^k e^{ik phi} + h.c.> = (2^{k-1}/k) sum_m R^-_{k, phi + 2m pi/k}
    even k:  <(a1^d)^k a2^k e^{ik phi} + h.c.> = (2^{k-1}/k) sum_m (-1)^m R^+_{k, phi + m pi/k}

Evaluating the combination at a base phase and again with the grid shifted by
-pi/(2k) gives the real and imaginary quadratures of the rotating coherence;
the root of the summed squares is phase-invariant and equals
2|<(a1^dag)^k a2^k>|.

Every operation here first embeds the state at per-mode cutoff 2*n_max, where
all total-photon blocks the state can occupy are complete, so the splitter
action (and hence each identity above) is exact on the truncated space.

Monte-Carlo sampling is reproducible: shot batch b of a run seeded with s
draws from numpy's SeedSequence(entropy=s, spawn_key=(b,)) with a fixed batch
size of 65536 shots, so the log is bit-identical regardless of how many
worker threads draw the batches (capped by DUALITY_LAB_THREADS).
"""

from __future__ import annotations

import math
import os
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import EmptyLog, OrderOutOfRange, UndefinedOrder
from .interferometer import build_beam_splitter
from .moments import (
    definedness_threshold,
    falling_factorial_table,
    order_denominator,
)
from .states import FockCutoff, TwoModeState, embed

BATCH_SHOTS = 1 << 16


@dataclass(frozen=True)
class PhaseScanEntry:
    phi: float
    r_plus: float
    r_minus: float
    stderr_plus: Optional[float] = None
    stderr_minus: Optional[float] = None


@dataclass(frozen=True)
class PhaseScanRecord:
    """R^+- detector statistics for one order over a sequence of phases."""

    k: int
    entries: list[PhaseScanEntry]
    source: str  # "exact" | "sampled"
    shots: Optional[int] = None
    seed: Optional[int] = None


@dataclass(frozen=True)
class ShotLog:
    """Joint photon-count outcomes of the two ports at a fixed phase."""

    phi: float
    n_c: np.ndarray
    n_d: np.ndarray
    seed: int

    @property
    def shots(self) -> int:
        return len(self.n_c)


@dataclass(frozen=True)
class ReconstructionResult:
    k: int
    unnormalized_max: float
    visibility: float
    phi_prime: float
    stderr: Optional[float] = None
    insufficient_shots: Optional[bool] = None


def _check_order(k: int) -> None:
    if not isinstance(k, (int, np.integer)) or k < 1:
        raise OrderOutOfRange(f"correlation order must be a positive integer, got {k!r}")


def _port_probabilities(state: TwoModeState, phi: float) -> tuple[np.ndarray, FockCutoff]:
    """Diagonal of the splitter-transformed state on the enlarged space."""
    big = FockCutoff(2 * state.n_max)
    rho = embed(state, big).rho
    u = build_beam_splitter(big, phi).matrix
    left = u @ rho
    p = np.einsum("ij,ij->i", left, u.conj()).real
    return p, big


def detector_statistics(state: TwoModeState, k: int, phi: float) -> tuple[float, float]:
    """(R^+_{k,phi}, R^-_{k,phi}): summed and differenced port counting statistics."""
    _check_order(k)
    p, big = _port_probabilities(state, phi)
    n = big.n_max + 1
    grid = p.reshape(n, n)
    ff = falling_factorial_table(big.n_max, k)
    port_c = float(grid.sum(axis=1) @ ff)
    port_d = float(grid.sum(axis=0) @ ff)
    return port_c + port_d, port_c - port_d


def phase_scan(
    state: TwoModeState,
    k: int,
    phis,
    shots: int | None = None,
    seed: int | None = None,
) -> PhaseScanRecord:
    """Scan R^+- over a phase grid, exactly or from simulated photon counting."""
    _check_order(k)
    entries = []
    if shots is None:
        for phi in phis:
            r_plus, r_minus = detector_statistics(state, k, float(phi))
            entries.append(PhaseScanEntry(float(phi), r_plus, r_minus))
        return PhaseScanRecord(k=k, entries=entries, source="exact")
    if seed is None:
        raise ValueError("sampled phase scan needs a seed")
    for node, phi in enumerate(phis):
        log = sample_shots(state, float(phi), shots, _derive_seed(seed, node))
        r_plus, r_minus, se_plus, se_minus = estimate_statistics(log, k)
        entries.append(PhaseScanEntry(float(phi), r_plus, r_minus, se_plus, se_minus))
    return PhaseScanRecord(k=k, entries=entries, source="sampled", shots=shots, seed=seed)


# ---------------------------------------------------------------------------
# phase-combination reconstruction


def _phase_nodes(k: int, phi_prime: float) -> tuple[np.ndarray, np.ndarray, np.ndarray, bool]:
    """Node grids for the two quadratures, per-node signs, and which statistic to use."""
    m = np.arange(k)
    if k % 2 == 1:
        base = phi_prime + 2.0 * np.pi * m / k
        signs = np.ones(k)
        use_minus = True
    else:
        base = phi_prime + np.pi * m / k
        signs = (-1.0) ** m
        use_minus = False
    shifted = base - np.pi / (2.0 * k)
    return base, shifted, signs, use_minus


def reconstruct_visibility(
    state: TwoModeState,
    k: int,
    phi_prime: float = 0.0,
    shots: int | None = None,
    seed: int | None = None,
    stderr_bound: float | None = None,
) -> ReconstructionResult:
    """Recover V_k from port statistics on the harmonic-isolating phase grid.

    Exact mode evaluates the detector expectation values; sampled mode draws
    `shots` photon-counting outcomes per phase node.  The result is
    normalized by the open-interferometer auto-correlations, so in exact
    mode it equals visibility(state, k) identically.
    """
    _check_order(k)
    den = order_denominator(state, k)
    if den <= definedness_threshold(state):
        raise UndefinedOrder(f"order-{k} normalization vanishes; nothing to reconstruct")

    base, shifted, signs, use_minus = _phase_nodes(k, phi_prime)
    prefactor = 2.0 ** (k - 1) / k

    if shots is None:
        sums = []
        for nodes in (base, shifted):
            r = [detector_statistics(state, k, phi) for phi in nodes]
            stat = [rm for _, rm in r] if use_minus else [rp for rp, _ in r]
            sums.append(float(np.dot(signs, stat)))
        unnorm = prefactor * math.hypot(sums[0], sums[1])
        return ReconstructionResult(
            k=k,
            unnormalized_max=unnorm,
            visibility=unnorm / den,
            phi_prime=float(phi_prime),
            insufficient_shots=None if stderr_bound is None else False,
        )

    if shots < 1:
        raise ValueError(f"shots must be >= 1, got {shots}")
    if seed is None:
        raise ValueError("sampled reconstruction needs a seed")

    sums = []
    variances = []
    node_index = 0
    for nodes in (base, shifted):
        total = 0.0
        var = 0.0
        for sign, phi in zip(signs, nodes):
            log = sample_shots(state, float(phi), shots, _derive_seed(seed, node_index))
            node_index += 1
            r_plus, r_minus, se_plus, se_minus = estimate_statistics(log, k)
            stat, se = (r_minus, se_minus) if use_minus else (r_plus, se_plus)
            total += sign * stat
            var += se * se
        sums.append(total)
        variances.append(var)

    s = math.hypot(sums[0], sums[1])
    if s > 0.0:
        # delta method through sqrt(S_a^2 + S_b^2); nodes are independent draws
        var_s = (sums[0] ** 2 * variances[0] + sums[1] ** 2 * variances[1]) / (s * s)
    else:
        var_s = variances[0] + variances[1]
    unnorm = prefactor * s
    stderr = prefactor * math.sqrt(var_s) / den
    return ReconstructionResult(
        k=k,
        unnormalized_max=unnorm,
        visibility=unnorm / den,
        phi_prime=float(phi_prime),
        stderr=stderr,
        insufficient_shots=None if stderr_bound is None else bool(stderr > stderr_bound),
    )


# ---------------------------------------------------------------------------
# Monte-Carlo photon counting


def _thread_limit() -> int:
    raw = os.environ.get("DUALITY_LAB_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _derive_seed(seed: int, index: int) -> int:
    """Independent 64-bit sub-seed for phase node `index` of a seeded run."""
    words = np.random.SeedSequence(entropy=int(seed), spawn_key=(index,)).generate_state(2)
    return (int(words[0]) << 32) | int(words[1])


def sample_shots(state: TwoModeState, phi: float, shots: int, seed: int) -> ShotLog:
    """Draw i.i.d. joint port counts (n_c, n_d) behind the splitter at phase phi.

    Bit-reproducible: outcomes depend only on (state, phi, shots, seed),
    never on thread count or scheduling.
    """
    if shots < 1:
        raise ValueError(f"shots must be >= 1, got {shots}")
    p, big = _port_probabilities(state, phi)
    p = np.clip(p, 0.0, None)
    cdf = np.cumsum(p / p.sum())
    cdf[-1] = 1.0

    def draw(batch: int) -> np.ndarray:
        count = min(BATCH_SHOTS, shots - batch * BATCH_SHOTS)
        rng = np.random.default_rng(np.random.SeedSequence(entropy=int(seed), spawn_key=(batch,)))
        return np.searchsorted(cdf, rng.random(count), side="right")

    n_batches = -(-shots // BATCH_SHOTS)
    workers = min(_thread_limit(), n_batches)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(draw, range(n_batches)))
    else:
        parts = [draw(b) for b in range(n_batches)]
    flat = np.concatenate(parts)
    n = big.n_max + 1
    return ShotLog(phi=float(phi), n_c=flat // n, n_d=flat % n, seed=int(seed))


def estimate_statistics(log: ShotLog, k: int) -> tuple[float, float, float, float]:
    """Unbiased estimates of (R^+, R^-) with standard errors from a shot log."""
    _check_order(k)
    if log.shots == 0:
        raise EmptyLog("shot log holds no outcomes")
    top = int(max(log.n_c.max(), log.n_d.max()))
    ff = falling_factorial_table(top, k)
    vc = ff[log.n_c]
    vd = ff[log.n_d]
    n = log.shots
    plus = vc + vd
    minus = vc - vd
    se_plus = float(plus.std(ddof=1) / math.sqrt(n)) if n > 1 else 0.0
    se_minus = float(minus.std(ddof=1) / math.sqrt(n)) if n > 1 else 0.0
    return float(plus.mean()), float(minus.mean()), se_plus, se_minus


# ---------------------------------------------------------------------------
# file formats


def format_shot_log(log: ShotLog, k_intent: int = 1) -> str:
    """CSV text with a leading comment line carrying the sampling metadata."""
    lines = [f"# seed={log.seed} shots={log.shots} k_intent={k_intent}", "phi,n_c,n_d"]
    phi_repr = repr(log.phi)
    lines.extend(f"{phi_repr},{c},{d}" for c, d in zip(log.n_c, log.n_d))
    return "\n".join(lines) + "\n"


def write_shot_log(log: ShotLog, path, k_intent: int = 1) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(format_shot_log(log, k_intent))


_SHOT_HEADER = re.compile(r"#\s*seed=(\d+)\s+shots=(\d+)\s+k_intent=(\d+)")


def read_shot_log(path) -> tuple[ShotLog, int]:
    """Parse a shot-log CSV; returns (log, k_intent)."""
    with open(path) as fh:
        first = fh.readline().strip()
        m = _SHOT_HEADER.match(first)
        if not m:
            raise EmptyLog(f"{path}: missing '# seed=... shots=... k_intent=...' comment line")
        seed, _, k_intent = (int(g) for g in m.groups())
        header = fh.readline().strip()
        if header != "phi,n_c,n_d":
            raise EmptyLog(f"{path}: unexpected header {header!r}")
        phi = 0.0
        ncs, nds = [], []
        for line in fh:
            line = line.strip()
            if not line:
                continue
            phi_s, c_s, d_s = line.split(",")
            phi = float(phi_s)
            ncs.append(int(c_s))
            nds.append(int(d_s))
    if not ncs:
        raise EmptyLog(f"{path}: no shots recorded")
    return ShotLog(phi=phi, n_c=np.array(ncs), n_d=np.array(nds), seed=seed), k_intent


def format_phase_scan(record: PhaseScanRecord) -> str:
    """CSV phase-scan table; stderr columns stay empty in exact mode."""
    lines = ["k,phi,r_plus,r_minus,stderr_plus,stderr_minus"]
    for e in record.entries:
        se_p = "" if e.stderr_plus is None else repr(e.stderr_plus)
        se_m = "" if e.stderr_minus is None else repr(e.stderr_minus)
        lines.append(f"{record.k},{e.phi!r},{e.r_plus!r},{e.r_minus!r},{se_p},{se_m}")
    return "\n".join(lines) + "\n"


def write_phase_scan(record: PhaseScanRecord, path) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(format_phase_scan(record))


def read_phase_scan(path) -> PhaseScanRecord:
    with open(path) as fh:
        header = fh.readline().strip()
        if header != "k,phi,r_plus,r_minus,stderr_plus,stderr_minus":
            raise ValueError(f"{path}: unexpected header {header!r}")
        k = 1
        entries = []
        sampled = False
        for line in fh:
            line = line.strip()
            if not line:
                continue
            k_s, phi_s, rp_s, rm_s, sp_s, sm_s = line.split(",")
            k = int(k_s)
            se_p = float(sp_s) if sp_s else None
            se_m = float(sm_s) if sm_s else None
            sampled = sampled or se_p is not None
            entries.append(PhaseScanEntry(float(phi_s), float(rp_s), float(rm_s), se_p, se_m))
    return PhaseScanRecord(k=k, entries=entries, source="sampled" if sampled else "exact")
