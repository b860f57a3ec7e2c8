"""Two-mode quantum states on a truncated Fock space.

Basis ordering is fixed everywhere to 0-based row-major: the product state
|i>_1 |j>_2 sits at flat index i*(n_max+1) + j.  Density matrices are dense
complex arrays of shape d x d with d = (n_max+1)^2.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import CutoffTooSmall, MalformedSpec

HERMITICITY_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_TOL = 1e-10

MIXTURE_WEIGHT_TOL = 1e-12

# Auto-cutoff safety margin.  A kth-order falling-factorial moment weights the
# photon-number tail by ff(n, k), which shifts the effective tail index by k:
# for a Poisson distribution the neglected part of <(a^dag)^k a^k> is exactly
# mean^k * P(X > n_max - k).  Reserving extra levels beyond the bare
# tail-probability cutoff keeps the *relative* moment error at the tail bound
# for the orders the library targets (k <= 4 and a little beyond).
MOMENT_MARGIN = 4


@dataclass(frozen=True)
class FockCutoff:
    """Per-mode photon-number cutoff; Hilbert-space dimension is (n_max+1)^2."""

    n_max: int

    def __post_init__(self):
        if not isinstance(self.n_max, (int, np.integer)) or self.n_max < 0:
            raise MalformedSpec(f"n_max must be a non-negative integer, got {self.n_max!r}")

    @property
    def dim(self) -> int:
        return (self.n_max + 1) ** 2

    def index(self, i: int, j: int) -> int:
        """Flat basis index of |i>_1 |j>_2."""
        return i * (self.n_max + 1) + j

    def occupations(self) -> tuple[np.ndarray, np.ndarray]:
        """Photon numbers (i, j) of every basis vector, in flat-index order."""
        grid = np.arange(self.n_max + 1)
        i, j = np.meshgrid(grid, grid, indexing="ij")
        return i.ravel(), j.ravel()


@dataclass(frozen=True, eq=False)
class TwoModeState:
    """Immutable density-matrix carrier.

    `pure` is a construction hint (True when built from a state vector),
    `tail_mass` records the probability discarded by truncating an
    infinite-dimensional input, before renormalization.
    """

    cutoff: FockCutoff
    rho: np.ndarray
    pure: Optional[bool] = None
    tail_mass: float = 0.0

    def __post_init__(self):
        rho = np.array(self.rho, dtype=complex)
        d = self.cutoff.dim
        if rho.shape != (d, d):
            raise MalformedSpec(f"density matrix must be {d}x{d} for n_max={self.cutoff.n_max}, got {rho.shape}")
        rho.flags.writeable = False
        object.__setattr__(self, "rho", rho)

    @property
    def n_max(self) -> int:
        return self.cutoff.n_max


@dataclass(frozen=True)
class ValidationReport:
    """Defects of a candidate density matrix against the state invariants."""

    hermiticity_defect: float
    trace_defect: float
    min_eigenvalue: float
    tail_mass: float
    hermitian_ok: bool
    trace_ok: bool
    psd_ok: bool

    @property
    def passed(self) -> bool:
        return self.hermitian_ok and self.trace_ok and self.psd_ok


@dataclass(frozen=True)
class CutoffPolicy:
    """Either an explicit n_max or an automatic choice bounding the per-mode tail mass."""

    mode: str  # "explicit" | "auto"
    value: float

    def __post_init__(self):
        if self.mode == "explicit":
            if int(self.value) != self.value or self.value < 0:
                raise MalformedSpec(f"explicit cutoff must be a non-negative integer, got {self.value!r}")
        elif self.mode == "auto":
            if not (0.0 < self.value < 1.0):
                raise MalformedSpec(f"auto cutoff tail_epsilon must lie in (0, 1), got {self.value!r}")
        else:
            raise MalformedSpec(f"unknown cutoff mode {self.mode!r}")

    @classmethod
    def explicit(cls, n_max: int) -> "CutoffPolicy":
        return cls("explicit", n_max)

    @classmethod
    def auto(cls, tail_epsilon: float = 1e-12) -> "CutoffPolicy":
        return cls("auto", tail_epsilon)


@dataclass(frozen=True)
class StateSpec:
    """Declarative description of a two-mode state.

    kinds: fock(n1, n2), noon(N, relative_phase), coherent(alpha, beta),
    thermal(mean1, mean2), mixture([(weight, spec), ...]), raw(matrix).
    """

    kind: str
    params: dict = field(default_factory=dict)
    cutoff: CutoffPolicy = field(default_factory=CutoffPolicy.auto)

    @classmethod
    def fock(cls, n1: int, n2: int, cutoff: CutoffPolicy | None = None) -> "StateSpec":
        if n1 < 0 or n2 < 0 or int(n1) != n1 or int(n2) != n2:
            raise MalformedSpec("fock occupations must be non-negative integers")
        return cls("fock", {"n1": int(n1), "n2": int(n2)}, cutoff or CutoffPolicy.auto())

    @classmethod
    def noon(cls, N: int, relative_phase: float = 0.0, cutoff: CutoffPolicy | None = None) -> "StateSpec":
        if int(N) != N or N < 1:
            raise MalformedSpec("NOON photon number N must be an integer >= 1")
        return cls("noon", {"N": int(N), "relative_phase": float(relative_phase)}, cutoff or CutoffPolicy.auto())

    @classmethod
    def coherent(cls, alpha: complex, beta: complex, cutoff: CutoffPolicy | None = None) -> "StateSpec":
        return cls("coherent", {"alpha": complex(alpha), "beta": complex(beta)}, cutoff or CutoffPolicy.auto())

    @classmethod
    def thermal(cls, mean1: float, mean2: float, cutoff: CutoffPolicy | None = None) -> "StateSpec":
        if mean1 < 0 or mean2 < 0:
            raise MalformedSpec("thermal mean photon numbers must be >= 0")
        return cls("thermal", {"mean1": float(mean1), "mean2": float(mean2)}, cutoff or CutoffPolicy.auto())

    @classmethod
    def mixture(cls, components: list[tuple[float, "StateSpec"]], cutoff: CutoffPolicy | None = None) -> "StateSpec":
        if not components:
            raise MalformedSpec("mixture needs at least one component")
        weights = [w for w, _ in components]
        if any(w < 0 for w in weights):
            raise MalformedSpec("mixture weights must be non-negative")
        if abs(sum(weights) - 1.0) > MIXTURE_WEIGHT_TOL:
            raise MalformedSpec(f"mixture weights must sum to 1, got {sum(weights)}")
        return cls("mixture", {"components": [(float(w), s) for w, s in components]}, cutoff or CutoffPolicy.auto())

    @classmethod
    def raw(cls, matrix: np.ndarray, cutoff: CutoffPolicy | None = None) -> "StateSpec":
        m = np.asarray(matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise MalformedSpec("raw matrix must be square")
        side = math.isqrt(m.shape[0])
        if side * side != m.shape[0]:
            raise MalformedSpec(f"raw matrix dimension {m.shape[0]} is not a perfect square")
        return cls("raw", {"matrix": m}, cutoff or CutoffPolicy.auto())


# ---------------------------------------------------------------------------
# cutoff resolution


def poisson_min_cutoff(mean: float, tail_epsilon: float) -> int:
    """Smallest n with P(X > n) <= tail_epsilon for X ~ Poisson(mean)."""
    if mean <= 0.0:
        return 0
    n = 0
    cdf = pmf = math.exp(-mean)
    while 1.0 - cdf > tail_epsilon:
        n += 1
        pmf *= mean / n
        cdf += pmf
        if n > 10_000:
            raise MalformedSpec("coherent amplitude too large for a practical cutoff")
    return n


def thermal_min_cutoff(mean: float, tail_epsilon: float) -> int:
    """Smallest n with geometric tail (mean/(1+mean))^(n+1) <= tail_epsilon."""
    if mean <= 0.0:
        return 0
    ratio = mean / (1.0 + mean)
    n = math.ceil(math.log(tail_epsilon) / math.log(ratio)) - 1
    n = max(n, 0)
    while ratio ** (n + 1) > tail_epsilon:  # guard rounding of the closed form
        n += 1
    return n


def required_cutoff(spec: StateSpec) -> int:
    """Minimal n_max for the spec under its own cutoff policy."""
    p = spec.params
    if spec.kind == "fock":
        need = max(p["n1"], p["n2"])
    elif spec.kind == "noon":
        need = p["N"]
    elif spec.kind == "coherent":
        eps = spec.cutoff.value if spec.cutoff.mode == "auto" else 1e-12
        need = MOMENT_MARGIN + max(
            poisson_min_cutoff(abs(p["alpha"]) ** 2, eps),
            poisson_min_cutoff(abs(p["beta"]) ** 2, eps),
        )
    elif spec.kind == "thermal":
        eps = spec.cutoff.value if spec.cutoff.mode == "auto" else 1e-12
        need = MOMENT_MARGIN + max(
            thermal_min_cutoff(p["mean1"], eps),
            thermal_min_cutoff(p["mean2"], eps),
        )
    elif spec.kind == "mixture":
        eps = spec.cutoff.value if spec.cutoff.mode == "auto" else 1e-12
        need = max(
            required_cutoff(StateSpec(c.kind, c.params, CutoffPolicy.auto(eps)))
            for _, c in p["components"]
        )
    elif spec.kind == "raw":
        need = math.isqrt(p["matrix"].shape[0]) - 1
    else:
        raise MalformedSpec(f"unknown spec kind {spec.kind!r}")
    return need


def resolve_cutoff(spec: StateSpec) -> FockCutoff:
    need = required_cutoff(spec)
    if spec.cutoff.mode == "explicit":
        n_max = int(spec.cutoff.value)
        # Fock-like and raw specs cannot be truncated at all.
        if spec.kind in ("fock", "noon", "raw") and n_max < need:
            raise CutoffTooSmall(f"{spec.kind} spec needs n_max >= {need}, got {n_max}")
        if spec.kind == "mixture":
            hard = _mixture_hard_floor(spec)
            if n_max < hard:
                raise CutoffTooSmall(f"mixture contains a fock/noon component needing n_max >= {hard}")
        return FockCutoff(n_max)
    return FockCutoff(need)


def _mixture_hard_floor(spec: StateSpec) -> int:
    floor = 0
    for _, c in spec.params["components"]:
        if c.kind in ("fock", "noon"):
            floor = max(floor, required_cutoff(c))
        elif c.kind == "raw":
            floor = max(floor, required_cutoff(c))
        elif c.kind == "mixture":
            floor = max(floor, _mixture_hard_floor(c))
    return floor


# ---------------------------------------------------------------------------
# construction


def _coherent_vector(alpha: complex, n_max: int) -> np.ndarray:
    # amplitudes e^{-|a|^2/2} a^n / sqrt(n!), evaluated stably by recursion
    v = np.empty(n_max + 1, dtype=complex)
    v[0] = math.exp(-0.5 * abs(alpha) ** 2)
    for n in range(1, n_max + 1):
        v[n] = v[n - 1] * alpha / math.sqrt(n)
    return v


def _thermal_diagonal(mean: float, n_max: int) -> np.ndarray:
    if mean <= 0.0:
        p = np.zeros(n_max + 1)
        p[0] = 1.0
        return p
    n = np.arange(n_max + 1)
    return (mean**n) / (1.0 + mean) ** (n + 1)


def build_state(spec: StateSpec, at_cutoff: FockCutoff | None = None) -> TwoModeState:
    """Realize a StateSpec as a TwoModeState.

    `at_cutoff` overrides the spec's cutoff policy (used when mixture
    components must share a common basis); it must be large enough for
    fock/noon components.
    """
    cutoff = at_cutoff if at_cutoff is not None else resolve_cutoff(spec)
    n_max = cutoff.n_max
    d = cutoff.dim
    p = spec.params

    if spec.kind == "fock":
        if max(p["n1"], p["n2"]) > n_max:
            raise CutoffTooSmall(f"fock({p['n1']},{p['n2']}) does not fit n_max={n_max}")
        rho = np.zeros((d, d), dtype=complex)
        rho[cutoff.index(p["n1"], p["n2"]), cutoff.index(p["n1"], p["n2"])] = 1.0
        return TwoModeState(cutoff, rho, pure=True)

    if spec.kind == "noon":
        N = p["N"]
        if N > n_max:
            raise CutoffTooSmall(f"noon({N}) does not fit n_max={n_max}")
        psi = np.zeros(d, dtype=complex)
        psi[cutoff.index(N, 0)] = 1.0 / math.sqrt(2.0)
        psi[cutoff.index(0, N)] = np.exp(1j * p["relative_phase"]) / math.sqrt(2.0)
        return TwoModeState(cutoff, np.outer(psi, psi.conj()), pure=True)

    if spec.kind == "coherent":
        psi = np.kron(_coherent_vector(p["alpha"], n_max), _coherent_vector(p["beta"], n_max))
        kept = float(np.vdot(psi, psi).real)
        psi = psi / math.sqrt(kept)  # renormalize so the trace is exactly 1
        return TwoModeState(cutoff, np.outer(psi, psi.conj()), pure=True, tail_mass=1.0 - kept)

    if spec.kind == "thermal":
        diag = np.kron(_thermal_diagonal(p["mean1"], n_max), _thermal_diagonal(p["mean2"], n_max))
        kept = float(diag.sum())
        rho = np.diag(diag / kept).astype(complex)
        return TwoModeState(cutoff, rho, pure=False, tail_mass=1.0 - kept)

    if spec.kind == "mixture":
        rho = np.zeros((d, d), dtype=complex)
        tail = 0.0
        for w, comp in p["components"]:
            part = build_state(comp, at_cutoff=cutoff)
            rho += w * part.rho
            tail += w * part.tail_mass
        return TwoModeState(cutoff, rho, pure=False, tail_mass=tail)

    if spec.kind == "raw":
        m = p["matrix"]
        own_n_max = math.isqrt(m.shape[0]) - 1
        if own_n_max > n_max:
            raise CutoffTooSmall(f"raw matrix implies n_max={own_n_max}, target is {n_max}")
        state = TwoModeState(FockCutoff(own_n_max), m, pure=None)
        report = validate(state)
        if not report.passed:
            raise MalformedSpec(
                "raw matrix violates state invariants "
                f"(hermiticity defect {report.hermiticity_defect:.2e}, "
                f"trace defect {report.trace_defect:.2e}, "
                f"min eigenvalue {report.min_eigenvalue:.2e})"
            )
        return embed(state, cutoff)

    raise MalformedSpec(f"unknown spec kind {spec.kind!r}")


# ---------------------------------------------------------------------------
# inspection


def validate(state: TwoModeState, tol: float = HERMITICITY_TOL, psd_tol: float = PSD_TOL) -> ValidationReport:
    """Report hermiticity, trace, and positivity defects of the density matrix."""
    if tol <= 0 or psd_tol <= 0:
        raise ValueError("tolerances must be positive")
    rho = state.rho
    herm = float(np.max(np.abs(rho - rho.conj().T)))
    trace = float(abs(np.trace(rho).real - 1.0) + abs(np.trace(rho).imag))
    # eigvalsh wants an exactly Hermitian input; the defect is reported separately
    min_eig = float(np.linalg.eigvalsh((rho + rho.conj().T) / 2.0)[0])
    return ValidationReport(
        hermiticity_defect=herm,
        trace_defect=trace,
        min_eigenvalue=min_eig,
        tail_mass=state.tail_mass,
        hermitian_ok=herm <= tol,
        trace_ok=trace <= tol,
        psd_ok=min_eig >= -psd_tol,
    )


def tensor_diagonal_probabilities(state: TwoModeState) -> np.ndarray:
    """Joint photon-number distribution P(i, j) = <i j|rho|i j> as an (n_max+1)^2 grid."""
    n = state.n_max + 1
    return np.real(np.diagonal(state.rho)).reshape(n, n).copy()


def swap_modes(state: TwoModeState) -> TwoModeState:
    """Exchange the two paths: |i j> -> |j i>."""
    n = state.n_max + 1
    perm = (np.arange(state.cutoff.dim).reshape(n, n).T).ravel()
    return TwoModeState(state.cutoff, state.rho[np.ix_(perm, perm)], pure=state.pure, tail_mass=state.tail_mass)


def apply_phase(state: TwoModeState, theta: float, mode: int = 2) -> TwoModeState:
    """Phase-rotate one mode: a_mode -> a_mode e^{i theta} in the Heisenberg picture."""
    i, j = state.cutoff.occupations()
    n = i if mode == 1 else j
    phases = np.exp(1j * theta * n)
    rho = state.rho * np.outer(phases, phases.conj())
    return TwoModeState(state.cutoff, rho, pure=state.pure, tail_mass=state.tail_mass)


def embed(state: TwoModeState, cutoff: FockCutoff) -> TwoModeState:
    """Re-express the state on a larger per-mode cutoff (zero padding)."""
    if cutoff.n_max < state.n_max:
        raise MalformedSpec("embedding target cutoff is smaller than the source")
    if cutoff.n_max == state.n_max:
        return state
    small, big = state.n_max + 1, cutoff.n_max + 1
    idx = (np.arange(small)[:, None] * big + np.arange(small)[None, :]).ravel()
    rho = np.zeros((cutoff.dim, cutoff.dim), dtype=complex)
    rho[np.ix_(idx, idx)] = state.rho
    return TwoModeState(cutoff, rho, pure=state.pure, tail_mass=state.tail_mass)


# ---------------------------------------------------------------------------
# JSON interchange

_COMPLEX_KEYS = {"re", "im"}


def _complex_to_json(z: complex) -> dict:
    return {"re": float(z.real), "im": float(z.imag)}


def _complex_from_json(obj) -> complex:
    if isinstance(obj, (int, float)):
        return complex(obj)
    if isinstance(obj, dict) and set(obj) <= _COMPLEX_KEYS:
        return complex(obj.get("re", 0.0), obj.get("im", 0.0))
    raise MalformedSpec(f"expected a number or {{re, im}} object, got {obj!r}")


def spec_to_dict(spec: StateSpec) -> dict:
    doc: dict = {"kind": spec.kind}
    p = spec.params
    if spec.kind == "fock":
        doc.update(n1=p["n1"], n2=p["n2"])
    elif spec.kind == "noon":
        doc.update(N=p["N"], relative_phase=p["relative_phase"])
    elif spec.kind == "coherent":
        doc.update(alpha=_complex_to_json(p["alpha"]), beta=_complex_to_json(p["beta"]))
    elif spec.kind == "thermal":
        doc.update(mean1=p["mean1"], mean2=p["mean2"])
    elif spec.kind == "mixture":
        doc["components"] = [{"weight": w, "spec": spec_to_dict(c)} for w, c in p["components"]]
    elif spec.kind == "raw":
        doc["matrix"] = [[_complex_to_json(z) for z in row] for row in p["matrix"]]
    doc["cutoff"] = {"mode": spec.cutoff.mode, "value": spec.cutoff.value}
    return doc


def spec_from_dict(doc: dict) -> StateSpec:
    if not isinstance(doc, dict) or "kind" not in doc:
        raise MalformedSpec("state spec document must be an object with a 'kind' field")
    kind = doc["kind"]
    cut_doc = doc.get("cutoff", {"mode": "auto", "value": 1e-12})
    try:
        cutoff = CutoffPolicy(cut_doc["mode"], cut_doc["value"])
    except (KeyError, TypeError) as exc:
        raise MalformedSpec(f"bad cutoff object {cut_doc!r}") from exc

    try:
        if kind == "fock":
            return StateSpec.fock(doc["n1"], doc["n2"], cutoff)
        if kind == "noon":
            return StateSpec.noon(doc["N"], doc.get("relative_phase", 0.0), cutoff)
        if kind == "coherent":
            return StateSpec.coherent(_complex_from_json(doc["alpha"]), _complex_from_json(doc["beta"]), cutoff)
        if kind == "thermal":
            return StateSpec.thermal(doc["mean1"], doc["mean2"], cutoff)
        if kind == "mixture":
            comps = [(c["weight"], spec_from_dict(c["spec"])) for c in doc["components"]]
            return StateSpec.mixture(comps, cutoff)
        if kind == "raw":
            matrix = np.array([[_complex_from_json(z) for z in row] for row in doc["matrix"]], dtype=complex)
            return StateSpec.raw(matrix, cutoff)
    except KeyError as exc:
        raise MalformedSpec(f"spec kind {kind!r} is missing field {exc}") from exc
    except (TypeError, ValueError) as exc:
        raise MalformedSpec(f"malformed {kind!r} spec: {exc}") from exc
    raise MalformedSpec(f"unknown spec kind {kind!r}")


def save_spec(spec: StateSpec, path) -> None:
    with open(path, "w") as fh:
        json.dump(spec_to_dict(spec), fh, indent=2)
        fh.write("\n")


def load_spec(path) -> StateSpec:
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise MalformedSpec(f"{path}: not valid JSON ({exc})") from exc
    return spec_from_dict(doc)
