"""Higher-order wave-particle duality of two-mode photonic fields.

Builds truncated two-mode Fock states, computes kth-order normally-ordered
auto-correlations and cross coherences, the duality quantities D_k and V_k
with their trade-off D_k^2 + V_k^2 <= 1, and simulates the beam-splitter
phase-scan measurement of V_k, exactly and with Monte-Carlo photon counting.
"""

from .duality import (
    SATURATION_TOL,
    DualityReport,
    distinguishability,
    duality_report,
    max_defined_order,
    visibility,
)
from .errors import (
    CutoffMismatch,
    CutoffTooSmall,
    DualityLabError,
    EmptyLog,
    MalformedSpec,
    OrderOutOfRange,
    UndefinedOrder,
)
from .interferometer import BeamSplitterUnitary, build_beam_splitter, transform
from .measurement import (
    PhaseScanEntry,
    PhaseScanRecord,
    ReconstructionResult,
    ShotLog,
    detector_statistics,
    estimate_statistics,
    format_phase_scan,
    format_shot_log,
    phase_scan,
    read_phase_scan,
    read_shot_log,
    reconstruct_visibility,
    sample_shots,
    write_phase_scan,
    write_shot_log,
)
from .moments import (
    auto_moment,
    cross_moment,
    definedness_threshold,
    distinguishability_diagonal_formula,
    falling_factorial,
    falling_factorial_table,
    is_defined,
    order_denominator,
)
from .random_states import ginibre_state, random_fixed_total_pure_state, random_pure_state
from .states import (
    CutoffPolicy,
    FockCutoff,
    StateSpec,
    TwoModeState,
    ValidationReport,
    apply_phase,
    build_state,
    embed,
    load_spec,
    save_spec,
    spec_from_dict,
    spec_to_dict,
    swap_modes,
    tensor_diagonal_probabilities,
    validate,
)

__version__ = "0.1.0"

__all__ = [
    "BeamSplitterUnitary",
    "CutoffMismatch",
    "CutoffPolicy",
    "CutoffTooSmall",
    "DualityLabError",
    "DualityReport",
    "EmptyLog",
    "FockCutoff",
    "MalformedSpec",
    "OrderOutOfRange",
    "PhaseScanEntry",
    "PhaseScanRecord",
    "ReconstructionResult",
    "SATURATION_TOL",
    "ShotLog",
    "StateSpec",
    "TwoModeState",
    "UndefinedOrder",
    "ValidationReport",
    "apply_phase",
    "auto_moment",
    "build_beam_splitter",
    "build_state",
    "cross_moment",
    "definedness_threshold",
    "detector_statistics",
    "distinguishability",
    "distinguishability_diagonal_formula",
    "duality_report",
    "embed",
    "estimate_statistics",
    "falling_factorial",
    "falling_factorial_table",
    "format_phase_scan",
    "format_shot_log",
    "ginibre_state",
    "is_defined",
    "load_spec",
    "max_defined_order",
    "order_denominator",
    "phase_scan",
    "random_fixed_total_pure_state",
    "random_pure_state",
    "read_phase_scan",
    "read_shot_log",
    "reconstruct_visibility",
    "sample_shots",
    "save_spec",
    "spec_from_dict",
    "spec_to_dict",
    "swap_modes",
    "tensor_diagonal_probabilities",
    "transform",
    "validate",
    "visibility",
    "write_phase_scan",
    "write_shot_log",
]
