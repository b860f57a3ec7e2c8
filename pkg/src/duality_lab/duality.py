"""kth-order distinguishability, visibility, and the duality trade-off.

D_k is the normalized difference of the two paths' kth-order
auto-correlations; V_k is the normalized, phase-maximized kth-order
coherence, whose maximum over the interferometer phase is 2|<(a1^dag)^k a2^k>|
in closed form.  For every order where the normalization is nonzero,
D_k^2 + V_k^2 <= 1, with equality exactly when the Cauchy-Schwarz bound
|<(a1^dag)^k a2^k>|^2 <= <(a1^dag)^k a1^k><(a2^dag)^k a2^k> is saturated.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional

from .errors import UndefinedOrder
from .moments import (
    auto_moment,
    cross_moment,
    definedness_threshold,
    order_denominator,
)
from .states import TwoModeState

SATURATION_TOL = 1e-9


@dataclass(frozen=True)
class DualityReport:
    """Per-order record of the duality quantities.

    Undefined orders (vanishing normalization) carry None for the
    numeric fields and defined=False.  `signed_distinguishability`
    keeps the sign the modulus convention discards: positive when
    path 1 dominates.
    """

    k: int
    distinguishability: Optional[float]
    visibility: Optional[float]
    duality_sum: Optional[float]
    defined: bool
    saturated: bool
    denominator: float
    signed_distinguishability: Optional[float]

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "distinguishability": self.distinguishability,
            "visibility": self.visibility,
            "duality_sum": self.duality_sum,
            "defined": self.defined,
            "saturated": self.saturated,
            "denominator": self.denominator,
            "signed_distinguishability": self.signed_distinguishability,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _order_report(state: TwoModeState, k: int, tau: float) -> DualityReport:
    a1 = auto_moment(state, 1, k)
    a2 = auto_moment(state, 2, k)
    den = a1 + a2
    if den <= tau:
        return DualityReport(
            k=k,
            distinguishability=None,
            visibility=None,
            duality_sum=None,
            defined=False,
            saturated=False,
            denominator=den,
            signed_distinguishability=None,
        )
    signed_d = (a1 - a2) / den
    v = 2.0 * abs(cross_moment(state, k)) / den
    total = signed_d * signed_d + v * v
    return DualityReport(
        k=k,
        distinguishability=abs(signed_d),
        visibility=v,
        duality_sum=total,
        defined=True,
        saturated=abs(total - 1.0) <= SATURATION_TOL,
        denominator=den,
        signed_distinguishability=signed_d,
    )


def distinguishability(state: TwoModeState, k: int) -> float:
    """|<D_k>|: normalized kth-order auto-correlation imbalance of the two paths."""
    report = _order_report(state, k, definedness_threshold(state))
    if not report.defined:
        raise UndefinedOrder(f"order-{k} normalization vanishes; distinguishability undefined")
    return report.distinguishability


def visibility(state: TwoModeState, k: int) -> float:
    """Phase-maximized kth-order fringe visibility 2|<(a1^dag)^k a2^k>| / normalization."""
    report = _order_report(state, k, definedness_threshold(state))
    if not report.defined:
        raise UndefinedOrder(f"order-{k} normalization vanishes; visibility undefined")
    return report.visibility


def duality_report(state: TwoModeState, k_max: int) -> list[DualityReport]:
    """Reports for k = 1..k_max; undefined orders are flagged, not raised."""
    if k_max < 1:
        raise ValueError(f"k_max must be >= 1, got {k_max}")
    tau = definedness_threshold(state)
    return [_order_report(state, k, tau) for k in range(1, k_max + 1)]


def max_defined_order(state: TwoModeState) -> int:
    """Largest k whose normalization is nonzero; 0 for the vacuum.

    auto-correlations of order k vanish on any state holding fewer than k
    photons per mode, so n_max bounds the search.
    """
    tau = definedness_threshold(state)
    best = 0
    for k in range(1, state.n_max + 1):
        if order_denominator(state, k) > tau:
            best = k
    return best
