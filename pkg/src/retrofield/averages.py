"""Model-independent ensemble averages.

Assume every hidden field component averages to the same background
intensity ``I_Z``.  Keeping the fired detector at exactly ``1 + I_Z`` on
average then fixes the input correlation

    C = < sqrt((1 + I1) * I2) * sin(theta) >

for each outcome, and ``C`` in turn fixes the average intensities on the two
interferometer arms.  Subtracting ``I_Z`` from those averages gives the
quantum weak values, which :func:`verify_weak_value_correspondence` checks
against :mod:`retrofield.oracle`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import oracle
from .errors import DivergenceError, InsufficientBackgroundError, ParameterDomainError
from .network import mach_zehnder
from .optics import BeamsplitterSpec

__all__ = [
    "CorrelationC",
    "AverageReport",
    "required_correlation_beamsplitter",
    "required_correlation_interferometer",
    "arm_averages_from_correlation",
    "outcome_b_floor",
    "average_intermediate_intensities",
    "verify_weak_value_correspondence",
    "probabilities_from_correlations",
]

OUTCOMES = ("A", "B")


@dataclass(frozen=True)
class CorrelationC:
    value: float

    def __float__(self) -> float:
        return self.value


@dataclass(frozen=True)
class AverageReport:
    outcome: str
    T: float
    I_Z: float
    C_required: CorrelationC
    avg_I_X: float
    avg_I_Y: float
    weak_I_X: float
    weak_I_Y: float

    @property
    def residuals(self) -> tuple[float, float]:
        return (
            abs((self.avg_I_X - self.I_Z) - self.weak_I_X),
            abs((self.avg_I_Y - self.I_Z) - self.weak_I_Y),
        )

    @property
    def max_residual(self) -> float:
        return max(self.residuals)


def _check_outcome(outcome: str) -> None:
    if outcome not in OUTCOMES:
        raise ParameterDomainError(f"outcome must be 'A' or 'B', got {outcome!r}")


def required_correlation_beamsplitter(spec: BeamsplitterSpec | float, outcome: str) -> CorrelationC:
    """``-sqrt(R/4T)`` for A, ``+sqrt(T/4R)`` for B."""
    spec = BeamsplitterSpec.coerce(spec)
    _check_outcome(outcome)
    if spec.degenerate:
        raise DivergenceError(f"required correlation diverges at T = {spec.T}")
    if outcome == "A":
        return CorrelationC(-math.sqrt(spec.R / (4 * spec.T)))
    return CorrelationC(math.sqrt(spec.T / (4 * spec.R)))


def required_correlation_interferometer(spec: BeamsplitterSpec | float, outcome: str) -> CorrelationC:
    """Correlation that keeps the fired detector at ``1 + I_Z`` behind a
    balanced final splitter with equal arms.

    ``(0.5 - sqrt(RT)) / (T - R)`` for A and ``-(0.5 + sqrt(RT)) / (T - R)``
    for B.  They are evaluated as ``(sqrt T - sqrt R) / (2 (sqrt T + sqrt R))``
    and ``-(sqrt T + sqrt R) / (2 (sqrt T - sqrt R))``, the same values with
    the removable 0/0 at ``T = 1/2`` cancelled for outcome A.
    """
    spec = BeamsplitterSpec.coerce(spec)
    _check_outcome(outcome)
    st, sr = math.sqrt(spec.T), math.sqrt(spec.R)
    if outcome == "A":
        return CorrelationC((st - sr) / (2 * (st + sr)))
    if st == sr:
        raise DivergenceError("outcome B never occurs in a balanced interferometer; C diverges")
    return CorrelationC(-(st + sr) / (2 * (st - sr)))


def arm_averages_from_correlation(spec: BeamsplitterSpec | float, c: float, I_Z: float) -> tuple[float, float]:
    """``<I_X> = I_Z + T - 2 sqrt(RT) C`` and ``<I_Y> = I_Z + R + 2 sqrt(RT) C``."""
    spec = BeamsplitterSpec.coerce(spec)
    k = 2 * math.sqrt(spec.R * spec.T) * c
    return I_Z + spec.T - k, I_Z + spec.R + k


def outcome_b_floor(spec: BeamsplitterSpec | float) -> float:
    """Smallest ``I_Z`` that keeps both arm averages non-negative when B fires.

    ``sqrt(R) / (sqrt(T) - sqrt(R))`` for ``T > R``; by symmetry
    ``sqrt(T) / (sqrt(R) - sqrt(T))`` for ``T < R``.
    """
    spec = BeamsplitterSpec.coerce(spec)
    st, sr = math.sqrt(spec.T), math.sqrt(spec.R)
    if st == sr:
        raise DivergenceError("outcome B never occurs in a balanced interferometer")
    return sr / (st - sr) if st > sr else st / (sr - st)


def average_intermediate_intensities(
    spec: BeamsplitterSpec | float, outcome: str, I_Z: float
) -> tuple[float, float]:
    """Post-selected average intensities ``(<I_X>, <I_Y>)`` on the two arms."""
    spec = BeamsplitterSpec.coerce(spec)
    if not I_Z >= 0:
        raise ParameterDomainError(f"I_Z must be non-negative, got {I_Z}")
    c = required_correlation_interferometer(spec, outcome).value
    if outcome == "B":
        floor = outcome_b_floor(spec)
        if I_Z < floor:
            raise InsufficientBackgroundError(
                f"outcome B at T = {spec.T} needs I_Z >= {floor:.6g} for non-negative arms (got {I_Z})"
            )
    return arm_averages_from_correlation(spec, c, I_Z)


def verify_weak_value_correspondence(spec: BeamsplitterSpec | float, outcome: str, I_Z: float) -> AverageReport:
    """Compare the classical arm averages (minus ``I_Z``) with the quantum weak
    values computed by the oracle on the same interferometer."""
    spec = BeamsplitterSpec.coerce(spec)
    avg_x, avg_y = average_intermediate_intensities(spec, outcome, I_Z)
    net = mach_zehnder(spec)
    cut = ("X", "Y")
    pre = oracle.forward_state(net, cut)
    post = oracle.backward_state(net, outcome, cut)
    return AverageReport(
        outcome=outcome,
        T=spec.T,
        I_Z=I_Z,
        C_required=required_correlation_interferometer(spec, outcome),
        avg_I_X=avg_x,
        avg_I_Y=avg_y,
        weak_I_X=oracle.weak_value(pre, post, oracle.Projector("X")),
        weak_I_Y=oracle.weak_value(pre, post, oracle.Projector("Y")),
    )


def probabilities_from_correlations(spec: BeamsplitterSpec | float, geometry: str) -> dict[str, float]:
    """Outcome probabilities proportional to ``1/|C|`` for the required C.

    ``geometry`` is ``"beamsplitter"`` or ``"interferometer"``.  An outcome
    whose required C diverges gets probability zero.
    """
    spec = BeamsplitterSpec.coerce(spec)
    if geometry == "beamsplitter":
        if spec.degenerate:
            return {"A": float(spec.T == 1.0), "B": float(spec.T == 0.0)}
        required = required_correlation_beamsplitter
    elif geometry == "interferometer":
        required = required_correlation_interferometer
    else:
        raise ParameterDomainError(f"unknown geometry {geometry!r}")
    inv = {}
    for o in OUTCOMES:
        try:
            c = required(spec, o).value
        except DivergenceError:
            inv[o] = 0.0
            continue
        inv[o] = math.inf if c == 0.0 else 1.0 / abs(c)
    if math.inf in inv.values():
        return {o: float(v == math.inf) for o, v in inv.items()}
    total = math.fsum(inv.values())
    return {o: v / total for o, v in inv.items()}
