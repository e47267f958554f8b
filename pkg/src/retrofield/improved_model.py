"""All-equal background model.

Every hidden intensity (both inputs, both outputs) equals one value ``I_Z`` on
every run.  The only other hidden variable is the relative phase ``theta``
between the two inputs, and fixing the outcome ties the two together:

    A:  1 / sqrt(I_Z**2 + I_Z) = -sin(theta) * sqrt(4T/R)     (sin theta < 0)
    B:  1 / sqrt(I_Z**2 + I_Z) =  sin(theta) * sqrt(4R/T)     (sin theta > 0)

With a flat prior on ``theta`` and ``P0(I_Z) ~ 1/sqrt(I_Z**2 + I_Z)`` the
outcome weights are integrals of ``P0(I_Z(theta))`` over each half-circle, and
their ratio is ``T/R``.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .averages import probabilities_from_correlations
from .errors import (
    ConfigurationError,
    DegenerateSplitterError,
    NoSolutionError,
    ParameterDomainError,
)
from .network import FieldConfiguration, propagate, single_beamsplitter
from .optics import BeamsplitterSpec

__all__ = [
    "ImprovedPrior",
    "RunRecord",
    "iz_for_outcome",
    "on_shell_k",
    "outcome_weights_closed_form",
    "outcome_weights_quadrature",
    "outcome_probabilities_improved",
    "sample_thetas",
    "sample_arrays",
    "sample_runs",
    "monte_carlo_probabilities",
    "cascade_probabilities",
    "interferometer_probabilities_improved",
    "CHUNK",
]

# Records are drawn in fixed-size chunks, each from its own child seed, so any
# index range can be regenerated independently of the others.
CHUNK = 65536


@dataclass(frozen=True)
class ImprovedPrior:
    """Unnormalised ``P0(I_Z) = 1 / sqrt(I_Z**2 + I_Z)``."""

    epsilon: float = 0.0

    def density(self, i_z):
        i_z = np.asarray(i_z, dtype=float)
        if np.any(i_z <= 0) or np.any(i_z < self.epsilon):
            raise ParameterDomainError("background intensity must be positive and above the cutoff")
        out = 1.0 / np.sqrt(i_z * (i_z + 1.0))
        return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class RunRecord:
    theta: float
    I_Z: float
    outcome: str
    weight: float

    def configuration(self, spec: BeamsplitterSpec | float) -> FieldConfiguration:
        """Inputs ``sqrt(1 + I_Z)`` and ``sqrt(I_Z) e^{i theta}`` propagated
        through the splitter."""
        net = single_beamsplitter(spec, dark_port=True)
        return propagate(
            net,
            {
                "photon": math.sqrt(1.0 + self.I_Z),
                "dark": math.sqrt(self.I_Z) * complex(math.cos(self.theta), math.sin(self.theta)),
            },
        )


def _iz_from_k(k):
    """Positive root of ``I**2 + I = 1/k**2``, written to avoid cancellation."""
    x = 4.0 / np.square(k)
    return 0.5 * x / (1.0 + np.sqrt(1.0 + x))


def on_shell_k(theta: float, spec: BeamsplitterSpec | float, outcome: str) -> float:
    """Right-hand side of the outcome condition (must be positive)."""
    spec = BeamsplitterSpec.coerce(spec)
    if spec.degenerate:
        raise DegenerateSplitterError(f"no phase condition for a degenerate splitter (T = {spec.T})")
    s = math.sin(theta)
    if outcome == "A":
        return -s * math.sqrt(4 * spec.T / spec.R)
    if outcome == "B":
        return s * math.sqrt(4 * spec.R / spec.T)
    raise ParameterDomainError(f"outcome must be 'A' or 'B', got {outcome!r}")


def iz_for_outcome(theta: float, spec: BeamsplitterSpec | float, outcome: str) -> float:
    """Background intensity that makes ``outcome`` happen at phase ``theta``."""
    k = on_shell_k(theta, spec, outcome)
    if not k > 0:
        need = "sin(theta) < 0" if outcome == "A" else "sin(theta) > 0"
        raise NoSolutionError(f"outcome {outcome} needs {need}; theta = {theta}")
    return float(_iz_from_k(k))


def outcome_weights_closed_form(spec: BeamsplitterSpec | float) -> dict[str, float]:
    """Half-circle integrals of ``|sin theta|`` times the outcome's factor."""
    spec = BeamsplitterSpec.coerce(spec)
    return {"A": 2.0 * math.sqrt(4 * spec.T / spec.R), "B": 2.0 * math.sqrt(4 * spec.R / spec.T)}


def outcome_weights_quadrature(
    spec: BeamsplitterSpec | float, prior: ImprovedPrior | None = None
) -> dict[str, float]:
    """Integrate ``P0(I_Z(theta))`` over each outcome's half of the circle.

    The integrand goes through :func:`iz_for_outcome` and the prior density,
    not through the simplified ``|sin theta|`` form.
    """
    spec = BeamsplitterSpec.coerce(spec)
    prior = prior or ImprovedPrior()
    ranges = {"A": (math.pi, 2 * math.pi), "B": (0.0, math.pi)}
    out = {}
    for o, (lo, hi) in ranges.items():
        val, _ = integrate.quad(
            lambda th: prior.density(iz_for_outcome(th, spec, o)),
            lo,
            hi,
            epsabs=0.0,
            epsrel=1e-13,
            limit=200,
        )
        out[o] = val
    return out


def outcome_probabilities_improved(
    spec: BeamsplitterSpec | float, method: str = "closed"
) -> dict[str, float]:
    """``{"A": P(A), "B": P(B)}`` from the on-shell weight ratio.

    ``method`` is ``"closed"`` or ``"quadrature"``.  A degenerate splitter
    gives the single possible outcome.
    """
    spec = BeamsplitterSpec.coerce(spec)
    if spec.degenerate:
        return {"A": float(spec.T == 1.0), "B": float(spec.T == 0.0)}
    if method == "closed":
        w = outcome_weights_closed_form(spec)
    elif method == "quadrature":
        w = outcome_weights_quadrature(spec)
    else:
        raise ParameterDomainError(f"unknown method {method!r}")
    total = w["A"] + w["B"]
    return {"A": w["A"] / total, "B": w["B"] / total}


# -- Monte Carlo ---------------------------------------------------------------


def _chunk_thetas(seed: int, chunk: int) -> np.ndarray:
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(chunk,))
    u = np.random.Generator(np.random.PCG64(ss)).random(CHUNK)
    # theta = 0 has no solution for either outcome; nudge it off the axis
    u[u == 0.0] = np.nextafter(0.0, 1.0)
    return 2.0 * np.pi * u


def sample_thetas(seed: int, start: int, stop: int) -> np.ndarray:
    """Phases for record indices ``start..stop-1``; each index always gets the
    same phase for a given seed, however the range is split."""
    if start < 0 or stop < start:
        raise ParameterDomainError("need 0 <= start <= stop")
    if stop == start:
        return np.empty(0)
    parts = []
    for c in range(start // CHUNK, (stop - 1) // CHUNK + 1):
        lo = max(start, c * CHUNK) - c * CHUNK
        hi = min(stop, (c + 1) * CHUNK) - c * CHUNK
        parts.append(_chunk_thetas(seed, c)[lo:hi])
    return np.concatenate(parts)


def sample_arrays(
    spec: BeamsplitterSpec | float, n: int, seed: int, start: int = 0
) -> dict[str, np.ndarray]:
    """Vectorised runs: ``theta``, ``I_Z``, ``is_A`` and importance ``weight``."""
    spec = BeamsplitterSpec.coerce(spec)
    if n < 1:
        raise ConfigurationError("need at least one sample")
    if spec.degenerate:
        raise DegenerateSplitterError(f"nothing to sample for T = {spec.T}")
    theta = sample_thetas(seed, start, start + n)
    s = np.sin(theta)
    is_a = s < 0
    k = np.where(is_a, -s * math.sqrt(4 * spec.T / spec.R), s * math.sqrt(4 * spec.R / spec.T))
    i_z = _iz_from_k(k)
    weight = ImprovedPrior().density(i_z)
    return {"theta": theta, "I_Z": i_z, "is_A": is_a, "weight": np.atleast_1d(weight)}


def sample_runs(spec: BeamsplitterSpec | float, n: int, seed: int, start: int = 0) -> list[RunRecord]:
    """``n`` weighted runs with phases drawn uniformly on ``[0, 2 pi)``."""
    arr = sample_arrays(spec, n, seed, start)
    return [
        RunRecord(float(t), float(i), "A" if a else "B", float(w))
        for t, i, a, w in zip(arr["theta"], arr["I_Z"], arr["is_A"], arr["weight"])
    ]


def monte_carlo_probabilities(spec: BeamsplitterSpec | float, n: int, seed: int) -> dict:
    """Self-normalised importance estimate of P(A), P(B) with its standard error."""
    arr = sample_arrays(spec, n, seed)
    w = arr["weight"]
    total = math.fsum(w)
    p_a = math.fsum(w[arr["is_A"]]) / total
    resid = np.where(arr["is_A"], 1.0 - p_a, -p_a)
    se = math.sqrt(math.fsum((w * resid) ** 2)) / total
    return {"probabilities": {"A": p_a, "B": 1.0 - p_a}, "standard_error": se, "n": n, "seed": seed}


# -- composite geometries ------------------------------------------------------


def cascade_probabilities(specs: Sequence[BeamsplitterSpec | float]) -> dict[str, float]:
    """Detector probabilities for a chain of splitters (``D1 .. D{k+1}``).

    With every hidden intensity equal, each splitter is an independent
    single-splitter problem and the stage probabilities multiply.
    """
    specs = [BeamsplitterSpec.coerce(s) for s in specs]
    if not specs:
        raise ParameterDomainError("cascade needs at least one splitter")
    out = {}
    reach = 1.0
    for k, spec in enumerate(specs, start=1):
        stage = outcome_probabilities_improved(spec)
        out[f"D{k}"] = reach * stage["A"]
        reach *= stage["B"]
    out[f"D{len(specs) + 1}"] = reach
    return out


def interferometer_probabilities_improved(spec: BeamsplitterSpec | float) -> dict[str, float]:
    """Balanced-final-splitter interferometer: probabilities ``~ 1/|C|``."""
    return probabilities_from_correlations(spec, "interferometer")
