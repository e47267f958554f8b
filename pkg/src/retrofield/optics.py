"""Classical mode amplitudes and the two-port beamsplitter.

Amplitudes are plain Python ``complex`` numbers, normalised so that an
intensity ``abs(a) ** 2 == 1`` carries exactly one photon's worth of energy.

The beamsplitter convention is the symmetric one with a ``+pi/2`` phase on
reflection::

    out1 = sqrt(T) * in1 + 1j * sqrt(R) * in2
    out2 = 1j * sqrt(R) * in1 + sqrt(T) * in2

Port 1 is the "transmitted" port for a beam entering on input 1.  Both the
classical propagation engine and the quantum oracle build their matrices from
:func:`beamsplitter_matrix`, so the two can never drift apart.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ParameterDomainError

__all__ = [
    "BeamsplitterSpec",
    "beamsplitter_matrix",
    "beamsplitter_transfer",
    "intensity",
    "phase_factor",
]


def intensity(a: complex) -> float:
    """Peak intensity of a mode amplitude (``re**2 + im**2``)."""
    return a.real * a.real + a.imag * a.imag


def phase_factor(phi: float) -> complex:
    return complex(math.cos(phi), math.sin(phi))


@dataclass(frozen=True)
class BeamsplitterSpec:
    """Energy transmission fraction ``T``; reflection is always ``1 - T``."""

    T: float

    def __post_init__(self) -> None:
        t = float(self.T)
        if not (0.0 <= t <= 1.0) or math.isnan(t):
            raise ParameterDomainError(f"transmission T must lie in [0, 1], got {self.T!r}")
        object.__setattr__(self, "T", t)

    @property
    def R(self) -> float:
        return 1.0 - self.T

    @property
    def degenerate(self) -> bool:
        return self.T in (0.0, 1.0)

    @classmethod
    def coerce(cls, spec: BeamsplitterSpec | float) -> BeamsplitterSpec:
        return spec if isinstance(spec, cls) else cls(spec)


def beamsplitter_matrix(spec: BeamsplitterSpec | float, time_reversed: bool = False) -> np.ndarray:
    """2x2 transfer matrix ``M[out, in]``.

    With ``time_reversed`` the conjugate matrix is returned, i.e. reflection
    picks up ``-pi/2``.  Traversing a network backwards with these matrices
    applies the adjoint of the forward evolution.
    """
    spec = BeamsplitterSpec.coerce(spec)
    t = math.sqrt(spec.T)
    r = 1j * math.sqrt(spec.R)
    m = np.array([[t, r], [r, t]], dtype=complex)
    return m.conj() if time_reversed else m


def beamsplitter_transfer(
    in1: complex, in2: complex, spec: BeamsplitterSpec | float
) -> tuple[complex, complex]:
    """Propagate two input amplitudes through one beamsplitter.

    >>> beamsplitter_transfer(1, 1j, 0.5)[0]
    0j
    """
    spec = BeamsplitterSpec.coerce(spec)
    t = math.sqrt(spec.T)
    r = math.sqrt(spec.R)
    in1 = complex(in1)
    in2 = complex(in2)
    out1 = t * in1 + 1j * r * in2
    out2 = 1j * r * in1 + t * in2
    return out1, out2
