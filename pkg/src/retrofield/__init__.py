"""Retrocausal classical-field models of single-photon optics.

The two field models (:mod:`~retrofield.simple_model`,
:mod:`~retrofield.improved_model`) and the ensemble averages
(:mod:`~retrofield.averages`) are checked against a standard quantum
calculation in :mod:`~retrofield.oracle`.
"""

from .errors import (
    ConfigurationError,
    DegenerateSplitterError,
    DivergenceError,
    InsufficientBackgroundError,
    NoSolutionError,
    ParameterDomainError,
    PhysicsDomainError,
    PostSelectionError,
    RetrofieldError,
    StructureError,
)
from .optics import BeamsplitterSpec, beamsplitter_matrix, beamsplitter_transfer, intensity

__version__ = "0.1.0"
