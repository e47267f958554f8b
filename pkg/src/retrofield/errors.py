"""Exception hierarchy shared by the models, the oracle and the CLI."""


class RetrofieldError(Exception):
    """Base class for all errors raised by this package."""


class ParameterDomainError(RetrofieldError, ValueError):
    """A numeric parameter lies outside its allowed range."""


class DegenerateSplitterError(ParameterDomainError):
    """T is 0 or 1, so only one outcome is possible."""


class StructureError(RetrofieldError):
    """The optical network (or a cut through it) is malformed."""


class ConfigurationError(RetrofieldError):
    """Inputs to a network computation are incomplete or inconsistent."""


class PhysicsDomainError(RetrofieldError):
    """The requested physical quantity does not exist for these inputs."""


class NoSolutionError(PhysicsDomainError):
    """No hidden-field configuration realises this outcome."""


class DivergenceError(PhysicsDomainError):
    """A required correlation diverges (the outcome has zero probability)."""


class PostSelectionError(PhysicsDomainError):
    """Pre- and post-selected states are orthogonal."""


class InsufficientBackgroundError(PhysicsDomainError):
    """The background intensity is too small to keep every arm non-negative."""
