"""Exception types shared across the package."""


class TomfnError(Exception):
    """Base class for all package errors."""


class ShapeError(TomfnError):
    """Tensor shapes or element counts do not conform."""


class ConfigError(TomfnError):
    """Model or run configuration is inconsistent."""


class DataError(TomfnError):
    """Dataset file is missing, malformed, or inconsistent."""


class FactorizationError(TomfnError):
    """Dimension cannot be split into factors within the core-size cap."""


class DecompositionError(TomfnError):
    """Matrix does not meet the preconditions of a mesh decomposition."""


class MappingError(TomfnError):
    """Weights cannot be mapped onto photonic cores as configured."""
