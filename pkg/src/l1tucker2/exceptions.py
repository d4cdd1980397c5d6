"""Exception hierarchy shared by the library and the CLI."""


class L1Tucker2Error(Exception):
    """Base class for all errors raised by this package."""


class InputError(L1Tucker2Error, ValueError):
    """Malformed input data (non-finite entries, bad file contents)."""


class DimensionError(InputError):
    """Operands with incompatible shapes."""


class DegenerateInputError(L1Tucker2Error, ValueError):
    """Vectors that were required to be linearly independent are not."""


class GeneralPositionError(DegenerateInputError):
    """The columns of W are not in general position."""

    def __init__(self, message, subset=None):
        super().__init__(message)
        self.subset = subset


class CapacityError(L1Tucker2Error):
    """The requested search exceeds the configured size bound."""


class ConfigError(L1Tucker2Error, ValueError):
    """Invalid experiment configuration."""
