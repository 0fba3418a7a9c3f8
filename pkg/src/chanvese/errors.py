"""Exception types shared across the package.

The CLI maps these to distinct exit codes (see chanvese.cli).
"""


class ParameterError(ValueError):
    """A scalar knob, flag, or field shape is outside its valid range."""


class FormatError(ValueError):
    """An input file is not in a supported image format."""


class DegenerateInputError(ValueError):
    """The input admits no meaningful answer (all-zero image, one-sided mask, ...)."""


class NumericalInstabilityError(RuntimeError):
    """The evolution produced non-finite values, usually a too-large time step."""
