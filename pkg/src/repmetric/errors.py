"""Exception and warning types raised by repmetric."""


class RepMetricError(Exception):
    """Base class for all library errors."""


class DimensionError(RepMetricError, ValueError):
    """Shapes or sample counts of the inputs do not agree."""


class ConfigError(RepMetricError, ValueError):
    """A parameter is out of range or inconsistent with the chosen method."""


class NumericError(RepMetricError, ArithmeticError):
    """A numerical routine failed or produced an unusable result."""


class NotPSDError(NumericError):
    """A matrix expected to be positive semidefinite has a large negative eigenvalue."""


class DegenerateInputError(RepMetricError, ValueError):
    """The input makes the requested quantity undefined (e.g. a constant Gram matrix)."""


class UndefinedCorrelationError(DegenerateInputError):
    """A rank correlation was requested on a constant vector."""


class NumericWarning(RuntimeWarning):
    """Rounding produced a value outside its mathematical range and was clamped."""
