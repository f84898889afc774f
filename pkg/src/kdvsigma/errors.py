"""Exception hierarchy shared by all modules.

Two families matter to callers: ``ValidationError`` covers bad input
(CLI maps it to exit status 2), ``NumericalError`` covers failures that
arise mid-computation on valid input (exit status 3).
"""


class KdvSigmaError(Exception):
    """Base class for all package errors."""


class ValidationError(KdvSigmaError):
    """Invalid input data or configuration."""


class NumericalError(KdvSigmaError):
    """Numerical failure on otherwise valid input."""


class EmptyWavenumbers(ValidationError):
    def __init__(self):
        super().__init__("wavenumber list is empty")


class NonPositiveWavenumber(ValidationError):
    def __init__(self, index, value):
        self.index = index
        self.value = value
        super().__init__(f"wavenumber #{index} is not positive: {value}")


class DuplicateWavenumber(ValidationError):
    def __init__(self, i, j, value):
        self.indices = (i, j)
        super().__init__(f"duplicate wavenumber: entries #{i} and #{j} coincide ({value})")


class DimensionMismatch(ValidationError):
    def __init__(self, msg):
        super().__init__(msg)


class SingularMatrix(NumericalError):
    def __init__(self, pivot, threshold):
        self.pivot = pivot
        self.threshold = threshold
        super().__init__(f"matrix is numerically singular (pivot {pivot:.3e} < {threshold:.3e})")


class ThetaZero(NumericalError):
    def __init__(self, point):
        self.point = tuple(point)
        super().__init__(f"theta sum vanishes at {self.point} (point on the theta divisor)")


class NonRealField(NumericalError):
    def __init__(self, value):
        self.value = value
        super().__init__(f"field value has a non-negligible imaginary part: {value}")


class GaugeAmbiguous(NumericalError):
    def __init__(self, msg):
        super().__init__(msg)


class GenusTooSmall(ValidationError):
    def __init__(self, genus, needed):
        super().__init__(f"operation needs genus >= {needed}, curve has genus {genus}")
