"""Exception hierarchy. Each class carries the CLI exit code it maps to."""


class OptSpeedError(Exception):
    exit_code = 1


class SchemaError(OptSpeedError, ValueError):
    exit_code = 2


class DimensionMismatch(SchemaError):
    pass


class ZeroVector(SchemaError):
    pass


class TooFewSamples(SchemaError):
    pass


class NotPositiveDefinite(OptSpeedError, ValueError):
    exit_code = 3


class NonHermitianInput(OptSpeedError, ValueError):
    exit_code = 3


class GeometryError(OptSpeedError, ValueError):
    exit_code = 4


class CoincidentRays(GeometryError):
    pass


class AntipodalRays(GeometryError):
    pass


class AntipodalChartPoint(GeometryError):
    pass


class PointAtInfinity(GeometryError):
    pass


class SingularMatrix(GeometryError):
    pass


class VerificationError(OptSpeedError):
    exit_code = 5


class NotPseudoHermitian(VerificationError, ValueError):
    pass


class NegativeVariance(VerificationError, ValueError):
    pass
