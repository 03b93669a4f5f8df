"""Exception hierarchy. Each class carries the CLI exit code it maps to."""


class SemiradError(Exception):
    exit_code = 3


class NonFinite(SemiradError):
    pass


class NotHermitian(SemiradError):
    pass


class NotPSD(SemiradError):
    pass


class ZeroOperator(SemiradError):
    pass


class DimensionMismatch(SemiradError):
    pass


class NoAAdjoint(SemiradError):
    pass


class NotABounded(SemiradError):
    pass


class DegenerateVector(SemiradError):
    pass


class BadParameter(SemiradError):
    exit_code = 2


class ConfigInvalid(SemiradError):
    exit_code = 2


class SchemaMismatch(SemiradError):
    exit_code = 2
