"""Exception hierarchy.

Three families map onto the CLI exit codes: configuration problems (2),
bad or insufficient data (3) and numerical failures (4).
"""


class XBicorrError(Exception):
    """Base class for every error raised by this package."""


class ConfigError(XBicorrError, ValueError):
    pass


class DataError(XBicorrError, ValueError):
    pass


class NumericalError(XBicorrError, ArithmeticError):
    pass


class MalformedRow(DataError):
    def __init__(self, line, detail=""):
        self.line = line
        msg = f"malformed row at line {line}"
        super().__init__(f"{msg}: {detail}" if detail else msg)


class NonPositivePrice(DataError):
    def __init__(self, line, value=None):
        self.line = line
        super().__init__(f"non-positive or non-finite price {value!r} at line {line}")


class UnsortedDates(DataError):
    pass


class EmptyIntersection(DataError):
    pass


class SeriesTooShort(DataError):
    pass


class DegenerateSeries(DataError):
    pass


class DegenerateWindow(DegenerateSeries):
    pass


class DimensionMismatch(DataError):
    pass


class LagTooLarge(DataError):
    pass


class BadExponent(ConfigError):
    pass


class DomainError(NumericalError, ValueError):
    pass


class RankDeficient(NumericalError):
    pass


class VarianceCollapse(NumericalError):
    pass
