class TorfanError(Exception):
    """Base class for all errors raised by torfan."""


class EmptyPolyhedron(TorfanError):
    pass


class NotACone(TorfanError):
    pass


class UnboundedDirection(TorfanError):
    """The functional is unbounded below on the polyhedron."""


class PointOutside(TorfanError):
    pass


class FiberEmpty(TorfanError):
    pass


class RankDeficient(TorfanError):
    pass


class DimensionError(TorfanError):
    pass


class SupportMismatch(TorfanError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class RouteMismatch(TorfanError):
    def __init__(self, message, direct=None, dual=None):
        super().__init__(message)
        self.direct = direct
        self.dual = dual


class ParseError(TorfanError):
    pass


class SchemaError(TorfanError):
    pass


class RankError(TorfanError):
    pass
