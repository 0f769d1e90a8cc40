"""Exception types shared across the package."""


class GraphError(Exception):
    """Base class for structural errors in embedded graphs."""


class EulerViolation(GraphError):
    """V - E + F does not match the expected value for the embedding."""


class DanglingDart(GraphError):
    """A dart is missing from (or duplicated in) its vertex rotation."""


class NotACycle(GraphError):
    """The given dart/vertex sequence does not close into a cycle."""


class NotSimple(GraphError):
    """The given cycle repeats a vertex."""


class NotTriangulated(GraphError):
    """An operation required a triangulated graph."""


class NegativeCycle(GraphError):
    """The graph contains a negative-length cycle."""


class DegreeViolation(GraphError):
    """A dual vertex has an unexpected degree."""


class UnknownFace(GraphError):
    """The requested face does not exist or carries no location data."""


class FormatError(Exception):
    """Malformed graph file or oracle container."""
