"""Exception hierarchy shared by every msrkit module."""


class MsrError(Exception):
    """Base class for all msrkit errors."""


class GraphError(MsrError, ValueError):
    pass


class SelfLoopError(GraphError):
    pass


class DuplicateEdgeError(GraphError):
    pass


class ZeroWeightError(GraphError):
    pass


class VertexRangeError(GraphError):
    pass


class WeightOverflowError(GraphError):
    pass


class DisconnectedGraphError(GraphError):
    pass


class NotBipartiteError(GraphError):
    pass


class SizeCapError(MsrError):
    """An exact routine was asked to run beyond its configured size cap."""


class SolverTimeout(MsrError):
    """A solver exceeded its time budget; distinct from infeasibility."""


class InstanceError(MsrError, ValueError):
    """Malformed problem instance or instance file."""


class TrivialNoInstance(MsrError):
    """The source instance is a forced no-instance, screened before reduction."""


class ExtractionError(MsrError):
    """A clustering could not be mapped back to a source witness."""
