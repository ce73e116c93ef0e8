"""Exception hierarchy shared across the package."""


class SotMatchError(Exception):
    """Base class for all errors raised by sotmatch."""


# -- graphs and features -----------------------------------------------------

class GraphError(SotMatchError, ValueError):
    """Invalid graph construction (asymmetric adjacency, bad ids, ...)."""


class DisconnectedGraph(GraphError):
    pass


class DisconnectedQuery(DisconnectedGraph):
    pass


class FeatureKindMismatch(SotMatchError, ValueError):
    pass


class DimensionMismatch(SotMatchError, ValueError):
    pass


# -- solvers ------------------------------------------------------------------

class SolverError(SotMatchError):
    """Numerical failure inside one of the solvers."""


class InfeasibleMarginals(SolverError, ValueError):
    pass


class NonFiniteCost(SolverError, ValueError):
    pass


class ShapeMismatch(SotMatchError, ValueError):
    pass


class AsymmetricStructure(SotMatchError, ValueError):
    pass


class DegeneratePlan(SolverError):
    pass


# -- matching -----------------------------------------------------------------

class QueryTooLarge(SotMatchError, ValueError):
    pass


class NoCandidates(SotMatchError):
    """Every sliding subgraph was rejected by the candidate filter."""


# -- file formats ----------------------------------------------------------------

class ParseError(SotMatchError, ValueError):
    def __init__(self, reason, line=None):
        self.reason = reason
        self.line = line
        msg = reason if line is None else f"line {line}: {reason}"
        super().__init__(msg)


class DanglingEdge(ParseError):
    pass


class DuplicateNode(ParseError):
    pass


class DuplicateEdge(ParseError):
    pass
