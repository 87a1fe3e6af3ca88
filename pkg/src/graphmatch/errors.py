"""Exception types shared across the package."""


class GraphMatchError(Exception):
    """Base class for all package errors."""


class ParseError(GraphMatchError):
    """Corpus file could not be parsed."""


class ValidationError(GraphMatchError):
    """A graph or corpus violated a structural invariant."""


class UnknownNode(GraphMatchError):
    pass


class UnknownAttribute(GraphMatchError):
    pass


class MissingAttribute(GraphMatchError):
    pass


class EmptyGraph(GraphMatchError):
    pass


class EmptyCorpus(GraphMatchError):
    pass


class EmptyIndex(GraphMatchError):
    pass


class DimensionMismatch(GraphMatchError):
    pass


class NoKnownTokens(GraphMatchError):
    """A query graph shares no subgraph token with the training corpus."""


class BadParams(GraphMatchError):
    pass


class BadSpec(GraphMatchError):
    pass


class PerplexityTooLarge(GraphMatchError):
    pass


class TargetIsNoise(GraphMatchError):
    """Cluster-based matching requested for a DBSCAN noise point."""


class TooLargeForExact(GraphMatchError):
    """Graph pair exceeds the exact edit-distance size guard."""


class DependencyError(GraphMatchError):
    """A pipeline stage was requested before its upstream artifact exists."""

    def __init__(self, missing: str):
        super().__init__(f"missing pipeline stage: {missing}")
        self.missing = missing


class Busy(GraphMatchError):
    """A long-running operation is already in flight for this session."""
