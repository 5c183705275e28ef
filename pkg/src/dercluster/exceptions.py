"""Exception types raised by dercluster."""


class ParameterError(ValueError):
    """An argument is outside its valid range (k, walk length, threshold...)."""


class EdgeListError(ValueError):
    """An edge-list line could not be parsed."""

    def __init__(self, lineno, message):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {message}")


class DegenerateGraphError(ValueError):
    """The graph has no edges, so the stationary measure is undefined."""


class IsolatedVertexError(ValueError):
    """An operation needs a vertex with positive degree."""


class EmptyClusterError(ValueError):
    pass


class InvalidInputError(ValueError):
    """Partitions or runs disagree on the vertex set, or input is unsupported."""
