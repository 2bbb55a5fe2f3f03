"""Exception hierarchy shared by the numeric services and the CLI."""


class PSTError(Exception):
    pass


class GraphValidationError(PSTError, ValueError):
    pass


class LayerGapError(GraphValidationError):
    """An edge joins two nodes whose layers do not differ by exactly one."""


class DisconnectedGraphError(GraphValidationError):
    pass


class EndLayerError(GraphValidationError):
    pass


class LayerMismatchError(GraphValidationError):
    """Declared layer differs from the graph distance to the left anchor."""


class UnknownNodeError(GraphValidationError, KeyError):
    def __str__(self) -> str:
        # KeyError would otherwise repr() the message
        return str(self.args[0]) if self.args else ""


class ChainError(PSTError, ValueError):
    pass


class SizeMismatchError(PSTError, ValueError):
    def __init__(self, chain_sites: int, graph_sites: int):
        self.chain_sites = chain_sites
        self.graph_sites = graph_sites
        super().__init__(
            f"chain has {chain_sites} sites but graph has {graph_sites} layers"
        )


class MalformedGraphError(PSTError, ValueError):
    pass


class HamiltonianError(PSTError, ValueError):
    pass


class CompressionError(PSTError):
    pass


class NotSelfAdjointError(PSTError):
    pass


class DiagnosticsError(PSTError):
    pass


class SuiteFailure(PSTError):
    """A property suite observed a violated invariant."""
