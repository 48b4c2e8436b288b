"""Exception hierarchy shared by all modules."""


class KGTunnelError(Exception):
    pass


class DomainError(KGTunnelError, ValueError):
    """Input outside the domain where a quantity is defined."""


class EdgeError(KGTunnelError):
    """Evaluation too close to a tunneling-zone edge for the requested path."""


class NotSupportedError(KGTunnelError):
    """Energy zone recognised but not computed (Klein, above-barrier)."""


class SpecError(DomainError):
    """Wave-packet specification that violates its invariants."""


class BracketError(KGTunnelError):
    """Peak search found no interior maximum; carries the coarse scan."""

    def __init__(self, message, times=None, values=None):
        super().__init__(message)
        self.times = times
        self.values = values


class SchemaError(KGTunnelError, ValueError):
    """CSV document missing required columns."""
