"""Exception types raised by the engine."""


class EngineError(Exception):
    """Base class for all engine-specific errors."""


class TauLevelOverflow(EngineError):
    """A t-symbol above the context's maximum tau level would be created."""


class PoleHit(EngineError):
    """Evaluation point lies on a pole divisor u_i - u_j = 0."""


class MissingAssignment(EngineError):
    """Evaluation point does not assign every generator of the expression."""


class BadIndexPair(EngineError):
    """Index pair outside the domain of a derived quantity (e.g. theta(i,i))."""


class ArityUnsupported(EngineError):
    """Correlator arity outside the supported range."""


class UnsupportedPairing(EngineError):
    """No formula is available for the requested pairing."""


class UnknownIdentity(EngineError):
    """Identity id not present in the registry."""
