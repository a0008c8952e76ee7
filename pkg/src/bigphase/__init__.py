"""Exact rotation-coefficient calculus on the big phase space.

The engine expresses the genus-0/1/2 quantities of semisimple quantum
cohomology in the generator algebra (u_i, s_i, r_ij, t_{k,i}) and verifies,
as exact rational-function identities at concrete dimension N, the full
stack of structure equations up to the genus-2 Virasoro L_1 constraint.
"""

from .errors import (ArityUnsupported, BadIndexPair, EngineError,
                     MissingAssignment, PoleHit, TauLevelOverflow,
                     UnknownIdentity, UnsupportedPairing)
from .expr import (ANY_DEGREE, NON_HOMOGENEOUS, QQ, Context, Expression,
                   from_tree, random_point)
from .identities import IdentityReport, identity_ids, verify

__all__ = [
    "ANY_DEGREE", "NON_HOMOGENEOUS", "QQ", "Context", "Expression",
    "from_tree", "random_point",
    "IdentityReport", "identity_ids", "verify",
    "EngineError", "TauLevelOverflow", "PoleHit", "MissingAssignment",
    "BadIndexPair", "ArityUnsupported", "UnsupportedPairing",
    "UnknownIdentity",
]

__version__ = "1.0.0"
