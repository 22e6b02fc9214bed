"""Surface-code overhead estimates for small-angle Z rotations.

Two ways of implementing ``Z_k = diag(1, exp(i*pi/2**k))`` are costed in
qubits-rounds: distilling ``|psi_k>`` magic states directly, and
approximating ``Z_k`` with Clifford+T sequences whose T gates are
themselves distilled.
"""

from .exceptions import (
    Infeasible,
    InsufficientData,
    ModelRangeError,
    NotUnitary,
    ResourceLimit,
    SequenceFileError,
    SynthesisError,
)
from .error_model import PhysicalParams

__version__ = "0.1.0"

__all__ = [
    "Infeasible",
    "InsufficientData",
    "ModelRangeError",
    "NotUnitary",
    "PhysicalParams",
    "ResourceLimit",
    "SequenceFileError",
    "SynthesisError",
]
