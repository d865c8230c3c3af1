"""Work and heat extraction from bound-entangled qubit and qutrit clusters."""

__version__ = "0.1.0"

from .core import (  # noqa: E402
    DensityMatrix,
    HermitianOperator,
    HilbertSpace,
    SpectralDecomposition,
    eig_hermitian,
    matrix_exp_unitary,
    partial_trace,
    partial_transpose,
    tensor,
    trace_norm,
)
from .ergotropy import ErgotropyResult, ergotropy, optimal_unitary  # noqa: E402
from .states import fls_state, horodecki_state, smolin_state  # noqa: E402

__all__ = [
    "DensityMatrix",
    "HermitianOperator",
    "HilbertSpace",
    "SpectralDecomposition",
    "ErgotropyResult",
    "eig_hermitian",
    "ergotropy",
    "fls_state",
    "horodecki_state",
    "matrix_exp_unitary",
    "optimal_unitary",
    "partial_trace",
    "partial_transpose",
    "smolin_state",
    "tensor",
    "trace_norm",
]
