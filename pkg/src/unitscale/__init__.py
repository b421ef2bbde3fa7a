"""Scale unitary matrices to unit line sums with diagonal phase matrices."""
from .haar import RngStream, sample_unitaries, sample_unitary
from .kernels import BACKEND
from .landscape import (
    LandscapeGradient,
    StationaryClass,
    classify_stationary,
    finite_difference_gradient,
    gradient,
)
from .matcore import (
    DiagonalPhase,
    LineSums,
    NonUnitaryInput,
    apply_diagonals,
    line_sums,
    matrix_from_json,
    matrix_sum,
    matrix_to_json,
    phi,
    potential,
    unitarity_residual,
)
from .scaler import (
    ScaleConfig,
    ScaleResult,
    ScaleTrace,
    Status,
    detect_constant_argument_start,
    escape_saddle,
    prestart_perturbation,
    scale,
    sinkhorn_step,
)
from .u2 import (
    Attractor,
    Branch,
    U2Params,
    u2_analytic_zxz,
    u2_convergence_ratio,
    u2_params,
    u2_predict_attractor,
)
from .zxz import (
    Membership,
    XZXZXZDecomposition,
    ZXZDecomposition,
    membership,
    negator,
    phasor,
    xzxzxz_decompose,
    zxz_decompose,
)

__version__ = "0.1.0"
