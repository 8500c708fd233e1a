"""Loop-group quantization toolkit.

Exact root-system and affine-weight arithmetic, explicit cubic Dirac operators
with square-formula verification, truncated loop spinor modules with CAR
operators, and the combinatorial index of quantized conjugacy classes.
"""

from ._accel import COMPILED as compiled_kernels
from .affine import (
    AffineWeight,
    AffineWeylElement,
    affine_dominant_representative,
    affine_inner_product,
    affine_weyl_apply,
    level_k_alcove,
    translate,
)
from .dirac import (
    IndexVector,
    IsotypicComponent,
    TruncationError,
    affine_isotypic_spectrum,
    cubic_dirac_matrix,
    dirac_kernel_finite,
    geometric_dirac_block,
    quantize_conjugacy_class,
    relative_cubic_dirac_matrix,
    verify_kostant_square,
)
from .repthy import (
    AffineWeightMultiset,
    EqualRankSubsystem,
    WeightMultiset,
    affine_weight_multiplicities,
    branch_equal_rank,
    irrep_weights,
    weyl_dim,
)
from .rootsys import (
    AlcoveLocation,
    CentralizerData,
    RootSystem,
    Weight,
    WeylElement,
    alcove_membership,
    build_root_system,
    centralizer_root_data,
    dominant_representative,
    inner_product,
    weyl_orbit,
)
from .spinor import (
    Direction,
    OperatorMatrix,
    SpinorBasis,
    ad_quadratic,
    clifford_op,
    finite_spinor_module,
    truncated_loop_spinor,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
