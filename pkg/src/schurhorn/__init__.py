"""Schur-Horn constructions for a finite model of a II_1 factor."""

from .dyadic import (
    CompleteFlag,
    StepFunction,
    build_flag,
    diagonal_flag,
    discretize_along_flag,
    dyadic_average,
)
from .embedding import (
    BlockStructure,
    conditional_expectation_blocks,
    conditional_expectation_diagonal,
    flag_matching_unitary,
    pi_embed,
)
from .exceptions import (
    DimensionMismatch,
    DomainViolation,
    EmptyInput,
    GridMismatch,
    LevelExhausted,
    NonConvergence,
    NotHermitian,
    NotInMasa,
    NotMajorized,
    NumericalBreakdown,
    SchurHornError,
)
from .horn import HornSolution, RotationStep, horn_construct, schur_check
from .majorization import (
    MajorizationVerdict,
    Mode,
    check_operator_majorization,
    check_vector_majorization,
    convex_criterion_probe,
    omega_membership,
)
from .pipeline import ReconstructionCertificate, arveson_kadison_probe, reconstruct, verify_certificate
from .sampling import InstanceMode, generate_instance, haar_unitary
from .tolerances import DEFAULT, Tolerances
from .tracial import (
    EigenSystem,
    HermitianOperator,
    SpectralScale,
    TracialContext,
    eigen_decompose,
    scale_distance,
    spectral_scale,
    trace_norm,
)

__version__ = "0.1.0"
