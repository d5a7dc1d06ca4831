"""Structure-preserving H-infinity synthesis and balanced truncation for
port-Hamiltonian systems."""

from .errors import (
    DimensionMismatch,
    DissipationViolated,
    GramMismatch,
    ImaginaryAxisEigenvalue,
    InadmissibleP,
    IndefiniteMatrix,
    IndefiniteV1,
    NearSingularGramian,
    NonFiniteMatrix,
    NotAsymptoticallyStable,
    NotPassivatable,
    OrderingViolated,
    PhhinfError,
    PhVerificationFailed,
    ResidualTooLarge,
    SingularMatrix,
    SingularResolvent,
    SpectralRadiusTooLarge,
    SpectrumClash,
    SubspaceNotGraph,
    UnstableSystem,
)
from .kyp import ExtremalKyp, LureCertificate, check_lure, check_strong_lure, extremal_kyp
from .linalg import ordered_schur, psd_factor, real_schur, svd_signed
from .models import DcMotorConfig, MsdConfig, dc_motor, msd_chain
from .reduction import (
    BalancedModel,
    balance_pair,
    classical_hinf_bt,
    error_curve,
    mhinf_bt,
    minimal_realization,
)
from .riccati import CareProblem, CareSolution, care_residual, solve_care, solve_lyapunov
from .synth import (
    ClosedLoop,
    HinfController,
    HinfWeights,
    classical_hinf,
    classical_weights,
    closed_loop_norm,
    controller_to_ph,
    hinf_norm,
    interconnect,
    modified_hinf,
    modified_hinf_with_P,
    modified_weights,
)
from .systems import (
    PHSystem,
    StateSpace,
    is_asymptotically_stable,
    is_minimal,
    load_system,
    ph_representation,
    ph_to_ss,
    save_system,
    ss_to_ph,
    transfer_eval,
)

__version__ = "0.1.0"
