"""Exception hierarchy for phhinf.

All numeric failure modes raise a subclass of :class:`PhhinfError` so callers
(notably the CLI) can distinguish "inadmissible configuration" from "solver
broke down" without string matching.
"""


class PhhinfError(Exception):
    """Base class for all phhinf errors."""


class NonFiniteMatrix(PhhinfError):
    """Input contains NaN or Inf entries."""


class DimensionMismatch(PhhinfError):
    """Matrix shapes are inconsistent with the requested operation."""


class SchurConvergenceError(PhhinfError):
    """The QR iteration failed to converge; carries the sweep budget."""


class SingularMatrix(PhhinfError):
    """A pivot fell below the singularity threshold in a linear solve."""


class IndefiniteMatrix(PhhinfError):
    """A matrix required to be positive semi-definite is indefinite."""


class SingularResolvent(PhhinfError):
    """Transfer function evaluated at (numerically) a pole."""


class NotPassivatable(PhhinfError):
    """No port-Hamiltonian representation with the given Hamiltonian exists."""


class SpectrumClash(PhhinfError):
    """sigma(A) and sigma(-A^T) overlap; the Lyapunov equation is singular."""


class ImaginaryAxisEigenvalue(PhhinfError):
    """The Hamiltonian matrix has eigenvalues on the imaginary axis."""


class SubspaceNotGraph(PhhinfError):
    """The selected invariant subspace is not a graph subspace (U1 singular)."""


class ResidualTooLarge(PhhinfError):
    """A computed solution failed its residual acceptance bound."""


class GramMismatch(PhhinfError):
    """C != B^T P beyond tolerance in a Lur'e check."""


class DissipationViolated(PhhinfError):
    """The Lyapunov inequality P A + A^T P <= 0 fails."""


class RankDeficientB(PhhinfError):
    """B lacks full column rank (strong Lur'e requirement)."""


class NotAsymptoticallyStable(PhhinfError):
    """A matrix required to be asymptotically stable is not."""


class OrderingViolated(PhhinfError):
    """Extremal KYP solutions violate X_min <= X_max."""


class SpectralRadiusTooLarge(PhhinfError):
    """rho(X Y) >= gamma^2 in classical synthesis."""


class IndefiniteV1(PhhinfError):
    """The disturbance-weight Gram matrix V1 is indefinite; carries lambda_min."""

    def __init__(self, message, lambda_min=None):
        super().__init__(message)
        self.lambda_min = lambda_min


class NoSolutionX(PhhinfError):
    """The modified control equation has no acceptable solution."""


class PhVerificationFailed(PhhinfError):
    """A synthesized controller failed its port-Hamiltonian certificate."""


class UnstableSystem(PhhinfError):
    """H-infinity norm requested for an unstable system."""


class NearSingularGramian(PhhinfError):
    """Characteristic values too close to zero for balancing."""


class InadmissibleP(PhhinfError):
    """The shift matrix P is not of a balancing-admissible form."""
