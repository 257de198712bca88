"""Exception hierarchy shared by all coheq modules."""


class CoheqError(Exception):
    """Base class for all library-specific failures."""


class DimensionMismatchError(CoheqError, ValueError):
    """Matrix/system dimensions are not conformable for the requested operation."""


class SingularResolventError(CoheqError):
    """(sI - A) is numerically singular at the evaluation point."""


class IllPosedInterconnectionError(CoheqError):
    """Feedback interconnection has a singular feedthrough loop."""


class UnstableSystemError(CoheqError):
    """An operation that requires a stable system received an unstable one."""


class NotPositiveOnAxisError(CoheqError):
    """A para-Hermitian matrix fails strict positivity on the imaginary axis."""


class IndefiniteOnAxisError(NotPositiveOnAxisError):
    """Matrix-valued spectrum is indefinite somewhere on the imaginary axis."""


class NonScalarSystemError(CoheqError, ValueError):
    """A scalar-only routine received a matrix-valued system."""


class RiccatiFailureError(CoheqError):
    """Algebraic Riccati equation could not be solved."""


class NoStabilizingSolutionError(RiccatiFailureError):
    """No stabilizing Riccati solution (Hamiltonian eigenvalues too close to the axis)."""


class IndefiniteSolutionError(RiccatiFailureError):
    """Riccati solution found but fails the required definiteness."""


class RankDeficientFeedthroughError(CoheqError):
    """Feedthrough matrix lacks the full row rank needed for a right inverse."""


class ImaginaryAxisPoleError(CoheqError):
    """Unstable pole sits on the imaginary axis; Blaschke cancellation undefined."""


class ContractivenessViolationError(CoheqError):
    """A transfer function expected to be strictly contractive has H-infinity norm >= 1."""


class InfeasibleError(CoheqError):
    """Convex feasibility problem (LMI / Riccati chain) has no solution at this gamma."""


class AssumptionViolatedError(CoheqError):
    """A standing assumption required by the synthesis chain fails."""


class VerificationFailureError(CoheqError):
    """A posteriori verification of a synthesized object failed."""


class SolverFailureError(CoheqError):
    """Conic solver returned an unusable status."""


class ParameterValidationError(CoheqError, ValueError):
    """Physical/benchmark parameters violate their defining constraints."""


class PositivityViolationError(CoheqError):
    """A derived constant required to be positive is not."""


class ConfigError(CoheqError, ValueError):
    """Run configuration is malformed or inconsistent."""
