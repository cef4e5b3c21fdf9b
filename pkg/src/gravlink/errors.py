"""Exception and warning types shared across the toolkit."""


class ExteriorDomainError(ValueError):
    """Radial coordinate lies at or inside the horizon (or is non-physical)."""


class PacketMismatchError(ValueError):
    """Two wave packets are not related by a single redshift channel."""


class StateValidationError(ValueError):
    """Gaussian state data violates symmetry or the bona fide condition."""


class NonSymplecticError(ValueError):
    """Matrix fails the symplectic-form invariance check."""


class FidelityNumericsError(ArithmeticError):
    """Fidelity determinants left the numerically trustworthy region."""


class SingularFormulaError(ValueError):
    """Closed-form expression is singular at the requested parameters."""


class ExtrapolationError(RuntimeError):
    """Step-halving extrapolation did not converge to the requested accuracy."""


class UnidentifiableModelError(RuntimeError):
    """Likelihood carries no information about the channel parameter."""


class ScenarioError(ValueError):
    """Scenario file failed schema validation."""


class NarrowbandWarning(UserWarning):
    """Wave packet is too broad for the narrowband channel model."""


class PerturbativeRegimeWarning(UserWarning):
    """Perturbative overlap requested outside its validity regime."""
