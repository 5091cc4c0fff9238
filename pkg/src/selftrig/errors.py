"""Exception types shared across the synthesis and runtime modules."""


class DimensionError(ValueError):
    """Inconsistent matrix/vector dimensions."""


class NotACSetError(ValueError):
    """The polytope does not contain the origin in its interior (some h_i <= 0)."""


class EmptyPolytopeError(RuntimeError):
    """An operation produced or received an empty polytope."""


class UnboundedPolytopeError(RuntimeError):
    """A bounded polytope was required but the set is unbounded."""


class SynthesisError(RuntimeError):
    """Target-set synthesis failed (iterate collapsed or did not converge)."""


class OutsideDomainError(RuntimeError):
    """The state lies outside the certified domain of attraction."""


class NonterminationError(RuntimeError):
    """The closed loop exhausted its step budget before reaching the target set."""


class CertificateError(RuntimeError):
    """An LP that a stored certificate guarantees feasible was infeasible."""


class ConfigError(ValueError):
    """A problem configuration failed schema validation."""

    def __init__(self, problems):
        if isinstance(problems, str):
            problems = [problems]
        self.problems = list(problems)
        super().__init__("invalid configuration: " + "; ".join(self.problems))
