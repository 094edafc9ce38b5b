"""Exception hierarchy shared by every minsurf module."""


class MinsurfError(Exception):
    """Base class for all library errors."""


class ExprSyntaxError(MinsurfError, ValueError):
    def __init__(self, message, position):
        super().__init__(f"{message} at offset {position}")
        self.position = position


class EmptyExpressionError(ExprSyntaxError):
    def __init__(self):
        super().__init__("empty expression", 0)


class UnknownIdentifierError(ExprSyntaxError):
    def __init__(self, name, position):
        MinsurfError.__init__(self, f"unknown identifier {name!r} at offset {position}")
        self.name = name
        self.position = position


class SingularEvaluation(MinsurfError, ArithmeticError):
    """An expression was evaluated at a pole / branch point."""

    def __init__(self, reason, location):
        super().__init__(f"{reason} at z={location!r}")
        self.reason = reason
        self.location = location


class QuadratureError(MinsurfError):
    """Adaptive quadrature exhausted its subdivision budget."""


class DomainError(MinsurfError, ValueError):
    """A point or path leaves the admissible parameter domain."""


class DegenerateMetricError(MinsurfError):
    """Conformal factor vanishes (branch point of the immersion)."""


class FlatPointError(MinsurfError):
    """Gauss curvature vanishes where strictly negative curvature is required."""


class AntipodalNormalError(MinsurfError):
    """Angle function reaches -1 (or |N_V| = 1 for the second function)."""


class BranchCutError(MinsurfError):
    """The principal square root branch cut is met inside the domain."""


class ZeroOfHopfError(MinsurfError):
    """G'*Psi vanishes inside the domain, so no isothermic chart exists."""


class CriticalPointError(MinsurfError):
    """g'(zeta) = 0 where a quotient by g' is required."""


class ZeroOfGaussMapError(MinsurfError):
    """g(zeta) = 0 where log g is required."""


class ClassificationError(MinsurfError):
    """Input samples are unusable for classification."""


class BranchUnwrapError(ClassificationError):
    """Consecutive samples are too far apart to continue log g."""
