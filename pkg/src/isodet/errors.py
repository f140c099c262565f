"""Exception hierarchy shared by all modules.

Every domain failure raises a subclass of :class:`IsodetError`, so the CLI
can map any library error to a structured diagnostic and exit code 1.
"""


class IsodetError(Exception):
    """Base class for all domain errors raised by this package."""


# ---------------------------------------------------------------- fields

class CompositeModulus(IsodetError):
    """The requested modulus is not a prime number."""


class CharTwoUnsupported(IsodetError):
    """Characteristic two is rejected everywhere in this package."""


class ResidueIsSquare(IsodetError):
    """The supplied extension generator is a square, so adjoining its
    square root would not give a quadratic extension."""


# ---------------------------------------------------------------- linalg

class NonSquare(IsodetError):
    """Operation requires a square matrix."""


class OddDimension(IsodetError):
    """Operation requires an even dimension."""


class NotSkewSymmetric(IsodetError):
    """Matrix is not skew-symmetric with zero diagonal."""


class IndexOutOfRange(IsodetError):
    """Row/column selection out of range."""


class SizeMismatch(IsodetError):
    """Row and column selections must have equal size."""


class RankDeficient(IsodetError):
    """Matrix does not have the rank the operation requires."""


class DimensionMismatch(IsodetError):
    """Operand shapes or fields are incompatible."""


# ---------------------------------------------------------------- forms / orbits

class InvalidForm(IsodetError):
    """Gram matrix does not define a form of the requested kind."""


class InvalidParams(IsodetError):
    """Orbit parameters violate the admissibility conditions."""


class InsufficientWittIndex(IsodetError):
    """The form has too few hyperbolic pairs to populate the stratum."""


class SignUndefinedForForm(IsodetError):
    """No reference maximal isotropic subspace is available over this
    field, so the two-component sign cannot be evaluated."""


class ConfigMismatch(IsodetError):
    """Orbit parameters belong to different or wrong configurations."""


class SymmetryMismatch(IsodetError):
    """Right-hand side has the wrong symmetry for the congruence."""


# ---------------------------------------------------------------- equations

class ExceptionalNeedsSign(IsodetError):
    """The two-component stratum needs component generators, not plain
    rank-condition generators."""


class EigenvalueNotInField(IsodetError):
    """The half-form involution eigenvalue is missing; retry over a
    quadratic extension of the base field."""


class WrongKind(IsodetError):
    """Operation is only defined for the other kind of bilinear form."""


# ---------------------------------------------------------------- verify

class BudgetExceeded(IsodetError):
    """Enumeration would visit more matrices than the budget allows."""
