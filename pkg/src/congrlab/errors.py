"""Exception hierarchy.

Every precondition failure raised by the library derives from
:class:`CongrlabError`, which the CLI maps to exit status 2.
"""


class CongrlabError(ValueError):
    """Base class for all library precondition failures."""


class ZeroInput(CongrlabError):
    pass


class NotCoprime(CongrlabError):
    pass


class FactorOverflow(CongrlabError, OverflowError):
    pass


class UnsupportedDegree(CongrlabError):
    pass


class DenominatorNotInvertible(CongrlabError):
    pass


class MismatchedField(CongrlabError):
    pass


class RingMismatch(CongrlabError):
    pass


class BadWeight(CongrlabError):
    pass


class BadParameters(CongrlabError):
    pass


class InsufficientPrecision(CongrlabError):
    pass


class FractionalExponent(CongrlabError):
    pass


class PreconditionFailed(CongrlabError):
    pass


class CoprimalityFailed(CongrlabError):
    pass


class NotInTable(CongrlabError, KeyError):
    pass


class ConstructionFailed(CongrlabError):
    """A construction produced a form violating its stated postconditions."""
