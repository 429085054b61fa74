"""Exception hierarchy shared by every ramicalc module.

Each error carries a short machine-readable ``code`` (the class name) so the
CLI can put it into structured reports without string matching.
"""

from __future__ import annotations


class RamicalcError(Exception):
    """Base class for all library errors."""

    @property
    def code(self) -> str:
        return type(self).__name__


class SchemaError(RamicalcError):
    """Malformed user input (JSON documents, CLI arguments)."""


class PrimeMismatch(RamicalcError, TypeError):
    """Objects built over different primes were combined."""


# valuation core
class DivisionByZero(RamicalcError, ZeroDivisionError):
    pass


class ZeroToNonpositivePower(RamicalcError):
    pass


class ZeroInput(RamicalcError, ValueError):
    pass


class KOutOfRange(RamicalcError, ValueError):
    pass


class NotPrime(RamicalcError, ValueError):
    pass


# piecewise functions
class OutOfDomain(RamicalcError, ValueError):
    pass


class DomainMismatch(RamicalcError, ValueError):
    pass


class InvalidPiecewise(RamicalcError, ValueError):
    """Discontinuous, unordered or otherwise ill-formed piece data."""


class NonMonotoneBreaks(RamicalcError, ValueError):
    pass


class NonIncreasingAlphas(RamicalcError, ValueError):
    pass


class AlphaZeroNonzero(RamicalcError, ValueError):
    pass


class NotInLambdaP(RamicalcError, ValueError):
    pass


# groups and ramification
class InvalidGroup(RamicalcError, ValueError):
    pass


class NotASubgroup(RamicalcError, ValueError):
    pass


class NonNormalSubgroup(RamicalcError, ValueError):
    pass


class NonMonotoneValues(RamicalcError, ValueError):
    pass


class InvalidInertia(RamicalcError, ValueError):
    pass


class PGroupViolation(RamicalcError, ValueError):
    pass


# disc morphisms
class EmptySupport(RamicalcError, ValueError):
    pass


class CenterOutsideDisc(RamicalcError, ValueError):
    pass


class SkeletonModeUnsupported(RamicalcError, ValueError):
    pass


class RadiusOutOfRange(RamicalcError, ValueError):
    pass


class NonIntegralSeparableDegree(RamicalcError, ValueError):
    pass


class CompositionMismatch(RamicalcError, ValueError):
    pass


class NotFinite(RamicalcError, ValueError):
    """The series has no index realising the maximal norm on its disc."""


# annuli
class MultipleSlopesOnAnnulus(RamicalcError, ValueError):
    pass


class NoStableWindow(RamicalcError, ValueError):
    pass


class IdentityViolation(RamicalcError, ValueError):
    pass


class NotOnUnitCircle(RamicalcError, ValueError):
    pass


class NonFiniteAtGaussPoint(RamicalcError, ValueError):
    pass


class UnresolvedDirections(RamicalcError, ValueError):
    """Critical residue classes exist that are not defined over F_p."""


class EmptyData(RamicalcError, ValueError):
    pass
