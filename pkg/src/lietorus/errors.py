"""Exception hierarchy.

Every library error derives from :class:`LieTorusError`.  The CLI maps
:class:`InputError` subclasses to exit code 2 and :class:`FieldTooSmall`
subclasses to exit code 3.
"""

from __future__ import annotations


class LieTorusError(Exception):
    """Base class for all errors raised by the package."""

    label = ""

    def to_json(self) -> dict:
        out = {"error": type(self).__name__, "message": str(self)}
        if self.label:
            out["label"] = self.label
        return out


class InputError(LieTorusError):
    """Malformed or inadmissible input."""


class FieldTooSmall(LieTorusError):
    """The working cyclotomic field does not contain a needed element."""


class CheckFailed(LieTorusError):
    """A structural verification failed on data that should satisfy it."""


# exactfield
class DivisionByZero(LieTorusError, ZeroDivisionError):
    pass


class ContextMismatch(InputError):
    pass


class OrderNotDividingConductor(FieldTooSmall):
    pass


class NonSplittingPolynomial(FieldTooSmall):
    """Raised when a polynomial has no full set of roots in the field.

    ``factor`` is the part of the polynomial left after removing every
    linear factor; it has no roots in the field.
    """

    def __init__(self, factor, message=None):
        self.factor = factor
        super().__init__(message or f"polynomial does not split: residual factor of degree {factor.degree}")


# rootsys
class InvalidType(InputError):
    pass


class NotARootSystem(InputError):
    pass


class NotIrreducible(InputError):
    pass


class RootNotInSystem(InputError):
    pass


# liealg
class SingularGram(InputError):
    pass


class NotASubalgebra(InputError):
    pass


class NoRegularElementFound(CheckFailed):
    pass


class NonSplitCartan(FieldTooSmall):
    pass


class NotAdDiagonalizable(FieldTooSmall):
    pass


class NotStable(InputError):
    pass


class NonSplitWeights(FieldTooSmall):
    pass


class StructureError(InputError):
    """Structure constants violate antisymmetry or the Jacobi identity."""


# autos
class NotAnAutomorphism(InputError):
    pass


class NotADiagramSymmetry(InputError):
    pass


class ExtensionInconsistent(CheckFailed):
    pass


class ZeroScalar(InputError):
    pass


class NotInIsometryGroup(InputError):
    pass


class NonCommutingTuple(InputError):
    pass


class ConductorTooSmall(FieldTooSmall):
    pass


# torus
class HomogeneityViolation(InputError):
    pass


class NonCartanInput(InputError):
    pass


class NotAdmissible(CheckFailed):
    """The shift fails the base condition.

    ``root`` is the violating base root, ``residues`` its semilattice and
    ``witness`` a dictionary describing the twisted fixed algebra.
    """

    def __init__(self, message, root=None, residues=None, witness=None):
        super().__init__(message)
        self.root = root
        self.residues = residues
        self.witness = witness or {}

    def to_json(self) -> dict:
        out = super().to_json()
        out["root"] = list(self.root) if self.root is not None else None
        out["witness"] = self.witness
        return out


class WindowTooSmall(InputError):
    pass


# classify
class NotAWitness(InputError):
    pass


class DivisibilityChainViolated(InputError):
    pass


class TooFewSlots(InputError):
    pass


class OrbitTooLarge(InputError):
    pass


class NotAnIsomorphism(InputError):
    pass


class NotATorusAutomorphism(InputError):
    pass


# cli
class SchemaError(InputError):
    pass
