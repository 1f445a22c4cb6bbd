#!/usr/bin/env python3
"""
SAIL ERRORS - EXCEPTION HIERARCHY
=================================

Every error raised by the sailkit library derives from SailkitError so the
command line front end can catch one type, log it and map it to an exit code.

EXIT CODE MAPPING:
-----------------
- ResourceCapError subclasses (BoxTooLarge, PrecisionExhausted) -> 3
- UsageError                                                      -> 2
- Interrupted                                                     -> 130
- everything else                                                 -> 1
"""


class SailkitError(Exception):
    """Base class for all sailkit errors."""

    exit_code = 1

    def to_json(self):
        return {"error": type(self).__name__, "message": str(self)}


# ---------------------------------------------------------------------------
# Field construction
# ---------------------------------------------------------------------------
class NonSquarefree(SailkitError):
    def __init__(self, value, message=None):
        self.value = value
        super().__init__(message or f"{value} is not a squarefree integer > 1")


class NotSquarefree(NonSquarefree):
    """Raised for family instances whose p or r fails the squarefree test."""


class DegenerateBiquadratic(SailkitError):
    pass


class MonogenicityUnknown(SailkitError):
    pass


# ---------------------------------------------------------------------------
# Arithmetic and dispatch
# ---------------------------------------------------------------------------
class DivisionByZero(SailkitError, ZeroDivisionError):
    pass


class WrongFieldKind(SailkitError):
    pass


class WrongDegree(SailkitError):
    pass


class WrongNorm(SailkitError):
    pass


class IndexOutOfRange(SailkitError, IndexError):
    pass


class NoSuchUnit(SailkitError):
    pass


class NotApplicable(SailkitError):
    pass


# ---------------------------------------------------------------------------
# Lattice geometry
# ---------------------------------------------------------------------------
class NotASimplex(SailkitError):
    pass


class DegeneratePlane(SailkitError):
    pass


class DegenerateInput(SailkitError):
    pass


class UnsupportedDimension(SailkitError):
    pass


class NotCertifiable(SailkitError):
    def __init__(self, reason, message=None):
        self.reason = reason
        super().__init__(message or f"polytope not certified on the sail: {reason}")

    def to_json(self):
        data = super().to_json()
        data["reason"] = self.reason
        return data


class CountMismatch(SailkitError):
    pass


class IncompleteSailData(SailkitError):
    pass


# ---------------------------------------------------------------------------
# Resource caps
# ---------------------------------------------------------------------------
class ResourceCapError(SailkitError):
    exit_code = 3


class BoxTooLarge(ResourceCapError):
    def __init__(self, predicted, cap):
        self.predicted = predicted
        self.cap = cap
        super().__init__(f"box enumeration would visit {predicted} candidates (cap {cap})")


class PrecisionExhausted(ResourceCapError):
    pass


class UsageError(SailkitError):
    exit_code = 2


class Interrupted(SailkitError):
    """A scan stopped by a signal or by a worker process that died."""

    exit_code = 130
