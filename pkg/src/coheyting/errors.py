"""Exception taxonomy for the whole package.

Every error raised on purpose derives from CoheytingError so callers can
catch one base class at the CLI boundary.
"""

from __future__ import annotations


class CoheytingError(Exception):
    """Base class for all package errors."""


class DuplicateName(CoheytingError):
    """Two points were declared with the same name."""


class CycleDetected(CoheytingError):
    """The cover relation is not acyclic."""


class FormatError(CoheytingError):
    """Malformed poset text, model text or element literal."""


class TermSyntaxError(FormatError):
    """Bad term or formula source; carries the offending position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class SignatureMismatch(CoheytingError):
    """Difference and implication may never meet inside one term."""


class OwnerMismatch(CoheytingError):
    """Elements of different algebras were combined."""


class NotADownset(CoheytingError):
    """A point set that must be down-closed is not."""


class EmptyElement(CoheytingError):
    """Bottom was passed where a nonzero element is required."""


class UnboundVariable(CoheytingError):
    """A term variable has no value in the environment or model."""


class NotMonotone(CoheytingError):
    """A map or sequence violates a required monotonicity."""


class NotOpen(CoheytingError):
    """A dual map does not send principal up-sets onto principal up-sets."""


class FrameMismatch(CoheytingError):
    """Two Kripke structures that must share shape do not."""


class InfiniteArithmetic(CoheytingError):
    """Arithmetic with an infinite (co)dimension value is forbidden."""


class IncoherentFamily(CoheytingError):
    """Components of a tower family do not project onto each other."""


class NotCauchyAtDepth(CoheytingError):
    """A sequence fails to stabilize at some tower depth."""

    def __init__(self, depth: int):
        super().__init__(f"sequence does not stabilize at depth {depth}")
        self.depth = depth


class NotSqueezed(CoheytingError):
    """The squeeze ordering lower <= middle <= upper fails somewhere."""


class LimitsDiffer(CoheytingError):
    """The two outer sequences of a squeeze converge to different limits."""


class SizeCap(CoheytingError):
    """A configured resource cap was hit before the computation finished.

    ``census`` carries whatever partial counts exist at abort time, so a
    caller can still report progress.
    """

    def __init__(self, message: str, census=None):
        super().__init__(message)
        self.census = census
