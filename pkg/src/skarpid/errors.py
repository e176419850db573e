"""Exception hierarchy for skarpid.

Every error raised on purpose by this package derives from
:class:`SkarpidError`, so callers can catch one type at API boundaries.
Validation errors carry a human-readable message naming the violated
invariant.
"""

from __future__ import annotations


class SkarpidError(Exception):
    """Base class for all skarpid errors."""


# ---------------------------------------------------------------- dist-core


class InvalidVariable(SkarpidError):
    """Variable name is empty, duplicated, or otherwise malformed."""


class NegativeProbability(SkarpidError):
    """A probability value is negative."""


class NotNormalized(SkarpidError):
    """Probabilities (or channel rows) do not sum to 1 within tolerance."""


class DuplicateOutcome(SkarpidError):
    """The same outcome appears twice in an event list."""


class ArityMismatch(SkarpidError):
    """Outcome length does not match the number of variables."""


class UnknownVariable(SkarpidError):
    """A referenced variable is not part of the distribution."""


class ZeroProbabilityCondition(SkarpidError):
    """Conditioning on a value with zero marginal probability."""


class AlphabetMismatch(SkarpidError):
    """Channel input alphabet does not cover the variable's support."""


class OutOfRange(SkarpidError):
    """A numeric parameter lies outside its valid range."""


# ----------------------------------------------------------------- measures


class OverlappingSets(SkarpidError):
    """Variable sets that must be disjoint overlap."""


class SupportViolation(SkarpidError):
    """Relative entropy is infinite: p puts mass where q has none."""


# --------------------------------------------------------------- optimizers


class ConvergenceFailure(SkarpidError):
    """An iterative solver failed to reach its convergence tolerance."""


# ---------------------------------------------------------------------- pid


class InconsistentDecomposition(SkarpidError):
    """The two unique informations overconstrain the decomposition.

    Attributes hold the evidence: ``candidates`` are the two redundancy
    values implied by either marginal identity, ``residual`` is the size
    of the consistency defect, and ``partial`` is a record of whatever
    components could still be quantified.
    """

    def __init__(self, message, *, candidates=None, residual=None, partial=None):
        super().__init__(message)
        self.candidates = candidates
        self.residual = residual
        self.partial = partial


# ------------------------------------------------------------------ catalog


class UnknownName(SkarpidError):
    """No catalog entry with the requested name."""


class ParameterOutOfRange(SkarpidError):
    """A catalog parameter lies outside its documented range."""
