"""Exception and warning types shared across the library.

Every failure mode that callers are expected to branch on gets its own
class here; numerical routines raise these rather than returning
sentinel values.
"""

from __future__ import annotations


class EvosemiError(Exception):
    """Base class for all library-specific errors."""


class RangeExceeded(EvosemiError):
    """A growth-rate inversion target lies at or beyond the upper limit."""


class BracketFailure(EvosemiError):
    """Root bracketing did not enclose a sign change within its budget."""


class NegativeDensity(EvosemiError):
    """A rate density evaluated to a negative value."""


class Inconclusive(EvosemiError):
    """A probe detected neither divergence nor stabilization in budget."""


class DomainExceeded(EvosemiError):
    """A semiflow was evaluated outside its trusted state window."""


class NotNonDegenerate(EvosemiError):
    """An operation requiring a non-degenerate semiflow met a fixed point."""


class HittingTimeUnbounded(EvosemiError):
    """The orbit never reached the requested target level within budget."""


class TimeOrderViolation(EvosemiError):
    """An evolution family was asked for a backward transition."""


class IntegratorFailure(EvosemiError):
    """The ODE propagator failed to advance at the requested tolerance."""


class EmptyGrid(EvosemiError):
    """A fit or check received an empty sample grid."""


class RankMismatch(EvosemiError):
    """Projection rank is inconsistent across evaluation points."""


class SingularRestriction(EvosemiError):
    """The restricted backward block is numerically singular."""


class QuadratureBudgetExceeded(EvosemiError):
    """Adaptive quadrature hit its subdivision budget before converging."""


class HypothesisViolation(EvosemiError):
    """A semigroup context failed its construction-time hypothesis checks."""


class ConfigError(EvosemiError):
    """A scenario file is malformed or references unknown entities."""


class PipelineFailure(EvosemiError):
    """A pipeline ran but did not meet its configured tolerances."""


class DegenerateDensity(UserWarning):
    """A rate density vanishes on a whole sampled subinterval."""


class ProbeInconclusive(UserWarning):
    """A numerical limit probe could not settle a tail condition."""
