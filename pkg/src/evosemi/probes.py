"""Classification of monotone probe sequences.

Limit probes in this library all reduce to one question: given values
of a nondecreasing quantity sampled at geometrically growing
abscissae, is the quantity running off to infinity or settling down?
The increments between consecutive samples decide it.  Sustained
increments (ratio near one or above) cannot sum to anything finite;
geometrically dying increments admit a tail-sum estimate.  Everything
in between is reported as inconclusive rather than guessed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import Inconclusive

# Increment-ratio thresholds.  Above SUSTAIN the series is treated as
# divergent; a geometric tail estimate is only trusted below TRUST.
SUSTAIN_RATIO = 0.9
TRUST_RATIO = 0.8


@dataclass(frozen=True)
class TailVerdict:
    diverges: bool
    estimate: float      # finite limit estimate; +inf when diverging
    uncertainty: float   # geometric tail bound for finite estimates


def classify_tail(values: np.ndarray, tol: float, what: str) -> TailVerdict:
    """Classify a nondecreasing sample sequence at geometric abscissae.

    ``values`` must be the probe outputs in sampling order.  Raises
    Inconclusive when increments are still decaying too slowly to
    bound the tail, and ValueError when fewer than three samples are
    supplied.
    """
    values = np.asarray(values, dtype=float)
    if values.size < 3:
        raise ValueError(f"{what}: need at least 3 samples")
    if np.any(np.isnan(values)):
        raise Inconclusive(f"{what}: probe produced NaN")
    if np.any(np.isinf(values)):
        return TailVerdict(True, math.inf, 0.0)

    inc = np.diff(values)
    if np.any(inc < -1e-12 * max(1.0, float(np.max(np.abs(values))))):
        raise ValueError(f"{what}: samples are not nondecreasing")
    inc = np.maximum(inc, 0.0)
    last = float(inc[-1])
    prev = float(inc[-2])

    if last <= tol:
        ratio = min(last / prev, TRUST_RATIO) if prev > 0 else 0.0
        tail = last * ratio / (1.0 - ratio) if ratio > 0 else 0.0
        return TailVerdict(False, float(values[-1]), tail + last)

    if prev > 0.0 and last / prev >= SUSTAIN_RATIO:
        return TailVerdict(True, math.inf, 0.0)
    if prev == 0.0:
        # A dormant sequence that woke back up: no safe call.
        raise Inconclusive(f"{what}: increments restarted after a plateau")

    ratio = last / prev
    if ratio <= TRUST_RATIO:
        tail = last * ratio / (1.0 - ratio)
        if tail <= 100.0 * tol:
            return TailVerdict(False, float(values[-1]) + tail, tail)
    raise Inconclusive(
        f"{what}: increments still {last:.3e} (ratio {ratio:.3f}) "
        "at the end of the probe window"
    )
