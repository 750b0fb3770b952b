"""Conditional-bias estimation: per-history epsilons and the weighted aggregate.

For a history length h, the estimate is the worst absolute deviation from 1/2
of the empirical next-bit ratio count(history + bit) / count(history), taken
over all histories that actually occur.  The weighted aggregate averages the
per-history estimates with harmonic weights, down-weighting long histories
whose counts carry little statistical evidence.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, replace

import numpy as np

from svrand.bitseq import BitSequence, CountTable, count_substrings, count_substrings_fast

__all__ = [
    "EpsilonProfile",
    "epsilon_h",
    "epsilon_profile",
    "history_weights",
    "loglog_history",
    "max_history",
    "weighted_epsilon",
]


def max_history(n: int) -> int:
    """Largest history length at which a sub-1/2 epsilon verdict is possible.

    A sequence of length n can contain all length-(h+1) patterns only if
    2**(h+1) <= n - h - 1, which bounds h by floor(log2 n) - 1.
    """
    if n < 2:
        raise ValueError(f"sequence length must be >= 2, got {n}")
    return n.bit_length() - 2


def loglog_history(n: int) -> int:
    """Conservative history bound floor(log2(floor(log2 n))), the CLI 'loglog' preset."""
    if n < 2:
        raise ValueError(f"sequence length must be >= 2, got {n}")
    return (n.bit_length() - 1).bit_length() - 1


@dataclass(frozen=True)
class EpsilonProfile:
    """Per-history epsilon estimates for one bit sequence.

    epsilons[h] is the estimate for history length h, or None where no
    history of that length occurs.  max_h may exceed the admissible bound
    only when forced is set.
    """

    epsilons: tuple[float | None, ...]
    max_h: int
    n: int
    mode: str
    estimator: str = "ratio"
    requested_h: int | None = None
    clamped: bool = False
    forced: bool = False
    weighted: float | None = None

    def __post_init__(self):
        if len(self.epsilons) != self.max_h + 1:
            raise ValueError("profile must hold one entry per history length 0..max_h")
        for h, e in enumerate(self.epsilons):
            if e is not None and not 0.0 <= e <= 0.5:
                raise ValueError(f"epsilon for history {h} outside [0, 1/2]: {e}")
        if not self.forced and self.max_h > max_history(self.n):
            raise ValueError(
                f"max_h={self.max_h} exceeds the admissible bound "
                f"{max_history(self.n)} for n={self.n} without forced=True")

    def with_weighted(self, value: float) -> "EpsilonProfile":
        return replace(self, weighted=value)


def epsilon_h(counts: CountTable, h: int, *, exact: bool = False) -> float | None:
    """Worst next-bit deviation from 1/2 after histories of length h.

    Uses raw occurrence counts: the ratio for pattern w = history + bit is
    count(w) / count(history), with the whole-sequence length as the h = 0
    denominator.  Histories that never occur contribute no evidence and are
    skipped; if none occurs the result is undefined (None).  A pattern with
    zero count under an occurring history yields the maximal deviation 1/2.

    With exact=True, occurrences of the history at the very end of the
    sequence (which have no successor bit) are excluded from denominators.
    """
    if h < 0:
        raise ValueError(f"history length must be >= 0, got {h}")
    if counts.max_len < h + 1:
        raise ValueError(
            f"count table covers lengths up to {counts.max_len}, need {h + 1}")
    num = counts.level(h + 1)
    if h == 0:
        n = counts.source_len
        if n == 0:
            return None
        return float(np.max(np.abs(num / n - 0.5)))
    if exact:
        den = num.reshape(-1, 2).sum(axis=1)
    else:
        den = counts.level(h)
    occurring = den > 0
    if not occurring.any():
        return None
    ratios = num.reshape(-1, 2)[occurring] / den[occurring, None]
    return float(np.max(np.abs(ratios - 0.5)))


def epsilon_profile(s: BitSequence, max_h: int | None = None, mode: str = "linear",
                    *, force_h: bool = False, exact: bool = False) -> EpsilonProfile:
    """Estimate epsilons for all history lengths 0..H from one shared count table.

    H defaults to max_history(len(s)).  Larger requests are clamped back to
    that bound with a warning unless force_h is set, in which case the
    override is recorded on the profile.
    """
    n = len(s)
    if n < 2:
        raise ValueError(f"need at least 2 bits to estimate, got {n}")
    bound = max_history(n)
    clamped = False
    forced = False
    if max_h is None:
        use_h = bound
    elif max_h < 0:
        raise ValueError(f"requested max history must be >= 0, got {max_h}")
    elif max_h <= bound:
        use_h = max_h
    elif force_h:
        use_h = max_h
        forced = True
    else:
        use_h = bound
        clamped = True
        warnings.warn(
            f"requested history length {max_h} exceeds floor(log2 n) - 1 = {bound} "
            f"for n={n}; clamped to {bound}")
    if mode == "linear":
        counts = count_substrings_fast(s, use_h + 1)
    elif mode == "cyclic":
        counts = count_substrings(s, use_h + 1, mode="cyclic")
    else:
        raise ValueError(f"mode must be 'linear' or 'cyclic', got {mode!r}")
    eps = tuple(epsilon_h(counts, h, exact=exact) for h in range(use_h + 1))
    return EpsilonProfile(
        epsilons=eps, max_h=use_h, n=n, mode=mode,
        estimator="exact" if exact else "ratio",
        requested_h=max_h, clamped=clamped, forced=forced)


def history_weights(max_h: int) -> np.ndarray:
    """Normalised harmonic weights 1/(h+1) for h = 0..max_h; they sum to 1."""
    if max_h < 0:
        raise ValueError(f"max_h must be >= 0, got {max_h}")
    raw = 1.0 / np.arange(1, max_h + 2)
    return raw / raw.sum()


def weighted_epsilon(profile: EpsilonProfile, *, allow_custom_h: bool = False) -> float:
    """Single harmonic-weighted epsilon for a complete profile.

    The profile must cover exactly the admissible range 0..max_history(n)
    and contain no undefined entries; callers deliberately aggregating over
    a different range opt in with allow_custom_h (the choice is visible in
    the profile metadata they carry).
    """
    undefined = [h for h, e in enumerate(profile.epsilons) if e is None]
    if undefined:
        raise ValueError(f"profile has undefined epsilons at history lengths {undefined}")
    if not allow_custom_h and profile.max_h != max_history(profile.n):
        raise ValueError(
            f"profile max_h={profile.max_h} differs from the admissible bound "
            f"{max_history(profile.n)} for n={profile.n}; pass allow_custom_h=True "
            f"to aggregate anyway")
    weights = history_weights(profile.max_h)
    return float(np.dot(weights, np.asarray(profile.epsilons, dtype=float)))
