"""Polynomial growth degree of exact integer sequences.

Two independent estimators are reported: the finite-difference degree
(exact once the sequence is eventually polynomial on the tail window) and
the nearest-integer slope of log v_n against log n.  Consumers treat the
pair plus the agreement flag as the verdict; a disagreement downgrades
certificates rather than guessing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


class SequenceTooShort(ValueError):
    pass


DEFAULT_WINDOW = 4


def finite_differences(seq, k):
    """k-fold iterated forward differences."""
    if k >= len(seq):
        raise SequenceTooShort("order %d on length %d" % (k, len(seq)))
    cur = list(seq)
    for _ in range(k):
        cur = [b - a for a, b in zip(cur, cur[1:])]
    return cur


@dataclass
class GrowthReport:
    sequence: list
    window: int
    fd_degree: int | None
    loglog_degree: int | None
    loglog_residual: float | None
    agreement: bool

    @property
    def degree(self):
        """Headline degree: finite-difference value when available."""
        return self.fd_degree if self.fd_degree is not None else self.loglog_degree

    def summary(self):
        return {"sequence": list(self.sequence), "window": self.window,
                "fd_degree": self.fd_degree, "loglog_degree": self.loglog_degree,
                "loglog_residual": self.loglog_residual,
                "agreement": self.agreement, "degree": self.degree}


def _loglog_slope(seq, window, start_n=1):
    """Least-squares slope of log v against log n over the tail window."""
    tail = [(start_n + i, v) for i, v in enumerate(seq)][-window:]
    if any(v <= 0 for _, v in tail):
        return None, None
    xs = [math.log(n) for n, _ in tail]
    ys = [math.log(v) for _, v in tail]
    mx = sum(xs) / len(xs)
    my = sum(ys) / len(ys)
    sxx = sum((x - mx) ** 2 for x in xs)
    if sxx == 0:
        return None, None
    slope = sum((x - mx) * (y - my) for x, y in zip(xs, ys)) / sxx
    resid = sum((y - my - slope * (x - mx)) ** 2 for x, y in zip(xs, ys))
    return slope, resid


def growth_degree(seq, window=DEFAULT_WINDOW, start_n=1):
    """Estimate the degree d with seq[n] ~ n^d; see GrowthReport."""
    seq = [int(v) for v in seq]
    if len(seq) < window + 3:
        raise SequenceTooShort("need at least %d values, got %d"
                               % (window + 3, len(seq)))
    fd_degree = None
    max_k = len(seq) - window - 1
    for k in range(max_k + 1):
        diffs = finite_differences(seq, k + 1)
        if all(x == 0 for x in diffs[-window:]):
            fd_degree = k
            break
    slope, resid = _loglog_slope(seq, window, start_n)
    if slope is None:
        loglog = None
    else:
        loglog = round(slope)
    agreement = fd_degree is not None and loglog is not None and fd_degree == loglog
    return GrowthReport(seq, window, fd_degree, loglog, resid, agreement)
