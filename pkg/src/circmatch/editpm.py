"""Non-circular k-edit pattern matching and periodicity analysis.

Occurrence kernels run a banded-free semi-global recurrence vectorized one
pattern row at a time; the structural analysis decides, per examined text
region, whether its occurrence set is sparse enough to anchor directly or
whether the region is almost periodic, in which case a certified period
and a trimmed region are returned.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import params
from .editdist import period_prefix_fit, period_run_fit
from .store import is_primitive

_INT = np.int64


def _arr(s: bytes) -> np.ndarray:
    return np.frombuffer(s, dtype=np.uint8)


def ends_costs(pattern: bytes, text: bytes) -> np.ndarray:
    """costs[j] = min cost of matching pattern against any window ending at j."""
    n = len(text)
    txt = _arr(text)
    D = np.zeros(n + 1, dtype=_INT)
    idx = np.arange(1, n + 1)
    for i, ch in enumerate(pattern, start=1):
        neq = (txt != ch).astype(_INT)
        base = np.minimum(D[:-1] + neq, D[1:] + 1)
        seed = np.concatenate(([i], base - idx))
        swept = np.minimum.accumulate(seed)
        D = np.concatenate(([i], np.minimum(base, swept[1:] + idx)))
    return D


def starts_costs(pattern: bytes, text: bytes) -> np.ndarray:
    """costs[p] = min cost of matching pattern against any window starting at p."""
    return ends_costs(pattern[::-1], text[::-1])[::-1]


def occ_starts(pattern: bytes, text: bytes, k: int) -> list[int]:
    """Start positions of k-edit occurrences (nonempty windows).

    Callers keep len(pattern) > k, so the empty window never fakes a hit.
    """
    if not pattern or not text:
        return []
    c = starts_costs(pattern, text)
    return [p for p in range(len(text)) if c[p] <= k]


def occ_ends(pattern: bytes, text: bytes, k: int) -> list[int]:
    """Exclusive end positions of k-edit occurrences."""
    if not pattern or not text:
        return []
    c = ends_costs(pattern, text)
    return [j for j in range(1, len(text) + 1) if c[j] <= k]


@dataclass
class PeriodicAnalysis:
    branch: str  # "sparse" | "periodic" | "fallback"
    occ: list[int]
    period: bytes | None = None  # primitive, rotated so prefix fit = run fit
    trimmed_lo: int = 0  # trimmed region [lo, hi) in the analyzed text
    trimmed_hi: int = 0
    pattern_fit_cost: int = 0
    pattern_fit_len: int = 0  # witness run-prefix length for the pattern
    trimmed_fit_cost: int = 0


def _certify_period(
    pattern: bytes, text: bytes, k: int, occ: list[int]
) -> PeriodicAnalysis | None:
    """Try to certify that pattern and the occurrence region are almost
    periodic with a common short primitive period."""
    m = len(pattern)
    qmax = params.max_period_len(m, k)
    pat_budget = params.PATTERN_PERIOD_BUDGET * k - 1
    if qmax < 1 or pat_budget < 0:
        return None
    chosen: tuple[bytes, int, int] | None = None
    for qlen in range(1, qmax + 1):
        # candidate windows dodge up to 2k-1 edits scattered through pattern
        for w in range(2 * k + 1):
            lo = w * qlen
            if lo + qlen > m:
                break
            cand = pattern[lo:lo + qlen]
            if not is_primitive(cand):
                continue
            run = period_run_fit(pattern, cand, pat_budget)
            if run is None:
                continue
            cost, rot, ref_len = run
            from .store import rotate

            period = rotate(cand, rot)
            fit = period_prefix_fit(pattern, period, cost)
            assert fit is not None and fit[0] == cost
            chosen = (period, cost, fit[1])
            break
        if chosen:
            break
    if not chosen:
        return None
    period, cost, fit_len = chosen

    # trim the text to the exact span of the occurrence windows
    e_costs = ends_costs(pattern, text)
    ends = [j for j in range(1, len(text) + 1) if e_costs[j] <= k]
    if not occ or not ends:
        return None
    lo, hi = min(occ), max(ends)
    trimmed = text[lo:hi]
    t_fit = period_prefix_fit(trimmed, period, params.TRIM_BUDGET * k)
    if t_fit is None:
        return None
    occ_in_trim = [p - lo for p in occ]
    if occ_starts(pattern, trimmed, k) != occ_in_trim:
        return None
    q = len(period)
    d = params.TRIM_BUDGET * k
    for p in occ_in_trim:
        res = p % q
        if min(res, q - res) > d:
            return None
    return PeriodicAnalysis(
        branch="periodic",
        occ=occ,
        period=period,
        trimmed_lo=lo,
        trimmed_hi=hi,
        pattern_fit_cost=cost,
        pattern_fit_len=fit_len,
        trimmed_fit_cost=t_fit[0],
    )


def analyze_periodic(pattern: bytes, text: bytes, k: int) -> PeriodicAnalysis:
    """Classify a text region as sparse, periodic, or fallback.

    Sparse is always a sound answer; the periodic branch is taken only
    with a full certificate (primitive period within the length cap,
    pattern run-fit below 2k, trimmed-region fit below 24k, occurrence
    congruence).  Certification is attempted from a practical density
    trigger onward: the nominal sparse-count threshold is far beyond any
    size this package runs at, and the certificate keeps early attempts
    safe.
    """
    occ = occ_starts(pattern, text, k)
    if k <= 0:
        return PeriodicAnalysis(branch="sparse", occ=occ)
    m = max(len(pattern), 1)
    hard = (len(occ) // k) > params.SPARSE_FACTOR * k * len(text) / m
    trigger = params.SPARSE_TRIGGER_K2 * k * k + params.SPARSE_TRIGGER_BASE
    if not hard and len(occ) <= trigger:
        return PeriodicAnalysis(branch="sparse", occ=occ)
    cert = _certify_period(pattern, text, k, occ)
    if cert is not None:
        return cert
    return PeriodicAnalysis(branch="fallback" if hard else "sparse", occ=occ)
