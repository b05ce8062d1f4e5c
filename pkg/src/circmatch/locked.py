"""Locked-fragment decomposition of an almost-periodic string.

The string is written as L1 Q^a1 L2 ... Lt: alternating locked fragments
and exact runs of the period Q, with all the edit cost concentrated in the
locked fragments.  The construction projects one optimal alignment of the
string against a period run onto the run's period copies, keeps maximal
runs of cleanly matched copies as the exact powers, and locks everything
else; short boundary fragments are then widened by one period copy.

Every invariant is verified on the result.  If the cost split cannot be
certified, adjacent fragments are merged until it can (each merge shrinks
the fragment count, so this terminates); a final failure raises instead
of returning an uncertified decomposition.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import params
from .editdist import period_prefix_fit, period_run_fit
from .intervals import Interval
from .store import ContractViolation, DiagnosticError, is_primitive


@dataclass
class Sample:
    j1: int
    j2: int  # inclusive; the string slice [j1 .. j2] equals Q^(k+1)
    run: Interval  # enclosing clean run equal to Q^(3k+9)


@dataclass
class LockedDecomposition:
    source: bytes
    period: bytes
    k: int
    fragments: list[Interval]  # inclusive S-intervals, left to right
    exponents: list[int]  # gap i sits between fragments i and i+1
    costs: list[int]  # per-fragment run-fit cost
    total_cost: int
    merges: int = 0
    sample: Sample | None = None

    @property
    def q(self) -> int:
        return len(self.period)

    def locked_intervals(self) -> list[Interval]:
        ivs = list(self.fragments)
        if self.sample is not None:
            ivs.append(Interval(self.sample.j1, self.sample.j2))
        return [iv for iv in ivs if iv]

    def gap_intervals(self) -> list[Interval]:
        out = []
        for i in range(len(self.fragments) - 1):
            out.append(Interval(self.fragments[i].hi + 1, self.fragments[i + 1].lo - 1))
        return out

    def total_locked_len(self) -> int:
        return sum(len(f) for f in self.fragments)


def _alignment_copy_map(
    s: bytes, ref_len: int, q: int, rotation: int, trace
) -> tuple[list[bool], list[int], int]:
    """Per reference period copy: cleanly matched flag and image start in s."""
    matched = [-1] * ref_len
    si = rj = 0
    for op in trace:
        run = op.j - rj
        for t in range(rj, op.j):
            matched[t] = si + (t - rj)
        si += run
        rj = op.j
        if op.kind == "sub":
            si += 1
            rj += 1
        elif op.kind == "del":
            si += 1
        else:  # ins: reference letter unmatched
            rj += 1
    for t in range(rj, ref_len):
        matched[t] = si + (t - rj)

    first = (-rotation) % q
    ncopies = 0
    if ref_len >= first + q:
        ncopies = (ref_len - first) // q
    clean = [False] * ncopies
    image = [-1] * ncopies
    for c in range(ncopies):
        t0 = first + c * q
        base = matched[t0]
        if base < 0:
            continue
        ok = True
        for t in range(t0, t0 + q):
            if matched[t] != base + (t - t0):
                ok = False
                break
        if ok:
            clean[c] = True
            image[c] = base
    return clean, image, first


def _raw_fragments(
    n: int, q: int, clean: list[bool], image: list[int]
) -> tuple[list[Interval], list[int]]:
    """Locked fragments and run exponents from the clean-copy map."""
    runs: list[tuple[int, int]] = []  # (image start, copies)
    c = 0
    while c < len(clean):
        if not clean[c]:
            c += 1
            continue
        start = image[c]
        count = 1
        while (
            c + 1 < len(clean)
            and clean[c + 1]
            and image[c + 1] == image[c] + q
        ):
            c += 1
            count += 1
        runs.append((start, count))
        c += 1
    frags: list[Interval] = []
    exps: list[int] = []
    cursor = 0
    for start, count in runs:
        frags.append(Interval(cursor, start - 1))  # may be empty
        exps.append(count)
        cursor = start + count * q
    frags.append(Interval(cursor, n - 1))
    return frags, exps


def _extend_boundaries(frags: list[Interval], exps: list[int], q: int) -> None:
    """Widen short boundary fragments by one period copy each."""
    if len(frags) >= 2 and len(frags[0]) < q:
        frags[0] = Interval(frags[0].lo, frags[0].hi + q)
        exps[0] -= 1
        if exps[0] == 0:
            frags[0] = Interval(frags[0].lo, frags[1].hi)
            del frags[1]
            del exps[0]
    if len(frags) >= 2 and len(frags[-1]) < q:
        frags[-1] = Interval(frags[-1].lo - q, frags[-1].hi)
        exps[-1] -= 1
        if exps[-1] == 0:
            frags[-2] = Interval(frags[-2].lo, frags[-1].hi)
            del frags[-1]
            del exps[-1]


def _widen_all(
    frags: list[Interval], exps: list[int], q: int
) -> tuple[list[Interval], list[int]]:
    """Absorb one exact copy from each end of every run into its neighbours.

    A fragment too short to pin down the period phase can realign for free
    and under-report its cost; pulling in a flanking exact copy on each
    side makes the phase stick.  Runs shrinking to nothing merge their
    neighbours, so the total run count strictly decreases.
    """
    bounds = [[f.lo, f.hi] for f in frags]
    left = list(exps)
    for i in range(len(left)):
        if left[i] >= 1:
            bounds[i][1] += q
            left[i] -= 1
        if left[i] >= 1:
            bounds[i + 1][0] -= q
            left[i] -= 1
    out_f = [bounds[0]]
    out_e: list[int] = []
    for i in range(len(left)):
        if left[i] == 0:
            out_f[-1][1] = bounds[i + 1][1]
        else:
            out_e.append(left[i])
            out_f.append(bounds[i + 1])
    return [Interval(a, b) for a, b in out_f], out_e


def locked_decomposition(
    s: bytes,
    period: bytes,
    k: int,
    strict: bool = True,
) -> LockedDecomposition:
    """Decompose s into locked fragments separated by exact period runs.

    strict=False relaxes only the minimum-length precondition, for small
    constructed instances; all result invariants are still verified.
    """
    q = len(period)
    if q == 0 or not is_primitive(period):
        raise ContractViolation("period must be primitive and nonempty")
    if k < 0:
        raise ContractViolation("negative edit budget")
    budget = params.APPROX_PERIOD_BUDGET * max(k, 1)
    if strict and len(s) < 225 * k * q:
        raise ContractViolation("string too short for a certified decomposition")
    run = period_run_fit(s, period, budget)
    if run is None:
        raise ContractViolation("string is not almost periodic within budget")
    total_cost, rotation, _ = run
    fit = period_prefix_fit(s, period, total_cost, rotation=rotation, want_trace=True)
    assert fit is not None and fit[0] == total_cost
    _, ref_len, trace = fit

    clean, image, _ = _alignment_copy_map(s, ref_len, q, rotation, trace)
    frags, exps = _raw_fragments(len(s), q, clean, image)
    _extend_boundaries(frags, exps, q)

    merges = 0
    while True:
        costs = []
        for f in frags:
            if not f:
                costs.append(0)
                continue
            got = period_run_fit(s[f.lo:f.hi + 1], period, total_cost)
            costs.append(got[0] if got is not None else total_cost + 1)
        internal_ok = all(
            costs[i] > 0 for i in range(1, len(frags) - 1)
        )
        if sum(costs) == total_cost and internal_ok:
            break
        if len(frags) == 1:
            raise DiagnosticError("cost split unverifiable even on one fragment")
        frags, exps = _widen_all(frags, exps, q)
        merges += 1

    dec = LockedDecomposition(
        source=s,
        period=period,
        k=k,
        fragments=frags,
        exponents=exps,
        costs=costs,
        total_cost=total_cost,
        merges=merges,
    )
    _verify(dec, strict=strict)
    return dec


def _verify(dec: LockedDecomposition, strict: bool) -> None:
    s, q = dec.source, dec.q
    frags, exps = dec.fragments, dec.exponents
    if len(frags) != len(exps) + 1:
        raise DiagnosticError("fragment/run structure out of step")
    cursor = 0
    for i, f in enumerate(frags):
        if f and f.lo != cursor:
            raise DiagnosticError("fragments do not tile the string")
        if not f and f.lo - 1 != f.hi:
            raise DiagnosticError("non-canonical empty fragment")
        cursor = f.hi + 1
        if i < len(exps):
            a = exps[i]
            if a <= 0:
                raise DiagnosticError("empty run between fragments")
            gap = s[cursor:cursor + a * q]
            if gap != dec.period * a:
                raise DiagnosticError("run is not an exact period power")
            cursor += a * q
    if cursor != len(s):
        raise DiagnosticError("decomposition does not cover the string")
    k = max(dec.k, 1)
    if dec.total_locked_len() > params.locked_total_cap(k, q) and strict:
        raise DiagnosticError("locked fragments exceed the total length cap")
    if len(frags) > params.locked_count_cap(k):
        raise DiagnosticError("too many locked fragments")
    if len(frags) >= 2:
        if len(frags[0]) < min(q, len(s)) or len(frags[-1]) < min(q, len(s)):
            raise DiagnosticError("boundary fragment shorter than the period")


def choose_sample(dec: LockedDecomposition, window: Interval, k: int) -> Sample:
    """Pick the sample inside the window: the middle k+1 period copies of
    the leftmost clean run of 3k+9 copies disjoint from locked fragments."""
    q = dec.q
    need = (3 * k + 9) * q
    for i, f in enumerate(dec.fragments[:-1]):
        gap_lo = f.hi + 1
        gap_hi = dec.fragments[i + 1].lo - 1
        lo = max(gap_lo, window.lo)
        hi = min(gap_hi, window.hi)
        if hi - lo + 1 < need:
            continue
        # snap to a period-copy boundary of this run
        start = lo + ((gap_lo - lo) % q + q) % q
        if start + need - 1 > hi:
            continue
        j1 = start + (k + 4) * q
        j2 = j1 + (k + 1) * q - 1
        return Sample(j1=j1, j2=j2, run=Interval(start, start + need - 1))
    raise DiagnosticError("no clean period run long enough for a sample")
