"""Anchored circular occurrences.

An occurrence fragment T[p..p'] (inclusive ends) is split-x anchored at
text position i when the part before i matches the pattern suffix from x
and the part from i on matches the pattern prefix up to x, within k edits
in total.  The full set of (start, end, split) triples decomposes into
triads: three equal-length intervals advancing in lockstep, produced here
by combining a backward and a forward wavefront rooted at the anchor.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .editdist import NEG, _initial_row, _wavefront_step
from .intervals import Interval, PositionSet
from .store import ContractViolation

MAX_WAVE_BUDGET = 512


@dataclass(frozen=True)
class Triad:
    starts: Interval
    ends: Interval
    splits: Interval

    def __post_init__(self) -> None:
        if not (len(self.starts) == len(self.ends) == len(self.splits)):
            raise ContractViolation("triad intervals must have equal length")

    def triples(self) -> list[tuple[int, int, int]]:
        return [
            (self.starts.lo + t, self.ends.lo + t, self.splits.lo + t)
            for t in range(len(self.starts))
        ]


@dataclass
class AnchoredSet:
    anchor: int
    triads: list[Triad] = field(default_factory=list)

    def start_intervals(self) -> list[Interval]:
        return [t.starts for t in self.triads]

    def starts(self) -> PositionSet:
        ps = PositionSet()
        for t in self.triads:
            ps.add_interval(t.starts)
        ps.sort()
        return ps

    def __bool__(self) -> bool:
        return bool(self.triads)


class AnchorContext:
    """Pattern/text pair prepared for repeated anchor queries.

    The pattern may be used as any of its rotations without copying: all
    rotated views are slices of the doubled pattern.
    """

    def __init__(self, pattern: bytes, text: bytes, rotation: int = 0) -> None:
        if not pattern:
            raise ContractViolation("pattern must be nonempty")
        self.m = len(pattern)
        self.n = len(text)
        self.rotation = rotation % self.m
        self.text = text
        self.doubled = pattern + pattern
        self.doubled_rev = self.doubled[::-1]

    def view(self) -> bytes:
        """The rotated pattern actually matched (materialized lazily)."""
        y = self.rotation
        return self.doubled[y:y + self.m]

    def view_rev(self) -> bytes:
        y = self.rotation
        return self.doubled_rev[self.m - y:2 * self.m - y]

    def view_letter(self, j: int) -> int:
        return self.doubled[self.rotation + (j % self.m)]


def _rows_to_budget(a: bytes, b: bytes, budget: int) -> list[dict[int, int]]:
    rows = [_initial_row(a, b)]
    for e in range(1, budget + 1):
        rows.append(_wavefront_step(a, b, rows[-1], e))
    return rows


def anchored(ctx: AnchorContext, i: int, k: int) -> AnchoredSet:
    """All (start, end, split) triples anchored at i, as maximal triads."""
    if not (0 <= i <= ctx.n):
        raise ContractViolation("anchor out of range")
    if k < 0 or k > MAX_WAVE_BUDGET:
        raise ContractViolation("bad edit budget")
    m, n = ctx.m, ctx.n
    back_a = ctx.text[:i][::-1]
    back_b = ctx.view_rev()
    fwd_a = ctx.text[i:]
    fwd_b = ctx.view()
    back_rows = _rows_to_budget(back_a, back_b, k)
    fwd_rows = _rows_to_budget(fwd_a, fwd_b, k)

    lines: dict[tuple[int, int], list[tuple[int, int]]] = {}
    for e1 in range(k + 1):
        e2 = k - e1
        brow = back_rows[e1]
        frow = fwd_rows[e2]
        for d1, rb in brow.items():
            if rb == NEG:
                continue
            # back side consumes a = m - x + d1 letters of text before i
            xb_hi = m + d1 - max(0, d1)
            xb_lo = m + d1 - rb
            if xb_lo > xb_hi:
                continue
            for d2, rf in frow.items():
                if rf == NEG:
                    continue
                if m + d1 + d2 - 1 < 0:
                    continue  # would give an empty occurrence
                xf_lo = max(0, -d2)
                xf_hi = rf - d2
                lo = max(xb_lo, xf_lo, 0)
                hi = min(xb_hi, xf_hi, m)
                if lo > hi:
                    continue
                lines.setdefault((d1, d2), []).append((lo, hi))

    out = AnchoredSet(anchor=i)
    for (d1, d2), runs in sorted(lines.items()):
        runs.sort()
        merged: list[list[int]] = []
        for lo, hi in runs:
            if merged and lo <= merged[-1][1] + 1:
                if hi > merged[-1][1]:
                    merged[-1][1] = hi
            else:
                merged.append([lo, hi])
        for lo, hi in merged:
            out.triads.append(
                Triad(
                    Interval(i - m - d1 + lo, i - m - d1 + hi),
                    Interval(i + d2 - 1 + lo, i + d2 - 1 + hi),
                    Interval(lo, hi),
                )
            )
    return out


def any_anchored(
    ctx: AnchorContext, span: Interval, k: int
) -> tuple[int, int] | None:
    """Some (start, anchor) pair with the start anchored in span, or None."""
    lo = max(span.lo, 0)
    hi = min(span.hi, ctx.n)
    for i in range(lo, hi + 1):
        got = anchored(ctx, i, k)
        if got.triads:
            first = min(t.starts.lo for t in got.triads)
            return first, i
    return None
