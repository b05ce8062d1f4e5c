"""Edit-distance kernels built on diagonal wavefronts.

All kernels work on furthest-reach tables: reach[e][d] is the longest
prefix length x of the left string such that the prefix pair
(left[:x], right[:x-d]) aligns within e edits.  Values along a diagonal
are monotone, so a reach table describes the full set of prefix pairs at
or under a budget, not just the extreme ones.  Matches are skipped with
chunked-memcmp common-extension queries instead of cell-by-cell scans.

Full-matrix dynamic programming lives only in the oracle module, which
serves as the independent correctness reference for everything here.
"""

from __future__ import annotations

from dataclasses import dataclass

from .store import ContractViolation, lce_bytes, rotate

NEG = -(1 << 60)


def period_buffer(q: bytes, rotation: int, length: int) -> bytes:
    """The first `length` letters of the infinite run of rot^rotation(q)."""
    if not q:
        raise ContractViolation("period must be nonempty")
    base = rotate(q, rotation)
    reps = length // len(q) + 2
    return (base * reps)[:max(length, 0)]


def _wavefront_step(
    a: bytes,
    b: bytes,
    prev: dict[int, int],
    e: int,
) -> dict[int, int]:
    """Extend reaches from budget e-1 to budget e."""
    la, lb = len(a), len(b)
    cur: dict[int, int] = {}
    for d in range(-e, e + 1):
        best = NEG
        r = prev.get(d, NEG)
        if r != NEG and r + 1 > best:
            best = r + 1  # substitution
        r = prev.get(d - 1, NEG)
        if r != NEG and r + 1 > best:
            best = r + 1  # extra letter on the left side
        r = prev.get(d + 1, NEG)
        if r != NEG and r > best:
            best = r  # extra letter on the right side
        if best == NEG:
            continue
        lo = d if d > 0 else 0
        hi = min(la, lb + d)
        if lo > hi:
            continue
        if best < lo:
            best = lo
        elif best > hi:
            best = hi
        x = best + lce_bytes(a, best, b, best - d)
        if x > hi:
            x = hi
        cur[d] = x
    return cur


def _wavefront_step_traced(
    a: bytes,
    b: bytes,
    prev: dict[int, int],
    e: int,
    parents: dict[tuple[int, int], tuple[str, int]],
) -> dict[int, int]:
    la, lb = len(a), len(b)
    cur: dict[int, int] = {}
    for d in range(-e, e + 1):
        best = NEG
        kind = ""
        pd = 0
        r = prev.get(d, NEG)
        if r != NEG and r + 1 > best:
            best, kind, pd = r + 1, "sub", d
        r = prev.get(d - 1, NEG)
        if r != NEG and r + 1 > best:
            best, kind, pd = r + 1, "del", d - 1
        r = prev.get(d + 1, NEG)
        if r != NEG and r > best:
            best, kind, pd = r, "ins", d + 1
        if best == NEG:
            continue
        lo = d if d > 0 else 0
        hi = min(la, lb + d)
        if lo > hi:
            continue
        if best < lo:
            best = lo
        elif best > hi:
            best = hi
        x = best + lce_bytes(a, best, b, best - d)
        if x > hi:
            x = hi
        cur[d] = x
        parents[(e, d)] = (kind, pd)
    return cur


def _initial_row(a: bytes, b: bytes) -> dict[int, int]:
    x = lce_bytes(a, 0, b, 0)
    return {0: min(x, len(a), len(b))}


@dataclass
class TraceOp:
    kind: str  # "sub" | "del" (left letter dropped) | "ins" (right letter added)
    i: int  # position in the left string before the op
    j: int  # position in the right string before the op


def _backtrack(
    reaches: list[dict[int, int]],
    parents: dict[tuple[int, int], tuple[str, int]],
    e: int,
    d: int,
) -> list[TraceOp]:
    ops: list[TraceOp] = []
    while e > 0:
        kind, pd = parents[(e, d)]
        r = reaches[e - 1][pd]
        if kind == "sub":
            ops.append(TraceOp("sub", r, r - pd))
        elif kind == "del":
            ops.append(TraceOp("del", r, r - pd))
        else:
            ops.append(TraceOp("ins", r, r - pd))
        e, d = e - 1, pd
    ops.reverse()
    return ops


def edit_distance(
    a: bytes,
    b: bytes,
    budget: int,
    want_trace: bool = False,
) -> tuple[int, list[TraceOp] | None] | None:
    """Exact edit distance if it is at most budget, else None.

    The trace, when requested, lists only the non-match operations; all
    other positions align as matches.
    """
    if budget < 0:
        raise ContractViolation("budget must be nonnegative")
    if abs(len(a) - len(b)) > budget:
        return None
    dfin = len(a) - len(b)
    parents: dict[tuple[int, int], tuple[str, int]] = {}
    reaches = [_initial_row(a, b)]
    if reaches[0].get(dfin, NEG) >= len(a):
        return (0, [] if want_trace else None)
    for e in range(1, budget + 1):
        if want_trace:
            row = _wavefront_step_traced(a, b, reaches[-1], e, parents)
        else:
            row = _wavefront_step(a, b, reaches[-1], e)
        reaches.append(row)
        if row.get(dfin, NEG) >= len(a):
            trace = _backtrack(reaches, parents, e, dfin) if want_trace else None
            return (e, trace)
    return None


def period_prefix_fit(
    s: bytes,
    q: bytes,
    budget: int,
    rotation: int = 0,
    want_trace: bool = False,
) -> tuple[int, int, list[TraceOp] | None] | None:
    """Best fit of s against prefixes of the infinite run of rot^rotation(q).

    Returns (cost, ref_len, trace) minimizing the edit distance over all
    run prefixes, or None when every prefix costs more than budget.  Ties
    between witness prefix lengths prefer the one closest to len(s).
    """
    if budget < 0:
        raise ContractViolation("budget must be nonnegative")
    ref = period_buffer(q, rotation, len(s) + budget + len(q))
    parents: dict[tuple[int, int], tuple[str, int]] = {}
    reaches = [_initial_row(s, ref)]

    def hit(row: dict[int, int], e: int):
        best_d = None
        for d, x in row.items():
            if x >= len(s):
                if best_d is None or (abs(d), -d) < (abs(best_d), -best_d):
                    best_d = d
        if best_d is None:
            return None
        trace = _backtrack(reaches, parents, e, best_d) if want_trace else None
        return (e, len(s) - best_d, trace)

    got = hit(reaches[0], 0)
    if got:
        return got
    for e in range(1, budget + 1):
        if want_trace:
            row = _wavefront_step_traced(s, ref, reaches[-1], e, parents)
        else:
            row = _wavefront_step(s, ref, reaches[-1], e)
        reaches.append(row)
        got = hit(row, e)
        if got:
            return got
    return None


def period_suffix_fit(
    s: bytes,
    q: bytes,
    budget: int,
    end_phase: int = 0,
) -> tuple[int, int] | None:
    """Best fit of s against suffixes of period runs ending at end_phase.

    Returns (cost, ref_len); ref_len is the matched suffix length of the
    run, so the suffix covers phases [end_phase - ref_len, end_phase).
    """
    qr = q[::-1]
    rot = (len(q) - (end_phase % len(q))) % len(q)
    got = period_prefix_fit(s[::-1], qr, budget, rotation=rot)
    if got is None:
        return None
    cost, ref_len, _ = got
    return (cost, ref_len)


def period_run_fit(
    s: bytes,
    q: bytes,
    budget: int,
) -> tuple[int, int, int] | None:
    """Best fit of s against any substring of a period run.

    Returns (cost, rotation, ref_len) over all q rotations; ties prefer
    the smallest rotation.  None when every rotation exceeds budget.
    """
    best: tuple[int, int, int] | None = None
    cap = budget
    for rot in range(len(q)):
        got = period_prefix_fit(s, q, cap, rotation=rot)
        if got is None:
            continue
        cost, ref_len, _ = got
        if best is None or cost < best[0]:
            best = (cost, rot, ref_len)
            cap = cost  # later rotations only need to beat this
    return best


class PeriodicFitGenerator:
    """Incremental longest-prefix (or suffix) fit against a period run.

    The t-th call to next() returns (len_s, len_ref): the longest prefix
    of s within t edits of some run prefix, together with the matched run
    length.  Suffix direction operates on reversals and reports suffix
    lengths; the run then ends at the given phase.
    """

    def __init__(
        self,
        s: bytes,
        q: bytes,
        rotation: int = 0,
        direction: str = "prefix",
    ) -> None:
        if direction == "prefix":
            self._s = s
            self._ref = period_buffer(q, rotation, len(s) + len(q))
        elif direction == "suffix":
            qr = q[::-1]
            rot = (len(q) - (rotation % len(q))) % len(q)
            self._s = s[::-1]
            self._ref = period_buffer(qr, rot, len(s) + len(q))
        else:
            raise ContractViolation("direction must be prefix or suffix")
        self._q = len(q)
        self._rows: list[dict[int, int]] = []
        self._t = -1

    def _grow_ref(self, need: int) -> None:
        if need > len(self._ref):
            extra = period_buffer(
                self._s[:0] + self._ref[: self._q], 0, need + self._q
            )
            # rebuild from the same leading rotation
            self._ref = extra

    def next(self) -> tuple[int, int]:
        self._t += 1
        if self._t == 0:
            self._rows.append(_initial_row(self._s, self._ref))
        else:
            self._grow_ref(len(self._s) + self._t + self._q)
            self._rows.append(
                _wavefront_step(self._s, self._ref, self._rows[-1], self._t)
            )
        row = self._rows[-1]
        best_x = 0
        best_d = 0
        for d, x in row.items():
            if x > best_x or (x == best_x and (abs(d), -d) < (abs(best_d), -best_d)):
                best_x, best_d = x, d
        return best_x, best_x - best_d

    def reach_row(self) -> dict[int, int]:
        return dict(self._rows[-1])


def budget_reach(s: bytes, q: bytes, budget: int, rotation: int = 0) -> int:
    """Longest prefix of s within `budget` edits of some run prefix."""
    ref = period_buffer(q, rotation, len(s) + budget + len(q))
    row = _initial_row(s, ref)
    best = max(row.values(), default=0)
    for e in range(1, budget + 1):
        if best >= len(s):
            break
        row = _wavefront_step(s, ref, row, e)
        best = max([best] + list(row.values()))
    return min(best, len(s))
