"""Closed integer intervals, interval chains, and position sets.

Intervals here are inclusive on both ends, matching how occurrence runs
are reported; fragments of stored strings stay half-open.  The conversion
between the two conventions happens only in this module's constructors.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .store import ContractViolation

EMPTY = None  # sentinel used in a few local helpers


@dataclass(frozen=True, order=True)
class Interval:
    lo: int
    hi: int  # inclusive; empty iff lo > hi

    @staticmethod
    def empty() -> "Interval":
        return Interval(0, -1)

    def __bool__(self) -> bool:
        return self.lo <= self.hi

    def __len__(self) -> int:
        return max(0, self.hi - self.lo + 1)

    def __contains__(self, x: int) -> bool:
        return self.lo <= x <= self.hi

    def shift(self, b: int) -> "Interval":
        if not self:
            return Interval.empty()
        return Interval(self.lo + b, self.hi + b)

    def minkowski_diff(self, other: "Interval") -> "Interval":
        """{a - b : a in self, b in other}."""
        if not self or not other:
            return Interval.empty()
        return Interval(self.lo - other.hi, self.hi - other.lo)

    def ext(self, t: int) -> "Interval":
        """All integers within distance t of the interval."""
        if not self:
            return Interval.empty()
        return Interval(self.lo - t, self.hi + t)

    def clip(self, lo: int, hi: int) -> "Interval":
        if not self:
            return Interval.empty()
        a, b = max(self.lo, lo), min(self.hi, hi)
        return Interval(a, b) if a <= b else Interval.empty()

    def intersect(self, other: "Interval") -> "Interval":
        if not self or not other:
            return Interval.empty()
        return self.clip(other.lo, other.hi)

    def to_list(self) -> list[int]:
        return list(range(self.lo, self.hi + 1))


def merge_intervals(intervals: list[Interval]) -> list[Interval]:
    """Sorted maximal disjoint intervals covering the same set."""
    items = sorted(iv for iv in intervals if iv)
    out: list[Interval] = []
    for iv in items:
        if out and iv.lo <= out[-1].hi + 1:
            if iv.hi > out[-1].hi:
                out[-1] = Interval(out[-1].lo, iv.hi)
        else:
            out.append(iv)
    return out


def complement_within(intervals: list[Interval], bounds: Interval) -> list[Interval]:
    """Maximal disjoint intervals of bounds not covered by the input."""
    merged = merge_intervals(intervals)
    out: list[Interval] = []
    cursor = bounds.lo
    for iv in merged:
        if iv.hi < bounds.lo or iv.lo > bounds.hi:
            continue
        if iv.lo > cursor:
            out.append(Interval(cursor, iv.lo - 1))
        cursor = max(cursor, iv.hi + 1)
        if cursor > bounds.hi:
            break
    if cursor <= bounds.hi:
        out.append(Interval(cursor, bounds.hi))
    return out


def approx_congruent_filter(iv: Interval, target: int, d: int, q: int) -> list[Interval]:
    """Maximal subintervals whose elements x satisfy x = target within d,
    cyclically modulo q (residue distance min(i, q-i) <= d)."""
    if q < 1:
        raise ContractViolation("modulus must be positive")
    if d < 0:
        raise ContractViolation("tolerance must be nonnegative")
    if not iv:
        return []
    if 2 * d + 1 >= q:
        return [iv]
    out: list[Interval] = []
    # accepted x lie in windows [target - d + c*q .. target + d + c*q]
    c_lo = (iv.lo - (target + d)) // q
    c_hi = (iv.hi - (target - d)) // q
    for c in range(c_lo, c_hi + 1):
        w = Interval(target - d + c * q, target + d + c * q).intersect(iv)
        if w:
            out.append(w)
    return out


@dataclass(frozen=True)
class Chain:
    """base ∪ (base+diff) ∪ ... ∪ (base + count*diff)."""

    base: Interval
    count: int = 0
    diff: int = 0

    def __post_init__(self) -> None:
        if self.count < 0:
            raise ContractViolation("chain count must be nonnegative")
        if self.count > 0 and self.diff <= 0:
            raise ContractViolation("repeated chain needs positive difference")

    def links(self) -> list[Interval]:
        return [self.base.shift(j * self.diff) for j in range(self.count + 1)]

    def member(self, p: int) -> bool:
        if not self.base:
            return False
        if self.count == 0:
            return p in self.base
        for j in range(self.count + 1):
            off = p - j * self.diff
            if self.base.lo <= off <= self.base.hi:
                return True
            if off < self.base.lo:
                break
        return False

    def materialize(self) -> list[int]:
        seen: set[int] = set()
        for link in self.links():
            seen.update(range(link.lo, link.hi + 1))
        return sorted(seen)

    def shift(self, b: int) -> "Chain":
        return Chain(self.base.shift(b), self.count, self.diff)

    def clip(self, bounds: Interval) -> list["Chain"]:
        """Chains covering exactly the members inside bounds."""
        if not self.base:
            return []
        full: list[Interval] = []
        partial: list[Interval] = []
        for link in self.links():
            cut = link.intersect(bounds)
            if not cut:
                continue
            (full if len(cut) == len(link) else partial).append(cut)
        out = [Chain(iv, 0, 0) for iv in partial]
        # compress maximal runs of untouched links back into chains
        i = 0
        while i < len(full):
            j = i
            while (
                j + 1 < len(full)
                and full[j + 1].lo - full[j].lo == self.diff
                and self.diff > 0
            ):
                j += 1
            out.append(Chain(full[i], j - i, self.diff if j > i else 0))
            i = j + 1
        return out


def make_chain(base: Interval, count: int, diff: int) -> Chain:
    if count == 0:
        return Chain(base, 0, 0)
    return Chain(base, count, diff)


@dataclass
class PositionSet:
    """Union of interval chains; duplicates allowed, sorted by base start."""

    chains: list[Chain] = field(default_factory=list)

    def add(self, chain: Chain) -> None:
        if chain.base:
            self.chains.append(chain)

    def add_interval(self, iv: Interval) -> None:
        if iv:
            self.chains.append(Chain(iv, 0, 0))

    def extend(self, other: "PositionSet") -> None:
        self.chains.extend(other.chains)

    def sort(self) -> None:
        self.chains.sort(key=lambda c: (c.base.lo, c.base.hi, c.diff, c.count))

    def shift(self, b: int) -> "PositionSet":
        return PositionSet([c.shift(b) for c in self.chains])

    def clip(self, bounds: Interval) -> "PositionSet":
        out = PositionSet()
        for c in self.chains:
            out.chains.extend(c.clip(bounds))
        return out

    def member(self, p: int) -> bool:
        return any(c.member(p) for c in self.chains)

    def materialize(self) -> list[int]:
        seen: set[int] = set()
        for c in self.chains:
            for link in c.links():
                seen.update(range(link.lo, link.hi + 1))
        return sorted(seen)

    def __bool__(self) -> bool:
        return any(c.base for c in self.chains)

    def min(self) -> int | None:
        starts = [c.base.lo for c in self.chains if c.base]
        return min(starts) if starts else None

    def to_json(self) -> list[dict]:
        self.sort()
        return [
            {"lo": c.base.lo, "hi": c.base.hi, "count": c.count, "diff": c.diff}
            for c in self.chains
        ]

    @staticmethod
    def from_json(items: list[dict]) -> "PositionSet":
        ps = PositionSet()
        for it in items:
            ps.add(make_chain(Interval(it["lo"], it["hi"]), it["count"], it["diff"]))
        ps.sort()
        return ps

    @staticmethod
    def from_positions(positions: list[int]) -> "PositionSet":
        ps = PositionSet()
        if not positions:
            return ps
        xs = sorted(set(positions))
        start = prev = xs[0]
        for x in xs[1:]:
            if x == prev + 1:
                prev = x
                continue
            ps.add_interval(Interval(start, prev))
            start = prev = x
        ps.add_interval(Interval(start, prev))
        return ps
