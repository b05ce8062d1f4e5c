"""Registered byte strings, fragments, and the primitive string queries.

Everything above this module manipulates fragments of registered strings:
substrings are never copied around except at explicit `extract` calls.
The longest-common-extension queries run on chunked memcmp (doubling probe
plus binary search), which is effectively constant-time on the sizes this
package targets while staying trivially correct.
"""

from __future__ import annotations

from dataclasses import dataclass


class ContractViolation(Exception):
    """A caller broke a documented precondition."""


class DiagnosticError(Exception):
    """An internal invariant could not be certified; never silent."""


def lce_bytes(a: bytes, i: int, b: bytes, j: int, limit: int | None = None) -> int:
    """Length of the longest common prefix of a[i:] and b[j:]."""
    n = min(len(a) - i, len(b) - j)
    if limit is not None and limit < n:
        n = limit
    if n <= 0 or a[i] != b[j]:
        return 0
    mva = memoryview(a)
    mvb = memoryview(b)
    lo = 1
    step = 32
    while lo < n:
        hi = min(lo + step, n)
        if mva[i + lo:i + hi] == mvb[j + lo:j + hi]:
            lo = hi
            step <<= 1
        else:
            # first difference is inside (lo, hi); binary search for it
            left, right = lo, hi
            while left < right:
                mid = (left + right + 1) // 2
                if mva[i + lo:i + mid] == mvb[j + lo:j + mid]:
                    left = mid
                else:
                    right = mid - 1
            return left
    return n


def lce_bytes_back(a: bytes, i: int, b: bytes, j: int) -> int:
    """Length of the longest common suffix of a[:i] and b[:j]."""
    n = min(i, j)
    k = 0
    mva = memoryview(a)
    mvb = memoryview(b)
    step = 32
    while k < n:
        hi = min(k + step, n)
        if mva[i - hi:i - k] == mvb[j - hi:j - k]:
            k = hi
            step <<= 1
        else:
            while k < hi:
                if a[i - k - 1] != b[j - k - 1]:
                    return k
                k += 1
            return k
    return n


def find_all(needle: bytes, hay: bytes) -> list[int]:
    """All start offsets of exact occurrences of needle in hay."""
    if not needle or len(needle) > len(hay):
        return []
    out = []
    pos = hay.find(needle)
    while pos != -1:
        out.append(pos)
        pos = hay.find(needle, pos + 1)
    return out


@dataclass(frozen=True)
class ArithProg:
    """first, first+step, ..., first+(count-1)*step; count == 0 is empty."""

    first: int
    step: int
    count: int

    def __post_init__(self) -> None:
        if self.count < 0 or self.step < 0:
            raise ContractViolation("negative step or count")
        if self.count > 1 and self.step == 0:
            raise ContractViolation("repeated progression needs positive step")

    @staticmethod
    def empty() -> "ArithProg":
        return ArithProg(0, 0, 0)

    @staticmethod
    def from_sorted(values: list[int]) -> "ArithProg":
        if not values:
            return ArithProg.empty()
        if len(values) == 1:
            return ArithProg(values[0], 0, 1)
        step = values[1] - values[0]
        for prev, cur in zip(values, values[1:]):
            if cur - prev != step:
                raise DiagnosticError(
                    "occurrence offsets do not form a single progression: %r" % (values,)
                )
        return ArithProg(values[0], step, len(values))

    def to_list(self) -> list[int]:
        return [self.first + t * self.step for t in range(self.count)]

    def __len__(self) -> int:
        return self.count

    def __bool__(self) -> bool:
        return self.count > 0

    @property
    def last(self) -> int:
        if not self.count:
            raise ContractViolation("empty progression has no last element")
        return self.first + (self.count - 1) * self.step


@dataclass(frozen=True)
class Frag:
    """Half-open slice [lo, hi) of a registered string."""

    sid: int
    lo: int
    hi: int

    def __len__(self) -> int:
        return self.hi - self.lo

    def sub(self, lo: int, hi: int) -> "Frag":
        # offsets relative to this fragment
        return Frag(self.sid, self.lo + lo, self.lo + hi)


class StringStore:
    """Immutable collection of byte strings addressed through fragments."""

    def __init__(self) -> None:
        self._strings: list[bytes] = []

    def add(self, s: bytes) -> Frag:
        if not isinstance(s, (bytes, bytearray)):
            raise ContractViolation("only byte strings can be registered")
        self._strings.append(bytes(s))
        sid = len(self._strings) - 1
        return Frag(sid, 0, len(s))

    def raw(self, sid: int) -> bytes:
        return self._strings[sid]

    def _check(self, f: Frag) -> bytes:
        s = self._strings[f.sid]
        if not (0 <= f.lo <= f.hi <= len(s)):
            raise ContractViolation("fragment out of bounds: %r" % (f,))
        return s

    # primitive queries ------------------------------------------------

    def length(self, f: Frag) -> int:
        self._check(f)
        return f.hi - f.lo

    def access(self, f: Frag, i: int) -> int:
        s = self._check(f)
        if not (0 <= i < len(f)):
            raise ContractViolation("access index %d out of range" % i)
        return s[f.lo + i]

    def extract(self, f: Frag) -> bytes:
        s = self._check(f)
        return s[f.lo:f.hi]

    def lce(self, a: Frag, b: Frag, direction: str = "forward") -> int:
        sa = self._check(a)
        sb = self._check(b)
        if direction == "forward":
            return lce_bytes(sa, a.lo, sb, b.lo, limit=min(len(a), len(b)))
        if direction == "backward":
            n = min(len(a), len(b))
            k = lce_bytes_back(sa, a.hi, sb, b.hi)
            return min(k, n)
        raise ContractViolation("direction must be forward or backward")

    def ipm(self, s: Frag, t: Frag) -> ArithProg:
        """Exact occurrences of s in t, |t| <= 2|s|, as one progression."""
        if len(t) > 2 * len(s):
            raise ContractViolation("ipm requires |t| <= 2|s|")
        if len(s) == 0:
            raise ContractViolation("ipm needs a nonempty needle")
        needle = self.extract(s)
        hay = self.extract(t)
        return ArithProg.from_sorted(find_all(needle, hay))

    def occurrences(self, s: Frag, t: Frag) -> list[int]:
        """Exact occurrences without the length precondition of ipm."""
        return find_all(self.extract(s), self.extract(t))


def is_primitive(s: bytes) -> bool:
    """True when s is not a proper integer power of a shorter string."""
    if not s:
        return False
    return (s + s).find(s, 1) == len(s)


def primitive_root(s: bytes) -> bytes:
    """Shortest w with s == w^(len(s)/len(w))."""
    if not s:
        return s
    p = (s + s).find(s, 1)
    if p < len(s) and len(s) % p == 0:
        return s[:p]
    return s


def rotate(s: bytes, j: int) -> bytes:
    """Cyclic rotation moving the first j letters of s to its end."""
    if not s:
        return s
    j %= len(s)
    return s[j:] + s[:j]
