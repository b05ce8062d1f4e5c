"""Brute-force reference implementations.

Everything here recomputes results with plain full-matrix dynamic
programming (vectorized with numpy row by row, but structurally the
textbook recurrence).  No code is shared with the wavefront kernels:
these functions are the ground truth the fast path is tested against.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .store import rotate


def _as_array(s: bytes) -> np.ndarray:
    return np.frombuffer(s, dtype=np.uint8)


def full_edit_distance(a: bytes, b: bytes) -> int:
    """Textbook O(|a||b|) edit distance."""
    n = len(b)
    prev = np.arange(n + 1, dtype=np.int64)
    bb = _as_array(b)
    for i, ca in enumerate(a, start=1):
        neq = (bb != ca).astype(np.int64)
        cur = np.empty(n + 1, dtype=np.int64)
        cur[0] = i
        diag = prev[:-1] + neq
        up = prev[1:] + 1
        base = np.minimum(diag, up)
        # resolve the horizontal dependency with a prefix-min sweep
        idx = np.arange(1, n + 1)
        seed = np.concatenate(([cur[0] - 0], base - idx))
        swept = np.minimum.accumulate(seed)
        cur[1:] = np.minimum(base, swept[1:] + idx)
        prev = cur
    return int(prev[n])


def full_edit_matrix(a: bytes, b: bytes) -> np.ndarray:
    """The whole (|a|+1) x (|b|+1) distance matrix."""
    n = len(b)
    bb = _as_array(b)
    D = np.empty((len(a) + 1, n + 1), dtype=np.int64)
    D[0] = np.arange(n + 1)
    for i, ca in enumerate(a, start=1):
        neq = (bb != ca).astype(np.int64)
        base = np.minimum(D[i - 1, :-1] + neq, D[i - 1, 1:] + 1)
        idx = np.arange(1, n + 1)
        seed = np.concatenate(([i], base - idx))
        swept = np.minimum.accumulate(seed)
        D[i, 0] = i
        D[i, 1:] = np.minimum(base, swept[1:] + idx)
    return D


def alignment_trace(a: bytes, b: bytes) -> list[tuple[str, int, int]]:
    """One optimal alignment as (op, i, j) edit steps; matches omitted."""
    D = full_edit_matrix(a, b)
    i, j = len(a), len(b)
    ops: list[tuple[str, int, int]] = []
    while i > 0 or j > 0:
        if i > 0 and j > 0 and D[i][j] == D[i - 1][j - 1] and a[i - 1] == b[j - 1]:
            i, j = i - 1, j - 1
        elif i > 0 and j > 0 and D[i][j] == D[i - 1][j - 1] + 1:
            ops.append(("sub", i - 1, j - 1))
            i, j = i - 1, j - 1
        elif i > 0 and D[i][j] == D[i - 1][j] + 1:
            ops.append(("del", i - 1, j))
            i -= 1
        else:
            ops.append(("ins", i, j - 1))
            j -= 1
    ops.reverse()
    return ops


def _ends_costs(pats: np.ndarray, txt: np.ndarray) -> np.ndarray:
    """Min cost of matching each pattern row against windows ending at j.

    pats: (B, m) uint8, txt: (n,) uint8 -> (B, n+1) where entry [b, j] =
    min over j0 <= j of dist(pats[b], txt[j0:j]).  Works in int32 with a
    per-letter comparison table; costs stay far below the dtype limits.
    """
    B, m = pats.shape
    n = txt.shape[0]
    dt = np.int32
    uletters, inv = np.unique(pats, return_inverse=True)
    inv = inv.reshape(B, m)
    table = np.stack([(txt != c) for c in uletters]).astype(dt)  # (sigma, n)
    D = np.zeros((B, n + 1), dtype=dt)
    idx = np.arange(0, n + 1, dtype=dt)
    seed = np.empty((B, n + 1), dtype=dt)
    cur = np.empty((B, n + 1), dtype=dt)
    base = np.empty((B, n), dtype=dt)
    for i in range(1, m + 1):
        neq = table[inv[:, i - 1]]  # (B, n) gather
        np.add(D[:, :-1], neq, out=base)
        np.minimum(base, D[:, 1:] + 1, out=base)
        seed[:, 0] = i
        np.subtract(base, idx[1:], out=seed[:, 1:])
        np.minimum.accumulate(seed, axis=1, out=seed)
        cur[:, 0] = i
        np.add(seed[:, 1:], idx[1:], out=cur[:, 1:])
        np.minimum(cur[:, 1:], base, out=cur[:, 1:])
        D, cur = cur, D
    return D


def _starts_costs(pats: np.ndarray, txt: np.ndarray) -> np.ndarray:
    """[b, p] = min over p' >= p of dist(pats[b], txt[p:p']); shape (B, n+1)."""
    rev = _ends_costs(pats[:, ::-1], txt[::-1])
    return rev[:, ::-1]


@dataclass
class OracleReport:
    positions: list[int]
    witnesses: dict[int, tuple[int, int, int]] = field(default_factory=dict)


def brute_occ(pattern: bytes, text: bytes, k: int) -> list[int]:
    """Start positions of k-edit occurrences of pattern in text."""
    n = len(text)
    if n == 0 or not pattern:
        return []
    if len(pattern) <= k:
        # tiny patterns: enumerate windows directly to keep windows nonempty
        out = []
        for p in range(n):
            best = None
            for p2 in range(p + 1, min(n, p + len(pattern) + k) + 1):
                d = full_edit_distance(pattern, text[p:p2])
                if best is None or d < best:
                    best = d
            if best is not None and best <= k:
                out.append(p)
        return out
    starts = _starts_costs(_as_array(pattern)[None, :], _as_array(text))[0]
    return [p for p in range(n) if starts[p] <= k]


def brute_circocc(pattern: bytes, text: bytes, k: int) -> OracleReport:
    """All starts of text fragments within k edits of some rotation."""
    m, n = len(pattern), len(text)
    if m == 0 or n == 0:
        return OracleReport([])
    if m <= k:
        hits = sorted(set().union(*[set(brute_occ(rotate(pattern, x), text, k)) for x in range(m)]))
        return OracleReport(hits)
    doubled = _as_array(pattern + pattern)
    rots = np.stack([doubled[x:x + m] for x in range(m)])
    starts = _starts_costs(rots, _as_array(text))
    ok = (starts[:, :n] <= k).any(axis=0)
    return OracleReport([p for p in range(n) if ok[p]])


def brute_circocc_witnessed(pattern: bytes, text: bytes, k: int) -> OracleReport:
    """Like brute_circocc but with one witness (p', x, cost) per start."""
    report = brute_circocc(pattern, text, k)
    m, n = len(pattern), len(text)
    for p in report.positions:
        best = None
        for x in range(m):
            rp = rotate(pattern, x)
            for p2 in range(p + 1, min(n, p + m + k) + 1):
                d = full_edit_distance(rp, text[p:p2])
                if best is None or d < best[2]:
                    best = (p2 - 1, x, d)
            if best and best[2] == 0:
                break
        assert best is not None and best[2] <= k
        report.witnesses[p] = best
    return report


def brute_anchored(pattern: bytes, text: bytes, i: int, k: int) -> set[int]:
    """Starts of circular occurrences anchored at position i.

    A fragment text[p..p'] is anchored at i with split x when the part
    before i matches the pattern suffix from x and the part from i on
    matches the pattern prefix up to x, within k edits in total.
    """
    m, n = len(pattern), len(text)
    assert 0 <= i <= n
    back = full_edit_matrix(text[:i][::-1], pattern[::-1])  # [a][b]
    fwd = full_edit_matrix(text[i:], pattern)  # [a'][x]
    out: set[int] = set()
    # fwd_best[x][lmin] = min cost over forward lengths a' >= lmin
    fwd_best0 = fwd.min(axis=0)  # any a' >= 0
    fwd_best1 = fwd[1:].min(axis=0) if fwd.shape[0] > 1 else None
    for x in range(m + 1):
        for a in range(i + 1):
            c1 = back[a][m - x]
            if c1 > k:
                continue
            p = i - a
            if a == 0:
                if fwd_best1 is None:
                    continue
                c2 = fwd_best1[x]  # p' must be >= p = i, so a' >= 1
            else:
                c2 = fwd_best0[x]  # empty forward part allowed (p' = i-1 >= p)
            if c1 + c2 <= k:
                out.add(p)
    return out


def brute_psm(
    u: bytes,
    v: bytes,
    m: int,
    r: int,
    k: int,
    q: int,
    sync_tolerance: int,
) -> set[int]:
    """Starts p with p in Occ_k(v[x:x+m], u) for some x <= |v|-m and
    (p - x - r) mod q within sync_tolerance cyclically."""
    out: set[int] = set()
    nu = len(u)
    if nu == 0 or m == 0 or len(v) < m:
        return out
    xs = list(range(len(v) - m + 1))
    va = _as_array(v)
    pats = np.stack([va[x:x + m] for x in xs])
    starts = _starts_costs(pats, _as_array(u))
    hits = np.argwhere(starts[:, :nu] <= k)
    for bi, p in hits:
        x = xs[int(bi)]
        res = (int(p) - x - r) % q
        if min(res, q - res) <= sync_tolerance:
            out.add(int(p))
    return out
