"""Periodic window matching between two almost-periodic strings.

Instances carry a text-side string U, a pattern-side string V cut out of
the squared pattern, a primitive period Q, and a phase residue r.  The
answer is the set of start positions p such that some length-m window
V[x..x+m) occurs in U within k edits with p and x+r approximately
congruent modulo |Q|.

The solver splits offsets p-x into three regimes: an overlap regime where
locked fragments of the two strings can interact (anchors probed around
every valid offset), a non-overlap regime handled through the sample and
critical positions with interval-chain output, and a corner regime for
patterns too short for a sample, where every valid offset is probed.
Anchored candidates are filtered down to exact members of the answer set
through the triad structure: along a triad the offset p-x is constant, so
window-range and congruence checks apply to whole sub-triads.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

from . import params
from .anchors import AnchorContext, AnchoredSet, Triad, anchored
from .editdist import period_prefix_fit
from .intervals import (
    Chain,
    Interval,
    PositionSet,
    approx_congruent_filter,
    complement_within,
    merge_intervals,
)
from .locked import LockedDecomposition, Sample, choose_sample, locked_decomposition
from .store import ArithProg, ContractViolation, DiagnosticError, find_all, is_primitive, rotate

log = logging.getLogger(__name__)


@dataclass
class PsmStats:
    anchors_probed: int = 0
    triads_seen: int = 0
    triads_kept: int = 0
    chains_emitted: int = 0
    gamma_intervals: int = 0
    gamma_oversize: int = 0
    nonov_intervals: int = 0
    branch: str = ""


@dataclass
class PsmInstance:
    pattern: bytes  # P; windows of v are its rotations
    u: bytes
    v: bytes
    period: bytes  # Q, primitive
    r: int
    alpha: int  # v == (pattern+pattern)[alpha : alpha+len(v)]
    k: int
    validated: bool = True
    dec_u: LockedDecomposition | None = None
    dec_v: LockedDecomposition | None = None
    rot_sym: int = 0  # smallest positive rotation fixing the pattern; 0 = unset
    _accept_cache: dict = field(default_factory=dict)
    _accept_all: int = -1  # -1 unknown, 0 mixed, 1 everything accepted

    @property
    def m(self) -> int:
        return len(self.pattern)

    @property
    def q(self) -> int:
        return len(self.period)

    @property
    def beta(self) -> int:
        return self.alpha + len(self.v) - 1

    @property
    def sync_d(self) -> int:
        return params.SYNC_WINDOW * self.k

    @property
    def margin(self) -> int:
        return params.nonoverlap_margin(self.k, self.q)

    @property
    def sample_span(self) -> int:
        return params.sample_guarantee_span(self.k, self.q)


def make_instance(
    pattern: bytes,
    u: bytes,
    v: bytes,
    period: bytes,
    r: int,
    alpha: int,
    k: int,
    validate: bool = True,
) -> PsmInstance:
    """Build an instance; with validate=True every precondition is checked."""
    m, q = len(pattern), len(period)
    if m == 0 or q == 0 or k < 0:
        raise ContractViolation("degenerate instance")
    if not is_primitive(period):
        raise ContractViolation("period must be primitive")
    if not (0 <= r < q):
        raise ContractViolation("rotation residue out of range")
    if not (0 <= alpha and alpha + len(v) <= 2 * m):
        raise ContractViolation("pattern-side window out of the squared pattern")
    if (pattern + pattern)[alpha:alpha + len(v)] != v:
        raise ContractViolation("v is not the stated slice of the squared pattern")
    if validate:
        if k < 1:
            raise ContractViolation("validated instances need k >= 1")
        if not (m <= len(u)) or 4 * len(u) > 7 * m + 12 * (k + 1):
            raise ContractViolation("text-side length out of range")
        if not (m <= len(v)) or 2 * len(v) > 3 * m + (m % 2):
            raise ContractViolation("pattern-side length out of range")
        if q * params.PERIOD_SCALE * k > m:
            raise ContractViolation("period too long for this pattern length")
        budget = params.APPROX_PERIOD_BUDGET * k
        if period_prefix_fit(u, period, budget) is None:
            raise ContractViolation("text side is not almost periodic")
        if period_prefix_fit(v, rotate(period, r), budget) is None:
            raise ContractViolation("pattern side is not almost periodic")
    return PsmInstance(
        pattern=pattern, u=u, v=v, period=period, r=r, alpha=alpha, k=k,
        validated=validate,
    )


def _prepare(inst: PsmInstance) -> None:
    if inst.dec_u is None:
        inst.dec_u = locked_decomposition(inst.u, inst.period, inst.k, strict=inst.validated)
    if inst.dec_v is None:
        inst.dec_v = locked_decomposition(inst.v, inst.period, inst.k, strict=inst.validated)


def _rotation_windows(inst: PsmInstance) -> list[Interval]:
    """Rotations of the pattern realized by windows of v, as 1-2 intervals
    over [0..m-1] (rotation = (alpha + x) mod m for window start x)."""
    m = inst.m
    win = len(inst.v) - m
    if win >= m - 1:
        return [Interval(0, m - 1)]
    s0 = inst.alpha % m
    if s0 + win <= m - 1:
        return [Interval(s0, s0 + win)]
    return [Interval(s0, m - 1), Interval(0, s0 + win - m)]


def _rot_sym(inst: PsmInstance) -> int:
    """Smallest positive rotation that maps the pattern to itself.

    Equals m for patterns that are not exact powers; for an exact power it
    is the primitive-root length, and rotations then coincide as strings
    whenever their indices agree modulo this value.
    """
    if inst.rot_sym == 0:
        p = inst.pattern
        inst.rot_sym = (p + p).find(p, 1)
    return inst.rot_sym


def _accepts_class(inst: PsmInstance, u: int, pcls: int) -> bool:
    """Is some window start xv = u (mod rot_sym) within range and offset
    congruent, for a start position of residue pcls modulo q?"""
    key = (u, pcls)
    cached = inst._accept_cache.get(key)
    if cached is not None:
        return cached
    c = _rot_sym(inst)
    q, d, r = inst.q, inst.sync_d, inst.r
    wmax = len(inst.v) - inst.m
    ok = False
    if u <= wmax:
        cap = min((wmax - u) // c + 1, q)
        for j in range(cap):
            res = (pcls - (u + j * c) - r) % q
            if min(res, q - res) <= d:
                ok = True
                break
    inst._accept_cache[key] = ok
    return ok


def _accept_everywhere(inst: PsmInstance) -> bool:
    """True when every (rotation class, start class) pair is accepted."""
    if inst._accept_all == -1:
        c = _rot_sym(inst)
        q = inst.q
        if c * q > 4096:
            inst._accept_all = 0
        else:
            inst._accept_all = int(
                all(
                    _accepts_class(inst, u, pc)
                    for u in range(c)
                    for pc in range(q)
                )
            )
    return inst._accept_all == 1


def _accepts_windowed(inst: PsmInstance, u: int, p: int, window: Interval) -> bool:
    """Like _accepts_class but with the offset p-xv confined to window."""
    c = _rot_sym(inst)
    q, d, r = inst.q, inst.sync_d, inst.r
    wmax = len(inst.v) - inst.m
    xlo = max(0, p - window.hi)
    xhi = min(wmax, p - window.lo)
    if xlo > xhi:
        return False
    first = xlo + ((u - xlo) % c + c) % c
    xv = first
    tried = 0
    while xv <= xhi and tried < q:
        res = (p - xv - r) % q
        if min(res, q - res) <= d:
            return True
        xv += c
        tried += 1
    return False


def _filter_triads(
    inst: PsmInstance,
    aset: AnchoredSet,
    ctx_rotation: int,
    stats: PsmStats,
    offset_window: Interval | None = None,
) -> list[tuple[Triad, list[Interval]]]:
    """Cut each triad down to the sub-intervals of starts that are exact
    members of the answer set.

    A triple (p, p', s) witnesses a member when the matched rotation
    equals some in-range window of v as a string, with the offset to that
    window congruent to r (and inside offset_window when given).  For
    aperiodic patterns rotation indices map to windows one-to-one; for
    exact powers, rotations coincide modulo the primitive-root length and
    all index classes must be considered.
    """
    m, q = inst.m, inst.q
    c = _rot_sym(inst)
    out: list[tuple[Triad, list[Interval]]] = []
    if c >= m:
        windows = _rotation_windows(inst)
        for tr in aset.triads:
            stats.triads_seen += 1
            keep: list[Interval] = []
            # linear pieces (s_lo, s_hi, rho0): rotation rho0 + (s - s_lo)
            pieces: list[tuple[int, int, int]] = []
            lin = tr.splits.intersect(Interval(0, m - 1))
            if lin:
                rho0 = (ctx_rotation + lin.lo) % m
                before_wrap = m - rho0
                if len(lin) <= before_wrap:
                    pieces.append((lin.lo, lin.hi, rho0))
                else:
                    pieces.append((lin.lo, lin.lo + before_wrap - 1, rho0))
                    pieces.append((lin.lo + before_wrap, lin.hi, 0))
            if m in tr.splits:
                pieces.append((m, m, ctx_rotation % m))
            for plo, phi, rho0 in pieces:
                for w in windows:
                    lo = max(plo, plo + (w.lo - rho0))
                    hi = min(phi, plo + (w.hi - rho0))
                    if lo > hi:
                        continue
                    xv = (rho0 + (lo - plo) - inst.alpha) % m
                    p_lo = tr.starts.lo + (lo - tr.splits.lo)
                    offset = p_lo - xv
                    if offset_window is not None and offset not in offset_window:
                        continue
                    res = (offset - inst.r) % q
                    if min(res, q - res) > inst.sync_d:
                        continue
                    keep.append(
                        Interval(p_lo, tr.starts.lo + (hi - tr.splits.lo))
                    )
            if keep:
                stats.triads_kept += 1
                out.append((tr, merge_intervals(keep)))
        return out

    # exact-power pattern: rotation classes live modulo c
    import math

    period = math.lcm(c, q)
    for tr in aset.triads:
        stats.triads_seen += 1
        length = len(tr.splits)
        p0 = tr.starts.lo
        u0 = (ctx_rotation + tr.splits.lo - inst.alpha) % c
        if offset_window is None and _accept_everywhere(inst):
            stats.triads_kept += 1
            out.append((tr, [tr.starts]))
            continue
        if offset_window is None:
            span = min(period, length)
            mask = [
                _accepts_class(inst, (u0 + t) % c, (p0 + t) % q)
                for t in range(span)
            ]

            def ok_at(t: int) -> bool:
                return mask[t % period] if length > period else mask[t]

        else:

            def ok_at(t: int) -> bool:
                return _accepts_windowed(
                    inst, (u0 + t) % c, p0 + t, offset_window
                )

        keep: list[Interval] = []
        run_start = None
        for t in range(length):
            if ok_at(t) and run_start is None:
                run_start = t
            elif not ok_at(t) and run_start is not None:
                keep.append(Interval(p0 + run_start, p0 + t - 1))
                run_start = None
        if run_start is not None:
            keep.append(Interval(p0 + run_start, p0 + length - 1))
        if keep:
            stats.triads_kept += 1
            out.append((tr, keep))
    return out


def _overlap_intervals(inst: PsmInstance, t: int) -> list[Interval]:
    """Offsets at which extended locked fragments of the two sides touch."""
    _prepare(inst)
    m = inst.m
    out: list[Interval] = []
    for lu in inst.dec_u.locked_intervals():
        for lv in inst.dec_v.locked_intervals():
            base = Interval(lu.lo - t - lv.hi, lu.hi + t - lv.lo)
            for sh in (-2 * m, -m, 0, m, 2 * m):
                out.append(base.shift(sh))
    return merge_intervals(out)


def nonov_intervals(inst: PsmInstance, t: int) -> list[Interval]:
    """Maximal offset intervals where no locked fragments interact."""
    bounds = Interval(-len(inst.v) + 1, len(inst.u) - 1)
    return complement_within(_overlap_intervals(inst, t), bounds)


def overlap_offsets(inst: PsmInstance, t: int) -> tuple[list[Interval], list[Interval]]:
    """(all touching offsets extended by t+k, the congruent ones)."""
    lam = _overlap_intervals(inst, t + inst.k)
    gamma: list[Interval] = []
    for iv in lam:
        gamma.extend(approx_congruent_filter(iv, inst.r, inst.sync_d, inst.q))
    return lam, gamma


def _probe_anchors(
    inst: PsmInstance,
    ctx: AnchorContext,
    anchors: list[int],
    stats: PsmStats,
    mode: str,
    result: PositionSet,
    seen: set[int],
) -> int | None:
    for a in anchors:
        if a in seen or not (0 <= a <= len(inst.u)):
            continue
        seen.add(a)
        stats.anchors_probed += 1
        aset = anchored(ctx, a, inst.k)
        if not aset.triads:
            continue
        kept = _filter_triads(inst, aset, ctx.rotation, stats)
        for _, ivs in kept:
            for iv in ivs:
                if mode == "decide":
                    return iv.lo
                result.add_interval(iv)
    return None


def _ensure_sample(inst: PsmInstance) -> None:
    """Pick the sample once; both split-regime stages must see it as a
    locked fragment or offsets fall between the two regimes."""
    _prepare(inst)
    if inst.dec_v.sample is None:
        window = Interval(len(inst.v) - inst.m, inst.m - 1)
        inst.dec_v.sample = choose_sample(inst.dec_v, window, inst.k)


def solve_overlap(
    inst: PsmInstance, mode: str = "report", stats: PsmStats | None = None
) -> PositionSet | int | None:
    """Matches whose offset lets locked fragments interact."""
    stats = stats if stats is not None else PsmStats()
    _ensure_sample(inst)
    t = inst.margin
    _, gamma = overlap_offsets(inst, t)
    stats.gamma_intervals += len(gamma)
    width_cap = 2 * inst.sync_d + 1
    for iv in gamma:
        if len(iv) > width_cap:
            stats.gamma_oversize += 1
    result = PositionSet()
    seen: set[int] = set()
    ctx = AnchorContext(inst.pattern, inst.u)
    shift = inst.m - inst.alpha
    for iv in gamma:
        anchors = list(range(max(iv.lo + shift, 0), min(iv.hi + shift, len(inst.u)) + 1))
        hit = _probe_anchors(inst, ctx, anchors, stats, mode, result, seen)
        if mode == "decide" and hit is not None:
            return hit
    if mode == "decide":
        return None
    return result


def critical_bounds(
    inst: PsmInstance, d_iv: Interval
) -> tuple[int, int, int] | None:
    """(first, last, step) of exact period-run probes for a non-overlap
    offset interval, or None when the scope holds no full run."""
    _prepare(inst)
    sample = inst.dec_v.sample
    if sample is None:
        raise ContractViolation("sample required for critical positions")
    k, q = inst.k, inst.q
    scope = Interval(sample.j1 + d_iv.lo - k, sample.j2 + d_iv.hi + k)
    scope = scope.clip(0, len(inst.u) - 1)
    if not scope:
        return None
    needle = inst.period * (k + 1)
    if len(scope) < len(needle):
        return None
    hits = find_all(needle, inst.u[scope.lo:scope.hi + 1])
    if not hits:
        return None
    prog = ArithProg.from_sorted(hits)
    if prog.count > 1 and prog.step != q:
        raise DiagnosticError("critical positions not spaced by the period")
    i1 = scope.lo + prog.first
    i2 = scope.lo + prog.last
    if (i2 - i1) % q != 0:
        raise DiagnosticError("critical position spread not a period multiple")
    return i1, i2, q


def _probe_ladder(i1: int, i2: int, q: int, slack: int) -> list[int]:
    """Critical positions to probe.

    Interior matches slide towards a probed position, but only as far as
    the string boundaries leave room, and slack (how much longer the text
    side is than one occurrence) bounds that room.  Probes are spaced so
    every interior match reaches one; with generous slack this degenerates
    to just the two extremes.
    """
    if i2 <= i1:
        return [i1]
    stride = max(q, (max(slack, 2 * q) // (2 * q)) * q)
    probes = list(range(i1, i2, stride))
    probes.append(i2)
    return probes


def solve_nonoverlap(
    inst: PsmInstance, mode: str = "report", stats: PsmStats | None = None
) -> PositionSet | int | None:
    """Matches at offsets where locked fragments stay apart.

    Matches anchored at interior critical positions are shifted copies of
    matches at probed ones, so runs between probes come out as chains,
    clipped to the room the text side leaves for shifted occurrences.
    """
    stats = stats if stats is not None else PsmStats()
    _ensure_sample(inst)
    sample = inst.dec_v.sample
    y = (sample.j1 + inst.alpha) % inst.m
    ctx = AnchorContext(inst.pattern, inst.u, rotation=y)
    nu = len(inst.u)
    slack = nu - inst.m - inst.k

    result = PositionSet()
    intervals = nonov_intervals(inst, inst.margin)
    stats.nonov_intervals += len(intervals)
    for d_iv in intervals:
        got = critical_bounds(inst, d_iv)
        if got is None:
            continue
        i1, i2, q = got
        d_ext = Interval(d_iv.lo - inst.k, d_iv.hi + inst.k)
        for i_star in _probe_ladder(i1, i2, q, slack):
            aset = anchored(ctx, i_star, inst.k)
            stats.anchors_probed += 1
            kept = _filter_triads(inst, aset, y, stats)
            if mode == "decide":
                for _, ivs in kept:
                    if ivs:
                        return ivs[0].lo
                continue
            for _, ivs in kept:
                for iv in ivs:
                    result.add_interval(iv)
            dn = (i_star - i1) // q
            up = (i2 - i_star) // q
            if dn + up == 0:
                continue
            # only offsets inside this non-overlap interval may be slid
            chained = _filter_triads(inst, aset, y, stats, offset_window=d_ext)
            for tr, ivs in chained:
                end_off = tr.ends.lo - tr.starts.lo
                bounds = Interval(0, nu - 1 - end_off)
                for iv in ivs:
                    full = Chain(iv.shift(-dn * q), dn + up, q)
                    for piece in full.clip(bounds):
                        result.add(piece)
                        if piece.count > 0:
                            stats.chains_emitted += 1
    if mode == "decide":
        return None
    return result


def solve_corner(
    inst: PsmInstance, mode: str = "report", stats: PsmStats | None = None
) -> PositionSet | int | None:
    """Direct probing of every valid offset; used when the pattern is too
    short (relative to k and q) to guarantee a sample."""
    stats = stats if stats is not None else PsmStats()
    _prepare(inst)
    bounds = Interval(-len(inst.v) + 1, len(inst.u) - 1)
    valid = approx_congruent_filter(bounds, inst.r, inst.sync_d, inst.q)
    result = PositionSet()
    seen: set[int] = set()
    ctx = AnchorContext(inst.pattern, inst.u)
    shift = inst.m - inst.alpha
    for iv in valid:
        lo = max(iv.lo + shift - inst.k, 0)
        hi = min(iv.hi + shift + inst.k, len(inst.u))
        hit = _probe_anchors(inst, ctx, list(range(lo, hi + 1)), stats, mode, result, seen)
        if mode == "decide" and hit is not None:
            return hit
    if mode == "decide":
        return None
    return result


def solve(
    inst: PsmInstance, mode: str = "report", stats: PsmStats | None = None
) -> PositionSet | int | None:
    """Full periodic-window match: report a position set or decide."""
    if mode not in ("report", "decide"):
        raise ContractViolation("mode must be report or decide")
    stats = stats if stats is not None else PsmStats()
    _prepare(inst)
    if 2 * inst.sample_span > inst.m:
        stats.branch = "corner"
        return solve_corner(inst, mode, stats)
    stats.branch = "split"
    if mode == "decide":
        got = solve_overlap(inst, "decide", stats)
        if got is not None:
            return got
        return solve_nonoverlap(inst, "decide", stats)
    result = PositionSet()
    result.extend(solve_overlap(inst, "report", stats))
    result.extend(solve_nonoverlap(inst, "report", stats))
    result.sort()
    return result
