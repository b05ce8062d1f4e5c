"""Top-level search for circular approximate occurrences.

The text is covered with windows about one-and-a-half pattern lengths
wide.  Inside a window, each half of the pattern is located separately:
occurrence sets that are sparse give anchor positions directly, while
dense regions are certified as almost periodic and handed to the periodic
window matcher, with dense-region fallbacks keeping correctness whenever
a certificate cannot be produced.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from math import ceil

from . import params
from .anchors import AnchorContext, anchored
from .editdist import (
    PeriodicFitGenerator,
    budget_reach,
    period_prefix_fit,
    period_suffix_fit,
    period_run_fit,
)
from .editpm import ends_costs, occ_starts, starts_costs
from .intervals import Interval, PositionSet
from .oracle import brute_circocc
from .psm import PsmInstance, PsmStats, make_instance, solve as psm_solve
from .store import ContractViolation, find_all, is_primitive, rotate

log = logging.getLogger(__name__)


@dataclass
class ReductionStats:
    windows: int = 0
    fragments_sparse: int = 0
    fragments_dense: int = 0
    instances_built: int = 0
    instances_failed: int = 0
    fallbacks: int = 0
    anchors_probed: int = 0
    psm: PsmStats = field(default_factory=PsmStats)

    @property
    def psm_taken(self) -> bool:
        return self.instances_built > 0


def split_windows(n: int, m: int, k: int) -> list[tuple[int, int, int]]:
    """(start, end, responsibility-end) triples covering the text.

    Windows have length 3m/2 + k at stride m/2; each is responsible for
    occurrence starts within its first stride (the last one to the end),
    so every candidate occurrence fits inside its responsible window.
    """
    if m < 1:
        raise ContractViolation("pattern must be nonempty")
    length = (3 * m) // 2 + k
    stride = max(m // 2, 1)
    if n <= length:
        return [(0, n, n)]
    out = []
    s = 0
    while s < n:
        e = min(n, s + length)
        resp = min(n, s + stride)
        if e == n:
            out.append((s, e, n))
            break
        out.append((s, e, resp))
        s += stride
    return out


def cover_fragments(n: int, block_len: int, k: int) -> list[tuple[int, int]]:
    """Cover [0, n) with pieces of length 3*block_len/2 + k at half-block
    stride, so any window of length block_len + k fits inside a piece."""
    length = (3 * block_len) // 2 + k
    stride = max(block_len // 2, 1)
    if n <= length:
        return [(0, n)]
    out = []
    s = 0
    while s < n:
        out.append((s, min(n, s + length)))
        if s + length >= n:
            break
        s += stride
    return out


@dataclass
class PassConfig:
    """One half-pattern pass: where the block sits and how to anchor."""

    name: str
    block: bytes
    ctx: bytes  # the squared-pattern slice holding every relevant rotation
    ctx_base: int  # offset of ctx inside the squared pattern
    block_off: int  # offset of the block inside ctx
    other_len: int  # length of the complementary half
    anchor_at_end: bool  # anchor at occurrence ends instead of starts


def make_passes(pattern: bytes) -> list[PassConfig]:
    m = len(pattern)
    m1 = m // 2
    doubled = pattern + pattern
    return [
        PassConfig(
            name="first-half",
            block=pattern[:m1],
            ctx=doubled[m1:2 * m],
            ctx_base=m1,
            block_off=m - m1,  # the middle copy of the first half
            other_len=m - m1,
            anchor_at_end=False,
        ),
        PassConfig(
            name="second-half",
            block=pattern[m1:],
            ctx=doubled[0:m + m1],
            ctx_base=0,
            block_off=m1,
            other_len=m1,
            anchor_at_end=True,
        ),
    ]


@dataclass
class PeriodCertificate:
    period: bytes  # rotated so the block fits a run prefix
    fit_cost: int
    fit_len: int  # witness run-prefix length for the block


def _pattern_period(block: bytes, m: int, k: int) -> PeriodCertificate | None:
    """Try to certify a short primitive approximate period for one block."""
    qmax = params.max_period_len(m, k)
    budget = params.PATTERN_PERIOD_BUDGET * k - 1
    if qmax < 1 or budget < 0:
        return None
    for qlen in range(1, qmax + 1):
        for w in range(2 * k + 1):
            lo = w * qlen
            if lo + qlen > len(block):
                break
            cand = block[lo:lo + qlen]
            if not is_primitive(cand):
                continue
            run = period_run_fit(block, cand, budget)
            if run is None:
                continue
            cost, rot, _ = run
            period = rotate(cand, rot)
            fit = period_prefix_fit(block, period, cost)
            assert fit is not None and fit[0] == cost
            return PeriodCertificate(period=period, fit_cost=cost, fit_len=fit[1])
    return None


@dataclass
class VResult:
    lo: int  # ctx coordinates, inclusive
    hi: int  # ctx coordinates, exclusive
    r_left: tuple[int, int] | None  # ctx coordinates [lo, hi)
    r_right: tuple[int, int] | None
    y_prime_len: int  # matched run-suffix length of the piece left of the block


def compute_v(cfg: PassConfig, cert: PeriodCertificate, m: int, k: int) -> VResult | None:
    """Grow the block's periodic fit to both sides of the rotation context.

    Extension stops at the context boundary or once the grown piece holds
    a dense quota of edits; a piece stopped by the quota is returned so
    its occurrences can be anchored separately.
    """
    q = cert.period
    dense_min = ceil(3 * m / 8)

    def threshold(length: int, cost: int) -> bool:
        return length >= dense_min and cost >= ceil(
            params.DENSE_REGION_RATE * k * length / m
        )

    right = cfg.ctx[cfg.block_off:]
    gen = PeriodicFitGenerator(right, q, rotation=0)
    w_end = None
    r_right = None
    for cost in range(0, 16 * k + 5):
        len_s, _ = gen.next()
        if len_s >= len(right):
            w_end = len(cfg.ctx)
            break
        if threshold(len_s, cost):
            w_end = cfg.block_off + len_s
            r_right = (cfg.block_off, cfg.block_off + len_s)
            break
    if w_end is None:
        return None

    left = cfg.ctx[:cfg.block_off + len(cfg.block)]
    gen = PeriodicFitGenerator(
        left, q, rotation=cert.fit_len % len(q), direction="suffix"
    )
    z_start = None
    r_left = None
    for cost in range(0, 16 * k + 5):
        len_s, _ = gen.next()
        if len_s >= len(left):
            z_start = 0
            break
        if threshold(len_s, cost):
            z_start = len(left) - len_s
            r_left = (z_start, len(left))
            break
    if z_start is None:
        return None

    y_piece = cfg.ctx[z_start:cfg.block_off]
    y_fit = period_suffix_fit(y_piece, q, 16 * k + len(q), end_phase=0)
    if y_fit is None:
        return None
    return VResult(
        lo=z_start, hi=w_end, r_left=r_left, r_right=r_right, y_prime_len=y_fit[1]
    )


def _stop_length(stretch: bytes, q: bytes, k: int, residues: list[int], left: bool) -> int:
    """Letters to take before the quota of edits against every nearby
    rotation is reached (the whole stretch when it never is)."""
    budget = params.EXT_STOP_COST * k - 1
    if budget < 0:
        return 0
    best = 0
    qr = q[::-1]
    for x in residues:
        if left:
            rot = (len(q) - x) % len(q)
            reach = budget_reach(stretch[::-1], qr, budget, rotation=rot)
        else:
            reach = budget_reach(stretch, q, budget, rotation=x)
        best = max(best, reach)
        if best >= len(stretch):
            return len(stretch)
    return min(best + 1, len(stretch))


def compute_u(
    window: bytes,
    tbar_lo: int,
    tbar_hi: int,
    q: bytes,
    k: int,
    other_len: int,
) -> tuple[int, int, int] | None:
    """Extend the trimmed region; returns (u_lo, u_hi, x_prime_len)."""
    qlen = len(q)
    slop = params.EXT_ROT_SLACK * k
    res_right = sorted({(tbar_hi - tbar_lo + j) % qlen for j in range(-slop, slop + 1)})
    res_left = sorted({j % qlen for j in range(-slop, slop + 1)})

    cap = other_len + k
    right_stretch = window[tbar_hi:min(len(window), tbar_hi + cap)]
    take_r = _stop_length(right_stretch, q, k, res_right, left=False)
    left_stretch = window[max(0, tbar_lo - cap):tbar_lo]
    take_l = _stop_length(left_stretch, q, k, res_left, left=True)

    u_lo = tbar_lo - take_l
    u_hi = tbar_hi + take_r
    x_piece = window[u_lo:tbar_lo]
    x_fit = period_suffix_fit(
        x_piece, q, 2 * params.EXT_STOP_COST * k + slop + qlen, end_phase=0
    )
    if x_fit is None:
        return None
    return u_lo, u_hi, x_fit[1]


def derive_r(x_prime_len: int, y_prime_len: int, q: int) -> int:
    """Phase residue between the two matched run suffixes."""
    return (x_prime_len - y_prime_len) % q


@dataclass
class WindowOutcome:
    positions: PositionSet = field(default_factory=PositionSet)
    witness: int | None = None


def _anchor_probe(
    ctx: AnchorContext,
    anchors: set[int],
    k: int,
    result: PositionSet,
    stats: ReductionStats,
    mode: str,
) -> int | None:
    for a in sorted(anchors):
        if not (0 <= a <= ctx.n):
            continue
        stats.anchors_probed += 1
        got = anchored(ctx, a, k)
        if not got.triads:
            continue
        if mode == "decide":
            return min(t.starts.lo for t in got.triads)
        for iv in got.start_intervals():
            result.add_interval(iv)
    return None


def _dense_spans(occ: list[int], ends: list[int]) -> tuple[int, int] | None:
    if not occ or not ends:
        return None
    return min(occ), max(ends)


def reduce_window(
    pattern: bytes,
    window: bytes,
    k: int,
    mode: str = "report",
    stats: ReductionStats | None = None,
) -> WindowOutcome:
    """Find all circular k-edit occurrence starts within one window."""
    stats = stats if stats is not None else ReductionStats()
    m = len(pattern)
    nw = len(window)
    out = WindowOutcome()
    if nw < m - k:
        return out
    ctx = AnchorContext(pattern, window)
    anchors: set[int] = set()
    instances: list[tuple[PsmInstance, int]] = []  # (instance, u offset)

    for cfg in make_passes(pattern):
        cert: PeriodCertificate | None = None
        cert_tried = False
        vres: VResult | None = None
        covered: list[tuple[int, int]] = []  # dense spans already inside an instance

        for flo, fhi in cover_fragments(nw, len(cfg.block), k):
            sub = window[flo:fhi]
            s_costs = starts_costs(cfg.block, sub)
            occ = [p for p in range(len(sub)) if s_costs[p] <= k]
            if not occ:
                continue
            e_costs = ends_costs(cfg.block, sub)
            ends = [j for j in range(1, len(sub) + 1) if e_costs[j] <= k]
            frag_anchors = (
                {flo + e for e in ends} if cfg.anchor_at_end else {flo + p for p in occ}
            )
            trigger = params.SPARSE_TRIGGER_K2 * k * k + params.SPARSE_TRIGGER_BASE
            hard = k > 0 and (len(occ) // k) > (
                params.SPARSE_FACTOR * k * len(sub) / max(len(cfg.block), 1)
            )
            if not hard and len(occ) <= trigger:
                stats.fragments_sparse += 1
                anchors.update(frag_anchors)
                continue

            stats.fragments_dense += 1
            span = _dense_spans([flo + p for p in occ], [flo + e for e in ends])
            if span is None:
                anchors.update(frag_anchors)
                continue
            if any(span[0] >= lo and span[1] <= hi for lo, hi in covered):
                continue  # occurrences already inside an existing instance

            if not cert_tried:
                cert_tried = True
                cert = _pattern_period(cfg.block, m, k)
                if cert is not None:
                    vres = compute_v(cfg, cert, m, k)
            built = False
            if cert is not None and vres is not None:
                built = _try_instance(
                    pattern, window, cfg, cert, vres, span, k, instances, stats
                )
                if built:
                    covered.append(span)
            if not built:
                stats.fallbacks += 1
                anchors.update(frag_anchors)

        # pieces that stopped the periodic extension get anchored directly
        if vres is not None and instances:
            _anchor_dense_pieces(cfg, vres, window, k, anchors)

    hit = _anchor_probe(ctx, anchors, k, out.positions, stats, mode)
    if mode == "decide" and hit is not None:
        out.witness = hit
        return out
    for inst, u_off in instances:
        got = psm_solve(inst, mode, stats.psm)
        if mode == "decide":
            if got is not None:
                out.witness = got + u_off
                return out
        else:
            out.positions.extend(got.shift(u_off))
    out.positions.sort()
    return out


def _try_instance(
    pattern: bytes,
    window: bytes,
    cfg: PassConfig,
    cert: PeriodCertificate,
    vres: VResult,
    span: tuple[int, int],
    k: int,
    instances: list[tuple[PsmInstance, int]],
    stats: ReductionStats,
) -> bool:
    """Certify the dense span and build a periodic-match instance."""
    q = cert.period
    qlen = len(q)
    lo, hi = span
    tbar = window[lo:hi]
    t_fit = period_prefix_fit(tbar, q, params.TRIM_BUDGET * k)
    if t_fit is None:
        return False
    occ_in = occ_starts(cfg.block, tbar, k)
    d = params.TRIM_BUDGET * k
    for p in occ_in:
        res = p % qlen
        if min(res, qlen - res) > d:
            return False
    got = compute_u(window, lo, hi, q, k, cfg.other_len)
    if got is None:
        return False
    u_lo, u_hi, x_prime = got
    if u_hi - u_lo < len(pattern):
        return False  # too short to hold any occurrence
    r = derive_r(x_prime, vres.y_prime_len, qlen)
    q_inst = rotate(q, (-x_prime) % qlen)
    r_v = derive_r(0, vres.y_prime_len, qlen)
    # the pattern-side string starts at run phase -y', the text side at -x'
    r_inst = (x_prime - vres.y_prime_len) % qlen
    alpha = cfg.ctx_base + vres.lo
    v_bytes = cfg.ctx[vres.lo:vres.hi]
    try:
        inst = make_instance(
            pattern,
            window[u_lo:u_hi],
            v_bytes,
            q_inst,
            r_inst,
            alpha,
            k,
            validate=True,
        )
    except ContractViolation as exc:
        log.debug("instance rejected: %s", exc)
        stats.instances_failed += 1
        return False
    instances.append((inst, u_lo))
    stats.instances_built += 1
    return True


def _anchor_dense_pieces(
    cfg: PassConfig,
    vres: VResult,
    window: bytes,
    k: int,
    anchors: set[int],
) -> None:
    """Anchor every occurrence of a quota-stopped extension piece."""
    m1 = len(cfg.block)
    for piece, is_right in ((vres.r_right, True), (vres.r_left, False)):
        if piece is None:
            continue
        frag = cfg.ctx[piece[0]:piece[1]]
        if not frag or len(frag) > len(window) + k:
            continue
        if is_right:
            occ = occ_starts(frag, window, k)
            if cfg.anchor_at_end:
                # block is the piece's prefix; anchor where the block ends
                for p in occ:
                    anchors.update(range(p + m1 - k, p + m1 + k + 1))
            else:
                anchors.update(occ)
        else:
            e_costs = ends_costs(frag, window)
            ends = [j for j in range(1, len(window) + 1) if e_costs[j] <= k]
            if cfg.anchor_at_end:
                anchors.update(ends)
            else:
                # block is the piece's suffix; anchor where the block starts
                for e in ends:
                    anchors.update(range(e - m1 - k, e - m1 + k + 1))


def _exact_circular(pattern: bytes, text: bytes) -> list[int]:
    """Exact rotation matching via occurrences in the squared pattern."""
    m, n = len(pattern), len(text)
    doubled = pattern + pattern
    out = []
    for p in range(n - m + 1):
        if doubled.find(text[p:p + m]) != -1:
            out.append(p)
    return out


def circ_occ(
    pattern: bytes,
    text: bytes,
    k: int,
    mode: str = "report",
    stats: ReductionStats | None = None,
) -> PositionSet | int | None:
    """All start positions of circular k-edit occurrences (or any one).

    Exact matching handles k = 0; tiny patterns (m <= 8k, where no valid
    period length exists) go through the reference scan; everything else
    runs the windowed reduction.
    """
    stats = stats if stats is not None else ReductionStats()
    m, n = len(pattern), len(text)
    if m == 0:
        raise ContractViolation("pattern must be nonempty")
    if k < 0:
        raise ContractViolation("edit budget must be nonnegative")
    if mode not in ("report", "decide"):
        raise ContractViolation("mode must be report or decide")

    def finish(ps: PositionSet) -> PositionSet | int | None:
        if mode == "decide":
            return ps.min()
        ps.sort()
        _log_compactness(ps, n, m, k)
        return ps

    if n < max(m - k, 1):
        return None if mode == "decide" else PositionSet()
    if k == 0:
        return finish(PositionSet.from_positions(_exact_circular(pattern, text)))
    if m <= 8 * k:
        return finish(PositionSet.from_positions(brute_circocc(pattern, text, k).positions))

    result = PositionSet()
    for ws, we, resp in split_windows(n, m, k):
        stats.windows += 1
        outcome = reduce_window(pattern, text[ws:we], k, mode, stats)
        if mode == "decide":
            if outcome.witness is not None:
                return ws + outcome.witness
            continue
        result.extend(outcome.positions.shift(ws).clip(Interval(ws, resp - 1)))
    if mode == "decide":
        return None
    return finish(result)


def _log_compactness(ps: PositionSet, n: int, m: int, k: int) -> None:
    budget = 64 * max(1, n // max(m, 1)) * max(k, 1) ** 6
    if len(ps.chains) > budget:
        log.warning(
            "output uses %d chains, above the %d soft budget (n=%d m=%d k=%d)",
            len(ps.chains), budget, n, m, k,
        )
