"""LLR-domain successive cancellation list decoding on the code tree.

The decoder walks the binary code tree left to right with eight-bit leaf
symbols. Each leaf expands every surviving path into candidate symbols and the
list is pruned back to L survivors globally. Leaf handling depends on the
frozen pattern and the schedule:

* 'fast'    - all-frozen leaves add a fixed penalty; all-data leaves keep the
              hard decision plus flips of the two least reliable positions;
              F...FD leaves (eight- or sixteen-bit) are repetition nodes; the
              six mixed patterns go through the divide-and-conquer expansion
              unit; anything else decodes bit by bit. With list size one (and
              for each path after the mode4_1 switching point) mixed-pattern
              leaves decode bit-serially so the output is exactly classic SC;
              the joint symbol decision is strictly better on a few percent of
              leaves and remains available through the 'dnc' schedule.
* 'dnc'     - every DF-free eight-bit pattern goes through the
              divide-and-conquer unit (exhaustive when q is large enough).
* 'bitwise' - no shortcuts; single-bit leaves (reference schedule).

Path state lives in parallel arrays over (frame batch, list). Pruning never
copies LLR stacks: each stacked array carries the prune-log epoch it was
written at, and reads compose the intervening parent permutations on the fly.

Metric convention: penalties are nonnegative; the path metric accumulates
|llr| over positions where a hypothesis disagrees with the hard decision
(hard(0) = 0). Ties order by (metric, path index, candidate order); candidate
order within a path is (penalty, symbol value) for the expansion unit,
symbol value for repetition/single-bit leaves, and enumeration order
(no flip, flip 1st, flip 2nd, flip both) for all-data leaves.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .channel import BEC_LLR_CLAMP
from .core import CrcSpec, PolarCode, crc_check_rows, polar_transform
from .patterns import FrozenPattern, NodeKind, classify_node, pattern_plan

LEAF_SPAN = 8

__all__ = [
    "LEAF_SPAN", "ModeConfig", "DecodeResult", "decode", "decode_batch",
    "f_llr", "g_llr", "hard_decision", "path_metric_update",
    "leaf_metrics_rcc", "aml_expand_prune", "classify_node",
    "rate0_penalty", "rate1_candidates", "repetition_candidates",
    "ExpansionStats", "decode_frames",
]


def hard_decision(llr):
    """0 for llr >= 0, else 1."""
    return (np.asarray(llr) < 0).astype(np.uint8)


def f_llr(a, b):
    """Check-node update: sign(a)sign(b)min(|a|,|b|)."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    return np.sign(a) * np.sign(b) * np.minimum(np.abs(a), np.abs(b))


def g_llr(a, b, partial):
    """Variable-node update: b + (1 - 2*partial) * a."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    return b + (1.0 - 2.0 * np.asarray(partial, dtype=np.float64)) * a


def path_metric_update(pm, alpha, u):
    """pm + |alpha| when u disagrees with the hard decision, else pm."""
    pm = np.asarray(pm, dtype=np.float64)
    alpha = np.asarray(alpha, dtype=np.float64)
    mismatch = np.asarray(u) != hard_decision(alpha)
    out = pm + np.abs(alpha) * mismatch
    return out if out.ndim else float(out)


def _relu(x):
    return np.maximum(x, 0.0)


# ---------------------------------------------------------------------------
# Symbol tables


@lru_cache(maxsize=None)
def _leaf_tables(M: int):
    """(bits, codewords): rows indexed by symbol value, first bit = MSB."""
    syms = np.arange(1 << M)
    bits = ((syms[:, None] >> np.arange(M - 1, -1, -1)) & 1).astype(np.uint8)
    cw = polar_transform(bits)
    bits.setflags(write=False)
    cw.setflags(write=False)
    return bits, cw


@lru_cache(maxsize=None)
def _sym_of_ve(M: int) -> np.ndarray:
    """Symbol value from (pair-xor sub-symbol, even sub-symbol) values."""
    bits, _ = _leaf_tables(M)
    h = M // 2
    w = 1 << np.arange(h - 1, -1, -1)
    v = ((bits[:, 0::2] ^ bits[:, 1::2]) * w).sum(axis=1)
    e = (bits[:, 1::2] * w).sum(axis=1)
    table = np.zeros((1 << h, 1 << h), dtype=np.int64)
    table[v, e] = np.arange(1 << M)
    table.setflags(write=False)
    return table


@lru_cache(maxsize=None)
def _sym_of_codeword(M: int) -> np.ndarray:
    """Symbol value from the packed codeword value (transform involution)."""
    _, cw = _leaf_tables(M)
    w = 1 << np.arange(M - 1, -1, -1)
    packed = (cw.astype(np.int64) * w).sum(axis=1)
    table = np.zeros(1 << M, dtype=np.int64)
    table[packed] = np.arange(1 << M)
    table.setflags(write=False)
    return table


_REP16_BITS = np.zeros((2, 16), dtype=np.uint8)
_REP16_BITS[1, 15] = 1
_REP16_CW = np.stack([np.zeros(16, dtype=np.uint8), np.ones(16, dtype=np.uint8)])
_BIT_BITS = np.array([[0], [1]], dtype=np.uint8)


def _u_bits_table(key: str) -> np.ndarray:
    if key == "leaf8":
        return _leaf_tables(LEAF_SPAN)[0]
    if key == "rep16":
        return _REP16_BITS
    return _BIT_BITS


def _codeword_table(key: str) -> np.ndarray:
    if key == "leaf8":
        return _leaf_tables(LEAF_SPAN)[1]
    if key == "rep16":
        return _REP16_CW
    return _BIT_BITS


# ---------------------------------------------------------------------------
# Divide-and-conquer symbol expansion


@dataclass
class ExpansionStats:
    """Operation counters recorded by one expansion run (per list)."""

    step2_sums: int = 0
    sorts: list = field(default_factory=list)  # (input_size, output_size, count)

    def record_sort(self, frm: int, to: int, count: int):
        self.sorts.append((frm, to, count))


class _ExpandPlan:
    """Index tables for one DF-free pattern.

    group_free[g, f] enumerates the half-symbol hypotheses consistent with
    FD-pair assignment g, ascending in f; sym_table[g, iv, ie] is the symbol
    value assembled from the iv-th and ie-th entries of that group.
    """

    def __init__(self, pattern: FrozenPattern):
        if pattern.has_df_pair:
            raise ValueError("expansion plans require a DF-free pattern")
        self.pattern = pattern
        M = pattern.M
        h = M // 2
        fd = [i - 1 for i in pattern.omega01]
        dd = [i - 1 for i in pattern.omega11]
        weights = [1 << (h - 1 - i) for i in range(h)]
        G, F = 1 << len(fd), 1 << len(dd)
        group_free = np.zeros((G, F), dtype=np.int64)
        for g in range(G):
            base = sum(weights[p] for k, p in enumerate(fd) if (g >> (len(fd) - 1 - k)) & 1)
            for f in range(F):
                free = sum(weights[p] for k, p in enumerate(dd) if (f >> (len(dd) - 1 - k)) & 1)
                group_free[g, f] = base + free
        self.group_free = group_free
        ve = _sym_of_ve(M)
        self.sym_table = ve[group_free[:, :, None], group_free[:, None, :]]


@lru_cache(maxsize=None)
def _expand_plan(mask: tuple) -> _ExpandPlan:
    return _ExpandPlan(pattern_plan(mask))


def leaf_metrics_rcc(llrs):
    """Half-symbol penalty tables (t1, t2) for eight leaf LLRs.

    t1[i] is the mismatch penalty of the i-th pair-xor sub-symbol hypothesis
    against the left four LLRs; t2[i] the even sub-symbol hypothesis against
    the right four. The full-symbol penalty is t1[v] + t2[e].
    """
    a = np.asarray(llrs, dtype=np.float64)
    if a.shape[-1] != LEAF_SPAN:
        raise ValueError(f"expected {LEAF_SPAN} leaf LLRs, got {a.shape[-1]}")
    cw4 = _leaf_tables(4)[1].astype(np.float64)

    def half(x):
        # penalty(i) = sum(|x| over sign mismatches) = sum(relu(-x)) + cw[i] . x
        return _relu(-x).sum(axis=-1)[..., None] + x @ cw4.T

    return half(a[..., :4]), half(a[..., 4:])


def _aml_candidates(t1, t2, plan: _ExpandPlan, q: int, stats: ExpansionStats | None = None):
    """Top-q (penalty, symbol) candidates per path from half-symbol tables.

    Exact: for each FD-pair assignment the best min(q, 2^gamma) entries of
    each half table generate every sum that can reach the global top q.
    """
    G, F = plan.group_free.shape
    k = min(q, F)
    t1g = t1[..., plan.group_free]  # (..., G, F)
    t2g = t2[..., plan.group_free]
    if k < F:
        o1 = np.argsort(t1g, axis=-1, kind="stable")[..., :k]
        o2 = np.argsort(t2g, axis=-1, kind="stable")[..., :k]
        t1s = np.take_along_axis(t1g, o1, axis=-1)
        t2s = np.take_along_axis(t2g, o2, axis=-1)
        if stats is not None:
            stats.record_sort(F, k, 2 * G)
    else:
        o1 = o2 = np.broadcast_to(np.arange(F), t1g.shape)
        t1s, t2s = t1g, t2g
    pen = t1s[..., :, None] + t2s[..., None, :]  # (..., G, k, k)
    if stats is not None:
        stats.step2_sums += G * k * k
    g_idx = np.arange(G)[:, None, None]
    sym = plan.sym_table[g_idx, o1[..., :, None], o2[..., None, :]]
    C = G * k * k
    pen = pen.reshape(pen.shape[:-3] + (C,))
    sym = sym.reshape(sym.shape[:-3] + (C,))
    q_eff = min(q, C)
    # candidate order: (penalty, symbol value)
    by_sym = np.argsort(sym, axis=-1, kind="stable")
    pen = np.take_along_axis(pen, by_sym, axis=-1)
    sym = np.take_along_axis(sym, by_sym, axis=-1)
    by_pen = np.argsort(pen, axis=-1, kind="stable")[..., :q_eff]
    if stats is not None and C > q_eff:
        stats.record_sort(C, q_eff, 1)
    return (np.take_along_axis(pen, by_pen, axis=-1),
            np.take_along_axis(sym, by_pen, axis=-1))


def aml_expand_prune(path_metrics, leaf_llrs, pattern: FrozenPattern, q: int, L: int,
                     stats: ExpansionStats | None = None):
    """Expand paths over one mixed-pattern symbol and keep the best L.

    First stage: per path, the divide-and-conquer unit keeps its q best
    (penalty, symbol) candidates. Second stage: the L smallest accumulated
    metrics over all (path, candidate) pairs survive, ties ordered by
    (metric, path index, symbol value).

    Returns (parents, symbols, metrics); a leading batch axis mirrors the
    input (path_metrics may be (P,) or (B, P)).
    """
    if pattern.kind is not NodeKind.RATE_R2:
        raise ValueError("pattern must classify as a mixed (rate-R-2) node")
    if q < 1:
        raise ValueError("q must be >= 1")
    pm = np.asarray(path_metrics, dtype=np.float64)
    single = pm.ndim == 1
    pm = np.atleast_2d(pm)
    llr = np.asarray(leaf_llrs, dtype=np.float64).reshape(pm.shape + (pattern.M,))
    t1, t2 = leaf_metrics_rcc(llr)
    pen, sym = _aml_candidates(t1, t2, _expand_plan(pattern.mask), q, stats)
    total = pm[:, :, None] + pen
    B, P, C = total.shape
    flat = total.reshape(B, P * C)
    keep = min(L, P * C)
    order = np.argsort(flat, axis=1, kind="stable")[:, :keep]
    parents = order // C
    symbols = np.take_along_axis(sym.reshape(B, P * C), order, axis=1)
    metrics = np.take_along_axis(flat, order, axis=1)
    if single:
        return parents[0], symbols[0], metrics[0]
    return parents, symbols, metrics


# ---------------------------------------------------------------------------
# Other leaf expansions


def rate0_penalty(alpha):
    """Penalty of the all-zero hypothesis: sum of |llr| over negatives."""
    a = np.asarray(alpha, dtype=np.float64)
    return _relu(-a).sum(axis=-1)


def repetition_candidates(alpha):
    """(penalties, symbols) for the all-zero / all-one hypotheses."""
    a = np.asarray(alpha, dtype=np.float64)
    pens = np.stack([_relu(-a).sum(axis=-1), _relu(a).sum(axis=-1)], axis=-1)
    return pens, np.array([0, 1], dtype=np.int64)


def rate1_candidates(alpha):
    """(penalties, symbols) for the hard decision and flips of the two least
    reliable positions; candidate order is the enumeration order."""
    a = np.asarray(alpha, dtype=np.float64)
    M = a.shape[-1]
    absa = np.abs(a)
    h = hard_decision(a)
    o = np.argsort(absa, axis=-1, kind="stable")[..., :2]
    m1 = np.take_along_axis(absa, o[..., 0:1], axis=-1)[..., 0]
    m2 = np.take_along_axis(absa, o[..., 1:2], axis=-1)[..., 0]
    pens = np.stack([np.zeros_like(m1), m1, m2, m1 + m2], axis=-1)
    w = 1 << np.arange(M - 1, -1, -1)
    packed = (h.astype(np.int64) * w).sum(axis=-1)
    b1 = np.take_along_axis(np.broadcast_to(w, h.shape), o[..., 0:1], axis=-1)[..., 0]
    b2 = np.take_along_axis(np.broadcast_to(w, h.shape), o[..., 1:2], axis=-1)[..., 0]
    cw_vals = np.stack([packed, packed ^ b1, packed ^ b2, packed ^ b1 ^ b2], axis=-1)
    syms = _sym_of_codeword(M)[cw_vals]
    return pens, syms


# ---------------------------------------------------------------------------
# Schedule (tree plan)


class _Leaf:
    __slots__ = ("start", "span", "kind", "plan", "fallback")

    def __init__(self, start, span, kind, plan=None, fallback=None):
        self.start, self.span, self.kind, self.plan = start, span, kind, plan
        # bit-serial subtree used where classic SC semantics are required
        self.fallback = fallback


class _Branch:
    __slots__ = ("start", "span", "left", "right")

    def __init__(self, start, span, left, right):
        self.start, self.span, self.left, self.right = start, span, left, right


_SCHEDULES = ("fast", "dnc", "bitwise")


@lru_cache(maxsize=64)
def _build_tree(mask_bytes: bytes, schedule: str):
    mask = np.frombuffer(mask_bytes, dtype=np.uint8)

    def bitwise(start, span):
        if span == 1:
            return _Leaf(start, 1, "bit_frozen" if mask[start] else "bit_info")
        half = span // 2
        return _Branch(start, span, bitwise(start, half), bitwise(start + half, half))

    def build(start, span):
        sub = tuple(int(b) for b in mask[start : start + span])
        if span == 1:
            return _Leaf(start, 1, "bit_frozen" if sub[0] else "bit_info")
        if schedule == "fast" and span == 16 and classify_node(sub) is NodeKind.REPETITION:
            return _Leaf(start, 16, "rep16")
        if span == LEAF_SPAN and schedule != "bitwise":
            fp = pattern_plan(sub)
            if schedule == "fast":
                kind = {
                    NodeKind.RATE0: "rate0",
                    NodeKind.RATE1: "rate1",
                    NodeKind.REPETITION: "rep",
                    NodeKind.RATE_R2: "aml",
                }.get(fp.kind)
                if kind == "aml":
                    # the joint symbol decision beats greedy SC on these
                    # patterns; classic-SC contexts use the bit-serial form
                    return _Leaf(start, span, kind, _expand_plan(sub),
                                 fallback=bitwise(start, span))
                if kind is not None:
                    return _Leaf(start, span, kind)
            else:  # dnc
                if fp.kind is NodeKind.RATE0:
                    return _Leaf(start, span, "rate0")
                if not fp.has_df_pair:
                    return _Leaf(start, span, "aml", _expand_plan(sub))
        half = span // 2
        return _Branch(start, span, build(start, half), build(start + half, half))

    return build(0, len(mask))


# ---------------------------------------------------------------------------
# Batched list engine


class _ListDecoder:
    """Decodes a batch of frames, each with list size L, sharing one schedule.

    Holds per-call state between decode() entry and exit, so one instance
    must not run concurrent decodes; distinct instances share nothing mutable
    (the public decode/decode_batch helpers build a fresh instance per call).
    """

    def __init__(self, code: PolarCode, L: int, q: int | None = None,
                 theta: int | None = None, schedule: str = "fast"):
        if schedule not in _SCHEDULES:
            raise ValueError(f"schedule must be one of {_SCHEDULES}")
        if L < 1:
            raise ValueError("list size must be >= 1")
        self.code = code
        self.L = L
        self.q = min(L, 1 << LEAF_SPAN) if q is None else q
        if not 1 <= self.q <= 1 << LEAF_SPAN:
            raise ValueError("q must lie in 1..2^M")
        self.theta = code.N if theta is None else theta
        if not 0 <= self.theta <= code.N:
            raise ValueError("theta must lie in 0..N")
        self.schedule = schedule
        self.tree = _build_tree(code.frozen_mask.tobytes(), schedule)

    # -- prune-log bookkeeping ------------------------------------------------

    def _now(self):
        return len(self._log)

    def _mat(self, arr, stamp):
        """View of `arr` (written at `stamp`) in the current path order."""
        log = self._log
        if stamp == len(log):
            return arr
        rows = self._rows
        perm = log[-1]
        for P in reversed(log[stamp:-1]):
            perm = P[rows, perm]
        return arr[rows, perm]

    def _select(self, pens, syms, use_list, start, span, table_key):
        """Prune (or per-path pick) candidates; returns selected symbols."""
        B, A, C = pens.shape
        if syms.ndim == 1:
            syms = np.broadcast_to(syms, (B, A, C))
        if use_list:
            total = self._pm[:, :, None] + pens
            flat = total.reshape(B, A * C)
            keep = min(self.L, A * C)
            order = np.argsort(flat, axis=1, kind="stable")[:, :keep]
            parent = order // C
            new_pm = flat[self._rows, order]
            sym_sel = syms.reshape(B, A * C)[self._rows, order]
        else:
            cand = pens.argmin(axis=2)
            parent = np.broadcast_to(np.arange(A), (B, A))
            cols = np.broadcast_to(np.arange(A), (B, A))
            new_pm = self._pm + pens[self._rows, cols, cand]
            sym_sel = syms[self._rows, cols, cand]
        if self._trace is not None:
            self._trace.append((self._pm.copy(), parent, new_pm.copy()))
        self._pm = new_pm
        self._log.append(parent)
        self._events.append((start, span, table_key, sym_sel))
        return sym_sel

    # -- tree walk -------------------------------------------------------------

    def _leaf(self, node: _Leaf, alpha):
        use_list = node.start < self.theta
        kind = node.kind
        if kind in ("rate0", "bit_frozen"):
            self._pm = self._pm + rate0_penalty(alpha)
            return np.zeros(alpha.shape, dtype=np.uint8)
        if kind == "bit_info":
            a0 = alpha[..., 0]
            pens = np.stack([_relu(-a0), _relu(a0)], axis=-1)
            sym = self._select(pens, np.array([0, 1]), use_list, node.start, 1, "bit")
            return sym.astype(np.uint8)[..., None]
        if kind == "rep":
            pens, syms = repetition_candidates(alpha)
            sym = self._select(pens, syms, use_list, node.start, node.span, "leaf8")
        elif kind == "rep16":
            pens, syms = repetition_candidates(alpha)
            sym = self._select(pens, syms, use_list, node.start, node.span, "rep16")
        elif kind == "rate1":
            pens, syms = rate1_candidates(alpha)
            sym = self._select(pens, syms, use_list, node.start, node.span, "leaf8")
        else:  # aml
            t1, t2 = leaf_metrics_rcc(alpha)
            pens, syms = _aml_candidates(t1, t2, node.plan, self.q)
            sym = self._select(pens, syms, use_list, node.start, node.span, "leaf8")
        return _codeword_table("rep16" if kind == "rep16" else "leaf8")[sym]

    def _walk(self, node, alpha, stamp):
        if isinstance(node, _Leaf):
            if node.fallback is not None and (self.L == 1 or node.start >= self.theta):
                # classic SC semantics: list size one, or the per-path
                # continuation after the mode switching point
                return self._walk(node.fallback, alpha, stamp)
            return self._leaf(node, self._mat(alpha, stamp)), self._now()
        a = self._mat(alpha, stamp)
        left_llr = f_llr(a[..., 0::2], a[..., 1::2])
        c_left, s_left = self._walk(node.left, left_llr, self._now())
        a = self._mat(alpha, stamp)
        cl = self._mat(c_left, s_left)
        right_llr = a[..., 1::2] + (1.0 - 2.0 * cl.astype(np.float64)) * a[..., 0::2]
        c_right, _ = self._walk(node.right, right_llr, self._now())
        cl = self._mat(c_left, s_left)
        c = np.empty(c_right.shape[:-1] + (node.span,), dtype=np.uint8)
        c[..., 0::2] = cl ^ c_right
        c[..., 1::2] = c_right
        return c, self._now()

    # -- public ----------------------------------------------------------------

    def decode(self, llrs, crc: CrcSpec | None = None, return_paths=False, pm_trace=None):
        llrs = np.asarray(llrs, dtype=np.float64)
        if llrs.ndim == 1:
            llrs = llrs[None, :]
        if llrs.shape[1] != self.code.N:
            raise ValueError("LLR length does not match the code")
        B = llrs.shape[0]
        alpha = np.clip(llrs, -BEC_LLR_CLAMP, BEC_LLR_CLAMP)[:, None, :]
        self._rows = np.arange(B)[:, None]
        self._pm = np.zeros((B, 1))
        self._log = []
        self._events = []
        self._trace = pm_trace
        self._walk(self.tree, alpha, 0)
        u_all = self._reconstruct(B)
        pm_all = self._pm
        self._log = self._events = None
        return self._pick_winner(u_all, pm_all, crc, return_paths)

    def _reconstruct(self, B):
        A = self._pm.shape[1]
        u = np.zeros((B, A, self.code.N), dtype=np.uint8)
        perm = np.broadcast_to(np.arange(A), (B, A)).copy()
        rows = self._rows
        for (start, span, key, sym), P in zip(reversed(self._events), reversed(self._log)):
            sym_now = sym[rows, perm]
            u[:, :, start : start + span] = _u_bits_table(key)[sym_now]
            perm = P[rows, perm]
        return u

    def _pick_winner(self, u_all, pm_all, crc, return_paths):
        B, A, _ = u_all.shape
        if crc is None:
            win = pm_all.argmin(axis=1)
            ok = None
        else:
            info = u_all[:, :, self.code.info_positions]
            passing = crc_check_rows(info.reshape(B * A, -1), crc).reshape(B, A)
            masked = np.where(passing, pm_all, np.inf)
            has = passing.any(axis=1)
            win = np.where(has, masked.argmin(axis=1), pm_all.argmin(axis=1))
            ok = has
        rows = np.arange(B)
        u = u_all[rows, win]
        pm = pm_all[rows, win]
        if return_paths:
            return u, pm, ok, u_all, pm_all
        return u, pm, ok


def decode_frames(code: PolarCode, llrs, *, L: int, q: int | None = None,
                  theta: int | None = None, schedule: str = "fast",
                  crc: CrcSpec | None = None, return_paths=False, pm_trace=None):
    """Decode a (B, N) batch of independent frames with one list config."""
    dec = _ListDecoder(code, L, q, theta, schedule)
    return dec.decode(llrs, crc=crc, return_paths=return_paths, pm_trace=pm_trace)


# ---------------------------------------------------------------------------
# Operating modes


@dataclass
class ModeConfig:
    """Decoder operating point: P parallel frames x list size L.

    Named modes fix (P, L): mode4 = (1, 4), mode2 = (2, 2), mode1 = (4, 1);
    mode4_1 runs (1, 4) for bits up to theta, then each surviving path
    continues independently (per-path best candidate, no cross-path pruning)
    and the best final metric wins (CRC-passing preferred). q defaults to
    min(L, 2^M); 'custom' leaves (P, L) free.
    """

    mode: str = "mode4"
    P: int = 1
    L: int = 4
    q: int | None = None
    theta: int | None = None
    schedule: str = "fast"
    nd: int = 4

    _SHAPES = {"mode4": (1, 4), "mode2": (2, 2), "mode1": (4, 1), "mode4_1": (1, 4)}

    def __post_init__(self):
        if self.mode not in (*self._SHAPES, "custom"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.mode in self._SHAPES and (self.P, self.L) != self._SHAPES[self.mode]:
            raise ValueError(f"{self.mode} requires (P, L) = {self._SHAPES[self.mode]}")
        if self.mode == "custom":
            self.nd = max(self.nd, self.P * self.L)
        if self.P * self.L > self.nd:
            raise ValueError("P * L exceeds the path budget nd")
        if self.mode == "mode4_1" and self.theta is None:
            raise ValueError("mode4_1 requires a switching point theta")
        if self.q is not None and self.q < 1:
            raise ValueError("q must be >= 1")
        if self.schedule not in _SCHEDULES:
            raise ValueError(f"schedule must be one of {_SCHEDULES}")

    @classmethod
    def mode4(cls, **kw):
        return cls(mode="mode4", P=1, L=4, **kw)

    @classmethod
    def mode2(cls, **kw):
        return cls(mode="mode2", P=2, L=2, **kw)

    @classmethod
    def mode1(cls, **kw):
        return cls(mode="mode1", P=4, L=1, **kw)

    @classmethod
    def mode4_1(cls, theta: int, **kw):
        return cls(mode="mode4_1", P=1, L=4, theta=theta, **kw)

    @classmethod
    def custom(cls, L: int, q: int | None = None, P: int = 1, **kw):
        return cls(mode="custom", P=P, L=L, q=q, **kw)

    @property
    def effective_theta(self) -> int | None:
        return self.theta if self.mode in ("mode4_1", "custom") else None


@dataclass
class DecodeResult:
    """One decoded frame: full input estimate, info bits, CRC flag, metric."""

    u_hat: np.ndarray
    info_bits: np.ndarray
    crc_passed: bool | None
    path_metric: float

    def payload(self, crc_width: int) -> np.ndarray:
        return self.info_bits[: len(self.info_bits) - crc_width]


def decode(code: PolarCode, llrs, cfg: ModeConfig, crc: CrcSpec | None = None) -> DecodeResult:
    """Decode one received word under the given mode configuration."""
    llrs = np.asarray(llrs, dtype=np.float64)
    if llrs.ndim != 1 or len(llrs) != code.N:
        raise ValueError("llrs must be one length-N vector")
    if cfg.effective_theta is not None and cfg.effective_theta > code.N:
        raise ValueError("theta exceeds the code length")
    u, pm, ok = decode_frames(code, llrs[None, :], L=cfg.L, q=cfg.q,
                              theta=cfg.effective_theta, schedule=cfg.schedule, crc=crc)
    flag = None if ok is None else bool(ok[0])
    return DecodeResult(u[0], u[0][code.info_positions], flag, float(pm[0]))


def decode_batch(code: PolarCode, words, cfg: ModeConfig,
                 crc: CrcSpec | None = None) -> list[DecodeResult]:
    """Decode cfg.P received words independently, order preserving."""
    words = np.asarray(words, dtype=np.float64)
    if words.ndim != 2 or words.shape[0] != cfg.P:
        raise ValueError(f"expected {cfg.P} words")
    if words.shape[1] != code.N:
        raise ValueError("word length does not match the code")
    u, pm, ok = decode_frames(code, words, L=cfg.L, q=cfg.q,
                              theta=cfg.effective_theta, schedule=cfg.schedule, crc=crc)
    out = []
    for i in range(cfg.P):
        flag = None if ok is None else bool(ok[i])
        out.append(DecodeResult(u[i], u[i][code.info_positions], flag, float(pm[i])))
    return out
