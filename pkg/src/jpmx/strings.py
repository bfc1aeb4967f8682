"""Jumbled pattern matching indexes for plain binary strings.

The index stores, for every window length i, the minimum and maximum
number of 1s over all length-i windows.  By the interval property the
achievable counts form a contiguous range, so (i, j) occurs iff
min(i) <= j <= max(i).

Two builders are provided: a naive one that runs one sliding pass per
length, and a packed one that processes window starts a whole chunk at
a time using the precomputed pair tables (the shift table accounts for
all in-chunk start offsets in one lookup).  The split-window extrema
functions answer the same question restricted to windows that must
cover a fixed position; they power the tree and grammar merges.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bitseq import BitSeq, StepArray, ChunkTable, build_chunk_tables

_NEG = -(1 << 60)
_POS = 1 << 60

# below this total size a pure-python slide beats numpy call overhead
_PACKED_SMALL_CUTOFF = 64
# direct short-side convolution wins below this short-side length
_CONV_CUTOFF = 48


def as_bitseq(s) -> BitSeq:
    if isinstance(s, BitSeq):
        return s
    if isinstance(s, str):
        return BitSeq.from_str(s)
    return BitSeq.from_bits(s)


class MinMaxIndex:
    """Per-length (min ones, max ones) pairs, kept as two StepArrays."""

    __slots__ = ("n", "min_arr", "max_arr")

    def __init__(self, n: int, min_arr: StepArray, max_arr: StepArray):
        self.n = n
        self.min_arr = min_arr
        self.max_arr = max_arr

    @classmethod
    def from_values(cls, min_vals, max_vals) -> "MinMaxIndex":
        mn = np.asarray(min_vals, dtype=np.int64)
        mx = np.asarray(max_vals, dtype=np.int64)
        if mn.shape != mx.shape or mn.ndim != 1 or mn.size < 2:
            raise ValueError("need matching value arrays over sizes 0..n")
        n = mn.size - 1
        if mn[0] != 0 or mx[0] != 0:
            raise ValueError("index must start at (0, 0)")
        if mn[n] != mx[n]:
            raise ValueError("length-n extrema must coincide (the whole structure)")
        if (mn > mx).any():
            raise ValueError("min exceeds max")
        if (mx > np.arange(n + 1)).any():
            raise ValueError("ones count exceeds window size")
        return cls(n, StepArray.from_values(mn), StepArray.from_values(mx))

    def min_at(self, i: int) -> int:
        return self.min_arr.value(i)

    def max_at(self, i: int) -> int:
        return self.max_arr.value(i)

    def query(self, i: int, j: int) -> bool:
        """True iff the structure has a piece of size i with exactly j ones."""
        if not 0 <= i <= self.n:
            return False
        return self.min_arr.value(i) <= j <= self.max_arr.value(i)

    def to_lists(self) -> tuple[list[int], list[int]]:
        return self.min_arr.to_list(), self.max_arr.to_list()

    def __eq__(self, other) -> bool:
        return (isinstance(other, MinMaxIndex) and self.n == other.n
                and self.min_arr == other.min_arr and self.max_arr == other.max_arr)

    def __repr__(self) -> str:
        return f"MinMaxIndex(n={self.n})"


def query(idx: MinMaxIndex, i: int, j: int) -> bool:
    """Module-level alias for MinMaxIndex.query."""
    return idx.query(i, j)


@dataclass(frozen=True)
class SplitString:
    """A string left + [mid] + right whose windows must cover the mid bit."""

    left: BitSeq
    mid: int
    right: BitSeq

    def __post_init__(self):
        if self.mid not in (0, 1):
            raise ValueError("mid must be a single 0/1 bit")

    @property
    def split_position(self) -> int:
        return len(self.left)

    def __len__(self) -> int:
        return len(self.left) + 1 + len(self.right)


def window_minmax_naive(s, i: int) -> tuple[int, int]:
    """Exact (min ones, max ones) over all length-i windows, one slide."""
    seq = as_bitseq(s)
    n = len(seq)
    if not 1 <= i <= n:
        raise IndexError(f"window length {i} out of range [1, {n}]")
    cum = _prefix_ones(seq.as_array())
    w = cum[i:] - cum[:-i]
    return int(w.min()), int(w.max())


def build_minmax_naive(s) -> MinMaxIndex:
    """Index by sliding a window once per length (the quadratic baseline)."""
    seq = as_bitseq(s)
    n = len(seq)
    if n < 1:
        raise ValueError("cannot index an empty string")
    cum = _prefix_ones(seq.as_array())
    mn = np.zeros(n + 1, dtype=np.int64)
    mx = np.zeros(n + 1, dtype=np.int64)
    for i in range(1, n + 1):
        w = cum[i:] - cum[: n + 1 - i]
        mn[i] = w.min()
        mx[i] = w.max()
    return MinMaxIndex.from_values(mn, mx)


def build_minmax_packed(s, table: ChunkTable | None = None, *,
                        small_cutoff: int = _PACKED_SMALL_CUTOFF) -> MinMaxIndex:
    """Index via chunk-table stepping; identical answers to the naive builder.

    Window starts are processed one aligned chunk at a time: a single
    pair-table lookup yields the best start offset within the chunk, so
    each length costs ~n/s vector elements instead of n.  Starts in the
    final partial chunk fall back to single-step sliding (window shapes
    there are irregular).  With no table given, the chunk width adapts
    to the input size.
    """
    seq = as_bitseq(s)
    n = len(seq)
    if n < 1:
        raise ValueError("cannot index an empty string")
    if table is None:
        table = build_chunk_tables(10 if n >= (1 << 15) else 8)
    cw = table.chunk_bits
    if n < small_cutoff:
        mn, mx = _minmax_sliding_py(seq)
        return MinMaxIndex.from_values(mn, mx)
    if not table.has_pair_tables:
        # wide chunks have no pair tables; degrade to per-length sliding
        return build_minmax_naive(seq)

    bits = seq.as_array()
    cum = _prefix_ones(bits)
    size = 1 << cw
    bw = _chunk_ids(np.concatenate([bits, np.zeros(cw, dtype=np.uint8)]), cw, n + 1)
    key_base = bw[::cw].astype(np.int64) * size
    cum_aligned = cum[::cw]
    pair_max = table.pair_max.ravel()
    pair_min = table.pair_min.ravel()

    mn = np.zeros(n + 1, dtype=np.int64)
    mx = np.zeros(n + 1, dtype=np.int64)
    for length in range(1, n + 1):
        full = (n - length) // cw  # aligned chunks whose starts are all valid
        best_max, best_min = _NEG, _POS
        if full > 0:
            keys = key_base[:full] + bw[length::cw][:full]
            wd = cum[length::cw][:full] - cum_aligned[:full]
            g = pair_max[keys] + wd
            best_max = g.max()
            g = pair_min[keys] + wd
            best_min = g.min()
        q0 = full * cw
        tail = cum[q0 + length: n + 1] - cum[q0: n + 1 - length]
        mx[length] = max(best_max, tail.max())
        mn[length] = min(best_min, tail.min())
    return MinMaxIndex.from_values(mn, mx)


def split_window_extrema(sv: SplitString, table: ChunkTable | None = None,
                         mode: str = "max") -> StepArray:
    """Extremum ones over length-i windows covering the split position.

    Defined for i = 1 .. len(sv); equals mid plus the best split of the
    remaining i-1 positions between a suffix of ``left`` and a prefix of
    ``right`` (a max-plus convolution of the two anchored count arrays).
    """
    left = sv.left.as_array()
    right = sv.right.as_array()
    va = _prefix_ones(left[::-1])  # va[l] = ones among the last l of left
    vb = _prefix_ones(right)
    conv = extremum_conv(va, vb, mode, table)
    return StepArray.from_values(conv + sv.mid, lo=1)


def split_edge_extrema(x, y, table: ChunkTable | None = None,
                       mode: str = "max") -> StepArray:
    """Extremum ones over windows of x∘y that straddle the boundary.

    Windows must contain both the last position of x and the first of y,
    so they split into a nonempty suffix of x and a nonempty prefix of y;
    defined for lengths 2 .. |x|+|y|.
    """
    xs = as_bitseq(x)
    ys = as_bitseq(y)
    if len(xs) < 1 or len(ys) < 1:
        raise ValueError("both sides of the edge must be nonempty")
    va = _prefix_ones(xs.as_array()[::-1])[1:]  # suffix lengths 1..|x|
    vb = _prefix_ones(ys.as_array())[1:]
    conv = extremum_conv(va, vb, mode, table)
    return StepArray.from_values(conv, lo=2)


# ---------------------------------------------------------------------------
# extremum (max-plus / min-plus) convolution of unit-step arrays


def extremum_conv(va: np.ndarray, vb: np.ndarray, mode: str,
                  table: ChunkTable | None = None) -> np.ndarray:
    """out[k] = extremum over l+r=k of va[l] + vb[r].

    Both inputs must be monotone nondecreasing with unit steps.  With a
    chunk table and big enough inputs, the shorter side is consumed a
    chunk at a time through the conv pair table (cost |va|*|vb|/s);
    otherwise a direct short-side loop is used.
    """
    va = np.asarray(va, dtype=np.int64)
    vb = np.asarray(vb, dtype=np.int64)
    if va.size == 0 or vb.size == 0:
        raise ValueError("convolution inputs must be nonempty")
    if va.size > vb.size:
        va, vb = vb, va
    if (table is not None and table.has_pair_tables
            and va.size >= _CONV_CUTOFF and va.size >= 2 * table.chunk_bits):
        return _conv_chunked(va, vb, mode, table)
    return _conv_direct(va, vb, mode)


def _conv_direct(va: np.ndarray, vb: np.ndarray, mode: str) -> np.ndarray:
    na, nb = va.size, vb.size
    if mode == "max":
        out = np.full(na + nb - 1, _NEG, dtype=np.int64)
        for l in range(na):
            np.maximum(out[l: l + nb], va[l] + vb, out=out[l: l + nb])
    else:
        out = np.full(na + nb - 1, _POS, dtype=np.int64)
        for l in range(na):
            np.minimum(out[l: l + nb], va[l] + vb, out=out[l: l + nb])
    return out


def _conv_chunked(va: np.ndarray, vb: np.ndarray, mode: str,
                  table: ChunkTable) -> np.ndarray:
    cw = table.chunk_bits
    size = 1 << cw
    la, lb = va.size - 1, vb.size - 1
    k_top = la + lb
    is_max = mode == "max"

    inc_a = np.diff(va).astype(np.uint8)
    inc_b = np.diff(vb).astype(np.uint8)
    # padding keeps out-of-domain candidates dominated by real ones:
    # for max the arrays continue flat (0-steps), for min with 1-steps,
    # and entering from the left of vb is padded the opposite way.
    fill_tail = 0 if is_max else 1
    fill_head = 1 if is_max else 0
    n_chunks = la // cw + 1
    a_pad = np.full(n_chunks * cw, fill_tail, dtype=np.uint8)
    a_pad[:la] = inc_a
    a_ids = (a_pad.reshape(n_chunks, cw).astype(np.int64)
             @ (1 << np.arange(cw, dtype=np.int64)))

    b_pad = np.concatenate([
        np.full(cw, fill_head, dtype=np.uint8), inc_b,
        np.full(cw, fill_tail, dtype=np.uint8)])
    # chunk ending at vb-index j covers inc_b[j-cw .. j-1] = b_pad window
    # starting at j; window count lb + cw + 1
    bw = _chunk_ids(b_pad, cw, lb + cw + 1)
    vbp = np.concatenate([
        vb, vb[lb] + (np.arange(1, cw + 1, dtype=np.int64) if not is_max else
                      np.zeros(cw, dtype=np.int64))])

    ct = table.conv_pair_max if is_max else table.conv_pair_min
    out = np.full(k_top + 1, _NEG if is_max else _POS, dtype=np.int64)
    update = np.maximum if is_max else np.minimum
    for c in range(n_chunks):
        l0 = c * cw
        k_lo = l0
        k_hi = min(k_top, l0 + lb + cw - 1)
        if k_lo > k_hi:
            break
        js = slice(k_lo - l0, k_hi - l0 + 1)  # j = k - l0
        cand = ct[a_ids[c]][bw[js]] + vbp[js]
        cand += va[l0]
        update(out[k_lo: k_hi + 1], cand, out=out[k_lo: k_hi + 1])
    return out


# ---------------------------------------------------------------------------
# helpers


def _prefix_ones(bits: np.ndarray) -> np.ndarray:
    cum = np.zeros(bits.size + 1, dtype=np.int64)
    np.cumsum(bits, out=cum[1:])
    return cum


def _chunk_ids(bits: np.ndarray, cw: int, count: int) -> np.ndarray:
    """ids[j] = integer of bits[j : j+cw] (LSB first), for j in [0, count)."""
    ids = np.zeros(count, dtype=np.int64)
    for t in range(cw):
        ids += bits[t: t + count].astype(np.int64) << t
    return ids


def _minmax_sliding_py(seq: BitSeq) -> tuple[list[int], list[int]]:
    """Scalar sliding pass per length; the small-input fallback path."""
    bits = seq.as_array().tolist()
    n = len(bits)
    mn = [0] * (n + 1)
    mx = [0] * (n + 1)
    for length in range(1, n + 1):
        c = sum(bits[:length])
        lo = hi = c
        for p in range(n - length):
            c += bits[p + length] - bits[p]
            if c < lo:
                lo = c
            elif c > hi:
                hi = c
        mn[length] = lo
        mx[length] = hi
    return mn, mx
