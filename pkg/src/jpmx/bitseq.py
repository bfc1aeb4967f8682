"""Bit sequences, constant-time rank, unit-step array encoding, chunk tables.

Everything here is immutable after construction and safe for concurrent
reads.  These are the shared primitives: every index builder in the
package stores its per-length extrema as a StepArray (a monotone array
with {0,1} increments kept as a bit string and decoded by rank), and the
packed window/convolution algorithms run off the precomputed ChunkTable.
"""

from __future__ import annotations

import numpy as np

_POP8 = np.array([bin(i).count("1") for i in range(256)], dtype=np.uint32)


class BitSeq:
    """Packed sequence of 0/1 values, LSB-first within each byte."""

    __slots__ = ("length", "buf")

    def __init__(self, length: int, buf: bytes):
        if length < 0:
            raise ValueError("negative length")
        if len(buf) != (length + 7) // 8:
            raise ValueError("buffer size does not match length")
        self.length = length
        self.buf = bytes(buf)

    @classmethod
    def from_bits(cls, bits) -> "BitSeq":
        arr = np.asarray(list(bits) if not isinstance(bits, np.ndarray) else bits,
                         dtype=np.uint8)
        if arr.size and (arr.max() > 1):
            raise ValueError("bits must be 0 or 1")
        return cls.from_array(arr)

    @classmethod
    def from_array(cls, arr: np.ndarray) -> "BitSeq":
        arr = np.asarray(arr, dtype=np.uint8)
        packed = np.packbits(arr, bitorder="little")
        return cls(int(arr.size), packed.tobytes())

    @classmethod
    def from_str(cls, s: str) -> "BitSeq":
        s = s.strip()
        if s and set(s) - {"0", "1"}:
            raise ValueError("bit string may only contain 0 and 1")
        return cls.from_array(np.frombuffer(s.encode(), dtype=np.uint8) - ord("0")
                              if s else np.zeros(0, dtype=np.uint8))

    def as_array(self) -> np.ndarray:
        """Unpacked uint8 array of 0/1 values."""
        raw = np.frombuffer(self.buf, dtype=np.uint8)
        return np.unpackbits(raw, bitorder="little")[: self.length]

    def get(self, i: int) -> int:
        if not 0 <= i < self.length:
            raise IndexError(f"bit index {i} out of range [0, {self.length})")
        return (self.buf[i >> 3] >> (i & 7)) & 1

    def ones(self) -> int:
        return int(_POP8[np.frombuffer(self.buf, dtype=np.uint8)].sum())

    def __len__(self) -> int:
        return self.length

    def __eq__(self, other) -> bool:
        return (isinstance(other, BitSeq) and self.length == other.length
                and self.buf == other.buf)

    def __hash__(self) -> int:
        return hash((self.length, self.buf))

    def __repr__(self) -> str:
        if self.length <= 64:
            return f"BitSeq({''.join(str(b) for b in self.as_array())!r})"
        return f"BitSeq(length={self.length})"


class RankIndex:
    """rank(p) = number of 1s among positions [0, p) of a BitSeq.

    Directory layout: one cumulative count per byte of the source, so a
    query reads one directory entry plus one table lookup.
    """

    __slots__ = ("source", "_cum")

    def __init__(self, source: BitSeq):
        self.source = source
        raw = np.frombuffer(source.buf, dtype=np.uint8)
        cum = np.zeros(raw.size + 1, dtype=np.int64)
        np.cumsum(_POP8[raw], out=cum[1:])
        self._cum = cum

    def rank(self, p: int) -> int:
        if not 0 <= p <= self.source.length:
            raise IndexError(f"rank position {p} out of range [0, {self.source.length}]")
        rest = p & 7
        base = int(self._cum[p >> 3])
        if rest:
            base += int(_POP8[self.source.buf[p >> 3] & ((1 << rest) - 1)])
        return base


def rank(idx: RankIndex, p: int) -> int:
    """Number of 1s in positions [0, p) of idx's source sequence."""
    return idx.rank(p)


class StepArray:
    """Monotone nondecreasing integers with unit steps, rank-decoded.

    ``steps`` holds the n increments, so the array has n+1 values over
    indices ``lo .. lo + n``; value(lo) = base and
    value(i) = base + (ones among the first i-lo step bits).  Indices
    outside the domain are undefined (callers treat them as -inf / +inf
    when merging).
    """

    __slots__ = ("base", "steps", "lo", "_rank")

    def __init__(self, base: int, steps: BitSeq, lo: int = 0):
        self.base = int(base)
        self.steps = steps
        self.lo = int(lo)
        self._rank = RankIndex(steps)

    @classmethod
    def from_values(cls, values, lo: int = 0) -> "StepArray":
        vals = np.asarray(values, dtype=np.int64)
        if vals.size == 0:
            raise ValueError("a StepArray needs at least one value")
        diffs = np.diff(vals)
        if diffs.size and (diffs.min() < 0 or diffs.max() > 1):
            raise ValueError("values must be nondecreasing with steps of 0 or 1")
        return cls(int(vals[0]), BitSeq.from_array(diffs.astype(np.uint8)), lo)

    @property
    def hi(self) -> int:
        return self.lo + self.steps.length

    def __len__(self) -> int:
        return self.steps.length + 1

    def value(self, i: int) -> int:
        if not self.lo <= i <= self.hi:
            raise IndexError(f"index {i} outside domain [{self.lo}, {self.hi}]")
        return self.base + self._rank.rank(i - self.lo)

    def to_values(self) -> np.ndarray:
        out = np.zeros(len(self), dtype=np.int64)
        np.cumsum(self.steps.as_array(), out=out[1:])
        out += self.base
        return out

    def to_list(self) -> list[int]:
        return self.to_values().tolist()

    def __eq__(self, other) -> bool:
        return (isinstance(other, StepArray) and self.lo == other.lo
                and self.base == other.base and self.steps == other.steps)

    def __hash__(self) -> int:
        return hash((self.base, self.lo, self.steps))

    def __repr__(self) -> str:
        if len(self) <= 32:
            return f"StepArray({self.to_list()}, lo={self.lo})"
        return f"StepArray(lo={self.lo}, hi={self.hi}, base={self.base})"


def step_array_value(a: StepArray, i: int) -> int:
    """Decoded value of a StepArray at index i."""
    return a.value(i)


class ChunkTable:
    """Precomputed per-chunk lookup tables for the packed algorithms.

    For chunk width s, the single-pattern tables have one row per s-bit
    pattern: ``pop`` (popcount) and ``pref`` (prefix popcounts, s+1
    entries).  For s <= 8 two pair-table families over all pattern pairs
    are added:

    * ``pair_max`` / ``pair_min``: extremum over in-chunk offsets r of
      (prefix ones of the entering chunk minus prefix ones of the
      leaving chunk) -- this is the shift table that moves a window by a
      whole chunk while accounting for all s intermediate offsets.
    * ``conv_pair_max`` / ``conv_pair_min``: extremum over split points
      u within a chunk of (prefix ones of one side's increments minus
      suffix ones of the other side's) -- used by the chunked max-plus
      convolution that powers the split-window merges.
    """

    __slots__ = ("chunk_bits", "pop", "pref",
                 "pair_max", "pair_min", "conv_pair_max", "conv_pair_min")

    def __init__(self, chunk_bits, pop, pref, pair_max, pair_min,
                 conv_pair_max, conv_pair_min):
        self.chunk_bits = chunk_bits
        self.pop = pop
        self.pref = pref
        self.pair_max = pair_max
        self.pair_min = pair_min
        self.conv_pair_max = conv_pair_max
        self.conv_pair_min = conv_pair_min

    @property
    def has_pair_tables(self) -> bool:
        return self.pair_max is not None


_TABLE_CACHE: dict[int, ChunkTable] = {}

# Pair tables take 2^(2s) bytes each; 8 bits is the cache-friendly limit.
PAIR_TABLE_MAX_BITS = 8


def build_chunk_tables(s: int) -> ChunkTable:
    """Build (and cache) the lookup tables for chunk width s, 1 <= s <= 16."""
    if not 1 <= s <= 16:
        raise ValueError(f"chunk width must be in [1, 16], got {s}")
    cached = _TABLE_CACHE.get(s)
    if cached is not None:
        return cached

    size = 1 << s
    patterns = np.arange(size, dtype=np.uint32)
    bits = ((patterns[:, None] >> np.arange(s)) & 1).astype(np.int16)  # (size, s)
    pref = np.zeros((size, s + 1), dtype=np.int16)
    np.cumsum(bits, axis=1, out=pref[:, 1:])
    pop = pref[:, s].copy()

    pair_max = pair_min = conv_pair_max = conv_pair_min = None
    if s <= PAIR_TABLE_MAX_BITS:
        # d[o, c, r] = pref_r(c) - pref_r(o) for r = 0..s-1
        d = pref[None, :, :s] - pref[:, None, :s]
        pair_max = d.max(axis=2).astype(np.int8)
        pair_min = d.min(axis=2).astype(np.int8)
        # suffix popcounts: suf[b, u] = ones among the last u bits
        # = pop - (ones among the first s-u bits)
        suf = pop[:, None] - pref[:, ::-1]
        # conv candidate over u = 0..s-1: pref_a(u) - suf_b(u)
        e = pref[:, None, :s] - suf[None, :, :s]
        conv_pair_max = e.max(axis=2).astype(np.int8)
        conv_pair_min = e.min(axis=2).astype(np.int8)

    table = ChunkTable(s, pop.astype(np.int32), pref.astype(np.int32),
                       pair_max, pair_min, conv_pair_max, conv_pair_min)
    _TABLE_CACHE[s] = table
    return table


def default_chunk_table() -> ChunkTable:
    return build_chunk_tables(8)


def pointwise_max(a: StepArray, b: StepArray, extend: bool = False) -> StepArray:
    """Elementwise maximum of two StepArrays over a shared index domain.

    Domains must match exactly unless ``extend`` is set, in which case
    the shorter array is continued by its last value.
    """
    return _pointwise(a, b, extend, np.maximum)


def pointwise_min(a: StepArray, b: StepArray, extend: bool = False) -> StepArray:
    """Elementwise minimum; same domain rules as pointwise_max."""
    return _pointwise(a, b, extend, np.minimum)


def _pointwise(a: StepArray, b: StepArray, extend: bool, op) -> StepArray:
    if a.lo != b.lo:
        raise ValueError(f"domain mismatch: lo {a.lo} vs {b.lo}")
    va, vb = a.to_values(), b.to_values()
    if va.size != vb.size:
        if not extend:
            raise ValueError(f"domain mismatch: lengths {va.size} vs {vb.size} "
                             "(pass extend=True to continue the shorter by its last value)")
        if va.size < vb.size:
            va = np.concatenate([va, np.full(vb.size - va.size, va[-1])])
        else:
            vb = np.concatenate([vb, np.full(va.size - vb.size, vb[-1])])
    return StepArray.from_values(op(va, vb), lo=a.lo)


def shift_add(a: StepArray, offset: int, add: int, domain: int | None = None) -> StepArray:
    """Reindex a StepArray: result(i) = add + a(i - offset).

    The result's domain starts at ``a.lo + offset``; entries below that
    are undefined (callers treat them as -inf when max-merging).  With
    ``domain`` set, the result is truncated so its top index does not
    exceed it.
    """
    if offset < 0:
        raise ValueError("offset must be nonnegative")
    if add < 0:
        raise ValueError("additive constant must be nonnegative")
    lo = a.lo + offset
    steps = a.steps
    if domain is not None:
        if domain < lo:
            raise ValueError(f"target domain {domain} below shifted lo {lo}")
        keep = min(steps.length, domain - lo)
        if keep < steps.length:
            steps = BitSeq.from_array(steps.as_array()[:keep])
    return StepArray(a.base + add, steps, lo)
