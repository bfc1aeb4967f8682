"""Jumbled index for a binary string given as a straight-line program.

The grammar (Chomsky normal form, one rule per line) is never fully
expanded during the build: the expansion is cut into blocks no longer
than a chosen length, per-block and block-pair window tables are built
with the packed string machinery, and window extrema that span several
blocks reduce to a pair table shifted by the length/ones of the blocks
strictly in between.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bitseq import BitSeq, ChunkTable, StepArray, build_chunk_tables
from .strings import MinMaxIndex, build_minmax_packed, split_edge_extrema, query  # noqa: F401

_NEG = -(1 << 60)
_POS = 1 << 60

# ceiling on total spanning-assembly work before demanding a larger block
MAX_ASSEMBLY_WORK = 5_000_000_000


class SLP:
    """Straight-line program: rules reference strictly smaller rule ids."""

    __slots__ = ("rules", "exp_len", "exp_ones")

    def __init__(self, rules: list[tuple]):
        if not rules:
            raise ValueError("empty grammar")
        self.rules = rules
        exp_len = [0] * (len(rules) + 1)
        exp_ones = [0] * (len(rules) + 1)
        for rid, rule in enumerate(rules, start=1):
            if rule[0] == "T":
                exp_len[rid] = 1
                exp_ones[rid] = rule[1]
            else:
                _, a, b = rule
                exp_len[rid] = exp_len[a] + exp_len[b]
                exp_ones[rid] = exp_ones[a] + exp_ones[b]
        self.exp_len = exp_len
        self.exp_ones = exp_ones

    @property
    def g(self) -> int:
        return len(self.rules)

    @property
    def start(self) -> int:
        return len(self.rules)

    @property
    def n(self) -> int:
        return self.exp_len[self.start]

    def expand(self) -> BitSeq:
        """Materialize the derived string (iterative, left to right)."""
        out = np.empty(self.n, dtype=np.uint8)
        pos = 0
        stack = [self.start]
        while stack:
            r = stack.pop()
            rule = self.rules[r - 1]
            if rule[0] == "T":
                out[pos] = rule[1]
                pos += 1
            else:
                stack.append(rule[2])
                stack.append(rule[1])
        return BitSeq.from_array(out)


def parse_slp(text: str) -> SLP:
    """Parse the SLP file format: a rule count, then one rule per line.

    Rules: ``T <0|1>`` or ``N <j> <k>`` with 1-based ids j, k smaller
    than the rule's own id.  The start symbol is the last rule.
    """
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise ValueError("empty grammar file")
    try:
        g = int(lines[0])
    except ValueError:
        raise ValueError(f"bad rule count: {lines[0]!r}") from None
    if g < 1:
        raise ValueError("grammar must have at least one rule")
    if len(lines) != g + 1:
        raise ValueError(f"expected {g} rules, found {len(lines) - 1}")
    rules: list[tuple] = []
    for rid, ln in enumerate(lines[1:], start=1):
        parts = ln.split()
        if parts[0] == "T" and len(parts) == 2:
            if parts[1] not in ("0", "1"):
                raise ValueError(f"rule {rid}: terminal must be 0 or 1, got {parts[1]!r}")
            rules.append(("T", int(parts[1])))
        elif parts[0] == "N" and len(parts) == 3:
            a, b = int(parts[1]), int(parts[2])
            if not (1 <= a < rid and 1 <= b < rid):
                raise ValueError(f"rule {rid}: children must reference earlier rules")
            rules.append(("N", a, b))
        else:
            raise ValueError(f"rule {rid}: cannot parse {ln!r}")
    return SLP(rules)


def choose_block_length(n: int, g: int) -> int:
    """Block length balancing pair-table cost against assembly cost."""
    if n < 1 or g < 1:
        raise ValueError("need positive string and grammar sizes")
    if n == 1:
        return 1
    raw = (n / g) ** (2.0 / 3.0) * math.log2(n) ** (1.0 / 3.0)
    return max(1, min(n, round(raw)))


@dataclass
class SpanMeta:
    """Length and ones of the blocks strictly between a block pair."""

    length: int
    ones: int


class BlockDecomposition:
    """The expansion as a sequence of references into distinct basic blocks."""

    __slots__ = ("max_block_len", "basic", "block_seq", "prefix_len", "prefix_ones")

    def __init__(self, max_block_len: int, basic: list[BitSeq], block_seq: list[int]):
        self.max_block_len = max_block_len
        self.basic = basic
        self.block_seq = block_seq
        lens = np.array([0] + [len(basic[b]) for b in block_seq], dtype=np.int64)
        ones = np.array([0] + [basic[b].ones() for b in block_seq], dtype=np.int64)
        self.prefix_len = np.cumsum(lens)
        self.prefix_ones = np.cumsum(ones)
        for blk in basic:
            if not 1 <= len(blk) <= max_block_len:
                raise ValueError("basic block length out of range")

    @property
    def b(self) -> int:
        return len(self.block_seq)

    @property
    def d(self) -> int:
        return len(self.basic)

    @property
    def n(self) -> int:
        return int(self.prefix_len[-1])

    def span_meta(self, k: int, m: int) -> SpanMeta:
        """Metadata for the stretch between block k and block m (k < m)."""
        if not 0 <= k < m < self.b:
            raise IndexError("need block positions k < m")
        return SpanMeta(int(self.prefix_len[m] - self.prefix_len[k + 1]),
                        int(self.prefix_ones[m] - self.prefix_ones[k + 1]))


def block_decompose(slp: SLP, block_len: int) -> BlockDecomposition:
    """Cut the parse tree at maximal rules fitting the block length.

    Emitted pieces are then greedily merged with their right neighbor
    while the merge still fits, and deduplicated by content.  Any two
    adjacent final blocks together exceed the length bound, so the
    block count is at most 2n/len + 1.
    """
    if block_len < 1:
        raise ValueError("block length must be positive")
    # expansions of every rule short enough to become a block piece;
    # children precede parents in rule order, so one pass suffices
    cache: dict[int, np.ndarray] = {}
    for rid in range(1, slp.g + 1):
        if slp.exp_len[rid] > block_len:
            continue
        rule = slp.rules[rid - 1]
        if rule[0] == "T":
            cache[rid] = np.array([rule[1]], dtype=np.uint8)
        else:
            cache[rid] = np.concatenate([cache[rule[1]], cache[rule[2]]])

    pieces: list[np.ndarray] = []
    stack = [slp.start]
    while stack:
        r = stack.pop()
        if slp.exp_len[r] <= block_len:
            pieces.append(cache[r])
        else:
            rule = slp.rules[r - 1]
            stack.append(rule[2])
            stack.append(rule[1])

    merged: list[np.ndarray] = []
    for piece in pieces:
        if merged and merged[-1].size + piece.size <= block_len:
            merged[-1] = np.concatenate([merged[-1], piece])
        else:
            merged.append(piece)

    basic: list[BitSeq] = []
    ids: dict[tuple[bytes, int], int] = {}
    seq: list[int] = []
    for piece in merged:
        blk = BitSeq.from_array(piece)
        key = (blk.buf, len(blk))
        bid = ids.get(key)
        if bid is None:
            bid = len(basic)
            ids[key] = bid
            basic.append(blk)
        seq.append(bid)
    bd = BlockDecomposition(block_len, basic, seq)
    if bd.n != slp.n:
        raise AssertionError("block decomposition lost bits")
    return bd


def build_basic_arrays(bd: BlockDecomposition,
                       table: ChunkTable | None = None) -> list[MinMaxIndex]:
    """One per-length window index per distinct basic block."""
    return [build_minmax_packed(blk, table) for blk in bd.basic]


def build_pair_tables(bd: BlockDecomposition, table: ChunkTable | None = None
                      ) -> dict[tuple[int, int], tuple[StepArray, StepArray]]:
    """Straddling-window extrema for every ordered pair of basic blocks.

    Entry (k, m) covers windows of basic[k] ∘ basic[m] that start in the
    first block and end in the second; (min form, max form) StepArrays
    over lengths 2 .. len(k)+len(m).
    """
    out = {}
    for k, x in enumerate(bd.basic):
        for m, y in enumerate(bd.basic):
            out[(k, m)] = (split_edge_extrema(x, y, table, "min"),
                           split_edge_extrema(x, y, table, "max"))
    return out


def build_global_index(slp: SLP, block_len: int | None = None,
                       table: ChunkTable | None = None) -> MinMaxIndex:
    """Index equal, at every length, to the string index of the expansion."""
    n = slp.n
    if n < 1:
        raise ValueError("grammar derives the empty string")
    if block_len is None:
        block_len = choose_block_length(n, slp.g)
    if table is None:
        table = build_chunk_tables(8)
    bd = block_decompose(slp, block_len)
    b, d = bd.b, bd.d
    if b * b > MAX_ASSEMBLY_WORK and b * d * (2 * block_len + 1) > MAX_ASSEMBLY_WORK:
        raise ValueError(
            f"block length {block_len} yields {b} blocks; spanning assembly "
            "would be enormous -- rerun with a larger block length")

    basics = build_basic_arrays(bd, table)
    gmax = np.full(n + 1, _NEG, dtype=np.int64)
    gmin = np.full(n + 1, _POS, dtype=np.int64)
    gmax[0] = gmin[0] = 0

    for bid, idx in enumerate(basics):
        top = idx.n
        np.maximum(gmax[1: top + 1], idx.max_arr.to_values()[1:], out=gmax[1: top + 1])
        np.minimum(gmin[1: top + 1], idx.min_arr.to_values()[1:], out=gmin[1: top + 1])

    if b > 1:
        pairs = build_pair_tables(bd, table)
        pair_vals = {key: (mn.to_values(), mx.to_values())
                     for key, (mn, mx) in pairs.items()}
        if b <= 512:
            _assemble_per_pair(bd, pair_vals, gmax, gmin)
        else:
            _assemble_scattered(bd, pair_vals, gmax, gmin)

    if (gmax[1:] <= _NEG).any():
        raise AssertionError("global arrays not fully covered")
    return MinMaxIndex.from_values(gmin, gmax)


def _assemble_per_pair(bd, pair_vals, gmax, gmin) -> None:
    """One contiguous slice update per positional block pair."""
    pl, po = bd.prefix_len, bd.prefix_ones
    seq = bd.block_seq
    for k in range(bd.b - 1):
        kp = seq[k]
        for m in range(k + 1, bd.b):
            i_off = int(pl[m] - pl[k + 1])
            j_off = int(po[m] - po[k + 1])
            vmin, vmax = pair_vals[(kp, seq[m])]
            lo = i_off + 2
            if lo > bd.n:
                continue
            hi = min(bd.n, i_off + 1 + vmax.size)
            cnt = hi - lo + 1
            np.maximum(gmax[lo: hi + 1], j_off + vmax[:cnt], out=gmax[lo: hi + 1])
            np.minimum(gmin[lo: hi + 1], j_off + vmin[:cnt], out=gmin[lo: hi + 1])


def _assemble_scattered(bd, pair_vals, gmax, gmin) -> None:
    """Per left block, vectorize over all right blocks of one basic id.

    Used when there are many (hence short) blocks: the per-length loop
    is tiny and the per-pair work becomes scatter updates.
    """
    pl, po = bd.prefix_len, bd.prefix_ones
    seq = np.asarray(bd.block_seq)
    positions = {bid: np.flatnonzero(seq == bid) for bid in range(bd.d)}
    for k in range(bd.b - 1):
        kp = int(seq[k])
        base_l = pl[k + 1]
        base_o = po[k + 1]
        for mp in range(bd.d):
            pos = positions[mp]
            ms = pos[np.searchsorted(pos, k + 1):]
            if ms.size == 0:
                continue
            i_off = pl[ms] - base_l
            j_off = po[ms] - base_o
            vmin, vmax = pair_vals[(kp, mp)]
            for t in range(vmax.size):
                idxs = i_off + 2 + t
                keep = idxs <= bd.n
                if not keep.all():
                    idxs, jo = idxs[keep], j_off[keep]
                else:
                    jo = j_off
                np.maximum.at(gmax, idxs, jo + vmax[t])
                np.minimum.at(gmin, idxs, jo + vmin[t])
