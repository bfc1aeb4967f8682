"""Brute-force reference implementations.

These deliberately share no core routines with the index builders
(beyond the bit sequence type): the string oracle slides windows by
incremental extension, the tree oracle enumerates achievable (size,
black-count) pairs by set-valued subtree expansion, and the graph
oracle tests every vertex subset for connectivity.  Enumeration caps
are hard limits.
"""

from __future__ import annotations

import numpy as np

from .bitseq import BitSeq
from .strings import MinMaxIndex, as_bitseq

QuerySet = set[tuple[int, int]]

TREE_ORACLE_CAP = 18
GRAPH_ORACLE_CAP = 14


def string_oracle(s) -> MinMaxIndex:
    """Per-length window extrema by explicit sliding.

    Small inputs run a scalar window that recounts by stepping one
    position at a time; larger ones extend all windows of length i-1 by
    one position at once (the same slide, array-valued).
    """
    seq = as_bitseq(s)
    n = len(seq)
    if n < 1:
        raise ValueError("cannot index an empty string")
    mn = [0] * (n + 1)
    mx = [0] * (n + 1)
    if n <= 1024:
        bits = seq.as_array().tolist()
        for length in range(1, n + 1):
            c = sum(bits[:length])
            lo = hi = c
            for p in range(n - length):
                c += bits[p + length] - bits[p]
                if c < lo:
                    lo = c
                if c > hi:
                    hi = c
            mn[length] = lo
            mx[length] = hi
    else:
        bits = seq.as_array().astype(np.int64)
        windows = bits.copy()
        mn[1] = int(windows.min())
        mx[1] = int(windows.max())
        for length in range(2, n + 1):
            windows = windows[: n - length + 1] + bits[length - 1:]
            mn[length] = int(windows.min())
            mx[length] = int(windows.max())
    return MinMaxIndex.from_values(mn, mx)


def string_oracle_recount(s, i: int) -> tuple[int, int]:
    """Second, even more naive check: recount every window from scratch."""
    seq = as_bitseq(s)
    n = len(seq)
    if not 1 <= i <= n:
        raise IndexError(f"window length {i} out of range [1, {n}]")
    bits = seq.as_array().tolist()
    counts = [sum(bits[p: p + i]) for p in range(n - i + 1)]
    return min(counts), max(counts)


def tree_enum_oracle(tree, n_cap: int = TREE_ORACLE_CAP) -> QuerySet:
    """Exact set of (size, black count) over all connected subgraphs.

    Works by rooted expansion: for each node, the set of (size, ones)
    pairs of connected subgraphs rooted there is the sumset of the
    children's pair sets (each child part optional), seeded by the node
    itself.  Pair sets are kept as integer bitsets.
    """
    n = tree.n
    if n > n_cap:
        raise ValueError(f"tree has {n} nodes, above the oracle cap {n_cap}")
    stride = 2 * (n + 1)

    children = tree.children()
    order = tree.postorder()
    rooted: dict[int, int] = {}
    total = 0
    for v in order:
        acc = 1 << (1 * stride + tree.color[v])  # {(1, col(v))}
        for c in children[v]:
            child_set = rooted.pop(c)
            acc = _sumset_optional(acc, child_set, stride)
        rooted[v] = acc
        total |= acc
    return _decode_pairs(total, stride)


def graph_enum_oracle(graph, n_cap: int = GRAPH_ORACLE_CAP) -> QuerySet:
    """Exact set of (white, black) pairs over connected vertex subsets."""
    n = graph.n
    if n > n_cap:
        raise ValueError(f"graph has {n} vertices, above the oracle cap {n_cap}")
    adj_mask = [0] * n
    for u, v in graph.edges:
        adj_mask[u] |= 1 << v
        adj_mask[v] |= 1 << u
    colors = graph.color
    out: QuerySet = set()
    for mask in range(1, 1 << n):
        if not _connected_mask(mask, adj_mask):
            continue
        whites = blacks = 0
        m = mask
        while m:
            low = m & -m
            v = low.bit_length() - 1
            if colors[v]:
                blacks += 1
            else:
                whites += 1
            m ^= low
        out.add((whites, blacks))
    return out


def _connected_mask(mask: int, adj_mask: list[int]) -> bool:
    start = mask & -mask
    seen = start
    frontier = start
    while frontier:
        nxt = 0
        m = frontier
        while m:
            low = m & -m
            nxt |= adj_mask[low.bit_length() - 1]
            m ^= low
        frontier = nxt & mask & ~seen
        seen |= frontier
    return seen == mask


def _sumset_optional(acc: int, child: int, stride: int) -> int:
    """acc ∪ {a + c : a in acc, c in child} as shifted-OR of bitsets."""
    out = acc
    m = child
    while m:
        low = m & -m
        out |= acc << (low.bit_length() - 1)
        m ^= low
    return out


def _decode_pairs(bitset: int, stride: int) -> QuerySet:
    out: QuerySet = set()
    m = bitset
    while m:
        low = m & -m
        key = low.bit_length() - 1
        out.add((key // stride, key % stride))
        m ^= low
    return out
