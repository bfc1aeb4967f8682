"""Jumbled pattern matching indexes for colored trees.

The query (i, j) asks for a connected subgraph with i nodes, j of them
black.  The index is the same per-size min/max pair as for strings
(the achievable black counts at each size form an interval).

Builders: a quadratic bottom-up DP over anchored arrays (the baseline),
a micro-macro builder that partitions the binarized tree into small
clusters and does the expensive merges with the packed string
convolution, and a centroid-decomposition index that additionally
locates an anchor node for any appearing pattern.

Anchored array semantics used throughout: for a binarized node x,
array[k] is the extremum number of blacks over original patterns of
size k that lie inside x's subtree and contain x's original node.
Dummy nodes (introduced by binarization) contribute no size and no
color; a pattern "contains" a dummy's original node through the chain
side, which is why compositions at dummies keep the chain part
nonempty.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .bitseq import ChunkTable, StepArray, build_chunk_tables
from .strings import MinMaxIndex, extremum_conv

_NEG = -(1 << 60)
_POS = 1 << 60


class ColoredTree:
    """Rooted tree given by per-node parent ids (-1 at the root) and colors."""

    __slots__ = ("n", "parent", "color", "_children", "_root")

    def __init__(self, parent, color):
        parent = [int(p) for p in parent]
        color = [int(c) for c in color]
        n = len(parent)
        if n == 0 or len(color) != n:
            raise ValueError("need one parent and one color per node")
        if any(c not in (0, 1) for c in color):
            raise ValueError("colors must be 0 or 1")
        roots = [v for v, p in enumerate(parent) if p == -1]
        if len(roots) != 1:
            raise ValueError(f"expected exactly one root, found {len(roots)}")
        children: list[list[int]] = [[] for _ in range(n)]
        for v, p in enumerate(parent):
            if p == -1:
                continue
            if not 0 <= p < n:
                raise ValueError(f"node {v} has parent {p} out of range")
            children[p].append(v)
        # reachability doubles as the acyclicity check
        seen = 0
        stack = [roots[0]]
        while stack:
            v = stack.pop()
            seen += 1
            stack.extend(children[v])
        if seen != n:
            raise ValueError("parent links do not form a single connected tree")
        self.n = n
        self.parent = parent
        self.color = color
        self._children = children
        self._root = roots[0]

    @property
    def root(self) -> int:
        return self._root

    def children(self) -> list[list[int]]:
        return self._children

    def postorder(self) -> list[int]:
        order = []
        stack = [(self._root, False)]
        while stack:
            v, done = stack.pop()
            if done:
                order.append(v)
            else:
                stack.append((v, True))
                stack.extend((c, False) for c in self._children[v])
        return order

    def adjacency(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for v, p in enumerate(self.parent):
            if p != -1:
                adj[v].append(p)
                adj[p].append(v)
        return adj


def reroot(tree: ColoredTree, new_root: int) -> ColoredTree:
    """The same colored tree hung from a different root."""
    adj = tree.adjacency()
    parent = [-1] * tree.n
    seen = [False] * tree.n
    seen[new_root] = True
    stack = [new_root]
    while stack:
        v = stack.pop()
        for u in adj[v]:
            if not seen[u]:
                seen[u] = True
                parent[u] = v
                stack.append(u)
    return ColoredTree(parent, tree.color)


class BinTree:
    """Binarized tree: every node has at most two children.

    Nodes with more than two children are replaced by a chain of copies;
    the extra copies are dummies (no size, no color).  ``origin`` maps
    every binarized node back to its original node; contracting dummies
    reproduces the input tree.  For a dummy, children[0] is the chain
    side (the side holding the real copy of its original node).
    """

    __slots__ = ("n_orig", "color", "is_dummy", "origin", "children",
                 "parent", "root", "orig_size")

    def __init__(self, n_orig, color, is_dummy, origin, children, root):
        self.n_orig = n_orig
        self.color = color
        self.is_dummy = is_dummy
        self.origin = origin
        self.children = children
        self.root = root
        n = len(color)
        self.parent = [-1] * n
        for v, ch in enumerate(children):
            for c in ch:
                self.parent[c] = v
        sizes = [0] * n
        for v in self.postorder():
            sizes[v] = (0 if is_dummy[v] else 1) + sum(sizes[c] for c in children[v])
        self.orig_size = sizes

    def __len__(self) -> int:
        return len(self.color)

    def postorder(self, root: int | None = None) -> list[int]:
        order = []
        stack = [(self.root if root is None else root, False)]
        while stack:
            v, done = stack.pop()
            if done:
                order.append(v)
            else:
                stack.append((v, True))
                stack.extend((c, False) for c in self.children[v])
        return order


def binarize(tree: ColoredTree) -> BinTree:
    """Binarize by chaining high-degree nodes through dummy copies."""
    color: list[int] = []
    is_dummy: list[bool] = []
    origin: list[int] = []
    children: list[list[int]] = []

    def new_node(col, dummy, orig, ch) -> int:
        color.append(col)
        is_dummy.append(dummy)
        origin.append(orig)
        children.append(ch)
        return len(color) - 1

    tops: dict[int, int] = {}
    ch_lists = tree.children()
    for v in tree.postorder():
        ch_tops = [tops[u] for u in ch_lists[v]]
        if len(ch_tops) <= 2:
            tops[v] = new_node(tree.color[v], False, v, ch_tops)
        else:
            cur = new_node(tree.color[v], False, v, ch_tops[:2])
            for extra in ch_tops[2:]:
                cur = new_node(0, True, v, [cur, extra])
            tops[v] = cur
    return BinTree(tree.n, color, is_dummy, origin, children, tops[tree.root])


def contract(bt: BinTree) -> ColoredTree:
    """Undo binarization: merge dummies back into their original nodes."""
    parent = [-1] * bt.n_orig
    color = [0] * bt.n_orig
    for x in range(len(bt)):
        if not bt.is_dummy[x]:
            color[bt.origin[x]] = bt.color[x]
        for c in bt.children[x]:
            if bt.origin[c] != bt.origin[x]:
                parent[bt.origin[c]] = bt.origin[x]
    return ColoredTree(parent, color)


# ---------------------------------------------------------------------------
# quadratic anchored-array builder (the baseline) and the bounded matcher


def build_anchored_arrays(bt: BinTree) -> MinMaxIndex:
    """Bottom-up anchored DP; O(sum over nodes of child-subtree products).

    Child arrays are released as soon as their parent is done, so live
    storage stays linear.
    """
    n = bt.n_orig
    gmax = np.full(n + 1, _NEG, dtype=np.int64)
    gmin = np.full(n + 1, _POS, dtype=np.int64)
    gmax[0] = gmin[0] = 0

    store: dict[int, tuple[np.ndarray, np.ndarray]] = {}
    for v in bt.postorder():
        amax, amin = _anchored_node(bt, v, store)
        np.maximum(gmax[1: amax.size], amax[1:], out=gmax[1: amax.size])
        np.minimum(gmin[1: amin.size], amin[1:], out=gmin[1: amin.size])
        store[v] = (amax, amin)
    return MinMaxIndex.from_values(gmin, gmax)


def _anchored_node(bt: BinTree, v: int, store, cap: int | None = None):
    """Anchored arrays for v from its children's, consuming the children."""
    ch = bt.children[v]
    col = bt.color[v]
    if not ch:
        return (np.array([0, col], dtype=np.int64),
                np.array([0, col], dtype=np.int64))
    if len(ch) == 1:
        umax, umin = store.pop(ch[0])
        if cap is not None:
            umax, umin = umax[: cap], umin[: cap]
        amax = np.concatenate(([0], umax + col))
        amin = np.concatenate(([0], umin + col))
        return amax, amin
    umax, umin = store.pop(ch[0])
    wmax, wmin = store.pop(ch[1])
    if cap is not None:
        umax, umin, wmax, wmin = (a[: cap + 1] for a in (umax, umin, wmax, wmin))
    if bt.is_dummy[v]:
        # chain side (children[0]) must be nonempty so the pattern
        # really contains this node's original
        cmax = extremum_conv(umax[1:], wmax, "max")
        cmin = extremum_conv(umin[1:], wmin, "min")
        amax = np.concatenate(([0], cmax))
        amin = np.concatenate(([0], cmin))
    else:
        cmax = extremum_conv(umax, wmax, "max")
        cmin = extremum_conv(umin, wmin, "min")
        amax = np.concatenate(([0], cmax + col))
        amin = np.concatenate(([0], cmin + col))
    if cap is not None and amax.size > cap + 1:
        amax, amin = amax[: cap + 1], amin[: cap + 1]
    return amax, amin


def match_bounded(tree: ColoredTree, i: int, j: int) -> bool:
    """Decide (i, j) without a full index, truncating arrays at size i."""
    if not 1 <= i <= tree.n or j < 0 or j > i:
        return False
    bt = binarize(tree)
    best_max, best_min = _NEG, _POS
    store: dict[int, tuple[np.ndarray, np.ndarray]] = {}
    for v in bt.postorder():
        amax, amin = _anchored_node(bt, v, store, cap=i)
        store[v] = (amax, amin)
        if amax.size > i:
            if amax[i] > best_max:
                best_max = int(amax[i])
            if amin[i] < best_min:
                best_min = int(amin[i])
    return best_min <= j <= best_max


# ---------------------------------------------------------------------------
# micro-macro decomposition


@dataclass
class Cluster:
    """A micro tree: connected, size-capped, at most two boundary nodes."""

    cid: int
    nodes: list[int]
    top: int
    bottom: int | None = None
    ell: int | None = None      # cluster id hanging below bottom
    r: int | None = None        # second cluster id below bottom
    child: int | None = None    # cluster id hanging below top
    parent_cluster: int | None = None

    def down_slots(self):
        return [s for s in (self.ell, self.r, self.child) if s is not None]


@dataclass
class MicroMacro:
    """Partition of a binarized tree into micro trees plus macro links."""

    bt: BinTree
    cap: int
    clusters: list[Cluster]
    cluster_of: list[int]
    root_cluster: int
    # optional: final per-cluster arrays kept by the builder (tests only)
    retained: dict[int, dict[str, tuple[StepArray, StepArray]]] = field(default_factory=dict)

    def macro_postorder(self) -> list[int]:
        order = []
        stack = [(self.root_cluster, False)]
        while stack:
            c, done = stack.pop()
            if done:
                order.append(c)
            else:
                stack.append((c, True))
                stack.extend((d, False) for d in self.clusters[c].down_slots())
        return order

    def validate(self) -> None:
        bt = self.bt
        seen = [False] * len(bt)
        for cl in self.clusters:
            if not 1 <= len(cl.nodes) <= self.cap:
                raise AssertionError(f"cluster {cl.cid} breaks the size cap")
            nodeset = set(cl.nodes)
            for v in cl.nodes:
                if seen[v]:
                    raise AssertionError(f"node {v} in two clusters")
                seen[v] = True
            # connectivity: every non-top node's parent stays in the cluster
            for v in cl.nodes:
                if v != cl.top and bt.parent[v] not in nodeset:
                    raise AssertionError(f"cluster {cl.cid} is not connected")
            boundary = {v for v in cl.nodes
                        if any(self.cluster_of[c] != cl.cid for c in bt.children[v])}
            if bt.parent[cl.top] != -1:
                boundary.add(cl.top)
            if len(boundary) > 2:
                raise AssertionError(f"cluster {cl.cid} has {len(boundary)} boundary nodes")
        if not all(seen):
            raise AssertionError("clusters do not cover the tree")


class _OpenCluster:
    __slots__ = ("nodes", "size", "down_nodes", "root")

    def __init__(self, root: int):
        self.root = root
        self.nodes = [root]
        self.size = 1
        self.down_nodes: dict[int, list[int]] = {}


def micro_macro_decompose(bt: BinTree, cap: int) -> MicroMacro:
    """Greedy bottom-up clustering under the size and boundary caps."""
    if cap < 1:
        raise ValueError("cluster cap must be at least 1")
    clusters: list[Cluster] = []
    cluster_of = [-1] * len(bt)
    pending_parent: list[tuple[int, int]] = []  # (cluster id, attach node)

    def close(oc: _OpenCluster, attach: int | None) -> int:
        cid = len(clusters)
        cl = Cluster(cid, oc.nodes, oc.root)
        clusters.append(cl)
        for v in oc.nodes:
            cluster_of[v] = cid
        _assign_slots(cl, oc.down_nodes)
        if attach is not None:
            pending_parent.append((cid, attach))
        return cid

    open_at: dict[int, _OpenCluster] = {}
    for v in bt.postorder():
        oc = _OpenCluster(v)
        kids = sorted((open_at.pop(c) for c in bt.children[v]),
                      key=lambda k: k.size)
        for kc in kids:
            merged_down = set(oc.down_nodes) | set(kc.down_nodes)
            if (oc.size + kc.size <= cap
                    and len(merged_down - {v}) <= 1):
                oc.nodes.extend(kc.nodes)
                oc.size += kc.size
                for node, ids in kc.down_nodes.items():
                    oc.down_nodes.setdefault(node, []).extend(ids)
            else:
                cid = close(kc, v)
                oc.down_nodes.setdefault(v, []).append(cid)
        open_at[v] = oc
    root_cid = close(open_at.pop(bt.root), None)

    for cid, attach in pending_parent:
        clusters[cid].parent_cluster = cluster_of[attach]
    mm = MicroMacro(bt, cap, clusters, cluster_of, root_cid)
    return mm


def _assign_slots(cl: Cluster, down: dict[int, list[int]]) -> None:
    if not down:
        return
    nodes = set(down)
    if nodes == {cl.top}:
        ids = down[cl.top]
        if len(ids) == 1:
            cl.child = ids[0]
        else:
            cl.bottom = cl.top
            cl.ell, cl.r = ids[0], ids[1]
        return
    others = nodes - {cl.top}
    if len(others) != 1:
        raise AssertionError("cluster grew more than one bottom boundary")
    (b,) = others
    cl.bottom = b
    ids = down[b]
    cl.ell = ids[0]
    cl.r = ids[1] if len(ids) > 1 else None
    if cl.top in nodes:
        top_ids = down[cl.top]
        if len(top_ids) != 1:
            raise AssertionError("top boundary with a bottom boundary must have one child cluster")
        cl.child = top_ids[0]


# ---------------------------------------------------------------------------
# micro-macro index builder

# Value arrays over a contiguous size range [lo, lo+len-1]; mx/mn are the
# max-form and min-form extrema.  Sizes below lo are unachievable.


class _Arr:
    __slots__ = ("lo", "mx", "mn")

    def __init__(self, lo: int, mx: np.ndarray, mn: np.ndarray):
        self.lo = lo
        self.mx = mx
        self.mn = mn

    @property
    def hi(self) -> int:
        return self.lo + self.mx.size - 1


def _conv_arr(a: _Arr, b: _Arr, table: ChunkTable | None) -> _Arr:
    return _Arr(a.lo + b.lo,
                extremum_conv(a.mx, b.mx, "max", table),
                extremum_conv(a.mn, b.mn, "min", table))


def _union_arr(a: _Arr, b: _Arr) -> _Arr:
    if max(a.lo, b.lo) > min(a.hi, b.hi) + 1:
        raise AssertionError("union of value arrays would leave a gap")
    lo = min(a.lo, b.lo)
    hi = max(a.hi, b.hi)
    mx = np.full(hi - lo + 1, _NEG, dtype=np.int64)
    mn = np.full(hi - lo + 1, _POS, dtype=np.int64)
    for arr in (a, b):
        s = slice(arr.lo - lo, arr.lo - lo + arr.mx.size)
        np.maximum(mx[s], arr.mx, out=mx[s])
        np.minimum(mn[s], arr.mn, out=mn[s])
    return _Arr(lo, mx, mn)


def _attach(acc: _Arr, part: _Arr, forced: bool, table: ChunkTable | None) -> _Arr:
    """Compose a child part; optional unless forced (or already lo=0)."""
    if forced and part.lo < 1:
        raise AssertionError("forced parts must have a nonempty minimum")
    conv = _conv_arr(acc, part, table)
    if forced or part.lo == 0:
        return conv
    return _union_arr(acc, conv)


class _MiniResult:
    __slots__ = ("arr", "full")

    def __init__(self, arr: _Arr, full: bool):
        self.arr = arr
        self.full = full


def _chain_real(bt: BinTree, x: int) -> int:
    """The real copy reached by following chain children from x."""
    while bt.is_dummy[x]:
        x = bt.children[x][0]
    return x


def _cluster_mini_dp(bt: BinTree, root: int,
                     local_children: dict[int, list[int]]) -> dict[int, _MiniResult]:
    """Anchored DP restricted to one cluster, in the given orientation.

    Outputs per node either a full array (patterns that do contain the
    node's original) or a partial one (junction-adjacent piece unions
    whose connecting original lies outside this node's local subtree;
    they only ever compose into same-original chain nodes or resolve at
    a cluster merge).
    """
    results: dict[int, _MiniResult] = {}
    order = []
    stack = [(root, False)]
    while stack:
        v, done = stack.pop()
        if done:
            order.append(v)
        else:
            stack.append((v, True))
            stack.extend((c, False) for c in local_children[v])

    for x in order:
        if not bt.is_dummy[x]:
            acc = _Arr(1, np.array([bt.color[x]], dtype=np.int64),
                       np.array([bt.color[x]], dtype=np.int64))
            for c in local_children[x]:
                p = results[c]
                if not p.full and bt.origin[c] != bt.origin[x]:
                    # pieces pending another cluster's junction original:
                    # unreachable from here within this cluster, skip
                    continue
                acc = _attach(acc, p.arr, forced=False, table=None)
            results[x] = _MiniResult(acc, True)
            continue
        chain = bt.children[x][0]
        forced_part = None
        if chain in local_children[x] and results[chain].full:
            forced_part = chain
        acc = _Arr(0, np.zeros(1, dtype=np.int64), np.zeros(1, dtype=np.int64))
        for c in local_children[x]:
            p = results[c]
            if not p.full and bt.origin[c] != bt.origin[x]:
                continue
            acc = _attach(acc, p.arr, forced=(c == forced_part), table=None)
        results[x] = _MiniResult(acc, forced_part is not None)
    return results


def build_index_micro_macro(bt: BinTree, cap: int | None = None,
                            table: ChunkTable | None = None,
                            mm: MicroMacro | None = None,
                            retain_arrays: bool = False) -> MinMaxIndex:
    """Micro-macro index: equal answers to the quadratic builder.

    Clusters are processed bottom-up over the macro tree.  Per cluster,
    small DPs over its own nodes produce the boundary-anchored arrays;
    the subtree arrays exported by child clusters are then attached with
    at most a handful of packed convolutions, so the large merge work is
    paid once per cluster rather than once per node.
    """
    n = bt.n_orig
    if cap is None:
        cap = max(4, n.bit_length() - 1)
    if table is None:
        table = build_chunk_tables(8)
    if mm is None:
        mm = micro_macro_decompose(bt, cap)

    gmax = np.full(n + 1, _NEG, dtype=np.int64)
    gmin = np.full(n + 1, _POS, dtype=np.int64)
    gmax[0] = gmin[0] = 0

    def contribute(arr: _Arr) -> None:
        lo = max(arr.lo, 1)
        if lo > arr.hi:
            return
        s = slice(lo, arr.hi + 1)
        off = lo - arr.lo
        np.maximum(gmax[s], arr.mx[off:], out=gmax[s])
        np.minimum(gmin[s], arr.mn[off:], out=gmin[s])

    exports: dict[int, _Arr] = {}
    for cid in mm.macro_postorder():
        cl = mm.clusters[cid]
        nodeset = set(cl.nodes)
        natural = {v: [c for c in bt.children[v] if c in nodeset] for v in cl.nodes}

        # within-cluster DP rooted at the top; every full per-node array is
        # a family of real patterns, so it feeds the global extrema
        t_dp = _cluster_mini_dp(bt, cl.top, natural)
        for res in t_dp.values():
            if res.full:
                contribute(res.arr)

        debt_t = _debt_slot(bt, mm, cl, cl.top)
        e_ell = exports.pop(cl.ell) if cl.ell is not None else None
        e_r = exports.pop(cl.r) if cl.r is not None else None
        e_child = exports.pop(cl.child) if cl.child is not None else None

        final_atb = None
        if cl.bottom is not None:
            debt_b = _debt_slot(bt, mm, cl, cl.bottom)
            if cl.bottom == cl.top:
                ab_root = t_dp[cl.top]
                atb = ab_root
            else:
                local_b = _reroot_local(bt, nodeset, cl.bottom)
                b_dp = _cluster_mini_dp(bt, cl.bottom, local_b)
                ab_root = b_dp[cl.bottom]
                atb = _contracted_path_arr(bt, mm, cl, t_dp, natural)
            if not ab_root.full and debt_b is None:
                raise AssertionError("bottom array pending with no export to resolve it")
            final_ab = ab_root.arr
            for slot, e in (("ell", e_ell), ("r", e_r)):
                if e is not None:
                    final_ab = _attach(final_ab, e, forced=(debt_b == slot), table=table)
            contribute(final_ab)
            final_atb = atb.arr
            for slot, e in (("ell", e_ell), ("r", e_r)):
                if e is not None:
                    final_atb = _attach(final_atb, e,
                                        forced=(debt_b == slot or debt_t == slot),
                                        table=table)
        else:
            final_ab = None

        # patterns through the top: either avoid the bottom boundary
        # (cluster nodes + the top-hanging child cluster) or include it
        a_c = None
        t_res = t_dp[cl.top]
        if t_res.full:
            a_c = t_res.arr
            if e_child is not None:
                a_c = _attach(a_c, e_child, forced=False, table=table)
        elif debt_t == "child":
            a_c = _attach(t_res.arr, e_child, forced=True, table=table)
        # otherwise no pattern holding the top's original avoids the bottom
        if final_atb is not None:
            cand = final_atb
            if e_child is not None:
                cand = _attach(cand, e_child, forced=(debt_t == "child"), table=table)
            a_c = cand if a_c is None else _union_arr(a_c, cand)
        if a_c is None:
            raise AssertionError(f"cluster {cid}: no valid top array")
        contribute(a_c)
        exports[cid] = a_c

        if retain_arrays:
            mm.retained[cid] = _retained_entry(a_c, final_ab, final_atb, t_res)

    if (gmax[1:] <= _NEG).any() or (gmin[1:] >= _POS).any():
        raise AssertionError("global arrays not fully covered")
    return MinMaxIndex.from_values(gmin, gmax)


def _debt_slot(bt: BinTree, mm: MicroMacro, cl: Cluster, x: int) -> str | None:
    """Which downward cluster slot holds x's original's real copy, if any."""
    while bt.is_dummy[x]:
        nxt = bt.children[x][0]
        if mm.cluster_of[nxt] != cl.cid:
            target = mm.cluster_of[nxt]
            for slot, sid in (("ell", cl.ell), ("r", cl.r), ("child", cl.child)):
                if sid == target:
                    return slot
            raise AssertionError("chain exits the cluster outside its slots")
        x = nxt
    return None


def _reroot_local(bt: BinTree, nodeset: set[int], new_root: int) -> dict[int, list[int]]:
    adj: dict[int, list[int]] = {v: [] for v in nodeset}
    for v in nodeset:
        for c in bt.children[v]:
            if c in nodeset:
                adj[v].append(c)
                adj[c].append(v)
    local: dict[int, list[int]] = {v: [] for v in nodeset}
    seen = {new_root}
    stack = [new_root]
    while stack:
        v = stack.pop()
        for u in adj[v]:
            if u not in seen:
                seen.add(u)
                local[v].append(u)
                stack.append(u)
    return local


def _contracted_path_arr(bt: BinTree, mm: MicroMacro, cl: Cluster,
                         t_dp: dict[int, _MiniResult],
                         natural: dict[int, list[int]]) -> _MiniResult:
    """Arrays for patterns containing the whole top-to-bottom path.

    The path is contracted into one weighted node (its original size and
    black count); off-path subtrees attach optionally, except that an
    off-path subtree holding a path dummy's real copy is mandatory.
    """
    path = [cl.bottom]
    while path[-1] != cl.top:
        path.append(bt.parent[path[-1]])
    on_path = set(path)
    weight = sum(0 if bt.is_dummy[v] else 1 for v in path)
    ones = sum(0 if bt.is_dummy[v] else bt.color[v] for v in path)

    forced_roots = set()
    full = True
    for v in path:
        if not bt.is_dummy[v]:
            continue
        chain = bt.children[v][0]
        if chain in on_path:
            continue
        if mm.cluster_of[chain] != cl.cid:
            full = False  # resolved by a forced export at the merge
            continue
        forced_roots.add(chain)

    acc = _Arr(weight, np.array([ones], dtype=np.int64),
               np.array([ones], dtype=np.int64))
    for v in path:
        for c in natural[v]:
            if c in on_path:
                continue
            res = t_dp[c]
            if not res.full:
                # off-path subtrees see no cluster boundary, so their
                # chains always resolve internally
                raise AssertionError("pending array in an off-path subtree")
            acc = _attach(acc, res.arr, forced=(c in forced_roots), table=None)
    return _MiniResult(acc, full)


def _retained_entry(a_c, final_ab, final_atb, t_res):
    def pair(arr: _Arr | None):
        if arr is None:
            return None
        return (StepArray.from_values(arr.mn, lo=arr.lo),
                StepArray.from_values(arr.mx, lo=arr.lo))

    return {"A_C": pair(a_c), "A_b": pair(final_ab),
            "A_tb": pair(final_atb), "A_t": pair(t_res.arr)}


# ---------------------------------------------------------------------------
# centroid decomposition and anchor location


def find_centroid(tree: ColoredTree, nodes=None) -> int:
    """A node whose removal leaves no component above half the size."""
    adj = tree.adjacency()
    if nodes is None:
        nodes = range(tree.n)
    nodeset = set(nodes)
    if not nodeset:
        raise ValueError("empty component")
    start = next(iter(nodeset))
    # iterative DFS sizes
    order, parent = [], {start: None}
    stack = [start]
    while stack:
        v = stack.pop()
        order.append(v)
        for u in adj[v]:
            if u in nodeset and u not in parent:
                parent[u] = v
                stack.append(u)
    size = {v: 1 for v in order}
    for v in reversed(order):
        if parent[v] is not None:
            size[parent[v]] += size[v]
    total = len(order)
    if total != len(nodeset):
        raise ValueError("nodes do not induce a connected component")
    v = start
    while True:
        heavy = None
        for u in adj[v]:
            if u in nodeset and parent.get(u) == v and size[u] * 2 > total:
                heavy = u
                break
        if heavy is None:
            return v
        # re-rooting step: the parent side of `heavy` gets the rest
        size[v] = total - size[heavy]
        parent[v] = heavy
        parent[heavy] = None
        v = heavy


@dataclass
class CentroidRecord:
    node: int                 # global node id of this component's centroid
    size: int
    index: MinMaxIndex
    children: list["CentroidRecord"]


class CentroidIndex:
    """Centroid tree with one whole-component MinMaxIndex per record."""

    def __init__(self, root: CentroidRecord, n: int):
        self.root = root
        self.n = n

    def query(self, i: int, j: int) -> bool:
        return self.root.index.query(i, j)

    def depth(self) -> int:
        best = 0
        stack = [(self.root, 1)]
        while stack:
            rec, d = stack.pop()
            best = max(best, d)
            stack.extend((c, d + 1) for c in rec.children)
        return best


def build_centroid_index(tree: ColoredTree, builder: str = "quadratic",
                         cap: int | None = None,
                         table: ChunkTable | None = None) -> CentroidIndex:
    """Recursive centroid decomposition with a per-component index."""
    if builder not in ("quadratic", "micro"):
        raise ValueError(f"unknown builder {builder!r}")
    adj = tree.adjacency()

    def build_component(nodes: list[int]) -> CentroidRecord:
        c = find_centroid(tree, nodes)
        local = _component_tree(tree, adj, nodes, root=c)
        bt = binarize(local)
        if builder == "micro":
            idx = build_index_micro_macro(bt, cap=cap, table=table)
        else:
            idx = build_anchored_arrays(bt)
        nodeset = set(nodes)
        nodeset.remove(c)
        comps = _split_components(adj, nodeset)
        return CentroidRecord(c, len(nodes), idx,
                              [build_component(comp) for comp in comps])

    return CentroidIndex(build_component(list(range(tree.n))), tree.n)


def _component_tree(tree: ColoredTree, adj, nodes: list[int], root: int) -> ColoredTree:
    nodeset = set(nodes)
    local_id = {v: k for k, v in enumerate(nodes)}
    parent = [-1] * len(nodes)
    seen = {root}
    stack = [root]
    while stack:
        v = stack.pop()
        for u in adj[v]:
            if u in nodeset and u not in seen:
                seen.add(u)
                parent[local_id[u]] = local_id[v]
                stack.append(u)
    color = [tree.color[v] for v in nodes]
    return ColoredTree(parent, color)


def _split_components(adj, nodeset: set[int]) -> list[list[int]]:
    comps = []
    left = set(nodeset)
    while left:
        start = left.pop()
        comp = [start]
        stack = [start]
        while stack:
            v = stack.pop()
            for u in adj[v]:
                if u in left:
                    left.remove(u)
                    comp.append(u)
                    stack.append(u)
        comps.append(comp)
    return comps


def locate_anchor(ci: CentroidIndex, i: int, j: int) -> int | None:
    """A node lying on some occurrence of (i, j), or None if absent.

    Walks the centroid tree to the first component that contains the
    pattern while none of its child components does; that component's
    centroid must be part of an occurrence.
    """
    rec = ci.root
    if i < 1 or not rec.index.query(i, j):
        return None  # no node can witness the empty pattern
    while True:
        nxt = None
        for child in rec.children:
            if child.index.query(i, j):
                nxt = child
                break
        if nxt is None:
            return rec.node
        rec = nxt
