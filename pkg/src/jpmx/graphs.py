"""Jumbled pattern matching on bounded-treewidth colored graphs.

Computes every (i, j) such that the graph has a connected subgraph with
i white and j black vertices (note the color convention differs from
strings/trees: here i counts whites).

The engine is a dynamic program over a nice tree decomposition.  Per
bag it keeps, for every positive partition of the bag (excluded set
plus classes witnessed by disjoint connected subgraphs), the set of
achievable (white, black) count pairs as an integer bitset; joining two
child tables is then a shifted-OR sumset.  Answers are collected from
partitions with exactly one included class, over all bags.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np


class ColoredGraph:
    """Undirected simple graph with 0/1 (white/black) vertex colors."""

    __slots__ = ("n", "color", "edges", "adj")

    def __init__(self, color, edges):
        color = [int(c) for c in color]
        n = len(color)
        if n == 0:
            raise ValueError("graph needs at least one vertex")
        if any(c not in (0, 1) for c in color):
            raise ValueError("colors must be 0 or 1")
        seen = set()
        adj: list[set[int]] = [set() for _ in range(n)]
        for u, v in ((int(a), int(b)) for a, b in edges):
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range")
            if u == v:
                raise ValueError(f"self-loop at {u}")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise ValueError(f"duplicate edge {key}")
            seen.add(key)
            adj[u].add(v)
            adj[v].add(u)
        self.n = n
        self.color = color
        self.edges = sorted(seen)
        self.adj = adj

    def components(self) -> list[list[int]]:
        out, left = [], set(range(self.n))
        while left:
            start = left.pop()
            comp, stack = [start], [start]
            while stack:
                v = stack.pop()
                for u in self.adj[v]:
                    if u in left:
                        left.remove(u)
                        comp.append(u)
                        stack.append(u)
            out.append(sorted(comp))
        return out


@dataclass
class TreeDecomp:
    """Bags plus a tree over them; vertices are ids of the source graph."""

    bags: list[frozenset]
    edges: list[tuple[int, int]]

    @property
    def width(self) -> int:
        return max(len(b) for b in self.bags) - 1

    def neighbors(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in self.bags]
        for a, b in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        return adj

    def validate(self, graph: ColoredGraph, vertices=None) -> None:
        verts = set(range(graph.n)) if vertices is None else set(vertices)
        covered = set()
        for b in self.bags:
            covered |= b
        if covered != verts:
            raise ValueError("bags do not cover the vertex set")
        bagsets = self.bags
        for u, v in graph.edges:
            if u in verts and v in verts:
                if not any(u in b and v in b for b in bagsets):
                    raise ValueError(f"edge ({u}, {v}) not inside any bag")
        # each vertex's bags must induce a connected subtree
        adj = self.neighbors()
        for v in verts:
            holding = [i for i, b in enumerate(bagsets) if v in b]
            if not holding:
                raise ValueError(f"vertex {v} in no bag")
            seen = {holding[0]}
            stack = [holding[0]]
            hold = set(holding)
            while stack:
                x = stack.pop()
                for y in adj[x]:
                    if y in hold and y not in seen:
                        seen.add(y)
                        stack.append(y)
            if seen != hold:
                raise ValueError(f"bags holding vertex {v} are not connected")
        if len(self.bags) > 1:
            # the bag tree itself must be one tree
            seen = {0}
            stack = [0]
            while stack:
                x = stack.pop()
                for y in adj[x]:
                    if y not in seen:
                        seen.add(y)
                        stack.append(y)
            if len(seen) != len(self.bags) or len(self.edges) != len(self.bags) - 1:
                raise ValueError("bag links do not form a tree")


def min_fill_decomposition(graph: ColoredGraph, vertices=None) -> TreeDecomp:
    """Heuristic decomposition from a min-fill elimination ordering."""
    verts = sorted(range(graph.n)) if vertices is None else sorted(vertices)
    vset = set(verts)
    adj = {v: (graph.adj[v] & vset) for v in verts}

    def fill_in(v) -> int:
        nbrs = list(adj[v])
        missing = 0
        for i, a in enumerate(nbrs):
            for b in nbrs[i + 1:]:
                if b not in adj[a]:
                    missing += 1
        return missing

    bags: list[frozenset] = []
    order_pos: dict[int, int] = {}
    bag_of: dict[int, int] = {}
    edges: list[tuple[int, int]] = []
    elim_nbrs: list[set[int]] = []
    remaining = set(verts)
    while remaining:
        v = min(remaining, key=lambda u: (fill_in(u), len(adj[u]), u))
        nbrs = set(adj[v])
        bags.append(frozenset({v} | nbrs))
        order_pos[v] = len(elim_nbrs)
        bag_of[v] = len(bags) - 1
        elim_nbrs.append(nbrs)
        for a in nbrs:
            adj[a].discard(v)
            for b in nbrs:
                if a != b and b not in adj[a]:
                    adj[a].add(b)
                    adj[b].add(a)
        remaining.remove(v)
        del adj[v]
    # connect each bag to the bag of its earliest-eliminated surviving neighbor
    for v in verts:
        i = order_pos[v]
        later = [u for u in elim_nbrs[i]]
        if later:
            nxt = min(later, key=lambda u: order_pos[u])
            edges.append((bag_of[v], bag_of[nxt]))
    td = TreeDecomp(bags, edges)
    return td


def min_degree_decomposition(graph: ColoredGraph, vertices=None) -> TreeDecomp:
    """Alternative heuristic (min-degree ordering); used for cross-checks."""
    verts = sorted(range(graph.n)) if vertices is None else sorted(vertices)
    vset = set(verts)
    adj = {v: (graph.adj[v] & vset) for v in verts}
    bags: list[frozenset] = []
    order_pos: dict[int, int] = {}
    bag_of: dict[int, int] = {}
    edges: list[tuple[int, int]] = []
    elim_nbrs: list[set[int]] = []
    remaining = set(verts)
    while remaining:
        v = min(remaining, key=lambda u: (len(adj[u]), u))
        nbrs = set(adj[v])
        bags.append(frozenset({v} | nbrs))
        order_pos[v] = len(elim_nbrs)
        bag_of[v] = len(bags) - 1
        elim_nbrs.append(nbrs)
        for a in nbrs:
            adj[a].discard(v)
            for b in nbrs:
                if a != b and b not in adj[a]:
                    adj[a].add(b)
                    adj[b].add(a)
        remaining.remove(v)
        del adj[v]
    for v in verts:
        later = list(elim_nbrs[order_pos[v]])
        if later:
            nxt = min(later, key=lambda u: order_pos[u])
            edges.append((bag_of[v], bag_of[nxt]))
    return TreeDecomp(bags, edges)


# ---------------------------------------------------------------------------
# nice decompositions


@dataclass
class NiceBag:
    vertices: tuple[int, ...]       # sorted
    kind: str                       # leaf | forget | introduce | join
    special: int | None             # forgotten / introduced vertex
    children: list[int]


@dataclass
class NiceTreeDecomp:
    bags: list[NiceBag]
    root: int

    @property
    def width(self) -> int:
        return max(len(b.vertices) for b in self.bags) - 1

    def postorder(self) -> list[int]:
        order = []
        stack = [(self.root, False)]
        while stack:
            x, done = stack.pop()
            if done:
                order.append(x)
            else:
                stack.append((x, True))
                stack.extend((c, False) for c in self.bags[x].children)
        return order

    def validate(self) -> None:
        for i, bag in enumerate(self.bags):
            vs = set(bag.vertices)
            if bag.kind == "leaf":
                if bag.children or len(vs) != 1:
                    raise ValueError(f"bad leaf bag {i}")
            elif bag.kind == "forget":
                (c,) = bag.children
                if set(self.bags[c].vertices) - {bag.special} != vs or bag.special in vs:
                    raise ValueError(f"bad forget bag {i}")
            elif bag.kind == "introduce":
                (c,) = bag.children
                if set(self.bags[c].vertices) | {bag.special} != vs or bag.special not in vs:
                    raise ValueError(f"bad introduce bag {i}")
            elif bag.kind == "join":
                a, b = bag.children
                if not (set(self.bags[a].vertices) == vs == set(self.bags[b].vertices)):
                    raise ValueError(f"bad join bag {i}")
            else:
                raise ValueError(f"unknown bag kind {bag.kind!r}")


def to_nice(td: TreeDecomp) -> NiceTreeDecomp:
    """Normalize into leaf / forget / introduce / join bags."""
    if not td.bags or any(not b for b in td.bags):
        raise ValueError("nice decomposition needs nonempty bags")
    nice: list[NiceBag] = []

    def add(vertices, kind, special, children) -> int:
        nice.append(NiceBag(tuple(sorted(vertices)), kind, special, children))
        return len(nice) - 1

    def leaf_chain(target: frozenset) -> int:
        order = sorted(target)
        cur = add({order[0]}, "leaf", order[0], [])
        have = {order[0]}
        for v in order[1:]:
            have.add(v)
            cur = add(set(have), "introduce", v, [cur])
        return cur

    def morph(cur: int, have: frozenset, target: frozenset) -> int:
        """Forget then introduce, one vertex per bag, to reach target."""
        have = set(have)
        for v in sorted(have - target):
            have.remove(v)
            cur = add(set(have), "forget", v, [cur])
        for v in sorted(target - have):
            have.add(v)
            cur = add(set(have), "introduce", v, [cur])
        return cur

    adj = td.neighbors()
    root_bag = 0
    out: dict[int, int] = {}
    stack = [(root_bag, -1, False)]
    while stack:
        bag_id, parent, done = stack.pop()
        if not done:
            stack.append((bag_id, parent, True))
            stack.extend((c, bag_id, False) for c in adj[bag_id] if c != parent)
            continue
        kids = [c for c in adj[bag_id] if c != parent]
        target = td.bags[bag_id]
        if not kids:
            out[bag_id] = leaf_chain(target)
            continue
        tops = [morph(out.pop(c), td.bags[c], target) for c in kids]
        cur = tops[0]
        for other in tops[1:]:
            cur = add(set(target), "join", None, [cur, other])
        out[bag_id] = cur

    return NiceTreeDecomp(nice, out[root_bag])


# ---------------------------------------------------------------------------
# the bag-table DP

# A bag table maps a canonical partition of the bag (tuple of class ids
# aligned with the sorted bag vertices; 0 = excluded) to a bitset of
# achievable (white, black) pairs, keyed as white*stride + black.

BagTable = dict[tuple[int, ...], int]


def _canon(part: tuple[int, ...]) -> tuple[int, ...]:
    relabel: dict[int, int] = {}
    out = []
    for c in part:
        if c == 0:
            out.append(0)
        else:
            if c not in relabel:
                relabel[c] = len(relabel) + 1
            out.append(relabel[c])
    return tuple(out)


def _merge(table: BagTable, part: tuple[int, ...], bits: int) -> None:
    table[part] = table.get(part, 0) | bits


def _sumset(a: int, b: int) -> int:
    if a.bit_count() > b.bit_count():
        a, b = b, a
    out = 0
    while a:
        low = a & -a
        out |= b << (low.bit_length() - 1)
        a ^= low
    return out


def dp_leaf(color: int, stride: int) -> BagTable:
    included = 1 << (stride if color == 0 else 1)
    return {(0,): 1, (1,): included}


def dp_forget(table: BagTable, child_bag: tuple[int, ...], v: int) -> BagTable:
    """Drop v; partitions whose only witness contact was v cannot survive."""
    pos = child_bag.index(v)
    out: BagTable = {}
    for part, bits in table.items():
        c = part[pos]
        if c != 0 and part.count(c) == 1:
            # v alone witnessed its class; the component can no longer
            # attach to anything, so the partition stops being positive
            continue
        _merge(out, _canon(part[:pos] + part[pos + 1:]), bits)
    return out


def dp_introduce(table: BagTable, child_bag: tuple[int, ...], v: int,
                 color: int, nbrs: set[int], stride: int) -> BagTable:
    """Add v: excluded, as a new singleton class, or fused into any union
    of classes each touching one of its neighbors."""
    new_bag = tuple(sorted(child_bag + (v,)))
    vpos = new_bag.index(v)
    shift = stride if color == 0 else 1
    out: BagTable = {}
    for part, bits in table.items():
        base = list(part[:vpos]) + [0] + list(part[vpos:])
        _merge(out, _canon(tuple(base)), bits)
        fresh = max(part, default=0) + 1
        base[vpos] = fresh
        _merge(out, _canon(tuple(base)), bits << shift)
        eligible = sorted({part[i] for i, u in enumerate(child_bag)
                           if u in nbrs and part[i] != 0})
        for size in range(1, len(eligible) + 1):
            for chosen in combinations(eligible, size):
                chose = set(chosen)
                target = chosen[0]
                merged = [target if (c in chose) else c for c in part]
                merged = merged[:vpos] + [target] + merged[vpos:]
                _merge(out, _canon(tuple(merged)), bits << shift)
    return out


def dp_join(left: BagTable, right: BagTable, bag: tuple[int, ...],
            colors: list[int], stride: int) -> BagTable:
    """Combine tables with identical bags and identical excluded sets.

    Counts add, minus the colors of the shared included vertices (they
    were witnessed on both sides); classes merge by the transitive
    closure of the two same-class relations.
    """
    k = len(bag)
    by_excl: dict[tuple[bool, ...], list[tuple[tuple[int, ...], int]]] = {}
    for part, bits in right.items():
        by_excl.setdefault(tuple(c == 0 for c in part), []).append((part, bits))
    out: BagTable = {}
    for part_l, bits_l in left.items():
        excl = tuple(c == 0 for c in part_l)
        shared_shift = sum(stride if colors[i] == 0 else 1
                           for i in range(k) if not excl[i])
        for part_r, bits_r in by_excl.get(excl, ()):
            parent = list(range(k))

            def find(x):
                while parent[x] != x:
                    parent[x] = parent[parent[x]]
                    x = parent[x]
                return x

            for part in (part_l, part_r):
                firsts: dict[int, int] = {}
                for i, c in enumerate(part):
                    if c == 0:
                        continue
                    if c in firsts:
                        ra, rb = find(firsts[c]), find(i)
                        if ra != rb:
                            parent[rb] = ra
                    else:
                        firsts[c] = i
            combined = tuple(0 if excl[i] else find(i) + 1 for i in range(k))
            bits = _sumset(bits_l, bits_r) >> shared_shift
            _merge(out, _canon(combined), bits)
    return out


def _collect(table: BagTable, acc: int) -> int:
    for part, bits in table.items():
        included = set(part) - {0}
        if len(included) == 1:
            acc |= bits
    return acc


def run_bag_dp(graph: ColoredGraph, nice: NiceTreeDecomp, stride: int) -> int:
    """Bottom-up table computation; returns the union answer bitset."""
    tables: dict[int, BagTable] = {}
    answers = 0
    for x in nice.postorder():
        bag = nice.bags[x]
        if bag.kind == "leaf":
            v = bag.vertices[0]
            t = dp_leaf(graph.color[v], stride)
        elif bag.kind == "forget":
            (c,) = bag.children
            t = dp_forget(tables.pop(c), nice.bags[c].vertices, bag.special)
        elif bag.kind == "introduce":
            (c,) = bag.children
            child_bag = nice.bags[c].vertices
            nbrs = graph.adj[bag.special] & set(child_bag)
            t = dp_introduce(tables.pop(c), child_bag, bag.special,
                             graph.color[bag.special], nbrs, stride)
        else:
            a, b = bag.children
            colors = [graph.color[v] for v in bag.vertices]
            t = dp_join(tables.pop(a), tables.pop(b), bag.vertices, colors, stride)
        tables[x] = t
        answers = _collect(t, answers)
    return answers


def restrict_decomposition(td: TreeDecomp, vertices) -> TreeDecomp:
    """Restrict a decomposition to one component's vertices.

    Empty restricted bags are bypassed (their neighbors reconnect in a
    chain); the per-vertex connectivity property survives because a bag
    between two bags holding v must itself hold v.
    """
    keep = set(vertices)
    bags = [frozenset(b & keep) for b in td.bags]
    alive = [i for i, b in enumerate(bags) if b]
    if not alive:
        raise ValueError("decomposition does not touch the component")
    adj = td.neighbors()
    # walk the original tree, chaining alive bags so the result is a tree
    new_id = {}
    out_bags = []
    out_edges = []
    root = alive[0]
    stack = [(root, -1, None)]  # (bag, parent bag, nearest alive ancestor id)
    while stack:
        x, parent, anchor = stack.pop()
        here = anchor
        if bags[x]:
            nid = new_id.get(x)
            if nid is None:
                nid = len(out_bags)
                new_id[x] = nid
                out_bags.append(bags[x])
            if anchor is not None:
                out_edges.append((anchor, nid))
            here = nid
        stack.extend((y, x, here) for y in adj[x] if y != parent)
    return TreeDecomp(out_bags, out_edges)


def all_queries(graph: ColoredGraph, decomposition: TreeDecomp | None = None) -> set[tuple[int, int]]:
    """Every (white count, black count) achieved by a connected subgraph.

    With a supplied decomposition, it competes with the built-in
    min-fill heuristic and the narrower of the two runs the DP.
    """
    stride = 2 * (graph.n + 1)
    answers = 0
    for comp in graph.components():
        candidates = [min_fill_decomposition(graph, comp)]
        if decomposition is not None:
            restricted = restrict_decomposition(decomposition, comp)
            restricted.validate(graph, comp)
            candidates.append(restricted)
        td = min(candidates, key=lambda t: t.width)
        nice = to_nice(td)
        answers |= run_bag_dp(graph, nice, stride)
    out = set()
    m = answers
    while m:
        low = m & -m
        key = low.bit_length() - 1
        m ^= low
        pair = (key // stride, key % stride)
        if pair != (0, 0):
            out.add(pair)
    return out
