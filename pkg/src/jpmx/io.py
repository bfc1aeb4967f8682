"""File formats: inputs (string / tree / SLP / graph / PACE-style
decomposition) and the JPMX1 index container.

Index files are JSON with a magic and version; min/max step arrays are
stored as a base value plus base64-packed increment bits, centroid
indexes as a preorder record list, graph indexes as a sorted pair list.
"""

from __future__ import annotations

import base64
import json

from .bitseq import BitSeq, StepArray
from .graphs import ColoredGraph, TreeDecomp
from .grammar import SLP, parse_slp
from .strings import MinMaxIndex
from .trees import CentroidIndex, CentroidRecord, ColoredTree

MAGIC = "JPMX1"
VERSION = 1
KINDS = ("string", "tree", "grammar", "graph")


class ParseError(ValueError):
    """An input file does not follow its format."""


class ValidationError(ValueError):
    """Input parsed but the content is unusable."""


def read_string_file(path: str) -> BitSeq:
    with open(path) as fh:
        text = fh.read()
    data = "".join(text.split())
    if not data:
        raise ParseError(f"{path}: no bits found")
    if set(data) - {"0", "1"}:
        raise ParseError(f"{path}: string files may only contain 0 and 1")
    return BitSeq.from_str(data)


def read_tree_file(path: str) -> ColoredTree:
    """Line 1: node count; then per node "parent color" (-1 marks the root)."""
    with open(path) as fh:
        tokens = fh.read().split()
    if not tokens:
        raise ParseError(f"{path}: empty tree file")
    try:
        n = int(tokens[0])
        rest = [int(t) for t in tokens[1:]]
    except ValueError as e:
        raise ParseError(f"{path}: {e}") from None
    if len(rest) != 2 * n:
        raise ParseError(f"{path}: expected {2 * n} values after the count")
    parent = rest[0::2]
    color = rest[1::2]
    try:
        return ColoredTree(parent, color)
    except ValueError as e:
        raise ValidationError(f"{path}: {e}") from None


def read_slp_file(path: str) -> SLP:
    with open(path) as fh:
        text = fh.read()
    try:
        return parse_slp(text)
    except ValueError as e:
        raise ParseError(f"{path}: {e}") from None


def read_graph_file(path: str) -> ColoredGraph:
    """Line 1: "n m"; line 2: n colors (1 = black); then m "u v" lines (0-based)."""
    with open(path) as fh:
        tokens = fh.read().split()
    try:
        vals = [int(t) for t in tokens]
    except ValueError as e:
        raise ParseError(f"{path}: {e}") from None
    if len(vals) < 2:
        raise ParseError(f"{path}: missing graph header")
    n, m = vals[0], vals[1]
    if len(vals) != 2 + n + 2 * m:
        raise ParseError(f"{path}: expected {2 + n + 2 * m} numbers, found {len(vals)}")
    colors = vals[2: 2 + n]
    flat = vals[2 + n:]
    edges = list(zip(flat[0::2], flat[1::2]))
    try:
        return ColoredGraph(colors, edges)
    except ValueError as e:
        raise ValidationError(f"{path}: {e}") from None


def read_pace_decomposition(path: str) -> TreeDecomp:
    """PACE-style .td: "s td <bags> <width+1> <n>", "b <id> <v...>", edges.

    Bag ids and vertices are 1-based in the file (PACE convention);
    vertices are converted to the 0-based ids of the graph file.
    """
    bags: dict[int, frozenset] = {}
    edges: list[tuple[int, int]] = []
    header = None
    with open(path) as fh:
        for raw in fh:
            line = raw.strip()
            if not line or line.startswith("c"):
                continue
            parts = line.split()
            if parts[0] == "s":
                if header is not None:
                    raise ParseError(f"{path}: duplicate solution line")
                if len(parts) != 5 or parts[1] != "td":
                    raise ParseError(f"{path}: bad solution line {line!r}")
                header = (int(parts[2]), int(parts[3]), int(parts[4]))
            elif parts[0] == "b":
                try:
                    bid = int(parts[1])
                    verts = frozenset(int(v) - 1 for v in parts[2:])
                except ValueError:
                    raise ParseError(f"{path}: bad bag line {line!r}") from None
                bags[bid] = verts
            else:
                try:
                    a, b = int(parts[0]), int(parts[1])
                except (ValueError, IndexError):
                    raise ParseError(f"{path}: bad edge line {line!r}") from None
                edges.append((a - 1, b - 1))
    if header is None:
        raise ParseError(f"{path}: missing 's td' line")
    count = header[0]
    if set(bags) != set(range(1, count + 1)):
        raise ParseError(f"{path}: expected bags 1..{count}")
    ordered = [bags[i] for i in range(1, count + 1)]
    if any(v < 0 for bag in ordered for v in bag):
        raise ValidationError(f"{path}: vertex ids must be positive")
    return TreeDecomp(ordered, edges)


def write_pace_decomposition(td: TreeDecomp, path: str, n: int) -> None:
    with open(path, "w") as fh:
        fh.write(f"s td {len(td.bags)} {td.width + 1} {n}\n")
        for i, bag in enumerate(td.bags, start=1):
            verts = " ".join(str(v + 1) for v in sorted(bag))
            fh.write(f"b {i} {verts}\n".rstrip() + "\n")
        for a, b in td.edges:
            fh.write(f"{a + 1} {b + 1}\n")


# ---------------------------------------------------------------------------
# index persistence


def _step_to_json(sa: StepArray) -> dict:
    return {"base": sa.base, "lo": sa.lo, "length": sa.steps.length,
            "bits": base64.b64encode(sa.steps.buf).decode()}


def _step_from_json(obj: dict) -> StepArray:
    buf = base64.b64decode(obj["bits"])
    return StepArray(obj["base"], BitSeq(obj["length"], buf), obj.get("lo", 0))


def _minmax_to_json(idx: MinMaxIndex) -> dict:
    return {"type": "minmax", "min": _step_to_json(idx.min_arr),
            "max": _step_to_json(idx.max_arr)}


def _minmax_from_json(obj: dict, n: int) -> MinMaxIndex:
    idx = MinMaxIndex(n, _step_from_json(obj["min"]), _step_from_json(obj["max"]))
    if len(idx.min_arr) != n + 1 or len(idx.max_arr) != n + 1:
        raise ValidationError("index arrays do not match the stated size")
    return idx


def _centroid_to_json(ci: CentroidIndex) -> dict:
    records = []

    def walk(rec: CentroidRecord) -> None:
        records.append({"node": rec.node, "size": rec.size,
                        "children": len(rec.children),
                        "min": _step_to_json(rec.index.min_arr),
                        "max": _step_to_json(rec.index.max_arr)})
        for c in rec.children:
            walk(c)

    walk(ci.root)
    return {"type": "centroid", "records": records}


def _centroid_from_json(obj: dict, n: int) -> CentroidIndex:
    records = obj["records"]
    pos = 0

    def build() -> CentroidRecord:
        nonlocal pos
        r = records[pos]
        pos += 1
        idx = MinMaxIndex(r["size"], _step_from_json(r["min"]), _step_from_json(r["max"]))
        children = [build() for _ in range(r["children"])]
        return CentroidRecord(r["node"], r["size"], idx, children)

    root = build()
    if pos != len(records):
        raise ValidationError("trailing centroid records")
    return CentroidIndex(root, n)


def save_index(path: str, kind: str, obj) -> None:
    if kind not in KINDS:
        raise ValueError(f"unknown index kind {kind!r}")
    if kind == "graph":
        n = max((i + j for i, j in obj), default=0)
        body = {"type": "pairs", "pairs": sorted(obj)}
    elif isinstance(obj, CentroidIndex):
        n = obj.n
        body = _centroid_to_json(obj)
    else:
        n = obj.n
        body = _minmax_to_json(obj)
    doc = {"magic": MAGIC, "version": VERSION, "kind": kind, "n": n, "body": body}
    with open(path, "w") as fh:
        json.dump(doc, fh, separators=(",", ":"))
        fh.write("\n")


def load_index(path: str):
    """Returns (kind, object); object is a MinMaxIndex, CentroidIndex, or pair set."""
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as e:
            raise ParseError(f"{path}: not a JPMX index file ({e})") from None
    if not isinstance(doc, dict) or doc.get("magic") != MAGIC:
        raise ValidationError(f"{path}: missing JPMX magic")
    if doc.get("version") != VERSION:
        raise ValidationError(f"{path}: unsupported version {doc.get('version')!r}")
    kind = doc.get("kind")
    if kind not in KINDS:
        raise ValidationError(f"{path}: unknown kind {kind!r}")
    n = doc["n"]
    body = doc["body"]
    if body["type"] == "pairs":
        return kind, {tuple(p) for p in body["pairs"]}
    if body["type"] == "centroid":
        return kind, _centroid_from_json(body, n)
    return kind, _minmax_from_json(body, n)
