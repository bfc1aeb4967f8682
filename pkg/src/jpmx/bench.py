"""Input generators and the build-time benchmark.

The benchmark times builder variants over generated inputs, prints a
table, writes the rows as CSV (kind,n,variant,seed,build_ms) and
renders a build-time figure next to the CSV.
"""

from __future__ import annotations

import csv
import statistics
import time

import numpy as np

from .bitseq import BitSeq, build_chunk_tables
from .strings import build_minmax_naive, build_minmax_packed
from .trees import ColoredTree, binarize, build_anchored_arrays, build_index_micro_macro

CSV_FIELDS = ("kind", "n", "variant", "seed", "build_ms")


def gen_string(n: int, seed: int, p_ones: float = 0.5) -> BitSeq:
    rng = np.random.default_rng(seed)
    return BitSeq.from_array((rng.random(n) < p_ones).astype(np.uint8))


def gen_tree(n: int, seed: int, shape: str = "random", p_black: float = 0.5) -> ColoredTree:
    rng = np.random.default_rng(seed)
    color = (rng.random(n) < p_black).astype(int).tolist()
    if shape == "random":
        parent = [-1] + [int(rng.integers(0, v)) for v in range(1, n)]
    elif shape == "path":
        parent = [-1] + list(range(n - 1))
    elif shape == "star":
        parent = [-1] + [0] * (n - 1)
    elif shape == "caterpillar":
        spine = max(1, n // 2)
        parent = [-1] + [v - 1 for v in range(1, spine)]
        parent += [int(rng.integers(0, spine)) for _ in range(spine, n)]
    elif shape == "balanced":
        parent = [-1] + [(v - 1) // 2 for v in range(1, n)]
    else:
        raise ValueError(f"unknown tree shape {shape!r}")
    return ColoredTree(parent, color)

TREE_SHAPES = ("random", "path", "star", "caterpillar", "balanced")


def _time_ms(fn) -> float:
    t0 = time.perf_counter()
    fn()
    return (time.perf_counter() - t0) * 1e3


def bench_string(sizes, reps: int, seed: int, chunk_bits: int | None = None) -> list[dict]:
    rows = []
    for n in sizes:
        for rep in range(reps):
            s = gen_string(n, seed + rep)
            table = build_chunk_tables(chunk_bits) if chunk_bits else None
            rows.append({"kind": "string", "n": n, "variant": "naive",
                         "seed": seed + rep,
                         "build_ms": _time_ms(lambda: build_minmax_naive(s))})
            rows.append({"kind": "string", "n": n, "variant": "packed",
                         "seed": seed + rep,
                         "build_ms": _time_ms(lambda: build_minmax_packed(s, table))})
    return rows


def bench_tree(sizes, reps: int, seed: int, shape: str = "random",
               cap: int | None = None, chunk_bits: int = 8) -> list[dict]:
    rows = []
    table = build_chunk_tables(chunk_bits)
    for n in sizes:
        for rep in range(reps):
            t = gen_tree(n, seed + rep, shape)
            bt = binarize(t)
            rows.append({"kind": "tree", "n": n, "variant": "quadratic",
                         "seed": seed + rep,
                         "build_ms": _time_ms(lambda: build_anchored_arrays(bt))})
            rows.append({"kind": "tree", "n": n, "variant": "micro-macro",
                         "seed": seed + rep,
                         "build_ms": _time_ms(
                             lambda: build_index_micro_macro(bt, cap=cap, table=table))})
    return rows


def summarize(rows: list[dict]) -> list[dict]:
    """Median build time per (kind, n, variant)."""
    groups: dict[tuple, list[float]] = {}
    for r in rows:
        groups.setdefault((r["kind"], r["n"], r["variant"]), []).append(r["build_ms"])
    out = []
    for (kind, n, variant), times in sorted(groups.items()):
        out.append({"kind": kind, "n": n, "variant": variant,
                    "median_ms": statistics.median(times), "runs": len(times)})
    return out


def format_table(summary: list[dict]) -> str:
    lines = [f"{'kind':<8} {'n':>8} {'variant':<12} {'median_ms':>12} {'runs':>5}"]
    for row in summary:
        lines.append(f"{row['kind']:<8} {row['n']:>8} {row['variant']:<12} "
                     f"{row['median_ms']:>12.2f} {row['runs']:>5}")
    return "\n".join(lines)


def write_csv(rows: list[dict], path: str) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=CSV_FIELDS)
        writer.writeheader()
        for r in rows:
            writer.writerow({k: r[k] for k in CSV_FIELDS})


def render_plot(rows: list[dict], path: str) -> None:
    """Build time vs input size, one line per variant, rendered to a file."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    summary = summarize(rows)
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    kinds = sorted({s["kind"] for s in summary})
    for kind in kinds:
        for variant in sorted({s["variant"] for s in summary if s["kind"] == kind}):
            pts = [(s["n"], s["median_ms"]) for s in summary
                   if s["kind"] == kind and s["variant"] == variant]
            pts.sort()
            label = f"{kind}/{variant}" if len(kinds) > 1 else variant
            ax.plot([p[0] for p in pts], [p[1] for p in pts], marker="o", label=label)
    ax.set_xscale("log", base=2)
    ax.set_yscale("log")
    ax.set_xlabel("input size n")
    ax.set_ylabel("median build time (ms)")
    ax.set_title("index build time")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
