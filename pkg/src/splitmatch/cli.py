"""
Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 unreadable or malformed
input, 3 resource budget exceeded.
"""

from __future__ import annotations

import argparse
import csv
import math
import random
import sys
import time
from collections.abc import Sequence
from typing import Optional, TextIO

from .fileformat import ParseError, dump_result, load_result, read_graph, result_document, serialize_graph
from .graph import Graph, GraphError, is_connected, validate_bmatching
from .kernel import KernelBudgetError
from .solver import solve_bmatching
from .splitdecomp import SplitTree, decompose_minimal
from .testkit import gen_bounded_splitwidth, gen_distance_hereditary

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_INPUT = 2
EXIT_BUDGET = 3

BENCH_COLUMNS = [
    "family",
    "n",
    "m",
    "k",
    "rep",
    "decompose_ms",
    "phase1_ms",
    "phase2_ms",
    "total_ms",
    "kernel_calls",
    "cardinality",
]


def _fail(code: int, message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return code


def _load(path: str) -> tuple[Graph, list[int]]:
    return read_graph(path)


def _write(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_solve(args: argparse.Namespace) -> int:
    g, b = _load(args.graph)
    if args.maxmatching:
        b = [1] * g.n
    res = solve_bmatching(g, b, mode=args.mode)
    stats = {
        k: v
        for k, v in res.stats.items()
        if isinstance(v, (int, float, str)) and (args.timings or not k.startswith("time_"))
    }
    _write(dump_result(result_document(g, res.matching, stats)), args.out)
    return EXIT_OK


def format_tree(t: SplitTree) -> str:
    lines = []
    for i, comp in enumerate(t.components):
        names = " ".join(t.label_name(v) for v in comp.vertices)
        lines.append(f"c {i} {len(comp.vertices)} {names}")
    for e in t.edges:
        lines.append(f"t {e.parent} {e.child} {t.label_name(e.parent_marker)} {t.label_name(e.child_marker)}")
    return "\n".join(lines) + "\n"


def format_dot(t: SplitTree) -> str:
    out = ["graph splittree {", "  node [shape=circle];"]
    for i, comp in enumerate(t.components):
        out.append(f"  subgraph cluster_{i} {{")
        out.append(f'    label="C{i}";')
        for v in comp.vertices:
            shape = ", shape=box" if t.is_marker(v) else ""
            out.append(f'    "{t.label_name(v)}" [label="{t.label_name(v)}"{shape}];')
        for u, v in comp.edges:
            out.append(f'    "{t.label_name(u)}" -- "{t.label_name(v)}";')
        out.append("  }")
    for e in t.edges:
        out.append(f'  "{t.label_name(e.parent_marker)}" -- "{t.label_name(e.child_marker)}" [style=dashed];')
    out.append("}")
    return "\n".join(out) + "\n"


def cmd_decompose(args: argparse.Namespace) -> int:
    g, _ = _load(args.graph)
    if not is_connected(g):
        return _fail(EXIT_INPUT, "decompose needs a connected graph")
    t = decompose_minimal(g)
    _write(format_tree(t), args.out)
    if args.dot:
        with open(args.dot, "w", encoding="utf-8") as fh:
            fh.write(format_dot(t))
    return EXIT_OK


def check_result(g: Graph, b: Sequence[int], doc: dict) -> Optional[str]:
    """First problem with a result document, or None."""
    x = [0] * g.m
    for item in doc.get("edges", []):
        if not isinstance(item, list) or len(item) != 3 or not all(isinstance(v, int) for v in item):
            return f"malformed edge entry {item!r}"
        u, v, w = item
        e = g.edge_id(u, v) if 0 <= u < g.n and 0 <= v < g.n else None
        if e is None:
            return f"unknown edge ({u}, {v})"
        if w < 0:
            return f"negative weight on ({u}, {v})"
        x[e] += w
    bad = validate_bmatching(g, b, x)
    if bad is not None:
        return f"capacity violation: {bad.detail}"
    if sum(x) != doc.get("cardinality"):
        return f"cardinality mismatch: edges sum to {sum(x)}, document says {doc.get('cardinality')}"
    return None


def cmd_verify(args: argparse.Namespace) -> int:
    g, b = _load(args.graph)
    try:
        with open(args.result, encoding="utf-8") as fh:
            doc = load_result(fh.read())
    except ValueError as exc:
        return _fail(EXIT_INPUT, f"{args.result}: {exc}")
    problem = check_result(g, b, doc)
    if problem is not None:
        print(f"invalid: {problem}")
        return EXIT_VERIFY
    print(f"ok: cardinality {doc['cardinality']}")
    return EXIT_OK


def _generate(family: str, n: int, k: int, seed: int) -> Graph:
    if family == "dh":
        return gen_distance_hereditary(n, seed)
    return gen_bounded_splitwidth(k, n, seed)


def _capacities(n: int, bmax: int, seed: int) -> list[int]:
    if bmax <= 1:
        return [1] * n
    rng = random.Random(seed)
    return [rng.randint(0, bmax) for _ in range(n)]


def cmd_gen(args: argparse.Namespace) -> int:
    g = _generate(args.family, args.n, args.k, args.seed)
    b = _capacities(g.n, args.bmax, args.seed)
    comment = f"family={args.family} n={args.n} k={args.k} seed={args.seed}"
    _write(serialize_graph(g, b, comment), args.out)
    return EXIT_OK


def parse_sizes(text: str) -> list[int]:
    """Comma-separated sizes; ``2^a..2^b`` expands to every power of two in between."""
    out: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if ".." in part:
            lo, hi = part.split("..")
            a, c = _pow2_exponent(lo), _pow2_exponent(hi)
            out.extend(2**e for e in range(a, c + 1))
        elif part.startswith("2^"):
            out.append(2 ** int(part[2:]))
        else:
            out.append(int(part))
    return out


def _pow2_exponent(text: str) -> int:
    text = text.strip()
    if text.startswith("2^"):
        return int(text[2:])
    v = int(text)
    if v <= 0 or v & (v - 1):
        raise ValueError(f"{text} is not a power of two")
    return v.bit_length() - 1


def fit_slope(rows: Sequence[dict]) -> float:
    """Least-squares slope of log(total_ms) against log(n + m), one point per size (best rep)."""
    import numpy as np

    best: dict[tuple[int, int], float] = {}
    for r in rows:
        key = (r["n"], r["m"])
        best[key] = min(best.get(key, math.inf), r["total_ms"])
    if len(best) < 2:
        return math.nan
    xs = np.log([n + m for n, m in best])
    ys = np.log([max(t, 1e-6) for t in best.values()])
    return float(np.polyfit(xs, ys, 1)[0])


def run_bench(
    family: str, sizes: Sequence[int], k: int, reps: int, seed: int, bmax: int = 1, log: Optional[TextIO] = None
) -> list[dict]:
    rows = []
    for n in sizes:
        g = _generate(family, n, k, seed + n)
        b = _capacities(g.n, bmax, seed + n)
        for rep in range(reps):
            t0 = time.perf_counter()
            res = solve_bmatching(g, b)
            total = (time.perf_counter() - t0) * 1e3
            if validate_bmatching(g, b, res.matching) is not None or sum(res.matching) != res.cardinality:
                raise RuntimeError(f"invalid result for n={n} rep={rep}")
            s = res.stats
            row = {
                "family": family,
                "n": g.n,
                "m": g.m,
                "k": s["split_width"],
                "rep": rep,
                "decompose_ms": round(s["time_decompose_ms"], 3),
                "phase1_ms": round(s["time_phase1_ms"], 3),
                "phase2_ms": round(s["time_phase2_ms"], 3),
                "total_ms": round(total, 3),
                "kernel_calls": s["kernel_calls_phase1"] + s["kernel_calls_phase2"],
                "cardinality": res.cardinality,
            }
            rows.append(row)
            if log is not None:
                print(f"{family} n={g.n} m={g.m} rep={rep} total={total:.1f}ms", file=log, flush=True)
    return rows


def cmd_bench(args: argparse.Namespace) -> int:
    # warm-up: imports and first-call overheads stay out of the table
    solve_bmatching(gen_distance_hereditary(64, 0), [1] * 64)
    rows = run_bench(args.family, parse_sizes(args.sizes), args.k, args.reps, args.seed, args.bmax, sys.stderr)
    fh = open(args.out, "w", newline="", encoding="utf-8") if args.out else sys.stdout
    try:
        writer = csv.DictWriter(fh, fieldnames=BENCH_COLUMNS)
        writer.writeheader()
        writer.writerows(rows)
    finally:
        if args.out:
            fh.close()
    print(f"# slope log(total_ms) vs log(n+m): {fit_slope(rows):.3f}", file=sys.stderr if not args.out else sys.stdout)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="splitmatch", description="b-matching on graphs of bounded split-width")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="solve b-matching on a graph file")
    s.add_argument("graph")
    s.add_argument("--mode", choices=["auto", "kernel", "splitdp"], default="auto")
    s.add_argument("--maxmatching", action="store_true", help="ignore capacities and use b = 1")
    s.add_argument("--out")
    s.add_argument("--timings", action="store_true", help="include wall-clock timings in stats")
    s.set_defaults(func=cmd_solve)

    d = sub.add_parser("decompose", help="print the minimal split decomposition")
    d.add_argument("graph")
    d.add_argument("--out")
    d.add_argument("--dot", help="also write a Graphviz file")
    d.set_defaults(func=cmd_decompose)

    v = sub.add_parser("verify", help="check a result document against a graph file")
    v.add_argument("graph")
    v.add_argument("result")
    v.set_defaults(func=cmd_verify)

    gn = sub.add_parser("gen", help="generate a graph file")
    gn.add_argument("--family", choices=["dh", "swk"], default="dh")
    gn.add_argument("--n", type=int, required=True)
    gn.add_argument("--k", type=int, default=5)
    gn.add_argument("--seed", type=int, default=0)
    gn.add_argument("--bmax", type=int, default=1, help="capacities uniform in 0..bmax (1 means all ones)")
    gn.add_argument("--out")
    gn.set_defaults(func=cmd_gen)

    bn = sub.add_parser("bench", help="time the solver over a range of sizes")
    bn.add_argument("--family", choices=["dh", "swk"], default="dh")
    bn.add_argument("--k", type=int, default=5)
    bn.add_argument("--sizes", default="2^10..2^14")
    bn.add_argument("--reps", type=int, default=1)
    bn.add_argument("--seed", type=int, default=0)
    bn.add_argument("--bmax", type=int, default=1)
    bn.add_argument("--out")
    bn.set_defaults(func=cmd_bench)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        return _fail(EXIT_INPUT, f"{getattr(args, 'graph', '')}: {exc}")
    except (GraphError, OSError) as exc:
        return _fail(EXIT_INPUT, str(exc))
    except KernelBudgetError as exc:
        return _fail(EXIT_BUDGET, str(exc))


if __name__ == "__main__":
    sys.exit(main())
