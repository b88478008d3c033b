"""Command-line surface: solve, termsep-solve, generate, bench, verify.

Output is a line-delimited record of `key value` pairs so scripted consumers
can diff runs; timing fields are the only nondeterministic ones.  Exit codes
for the solving commands: 0 feasible, 1 infeasible, 2 error.
"""

from __future__ import annotations

import argparse
import math
import random
import sys
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from . import branching, pipeline
from .multigraph import GraphError, MultiGraph, parse_graph, render_graph
from .pipeline import GuardError, SolveStats
from .relaxation import InstanceError, TermSepInstance, TerminalSeparation


@dataclass
class RunConfig:
    command: str
    input: Optional[str] = None
    k: Optional[int] = None
    engine: str = "branching"
    seed: int = 0
    trace: bool = False
    out: Optional[str] = None


# -- terminal-separation file format -------------------------------------------
#
# Extends the graph format with `t s t` (terminal pair), `a v` / `b v`
# (preassigned vertices) and `k <int>` (budget) records.

def parse_termsep(text: str) -> TermSepInstance:
    graph_lines = []
    pairs = []
    a0, b0 = set(), set()
    k = None
    for ln, raw in enumerate(text.splitlines(), start=1):
        parts = raw.split()
        if not parts or parts[0] in ("c", "p", "e"):
            graph_lines.append(raw)
            continue
        if parts[0] == "t" and len(parts) == 3:
            pairs.append((int(parts[1]), int(parts[2])))
        elif parts[0] == "a" and len(parts) == 2:
            a0.add(int(parts[1]))
        elif parts[0] == "b" and len(parts) == 2:
            b0.add(int(parts[1]))
        elif parts[0] == "k" and len(parts) == 2:
            k = int(parts[1])
        else:
            raise GraphError(f"line {ln}: unknown record {raw!r}")
    if k is None:
        raise GraphError("missing `k <int>` line")
    g = parse_graph("\n".join(graph_lines))
    return TermSepInstance(g, pairs, a0=a0, b0=b0, k=k)


def render_termsep(inst: TermSepInstance, comments=()) -> str:
    lines = [render_graph(inst.g, comments=comments).rstrip("\n")]
    order = sorted(inst.g.vertices())
    relabel = {v: i for i, v in enumerate(order, start=1)}
    for s, t in inst.pairs:
        lines.append(f"t {relabel[s]} {relabel[t]}")
    for v in sorted(inst.a0):
        lines.append(f"a {relabel[v]}")
    for v in sorted(inst.b0):
        lines.append(f"b {relabel[v]}")
    lines.append(f"k {inst.k}")
    return "\n".join(lines) + "\n"


def read_embedded_k(text: str) -> Optional[int]:
    for raw in text.splitlines():
        parts = raw.split()
        if len(parts) == 3 and parts[0] == "c" and parts[1] == "k":
            return int(parts[2])
    return None


# -- record emission ---------------------------------------------------------------

class Record:
    def __init__(self, out_path: Optional[str]) -> None:
        self.lines: list[str] = []
        self.out_path = out_path

    def add(self, key: str, value) -> None:
        if isinstance(value, bool):
            value = "true" if value else "false"
        self.lines.append(f"{key} {value}")

    def flush(self) -> None:
        text = "\n".join(self.lines) + "\n"
        if self.out_path:
            Path(self.out_path).write_text(text)
        sys.stdout.write(text)


def _trace_printer(enabled: bool):
    if not enabled:
        return None

    def emit(event, data):
        fields = " ".join(f"{k}={v}" for k, v in sorted(data.items()))
        sys.stdout.write(f"trace {event} {fields}\n")

    return emit


def _stats_record(rec: Record, stats: SolveStats) -> None:
    rec.add("compress-calls", stats.compress_calls)
    rec.add("nodes", stats.nodes)
    rec.add("leaves", stats.leaves)
    for rule in sorted(stats.rules):
        rec.add(f"rule {rule}", stats.rules[rule])


# -- commands -----------------------------------------------------------------------

def cmd_solve(cfg: RunConfig) -> int:
    rec = Record(cfg.out)
    started = time.perf_counter()
    try:
        g = parse_graph(Path(cfg.input).read_text())
        if cfg.k is None or cfg.k < 0:
            raise GraphError("solve requires a budget --k >= 0")
        rec.add("command", "solve")
        rec.add("input", cfg.input)
        rec.add("engine", cfg.engine)
        rec.add("k", cfg.k)
        stats = SolveStats()
        if cfg.engine == "oracle":
            opt, witness = pipeline.oracle_min_bipartization(g)
            solution = pipeline.Solution(witness) if opt <= cfg.k else None
        else:
            solution = pipeline.solve_edge_bipartization(
                g, cfg.k, engine=cfg.engine, stats=stats)
        feasible = solution is not None
        rec.add("feasible", feasible)
        if feasible:
            rec.add("solution-size", len(solution.edges))
            rec.add("solution", " ".join(str(e) for e in sorted(solution.edges)))
        _stats_record(rec, stats)
        rec.add("time-ms", int(1000 * (time.perf_counter() - started)))
        rec.flush()
        return 0 if feasible else 1
    except (GraphError, InstanceError, GuardError, OSError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


def termsep_optimum_branching(inst: TermSepInstance,
                              stats: Optional[branching.SearchStats] = None
                              ) -> Optional[TerminalSeparation]:
    """Best separation the budget admits: solve, then tighten the budget to
    the witness cost until it stops improving."""
    if stats is None:
        stats = branching.SearchStats()
    best = branching.solve_termsep(inst, stats=stats)
    if best is None:
        return None
    while True:
        cost2 = best.cost2(inst.g)
        probe = inst.clone()
        probe.k = cost2 // 2 - 1
        better = branching.solve_termsep(probe, stats=stats)
        if better is None:
            return best
        best = better


def cmd_termsep(cfg: RunConfig) -> int:
    rec = Record(cfg.out)
    started = time.perf_counter()
    try:
        inst = parse_termsep(Path(cfg.input).read_text())
        if cfg.k is not None:
            inst.k = cfg.k
        inst.trace = _trace_printer(cfg.trace)
        rec.add("command", "termsep-solve")
        rec.add("input", cfg.input)
        rec.add("engine", cfg.engine)
        rec.add("k", inst.k)
        stats = branching.SearchStats()
        if cfg.engine == "branching":
            sep = termsep_optimum_branching(inst, stats=stats)
        elif cfg.engine == "guo":
            sep = pipeline.baseline_guo(inst)
        elif cfg.engine == "oracle":
            found = pipeline.oracle_termsep(inst)
            sep = found[1] if found is not None else None
        else:
            raise InstanceError(f"unknown engine {cfg.engine!r}")
        feasible = sep is not None
        rec.add("feasible", feasible)
        if feasible:
            rec.add("cost", sep.cost2(inst.g) // 2)
            rec.add("side-a", " ".join(str(v) for v in sorted(sep.a)))
            rec.add("side-b", " ".join(str(v) for v in sorted(sep.b)))
        rec.add("nodes", stats.nodes)
        rec.add("leaves", stats.leaves)
        rec.add("time-ms", int(1000 * (time.perf_counter() - started)))
        rec.flush()
        return 0 if feasible else 1
    except (GraphError, InstanceError, GuardError, OSError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


def generate_planted(n: int, m: int, planted_k: int, seed: int) -> MultiGraph:
    """Random bipartite graph with exactly planted_k same-side noise edges,
    so the bipartization optimum is at most planted_k.  Deterministic."""
    rng = random.Random(seed)
    g = MultiGraph()
    for v in range(1, n + 1):
        g.add_vertex(v)
    left = set(rng.sample(range(1, n + 1), n // 2))
    right = set(range(1, n + 1)) - left
    cross = [(u, v) for u in sorted(left) for v in sorted(right)]
    backbone = min(m, len(cross))
    for (u, v) in rng.sample(cross, backbone):
        g.add_edge(u, v)
    same = ([(u, v) for u in sorted(left) for v in sorted(left) if u < v]
            + [(u, v) for u in sorted(right) for v in sorted(right) if u < v])
    rng.shuffle(same)
    for (u, v) in same[:planted_k]:
        g.add_edge(u, v)
    return g


def cmd_generate(cfg: RunConfig, n: int, m: int, planted_k: int) -> int:
    try:
        g = generate_planted(n, m, planted_k, cfg.seed)
        text = render_graph(g, comments=[f"k {planted_k}",
                                         f"seed {cfg.seed}"])
        if cfg.out:
            Path(cfg.out).write_text(text)
        else:
            sys.stdout.write(text)
        return 0
    except (GraphError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


def fit_exponential_base(points: list[tuple[int, int]]) -> Optional[float]:
    """Least-squares slope of log(count) against k, reported as a base."""
    usable = [(k, c) for (k, c) in points if c > 0]
    if len(usable) < 2 or len({k for k, _ in usable}) < 2:
        return None
    ks = [k for k, _ in usable]
    logs = [math.log(c) for _, c in usable]
    mean_k = sum(ks) / len(ks)
    mean_l = sum(logs) / len(logs)
    var = sum((k - mean_k) ** 2 for k in ks)
    cov = sum((k - mean_k) * (l - mean_l) for k, l in zip(ks, logs))
    return math.exp(cov / var)


def cmd_bench(cfg: RunConfig) -> int:
    rec = Record(cfg.out)
    rec.add("command", "bench")
    points: list[tuple[int, int]] = []
    root = Path(cfg.input)
    files = sorted(root.glob("*.graph"))
    for path in files:
        text = path.read_text()
        try:
            g = parse_graph(text)
        except GraphError as exc:
            sys.stderr.write(f"error: {path}: {exc}\n")
            return 2
        try:
            opt, _ = pipeline.oracle_min_bipartization(g)
        except GuardError as exc:
            rec.add("skip", f"{path.name}: {exc}")
            continue
        if opt < 1:
            rec.add("skip", f"{path.name}: already bipartite")
            continue
        stats = SolveStats()
        found = pipeline.solve_edge_bipartization(g, opt - 1, stats=stats)
        if found is not None:
            sys.stderr.write(f"error: {path.name}: beat the oracle optimum\n")
            return 2
        points.append((opt - 1, stats.leaves))
        rec.add(f"instance {path.name}",
                f"k {opt - 1} nodes {stats.nodes} leaves {stats.leaves}")
    base = fit_exponential_base(points)
    rec.add("instances", len(points))
    rec.add("fitted-base", "none" if base is None else f"{base:.4f}")
    rec.flush()
    return 0


def cmd_verify(cfg: RunConfig) -> int:
    rec = Record(cfg.out)
    rec.add("command", "verify")
    mismatches = 0
    root = Path(cfg.input)
    for path in sorted(root.glob("*.graph")):
        text = path.read_text()
        try:
            g = parse_graph(text)
        except GraphError as exc:
            sys.stderr.write(f"error: {path}: {exc}\n")
            return 2
        k = read_embedded_k(text)
        if k is None:
            k = cfg.k
        if k is None:
            rec.add("skip", f"{path.name}: no budget")
            continue
        try:
            opt, _ = pipeline.oracle_min_bipartization(g)
        except GuardError as exc:
            rec.add("skip", f"{path.name}: {exc}")
            continue
        solution = pipeline.solve_edge_bipartization(g, k, engine=cfg.engine)
        ok = (solution is not None) == (opt <= k)
        if solution is not None:
            ok = ok and len(solution.edges) <= k
            ok = ok and pipeline.certify_bipartization(g, solution.edges)
        rec.add(f"instance {path.name}", "ok" if ok else "MISMATCH")
        if not ok:
            mismatches += 1
    for path in sorted(root.glob("*.termsep")):
        try:
            inst = parse_termsep(path.read_text())
        except (GraphError, InstanceError) as exc:
            sys.stderr.write(f"error: {path}: {exc}\n")
            return 2
        try:
            reference = pipeline.oracle_termsep(inst)
        except GuardError as exc:
            rec.add("skip", f"{path.name}: {exc}")
            continue
        sep = termsep_optimum_branching(inst)
        ok = (sep is not None) == (reference is not None)
        if sep is not None and reference is not None:
            ok = ok and sep.cost2(inst.g) == reference[0]
        rec.add(f"instance {path.name}", "ok" if ok else "MISMATCH")
        if not ok:
            mismatches += 1
    rec.add("mismatches", mismatches)
    rec.flush()
    return 0 if mismatches == 0 else 1


# -- argument parsing -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="edgebip",
        description="Exact edge bipartization and terminal separation solver")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, needs_input=True):
        if needs_input:
            p.add_argument("--input", required=True)
        p.add_argument("--k", type=int, default=None)
        p.add_argument("--engine", default="branching",
                       choices=("branching", "guo", "oracle"))
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--trace", action="store_true")
        p.add_argument("--out", default=None)

    common(sub.add_parser("solve", help="edge bipartization on a graph file"))
    common(sub.add_parser("termsep-solve", help="terminal separation instance"))
    gen = sub.add_parser("generate", help="emit a planted instance")
    common(gen, needs_input=False)
    gen.add_argument("--n", type=int, default=12)
    gen.add_argument("--edges", type=int, default=18)
    gen.add_argument("--planted-k", type=int, default=2)
    common(sub.add_parser("bench", help="node-count table over a directory"))
    common(sub.add_parser("verify", help="check solver against oracles"))
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    cfg = RunConfig(command=args.command, input=getattr(args, "input", None),
                    k=args.k, engine=args.engine, seed=args.seed,
                    trace=args.trace, out=args.out)
    if cfg.command == "solve":
        return cmd_solve(cfg)
    if cfg.command == "termsep-solve":
        return cmd_termsep(cfg)
    if cfg.command == "generate":
        return cmd_generate(cfg, args.n, args.edges, args.planted_k)
    if cfg.command == "bench":
        return cmd_bench(cfg)
    if cfg.command == "verify":
        return cmd_verify(cfg)
    raise AssertionError(f"unhandled command {cfg.command}")


if __name__ == "__main__":
    raise SystemExit(main())
