"""Approximate and exact maximum realizable-subgraph selection.

The approximation partitions the demand edges into matchings within the
Shannon bound, keeps the t largest, and hands the resulting
degree-t-bounded subgraph to a realizer.  Keeping the largest classes
guarantees at least a 2t/(3n) fraction of any realizable subgraph's edges.

For crossing-only demands an exact maximum subgraph of degree at most t is
also available through the classic flow reduction.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_flow

from .coloring import EdgeColoring, greedy_color, shannon_color
from .core import DemandGraph, LabeledMultigraph, Realization, SIDE_A, Vertex
from .oracle import SearchBudget, edp_decide
from .realize_degree import DEG1, degree_conditions, realize_deg1
from .realize_edge import realize_edge
from .report import REALIZED, SolveReport

SHANNON = "shannon"
GREEDY = "greedy"


class ScaleExceeded(Exception):
    pass


@dataclass
class MaxEdpResult:
    subgraph: DemandGraph
    kept_labels: list[int]
    t: int
    class_sizes: list[int]
    partitioner: str
    dropped_for_degree: int
    realization: Optional[Realization] = None
    report: Optional[SolveReport] = None

    def ratio_bound(self) -> float:
        """Guaranteed fraction of the optimum; 2t/(3n) for the Shannon
        partitioner, t/(2*Delta-1) for the greedy fallback."""
        n = self.subgraph.n
        if self.partitioner == SHANNON:
            return 2 * self.t / (3 * n)
        return self.t / max(1, len(self.class_sizes))


def degree_bounded_subgraph(d: DemandGraph, t: int) -> DemandGraph:
    """Maximum-edge subgraph with all degrees <= t.

    Exact (via maximum flow) when every demand edge is crossing; demand
    graphs with monochromatic edges fall back to the matching-partition
    selection, which is degree-feasible but not necessarily maximum.
    """
    if t < 0:
        raise ValueError("t must be nonnegative")
    e_a, e_b, _ = d.part_counts()
    if e_a or e_b:
        kept = _largest_matchings(d, t, SHANNON)[0]
        return _subgraph_from_labels(d, kept)
    n = d.n
    src, snk = 0, 2 * n + 1
    rows, cols, caps = [], [], []
    for i in range(1, n + 1):
        rows.append(src)
        cols.append(i)
        caps.append(t)
        rows.append(n + i)
        cols.append(snk)
        caps.append(t)
    for u, v, m in d.edges:
        a, b = (u, v) if u.side == SIDE_A else (v, u)
        rows.append(a.index)
        cols.append(n + b.index)
        caps.append(m)
    graph = csr_matrix(
        (np.array(caps, dtype=np.int32), (rows, cols)), shape=(2 * n + 2, 2 * n + 2)
    )
    res = maximum_flow(graph, src, snk)
    flow = res.flow
    kept = []
    for u, v, m in d.edges:
        a, b = (u, v) if u.side == SIDE_A else (v, u)
        f = int(flow[a.index, n + b.index])
        if f > 0:
            kept.append((u, v, f))
    return DemandGraph.from_edges(n, kept) if kept else DemandGraph.from_edges(n, [])


def _cap_degrees(d: DemandGraph, cap: int) -> tuple[DemandGraph, int]:
    """Drop copies from the heaviest bundles until all degrees are <= cap."""
    edges = {(u, v): m for u, v, m in d.edges}
    order = [(u, v) for u, v, _ in d.edges]
    dropped = 0
    while True:
        deg: dict[Vertex, int] = {}
        for (u, v), m in edges.items():
            deg[u] = deg.get(u, 0) + m
            deg[v] = deg.get(v, 0) + m
        bad = [v for v, dv in deg.items() if dv > cap]
        if not bad:
            break
        w = min(bad, key=lambda v: (-deg[v], v))
        bundles = [(uv, m) for uv, m in edges.items() if w in uv and m > 0]
        uv = min(bundles, key=lambda it: (-it[1], it[0]))[0]
        edges[uv] -= 1
        dropped += 1
        if edges[uv] == 0:
            del edges[uv]
            order.remove(uv)
    return DemandGraph.from_edges(d.n, [(u, v, edges[(u, v)]) for u, v in order]), dropped


def _largest_matchings(d: DemandGraph, t: int, partitioner: str) -> tuple[list[int], list[int], EdgeColoring]:
    instances = [(lab, u, v) for lab, u, v in d.label_instances()]
    if not instances:
        return [], [], EdgeColoring(0, {})
    if partitioner == SHANNON:
        col = shannon_color(instances)
    else:
        col = greedy_color(instances, max(1, 2 * d.delta() - 1))
    classes = col.classes()
    ranked = sorted(classes, key=lambda c: (-len(classes[c]), c))
    kept: list[int] = []
    for c in ranked[:t]:
        kept.extend(classes[c])
    sizes = [len(classes[c]) for c in ranked]
    return sorted(kept), sizes, col


def _subgraph_from_labels(d: DemandGraph, labels: list[int]) -> DemandGraph:
    keep = set(labels)
    counts: dict[tuple[Vertex, Vertex], int] = {}
    order = []
    for lab, u, v in d.label_instances():
        if lab not in keep:
            continue
        key = (u, v)
        if key not in counts:
            counts[key] = 0
            order.append(key)
        counts[key] += 1
    return DemandGraph.from_edges(d.n, [(u, v, counts[(u, v)]) for u, v in order])


def maxedp_approx(
    d: DemandGraph,
    t: int,
    partitioner: str = SHANNON,
    oracle_fallback: bool = True,
) -> MaxEdpResult:
    """Keep the t largest matchings of the demand partition and realize them.

    Realizer choice: the degree-threshold realizer when t is within its
    bound, else the edge-count realizer when e(D_sub) <= 2n-3, else (at desk
    scale, when enabled) the exact oracle.  When none applies the bare
    subgraph is still returned with ``realization`` unset.
    """
    if t < 1:
        raise ValueError("t must be positive")
    n = d.n
    capped, dropped = (d, 0)
    if d.delta() > n:
        capped, dropped = _cap_degrees(d, n)
    kept, sizes, _ = _largest_matchings(capped, t, partitioner)
    sub = _subgraph_from_labels(capped, kept)
    result = MaxEdpResult(
        subgraph=sub,
        kept_labels=kept,
        t=t,
        class_sizes=sizes,
        partitioner=partitioner,
        dropped_for_degree=dropped,
    )
    if not sub.edges:
        result.realization = Realization({})
        result.report = SolveReport(method="none", outcome=REALIZED)
        return result
    if degree_conditions(sub, DEG1).satisfied:
        result.realization, result.report = realize_deg1(sub)
    elif sub.e() <= 2 * n - 3 and sub.delta() <= n and n >= 2:
        result.realization, result.report = realize_edge(sub)
    elif oracle_fallback:
        res = edp_decide(sub, SearchBudget())
        if res.feasible():
            result.realization = res.realization
            result.report = SolveReport(method="oracle", outcome=REALIZED)
        else:
            result.report = SolveReport(
                method="oracle",
                outcome="MethodFailure",
                detail=f"no competent realizer; oracle said {res.status}",
            )
    else:
        result.report = SolveReport(
            method="none", outcome="MethodFailure", detail="no competent realizer"
        )
    return result


def maxedp_exact(d: DemandGraph, budget: SearchBudget | None = None) -> DemandGraph:
    """Maximum-cardinality realizable subgraph by descending-size subset
    enumeration, each candidate decided by the exact oracle.  Desk scale
    only; ties break toward the lexicographically least kept label set."""
    budget = budget or SearchBudget()
    if d.n > budget.max_n or d.e() > budget.max_edges:
        raise ScaleExceeded(f"n={d.n}, e={d.e()} beyond oracle budget")
    bundles = list(d.edges)

    def vectors(total: int):
        """Multiplicity vectors summing to ``total``, lexicographically
        descending, so earlier bundles (smaller labels) are kept first."""
        def rec(i: int, left: int):
            if i == len(bundles):
                if left == 0:
                    yield ()
                return
            hi = min(bundles[i][2], left)
            lo = max(0, left - sum(b[2] for b in bundles[i + 1:]))
            for m in range(hi, lo - 1, -1):
                for rest in rec(i + 1, left - m):
                    yield (m,) + rest
        return rec(0, total)

    for target in range(d.e(), -1, -1):
        for vec in vectors(target):
            pairs = [
                (u, v, m) for (u, v, _), m in zip(bundles, vec) if m > 0
            ]
            sub = DemandGraph.from_edges(d.n, pairs)
            res = edp_decide(sub, budget)
            if res.status == "ScaleExceeded":
                raise ScaleExceeded("oracle budget exhausted during enumeration")
            if res.feasible():
                return sub
    return DemandGraph.from_edges(d.n, [])
