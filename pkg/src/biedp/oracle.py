"""Exact brute-force decision of edge-disjoint-path realizability.

Desk scale only: backtracking over simple alternating paths in the residual
host graph, with degree pruning and interchangeable-vertex collapsing.  A
Feasible answer always carries a verifier-checked realization; Infeasible is
exact.  Budgets turn oversized inputs into ScaleExceeded, never into a wrong
answer.
"""
from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Optional

from .core import (
    SIDE_A,
    SIDE_B,
    DemandGraph,
    Realization,
    Vertex,
    other_side,
    verify_realization,
)
from .report import InternalError

FEASIBLE = "Feasible"
INFEASIBLE = "Infeasible"
SCALE_EXCEEDED = "ScaleExceeded"


@dataclass
class SearchBudget:
    max_n: int = 4
    max_edges: int = 8
    max_nodes: int = 5_000_000
    max_seconds: float = 120.0


@dataclass
class OracleResult:
    status: str
    realization: Optional[Realization] = None
    nodes: int = 0

    def feasible(self) -> bool:
        return self.status == FEASIBLE


class _Exceeded(Exception):
    pass


def edp_decide(d: DemandGraph, budget: SearchBudget | None = None) -> OracleResult:
    """Decide exactly whether the demand graph is realizable in the host.

    Demand instances are routed longest-forced first (monochromatic edges and
    the extra copies of crossing bundles before anything else).  Paths are
    enumerated in ascending vertex order, except that host-B vertices with no
    demands and no used edges are interchangeable and only the least one is
    tried.
    """
    budget = budget or SearchBudget()
    n = d.n
    if n > budget.max_n or d.e() > budget.max_edges:
        return OracleResult(SCALE_EXCEEDED)

    instances = d.label_instances()

    def forced(item: tuple[int, Vertex, Vertex]) -> int:
        lab, u, v = item
        if u.side == v.side:
            return 0
        first = min(l for l, a, b in instances if {a, b} == {u, v})
        return 0 if lab != first else 1

    order = sorted(instances, key=lambda it: (forced(it), it[0]))

    used: set[tuple[Vertex, Vertex]] = set()
    used_at: dict[Vertex, int] = {}
    need: dict[Vertex, int] = {}
    demanded: set[Vertex] = set()
    for _, u, v in instances:
        need[u] = need.get(u, 0) + 1
        need[v] = need.get(v, 0) + 1
        demanded.add(u)
        demanded.add(v)

    deadline = time.monotonic() + budget.max_seconds
    nodes = 0
    paths: dict[int, tuple[Vertex, ...]] = {}
    max_len = 2 * n - 1

    def edge_key(x: Vertex, y: Vertex) -> tuple[Vertex, Vertex]:
        return (x, y) if x.side == SIDE_A else (y, x)

    def degree_ok(x: Vertex) -> bool:
        return n - used_at.get(x, 0) >= need.get(x, 0)

    def take(x: Vertex, y: Vertex) -> None:
        used.add(edge_key(x, y))
        used_at[x] = used_at.get(x, 0) + 1
        used_at[y] = used_at.get(y, 0) + 1

    def give_back(x: Vertex, y: Vertex) -> None:
        used.discard(edge_key(x, y))
        used_at[x] -= 1
        used_at[y] -= 1

    def place(k: int) -> bool:
        nonlocal nodes
        if k == len(order):
            return True
        lab, u, v = order[k]
        need[u] -= 1
        need[v] -= 1
        path = [u]
        on_path = {u}

        def extend(cur: Vertex) -> bool:
            nonlocal nodes
            nodes += 1
            if nodes > budget.max_nodes or time.monotonic() > deadline:
                raise _Exceeded
            opp = other_side(cur.side)
            cands = []
            if v.side == opp and v not in on_path and edge_key(cur, v) not in used:
                cands.append(v)
            if len(path) < max_len:
                fresh_taken = False
                for i in range(1, n + 1):
                    w = Vertex(opp, i)
                    if w == v or w in on_path or edge_key(cur, w) in used:
                        continue
                    if opp == SIDE_B and w not in demanded and used_at.get(w, 0) == 0:
                        if fresh_taken:
                            continue
                        fresh_taken = True
                    cands.append(w)
            for w in cands:
                take(cur, w)
                if degree_ok(cur) and degree_ok(w):
                    if w == v:
                        paths[lab] = tuple(path) + (v,)
                        if place(k + 1):
                            return True
                        del paths[lab]
                    else:
                        path.append(w)
                        on_path.add(w)
                        if extend(w):
                            return True
                        on_path.discard(w)
                        path.pop()
                give_back(cur, w)
            return False

        ok = extend(u)
        if not ok:
            need[u] += 1
            need[v] += 1
        return ok

    try:
        found = place(0)
    except _Exceeded:
        return OracleResult(SCALE_EXCEEDED, nodes=nodes)
    if not found:
        return OracleResult(INFEASIBLE, nodes=nodes)
    realization = Realization(dict(paths))
    check = verify_realization(d, realization)
    if not check:
        raise InternalError(f"oracle produced invalid realization: {check.condition}")
    return OracleResult(FEASIBLE, realization, nodes)
