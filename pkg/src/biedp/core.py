"""Demand graphs, labeled multigraphs, lifting, and realization checking.

The host graph is always the complete bipartite graph on vertex classes
A = {a_1..a_n} and B = {b_1..b_n}.  A demand graph is a loopless multigraph
on A ∪ B; realizing it means routing one path in the host graph per demand
edge so that no host edge is used twice.

Every demand edge instance carries a stable integer label.  Lifting an
instance (x, y) to a vertex z replaces it with two instances (x, z), (z, y)
under the same label, so the instances of one label always form a walk
between the original endpoints.  Once the working graph is a simple
subgraph of the host graph, the walks are read back out as paths.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple

SIDE_A = "A"
SIDE_B = "B"


def other_side(side: str) -> str:
    return SIDE_B if side == SIDE_A else SIDE_A


class Vertex(NamedTuple):
    side: str
    index: int

    def __repr__(self) -> str:
        return f"{self.side.lower()}{self.index}"


def A(i: int) -> Vertex:
    return Vertex(SIDE_A, i)


def B(i: int) -> Vertex:
    return Vertex(SIDE_B, i)


def parse_vertex(token: str) -> Vertex:
    """Parse 'a3' / 'b12' notation."""
    side = token[0].lower()
    if side not in ("a", "b") or not token[1:].isdigit():
        raise ValueError(f"bad vertex token {token!r}")
    return Vertex(SIDE_A if side == "a" else SIDE_B, int(token[1:]))


class EdgeLabel(NamedTuple):
    """Identity of one demand-edge instance.  Synthetic labels mark padding
    edges added by a solver; they never appear in final output."""

    id: int
    synthetic: bool


def _norm_pair(u: Vertex, v: Vertex) -> tuple[Vertex, Vertex]:
    return (u, v) if u <= v else (v, u)


class GraphError(Exception):
    pass


@dataclass(frozen=True)
class DemandGraph:
    """Immutable demand multigraph.

    ``edges`` keeps one entry per unordered vertex pair (multiplicities
    aggregated), in first-occurrence order so that file round trips and the
    label numbering stay stable.
    """

    n: int
    edges: tuple[tuple[Vertex, Vertex, int], ...]

    @staticmethod
    def from_edges(n: int, pairs: Iterable[tuple[Vertex, Vertex, int]]) -> "DemandGraph":
        if n < 1:
            raise GraphError(f"n must be positive, got {n}")
        order: list[tuple[Vertex, Vertex]] = []
        mult: dict[tuple[Vertex, Vertex], int] = {}
        for u, v, m in pairs:
            if m < 1:
                raise GraphError(f"multiplicity must be positive on {u}{v}")
            for w in (u, v):
                if not 1 <= w.index <= n:
                    raise GraphError(f"vertex {w} out of range 1..{n}")
            if u == v:
                raise GraphError(f"loop at {u}")
            key = _norm_pair(u, v)
            if key not in mult:
                order.append(key)
                mult[key] = 0
            mult[key] += m
        return DemandGraph(n, tuple((u, v, mult[(u, v)]) for u, v in order))

    def e(self) -> int:
        return sum(m for _, _, m in self.edges)

    def degree(self, v: Vertex) -> int:
        return sum(m for a, b, m in self.edges if v in (a, b))

    def delta(self) -> int:
        deg: dict[Vertex, int] = defaultdict(int)
        for u, v, m in self.edges:
            deg[u] += m
            deg[v] += m
        return max(deg.values(), default=0)

    def mu(self, u: Vertex, v: Vertex) -> int:
        key = _norm_pair(u, v)
        for a, b, m in self.edges:
            if (a, b) == key:
                return m
        return 0

    def part_counts(self) -> tuple[int, int, int]:
        """(e(D[A]), e(D[B]), e(D[A,B])) with multiplicity."""
        e_a = e_b = e_ab = 0
        for u, v, m in self.edges:
            if u.side == v.side:
                if u.side == SIDE_A:
                    e_a += m
                else:
                    e_b += m
            else:
                e_ab += m
        return e_a, e_b, e_ab

    def label_instances(self) -> list[tuple[int, Vertex, Vertex]]:
        """One record per edge instance; labels are consecutive integers in
        edge order, copies of a bundle contiguous."""
        out = []
        lab = 0
        for u, v, m in self.edges:
            for _ in range(m):
                out.append((lab, u, v))
                lab += 1
        return out

    def label_endpoints(self) -> dict[int, tuple[Vertex, Vertex]]:
        return {lab: (u, v) for lab, u, v in self.label_instances()}


@dataclass
class Realization:
    """Map from demand-edge label to a host-graph path (vertex sequence)."""

    paths: dict[int, tuple[Vertex, ...]]

    def max_path_len(self) -> int:
        return max((len(p) - 1 for p in self.paths.values()), default=0)


class LabeledMultigraph:
    """Mutable working multigraph whose edge instances carry labels.

    Incidence and pair-multiplicity indexes are kept up to date in O(1) per
    lift.  Vertex set is A ∪ B for a fixed n; callers that work on shrinking
    sub-instances simply restrict which vertices they touch.
    """

    def __init__(self, n: int):
        if n < 1:
            raise GraphError(f"n must be positive, got {n}")
        self.n = n
        self._inst: dict[int, tuple[int, Vertex, Vertex]] = {}
        self._at: dict[Vertex, set[int]] = defaultdict(set)
        self._adj: dict[Vertex, dict[Vertex, int]] = defaultdict(dict)
        self.synthetic: set[int] = set()
        self._next_inst = 0
        self._next_label = 0
        self.lift_count = 0

    # -- construction -------------------------------------------------

    @staticmethod
    def from_demand(d: DemandGraph) -> "LabeledMultigraph":
        g = LabeledMultigraph(d.n)
        for lab, u, v in d.label_instances():
            g._add(lab, u, v)
            g._next_label = lab + 1
        return g

    def _add(self, label: int, u: Vertex, v: Vertex) -> int:
        if u == v:
            raise GraphError(f"loop at {u}")
        iid = self._next_inst
        self._next_inst += 1
        self._inst[iid] = (label, u, v)
        self._at[u].add(iid)
        self._at[v].add(iid)
        self._adj[u][v] = self._adj[u].get(v, 0) + 1
        self._adj[v][u] = self._adj[v].get(u, 0) + 1
        return iid

    def _remove(self, iid: int) -> tuple[int, Vertex, Vertex]:
        label, u, v = self._inst.pop(iid)
        self._at[u].discard(iid)
        self._at[v].discard(iid)
        for x, y in ((u, v), (v, u)):
            m = self._adj[x][y] - 1
            if m:
                self._adj[x][y] = m
            else:
                del self._adj[x][y]
        return label, u, v

    def add_synthetic(self, u: Vertex, v: Vertex) -> int:
        label = self._next_label
        self._next_label += 1
        self.synthetic.add(label)
        return self._add(label, u, v)

    def edge_label(self, label: int) -> EdgeLabel:
        return EdgeLabel(label, label in self.synthetic)

    # -- queries ------------------------------------------------------

    def e(self) -> int:
        return len(self._inst)

    def instance(self, iid: int) -> tuple[int, Vertex, Vertex]:
        return self._inst[iid]

    def instances(self) -> list[tuple[int, int, Vertex, Vertex]]:
        """(iid, label, u, v) sorted by instance id."""
        return [(i, *self._inst[i]) for i in sorted(self._inst)]

    def instances_at(self, v: Vertex) -> list[int]:
        return sorted(self._at[v])

    def degree(self, v: Vertex) -> int:
        return len(self._at[v])

    def delta(self) -> int:
        return max((len(s) for s in self._at.values()), default=0)

    def mu(self, u: Vertex, v: Vertex) -> int:
        return self._adj[u].get(v, 0)

    def max_multiplicity(self) -> int:
        return max((max(d.values()) for d in self._adj.values() if d), default=0)

    def neighbors(self, v: Vertex, side: str | None = None) -> set[Vertex]:
        nbrs = self._adj[v]
        if side is None:
            return set(nbrs)
        return {w for w in nbrs if w.side == side}

    def gamma(self, v: Vertex, side: str) -> int:
        return sum(1 for w in self._adj[v] if w.side == side)

    def mono_instances(self, side: str) -> list[tuple[int, Vertex, Vertex]]:
        """(iid, u, v) for edges inside one class, id order."""
        out = []
        for iid in sorted(self._inst):
            _, u, v = self._inst[iid]
            if u.side == side and v.side == side:
                out.append((iid, u, v))
        return out

    def crossing_instances(self) -> list[tuple[int, Vertex, Vertex]]:
        out = []
        for iid in sorted(self._inst):
            _, u, v = self._inst[iid]
            if u.side != v.side:
                out.append((iid, u, v))
        return out

    def has_mono(self, side: str) -> bool:
        for _, u, v in self._inst.values():
            if u.side == side and v.side == side:
                return True
        return False

    def labels_of(self) -> dict[int, list[int]]:
        """label -> sorted instance ids."""
        out: dict[int, list[int]] = defaultdict(list)
        for iid in sorted(self._inst):
            out[self._inst[iid][0]].append(iid)
        return out

    # -- mutation -----------------------------------------------------

    def lift(self, iid: int, z: Vertex) -> tuple[int, int] | None:
        """Lift instance ``iid`` to vertex ``z``.

        Replaces the instance (x, y) with (x, z), (z, y) under the same
        label.  A no-op when z is an endpoint.  Returns the two new instance
        ids, or None for the no-op case.
        """
        if iid not in self._inst:
            raise GraphError(f"instance {iid} not in graph")
        label, u, v = self._inst[iid]
        if z in (u, v):
            return None
        self._remove(iid)
        self.lift_count += 1
        return self._add(label, u, z), self._add(label, z, v)

    def replace_with_path(self, iid: int, path: list[Vertex]) -> list[int]:
        """Replace an instance with the chain of edges along ``path``.

        Equivalent to a sequence of lifts; ``path`` must join the instance's
        endpoints (in either orientation).
        """
        label, u, v = self._inst[iid]
        if {path[0], path[-1]} != {u, v}:
            raise GraphError(f"path endpoints {path[0]},{path[-1]} do not match {u},{v}")
        self._remove(iid)
        self.lift_count += len(path) - 2
        return [self._add(label, path[k], path[k + 1]) for k in range(len(path) - 1)]


class ResolveError(Exception):
    """Target list handed to resolve() was unusable; a caller bug, not a
    statement about the demand graph."""


def resolve(
    g: LabeledMultigraph,
    v: Vertex,
    target_order: list[Vertex] | None = None,
    forbidden: Iterable[Vertex] = (),
    avoid: Iterable[Vertex] = (),
) -> list[tuple[int, Vertex]]:
    """Lift away every monochromatic edge and every excess parallel copy at
    ``v`` so that only simple crossing edges remain there.

    Exactly d(v) - gamma_opposite(v) lifts are performed, each consuming a
    distinct target from ``target_order`` (default: opposite class in
    ascending index).  ``forbidden`` vertices are never used; ``avoid``
    vertices are used only once everything else is exhausted.  Returns the
    (instance id, target) pairs in the order applied.
    """
    opp = other_side(v.side)
    mono = [iid for iid, _, _ in g.mono_instances(v.side) if v in g._inst[iid][1:]]
    excess: list[int] = []
    by_partner: dict[Vertex, list[int]] = defaultdict(list)
    for iid in g.instances_at(v):
        _, a, b = g._inst[iid]
        w = b if a == v else a
        if w.side == opp:
            by_partner[w].append(iid)
    for w in sorted(by_partner):
        copies = sorted(by_partner[w])
        excess.extend(copies[1:])
    lifts = sorted(mono) + sorted(excess)
    if not lifts:
        return []

    banned = set(forbidden) | g.neighbors(v, opp) | {v}
    if target_order is None:
        target_order = [Vertex(opp, i) for i in range(1, g.n + 1)]
    soft = set(avoid)
    usable = [t for t in target_order if t not in banned]
    ordered = [t for t in usable if t not in soft] + [t for t in usable if t in soft]
    if len(ordered) < len(lifts):
        raise ResolveError(
            f"resolve({v}): need {len(lifts)} targets, only {len(ordered)} available"
        )
    seen: set[Vertex] = set()
    out = []
    ti = 0
    for iid in lifts:
        while ordered[ti] in seen:
            ti += 1
        t = ordered[ti]
        seen.add(t)
        g.lift(iid, t)
        out.append((iid, t))
    return out


class ExtractionError(Exception):
    """A label's instances did not form a walk between its demand endpoints;
    indicates a solver bug."""


def _euler_trail(edges: list[tuple[Vertex, Vertex]], start: Vertex, end: Vertex) -> list[Vertex]:
    """Hierholzer trail from start to end using every edge once."""
    adj: dict[Vertex, list[int]] = defaultdict(list)
    for k, (u, v) in enumerate(edges):
        adj[u].append(k)
        adj[v].append(k)
    for lst in adj.values():
        lst.sort(key=lambda k: min(edges[k]))
    used = [False] * len(edges)
    path: list[Vertex] = []
    stack: list[Vertex] = [start]
    ptr: dict[Vertex, int] = defaultdict(int)
    while stack:
        x = stack[-1]
        advanced = False
        while ptr[x] < len(adj[x]):
            k = adj[x][ptr[x]]
            if used[k]:
                ptr[x] += 1
                continue
            used[k] = True
            u, v = edges[k]
            stack.append(v if u == x else u)
            advanced = True
            break
        if not advanced:
            path.append(stack.pop())
    path.reverse()
    if not all(used) or path[0] != start or path[-1] != end:
        raise ExtractionError("label edges do not form a walk between the endpoints")
    return path


def _erase_loops(walk: list[Vertex]) -> list[Vertex]:
    pos: dict[Vertex, int] = {}
    out: list[Vertex] = []
    for w in walk:
        if w in pos:
            for x in out[pos[w] + 1:]:
                del pos[x]
            del out[pos[w] + 1:]
        else:
            pos[w] = len(out)
            out.append(w)
    return out


def extract_paths(g: LabeledMultigraph, d: DemandGraph) -> Realization:
    """Assemble each non-synthetic label's instances into a simple path.

    Requires ``g`` to be a simple subgraph of the host graph (no parallel
    instances, no edges inside a class).  Cycles hanging off a label's walk
    are pruned away; synthetic labels are dropped.
    """
    if g.max_multiplicity() > 1:
        raise ExtractionError("graph has parallel edges; not a host subgraph")
    if g.has_mono(SIDE_A) or g.has_mono(SIDE_B):
        raise ExtractionError("graph has monochromatic edges; not a host subgraph")
    endpoints = d.label_endpoints()
    groups = g.labels_of()
    paths: dict[int, tuple[Vertex, ...]] = {}
    for label, (u, v) in endpoints.items():
        iids = groups.get(label)
        if not iids:
            raise ExtractionError(f"label {label} has no instances")
        edges = [g._inst[i][1:] for i in iids]
        walk = _euler_trail(edges, u, v)
        path = _erase_loops(walk)
        if path[0] != u or path[-1] != v:
            raise ExtractionError(f"label {label}: pruned walk lost an endpoint")
        paths[label] = tuple(path)
    return Realization(paths)


@dataclass
class VerifyResult:
    ok: bool
    condition: str | None = None
    witness: object = None

    def __bool__(self) -> bool:
        return self.ok


OK = VerifyResult(True)


def verify_realization(d: DemandGraph, r: Realization) -> VerifyResult:
    """Check a realization against its demand graph.

    Conditions, in reporting order: (i) one path per demand instance,
    (ii) path endpoints match the demand edge, (iii) paths alternate sides,
    (iv) no host edge used twice anywhere, (v) no repeated vertex in a path.
    """
    want = d.label_endpoints()
    if set(r.paths) != set(want):
        missing = set(want) ^ set(r.paths)
        return VerifyResult(False, "i:path-per-edge", sorted(missing)[:4])
    for label, path in r.paths.items():
        u, v = want[label]
        if len(path) < 2 or {path[0], path[-1]} != {u, v}:
            return VerifyResult(False, "ii:endpoints", (label, path))
    for label, path in r.paths.items():
        for k in range(len(path) - 1):
            if path[k].side == path[k + 1].side:
                return VerifyResult(False, "iii:alternation", (label, path[k], path[k + 1]))
        for w in path:
            if not 1 <= w.index <= d.n:
                return VerifyResult(False, "iii:alternation", (label, w))
    used: dict[tuple[Vertex, Vertex], int] = {}
    for label in sorted(r.paths):
        path = r.paths[label]
        for k in range(len(path) - 1):
            key = _norm_pair(path[k], path[k + 1])
            if key in used:
                return VerifyResult(False, "iv:edge-reuse", (key, used[key], label))
            used[key] = label
    for label, path in r.paths.items():
        if len(set(path)) != len(path):
            return VerifyResult(False, "v:vertex-repeat", (label, path))
    return OK
