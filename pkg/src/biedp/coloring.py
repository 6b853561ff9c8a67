"""Multigraph edge-coloring toolkit.

Works on edge-instance lists ``[(iid, u, v), ...]`` so it can color any
restriction of a working graph.  All routines are deterministic: edges are
processed in instance-id order and ties break toward the lowest color.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence

from .core import SIDE_A, SIDE_B, Vertex

EdgeList = Sequence[tuple[int, Vertex, Vertex]]


class ColoringError(Exception):
    """Raised when a greedy pass finds an edge with no feasible list entry,
    i.e. the caller's list-size precondition was not met."""

    def __init__(self, edge_id: int):
        super().__init__(f"no feasible color for edge instance {edge_id}")
        self.edge_id = edge_id


@dataclass
class EdgeColoring:
    """Proper edge coloring: instance id -> color in 1..k."""

    k: int
    assignment: dict[int, int]

    def class_sizes(self) -> list[int]:
        sizes = [0] * self.k
        for c in self.assignment.values():
            sizes[c - 1] += 1
        return sizes

    def classes(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {c: [] for c in range(1, self.k + 1)}
        for iid in sorted(self.assignment):
            out[self.assignment[iid]].append(iid)
        return out

    def spread(self) -> int:
        sizes = self.class_sizes()
        return max(sizes) - min(sizes) if sizes else 0


def is_proper(edges: EdgeList, coloring: EdgeColoring) -> bool:
    seen: dict[tuple[Vertex, int], int] = {}
    for iid, u, v in edges:
        c = coloring.assignment[iid]
        for w in (u, v):
            if (w, c) in seen:
                return False
            seen[(w, c)] = iid
    return True


def max_degree(edges: EdgeList) -> int:
    deg: dict[Vertex, int] = defaultdict(int)
    for _, u, v in edges:
        deg[u] += 1
        deg[v] += 1
    return max(deg.values(), default=0)


def greedy_color(
    edges: EdgeList,
    k: int,
    lists: Mapping[int, Iterable[int]] | None = None,
) -> EdgeColoring:
    """Greedy proper list edge coloring.

    Without ``lists`` every edge may use 1..k; success is then guaranteed
    whenever k >= 2*Delta - 1.  ``lists`` may hold arbitrary iterables (lazy
    generators are fine); entries are tried in order and the first color not
    present at either endpoint is taken.  Raises ColoringError when an
    edge's list is exhausted.
    """
    used: dict[Vertex, set[int]] = defaultdict(set)
    assignment: dict[int, int] = {}
    for iid, u, v in sorted(edges):
        bad_u, bad_v = used[u], used[v]
        candidates: Iterator[int]
        if lists is None:
            candidates = iter(range(1, k + 1))
        else:
            candidates = iter(lists[iid])
        chosen = None
        for c in candidates:
            if c not in bad_u and c not in bad_v:
                chosen = c
                break
        if chosen is None:
            raise ColoringError(iid)
        assignment[iid] = chosen
        bad_u.add(chosen)
        bad_v.add(chosen)
    return EdgeColoring(k, assignment)


def _two_color_components(
    edges_by_id: dict[int, tuple[Vertex, Vertex]],
    ids: list[int],
) -> list[tuple[bool, list[int]]]:
    """Connected components of the union of two color classes.

    Returns (is_path, edge_ids) per component.  Vertices have degree <= 2
    in the union, so components are paths or cycles (parallel edges count
    as a 2-cycle).
    """
    adj: dict[Vertex, list[int]] = defaultdict(list)
    for iid in ids:
        u, v = edges_by_id[iid]
        adj[u].append(iid)
        adj[v].append(iid)
    seen: set[int] = set()
    comps: list[tuple[bool, list[int]]] = []
    for start in sorted(ids):
        if start in seen:
            continue
        comp = [start]
        seen.add(start)
        for head in edges_by_id[start]:
            x = head
            while True:
                nxt = [e for e in adj[x] if e not in seen]
                if not nxt:
                    break
                e = nxt[0]
                seen.add(e)
                comp.append(e)
                a, b = edges_by_id[e]
                x = b if a == x else a
        deg_in_comp: dict[Vertex, int] = defaultdict(int)
        for e in comp:
            a, b = edges_by_id[e]
            deg_in_comp[a] += 1
            deg_in_comp[b] += 1
        is_path = any(c == 1 for c in deg_in_comp.values())
        comps.append((is_path, comp))
    return comps


def make_equitable(edges: EdgeList, coloring: EdgeColoring, k: int) -> EdgeColoring:
    """Rebalance a proper coloring into an equitable one with exactly k colors.

    Only operation used: swap the two colors along a path component of the
    two-color union that carries one more edge of the heavy color.  An edge
    of the heavy class that avoids every vertex of the light class is such a
    component on its own, which lets the common case (spreading a greedy
    coloring over many empty classes) run in linear time; the general path
    walk is the fallback.
    """
    edges_by_id = {iid: (u, v) for iid, u, v in edges}
    assignment = dict(coloring.assignment)
    if max(assignment.values(), default=0) > k:
        raise ColoringError(-1)
    classes: dict[int, set[int]] = {c: set() for c in range(1, k + 1)}
    for iid, c in assignment.items():
        classes[c].add(iid)
    e = len(assignment)
    floor, ceil = e // k, -(-e // k)

    def recolor(iid: int, frm: int, to: int) -> None:
        assignment[iid] = to
        classes[frm].discard(iid)
        classes[to].add(iid)

    def transfer(x: int, y: int, amount: int) -> int:
        """Move up to ``amount`` edges from class x to class y via odd-path
        swaps; returns the number moved."""
        moved = 0
        vy: set[Vertex] = set()
        for iid in classes[y]:
            vy.update(edges_by_id[iid])
        for iid in sorted(classes[x]):
            if moved == amount:
                return moved
            u, v = edges_by_id[iid]
            if u not in vy and v not in vy:
                recolor(iid, x, y)
                moved += 1
        if moved == amount:
            return moved
        comps = _two_color_components(edges_by_id, sorted(classes[x] | classes[y]))
        for is_path, comp in comps:
            if moved == amount:
                break
            if not is_path:
                continue
            cx = sum(1 for iid in comp if assignment[iid] == x)
            if cx != len(comp) - cx + 1:
                continue
            for iid in comp:
                c = assignment[iid]
                recolor(iid, c, y if c == x else x)
            moved += 1
        return moved

    # phase 1: while some class is above ceil and some below floor, transfer
    # between them until one of the two reaches its bound
    while True:
        over = [c for c in range(1, k + 1) if len(classes[c]) > ceil]
        under = [c for c in range(1, k + 1) if len(classes[c]) < floor]
        if not over or not under:
            break
        x, y = over[0], under[0]
        transfer(x, y, min(len(classes[x]) - ceil, floor - len(classes[y])))

    # phase 2: finishing swaps, every class is now within [floor-1, ceil+?]
    # of the target band and at most k single swaps remain
    while True:
        sizes = {c: len(classes[c]) for c in range(1, k + 1)}
        x = min(sizes, key=lambda c: (-sizes[c], c))
        y = min(sizes, key=lambda c: (sizes[c], c))
        if sizes[x] - sizes[y] <= 1:
            break
        if transfer(x, y, 1) == 0:
            raise AssertionError("no odd path component found in unbalanced union")
    return EdgeColoring(k, assignment)


def shannon_color(edges: EdgeList) -> EdgeColoring:
    """Constructive proper coloring within the Shannon bound floor(3*Delta/2).

    Fan rotation plus two-color chain swaps; the available palette is
    min(Delta + mu, floor(3*Delta/2)) which the argument needs, and the
    result never exceeds floor(3*Delta/2) colors.  Deterministic.
    """
    if not edges:
        return EdgeColoring(0, {})
    deg: dict[Vertex, int] = defaultdict(int)
    mult: dict[tuple[Vertex, Vertex], int] = defaultdict(int)
    for _, u, v in edges:
        deg[u] += 1
        deg[v] += 1
        mult[(u, v) if u <= v else (v, u)] += 1
    delta = max(deg.values())
    mu = max(mult.values())
    k = max(1, min(delta + mu, (3 * delta) // 2))

    color: dict[int, int] = {}
    used: dict[Vertex, dict[int, int]] = defaultdict(dict)  # vertex -> color -> iid
    ends = {iid: (u, v) for iid, u, v in edges}

    def set_color(iid: int, c: int) -> None:
        u, v = ends[iid]
        old = color.get(iid)
        if old is not None:
            del used[u][old]
            del used[v][old]
        color[iid] = c
        used[u][c] = iid
        used[v][c] = iid

    def missing(v: Vertex) -> set[int]:
        return set(range(1, k + 1)) - set(used[v])

    def common_free(u: Vertex, v: Vertex) -> int | None:
        fu, fv = used[u], used[v]
        for c in range(1, k + 1):
            if c not in fu and c not in fv:
                return c
        return None

    def other(iid: int, x: Vertex) -> Vertex:
        u, v = ends[iid]
        return v if u == x else u

    def swap_chain(start: Vertex, a: int, b: int, anchor: Vertex) -> bool:
        """Follow the a/b chain from start (first edge colored b); swap the
        two colors on it unless it reaches the anchor.  True if swapped."""
        chain: list[int] = []
        x, cur = start, b
        while cur in used[x]:
            e = used[x][cur]
            chain.append(e)
            x = other(e, x)
            cur = a if cur == b else b
        if x == anchor:
            return False
        for e in chain:
            u, v = ends[e]
            del used[u][color[e]]
            del used[v][color[e]]
        for e in chain:
            color[e] = a if color[e] == b else b
        for e in chain:
            u, v = ends[e]
            used[u][color[e]] = e
            used[v][color[e]] = e
        return True

    def fold(fan: list[int], rim: list[Vertex], x: Vertex) -> None:
        while True:
            last = rim[-1]
            pick = None
            fu, fv = used[x], used[last]
            for c in range(1, k + 1):
                if c not in fu and c not in fv:
                    pick = c
                    break
            assert pick is not None
            old = color.get(fan[-1])
            set_color(fan[-1], pick)
            if len(fan) == 1:
                return
            idx = None
            for j in range(len(rim) - 1):
                if old not in used[rim[j]]:
                    idx = j
                    break
            assert idx is not None, "fold invariant broken"
            del fan[idx + 1:]
            del rim[idx + 1:]

    for iid, u, v in sorted(edges):
        c = common_free(u, v)
        if c is not None:
            set_color(iid, c)
            continue
        # build a fan anchored at the endpoint of smaller degree
        x, y = (u, v) if (deg[u], u) <= (deg[v], v) else (v, u)
        fan = [iid]
        rim = [y]
        rim_missing = missing(y)
        candidates = [e for e in sorted(used[x].values())]
        done = False
        while not done:
            nxt = None
            for e in candidates:
                if color[e] in rim_missing:
                    nxt = e
                    break
            assert nxt is not None, "fan construction stalled; palette too small"
            candidates.remove(nxt)
            fan.append(nxt)
            z = other(nxt, x)
            rim.append(z)
            rim_missing |= missing(z)
            if missing(z) & missing(x):
                fold(fan, rim, x)
                done = True
                continue
            zm = missing(z)
            for j in range(len(rim) - 1):
                if rim[j] != z and (zm & missing(rim[j])):
                    a = min(zm & missing(rim[j]))
                    b = min(missing(x))
                    if swap_chain(rim[j], a, b, x):
                        del fan[j + 1:]
                        del rim[j + 1:]
                    else:
                        swapped = swap_chain(z, a, b, x)
                        assert swapped, "both chains reached the anchor"
                    fold(fan, rim, x)
                    done = True
                    break
    used_colors = sorted(set(color.values()))
    remap = {c: i + 1 for i, c in enumerate(used_colors)}
    return EdgeColoring(len(used_colors), {iid: remap[c] for iid, c in color.items()})


def abb_coloring(g, n: int) -> EdgeColoring:
    """Two-part coloring of the crossing edges together with the B-side edges.

    Produces a proper coloring with 2*floor(n/2) colors that is equitable on
    the B-side edges (spread <= 1) and almost equitable on the crossing
    edges (spread <= 2).  Construction: split each part into floor(n/2)
    matchings (greedy then rebalanced), sort the B-side matchings by
    decreasing and the crossing matchings by increasing size, and 2-color
    each paired union component by component.

    Requires max degree of the colored subgraph <= n/4.
    """
    half = n // 2
    b_edges = [(iid, u, v) for iid, u, v in g.mono_instances(SIDE_B)]
    ab_edges = [(iid, u, v) for iid, u, v in g.crossing_instances()]
    dmax = max_degree(b_edges + ab_edges)
    if dmax * 4 > n:
        raise ColoringError(-1)

    def matchings(part: EdgeList) -> list[list[int]]:
        if not part:
            return [[] for _ in range(half)]
        k0 = max(1, 2 * max_degree(part) - 1)
        c = greedy_color(part, k0)
        c = make_equitable(part, c, half)
        return [c.classes()[i] for i in range(1, half + 1)]

    ms = matchings(b_edges)
    ns = matchings(ab_edges)
    ms.sort(key=lambda m: (-len(m), m))
    ns.sort(key=lambda m: (len(m), m))

    ends = {iid: (u, v) for iid, u, v in list(b_edges) + list(ab_edges)}
    assignment: dict[int, int] = {}
    for i in range(half):
        m_i, n_i = ms[i], ns[i]
        c1, c2 = 2 * i + 1, 2 * i + 2
        # N-edges touching each B vertex of each M edge (each side has at
        # most one, both matchings)
        n_at: dict[Vertex, int] = {}
        for iid in n_i:
            u, v = ends[iid]
            b = u if u.side == SIDE_B else v
            n_at[b] = iid
        paths3, paths2, m_alone = [], [], []
        attached: set[int] = set()
        for iid in sorted(m_i):
            u, v = ends[iid]
            hits = [n_at[w] for w in (u, v) if w in n_at]
            attached.update(hits)
            if len(hits) == 2:
                paths3.append((iid, hits))
            elif len(hits) == 1:
                paths2.append((iid, hits))
            else:
                m_alone.append(iid)
        n_alone = [iid for iid in sorted(n_i) if iid not in attached]

        m_cnt = {c1: 0, c2: 0}
        n_cnt = {c1: 0, c2: 0}

        def put(iid: int, c: int, part_cnt) -> None:
            assignment[iid] = c
            part_cnt[c] += 1

        for j, (m_edge, hits) in enumerate(paths3):
            mc = c1 if j < len(paths3) // 2 else c2
            put(m_edge, mc, m_cnt)
            for h in hits:
                put(h, c2 if mc == c1 else c1, n_cnt)
        for j, (m_edge, hits) in enumerate(paths2):
            mc = c1 if j < -(-len(paths2) // 2) else c2
            put(m_edge, mc, m_cnt)
            put(hits[0], c2 if mc == c1 else c1, n_cnt)
        for iid in m_alone:
            c = c1 if m_cnt[c1] <= m_cnt[c2] else c2
            put(iid, c, m_cnt)
        for iid in n_alone:
            c = c1 if n_cnt[c1] <= n_cnt[c2] else c2
            put(iid, c, n_cnt)
    return EdgeColoring(2 * half, assignment)
