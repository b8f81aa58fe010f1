"""Lowest-reduced-cost route over the current relaxation, as a shortest path.

Search nodes are (u, M1, d): the route sits at customer u with d units of
capacity left (before servicing u) and has visited every customer in
M1 (a subset of u's ng neighbors).  The source is the start depot with full
capacity; edges consume one precomputed arc each and land on
(v, M2, d - arc demand) with M2 = ng(v) & (M1 | arc customers | u).

Both solvers return the same objective:

* dijkstra: best-first search.  Priorities are raw costs shifted by a
  potential; with no heuristic table the potential is -offset_rate * d
  (the demand-proportional offset that makes every edge nonnegative),
  with one it is the exact cost-to-sink on the empty-memory graph, which
  stays a consistent lower bound as ng sets grow.
* bellman_ford: relax every node of the current graph in decreasing-capacity
  order.  Slower, used as a cross-check.

A popped node is skipped when an already expanded node with the same
(u, M1) has strictly more capacity at strictly lower cost.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

import numpy as np

from .instances import Instance
from .neighbors import NeighborSets
from .routes import Route, DualSolution
from .arcs import ComponentPathTable, ArcIndex, _SINK

MODES = ("dijkstra", "bellman_ford")

_SOURCE_KEY = (-1, 0, -1)
_SINK_KEY = (0, 0, 0)


@dataclass
class PricingDiagnostics:
    mode: str
    nodes_expanded: int
    edges_relaxed: int
    offset_rate: float
    adjusted_cost: float
    used_heuristic: bool
    used_dominance: bool


@dataclass
class PricingResult:
    route: Route
    reduced_cost: float
    diagnostics: PricingDiagnostics


@dataclass
class HeuristicTable:
    """h[u, d]: exact cost-to-sink from (u, d) when every ng set is empty.

    Admissible for every node (u, M1, d): growing memory only removes paths.
    """

    h: np.ndarray  # (n+1, d0+1); +inf where d < demand(u)

    def value(self, u: int, d: int) -> float:
        return float(self.h[u, d])


def compute_offset_rate(index: ArcIndex, duals: DualSolution) -> float:
    """Smallest nonnegative per-demand offset with all edge weights >= 0.

    max(0, -min over arcs of reduced_cost / arc_demand), scanned over the
    whole arc table so the value stays valid as ng sets grow.
    """
    index.bind_duals(duals)
    return index.offset_rate()


def compute_heuristic(inst: Instance, sets: NeighborSets, table: ComponentPathTable,
                      duals: DualSolution, index: ArcIndex | None = None) -> HeuristicTable:
    """Cost-to-sink table on the empty-memory graph, one pass per pricing call."""
    index = index or ArcIndex(table, sets, inst.capacity)
    index.bind_duals(duals)
    n, d0 = inst.n, inst.capacity
    dense = index._base_dense  # group minima over all arcs: the empty-memory view
    sink = index._base_sink
    h = np.full((n + 1, d0 + 1), np.inf)
    for d in range(1, d0 + 1):
        for u in inst.customers:
            if d < inst.demand[u]:
                continue
            best = sink[u][d]
            if d >= 2:
                grid = dense[u][1:, 1:d + 1] + h[1:, d - 1::-1]
                m = float(grid.min()) if grid.size else np.inf
                if m < best:
                    best = m
            h[u, d] = best
    return HeuristicTable(h=h)


def solve_la_pricing(inst: Instance, sets: NeighborSets, table: ComponentPathTable,
                     duals: DualSolution, mode: str = "dijkstra", *,
                     index: ArcIndex | None = None,
                     heuristic: HeuristicTable | None = None,
                     use_dominance: bool = True,
                     prune_bound: float = np.inf) -> PricingResult:
    """Minimum-reduced-cost route of the relaxation under the current ng sets.

    With a finite prune_bound the search may discard everything at or above
    the bound; the returned value is then exact only when it beats the bound
    (callers holding a route that attains the bound lose nothing).
    """
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    index = index or ArcIndex(table, sets, inst.capacity)
    index.bind_duals(duals)
    if mode == "dijkstra":
        dist, parent, diag = _best_first(
            inst, index, duals, heuristic, use_dominance, prune_bound
        )
    else:
        dist, parent, diag = _relax_all(inst, index, duals)
    if _SINK_KEY not in dist:
        raise RuntimeError("pricing graph has no source-to-sink path")
    route = _decode(inst, index, parent)
    g = dist[_SINK_KEY]
    diag.adjusted_cost = g + diag.offset_rate * inst.capacity
    return PricingResult(route=route, reduced_cost=g, diagnostics=diag)


def _source_edges(inst: Instance, index: ArcIndex, duals: DualSolution):
    cm = index.table.costs
    for u in inst.customers:
        yield u, cm.cost(-1, u) + duals.pi0


def _best_first(inst, index, duals, heuristic, use_dominance, prune_bound=np.inf):
    n, d0 = inst.n, inst.capacity
    dem = np.zeros(n + 1, dtype=np.int64)
    for u in inst.customers:
        dem[u] = inst.demand[u]
    offr = index.offset_rate()
    use_h = heuristic is not None
    if use_h:
        H = heuristic.h
        h_floor = np.min(H, axis=1)  # per-customer lower bound on cost-to-sink
    else:
        h_floor = None

    def phi(u, d):
        return float(H[u, d]) if use_h else -offr * d

    dist: dict[tuple, float] = {}
    parent: dict[tuple, tuple | None] = {}
    heap = []
    seed_g = np.inf
    seed_u = None
    for u, w in _source_edges(inst, index, duals):
        key = (u, 0, d0)
        if w < dist.get(key, np.inf) - 1e-15:
            dist[key] = w
            parent[key] = _SOURCE_KEY
            heapq.heappush(heap, (w + phi(u, d0), d0, u, 0, w))
        # out-and-back completion of the source edge: a valid incumbent
        full = w + float(index._base_sink[u][d0])
        if full < seed_g:
            seed_g, seed_u = full, u
    expanded: dict[tuple, list] = {}
    closed: set = set()
    bound = prune_bound
    if seed_u is not None and np.isfinite(seed_g):
        dist[_SINK_KEY] = seed_g
        parent[_SINK_KEY] = (seed_u, 0, d0)
        bound = min(bound, seed_g)
        heapq.heappush(heap, (seed_g, 0, _SINK, 0, seed_g))
    nodes = edges = 0
    zd_cols = np.arange(d0 + 1)
    while heap:
        f, d, u, m1, g = heapq.heappop(heap)
        if u == _SINK or f >= bound:
            break
        key = (u, m1, d)
        if key in closed or g > dist.get(key, np.inf) + 1e-15:
            continue
        if use_dominance:
            dom = expanded.get((u, m1))
            if dom and any(d1 > d and g1 < g for d1, g1 in dom):
                closed.add(key)
                continue
            expanded.setdefault((u, m1), []).append((d, g))
        closed.add(key)
        nodes += 1
        bucket = index.successors(u, m1)
        # sink edge
        ws = bucket.sink_pref[d]
        if np.isfinite(ws):
            g2 = g + float(ws)
            edges += 1
            if g2 < dist.get(_SINK_KEY, np.inf) - 1e-15:
                dist[_SINK_KEY] = g2
                parent[_SINK_KEY] = key
                bound = min(bound, g2)
                heapq.heappush(heap, (g2, 0, _SINK, 0, g2))
        # dense targets (empty ng sets, so M2 = 0)
        if d >= 2:
            A = bucket.dense[1:, 1:d + 1]
            if use_h:
                # rows for capacities below a customer's demand are +inf in H,
                # so infeasible candidates drop out of the comparison for free
                T = A + H[1:, d - 1::-1]
            else:
                d2row = (d - zd_cols[1:d + 1])[None, :]
                T = np.where(d2row >= dem[1:, None], A - offr * d2row, np.inf)
            for flat in np.flatnonzero(T.ravel() < bound - g):
                i, j = divmod(int(flat), d)
                v = i + 1
                d2 = d - (j + 1)
                g2 = g + float(A[i, j])
                edges += 1
                k2 = (v, 0, d2)
                if g2 < dist.get(k2, np.inf) - 1e-15:
                    dist[k2] = g2
                    parent[k2] = key
                    heapq.heappush(heap, (g + float(T[i, j]), d2, v, 0, g2))
        # targets with grown ng sets, per (M2, demand) group
        for v, group in bucket.dirty.items():
            # cheapest completion through v cannot beat the incumbent
            if g + group.min_cost + (h_floor[v] if use_h else -offr * d) >= bound:
                continue
            dv = int(dem[v])
            hv = H[v] if use_h else None
            for m2, zd, w, capfloor in zip(group.m2s, group.zds, group.costs, group.caps):
                d2 = d - zd
                if d2 < dv or d2 > capfloor:
                    continue
                g2 = g + w
                f2 = g2 + (hv[d2] if use_h else -offr * d2)
                edges += 1
                if f2 >= bound:
                    continue
                k2 = (v, m2, d2)
                if g2 < dist.get(k2, np.inf) - 1e-15:
                    dist[k2] = g2
                    parent[k2] = key
                    heapq.heappush(heap, (float(f2), d2, v, m2, g2))
    diag = PricingDiagnostics(
        mode="dijkstra", nodes_expanded=nodes, edges_relaxed=edges,
        offset_rate=offr, adjusted_cost=np.nan,
        used_heuristic=use_h, used_dominance=use_dominance,
    )
    return dist, parent, diag


def _relax_all(inst, index, duals):
    d0 = inst.capacity
    dem = inst.demand
    dist: dict[tuple, float] = {}
    parent: dict[tuple, tuple | None] = {}
    by_d: dict[int, set] = {d: set() for d in range(d0 + 1)}
    for u, w in _source_edges(inst, index, duals):
        key = (u, 0, d0)
        if w < dist.get(key, np.inf):
            dist[key] = w
            parent[key] = _SOURCE_KEY
            by_d[d0].add((u, 0))
    nodes = edges = 0
    for d in range(d0, 0, -1):
        for (u, m1) in sorted(by_d[d]):
            key = (u, m1, d)
            g = dist[key]
            nodes += 1
            bucket = index.successors(u, m1)
            ws = bucket.sink_pref[d]
            if np.isfinite(ws):
                edges += 1
                g2 = g + float(ws)
                if g2 < dist.get(_SINK_KEY, np.inf):
                    dist[_SINK_KEY] = g2
                    parent[_SINK_KEY] = key
            rows, cols = np.nonzero(np.isfinite(bucket.dense[:, 1:d + 1]))
            for i, j in zip(rows, cols):
                v = int(i)
                zd = int(j) + 1
                d2 = d - zd
                if d2 < dem[v]:
                    continue
                edges += 1
                g2 = g + float(bucket.dense[v, zd])
                k2 = (v, 0, d2)
                if g2 < dist.get(k2, np.inf):
                    dist[k2] = g2
                    parent[k2] = key
                    by_d[d2].add((v, 0))
            for v, group in bucket.dirty.items():
                dv = dem[v]
                for m2, zd, w, capfloor in zip(group.m2s, group.zds, group.costs, group.caps):
                    d2 = d - zd
                    if d2 < dv or d2 > capfloor:
                        continue
                    edges += 1
                    g2 = g + w
                    k2 = (v, m2, d2)
                    if g2 < dist.get(k2, np.inf):
                        dist[k2] = g2
                        parent[k2] = key
                        by_d[d2].add((v, m2))
    diag = PricingDiagnostics(
        mode="bellman_ford", nodes_expanded=nodes, edges_relaxed=edges,
        offset_rate=index.offset_rate(), adjusted_cost=np.nan,
        used_heuristic=False, used_dominance=False,
    )
    return dist, parent, diag


def _decode(inst: Instance, index: ArcIndex, parent) -> Route:
    chain = [_SINK_KEY]
    while parent[chain[-1]] != _SOURCE_KEY:
        chain.append(parent[chain[-1]])
    chain.reverse()  # first customer node ... sink
    seq: list[int] = []
    for here, nxt in zip(chain, chain[1:]):
        u, m1, d = here
        if nxt == _SINK_KEY:
            row = index.best_sink_arc(u, m1, d)
        else:
            v, m2, d2 = nxt
            row = index.best_arc_between(u, m1, v, d - d2, m2)
        arc = index.table.arc_from_row(u, row)
        seq.extend(arc.path[:-1])
    demand_used = sum(inst.demand[u] for u in seq)
    return Route(seq=tuple(seq), demand_used=demand_used)
