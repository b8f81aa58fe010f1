"""Precomputed lowest-cost component paths and the keyed arc index.

An *arc* is the cheapest elementary path that starts at a customer u, ends at
a target v outside u's la neighborhood (another customer or the end depot),
and services a chosen subset of u's la neighbors in between.  Arc membership
and ordering never depend on the duals, so the whole table is built once per
(instance, la size) and reused across every pricing call.

Three dynamic-programming layers (subsets encoded as global customer
bitmasks, bit u-1 for customer u):

  inner  (S, v, w) : cheapest path visiting exactly the set S, from v to w,
                     v, w in S.  Independent of which customer's neighborhood
                     S came from, so the memo is shared globally.
  start  (u, S, w) : cheapest path from u over all of S ending at w.
  arc    (u, S, v) : cheapest path from u over all of S ending at target v.

Subsets whose demand cannot fit in a vehicle alongside u are skipped: such
arcs could never appear in a feasible route.

ArcIndex owns the dual-dependent view used by one pricing call: arc reduced
costs, the per-(u, visited-memory) successor buckets consumed by the search,
and the lazily cached groups keyed by (u, v, M1, M2, demand).  Growing a
customer's ng set invalidates exactly the cached entries that start or end
at that customer.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .instances import Instance, CostMatrix, cost_matrix, END_DEPOT
from .neighbors import NeighborSets, bit, mask_of, ids_of

MAX_LA_SIZE = 20
_SINK = 0  # target id used for the end depot inside arc arrays


class LaSizeError(ValueError):
    pass


@dataclass(frozen=True)
class LaArc:
    """One precomputed component path: u -> intermediates -> v."""

    start: int
    end: int  # customer id, or END_DEPOT
    intermediates: tuple[int, ...]  # in visit order
    demand: int  # includes start, excludes end
    cost: float

    @property
    def path(self) -> tuple[int, ...]:
        return (self.start,) + self.intermediates + (self.end,)


class ComponentPathTable:
    """All inner/start/arc layers for one instance and fixed la sets."""

    def __init__(self, inst: Instance, sets: NeighborSets, costs: CostMatrix | None = None):
        for u in inst.customers:
            if len(sets.la(u)) > MAX_LA_SIZE:
                raise LaSizeError(
                    f"la neighborhood of {u} has {len(sets.la(u))} members; "
                    f"subset tables are limited to {MAX_LA_SIZE}"
                )
        self.inst = inst
        self.sets = sets
        self.costs = costs or cost_matrix(inst)
        self._mask_demand: dict[int, int] = {0: 0}
        self._inner: dict[tuple[int, int, int], tuple[float, int | None]] = {}
        self._start: dict[tuple[int, int, int], tuple[float, int | None]] = {}
        self.subsets: dict[int, list[int]] = {}
        self._arc_v: dict[int, np.ndarray] = {}
        self._arc_vbit: dict[int, np.ndarray | None] = {}
        self._arc_mask64: dict[int, np.ndarray | None] = {}
        self._arc_subset: dict[int, np.ndarray] = {}
        self._arc_zd: dict[int, np.ndarray] = {}
        self._arc_cost: dict[int, np.ndarray] = {}
        self._arc_wstar: dict[int, np.ndarray] = {}
        self._arc_row: dict[int, dict[tuple[int, int], int]] = {}
        self._rows_bounds: dict[int, dict[int, tuple[int, int]]] = {}
        self._grp_starts: dict[int, np.ndarray] = {}
        self._grp_v: dict[int, np.ndarray] = {}
        self._grp_zd: dict[int, np.ndarray] = {}
        self._subset_indicator: dict[int, np.ndarray] = {}
        self._build()

    # -- helpers -----------------------------------------------------------

    def mask_demand(self, mask: int) -> int:
        got = self._mask_demand.get(mask)
        if got is None:
            low = mask & -mask
            got = self.mask_demand(mask ^ low) + self.inst.demand[low.bit_length()]
            self._mask_demand[mask] = got
        return got

    def _c(self, a: int, b: int) -> float:
        return self.costs.m[self.costs.index(a), self.costs.index(b)]

    # -- construction ------------------------------------------------------

    def _enumerate_subsets(self):
        cap = self.inst.capacity
        all_masks: set[int] = set()
        for u in self.inst.customers:
            budget = cap - self.inst.demand[u]
            subsets = [0]
            nbrs = self.sets.la(u)
            for size in range(1, len(nbrs) + 1):
                for combo in combinations(nbrs, size):
                    m = mask_of(combo)
                    if self.mask_demand(m) <= budget:
                        subsets.append(m)
            self.subsets[u] = subsets
            all_masks.update(m for m in subsets if m)
        return sorted(all_masks, key=lambda m: (m.bit_count(), m))

    def _build_inner(self, masks):
        inner = self._inner
        m = self.costs.m  # customers index as themselves
        c = lambda a, b: m[a, b]
        for mask in masks:
            members = ids_of(mask)
            if len(members) == 1:
                v = members[0]
                inner[(mask, v, v)] = (0.0, None)
                continue
            if len(members) == 2:
                a, b = members
                inner[(mask, a, b)] = (c(a, b), None)
                inner[(mask, b, a)] = (c(b, a), None)
                continue
            for v in members:
                sub = mask ^ bit(v)
                for w in members:
                    if w == v:
                        continue
                    best = None
                    best_y = None
                    for y in members:
                        if y == v or y == w:
                            continue
                        cand = c(v, y) + inner[(sub, y, w)][0]
                        if best is None or cand < best:
                            best, best_y = cand, y
                        elif cand == best:
                            old = (v,) + self.inner_path(sub, best_y, w)
                            new = (v,) + self.inner_path(sub, y, w)
                            if new < old:
                                best_y = y
                    inner[(mask, v, w)] = (best, best_y)

    def _build_start(self):
        start = self._start
        inner = self._inner
        m = self.costs.m
        c = lambda a, b: m[a, b]
        for u in self.inst.customers:
            for mask in self.subsets[u]:
                if mask == 0:
                    start[(u, 0, u)] = (0.0, None)
                    continue
                members = ids_of(mask)
                if len(members) == 1:
                    w = members[0]
                    start[(u, mask, w)] = (c(u, w), None)
                    continue
                for w in members:
                    best = None
                    best_v = None
                    for v in members:
                        if v == w:
                            continue
                        cand = c(u, v) + inner[(mask, v, w)][0]
                        if best is None or cand < best:
                            best, best_v = cand, v
                        elif cand == best:
                            old = self.inner_path(mask, best_v, w)
                            new = self.inner_path(mask, v, w)
                            if new < old:
                                best_v = v
                    start[(u, mask, w)] = (best, best_v)

    def _build_arcs(self):
        inst = self.inst
        cm = self.costs
        use64 = inst.n <= 63
        for u in inst.customers:
            excluded = set(self.sets.la(u)) | {u}
            targets = [v for v in inst.customers if v not in excluded]
            t_idx = np.array([cm.index(v) for v in targets] + [cm.index(END_DEPOT)],
                             dtype=np.intp)
            t_ids = np.array(targets + [_SINK], dtype=np.int32)
            T = len(t_ids)
            subsets = self.subsets[u]
            n_sub = len(subsets)
            zd_per_subset = np.array(
                [inst.demand[u] + self.mask_demand(m) for m in subsets], dtype=np.int32
            )
            cost_chunks = []
            wstar_chunks = []
            for s_idx, mask in enumerate(subsets):
                if mask == 0:
                    vals = cm.m[cm.index(u), t_idx]
                    wstars = np.full(T, u, dtype=np.int32)
                else:
                    members = ids_of(mask)
                    sc = np.array([self._start[(u, mask, w)][0] for w in members])
                    m_idx = np.array(members, dtype=np.intp)
                    grid = sc[:, None] + cm.m[np.ix_(m_idx, t_idx)]
                    pick = np.argmin(grid, axis=0)
                    vals = grid[pick, np.arange(T)]
                    wstars = m_idx[pick].astype(np.int32)
                    ties = (grid == vals[None, :]).sum(axis=0)
                    for col in np.nonzero(ties > 1)[0]:
                        tied = [members[r] for r in np.nonzero(grid[:, col] == vals[col])[0]]
                        wstars[col] = min(
                            tied, key=lambda w: self.start_path(u, mask, w)
                        )
                cost_chunks.append(vals)
                wstar_chunks.append(wstars)
            av_np = np.tile(t_ids, n_sub)
            azd_np = np.repeat(zd_per_subset, T)
            # keep arc rows sorted by (target, demand) so per-call group
            # minima are a single reduceat over contiguous slices
            perm = np.lexsort((azd_np, av_np))
            av_np = av_np[perm]
            azd_np = azd_np[perm]
            self._arc_v[u] = av_np
            self._arc_zd[u] = azd_np
            self._arc_subset[u] = np.repeat(
                np.arange(n_sub, dtype=np.int32), T
            )[perm]
            self._arc_cost[u] = np.concatenate(cost_chunks)[perm]
            self._arc_wstar[u] = np.concatenate(wstar_chunks)[perm]
            key = av_np.astype(np.int64) * (inst.capacity + 1) + azd_np
            starts = np.flatnonzero(np.r_[True, key[1:] != key[:-1]])
            self._grp_starts[u] = starts
            self._grp_v[u] = av_np[starts]
            self._grp_zd[u] = azd_np[starts]
            vstarts = np.flatnonzero(np.r_[True, av_np[1:] != av_np[:-1]])
            vbounds = np.r_[vstarts, len(av_np)]
            self._rows_bounds[u] = {
                int(av_np[vstarts[i]]): (int(vbounds[i]), int(vbounds[i + 1]))
                for i in range(len(vstarts))
            }
            if use64:
                sub64 = np.array(subsets, dtype=np.uint64)
                self._arc_mask64[u] = np.repeat(sub64, T)[perm]
                shift = np.maximum(t_ids.astype(np.int64) - 1, 0)
                vb = np.where(
                    t_ids == _SINK,
                    np.int64(0),
                    np.left_shift(np.int64(1), shift),
                ).astype(np.uint64)
                self._arc_vbit[u] = np.tile(vb, n_sub)[perm]
            else:
                self._arc_mask64[u] = None
                self._arc_vbit[u] = None
            nbrs = self.sets.la(u)
            ind = np.zeros((n_sub, max(1, len(nbrs))))
            for s_idx, mask in enumerate(subsets):
                for j, w in enumerate(nbrs):
                    if mask & bit(w):
                        ind[s_idx, j] = 1.0
            self._subset_indicator[u] = ind

    def _build(self):
        masks = self._enumerate_subsets()
        self._build_inner(masks)
        self._build_start()
        self._build_arcs()

    # -- lookups -----------------------------------------------------------

    def inner_cost(self, subset, v: int, w: int) -> float:
        mask = subset if isinstance(subset, int) else mask_of(subset)
        return self._inner[(mask, v, w)][0]

    def inner_path(self, subset, v: int, w: int) -> tuple[int, ...]:
        mask = subset if isinstance(subset, int) else mask_of(subset)
        if mask.bit_count() == 1:
            return (v,)
        if mask.bit_count() == 2:
            return (v, w)
        y = self._inner[(mask, v, w)][1]
        return (v,) + self.inner_path(mask ^ bit(v), y, w)

    def start_cost(self, u: int, subset, w: int) -> float:
        mask = subset if isinstance(subset, int) else mask_of(subset)
        return self._start[(u, mask, w)][0]

    def start_path(self, u: int, subset, w: int) -> tuple[int, ...]:
        mask = subset if isinstance(subset, int) else mask_of(subset)
        if mask == 0:
            return (u,)
        if mask.bit_count() == 1:
            return (u, w)
        v = self._start[(u, mask, w)][1]
        return (u,) + self.inner_path(mask, v, w)

    def _target_key(self, v: int) -> int:
        return _SINK if v == END_DEPOT else v

    def row_mask(self, u: int, row: int) -> int:
        return self.subsets[u][int(self._arc_subset[u][row])]

    def _row_index(self, u: int) -> dict[tuple[int, int], int]:
        got = self._arc_row.get(u)
        if got is None:
            got = {
                (int(v), self.row_mask(u, row)): row
                for row, v in enumerate(self._arc_v[u])
            }
            self._arc_row[u] = got
        return got

    def has_arc(self, u: int, v: int, subset) -> bool:
        mask = subset if isinstance(subset, int) else mask_of(subset)
        return (self._target_key(v), mask) in self._row_index(u)

    def arc_cost(self, u: int, v: int, subset) -> float:
        mask = subset if isinstance(subset, int) else mask_of(subset)
        return float(self._arc_cost[u][self._row_index(u)[(self._target_key(v), mask)]])

    def arc_path(self, u: int, v: int, subset) -> tuple[int, ...]:
        mask = subset if isinstance(subset, int) else mask_of(subset)
        row = self._row_index(u)[(self._target_key(v), mask)]
        w = int(self._arc_wstar[u][row])
        return self.start_path(u, mask, w) + (v,)

    def arc_from_row(self, u: int, row: int) -> LaArc:
        v = int(self._arc_v[u][row])
        end = END_DEPOT if v == _SINK else v
        mask = self.row_mask(u, row)
        w = int(self._arc_wstar[u][row])
        path = self.start_path(u, mask, w) + (end,)
        return LaArc(
            start=u,
            end=end,
            intermediates=path[1:-1],
            demand=int(self._arc_zd[u][row]),
            cost=float(self._arc_cost[u][row]),
        )

    def arc_count(self) -> int:
        return sum(len(v) for v in self._arc_v.values())


def compute_component_paths(inst: Instance, sets: NeighborSets,
                            costs: CostMatrix | None = None) -> ComponentPathTable:
    return ComponentPathTable(inst, sets, costs)


# ---------------------------------------------------------------------------
# dual-dependent index
# ---------------------------------------------------------------------------


class _Group:
    """Minimum reduced cost per (carried memory, demand) toward one target."""

    __slots__ = ("m2s", "zds", "costs", "caps", "min_cost")

    def __init__(self, m2s, zds, costs, caps, min_cost):
        self.m2s = m2s        # carried-memory masks
        self.zds = zds        # arc demands
        self.costs = costs    # group-minimum reduced costs
        self.caps = caps      # capacity ceiling of the reached node
        self.min_cost = min_cost


class _Bucket:
    """Successor view from pricing nodes (u, M1, *): dense weights for
    targets with empty ng sets, per-(M2, demand) groups for the rest, and a
    prefix-minimum over sink arcs indexed by remaining capacity."""

    __slots__ = ("dense", "dirty", "sink_pref", "pending")

    def __init__(self, dense, dirty, sink_pref):
        self.dense = dense          # (n+1, d0+1) min reduced cost, +inf if none
        self.dirty = dirty          # v -> _Group
        self.sink_pref = sink_pref  # d -> min reduced cost over sink arcs zd<=d
        self.pending: set[int] = set()  # targets whose groups need a rebuild


class ArcIndex:
    """Reduced-cost view of the arc table for one pricing call.

    bind_duals fixes the duals; successor buckets are built lazily per
    (u, M1) and stay valid until invalidate() reports grown ng sets.
    """

    def __init__(self, table: ComponentPathTable, sets: NeighborSets, capacity: int):
        self.table = table
        self.sets = sets
        self.d0 = capacity
        self.inst = table.inst
        self._duals = None
        self._cbar: dict[int, np.ndarray] = {}
        self._base_dense: dict[int, np.ndarray] = {}
        self._base_sink: dict[int, np.ndarray] = {}
        self._offset_rate: float | None = None
        self._buckets: dict[tuple[int, int], _Bucket] = {}
        # groups shared across buckets: M1 only acts through its overlap with
        # la(u) (arc filtering) and with ng(v) (carried memory)
        self._groups: dict[tuple[int, int, int, int], dict] = {}
        self._cores: dict[tuple[int, int], tuple[np.ndarray, np.ndarray]] = {}

    # -- duals -------------------------------------------------------------

    def bind_duals(self, duals) -> None:
        if duals is self._duals:
            return
        self._duals = duals
        inst = self.inst
        table = self.table
        pi = np.zeros(inst.n + 1)
        for u in inst.customers:
            pi[u] = duals.value(u)
        worst = np.inf
        for u in inst.customers:
            nbrs = table.sets.la(u)
            pis = pi[list(nbrs)] if nbrs else np.zeros(1)
            subset_pisum = table._subset_indicator[u] @ pis
            cbar = table._arc_cost[u] - subset_pisum[table._arc_subset[u]] - pi[u]
            self._cbar[u] = cbar
            if len(cbar):
                worst = min(worst, float(np.min(cbar / table._arc_zd[u])))
            # group minima over (target, demand), ignoring ng sets: this is the
            # empty-memory view shared by buckets and the search heuristic
            mins = np.minimum.reduceat(cbar, table._grp_starts[u])
            gv = table._grp_v[u]
            gz = table._grp_zd[u]
            dense = np.full((inst.n + 1, self.d0 + 1), np.inf)
            cust = gv != _SINK
            dense[gv[cust], gz[cust]] = mins[cust]
            sink = np.full(self.d0 + 1, np.inf)
            sink[gz[~cust]] = mins[~cust]
            np.minimum.accumulate(sink, out=sink)
            self._base_dense[u] = dense
            self._base_sink[u] = sink
        self._offset_rate = max(0.0, -worst) if np.isfinite(worst) else 0.0
        self._buckets.clear()
        self._groups.clear()
        self._cores.clear()

    @property
    def duals(self):
        return self._duals

    def offset_rate(self) -> float:
        """Per-demand-unit weight offset making every graph edge nonnegative."""
        if self._offset_rate is None:
            raise RuntimeError("bind_duals must be called first")
        return self._offset_rate

    # -- successor buckets ---------------------------------------------------

    def successors(self, u: int, m1: int) -> _Bucket:
        key = (u, m1)
        got = self._buckets.get(key)
        if got is None:
            got = self._build_bucket(u, m1)
            self._buckets[key] = got
        elif got.pending:
            for v in sorted(got.pending):
                self._group_dirty(u, m1, v, got.dirty)
            got.pending.clear()
        return got

    def _dirty_for(self, u: int, m1: int) -> list[int]:
        """Targets needing per-(M2, demand) groups from (u, M1) nodes.

        A target with a grown ng set still lands on memory M2 = 0 unless its
        ng set can meet the arc's customers (la(u), u itself, or M1); only
        that overlap forces it out of the dense matrix.
        """
        relevant = self.sets.la_mask(u) | bit(u) | m1
        return [v for v in self.inst.customers if self.sets.ng_mask(v) & relevant]

    def _core(self, u: int, fkey: int):
        """Group minima over arcs avoiding fkey (= M1 restricted to la(u)).

        Depends on the bound duals only, so cores survive every ng-set
        invalidation within a pricing call and are shared by all M1 values
        with the same la-overlap.
        """
        if fkey == 0:
            return self._base_dense[u], self._base_sink[u]
        got = self._cores.get((u, fkey))
        if got is not None:
            return got
        inst = self.inst
        table = self.table
        cbar = self._cbar[u]
        mask64 = table._arc_mask64[u]
        if mask64 is not None:
            sel = (mask64 & np.uint64(fkey)) == 0
        else:
            subsets = table.subsets[u]
            sel = np.fromiter(
                ((subsets[s] & fkey) == 0 for s in table._arc_subset[u].tolist()),
                dtype=bool,
                count=len(cbar),
            )
        # arcs are (target, demand)-sorted: one masked reduceat per layer
        mins = np.minimum.reduceat(np.where(sel, cbar, np.inf), table._grp_starts[u])
        gv = table._grp_v[u]
        gz = table._grp_zd[u]
        cust = gv != _SINK
        dense = np.full((inst.n + 1, self.d0 + 1), np.inf)
        dense[gv[cust], gz[cust]] = mins[cust]
        sink_pref = np.full(self.d0 + 1, np.inf)
        sink_pref[gz[~cust]] = mins[~cust]
        np.minimum.accumulate(sink_pref, out=sink_pref)
        self._cores[(u, fkey)] = (dense, sink_pref)
        return dense, sink_pref

    def _build_bucket(self, u: int, m1: int) -> _Bucket:
        core, sink_pref = self._core(u, m1 & self.sets.la_mask(u))
        dense = core.copy()
        for v in ids_of(m1):
            dense[v, :] = np.inf  # edges may not revisit remembered customers
        dirty: dict[int, dict[tuple[int, int], float]] = {}
        for v in self._dirty_for(u, m1):
            dense[v, :] = np.inf
            self._group_dirty(u, m1, v, dirty)
        return _Bucket(dense, dirty, sink_pref)

    def _group_dirty(self, u: int, m1: int, v: int, dirty: dict) -> None:
        bounds = self.table._rows_bounds[u].get(v)
        if bounds is None or (m1 >> (v - 1)) & 1:
            dirty.pop(v, None)
            return
        ng_v = self.sets.ng_mask(v)
        gkey = (u, v, m1 & self.sets.la_mask(u), m1 & ng_v)
        cached = self._groups.get(gkey)
        if cached is not None:
            dirty[v] = cached
            return
        table = self.table
        a, b = bounds
        mask64 = table._arc_mask64[u]
        cbar_v = self._cbar[u][a:b]
        zd_v = table._arc_zd[u][a:b]
        if mask64 is not None:
            masks_v = mask64[a:b]
            fixed = np.uint64(m1 | bit(u))
            if m1:
                keep = (masks_v & np.uint64(m1)) == 0
                masks_v, cbar_v, zd_v = masks_v[keep], cbar_v[keep], zd_v[keep]
            if len(cbar_v) == 0:
                dirty[v] = _Group([], [], [], [], np.inf)
                return
            m2s = (np.uint64(ng_v) & (masks_v | fixed)).astype(np.int64)
            # group-minimum over (m2, zd) without python loops
            order = np.lexsort((cbar_v, zd_v, m2s))
            m2o, zdo, cbo = m2s[order], zd_v[order], cbar_v[order]
            firsts = np.flatnonzero(
                np.concatenate(
                    ([True], (m2o[1:] != m2o[:-1]) | (zdo[1:] != zdo[:-1]))
                )
            )
            d0 = self.d0
            md = self.table.mask_demand
            m2_list = m2o[firsts].tolist()
            group = _Group(
                m2_list,
                zdo[firsts].tolist(),
                cbo[firsts].tolist(),
                [d0 - md(m) for m in m2_list],
                float(cbo.min()),
            )
            self._groups[gkey] = group
            dirty[v] = group
            return
        subsets = table.subsets[u]
        subs_v = table._arc_subset[u][a:b]
        raw = [
            (subsets[s], c, int(z))
            for s, c, z in zip(subs_v.tolist(), cbar_v.tolist(), zd_v.tolist())
            if (subsets[s] & m1) == 0
        ]
        fixed = m1 | bit(u)
        best: dict[tuple[int, int], float] = {}
        inf = np.inf
        for m, c, zd in raw:
            k = (ng_v & (m | fixed), zd)
            if c < best.get(k, inf):
                best[k] = c
        d0 = self.d0
        md = self.table.mask_demand
        group = _Group(
            [k[0] for k in best],
            [k[1] for k in best],
            list(best.values()),
            [d0 - md(k[0]) for k in best],
            min(best.values()) if best else np.inf,
        )
        self._groups[gkey] = group
        dirty[v] = group

    def invalidate(self, grown, added: int | None = None) -> None:
        """Drop cached entries whose start or end customer had its ng set grown.

        When `added` names the customer that joined every grown ng set, caches
        whose content provably cannot change are kept: remembering a customer
        that can never appear among an arc's visited customers leaves every
        carried memory as it was.
        """
        grown = set(grown)
        if not grown:
            return
        abit = bit(added) if added is not None else None
        for gk in [k for k in self._groups if k[1] in grown]:
            u = gk[0]
            if abit is None or abit & (self.sets.la_mask(u) | bit(u)):
                del self._groups[gk]
        for (u, m1) in [k for k in self._buckets if k[0] in grown]:
            del self._buckets[(u, m1)]
        for (u, m1), bucket in self._buckets.items():
            reach = self.sets.la_mask(u) | bit(u) | m1
            for v in grown:
                if abit is not None and not abit & reach:
                    continue  # the new memory bit never occurs on arcs from u
                if not self.sets.ng_mask(v) & reach:
                    continue  # every arc still lands on memory 0: row stays dense
                bucket.dense[v, :] = np.inf
                bucket.dirty.pop(v, None)
                bucket.pending.add(v)

    # -- decode helpers ------------------------------------------------------

    def _candidate_rows(self, u: int, v: int, m1: int):
        """Row ids toward v passing the M1 filter (rows are zd-sorted)."""
        table = self.table
        bounds = table._rows_bounds[u].get(v)
        if bounds is None:
            return None
        a, b = bounds
        rows = np.arange(a, b)
        if m1 == 0:
            return rows
        mask64 = table._arc_mask64[u]
        if mask64 is not None:
            keep = (mask64[a:b] & np.uint64(m1)) == 0
            return rows[keep]
        subsets = table.subsets[u]
        subs = table._arc_subset[u]
        return np.array(
            [r for r in rows.tolist() if (subsets[subs[r]] & m1) == 0],
            dtype=np.intp,
        )

    def best_arc_between(self, u: int, m1: int, v: int, zd: int, m2: int) -> int:
        """Arc row realizing the bucket weight of edge (u,M1,*) -> (v,M2,*)."""
        table = self.table
        rows = self._candidate_rows(u, v, m1)
        if rows is None or not len(rows):
            raise RuntimeError("no arc matches a traversed edge")
        zds = table._arc_zd[u][rows]
        lo, hi = np.searchsorted(zds, (zd, zd + 1))
        rows = rows[lo:hi]
        ng_v = self.sets.ng_mask(v)
        if ng_v:
            fixed = m1 | bit(u)
            mask64 = table._arc_mask64[u]
            if mask64 is not None:
                ok = (np.uint64(ng_v) & (mask64[rows] | np.uint64(fixed))) == np.uint64(m2)
            else:
                subsets = table.subsets[u]
                subs = table._arc_subset[u]
                ok = np.fromiter(
                    ((ng_v & (subsets[subs[r]] | fixed)) == m2 for r in rows.tolist()),
                    dtype=bool, count=len(rows),
                )
            rows = rows[ok]
        if not len(rows):
            raise RuntimeError("no arc matches a traversed edge")
        return int(rows[np.argmin(self._cbar[u][rows])])

    def best_sink_arc(self, u: int, m1: int, d: int) -> int:
        table = self.table
        rows = self._candidate_rows(u, _SINK, m1)
        if rows is None or not len(rows):
            raise RuntimeError("no sink arc fits the remaining capacity")
        zds = table._arc_zd[u][rows]
        rows = rows[: np.searchsorted(zds, d + 1)]
        if not len(rows):
            raise RuntimeError("no sink arc fits the remaining capacity")
        return int(rows[np.argmin(self._cbar[u][rows])])

    # -- keyed queries (test surface) ----------------------------------------

    def arcs_for(self, u: int, v: int, m1, m2, d: int) -> list[LaArc]:
        """Arcs filed under the key (u, v, M1, M2, d).

        M2 must equal ng(v) intersected with (M1 | intermediates | u); sink
        keys (v == END_DEPOT) match any arc demand up to d.
        """
        m1 = m1 if isinstance(m1, int) else mask_of(m1)
        m2 = m2 if isinstance(m2, int) else mask_of(m2)
        tkey = self.table._target_key(v)
        if tkey != _SINK and (m1 >> (v - 1)) & 1:
            return []
        ng_v = self.sets.ng_mask(v) if tkey != _SINK else 0
        ubit = bit(u)
        out = []
        bounds = self.table._rows_bounds[u].get(tkey)
        for row in (range(*bounds) if bounds is not None else ()):
            zd = int(self.table._arc_zd[u][row])
            if tkey == _SINK:
                if zd > d:
                    continue
            elif zd != d:
                continue
            mask = self.table.row_mask(u, row)
            if mask & m1:
                continue
            if ng_v & (m1 | mask | ubit) != m2:
                continue
            out.append(self.table.arc_from_row(u, row))
        return out

    def lowest_rc_arc(self, u: int, v: int, m1, m2, d: int, duals) -> LaArc | None:
        """Cheapest arc of the key by reduced cost; None when the key is empty."""
        arcs = self.arcs_for(u, v, m1, m2, d)
        best = None
        best_rc = None
        for arc in arcs:
            rc = arc.cost - duals.value(arc.start) - sum(
                duals.value(w) for w in arc.intermediates
            )
            if best_rc is None or rc < best_rc:
                best, best_rc = arc, rc
        return best


def build_arc_index(table: ComponentPathTable, sets: NeighborSets, capacity: int) -> ArcIndex:
    return ArcIndex(table, sets, capacity)
