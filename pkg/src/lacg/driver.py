"""Outer column-generation loop: alternate the set-cover RMP with exact
elementary pricing until no negative-reduced-cost route exists.

Per iteration the driver adds the exact pricing minimizer plus every bonus
column the relaxation loop trimmed out along the way (single_column=True
restricts to the minimizer alone).  Termination requires an *exact* pricing
round with minimum reduced cost above -rc_stop_tol, which certifies LP
optimality over all elementary routes.

The trace keeps one row per iteration.  Wall times are accumulated on the
result object and written to the run summary, never into the trace CSV, so
identical invocations produce byte-identical trace files.
"""

from __future__ import annotations

import csv
import logging
import time
from dataclasses import dataclass, field

from .instances import Instance, cost_matrix
from .neighbors import build_la_neighbors
from .routes import DualSolution
from .arcs import compute_component_paths, ArcIndex
from .dssr import price_elementary
from .rmp import Column, make_column, initial_columns, solve_rmp, lagrangian_bound

log = logging.getLogger(__name__)


@dataclass
class CgConfig:
    la_k: int = 5
    cycle_rule: str = "min_nodes_added"
    early_exit: str = "off"
    single_column: bool = False
    mode: str = "dijkstra"
    use_astar: bool = True
    use_dominance: bool = True
    rc_add_tol: float = 1e-9
    rc_stop_tol: float = 1e-6
    time_limit: float | None = None
    max_iterations: int | None = None
    seed: int = 0  # reserved for randomized variants; the solver is deterministic

    @property
    def arm(self) -> str:
        return f"la{self.la_k}"


@dataclass
class TraceRow:
    iteration: int
    rmp_objective: float
    min_reduced_cost: float
    lagrangian_bound: float
    pricing_time: float
    rmp_time: float
    dssr_iterations: int
    nodes_expanded: int
    columns_added: int


# wall times are excluded on purpose: trace files must be reproducible
TRACE_CSV_FIELDS = (
    "iteration", "rmp_objective", "min_reduced_cost", "lagrangian_bound",
    "dssr_iterations", "nodes_expanded", "columns_added",
)


@dataclass
class CgTrace:
    rows: list[TraceRow] = field(default_factory=list)

    def write_csv(self, path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as f:
            w = csv.writer(f)
            w.writerow(TRACE_CSV_FIELDS)
            for r in self.rows:
                w.writerow([
                    r.iteration, repr(r.rmp_objective), repr(r.min_reduced_cost),
                    repr(r.lagrangian_bound), r.dssr_iterations,
                    r.nodes_expanded, r.columns_added,
                ])


@dataclass
class CgResult:
    status: str  # optimal | time_limit | stalled
    objective: float
    columns: list[Column]
    theta: list[float]
    duals: DualSolution
    trace: CgTrace
    iterations: int
    total_time: float
    pricing_time: float
    rmp_time: float
    setup_time: float


def solve(inst: Instance, config: CgConfig | None = None) -> CgResult:
    config = config or CgConfig()
    t_start = time.perf_counter()
    costs = cost_matrix(inst)
    sets = build_la_neighbors(inst, config.la_k, costs)
    table = compute_component_paths(inst, sets, costs)
    index = ArcIndex(table, sets, inst.capacity)
    setup_time = time.perf_counter() - t_start

    columns = initial_columns(inst, costs)
    pool = {c.route.seq for c in columns}
    trace = CgTrace()
    pricing_time = 0.0
    rmp_time = 0.0
    status = "stalled"
    sol = None
    duals = DualSolution(pi={}, pi0=0.0)
    it = 0
    while True:
        it += 1
        t0 = time.perf_counter()
        sol = solve_rmp(columns, inst.n, inst.fleet)
        t1 = time.perf_counter()
        rmp_time += t1 - t0
        if sol.status != "optimal":
            raise RuntimeError("restricted master became infeasible")
        duals = sol.duals

        res = price_elementary(
            inst, sets, table, duals,
            cycle_rule=config.cycle_rule, early_exit=config.early_exit,
            mode=config.mode, use_astar=config.use_astar,
            use_dominance=config.use_dominance, index=index,
        )
        t2 = time.perf_counter()
        pricing_time += t2 - t1

        min_rc = res.reduced_cost
        bound = (
            lagrangian_bound(sol.objective, min_rc, inst.n)
            if res.exact else float("nan")
        )
        if res.exact and min_rc >= -config.rc_stop_tol:
            trace.rows.append(TraceRow(
                iteration=it, rmp_objective=sol.objective, min_reduced_cost=min_rc,
                lagrangian_bound=bound, pricing_time=t2 - t1, rmp_time=t1 - t0,
                dssr_iterations=res.iterations, nodes_expanded=res.nodes_expanded,
                columns_added=0,
            ))
            status = "optimal"
            break

        candidates: dict[tuple, tuple] = {}
        if not config.single_column:
            for route, rc in res.early_columns:
                candidates[route.seq] = (route, rc)
        candidates[res.route.seq] = (res.route, res.reduced_cost)
        added = 0
        for route, rc in candidates.values():
            if rc >= -config.rc_add_tol:
                continue
            if route.seq in pool:
                # a pool column pricing negative would mean inconsistent duals
                log.warning("pricing returned existing column %s (rc=%g)", route.seq, rc)
                continue
            pool.add(route.seq)
            columns.append(make_column(route, costs))
            added += 1
        trace.rows.append(TraceRow(
            iteration=it, rmp_objective=sol.objective, min_reduced_cost=min_rc,
            lagrangian_bound=bound, pricing_time=t2 - t1, rmp_time=t1 - t0,
            dssr_iterations=res.iterations, nodes_expanded=res.nodes_expanded,
            columns_added=added,
        ))
        if added == 0:
            log.warning("no column added despite negative reduced cost; stopping")
            status = "stalled"
            break
        if config.time_limit is not None and time.perf_counter() - t_start > config.time_limit:
            status = "time_limit"
            break
        if config.max_iterations is not None and it >= config.max_iterations:
            status = "time_limit"
            break

    total = time.perf_counter() - t_start
    return CgResult(
        status=status, objective=sol.objective, columns=columns, theta=sol.theta,
        duals=duals, trace=trace, iterations=it, total_time=total,
        pricing_time=pricing_time, rmp_time=rmp_time, setup_time=setup_time,
    )
