"""Restricted master problem: the set-cover LP over the columns found so far.

    min  sum_l cost_l * theta_l
    s.t. sum_l cover_ul * theta_l >= 1   for every customer u   [pi_u]
         sum_l theta_l           <= K                           [-pi_0]
         theta >= 0

Cover coefficients are visit counts so the same formula prices relaxed
(non-elementary) routes.  The LP is re-solved from scratch on every call
with the bundled simplex; exact=True switches to rational arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass

from .instances import Instance, CostMatrix
from .routes import Route, DualSolution, route_cost, make_route
from . import simplex


@dataclass(frozen=True)
class Column:
    route: Route
    cost: float
    cover: dict[int, int]


@dataclass
class RmpSolution:
    status: str  # optimal | infeasible
    theta: list[float]
    objective: float
    duals: DualSolution


def make_column(route: Route, costs: CostMatrix) -> Column:
    return Column(route=route, cost=route_cost(route, costs), cover=route.visit_counts())


def initial_columns(inst: Instance, costs: CostMatrix) -> list[Column]:
    """One real single-customer route per customer; always RMP-feasible."""
    cols = []
    for u in inst.customers:
        cols.append(make_column(make_route([u], inst), costs))
    return cols


def solve_rmp(columns: list[Column], n: int, K: int, exact: bool = False) -> RmpSolution:
    """Solve the set-cover LP over `columns` for customers 1..n, K vehicles."""
    if not columns:
        raise ValueError("column pool is empty")
    ncols = len(columns)
    obj = [col.cost for col in columns]
    A = []
    for u in range(1, n + 1):
        A.append([col.cover.get(u, 0) for col in columns])
    A.append([1] * ncols)
    senses = [">="] * n + ["<="]
    b = [1] * n + [K]
    res = simplex.solve_lp(obj, A, senses, b, exact=exact)
    if res.status != "optimal":
        return RmpSolution(
            status="infeasible",
            theta=[0.0] * ncols,
            objective=float("inf"),
            duals=DualSolution(pi={}, pi0=0.0),
        )
    y = res.duals
    pi = {u: max(0.0, float(y[u - 1])) for u in range(1, n + 1)}
    pi0 = max(0.0, -float(y[n]))
    return RmpSolution(
        status="optimal",
        theta=[float(t) for t in res.x],
        objective=float(res.objective),
        duals=DualSolution(pi=pi, pi0=pi0),
    )


def lagrangian_bound(rmp_obj: float, min_rc: float, n: int) -> float:
    """RMP value plus n times the (clamped) minimum reduced cost."""
    return rmp_obj + n * min(0.0, min_rc)


def dump_columns(columns: list[Column], theta: list[float], path) -> None:
    """Write the column pool with its final weights as CSV."""
    import csv

    with open(path, "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f)
        w.writerow(["route", "cost", "theta"])
        for i, col in enumerate(columns):
            t = theta[i] if i < len(theta) else 0.0
            w.writerow(["-".join(str(u) for u in col.route.seq), repr(col.cost), repr(t)])
