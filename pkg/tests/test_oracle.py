import pytest
from fractions import Fraction

from lacg.instances import generate_instance, cost_matrix
from lacg.neighbors import build_la_neighbors, augment_ng
from lacg.routes import DualSolution, route_cost
from lacg import oracle


def test_two_customer_elementary_count():
    inst = generate_instance(1, 2, 2, "unit")
    routes = oracle.enumerate_routes(inst, "elementary")
    assert sorted(r.seq for r in routes) == [(1,), (1, 2), (2,), (2, 1)]


def test_all_feasible_excludes_adjacent_repeats():
    inst = generate_instance(1, 2, 3, "unit")
    routes = oracle.enumerate_routes(inst, "all_feasible")
    seqs = {r.seq for r in routes}
    assert (1, 2, 1) in seqs  # capacity 3 admits the non-elementary cycle
    assert (1, 1) not in seqs  # graph edges never connect a customer to itself
    assert all(r.demand_used <= 3 for r in routes)


def test_clock_route_in_ng_minus_la(clock, clock_sets):
    from lacg.instances import Instance

    small = Instance(
        name="clock5", coords=dict(clock.coords),
        demand=dict(clock.demand), capacity=5, fleet=12,
    )
    ng = {r.seq for r in oracle.enumerate_routes(small, "ng", clock_sets)}
    la = {r.seq for r in oracle.enumerate_routes(small, "la", clock_sets)}
    assert (3, 1, 5, 1) in ng
    assert (3, 1, 5, 1) not in la
    assert la <= ng


def test_enumeration_guard():
    inst = generate_instance(2, 8, 8, "unit")
    with pytest.raises(oracle.EnumerationTooLarge):
        oracle.enumerate_routes(inst, "all_feasible", max_routes=1000)


def test_brute_pricing_zero_duals():
    inst = generate_instance(3, 4, 3, "unit")
    c = cost_matrix(inst)
    routes = oracle.enumerate_routes(inst, "elementary")
    duals = DualSolution(pi={u: 0.0 for u in inst.customers})
    best, rc = oracle.brute_pricing(routes, duals, c)
    assert rc == min(route_cost(r, c) for r in routes)


def test_brute_pricing_huge_dual_attracts():
    inst = generate_instance(3, 4, 3, "unit")
    c = cost_matrix(inst)
    routes = oracle.enumerate_routes(inst, "elementary")
    duals = DualSolution(pi={1: 1e6, 2: 0.0, 3: 0.0, 4: 0.0})
    best, rc = oracle.brute_pricing(routes, duals, c)
    assert 1 in best.seq


def test_lp_over_initial_routes():
    inst = generate_instance(4, 3, 3, "unit")
    c = cost_matrix(inst)
    routes = oracle.enumerate_routes(inst, "elementary")
    singles = [r for r in routes if len(r.seq) == 1]
    val = oracle.lp_over_routes(singles, inst)
    want = sum(2.0 * c.cost(-1, u) for u in inst.customers)
    assert isinstance(val, Fraction)
    assert abs(float(val) - want) < 1e-9


def test_lp_relaxation_ordering():
    # objective over elementary >= la >= ng, with fixed spatial ng sets
    for seed in (50, 51, 52):
        inst = generate_instance(seed, 5, 3, "unit")
        sets = build_la_neighbors(inst, 2)
        for u in inst.customers:
            for v in sets.la(u):
                augment_ng(sets, u, v)
        elem = oracle.enumerate_routes(inst, "elementary", sets)
        la = oracle.enumerate_routes(inst, "la", sets)
        ng = oracle.enumerate_routes(inst, "ng", sets)
        assert len(elem) <= len(la) <= len(ng)
        v_elem = oracle.lp_over_routes(elem, inst)
        v_la = oracle.lp_over_routes(la, inst)
        v_ng = oracle.lp_over_routes(ng, inst)
        assert v_elem >= v_la >= v_ng  # exact Fractions
