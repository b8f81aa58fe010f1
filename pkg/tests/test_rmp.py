import random

from lacg.instances import generate_instance, cost_matrix
from lacg.routes import make_route
from lacg.rmp import Column, make_column, initial_columns, solve_rmp, lagrangian_bound


def _col(seq, cost, inst):
    route = make_route(seq, inst)
    return Column(route=route, cost=cost, cover=route.visit_counts())


def test_hand_lp():
    # columns {[1]: 2, [2]: 4, [1,2]: 5}, K=2: the pair column wins at 5
    inst = generate_instance(1, 2, 2, "unit")
    cols = [_col([1], 2.0, inst), _col([2], 4.0, inst), _col([1, 2], 5.0, inst)]
    sol = solve_rmp(cols, n=2, K=2)
    assert sol.status == "optimal"
    assert abs(sol.objective - 5.0) < 1e-9
    assert abs(sol.theta[2] - 1.0) < 1e-9


def test_single_customer_lp():
    inst = generate_instance(2, 1, 2, "unit")
    c = cost_matrix(inst)
    cols = initial_columns(inst, c)
    sol = solve_rmp(cols, n=1, K=1)
    cost = cols[0].cost
    assert abs(sol.objective - cost) < 1e-9
    assert abs(sol.duals.value(1) - cost) < 1e-9
    assert sol.duals.pi0 == 0.0


def test_initial_columns():
    inst = generate_instance(3, 3, 5, "unit")
    c = cost_matrix(inst)
    cols = initial_columns(inst, c)
    assert len(cols) == 3
    for u, col in zip(inst.customers, cols):
        assert col.cover == {u: 1}
        assert abs(col.cost - 2.0 * c.cost(-1, u)) < 1e-12
    sol = solve_rmp(cols, n=3, K=3)
    want = sum(2.0 * c.cost(-1, u) for u in inst.customers)
    assert abs(sol.objective - want) < 1e-9


def test_strong_duality_random_pools():
    rnd = random.Random(4)
    for trial in range(20):
        n = rnd.randint(2, 6)
        inst = generate_instance(700 + trial, n, n, "unit")
        c = cost_matrix(inst)
        cols = initial_columns(inst, c)
        ids = list(inst.customers)
        for _ in range(rnd.randint(1, 12)):
            size = rnd.randint(1, n)
            seq = rnd.sample(ids, size)
            cols.append(make_column(make_route(seq, inst), c))
        K = rnd.randint(1, n)
        sol = solve_rmp(cols, n=n, K=K)
        if sol.status != "optimal":
            continue
        dual_obj = sum(sol.duals.pi.values()) - K * sol.duals.pi0
        assert abs(sol.objective - dual_obj) < 1e-7
        # dual feasibility: no pool column prices negative
        for col in cols:
            rc = col.cost + sol.duals.pi0 - sum(
                cnt * sol.duals.value(u) for u, cnt in col.cover.items()
            )
            assert rc >= -1e-7
        # complementary slackness on columns
        for t, col in zip(sol.theta, cols):
            rc = col.cost + sol.duals.pi0 - sum(
                cnt * sol.duals.value(u) for u, cnt in col.cover.items()
            )
            assert abs(t * rc) < 1e-6


def test_adding_column_never_increases_objective():
    rnd = random.Random(8)
    inst = generate_instance(900, 5, 5, "unit")
    c = cost_matrix(inst)
    cols = initial_columns(inst, c)
    prev = solve_rmp(cols, n=5, K=5).objective
    ids = list(inst.customers)
    for _ in range(10):
        seq = rnd.sample(ids, rnd.randint(1, 5))
        cols.append(make_column(make_route(seq, inst), c))
        cur = solve_rmp(cols, n=5, K=5).objective
        assert cur <= prev + 1e-9
        prev = cur


def test_lagrangian_bound():
    assert lagrangian_bound(100.0, -2.0, 10) == 80.0
    assert lagrangian_bound(100.0, 3.0, 10) == 100.0
    assert lagrangian_bound(100.0, 0.0, 10) == 100.0


def test_exact_mode_matches_float():
    inst = generate_instance(5, 4, 4, "unit")
    c = cost_matrix(inst)
    cols = initial_columns(inst, c)
    cols.append(make_column(make_route([1, 2], inst), c))
    cols.append(make_column(make_route([3, 4], inst), c))
    f = solve_rmp(cols, n=4, K=4)
    e = solve_rmp(cols, n=4, K=4, exact=True)
    assert abs(f.objective - e.objective) < 1e-9
