import math
import random

import numpy as np
import pytest

from lacg.instances import (
    Instance, InstanceError, SplitMix64,
    generate_instance, cost_matrix, read_instance, write_instance,
    START_DEPOT, END_DEPOT,
)


def test_generate_dataset1_row():
    inst = generate_instance(7, 20, 4, "unit")
    assert inst.n == 20
    assert inst.capacity == 4
    assert all(inst.demand[u] == 1 for u in inst.customers)
    assert inst.fleet == 20


def test_generate_deterministic():
    a = generate_instance(7, 20, 4, "unit")
    b = generate_instance(7, 20, 4, "unit")
    assert a == b


def test_generate_uniform_demands_in_range():
    inst = generate_instance(3, 30, 20, "uniform_1_10")
    for u in inst.customers:
        assert 1 <= inst.demand[u] <= 10
    assert any(inst.demand[u] > 1 for u in inst.customers)


def test_generate_coordinates_on_grid():
    inst = generate_instance(11, 50, 10, "unit")
    for u in list(inst.customers) + [START_DEPOT]:
        x, y = inst.coords[u]
        assert 0.0 <= x < 1000.0 and 0.0 <= y < 1000.0


def test_generate_rejects_bad_args():
    with pytest.raises(InstanceError):
        generate_instance(1, 0, 4, "unit")
    with pytest.raises(InstanceError):
        generate_instance(1, 5, 9, "uniform_1_10")  # capacity below max demand
    with pytest.raises(InstanceError):
        generate_instance(1, 5, 4, "gaussian")


def test_splitmix64_reference_values():
    # first outputs for seed 0, from the published splitmix64 recurrence
    rng = SplitMix64(0)
    assert rng.next_u64() == 0xE220A8397B1DCDAF
    assert rng.next_u64() == 0x6E789E6AA1B965F4
    rng = SplitMix64(1234567)
    v = rng.next_float()
    assert 0.0 <= v < 1.0


def test_cost_matrix_345_triangle():
    inst = Instance(
        name="t", coords={START_DEPOT: (0.0, 0.0), END_DEPOT: (0.0, 0.0), 1: (3.0, 4.0)},
        demand={1: 1}, capacity=2, fleet=1,
    )
    c = cost_matrix(inst)
    assert c.cost(START_DEPOT, 1) == 5.0
    assert c.cost(1, END_DEPOT) == 5.0
    assert c.cost(START_DEPOT, END_DEPOT) == 0.0


def test_cost_matrix_properties():
    inst = generate_instance(5, 40, 10, "unit")
    c = cost_matrix(inst)
    assert np.array_equal(c.m, c.m.T)
    assert np.all(np.diag(c.m) == 0.0)
    ids = [START_DEPOT, END_DEPOT] + list(inst.customers)
    rnd = random.Random(0)
    for _ in range(1000):
        a, b, d = (rnd.choice(ids) for _ in range(3))
        assert c.cost(a, b) <= c.cost(a, d) + c.cost(d, b) + 1e-9


def test_roundtrip(tmp_path):
    inst = generate_instance(9, 17, 25, "uniform_1_10")
    path = tmp_path / "i.txt"
    write_instance(inst, path)
    back = read_instance(path)
    assert back == inst


def test_roundtrip_byte_identical(tmp_path):
    inst = generate_instance(13, 8, 6, "unit")
    p1, p2 = tmp_path / "a.txt", tmp_path / "b.txt"
    write_instance(inst, p1)
    write_instance(read_instance(p1), p2)
    assert p1.read_bytes() == p2.read_bytes()


def test_read_rejects_demand_over_capacity(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text(
        "NAME x\nN 1\nCAPACITY 4\nFLEET 1\nDEPOT 0 0\nCUST 1 1.0 1.0 9\n"
    )
    with pytest.raises(InstanceError):
        read_instance(path)


def test_read_rejects_duplicate_id(tmp_path):
    path = tmp_path / "dup.txt"
    path.write_text(
        "NAME x\nN 2\nCAPACITY 4\nFLEET 2\nDEPOT 0 0\n"
        "CUST 1 1.0 1.0 1\nCUST 1 2.0 2.0 1\n"
    )
    with pytest.raises(InstanceError, match="line 7"):
        read_instance(path)


def test_read_names_bad_line(tmp_path):
    path = tmp_path / "mangled.txt"
    path.write_text(
        "NAME x\nN 1\nCAPACITY 4\nFLEET 1\nDEPOT 0 0\nCUST 1 oops 1.0 1\n"
    )
    with pytest.raises(InstanceError, match="line 6"):
        read_instance(path)


def test_instance_invariants():
    with pytest.raises(InstanceError):
        Instance(
            name="gap", coords={START_DEPOT: (0, 0), END_DEPOT: (0, 0), 2: (1, 1)},
            demand={2: 1}, capacity=2, fleet=1,
        )
    with pytest.raises(InstanceError):
        Instance(
            name="nan", coords={START_DEPOT: (0, 0), END_DEPOT: (0, 0), 1: (math.nan, 1)},
            demand={1: 1}, capacity=2, fleet=1,
        )
