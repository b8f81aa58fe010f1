import pytest

from lacg.instances import Instance, generate_instance
from lacg.neighbors import build_la_neighbors, augment_ng, bit, mask_of, ids_of


def test_k0_all_empty():
    inst = generate_instance(1, 10, 4, "unit")
    sets = build_la_neighbors(inst, 0)
    assert all(sets.la(u) == () for u in inst.customers)
    assert all(sets.ng(u) == frozenset() for u in inst.customers)


def test_collinear_tie_broken_by_lower_id():
    inst = Instance(
        name="line",
        coords={-1: (0.0, 0.0), -2: (0.0, 0.0), 1: (0.0, 1.0), 2: (1.0, 1.0), 3: (2.0, 1.0)},
        demand={1: 1, 2: 1, 3: 1}, capacity=3, fleet=3,
    )
    sets = build_la_neighbors(inst, 1)
    assert sets.la(2) == (1,)  # ties at distance 1 go to the lower id


def test_clock_neighbors(clock):
    sets = build_la_neighbors(clock, 4)
    assert sets.la(4) == (2, 3, 5, 6)
    assert sets.la(1) == (2, 3, 11, 12)


def test_la_size_clipped():
    inst = generate_instance(2, 4, 4, "unit")
    sets = build_la_neighbors(inst, 9)
    assert all(len(sets.la(u)) == 3 for u in inst.customers)


def test_la_nested_across_k():
    inst = generate_instance(5, 15, 6, "unit")
    for k1, k2 in ((0, 3), (3, 7), (7, 14)):
        s1 = build_la_neighbors(inst, k1)
        s2 = build_la_neighbors(inst, k2)
        for u in inst.customers:
            assert set(s1.la(u)) <= set(s2.la(u))


def test_self_exclusion_and_depots():
    inst = generate_instance(3, 8, 4, "unit")
    sets = build_la_neighbors(inst, 5)
    for u in inst.customers:
        assert u not in sets.la(u)
    assert sets.la(-1) == () and sets.ng(-2) == frozenset()


def test_augment_ng():
    inst = generate_instance(4, 6, 4, "unit")
    sets = build_la_neighbors(inst, 2)
    assert augment_ng(sets, 3, 5) is True
    assert sets.ng(3) == frozenset({5})
    assert augment_ng(sets, 3, 5) is False  # idempotent
    with pytest.raises(ValueError):
        augment_ng(sets, 3, 3)
    with pytest.raises(ValueError):
        augment_ng(sets, -1, 3)
    sets.reset_ng()
    assert sets.ng(3) == frozenset()


def test_mask_helpers():
    assert bit(1) == 1 and bit(5) == 16
    assert mask_of([1, 3]) == 0b101
    assert ids_of(0b1011) == (1, 2, 4)
    assert ids_of(0) == ()
