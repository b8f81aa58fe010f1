"""CVRP instances: data model, deterministic generation, costs and file I/O.

Customers carry ids 1..n.  The depot is duplicated into a start node (id -1)
and an end node (id -2) that share one coordinate pair and have zero demand.
Instances are immutable after construction and safe to share between threads.

Random generation uses splitmix64 so that the same (seed, n, capacity, mode)
tuple reproduces the same instance on any platform.  The draw order is fixed:
depot (x, y) first, then customer coordinates (x1, y1, ..., xn, yn), then the
demands (d1, ..., dn).  Unit-demand mode consumes no draws for demands.
Coordinates are uniform on [0, 1000)^2 and kept at full double precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

START_DEPOT = -1
END_DEPOT = -2

_MASK64 = (1 << 64) - 1

DEMAND_MODES = ("unit", "uniform_1_10")


class InstanceError(ValueError):
    """Invalid instance data (bad demand, duplicate id, malformed file...)."""


class SplitMix64:
    """splitmix64 PRNG (Steele/Lea/Flood mixing constants), 64-bit state."""

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + 0x9E3779B97F4A7C15) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def next_float(self) -> float:
        """Uniform double in [0, 1), 53 random mantissa bits."""
        return (self.next_u64() >> 11) * 2.0 ** -53


@dataclass(eq=True)
class Instance:
    """A CVRP instance.

    coords and demand include the depot ids -1 and -2; customer ids are
    exactly 1..n.  fleet defaults to n so the vehicle bound never binds.
    """

    name: str
    coords: dict[int, tuple[float, float]]
    demand: dict[int, int]
    capacity: int
    fleet: int
    customers: tuple[int, ...] = field(default=())

    def __post_init__(self):
        if not self.customers:
            ids = sorted(u for u in self.coords if u > 0)
            self.customers = tuple(ids)
        self._validate()

    @property
    def n(self) -> int:
        return len(self.customers)

    def _validate(self):
        n = len(self.customers)
        if n < 1:
            raise InstanceError("instance must have at least one customer")
        if self.customers != tuple(range(1, n + 1)):
            raise InstanceError("customer ids must be exactly 1..n")
        if self.capacity < 1:
            raise InstanceError("capacity must be a positive integer")
        if self.fleet < 1:
            raise InstanceError("fleet must be a positive integer")
        for dep in (START_DEPOT, END_DEPOT):
            if dep not in self.coords:
                raise InstanceError(f"missing depot id {dep}")
        if self.coords[START_DEPOT] != self.coords[END_DEPOT]:
            raise InstanceError("start and end depot must share one location")
        self.demand.setdefault(START_DEPOT, 0)
        self.demand.setdefault(END_DEPOT, 0)
        if self.demand[START_DEPOT] != 0 or self.demand[END_DEPOT] != 0:
            raise InstanceError("depot demand must be zero")
        for u in self.customers:
            if u not in self.coords:
                raise InstanceError(f"customer {u} has no coordinates")
            x, y = self.coords[u]
            if not (math.isfinite(x) and math.isfinite(y)):
                raise InstanceError(f"customer {u} has non-finite coordinates")
            d = self.demand.get(u)
            if d is None or d < 1:
                raise InstanceError(f"customer {u} must have demand >= 1")
            if d > self.capacity:
                raise InstanceError(
                    f"customer {u} demand {d} exceeds capacity {self.capacity}"
                )
        x, y = self.coords[START_DEPOT]
        if not (math.isfinite(x) and math.isfinite(y)):
            raise InstanceError("depot has non-finite coordinates")


class CostMatrix:
    """Dense symmetric Euclidean travel costs over customers and both depots.

    Row/column layout: index 0 is the start depot, 1..n the customers,
    n+1 the end depot.  cost(u, v) accepts node ids (-1, -2, 1..n).
    """

    def __init__(self, inst: Instance):
        n = inst.n
        self.n = n
        pts = np.empty((n + 2, 2))
        pts[0] = inst.coords[START_DEPOT]
        for u in inst.customers:
            pts[u] = inst.coords[u]
        pts[n + 1] = inst.coords[END_DEPOT]
        diff = pts[:, None, :] - pts[None, :, :]
        self.m = np.sqrt((diff * diff).sum(axis=2))

    def index(self, u: int) -> int:
        if u == START_DEPOT:
            return 0
        if u == END_DEPOT:
            return self.n + 1
        return u

    def cost(self, u: int, v: int) -> float:
        return float(self.m[self.index(u), self.index(v)])


def cost_matrix(inst: Instance) -> CostMatrix:
    return CostMatrix(inst)


def generate_instance(seed: int, n: int, capacity: int, demand_mode: str) -> Instance:
    """Deterministically generate an instance from (seed, n, capacity, mode)."""
    if n < 1:
        raise InstanceError("n must be >= 1")
    if demand_mode not in DEMAND_MODES:
        raise InstanceError(f"unknown demand mode {demand_mode!r}")
    max_demand = 1 if demand_mode == "unit" else 10
    if capacity < max_demand:
        raise InstanceError(
            f"capacity {capacity} below maximum demand {max_demand} of mode {demand_mode}"
        )
    rng = SplitMix64(seed)
    coords: dict[int, tuple[float, float]] = {}
    depot = (1000.0 * rng.next_float(), 1000.0 * rng.next_float())
    coords[START_DEPOT] = depot
    coords[END_DEPOT] = depot
    for u in range(1, n + 1):
        coords[u] = (1000.0 * rng.next_float(), 1000.0 * rng.next_float())
    demand: dict[int, int] = {}
    for u in range(1, n + 1):
        if demand_mode == "unit":
            demand[u] = 1
        else:
            demand[u] = 1 + int(10.0 * rng.next_float())
    name = f"gen-s{seed}-n{n}-c{capacity}-{demand_mode}"
    return Instance(
        name=name, coords=coords, demand=demand, capacity=capacity, fleet=n
    )


def _fmt(x: float) -> str:
    return format(x, ".17g")


def write_instance(inst: Instance, path) -> None:
    lines = [
        f"NAME {inst.name}",
        f"N {inst.n}",
        f"CAPACITY {inst.capacity}",
        f"FLEET {inst.fleet}",
        f"DEPOT {_fmt(inst.coords[START_DEPOT][0])} {_fmt(inst.coords[START_DEPOT][1])}",
    ]
    for u in inst.customers:
        x, y = inst.coords[u]
        lines.append(f"CUST {u} {_fmt(x)} {_fmt(y)} {inst.demand[u]}")
    with open(path, "w", encoding="utf-8") as f:
        f.write("\n".join(lines) + "\n")


def _parse_error(lineno: int, msg: str) -> InstanceError:
    return InstanceError(f"line {lineno}: {msg}")


def read_instance(path) -> Instance:
    """Parse the line-oriented format written by write_instance.

    Raises InstanceError naming the offending line for malformed files.
    """
    with open(path, "r", encoding="utf-8") as f:
        raw = f.read().splitlines()
    lines = [(i + 1, ln.strip()) for i, ln in enumerate(raw) if ln.strip()]
    if len(lines) < 6:
        raise _parse_error(len(raw) + 1, "truncated file")

    def expect(pos, key, n_fields):
        lineno, ln = lines[pos]
        parts = ln.split()
        if parts[0] != key:
            raise _parse_error(lineno, f"expected {key} line, got {parts[0]!r}")
        if len(parts) != n_fields + 1:
            raise _parse_error(lineno, f"{key} line needs {n_fields} field(s)")
        return lineno, parts[1:]

    _, (name,) = expect(0, "NAME", 1)
    lineno, (n_str,) = expect(1, "N", 1)
    try:
        n = int(n_str)
    except ValueError:
        raise _parse_error(lineno, "N must be an integer") from None
    lineno, (cap_str,) = expect(2, "CAPACITY", 1)
    try:
        capacity = int(cap_str)
    except ValueError:
        raise _parse_error(lineno, "CAPACITY must be an integer") from None
    lineno, (fleet_str,) = expect(3, "FLEET", 1)
    try:
        fleet = int(fleet_str)
    except ValueError:
        raise _parse_error(lineno, "FLEET must be an integer") from None
    lineno, dep_fields = expect(4, "DEPOT", 2)
    try:
        depot = (float(dep_fields[0]), float(dep_fields[1]))
    except ValueError:
        raise _parse_error(lineno, "DEPOT coordinates must be reals") from None

    if len(lines) != 5 + n:
        raise _parse_error(
            lines[-1][0], f"expected {n} CUST lines, found {len(lines) - 5}"
        )
    coords = {START_DEPOT: depot, END_DEPOT: depot}
    demand: dict[int, int] = {}
    for pos in range(5, 5 + n):
        lineno, fields = expect(pos, "CUST", 4)
        try:
            u = int(fields[0])
            x = float(fields[1])
            y = float(fields[2])
            d = int(fields[3])
        except ValueError:
            raise _parse_error(lineno, "CUST line must be 'CUST id x y demand'") from None
        if u in coords:
            raise _parse_error(lineno, f"duplicate customer id {u}")
        coords[u] = (x, y)
        demand[u] = d
    try:
        return Instance(
            name=name, coords=coords, demand=demand, capacity=capacity, fleet=fleet
        )
    except InstanceError as exc:
        raise InstanceError(f"{path}: {exc}") from None
