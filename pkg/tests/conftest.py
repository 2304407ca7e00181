"""Shared fixtures: the worked 3-operation example and seeded random data."""

from __future__ import annotations

from pathlib import Path

import pytest

from fjs.core import Instance, MachineAssignment, Selection, SolutionPair
from fjs.rng import Xoshiro256StarStar

GOLDEN_DIR = Path(__file__).parent / "golden"
DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture
def golden_dir() -> Path:
    return GOLDEN_DIR


def make_ex1() -> Instance:
    """Three operations a=0, b=1, c=2; a precedes both b and c; two machines."""
    return Instance.from_tables(
        "EX1",
        machines=2,
        ptimes={0: {1: 3}, 1: {1: 2, 2: 4}, 2: {2: 5}},
        arcs=[(0, 1), (0, 2)],
    )


@pytest.fixture
def ex1() -> Instance:
    return make_ex1()


def small_random_instance(
    seed: int,
    max_ops: int = 8,
    max_machines: int = 3,
    max_eligible: int = 2,
    arc_percent: int = 30,
    max_time: int = 10,
) -> Instance:
    """Tiny instance for oracle comparisons; arcs only go id-upward."""
    rng = Xoshiro256StarStar(seed)
    n = rng.randint(2, max_ops)
    m = rng.randint(1, max_machines)
    eligible = []
    times = []
    for _ in range(n):
        size = rng.randint(1, min(max_eligible, m))
        machs = tuple(sorted(rng.sample(list(range(1, m + 1)), size)))
        eligible.append(machs)
        times.append(tuple(rng.randint(1, max_time) for _ in machs))
    arcs = tuple(
        (u, w) for u in range(n) for w in range(u + 1, n) if rng.randint(0, 99) < arc_percent
    )
    return Instance(f"rnd-{seed}", m, tuple(eligible), tuple(times), arcs)


def random_admissible_solution(instance: Instance, seed: int) -> SolutionPair:
    """Random assignment plus the selection induced by a random topological order."""
    rng = Xoshiro256StarStar(seed)
    machine = tuple(
        row[rng.randint(0, len(row) - 1)] for row in instance.eligible
    )
    pending = [len(instance.predecessors(v)) for v in instance.ops]
    ready = sorted(v for v in instance.ops if pending[v] == 0)
    position = {}
    while ready:
        v = ready.pop(rng.randint(0, len(ready) - 1))
        position[v] = len(position)
        for w in instance.successors(v):
            pending[w] -= 1
            if pending[w] == 0:
                ready.append(w)
        ready.sort()
    by_machine: dict[int, list[int]] = {}
    for v in instance.ops:
        by_machine.setdefault(machine[v], []).append(v)
    pairs = set()
    for ops_k in by_machine.values():
        ops_k.sort(key=lambda v: position[v])
        for i, v in enumerate(ops_k):
            for w in ops_k[i + 1:]:
                pairs.add((v, w))
    return SolutionPair(MachineAssignment(machine), Selection(frozenset(pairs)))
