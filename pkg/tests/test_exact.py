"""Exact solvers: worked examples, oracle agreement, bounds, thread safety."""

from __future__ import annotations

import pytest

from fjs.core import Instance, validate_solution
from fjs.exact import CapError, brute_force, solve_branch_and_bound
from fjs.heuristic import earliest_start_heuristic

from conftest import small_random_instance


def test_ex1_optimum(ex1):
    bf = brute_force(ex1)
    bb = solve_branch_and_bound(ex1, time_limit=60)
    assert bf.upper_bound == bb.upper_bound == 8
    assert bf.status == bb.status == "optimal"
    assert bf.lower_bound == bb.lower_bound == 8


def test_single_operation_picks_fastest_machine():
    inst = Instance.from_tables("one", 2, {0: {1: 5, 2: 3}}, [])
    assert brute_force(inst).upper_bound == 3
    assert solve_branch_and_bound(inst, 60).upper_bound == 3


def test_two_independent_ops_one_machine_serialize():
    inst = Instance.from_tables("two", 1, {0: {1: 2}, 1: {1: 3}}, [])
    assert brute_force(inst).upper_bound == 5
    assert solve_branch_and_bound(inst, 60).upper_bound == 5


def test_empty_instance():
    inst = Instance("empty", 1, (), (), ())
    assert brute_force(inst).upper_bound == 0
    result = solve_branch_and_bound(inst, 60)
    assert result.upper_bound == 0 and result.status == "optimal"


def test_brute_force_caps():
    big = Instance.from_tables("big", 1, {v: {1: 1} for v in range(10)}, [])
    with pytest.raises(CapError):
        brute_force(big)
    wide = Instance.from_tables("wide", 3, {v: {1: 1, 2: 1, 3: 1} for v in range(8)}, [])
    with pytest.raises(CapError):
        brute_force(wide, max_assignments=100)


def test_time_limit_must_be_positive(ex1):
    with pytest.raises(ValueError):
        solve_branch_and_bound(ex1, time_limit=0)
    with pytest.raises(ValueError):
        solve_branch_and_bound(ex1, threads=0)


def test_oracle_agreement_on_random_instances():
    for seed in range(60):
        inst = small_random_instance(seed)
        bf = brute_force(inst)
        bb = solve_branch_and_bound(inst, 60)
        assert bb.status == "optimal"
        assert bf.upper_bound == bb.upper_bound, inst.name
        for result in (bf, bb):
            assert result.lower_bound == result.upper_bound == result.schedule.makespan
            assert validate_solution(inst, result.solution, result.schedule).ok


def test_value_independent_of_thread_count():
    for seed in range(15):
        inst = small_random_instance(seed + 500)
        values = {
            solve_branch_and_bound(inst, 60, threads=t).upper_bound for t in (1, 2, 4)
        }
        assert len(values) == 1


def test_timeout_returns_est_incumbent_and_sound_bounds():
    # EST lands on machine 1 (start-time tie) with time 9; the optimum is 6.
    inst = Instance.from_tables("trap", 2, {0: {1: 9, 2: 3}, 1: {2: 3}}, [])
    _, est_sched = earliest_start_heuristic(inst)
    assert est_sched.makespan == 9
    optimum = brute_force(inst).upper_bound
    assert optimum == 6
    result = solve_branch_and_bound(inst, time_limit=1e-9)
    assert result.upper_bound == est_sched.makespan
    assert result.lower_bound <= optimum <= result.upper_bound
    assert result.status in ("bound-pair", "timeout", "optimal")
    full = solve_branch_and_bound(inst, time_limit=60)
    assert full.status == "optimal"
    assert full.upper_bound == 6


def test_result_metadata(ex1):
    result = solve_branch_and_bound(ex1, 60)
    assert result.nodes_explored >= 0
    assert result.elapsed >= 0
    assert validate_solution(ex1, result.solution, result.schedule).ok
