"""Earliest-start constructive heuristic.

Operations are appended one at a time: among the ready operations (all
predecessors already placed) and their eligible machines, pick the pair that
can start earliest.  Ties are broken by the largest mean-processing-time path
weight hanging off the operation, then by lowest operation id, then lowest
machine id.  The per-machine insertion order doubles as the selection, which
is admissible by construction; the final schedule is tight.
"""

from __future__ import annotations

from fractions import Fraction

from .core import (
    Instance,
    MachineAssignment,
    Rational,
    Schedule,
    Selection,
    SolutionPair,
    tight_schedule,
    topological_order,
)

__all__ = ["mean_ptimes", "tail_weights", "earliest_start_heuristic"]


def mean_ptimes(instance: Instance) -> list[Fraction]:
    """Mean processing time per operation over its eligible machines."""
    return [Fraction(sum(row), len(row)) for row in instance.times]


def tail_weights(instance: Instance) -> list[Fraction]:
    """Largest mean-time path weight starting at each operation.

    ``tail[v] = mean[v] + max(tail[w] for successors w)``, with max 0 for
    sinks; computed once by a reverse topological sweep.
    """
    mean = mean_ptimes(instance)
    order = topological_order(instance.n_ops, [instance.predecessors(v) for v in instance.ops])
    tail: list[Fraction] = [Fraction(0)] * instance.n_ops
    for v in reversed(order):
        succ_tail = max((tail[w] for w in instance.successors(v)), default=Fraction(0))
        tail[v] = mean[v] + succ_tail
    return tail


def earliest_start_heuristic(instance: Instance) -> tuple[SolutionPair, Schedule]:
    """Greedy earliest-start construction of a feasible solution.

    Deterministic for a given instance; runs in O(|V||A| + |V|^2 * m).
    """
    n = instance.n_ops
    neg_tail = [-t for t in tail_weights(instance)]
    pending = [len(instance.predecessors(v)) for v in instance.ops]
    ready_time: list[Rational] = [0] * n
    machine_avail: dict[int, Rational] = {k: 0 for k in range(1, instance.machines + 1)}
    machine_seq: dict[int, list[int]] = {k: [] for k in machine_avail}
    ready = sorted(v for v in instance.ops if pending[v] == 0)
    chosen_machine = [0] * n

    for _ in range(n):
        best = None
        for w in ready:
            rt = ready_time[w]
            for k in instance.eligible[w]:
                start = machine_avail[k] if machine_avail[k] > rt else rt
                key = (start, neg_tail[w], w, k)
                if best is None or key < best:
                    best = key
        start, _, w, k = best
        chosen_machine[w] = k
        completion = start + instance.ptime(w, k)
        machine_avail[k] = completion
        machine_seq[k].append(w)
        ready.remove(w)
        for succ in instance.successors(w):
            if completion > ready_time[succ]:
                ready_time[succ] = completion
            pending[succ] -= 1
            if pending[succ] == 0:
                ready.append(succ)
        ready.sort()

    pairs = set()
    for seq in machine_seq.values():
        for i, v in enumerate(seq):
            for w in seq[i + 1:]:
                pairs.add((v, w))
    sol = SolutionPair(MachineAssignment(tuple(chosen_machine)), Selection(frozenset(pairs)))
    return sol, tight_schedule(instance, sol)
