"""Exact makespan minimisation at desk scale.

Two independent routes: ``brute_force`` enumerates every machine assignment
and every admissible per-machine ordering, and is the ground truth for tests;
``solve_branch_and_bound`` builds schedules forward, branching over the
(operation, machine) decisions that could start before the earliest possible
completion among ready candidates.  Every schedule it leaves out can be
improved by inserting that earliest-completing candidate, so the explored
set of active schedules always contains an optimum for makespan.
"""

from __future__ import annotations

import itertools
import threading
import time
from dataclasses import dataclass, replace

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
from .heuristic import earliest_start_heuristic

__all__ = ["SolveResult", "CapError", "brute_force", "solve_branch_and_bound"]

STATUS_OPTIMAL = "optimal"
STATUS_BOUND_PAIR = "bound-pair"
STATUS_TIMEOUT = "timeout"


class CapError(Exception):
    """Instance exceeds the enumeration caps of the brute-force oracle."""


@dataclass(frozen=True)
class SolveResult:
    """Outcome of an exact run.

    ``status`` is ``optimal`` when the search space was exhausted (then
    ``lower_bound == upper_bound == schedule makespan``), ``bound-pair`` when
    the time limit was hit with a proven gap, and ``timeout`` is reserved for
    a limit hit before any bound improved on the initial incumbent.
    """

    solution: SolutionPair
    schedule: Schedule
    lower_bound: Rational
    upper_bound: Rational
    status: str
    nodes_explored: int
    elapsed: float


def _selection_from_sequences(sequences: dict[int, tuple[int, ...]]) -> Selection:
    pairs = set()
    for seq in sequences.values():
        for i, v in enumerate(seq):
            for w in seq[i + 1:]:
                pairs.add((v, w))
    return Selection(frozenset(pairs))


def brute_force(instance: Instance, max_ops: int = 9, max_assignments: int = 100_000) -> SolveResult:
    """Exhaustive optimum by enumerating assignments and per-machine orders.

    Candidate orders are per-machine permutations; inadmissible combinations
    (cycles with the precedence arcs) are filtered out.  Intended for tiny
    instances only, hence the caps.
    """
    t0 = time.monotonic()
    n = instance.n_ops
    if n > max_ops:
        raise CapError(f"{n} operations exceed the cap of {max_ops}")
    n_assignments = 1
    for row in instance.eligible:
        n_assignments *= len(row)
    if n_assignments > max_assignments:
        raise CapError(f"{n_assignments} assignments exceed the cap of {max_assignments}")

    if n == 0:
        sol = SolutionPair(MachineAssignment(()), Selection(frozenset()))
        sched = Schedule((), 0, ())
        return SolveResult(sol, sched, 0, 0, STATUS_OPTIMAL, 1, time.monotonic() - t0)

    base_preds = [list(instance.predecessors(v)) for v in range(n)]
    best_mks = None
    best = None
    examined = 0
    for assignment in itertools.product(*instance.eligible):
        p = [instance.ptime(v, assignment[v]) for v in range(n)]
        groups: dict[int, list[int]] = {}
        for v in range(n):
            groups.setdefault(assignment[v], []).append(v)
        machines = sorted(groups)
        for perms in itertools.product(*(itertools.permutations(groups[k]) for k in machines)):
            examined += 1
            preds = [list(ps) for ps in base_preds]
            for seq in perms:
                for a, b in zip(seq, seq[1:]):
                    preds[b].append(a)
            indeg = [len(ps) for ps in preds]
            succs: list[list[int]] = [[] for _ in range(n)]
            for w in range(n):
                for u in preds[w]:
                    succs[u].append(w)
            stack = [v for v in range(n) if indeg[v] == 0]
            start = [0] * n
            seen = 0
            mks = 0
            while stack:
                v = stack.pop()
                seen += 1
                c = start[v] + p[v]
                if c > mks:
                    mks = c
                for w in succs[v]:
                    if c > start[w]:
                        start[w] = c
                    indeg[w] -= 1
                    if indeg[w] == 0:
                        stack.append(w)
            if seen != n:
                continue
            if best_mks is None or mks < best_mks:
                best_mks = mks
                best = (assignment, dict(zip(machines, perms)))
    assignment, sequences = best
    sol = SolutionPair(MachineAssignment(tuple(assignment)), _selection_from_sequences(sequences))
    sched = tight_schedule(instance, sol)
    return SolveResult(sol, sched, best_mks, best_mks, STATUS_OPTIMAL, examined, time.monotonic() - t0)


@dataclass(frozen=True)
class BnbNode:
    """A partial forward schedule: a prefix of (operation, machine) decisions."""

    lower_bound: Rational
    n_scheduled: int
    scheduled_mask: int
    machine_of: tuple[int, ...]
    completion: tuple[Rational, ...]
    ready_time: tuple[Rational, ...]
    pending: tuple[int, ...]
    machine_avail: tuple[Rational, ...]
    machine_seq: tuple[tuple[int, ...], ...]
    partial_makespan: Rational


class _Search:
    """Shared state of a (possibly multi-threaded) branch-and-bound run."""

    def __init__(self, instance: Instance, deadline: float):
        self.instance = instance
        self.deadline = deadline
        n = instance.n_ops
        self.n = n
        self.pmin = [min(row) for row in instance.times]
        self.topo = topological_order(n, [instance.predecessors(v) for v in range(n)])
        self.single_machine_ops: dict[int, list[int]] = {k: [] for k in range(1, instance.machines + 1)}
        for v in range(n):
            if len(instance.eligible[v]) == 1:
                self.single_machine_ops[instance.eligible[v][0]].append(v)
        self.lock = threading.Lock()
        self.condition = threading.Condition(self.lock)
        self.stack: list[BnbNode] = []
        self.active = 0
        self.timed_out = False
        self.nodes = 0
        self.best_value: Rational = None  # set before search starts
        self.best_leaf = None
        self.inflight_lbs: dict[int, Rational] = {}

    def lower_bound(self, node_completion, node_ready, mask, avail, partial_mks) -> Rational:
        """Max of the path bound with minimum times and the machine workload bound."""
        inst = self.instance
        lb = partial_mks
        dp = list(node_completion)
        for v in self.topo:
            if mask >> v & 1:
                continue
            release = node_ready[v]
            for u in inst.predecessors(v):
                if not (mask >> u & 1) and dp[u] > release:
                    release = dp[u]
            base = min(avail[k - 1] for k in inst.eligible[v])
            if base > release:
                release = base
            c = release + self.pmin[v]
            dp[v] = c
            if c > lb:
                lb = c
        for k in range(1, inst.machines + 1):
            load = avail[k - 1]
            for v in self.single_machine_ops[k]:
                if not (mask >> v & 1):
                    load += self.pmin[v]
            if load > lb:
                lb = load
        return lb

    def expand(self, node: BnbNode) -> list[BnbNode]:
        inst = self.instance
        candidates = []
        theta = None
        for v in range(self.n):
            if node.pending[v] or node.scheduled_mask >> v & 1:
                continue
            rt = node.ready_time[v]
            for k in inst.eligible[v]:
                avail = node.machine_avail[k - 1]
                est = avail if avail > rt else rt
                ect = est + inst.ptime(v, k)
                candidates.append((est, ect, v, k))
                if theta is None or ect < theta:
                    theta = ect
        children = []
        with self.lock:
            cutoff = self.best_value
        for est, ect, v, k in candidates:
            if est >= theta:
                continue  # starting v at est would idle past an achievable completion
            mask = node.scheduled_mask | (1 << v)
            completion = list(node.completion)
            completion[v] = ect
            ready = list(node.ready_time)
            pending = list(node.pending)
            for w in inst.successors(v):
                pending[w] -= 1
                if ect > ready[w]:
                    ready[w] = ect
            avail = list(node.machine_avail)
            avail[k - 1] = ect
            seqs = list(node.machine_seq)
            seqs[k - 1] = seqs[k - 1] + (v,)
            machine_of = list(node.machine_of)
            machine_of[v] = k
            partial = node.partial_makespan if node.partial_makespan > ect else ect
            if node.n_scheduled + 1 == self.n:
                with self.lock:
                    if partial < self.best_value:
                        self.best_value = partial
                        self.best_leaf = (tuple(machine_of), tuple(seqs))
                        cutoff = partial
                continue
            lb = self.lower_bound(completion, ready, mask, avail, partial)
            if lb >= cutoff:
                continue
            children.append(
                BnbNode(
                    lower_bound=lb,
                    n_scheduled=node.n_scheduled + 1,
                    scheduled_mask=mask,
                    machine_of=tuple(machine_of),
                    completion=tuple(completion),
                    ready_time=tuple(ready),
                    pending=tuple(pending),
                    machine_avail=tuple(avail),
                    machine_seq=tuple(seqs),
                    partial_makespan=partial,
                )
            )
        children.sort(key=lambda c: c.lower_bound, reverse=True)
        return children

    def worker(self, ident: int) -> None:
        while True:
            with self.condition:
                while not self.stack and self.active > 0 and not self.timed_out:
                    self.condition.wait(0.05)
                if self.timed_out or not self.stack:
                    # empty stack here implies no expansion in flight
                    self.condition.notify_all()
                    return
                node = self.stack.pop()
                if node.lower_bound >= self.best_value:
                    continue
                self.active += 1
                self.nodes += 1
                self.inflight_lbs[ident] = node.lower_bound
            if time.monotonic() > self.deadline:
                with self.condition:
                    self.timed_out = True
                    self.stack.append(node)
                    self.active -= 1
                    del self.inflight_lbs[ident]
                    self.condition.notify_all()
                    return
            children = self.expand(node)
            with self.condition:
                self.stack.extend(children)
                self.active -= 1
                del self.inflight_lbs[ident]
                self.condition.notify_all()


def solve_branch_and_bound(
    instance: Instance, time_limit: float = 3600.0, threads: int = 1
) -> SolveResult:
    """Exact branch and bound over forward-built active schedules.

    The incumbent is initialised with the earliest-start heuristic.  On
    exhaustion the result is optimal; when the time limit strikes first, the
    incumbent is returned together with the smallest lower bound among the
    unexplored subtrees.
    """
    if time_limit <= 0:
        raise ValueError("time_limit must be positive")
    if threads < 1:
        raise ValueError("threads must be >= 1")
    t0 = time.monotonic()
    n = instance.n_ops
    est_sol, est_sched = earliest_start_heuristic(instance)
    if n == 0:
        return SolveResult(est_sol, est_sched, 0, 0, STATUS_OPTIMAL, 0, time.monotonic() - t0)

    search = _Search(instance, deadline=t0 + time_limit)
    search.best_value = est_sched.makespan
    search.best_leaf = None
    root = BnbNode(
        lower_bound=0,
        n_scheduled=0,
        scheduled_mask=0,
        machine_of=(0,) * n,
        completion=(0,) * n,
        ready_time=(0,) * n,
        pending=tuple(len(instance.predecessors(v)) for v in range(n)),
        machine_avail=(0,) * instance.machines,
        machine_seq=((),) * instance.machines,
        partial_makespan=0,
    )
    root_lb = search.lower_bound(root.completion, root.ready_time, 0, root.machine_avail, 0)
    search.stack.append(replace(root, lower_bound=root_lb))

    if threads == 1:
        search.worker(0)
    else:
        pool = [threading.Thread(target=search.worker, args=(i,)) for i in range(threads)]
        for th in pool:
            th.start()
        for th in pool:
            th.join()

    elapsed = time.monotonic() - t0
    upper = search.best_value
    if search.timed_out and search.stack:
        open_lbs = [nd.lower_bound for nd in search.stack]
        lower = min(open_lbs)
        if lower > upper:
            lower = upper
        status = STATUS_BOUND_PAIR if lower < upper else STATUS_OPTIMAL
    else:
        lower = upper
        status = STATUS_OPTIMAL

    if search.best_leaf is None:
        sol, sched = est_sol, est_sched
    else:
        machine_of, seqs = search.best_leaf
        sequences = {k + 1: seqs[k] for k in range(instance.machines)}
        sol = SolutionPair(MachineAssignment(machine_of), _selection_from_sequences(sequences))
        sched = tight_schedule(instance, sol)
    return SolveResult(sol, sched, lower, upper, status, search.nodes, elapsed)
