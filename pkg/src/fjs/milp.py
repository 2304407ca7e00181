"""Solver-agnostic MILP builders for the scheduling problem, plus point codecs.

Two formulations are provided.  The compact model keeps one start variable
per operation and resolves machine conflicts with big-M rows over ordered
operation pairs.  The machine-indexed model carries start and completion
variables per (operation, machine) pair, a sequencing binary per ordered pair
and machine, and zeroes out the timing variables of unchosen machines.  Both
minimise a single makespan variable ``z``.

Feasible solutions translate to feasible model points and back; the codecs
here implement both directions exactly (rational arithmetic throughout).
``check_feasible`` evaluates a point against a model with tolerance 0 by
default, which also serves the LP-relaxation checks: it never enforces
integrality, so a fractional point can be certified against the relaxed
polyhedron directly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .core import (
    FjsError,
    Instance,
    MachineAssignment,
    Rational,
    Schedule,
    Selection,
    SolutionPair,
    ValidationIssue,
    ValidationReport,
    certified_critical_path,
    disjunctive_pairs,
    is_admissible,
    same_machine_pairs,
    tight_schedule,
    topological_order,
)

__all__ = [
    "PointError",
    "WitnessError",
    "Variable",
    "LinearConstraint",
    "ModelStats",
    "MilpModel",
    "ModelPoint",
    "build_compact_model",
    "build_machine_indexed_model",
    "encode_compact",
    "decode_compact",
    "encode_machine_indexed",
    "decode_machine_indexed",
    "check_feasible",
    "machine_indexed_gap_witness",
    "makespan_lower_bound",
    "default_horizon",
]

CONTINUOUS = "continuous"
BINARY = "binary"


class PointError(FjsError):
    """A model point that cannot be decoded or evaluated."""


class WitnessError(FjsError):
    """The gap-witness preconditions do not hold for this instance."""


@dataclass(frozen=True)
class Variable:
    name: str
    kind: str
    lower: Rational = 0
    upper: Rational | None = None  # None = +inf


@dataclass(frozen=True)
class LinearConstraint:
    name: str
    terms: tuple[tuple[Fraction, str], ...]
    relation: str  # "<=", "=", ">="
    rhs: Fraction


@dataclass(frozen=True)
class ModelStats:
    n_constraints: int
    n_variables: int  # excludes the makespan variable z
    n_binary: int
    phi: int
    phi_hat: int
    beta: int
    bound: Rational


@dataclass(frozen=True)
class MilpModel:
    name: str
    variables: tuple[Variable, ...]
    objective: tuple[tuple[Fraction, str], ...]
    constraints: tuple[LinearConstraint, ...]
    stats: ModelStats

    def variable_names(self) -> tuple[str, ...]:
        return tuple(v.name for v in self.variables)


@dataclass(frozen=True)
class ModelPoint:
    """An assignment of a rational value to every variable of a model."""

    values: Mapping[str, Rational]

    def __getitem__(self, name: str) -> Rational:
        return self.values[name]


def _frac(x: Rational) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def _sizes(instance: Instance):
    pairs = disjunctive_pairs(instance)
    phi = sum(len(row) for row in instance.eligible)
    terminal = [v for v in instance.ops if not instance.successors(v)]
    phi_hat = sum(len(instance.eligible[v]) for v in terminal)
    return pairs, phi, phi_hat, terminal


def _check_horizon(L: Rational) -> None:
    if not isinstance(L, (int, Fraction)) or isinstance(L, bool):
        raise ValueError(f"horizon L must be int or Fraction, got {L!r}")
    if L <= 0:
        raise ValueError(f"horizon L must be positive, got {L}")


def build_compact_model(instance: Instance, L: Rational) -> MilpModel:
    """Operation-indexed model: start per operation, big-M machine conflicts.

    Variables: z; s_v >= 0; binary x_v_k for eligible (v, k); binary y_v_w per
    ordered conflict pair.  The assigned processing time is substituted
    inline as ``sum_k p(v,k) x_v_k``, so the model has ``2|V| + |A| + |B| +
    beta`` rows and ``|V| + phi + |B|`` variables besides z.
    """
    _check_horizon(L)
    pairs, phi, phi_hat, _ = _sizes(instance)
    Lf = _frac(L)

    variables = [Variable("z", CONTINUOUS)]
    variables += [Variable(f"s_{v}", CONTINUOUS) for v in instance.ops]
    variables += [
        Variable(f"x_{v}_{k}", BINARY, 0, 1) for v in instance.ops for k in instance.eligible[v]
    ]
    variables += [Variable(f"y_{v}_{w}", BINARY, 0, 1) for v, w in pairs.pairs]

    def ptime_terms(v: int) -> list[tuple[Fraction, str]]:
        return [(_frac(instance.ptime(v, k)), f"x_{v}_{k}") for k in instance.eligible[v]]

    rows: list[LinearConstraint] = []
    for v in instance.ops:
        terms = [(Fraction(1), f"s_{v}")] + ptime_terms(v) + [(Fraction(-1), "z")]
        rows.append(LinearConstraint(f"cmax_{v}", tuple(terms), "<=", Fraction(0)))
    for v in instance.ops:
        terms = [(Fraction(1), f"x_{v}_{k}") for k in instance.eligible[v]]
        rows.append(LinearConstraint(f"assign_{v}", tuple(terms), "=", Fraction(1)))
    for k in range(1, instance.machines + 1):
        for v, w in pairs.by_machine[k]:
            terms = (
                (Fraction(1), f"y_{v}_{w}"),
                (Fraction(1), f"y_{w}_{v}"),
                (Fraction(-1), f"x_{v}_{k}"),
                (Fraction(-1), f"x_{w}_{k}"),
            )
            rows.append(LinearConstraint(f"sel_{k}_{v}_{w}", terms, ">=", Fraction(-1)))
    for u, v in instance.arcs:
        terms = [(Fraction(1), f"s_{u}")] + ptime_terms(u) + [(Fraction(-1), f"s_{v}")]
        rows.append(LinearConstraint(f"pprec_{u}_{v}", tuple(terms), "<=", Fraction(0)))
    for v, w in pairs.pairs:
        terms = (
            [(Fraction(1), f"s_{v}")]
            + ptime_terms(v)
            + [(Lf, f"y_{v}_{w}"), (Fraction(-1), f"s_{w}")]
        )
        rows.append(LinearConstraint(f"disj_{v}_{w}", tuple(terms), "<=", Lf))

    n_binary = phi + len(pairs.pairs)
    stats = ModelStats(
        n_constraints=len(rows),
        n_variables=len(variables) - 1,
        n_binary=n_binary,
        phi=phi,
        phi_hat=phi_hat,
        beta=pairs.beta,
        bound=L,
    )
    return MilpModel(
        name=f"{instance.name}-compact",
        variables=tuple(variables),
        objective=((Fraction(1), "z"),),
        constraints=tuple(rows),
        stats=stats,
    )


def build_machine_indexed_model(instance: Instance, L: Rational) -> MilpModel:
    """Machine-indexed model: start/completion per (operation, machine).

    Timing variables of unchosen machines are forced to zero, precedence rows
    couple the per-machine sums, and only terminal operations bound z.  The
    pair-orientation rows are emitted once per ordered pair, so the model has
    ``|V| + |A| + phi_hat + 2 phi + 2 beta`` rows and ``3 phi + beta``
    variables besides z.
    """
    _check_horizon(L)
    pairs, phi, phi_hat, terminal = _sizes(instance)
    Lf = _frac(L)

    variables = [Variable("z", CONTINUOUS)]
    variables += [Variable(f"s_{v}_{k}", CONTINUOUS) for v in instance.ops for k in instance.eligible[v]]
    variables += [Variable(f"t_{v}_{k}", CONTINUOUS) for v in instance.ops for k in instance.eligible[v]]
    variables += [Variable(f"x_{v}_{k}", BINARY, 0, 1) for v in instance.ops for k in instance.eligible[v]]
    for k in range(1, instance.machines + 1):
        variables += [Variable(f"y_{v}_{w}_{k}", BINARY, 0, 1) for v, w in pairs.by_machine[k]]

    rows: list[LinearConstraint] = []
    for v in terminal:
        for k in instance.eligible[v]:
            terms = ((Fraction(1), f"t_{v}_{k}"), (Fraction(-1), "z"))
            rows.append(LinearConstraint(f"cmax_{v}_{k}", terms, "<=", Fraction(0)))
    for v in instance.ops:
        terms = [(Fraction(1), f"x_{v}_{k}") for k in instance.eligible[v]]
        rows.append(LinearConstraint(f"assign_{v}", tuple(terms), "=", Fraction(1)))
    for v in instance.ops:
        for k in instance.eligible[v]:
            terms = (
                (Fraction(1), f"s_{v}_{k}"),
                (Fraction(1), f"t_{v}_{k}"),
                (-2 * Lf, f"x_{v}_{k}"),
            )
            rows.append(LinearConstraint(f"link_{v}_{k}", terms, "<=", Fraction(0)))
    for k in range(1, instance.machines + 1):
        for v, w in pairs.by_machine[k]:
            terms = ((Fraction(1), f"y_{v}_{w}_{k}"), (Fraction(1), f"y_{w}_{v}_{k}"))
            rows.append(LinearConstraint(f"sel_{k}_{v}_{w}", terms, "=", Fraction(1)))
    for v in instance.ops:
        for k in instance.eligible[v]:
            terms = (
                (Fraction(1), f"s_{v}_{k}"),
                (Fraction(-1), f"t_{v}_{k}"),
                (Lf, f"x_{v}_{k}"),
            )
            rhs = Lf - _frac(instance.ptime(v, k))
            rows.append(LinearConstraint(f"comp_{v}_{k}", terms, "<=", rhs))
    for k in range(1, instance.machines + 1):
        for v, w in pairs.by_machine[k]:
            terms = (
                (Fraction(1), f"t_{v}_{k}"),
                (Fraction(-1), f"s_{w}_{k}"),
                (Lf, f"y_{v}_{w}_{k}"),
            )
            rows.append(LinearConstraint(f"disj_{k}_{v}_{w}", terms, "<=", Lf))
    for u, v in instance.arcs:
        terms = [(Fraction(1), f"t_{u}_{k}") for k in instance.eligible[u]]
        terms += [(Fraction(-1), f"s_{v}_{k}") for k in instance.eligible[v]]
        rows.append(LinearConstraint(f"pprec_{u}_{v}", tuple(terms), "<=", Fraction(0)))

    stats = ModelStats(
        n_constraints=len(rows),
        n_variables=len(variables) - 1,
        n_binary=phi + pairs.beta,
        phi=phi,
        phi_hat=phi_hat,
        beta=pairs.beta,
        bound=L,
    )
    return MilpModel(
        name=f"{instance.name}-machine-indexed",
        variables=tuple(variables),
        objective=((Fraction(1), "z"),),
        constraints=tuple(rows),
        stats=stats,
    )


def check_feasible(model: MilpModel, point: ModelPoint, tol: Rational = 0) -> ValidationReport:
    """Evaluate every constraint and bound of the model at the point.

    Integrality is never enforced, so this doubles as the LP-relaxation
    check.  With exact rational inputs ``tol=0`` is meaningful.
    """
    names = set(model.variable_names())
    given = set(point.values)
    unknown = given - names
    if unknown:
        raise PointError(f"unknown variable names in point: {sorted(unknown)[:5]}")
    missing = names - given
    if missing:
        raise PointError(f"point is missing variables: {sorted(missing)[:5]}")
    issues: list[ValidationIssue] = []
    for var in model.variables:
        val = point[var.name]
        if val < var.lower - tol:
            issues.append(ValidationIssue("bound", f"{var.name} = {val} below lower bound {var.lower}"))
        if var.upper is not None and val > var.upper + tol:
            issues.append(ValidationIssue("bound", f"{var.name} = {val} above upper bound {var.upper}"))
    for row in model.constraints:
        lhs = sum(coef * point[name] for coef, name in row.terms)
        if row.relation == "<=":
            excess = lhs - row.rhs
        elif row.relation == ">=":
            excess = row.rhs - lhs
        else:
            excess = abs(lhs - row.rhs)
        if excess > tol:
            issues.append(
                ValidationIssue("constraint", f"{row.name}: lhs {lhs} {row.relation} {row.rhs} violated by {excess}")
            )
    return ValidationReport(tuple(issues))


def encode_compact(instance: Instance, sol: SolutionPair) -> ModelPoint:
    """Map an admissible solution to a feasible compact-model point.

    Starts come from the tight schedule and z is its makespan, so the point
    satisfies every row of ``build_compact_model(instance, L)`` whenever
    ``L >= makespan``.
    """
    sched = tight_schedule(instance, sol)
    pairs = disjunctive_pairs(instance)
    f = sol.assignment.machine
    values: dict[str, Rational] = {"z": sched.makespan}
    for v in instance.ops:
        values[f"s_{v}"] = sched.start[v]
        for k in instance.eligible[v]:
            values[f"x_{v}_{k}"] = 1 if f[v] == k else 0
    for v, w in pairs.pairs:
        values[f"y_{v}_{w}"] = 1 if (v, w) in sol.selection.pairs else 0
    return ModelPoint(values)


def encode_machine_indexed(
    instance: Instance, sol: SolutionPair, op_order: Sequence[int] | None = None
) -> ModelPoint:
    """Map an admissible solution to a feasible machine-indexed point.

    Off-machine sequencing binaries follow the given operation order (the
    identity by default): an unassigned-versus-assigned pair always yields to
    the assigned one, and two unassigned operations order by position.  The
    point satisfies the model whenever ``L >= makespan`` and ``L`` is at
    least every processing time.
    """
    sched = tight_schedule(instance, sol)
    if op_order is None:
        op_order = tuple(instance.ops)
    if sorted(op_order) != list(instance.ops):
        raise ValueError("op_order must be a permutation of the operation ids")
    pos = {v: i for i, v in enumerate(op_order)}
    pairs = disjunctive_pairs(instance)
    f = sol.assignment.machine
    values: dict[str, Rational] = {"z": sched.makespan}
    for v in instance.ops:
        for k in instance.eligible[v]:
            on = f[v] == k
            values[f"s_{v}_{k}"] = sched.start[v] if on else 0
            values[f"t_{v}_{k}"] = sched.start[v] + instance.ptime(v, k) if on else 0
            values[f"x_{v}_{k}"] = 1 if on else 0
    for k in range(1, instance.machines + 1):
        for v, w in pairs.by_machine[k]:
            if f[v] == k and f[w] == k:
                bit = 1 if (v, w) in sol.selection.pairs else 0
            elif f[v] != k and f[w] == k:
                bit = 1
            elif f[v] != k and f[w] != k:
                bit = 1 if pos[v] > pos[w] else 0
            else:
                bit = 0
            values[f"y_{v}_{w}_{k}"] = bit
    return ModelPoint(values)


def _expect_names(point: ModelPoint, expected: set[str]) -> None:
    given = set(point.values)
    unknown = given - expected
    if unknown:
        raise PointError(f"unknown variable names in point: {sorted(unknown)[:5]}")
    missing = expected - given
    if missing:
        raise PointError(f"point is missing variables: {sorted(missing)[:5]}")


def _binary(point: ModelPoint, name: str) -> int:
    val = point[name]
    if val == 0:
        return 0
    if val == 1:
        return 1
    raise PointError(f"non-integral binary {name} = {val}")


def _assignment_from_x(instance: Instance, point: ModelPoint) -> MachineAssignment:
    machine = []
    for v in instance.ops:
        chosen = [k for k in instance.eligible[v] if _binary(point, f"x_{v}_{k}")]
        if not chosen:
            raise PointError(f"no machine selected for operation {v}")
        if len(chosen) > 1:
            raise PointError(f"multiple machines selected for operation {v}: {chosen}")
        machine.append(chosen[0])
    return MachineAssignment(tuple(machine))


def _selection_or_raise(instance: Instance, assignment: MachineAssignment, oriented: set[tuple[int, int]]) -> Selection:
    """Build the on-machine selection; reject unoriented or cyclic points."""
    shared = same_machine_pairs(instance, assignment)
    chosen = set()
    for v, w in shared:
        if v < w:
            fwd = (v, w) in oriented
            bwd = (w, v) in oriented
            if fwd == bwd:
                state = "both orientations" if fwd else "no orientation"
                raise PointError(f"infeasible point: pair ({v}, {w}) has {state} selected")
            chosen.add((v, w) if fwd else (w, v))
    selection = Selection(frozenset(chosen))
    if not is_admissible(instance, SolutionPair(assignment, selection)):
        raise PointError("infeasible point: selection induces a precedence cycle")
    return selection


def decode_compact(instance: Instance, point: ModelPoint) -> tuple[SolutionPair, Schedule]:
    """Recover the solution encoded by an integral compact-model point.

    Sequencing binaries of pairs that do not share the assigned machine carry
    no meaning and are ignored.  The returned schedule is the tight schedule
    of the recovered solution; its makespan never exceeds the point's z.
    """
    model_names = {"z"}
    model_names.update(f"s_{v}" for v in instance.ops)
    model_names.update(f"x_{v}_{k}" for v in instance.ops for k in instance.eligible[v])
    pairs = disjunctive_pairs(instance)
    model_names.update(f"y_{v}_{w}" for v, w in pairs.pairs)
    _expect_names(point, model_names)

    assignment = _assignment_from_x(instance, point)
    oriented = {(v, w) for v, w in pairs.pairs if _binary(point, f"y_{v}_{w}")}
    selection = _selection_or_raise(instance, assignment, oriented)
    sol = SolutionPair(assignment, selection)
    sched = tight_schedule(instance, sol)
    if instance.n_ops and sched.makespan > point["z"]:
        raise PointError(f"infeasible point: z = {point['z']} below the tight makespan {sched.makespan}")
    return sol, sched


def decode_machine_indexed(instance: Instance, point: ModelPoint) -> tuple[SolutionPair, Schedule]:
    """Recover the solution encoded by an integral machine-indexed point.

    The schedule uses the point's own start values on the chosen machines.
    A certifying critical path is attached when those starts are tight;
    otherwise the path is left empty.
    """
    pairs = disjunctive_pairs(instance)
    model_names = {"z"}
    for v in instance.ops:
        for k in instance.eligible[v]:
            model_names.update((f"s_{v}_{k}", f"t_{v}_{k}", f"x_{v}_{k}"))
    for k in range(1, instance.machines + 1):
        model_names.update(f"y_{v}_{w}_{k}" for v, w in pairs.by_machine[k])
    _expect_names(point, model_names)

    assignment = _assignment_from_x(instance, point)
    f = assignment.machine
    oriented = set()
    for k in range(1, instance.machines + 1):
        for v, w in pairs.by_machine[k]:
            if f[v] == k and f[w] == k and _binary(point, f"y_{v}_{w}_{k}"):
                oriented.add((v, w))
    selection = _selection_or_raise(instance, assignment, oriented)
    sol = SolutionPair(assignment, selection)

    start = tuple(point[f"s_{v}_{f[v]}"] for v in instance.ops)
    p = [instance.ptime(v, f[v]) for v in instance.ops]
    for v in instance.ops:
        if start[v] < 0:
            raise PointError(f"infeasible point: start of operation {v} is negative")
    edges = sorted(set(instance.arcs) | selection.pairs)
    for u, w in edges:
        if start[u] + p[u] > start[w]:
            raise PointError(f"infeasible point: edge ({u}, {w}) violated by the start values")
    if instance.n_ops == 0:
        return sol, Schedule((), 0, ())
    makespan = max(start[v] + p[v] for v in instance.ops)
    if makespan > point["z"]:
        raise PointError(f"infeasible point: z = {point['z']} below the makespan {makespan}")
    return sol, Schedule(start, makespan, certified_critical_path(instance, sol, start))


def machine_indexed_gap_witness(instance: Instance, L: Rational) -> ModelPoint:
    """Zero-objective fractional point for the machine-indexed relaxation.

    All timing variables are zero, every assignment binary is spread
    uniformly over the operation's eligible machines, every sequencing
    binary is 1/2, and z = 0.  Requires every processing time at most L/2
    and at least two eligible machines everywhere (the uniform assignment
    row then keeps each component at most 1/2, which is what the zeroed
    completion rows tolerate).  Its objective value 0 shows the relaxation
    bound can be arbitrarily far below the true optimum.
    """
    _check_horizon(L)
    on_machine: dict[int, int] = {k: 0 for k in range(1, instance.machines + 1)}
    for v in instance.ops:
        for k in instance.eligible[v]:
            on_machine[k] += 1
    for k, count in on_machine.items():
        if count < 2:
            raise WitnessError(f"machine {k} is eligible for {count} operation(s); need at least 2")
    for v in instance.ops:
        if len(instance.eligible[v]) < 2:
            raise WitnessError(f"operation {v} has a single eligible machine; need at least 2")
        for k in instance.eligible[v]:
            if 2 * instance.ptime(v, k) > L:
                raise WitnessError(
                    f"processing time p({v},{k}) = {instance.ptime(v, k)} exceeds L/2 = {_frac(L) / 2}"
                )
    values: dict[str, Rational] = {"z": 0}
    for v in instance.ops:
        share = Fraction(1, len(instance.eligible[v]))
        for k in instance.eligible[v]:
            values[f"s_{v}_{k}"] = 0
            values[f"t_{v}_{k}"] = 0
            values[f"x_{v}_{k}"] = share
    pairs = disjunctive_pairs(instance)
    for k in range(1, instance.machines + 1):
        for v, w in pairs.by_machine[k]:
            values[f"y_{v}_{w}_{k}"] = Fraction(1, 2)
    return ModelPoint(values)


def makespan_lower_bound(instance: Instance) -> Rational:
    """Longest path with per-operation minimum times: a valid optimum bound."""
    n = instance.n_ops
    if n == 0:
        return 0
    pmin = [min(row) for row in instance.times]
    order = topological_order(n, [instance.predecessors(v) for v in instance.ops])
    completion: list[Rational] = [0] * n
    best: Rational = 0
    for v in order:
        release = max((completion[u] for u in instance.predecessors(v)), default=0)
        completion[v] = release + pmin[v]
        if completion[v] > best:
            best = completion[v]
    return best


def default_horizon(instance: Instance, est_makespan: Rational | None = None) -> Rational:
    """Big-M horizon: a provided heuristic makespan, else the sum of maxima."""
    if est_makespan is not None:
        return est_makespan
    return sum(max(row) for row in instance.times) if instance.n_ops else 0
