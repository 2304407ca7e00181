"""Command-line interface for batch generation, solving, emission, and reports.

Exit codes: 0 success, 1 validation or decode failure, 2 usage or input
error, 3 time limit hit with an open optimality gap.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .core import FjsError, Instance, validate_solution
from .emit import write_lp, write_mps
from .exact import STATUS_OPTIMAL, solve_branch_and_bound
from .generate import DafjsParams, YfjsParams, generate_dafjs, generate_yfjs
from .heuristic import earliest_start_heuristic
from .io import (
    FORMAT_INSTANCE,
    FORMAT_SOLUTION,
    ReportRow,
    instance_size,
    number_from_json,
    parse_instance,
    parse_solution,
    render_report,
    serialize_instance,
    serialize_solution,
)
from .milp import (
    ModelPoint,
    build_compact_model,
    build_machine_indexed_model,
    decode_compact,
    decode_machine_indexed,
    default_horizon,
    makespan_lower_bound,
)

MODEL_BUILDERS = {"new": build_compact_model, "ooy": build_machine_indexed_model}
MODEL_DECODERS = {"new": decode_compact, "ooy": decode_machine_indexed}
WRITERS = {"lp": write_lp, "mps": write_mps}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fjs", description=__doc__)
    parser.add_argument(
        "--version",
        action="version",
        version=f"fjs {__version__} (formats: {FORMAT_INSTANCE}, {FORMAT_SOLUTION})",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="generate a random instance")
    gen_sub = gen.add_subparsers(dest="family", required=True)
    yfjs = gen_sub.add_parser("yfjs", help="jobs are chains, possibly rewired into a Y")
    yfjs.add_argument("--n", type=int, required=True, help="number of jobs")
    yfjs.add_argument("--o", type=int, required=True, help="operations per job")
    yfjs.add_argument("--m", type=int, required=True, help="number of machines")
    yfjs.add_argument("--q", type=int, required=True, help="max eligible machines per operation")
    yfjs.add_argument("--seed", type=int, required=True)
    yfjs.add_argument("--out", required=True)
    dafjs = gen_sub.add_parser("dafjs", help="jobs split and merge between equal-length paths")
    dafjs.add_argument("--n", type=int, required=True, help="number of jobs")
    dafjs.add_argument("--m", type=int, required=True, help="number of machines")
    dafjs.add_argument("--seed", type=int, required=True)
    dafjs.add_argument("--out", required=True)

    solve = sub.add_parser("solve", help="solve an instance")
    solve.add_argument("--method", choices=("est", "bnb"), required=True)
    solve.add_argument("--time-limit", type=float, default=3600.0)
    solve.add_argument("--threads", type=int, default=1)
    solve.add_argument("--in", dest="infile", required=True)
    solve.add_argument("--out")

    emit = sub.add_parser("emit", help="write a model as an LP or MPS file")
    emit.add_argument("--model", choices=("new", "ooy"), required=True)
    emit.add_argument("--format", choices=("lp", "mps"), required=True)
    emit.add_argument("--L", default="auto", help="makespan horizon: 'auto' or a positive rational")
    emit.add_argument("--in", dest="infile", required=True)
    emit.add_argument("--out", required=True)

    validate = sub.add_parser("validate", help="validate an instance, optionally with a solution")
    validate.add_argument("--in", dest="infile", required=True)
    validate.add_argument("--sol")

    decode = sub.add_parser("decode", help="decode a model point into a solution file")
    decode.add_argument("--model", choices=("new", "ooy"), required=True)
    decode.add_argument("--in", dest="infile", required=True)
    decode.add_argument("--point", required=True)
    decode.add_argument("--out", required=True)

    report = sub.add_parser("report", help="aggregate solution files into a table")
    report.add_argument("--dir", dest="directory", required=True)
    report.add_argument("--out")
    return parser


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _write(path: str | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _fail(message: str, code: int) -> int:
    print(f"fjs: {message}", file=sys.stderr)
    return code


def _load_instance(path: str) -> Instance:
    return parse_instance(_read(path))


def _cmd_generate(args: argparse.Namespace) -> int:
    if args.family == "yfjs":
        instance = generate_yfjs(YfjsParams(args.n, args.o, args.m, args.q, args.seed))
    else:
        instance = generate_dafjs(DafjsParams(args.n, args.m, args.seed))
    _write(args.out, serialize_instance(instance))
    print(f"wrote {instance.name} ({instance.n_ops} operations) to {args.out}")
    return 0


def _cmd_solve(args: argparse.Namespace) -> int:
    instance = _load_instance(args.infile)
    if args.method == "est":
        sol, sched = earliest_start_heuristic(instance)
        meta = {
            "method": "est",
            "status": "feasible",
            "lower_bound": makespan_lower_bound(instance),
            "upper_bound": sched.makespan,
            "elapsed": 0.0,
        }
        status = "feasible"
        value_cell = str(sched.makespan)
    else:
        result = solve_branch_and_bound(instance, time_limit=args.time_limit, threads=args.threads)
        sol, sched = result.solution, result.schedule
        meta = {
            "method": "bnb",
            "status": result.status,
            "lower_bound": result.lower_bound,
            "upper_bound": result.upper_bound,
            "nodes_explored": result.nodes_explored,
            "elapsed": result.elapsed,
        }
        status = result.status
        value_cell = (
            str(result.upper_bound)
            if result.status == STATUS_OPTIMAL
            else f"[{result.lower_bound};{result.upper_bound}]"
        )
    if args.out:
        _write(args.out, serialize_solution(instance, sol, sched, meta))
    print(f"{instance.name}: mks {value_cell} ({status})")
    return 3 if args.method == "bnb" and status != STATUS_OPTIMAL else 0


def _parse_horizon(text: str, instance: Instance):
    if text == "auto":
        _, sched = earliest_start_heuristic(instance)
        return default_horizon(instance, sched.makespan)
    value = Fraction(text)
    return int(value) if value.denominator == 1 else value


def _cmd_emit(args: argparse.Namespace) -> int:
    instance = _load_instance(args.infile)
    try:
        horizon = _parse_horizon(args.L, instance)
    except (ValueError, ZeroDivisionError):
        return _fail(f"--L must be 'auto' or a positive rational, got {args.L!r}", 2)
    model = MODEL_BUILDERS[args.model](instance, horizon)
    _write(args.out, WRITERS[args.format](model))
    stats = model.stats
    print(
        f"wrote {model.name}: {stats.n_constraints} constraints, "
        f"{stats.n_variables} variables ({stats.n_binary} binary), L = {horizon}"
    )
    return 0


def _cmd_validate(args: argparse.Namespace) -> int:
    instance = _load_instance(args.infile)
    if args.sol is None:
        print(f"{instance.name}: instance ok ({instance.n_ops} operations)")
        return 0
    sol, sched, _ = parse_solution(_read(args.sol), instance)
    report = validate_solution(instance, sol, sched)
    if report.ok:
        print(f"{instance.name}: solution ok (makespan {sched.makespan})")
        return 0
    for issue in report.issues:
        print(f"{instance.name}: {issue.kind}: {issue.message}", file=sys.stderr)
    return 1


def _cmd_decode(args: argparse.Namespace) -> int:
    instance = _load_instance(args.infile)
    raw = json.loads(_read(args.point))
    if not isinstance(raw, dict):
        return _fail("point file must be a JSON object of variable values", 2)
    point = ModelPoint({name: number_from_json(value, name) for name, value in raw.items()})
    sol, sched = MODEL_DECODERS[args.model](instance, point)
    meta = {"method": f"decode-{args.model}", "status": "feasible"}
    _write(args.out, serialize_solution(instance, sol, sched, meta))
    print(f"{instance.name}: decoded point, makespan {sched.makespan}")
    return 0


def _report_bound(meta: dict, key: str, fallback) -> object:
    value = meta.get(key, fallback)
    if isinstance(value, float):
        return value
    return number_from_json(value, key)


def _cmd_report(args: argparse.Namespace) -> int:
    directory = Path(args.directory)
    instances: dict[str, Instance] = {}
    for path in sorted(directory.glob("*.fjs.json")):
        instance = parse_instance(path.read_text(encoding="utf-8"))
        instances[instance.name] = instance
    rows = []
    for path in sorted(directory.glob("*.sol.json")):
        document = json.loads(path.read_text(encoding="utf-8"))
        name = document.get("instance")
        if name not in instances:
            return _fail(f"{path.name}: no instance file named {name!r} in {directory}", 2)
        instance = instances[name]
        sol, sched, meta = parse_solution(path.read_text(encoding="utf-8"), instance)
        _, est_sched = earliest_start_heuristic(instance)
        n_jobs, ops_min, ops_max, machines = instance_size(instance)
        rows.append(
            ReportRow(
                name=name,
                n_jobs=n_jobs,
                ops_min=ops_min,
                ops_max=ops_max,
                machines=machines,
                est_makespan=est_sched.makespan,
                method=str(meta.get("method", "?")),
                status=str(meta.get("status", "?")),
                lower_bound=_report_bound(meta, "lower_bound", sched.makespan),
                upper_bound=_report_bound(meta, "upper_bound", sched.makespan),
                elapsed=float(meta.get("elapsed", 0.0)),
            )
        )
    rows.sort(key=lambda r: (r.name, r.method))
    _write(args.out, render_report(rows))
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "generate": _cmd_generate,
        "solve": _cmd_solve,
        "emit": _cmd_emit,
        "validate": _cmd_validate,
        "decode": _cmd_decode,
        "report": _cmd_report,
    }
    try:
        return handlers[args.command](args)
    except FileNotFoundError as exc:
        return _fail(f"cannot read {exc.filename}", 2)
    except json.JSONDecodeError as exc:
        return _fail(f"bad JSON input: line {exc.lineno}: {exc.msg}", 1)
    except FjsError as exc:
        code = getattr(exc, "code", None)
        prefix = f"{code}: " if code else ""
        return _fail(f"{prefix}{exc}", 1)


if __name__ == "__main__":
    sys.exit(main())
