"""Plain-text emission of models in LP and MPS formats.

Output is deterministic: variables and rows appear in model order, numbers
are printed as integers whenever possible, and any row with fractional
coefficients is scaled by the least common denominator first (scaling a row
by a positive integer does not change the feasible set).  Standalone values
such as bounds fall back to exact decimals.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm

from .milp import BINARY, LinearConstraint, MilpModel

__all__ = ["write_lp", "write_mps"]


def _exact_decimal(value: Fraction) -> str:
    """Exact decimal representation; only terminating expansions allowed."""
    if value.denominator == 1:
        return str(value.numerator)
    den = value.denominator
    twos = fives = 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den != 1:
        raise ValueError(f"{value} has no terminating decimal expansion")
    shift = max(twos, fives)
    scaled = value.numerator * 10**shift // value.denominator
    sign = "-" if scaled < 0 else ""
    digits = str(abs(scaled)).rjust(shift + 1, "0")
    whole, frac = digits[:-shift], digits[-shift:]
    return f"{sign}{whole}.{frac}"


def _scaled_row(row: LinearConstraint) -> tuple[tuple[tuple[int, str], ...], int]:
    """Row with integer coefficients: (terms, rhs) after clearing denominators."""
    scale = lcm(row.rhs.denominator, *(coef.denominator for coef, _ in row.terms))
    terms = tuple((int(coef * scale), name) for coef, name in row.terms)
    return terms, int(row.rhs * scale)


def _lp_expression(terms: tuple[tuple[int, str], ...]) -> str:
    parts: list[str] = []
    for coef, name in terms:
        if coef == 0:
            continue
        mag = abs(coef)
        body = name if mag == 1 else f"{mag} {name}"
        if not parts:
            parts.append(body if coef > 0 else f"- {body}")
        else:
            parts.append(f"+ {body}" if coef > 0 else f"- {body}")
    if not parts:
        parts.append("0 " + terms[0][1] if terms else "0")
    return " ".join(parts)


def write_lp(model: MilpModel) -> str:
    """Render the model in CPLEX LP format."""
    lines = [f"\\ Problem: {model.name}", "Minimize"]
    lines.append(" obj: " + _lp_expression(tuple((int(c), n) for c, n in model.objective)))
    lines.append("Subject To")
    for row in model.constraints:
        terms, rhs = _scaled_row(row)
        relation = row.relation if row.relation != "=" else "="
        lines.append(f" {row.name}: {_lp_expression(terms)} {relation} {rhs}")
    lines.append("Bounds")
    for var in model.variables:
        if var.kind == BINARY:
            continue
        lower = _exact_decimal(Fraction(var.lower))
        if var.upper is None:
            lines.append(f" {lower} <= {var.name}")
        else:
            lines.append(f" {lower} <= {var.name} <= {_exact_decimal(Fraction(var.upper))}")
    lines.append("Binaries")
    for var in model.variables:
        if var.kind == BINARY:
            lines.append(f" {var.name}")
    lines.append("End")
    return "\n".join(lines) + "\n"


def write_mps(model: MilpModel) -> str:
    """Render the model in MPS format (column-aligned, markers for binaries)."""
    row_kind = {"<=": "L", ">=": "G", "=": "E"}
    scaled = {row.name: _scaled_row(row) for row in model.constraints}

    by_column: dict[str, list[tuple[str, int]]] = {v.name: [] for v in model.variables}
    for coef, name in model.objective:
        by_column[name].append(("obj", int(coef)))
    for row in model.constraints:
        for coef, name in scaled[row.name][0]:
            if coef != 0:
                by_column[name].append((row.name, coef))

    names = [v.name for v in model.variables] + [r.name for r in model.constraints]
    width = max(len(n) for n in names + ["'MARKER'"]) + 2

    def entry(col: str, row: str, val: object) -> str:
        return f"    {col:<{width}}{row:<{width}}{val}"

    lines = [f"NAME          {model.name}", "ROWS", " N  obj"]
    for row in model.constraints:
        lines.append(f" {row_kind[row.relation]}  {row.name}")
    lines.append("COLUMNS")
    in_integer_block = False
    for var in model.variables:
        if var.kind == BINARY and not in_integer_block:
            lines.append(entry("MARKER1", "'MARKER'", "'INTORG'"))
            in_integer_block = True
        if var.kind != BINARY and in_integer_block:
            lines.append(entry("MARKER2", "'MARKER'", "'INTEND'"))
            in_integer_block = False
        for row_name, coef in by_column[var.name]:
            lines.append(entry(var.name, row_name, coef))
    if in_integer_block:
        lines.append(entry("MARKER2", "'MARKER'", "'INTEND'"))
    lines.append("RHS")
    for row in model.constraints:
        rhs = scaled[row.name][1]
        if rhs != 0:
            lines.append(entry("RHS", row.name, rhs))
    lines.append("BOUNDS")
    for var in model.variables:
        if var.kind == BINARY:
            lines.append(f" BV {'BND':<{width}}{var.name}")
    lines.append("ENDATA")
    return "\n".join(lines) + "\n"
