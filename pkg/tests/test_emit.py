"""LP/MPS writers: determinism, numeric rendering, structural sanity."""

from __future__ import annotations

from fractions import Fraction

import pytest

from fjs.emit import _exact_decimal, write_lp, write_mps
from fjs.milp import build_compact_model, build_machine_indexed_model

from conftest import small_random_instance


def test_emission_is_deterministic(ex1):
    model = build_compact_model(ex1, 8)
    assert write_lp(model) == write_lp(model)
    assert write_mps(model) == write_mps(model)


def test_lp_sections_in_order(ex1):
    text = write_lp(build_machine_indexed_model(ex1, 8))
    positions = [text.index(s) for s in ("Minimize", "Subject To", "Bounds", "Binaries", "End")]
    assert positions == sorted(positions)
    assert text.endswith("End\n")


def test_lp_one_constraint_per_line(ex1):
    model = build_compact_model(ex1, 8)
    text = write_lp(model)
    for row in model.constraints:
        assert sum(line.startswith(f" {row.name}:") for line in text.splitlines()) == 1


def test_every_binary_listed_once(ex1):
    model = build_compact_model(ex1, 8)
    lp = write_lp(model)
    binaries_block = lp.split("Binaries\n", 1)[1].split("End", 1)[0].split()
    expected = [v.name for v in model.variables if v.kind == "binary"]
    assert binaries_block == expected
    mps = write_mps(model)
    assert mps.count("'INTORG'") == 1 and mps.count("'INTEND'") == 1
    for name in expected:
        assert f" BV BND" in mps and name in mps


def test_mps_sections_in_order(ex1):
    text = write_mps(build_compact_model(ex1, 8))
    positions = [text.index(s) for s in ("NAME", "ROWS", "COLUMNS", "RHS", "BOUNDS", "ENDATA")]
    assert positions == sorted(positions)


def test_fractional_rows_are_scaled_to_integers():
    inst = small_random_instance(3)
    model = build_compact_model(inst, Fraction(19, 2))
    lp = write_lp(model)
    for line in lp.splitlines():
        assert "/" not in line
        if line.startswith(" disj"):
            assert "." not in line  # scaled to integers, not decimals
    mps = write_mps(model)
    assert "/" not in mps and "." not in mps.split("NAME", 1)[1]


def test_integer_models_print_plain_integers(ex1):
    lp = write_lp(build_compact_model(ex1, 8))
    assert "." not in lp.split("\n", 1)[1]


def test_exact_decimal_rendering():
    assert _exact_decimal(Fraction(5, 2)) == "2.5"
    assert _exact_decimal(Fraction(-3, 8)) == "-0.375"
    assert _exact_decimal(Fraction(7)) == "7"
    assert _exact_decimal(Fraction(1, 20)) == "0.05"
    with pytest.raises(ValueError):
        _exact_decimal(Fraction(1, 3))
