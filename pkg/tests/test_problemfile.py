from pathlib import Path

import numpy as np
import pytest

from qgn.model import get_problem
from qgn.problemfile import ProblemFile, ProblemFileError, dumps, load, loads, parse_vector

PROBLEMS_DIR = Path(__file__).resolve().parents[1] / "problems"


def test_load_shipped_files():
    for name in ("example1", "example2", "example3"):
        pf = load(PROBLEMS_DIR / f"{name}.prob")
        ref = get_problem(name)
        assert pf.name == name and pf.n == ref.n and len(pf.residuals) == ref.m
        assert pf.x0 == ref.x0


@pytest.mark.parametrize("name", ["example1", "example2", "example3"])
def test_shipped_files_match_builtins(name):
    prob = load(PROBLEMS_DIR / f"{name}.prob").to_problem()
    ref = get_problem(name)
    rng = np.random.default_rng(6)
    for x in rng.uniform(0.5, 3, (20, ref.n)):
        np.testing.assert_allclose(prob.evaluate(x), ref.evaluate(x), rtol=1e-12, atol=1e-12)


def test_comments_and_defaults():
    pf = loads("# header\n\nn = 1\nresidual = x1 - 2  \n", source="line.prob")
    assert pf.name == "line" and pf.x0 is None and pf.residuals == ("x1 - 2",)


def test_dumps_round_trip():
    pf = ProblemFile("demo", 2, ("x1 - 1", "x2^2", "x1*x2"), (0.5, -1.0), "three residuals")
    assert loads(dumps(pf)) == pf


@pytest.mark.parametrize(
    "text,line,fragment",
    [
        ("n = 1\nresidual = x1 +\n", 2, "unexpected end of input"),
        ("n = 1\nresidual = x2\n", 2, "out of range"),
        ("n = 1\nresidual = (x1\n", 2, "expected one of: )"),
        ("n = 1\nresidual x1\n", 2, "key = value"),
        ("n = 1\ncolor = red\n", 2, "unknown key"),
        ("n = 1\nn = 2\nresidual = x1\n", 2, "duplicate"),
        ("n = one\nresidual = x1\n", 1, "integer"),
        ("n = 0\nresidual = x1\n", 1, ">= 1"),
        ("n = 2\nresidual = x1\nresidual = x2\nx0 = 1\n", 4, "expected 2"),
        ("n = 1\nresidual = x1\nx0 = a\n", 3, "malformed" ),
    ],
)
def test_errors_report_line(text, line, fragment):
    with pytest.raises(ProblemFileError) as info:
        loads(text, source="bad.prob")
    assert info.value.line == line
    assert str(info.value).startswith(f"bad.prob:{line}: ")
    assert fragment in str(info.value)


def test_expression_error_keeps_byte_offset():
    with pytest.raises(ProblemFileError) as info:
        loads("n = 1\nresidual = 2x1\n")
    assert "at byte 1" in str(info.value)


@pytest.mark.parametrize(
    "text,fragment",
    [("residual = x1\n", "missing required key 'n'"), ("n = 2\n", "at least one"), ("n = 2\nresidual = x1\n", "m >= n")],
)
def test_errors_without_line(text, fragment):
    with pytest.raises(ProblemFileError) as info:
        loads(text)
    assert info.value.line is None and fragment in str(info.value)


def test_missing_file(tmp_path):
    with pytest.raises(ProblemFileError):
        load(tmp_path / "nope.prob")


def test_parse_vector():
    assert parse_vector("1, -2.5,3e-1") == (1.0, -2.5, 0.3)
    for bad in ("", "1,,2", "1,"):
        with pytest.raises(ValueError):
            parse_vector(bad)
