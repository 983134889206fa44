import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qgn.errors import ExprSyntaxError, UnknownIdentifierError, VariableIndexError
from qgn.exprparse import (
    FUNCTIONS,
    BinOp,
    Call,
    Neg,
    Num,
    ParsedProblem,
    Var,
    evaluate,
    parse,
    to_source,
    to_vector_field,
)
from qgn.model import get_problem
from qgn.solver import SolveConfig, q_gauss_newton

EX1 = "2 - (exp(-x1^2) + 2*exp(-(x1-3)^2))"
EX3 = ["x1 - 0.4", "x2 - 8", "x1^2 + x2^2 - 1"]


def value(src, x, n=None):
    return evaluate(parse(src, n or len(x)), x)


# ----------------------------------------------------------------- values

def test_examples():
    assert value("x1^2 + 3*x2 - 1", [1.0, 2.0]) == 6.0
    assert value("2*(x1 + 3)", [4.0]) == 14.0
    assert value("-x1^2", [2.0]) == -4.0
    assert value("x1^-2", [2.0]) == 0.25
    assert value("2^3^2", []) == 512.0
    assert value("8 / 4 / 2", []) == 1.0
    assert value("7 - 2 - 1", []) == 4.0
    assert value("--x1", [3.0]) == 3.0
    assert value("2 * -x1", [3.0]) == -6.0


def test_functions():
    x = [0.7]
    for name, fn in FUNCTIONS.items():
        assert value(f"{name}(x1)", x) == pytest.approx(float(fn(0.7)), rel=1e-15)


def test_nonfinite_values_do_not_raise():
    assert math.isinf(value("1 / (x1 + 0.1)", [-0.1]))
    assert math.isnan(value("ln(x1)", [-1.0]))
    assert math.isnan(value("sqrt(x1)", [-4.0]))


def test_example1_text():
    assert value(EX1, [3.0]) == pytest.approx(-math.exp(-9), rel=1e-12)
    assert value(EX1, [2.1]) == get_problem("example1").evaluate([2.1])[0]


def test_scientific_numbers():
    assert value("1.5e-3 * x1 + .5 + 2.", [1000.0]) == 4.0


# ----------------------------------------------------------------- errors

@pytest.mark.parametrize(
    "src,offset",
    [
        ("2x1", 1),
        ("x1 +", 4),
        ("(x1 + 1", 7),
        ("x1 + 1)", 6),
        ("* x1", 0),
        ("exp x1", 4),
        ("x1 $ 2", 3),
        ("", 0),
    ],
)
def test_syntax_error_offsets(src, offset):
    with pytest.raises(ExprSyntaxError) as info:
        parse(src, 2)
    assert info.value.offset == offset
    assert 0 <= info.value.offset <= len(src.encode())
    assert f"at byte {offset}" in str(info.value)


def test_syntax_error_lists_expected():
    with pytest.raises(ExprSyntaxError) as info:
        parse("(x1 + 1", 1)
    assert info.value.expected == {")"}


def test_unknown_identifier():
    with pytest.raises(UnknownIdentifierError) as info:
        parse("x1 + tan(x1)", 1)
    assert info.value.name == "tan" and info.value.offset == 5
    with pytest.raises(UnknownIdentifierError):
        parse("pi * x1", 1)


def test_variable_out_of_range():
    with pytest.raises(VariableIndexError) as info:
        parse("x1 + x3", 2)
    assert info.value.offset == 5
    with pytest.raises(VariableIndexError):
        parse("x0", 2)


def test_byte_offsets_after_multibyte_whitespace():
    # U+00A0 is whitespace for the tokenizer and two bytes in UTF-8
    with pytest.raises(UnknownIdentifierError) as info:
        parse("x1 + y", 1)
    assert info.value.offset == 6


# ------------------------------------------------------------- round trip

def trees(depth):
    leaves = st.one_of(
        st.builds(Num, st.floats(0, 1e6, allow_nan=False, allow_infinity=False)),
        st.builds(Var, st.integers(1, 3)),
    )
    if depth == 0:
        return leaves
    sub = trees(depth - 1)
    return st.one_of(
        leaves,
        st.builds(Neg, sub),
        st.builds(BinOp, st.sampled_from("+-*/^"), sub, sub),
        st.builds(Call, st.sampled_from(sorted(FUNCTIONS)), sub),
    )


@settings(max_examples=500, deadline=None)
@given(tree=trees(6), x=st.lists(st.floats(-3, 3), min_size=3, max_size=3))
def test_round_trip(tree, x):
    src = to_source(tree)
    again = parse(src, 3)
    assert again == tree
    a, b = evaluate(tree, x), evaluate(again, x)
    assert a == b or (math.isnan(a) and math.isnan(b))


def test_printer_keeps_grouping():
    assert to_source(parse("(x1 - x2) - (x1 - 1)", 2)) == "x1 - x2 - (x1 - 1.0)"
    assert to_source(parse("(-x1)^2", 1)) == "(-x1)^2.0"
    assert to_source(parse("(x1^2)^3", 1)) == "(x1^2.0)^3.0"


# ------------------------------------------------------ problems from text

def test_example3_text_matches_builtin():
    p = to_vector_field(ParsedProblem.from_sources(EX3, 2, "example3"))
    ref = get_problem("example3")
    rng = np.random.default_rng(4)
    for x in rng.uniform(-5, 5, (20, 2)):
        np.testing.assert_allclose(p.evaluate(x), ref.evaluate(x), rtol=1e-12, atol=1e-12)


def test_parsed_problem_shape():
    pp = ParsedProblem.from_sources(EX3, 2, x0=[0, 0])
    assert pp.m == 3 and pp.x0 == (0.0, 0.0)
    prob = to_vector_field(pp)
    assert prob.analytic_q_jacobian is None and prob.m == 3


def test_example1_text_trace_matches_builtin():
    cfg = SolveConfig(stop_tol=1e-5, max_iter=25)
    text = to_vector_field(ParsedProblem.from_sources([EX1], 1))
    a = q_gauss_newton(text, [2.1], 0.9995, cfg)
    b = q_gauss_newton(get_problem("example1"), [2.1], 0.9995, cfg)
    assert a.iterations == b.iterations
    for ra, rb in zip(a.trace, b.trace):
        np.testing.assert_allclose(ra.x, rb.x, rtol=1e-9, atol=1e-9)
