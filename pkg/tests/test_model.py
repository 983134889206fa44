import math

import numpy as np
import pytest

from qgn.errors import InvalidPointError, QDomainError
from qgn.model import (
    ResidualProblem,
    builtin_example1,
    builtin_example2,
    builtin_example3,
    evaluate_objective,
    get_problem,
    list_problems,
)
from qgn.qcalc import DilationParams, q_jacobian

QS = (0.9, 0.95, 0.99, 0.9995)


def sample_points(p, rng, count):
    pts = []
    while len(pts) < count:
        x = rng.uniform(-5, 5, p.n)
        if p.domain_guard is None or all(
            p.domain_guard(x, DilationParams.scalar(q, p.n), 1e-3) for q in QS
        ):
            pts.append(x)
    return pts


def test_registry():
    assert list_problems() == ["example1", "example2", "example3"]
    assert get_problem("example2").m == 2
    with pytest.raises(KeyError):
        get_problem("rosenbrock")


def test_problem_requires_m_ge_n():
    with pytest.raises(QDomainError):
        ResidualProblem("bad", n=2, m=1, residuals=lambda x: x[:1])


def test_example3_objective_at_zero_residual_point():
    obj = evaluate_objective(builtin_example3(), [0.4, 8.0])
    np.testing.assert_allclose(obj.residuals, [0.0, 0.0, 63.16], atol=1e-12)
    assert obj.sse == pytest.approx(0.5 * 63.16**2, rel=1e-12)


def test_example2_objective_first_table_row():
    obj = evaluate_objective(builtin_example2(), [-1.0, 1.0])
    assert obj.residuals[1] == pytest.approx(13.1111, abs=5e-5)


def test_example1_values():
    p = builtin_example1()
    assert p.evaluate([2.1])[0] == pytest.approx(2 - (math.exp(-4.41) + 2 * math.exp(-0.81)), rel=1e-14)
    assert p.evaluate([3.0])[0] == pytest.approx(-math.exp(-9), rel=1e-12)


def test_example1_analytic_matches_numeric():
    p = builtin_example1()
    analytic = p.jacobian([2.1], 0.9)
    numeric = q_jacobian(p.residuals, [2.1], 0.9)
    np.testing.assert_allclose(analytic, numeric, atol=1e-10)


def test_example1_classical_branch_at_zero():
    p = builtin_example1()
    assert p.jacobian([0.0], 0.9)[0, 0] == pytest.approx(4 * -3 * math.exp(-9))


def test_example2_values():
    p = builtin_example2()
    np.testing.assert_array_equal(p.evaluate([0.0, 0.0]), [0.0, 0.0])
    np.testing.assert_allclose(p.evaluate([3.0, 1.0]), [3.0, 30 / 3.1 + 2], rtol=1e-15)
    analytic = p.jacobian([-1.0, 1.0], 0.9)
    numeric = q_jacobian(p.residuals, [-1.0, 1.0], 0.9)
    np.testing.assert_allclose(analytic, numeric, atol=1e-10)


def test_example2_domain_guard():
    p = builtin_example2()
    with pytest.raises(InvalidPointError):
        evaluate_objective(p, [-0.1, 1.0])
    with pytest.raises(InvalidPointError):
        p.check_point([-0.2, 1.0], DilationParams.scalar(0.5, 2))
    p.check_point([-0.2, 1.0], DilationParams.scalar(0.9, 2))


def test_example3_values():
    p = builtin_example3()
    np.testing.assert_allclose(p.evaluate([0.0845, 1.6908]), [-0.3155, -6.3092, 1.8658], atol=1e-3)
    for q in (0.3, 0.9, 1.0):
        np.testing.assert_array_equal(p.jacobian([0.0, 0.0], q), [[1, 0], [0, 1], [0, 0]])
    np.testing.assert_array_equal(p.jacobian([1.0, 1.0], 1.0), [[1, 0], [0, 1], [2, 2]])


@pytest.mark.parametrize("name", list_problems())
@pytest.mark.parametrize("q", QS)
def test_analytic_agrees_with_numeric(name, q):
    p = get_problem(name)
    rng = np.random.default_rng(1)
    for x in sample_points(p, rng, 50):
        a = p.jacobian(x, q)
        nmr = p.jacobian(x, q, use_analytic=False)
        tol = np.maximum(1e-6, 1e-6 * np.abs(a))
        assert np.all(np.abs(a - nmr) <= tol), (x, a, nmr)


@pytest.mark.parametrize("name", list_problems())
def test_sse_nonnegative_and_zero_only_at_roots(name):
    p = get_problem(name)
    rng = np.random.default_rng(2)
    for x in sample_points(p, rng, 30):
        obj = evaluate_objective(p, x)
        assert obj.sse >= 0
        assert obj.sse == pytest.approx(0.5 * np.sum(obj.residuals**2))
        assert (obj.sse == 0) == bool(np.all(obj.residuals == 0))
    if name == "example2":
        assert evaluate_objective(p, [0.0, 0.0]).sse == 0.0
