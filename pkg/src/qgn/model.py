"""Residual problems, the least-squares objective, and built-in test problems."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import InvalidPointError, NumericalFailure, QDomainError
from .qcalc import ZERO_THRESHOLD, DilationParams, q_jacobian

QJacobianFn = Callable[[np.ndarray, DilationParams, float], np.ndarray]
GuardFn = Callable[[np.ndarray, Optional[DilationParams], float], bool]


@dataclass(frozen=True)
class ResidualProblem:
    """f: R^n -> R^m whose ½||f(x)||² is to be minimised.

    ``analytic_q_jacobian(x, q, zero_threshold)`` is optional; without it the
    solver differentiates numerically. ``domain_guard(x, q, zero_threshold)``
    returns False for points where the residuals (or the dilated points the
    q-Jacobian samples, when q is given) are undefined.
    """

    name: str
    n: int
    m: int
    residuals: Callable[[np.ndarray], np.ndarray]
    analytic_q_jacobian: Optional[QJacobianFn] = None
    domain_guard: Optional[GuardFn] = None
    x0: Optional[tuple[float, ...]] = None
    description: str = ""

    def __post_init__(self):
        if self.n < 1 or self.m < 1:
            raise QDomainError(f"problem {self.name!r} needs n, m >= 1")
        if self.m < self.n:
            raise QDomainError(
                f"problem {self.name!r} has m={self.m} < n={self.n}; least squares needs m >= n"
            )
        if self.x0 is not None and len(self.x0) != self.n:
            raise QDomainError(f"problem {self.name!r}: x0 has length {len(self.x0)}, expected {self.n}")

    def check_point(
        self, x, q: Optional[DilationParams] = None, zero_threshold: float = ZERO_THRESHOLD
    ) -> np.ndarray:
        x = np.asarray(x, dtype=float).reshape(-1)
        if x.size != self.n:
            raise QDomainError(f"problem {self.name!r} expects {self.n} parameters, got {x.size}")
        if self.domain_guard is not None and not self.domain_guard(x, q, zero_threshold):
            raise InvalidPointError(f"point {x.tolist()} is outside the domain of {self.name!r}")
        return x

    def evaluate(self, x) -> np.ndarray:
        r = np.atleast_1d(np.asarray(self.residuals(np.asarray(x, dtype=float)), dtype=float))
        if r.size != self.m:
            raise ValueError(f"problem {self.name!r} returned {r.size} residuals, expected {self.m}")
        if not np.all(np.isfinite(r)):
            raise NumericalFailure(f"non-finite residuals at {np.asarray(x).tolist()}")
        return r

    def jacobian(
        self,
        x,
        q,
        zero_threshold: float = ZERO_THRESHOLD,
        use_analytic: bool = True,
    ) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        params = DilationParams.coerce(q, self.n)
        if use_analytic and self.analytic_q_jacobian is not None:
            J = np.asarray(self.analytic_q_jacobian(x, params, zero_threshold), dtype=float)
            if not np.all(np.isfinite(J)):
                raise NumericalFailure(f"non-finite q-Jacobian at {x.tolist()}")
            return J.reshape(self.m, self.n)
        return q_jacobian(self.residuals, x, params, zero_threshold)


@dataclass(frozen=True)
class ObjectiveValue:
    sse: float
    residuals: np.ndarray


def evaluate_objective(p: ResidualProblem, x) -> ObjectiveValue:
    """Residuals and F(x) = ½||f(x)||² at a point accepted by the domain guard."""
    x = p.check_point(x)
    r = p.evaluate(x)
    return ObjectiveValue(sse=0.5 * float(r @ r), residuals=r)


def _classical(q: float, xi: float, zero_threshold: float) -> bool:
    return q == 1.0 or abs(xi) <= zero_threshold


# --------------------------------------------------------------------------
# Example 1: scalar residual with a shallow negative dip just below zero at 3
# --------------------------------------------------------------------------

def _ex1_residuals(x):
    t = x[0]
    return np.array([2.0 - (np.exp(-t * t) + 2.0 * np.exp(-((t - 3.0) ** 2)))])


def _ex1_qjac(x, q, zero_threshold):
    t, qq = x[0], q[0]
    if _classical(qq, t, zero_threshold):
        d = 2.0 * t * np.exp(-t * t) + 4.0 * (t - 3.0) * np.exp(-((t - 3.0) ** 2))
    else:
        qt = qq * t
        d = (
            -np.exp(-t * t)
            + np.exp(-qt * qt)
            - 2.0 * np.exp(-((t - 3.0) ** 2))
            + 2.0 * np.exp(-((qt - 3.0) ** 2))
        ) / ((1.0 - qq) * t)
    return np.array([[d]])


def builtin_example1() -> ResidualProblem:
    return ResidualProblem(
        name="example1",
        n=1,
        m=1,
        residuals=_ex1_residuals,
        analytic_q_jacobian=_ex1_qjac,
        x0=(2.1,),
        description="f(x) = 2 - (exp(-x^2) + 2 exp(-(x-3)^2))",
    )


# --------------------------------------------------------------------------
# Example 2: Powell's badly scaled 2x2 system, pole at x1 = -0.1
# --------------------------------------------------------------------------

POLE = -0.1


def _ex2_residuals(x):
    x1, x2 = x
    return np.array([x1, 10.0 * x1 / (x1 + 0.1) + 2.0 * x2 * x2])


def _ex2_qjac(x, q, zero_threshold):
    x1, x2 = x
    q1, q2 = q
    if _classical(q1, x1, zero_threshold):
        d21 = 1.0 / (x1 + 0.1) ** 2
    else:
        d21 = 1.0 / ((x1 + 0.1) * (q1 * x1 + 0.1))
    # (1 + q) x2 is exact for every q, including q = 1 and x2 = 0.
    d22 = 2.0 * (1.0 + q2) * x2
    return np.array([[1.0, 0.0], [d21, d22]])


def _ex2_guard(x, q, zero_threshold):
    x1 = x[0]
    if abs(x1 - POLE) <= zero_threshold:
        return False
    if q is not None and abs(q[0] * x1 - POLE) <= zero_threshold:
        return False
    return True


def builtin_example2() -> ResidualProblem:
    return ResidualProblem(
        name="example2",
        n=2,
        m=2,
        residuals=_ex2_residuals,
        analytic_q_jacobian=_ex2_qjac,
        domain_guard=_ex2_guard,
        x0=(-1.0, 1.0),
        description="f = [x1, 10 x1/(x1 + 0.1) + 2 x2^2] (Powell 1970)",
    )


# --------------------------------------------------------------------------
# Example 3: overdetermined 3x2 problem with a large residual at the optimum
# --------------------------------------------------------------------------

def _ex3_residuals(x):
    x1, x2 = x
    return np.array([x1 - 0.4, x2 - 8.0, x1 * x1 + x2 * x2 - 1.0])


def _ex3_qjac(x, q, zero_threshold):
    x1, x2 = x
    q1, q2 = q
    return np.array([[1.0, 0.0], [0.0, 1.0], [(1.0 + q1) * x1, (1.0 + q2) * x2]])


def builtin_example3() -> ResidualProblem:
    return ResidualProblem(
        name="example3",
        n=2,
        m=3,
        residuals=_ex3_residuals,
        analytic_q_jacobian=_ex3_qjac,
        x0=(0.0, 0.0),
        description="f = [x1 - 0.4, x2 - 8, x1^2 + x2^2 - 1]",
    )


REGISTRY: dict[str, Callable[[], ResidualProblem]] = {
    "example1": builtin_example1,
    "example2": builtin_example2,
    "example3": builtin_example3,
}


def get_problem(name: str) -> ResidualProblem:
    try:
        return REGISTRY[name]()
    except KeyError:
        known = ", ".join(sorted(REGISTRY))
        raise KeyError(f"unknown problem {name!r}; known problems: {known}") from None


def list_problems() -> list[str]:
    return sorted(REGISTRY)
