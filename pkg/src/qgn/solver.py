"""Iterative drivers: q-Gauss-Newton, classical Gauss-Newton, Nelder-Mead."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import InvalidPointError, NumericalFailure, QDomainError, SingularSystemError
from .linalg import solve_gn_step
from .model import ResidualProblem
from .qcalc import ZERO_THRESHOLD, DilationParams


class Status(str, enum.Enum):
    CONVERGED = "Converged"
    MAX_ITERATIONS = "MaxIterationsReached"
    SINGULAR = "SingularSystem"
    NUMERICAL_FAILURE = "NumericalFailure"
    INVALID_POINT = "InvalidPoint"


@dataclass(frozen=True)
class SolveConfig:
    stop_tol: float = 1e-6
    max_iter: int = 100
    alpha: float = 1.0
    jacobian_mode: str = "analytic"  # "analytic" (if available) or "numeric"
    zero_threshold: float = ZERO_THRESHOLD
    stopping_norm: str = "step"  # "step" or "sse"

    def __post_init__(self):
        if not self.stop_tol > 0:
            raise QDomainError(f"stop_tol must be positive, got {self.stop_tol}")
        if self.max_iter < 1:
            raise QDomainError(f"max_iter must be >= 1, got {self.max_iter}")
        if not 0 < self.alpha <= 1:
            raise QDomainError(f"alpha must lie in (0, 1], got {self.alpha}")
        if self.jacobian_mode not in ("analytic", "numeric"):
            raise QDomainError(f"unknown jacobian_mode {self.jacobian_mode!r}")
        if self.stopping_norm not in ("step", "sse"):
            raise QDomainError(f"unknown stopping_norm {self.stopping_norm!r}")
        if self.zero_threshold < 0:
            raise QDomainError("zero_threshold must be nonnegative")


@dataclass(frozen=True)
class IterationRecord:
    k: int
    x: np.ndarray
    residuals: np.ndarray
    sse: float
    step_norm: float


@dataclass
class SolveResult:
    status: Status
    final_x: np.ndarray
    final_sse: float
    final_norm: float
    trace: list[IterationRecord] = field(default_factory=list)
    message: str = ""

    @property
    def iterations(self) -> int:
        return len(self.trace)

    @property
    def converged(self) -> bool:
        return self.status is Status.CONVERGED

    @property
    def final_residuals(self) -> Optional[np.ndarray]:
        return self.trace[-1].residuals if self.trace else None


def q_gauss_newton(
    p: ResidualProblem,
    x0,
    q,
    cfg: SolveConfig = SolveConfig(),
    on_step: Optional[Callable[[np.ndarray, np.ndarray, np.ndarray], None]] = None,
) -> SolveResult:
    """Minimise ½||f(x)||² with steps h solving min ||f + J_q h||.

    Each iteration records the updated iterate, its residuals, its SSE and
    ||h||. Failures end the run with a non-converged status but keep the
    trace gathered so far. ``on_step(J, f, h)`` is called once per accepted
    step (used by tests to audit descent directions).
    """
    params = DilationParams.coerce(q, p.n)
    use_analytic = cfg.jacobian_mode == "analytic"
    trace: list[IterationRecord] = []

    def finish(status, x, sse, norm, message=""):
        return SolveResult(status, np.array(x, copy=True), sse, norm, trace, message)

    x = np.array(x0, dtype=float).reshape(-1)
    try:
        x = p.check_point(x, params, cfg.zero_threshold)
        r = p.evaluate(x)
    except InvalidPointError as exc:
        return finish(Status.INVALID_POINT, x, float("nan"), float("nan"), str(exc))
    except NumericalFailure as exc:
        return finish(Status.NUMERICAL_FAILURE, x, float("nan"), float("nan"), str(exc))
    sse = 0.5 * float(r @ r)
    norm = float("inf")

    for k in range(1, cfg.max_iter + 1):
        try:
            J = p.jacobian(x, params, cfg.zero_threshold, use_analytic)
            h = solve_gn_step(J, r)
        except SingularSystemError as exc:
            return finish(Status.SINGULAR, x, sse, norm, str(exc))
        except NumericalFailure as exc:
            return finish(Status.NUMERICAL_FAILURE, x, sse, norm, str(exc))
        if on_step is not None:
            on_step(J, r, h)

        x_new = x + cfg.alpha * h
        try:
            x_new = p.check_point(x_new, params, cfg.zero_threshold)
            r = p.evaluate(x_new)
        except InvalidPointError as exc:
            return finish(Status.INVALID_POINT, x, sse, norm, str(exc))
        except NumericalFailure as exc:
            return finish(Status.NUMERICAL_FAILURE, x, sse, norm, str(exc))

        x = x_new
        sse = 0.5 * float(r @ r)
        step_norm = float(np.linalg.norm(h))
        trace.append(IterationRecord(k, x.copy(), r.copy(), sse, step_norm))
        norm = step_norm if cfg.stopping_norm == "step" else sse
        if norm <= cfg.stop_tol:
            return finish(Status.CONVERGED, x, sse, norm)

    return finish(Status.MAX_ITERATIONS, x, sse, norm)


def gauss_newton(p: ResidualProblem, x0, cfg: SolveConfig = SolveConfig(), **kwargs) -> SolveResult:
    """Classical Gauss-Newton: the q-driver with every q_i = 1."""
    return q_gauss_newton(p, x0, DilationParams.scalar(1.0, p.n), cfg, **kwargs)


# --------------------------------------------------------------------------
# Nelder-Mead
# --------------------------------------------------------------------------

REFLECT, EXPAND, CONTRACT, SHRINK = 1.0, 2.0, 0.5, 0.5


def nelder_mead(
    f: Callable[[np.ndarray], float],
    x0,
    cfg: SolveConfig = SolveConfig(stop_tol=1e-4, max_iter=200),
) -> SolveResult:
    """Derivative-free simplex minimisation of a scalar function.

    Stops once both the simplex diameter (max distance to the best vertex)
    and the spread of function values fall to ``cfg.stop_tol``. Trace
    records hold the best vertex, ``residuals == [f(best)]`` and
    ``sse == ½ f(best)²``; ``step_norm`` is how far the best vertex moved.
    """
    x0 = np.array(x0, dtype=float).reshape(-1)
    n = x0.size

    def fval(x):
        v = float(f(x))
        if not np.isfinite(v):
            raise NumericalFailure(f"non-finite objective at {x.tolist()}")
        return v

    simplex = [x0.copy()]
    for i in range(n):
        v = x0.copy()
        v[i] = v[i] * 1.05 if v[i] != 0.0 else 0.00025
        simplex.append(v)
    simplex = np.array(simplex)
    trace: list[IterationRecord] = []

    def record(k, best, fbest, moved):
        r = np.array([fbest])
        trace.append(IterationRecord(k, best.copy(), r, 0.5 * fbest * fbest, moved))

    def size(simplex, fs):
        diam = float(np.max(np.linalg.norm(simplex[1:] - simplex[0], axis=1)))
        spread = float(np.max(np.abs(fs[1:] - fs[0])))
        return max(diam, spread)

    try:
        fs = np.array([fval(v) for v in simplex])
    except NumericalFailure as exc:
        return SolveResult(Status.NUMERICAL_FAILURE, x0, float("nan"), float("nan"), trace, str(exc))

    order = np.argsort(fs, kind="stable")
    simplex, fs = simplex[order], fs[order]
    norm = size(simplex, fs)

    for k in range(1, cfg.max_iter + 1):
        if norm <= cfg.stop_tol:
            break
        prev_best = simplex[0].copy()
        try:
            centroid = simplex[:-1].mean(axis=0)
            worst = simplex[-1]
            xr = centroid + REFLECT * (centroid - worst)
            fr = fval(xr)
            if fr < fs[0]:
                xe = centroid + EXPAND * (xr - centroid)
                fe = fval(xe)
                if fe < fr:
                    simplex[-1], fs[-1] = xe, fe
                else:
                    simplex[-1], fs[-1] = xr, fr
            elif fr < fs[-2]:
                simplex[-1], fs[-1] = xr, fr
            else:
                if fr < fs[-1]:
                    xc = centroid + CONTRACT * (xr - centroid)
                    fc = fval(xc)
                    accept = fc <= fr
                else:
                    xc = centroid + CONTRACT * (worst - centroid)
                    fc = fval(xc)
                    accept = fc < fs[-1]
                if accept:
                    simplex[-1], fs[-1] = xc, fc
                else:
                    for i in range(1, n + 1):
                        simplex[i] = simplex[0] + SHRINK * (simplex[i] - simplex[0])
                        fs[i] = fval(simplex[i])
        except NumericalFailure as exc:
            best = simplex[0]
            return SolveResult(Status.NUMERICAL_FAILURE, best.copy(), 0.5 * fs[0] ** 2, norm, trace, str(exc))

        order = np.argsort(fs, kind="stable")
        simplex, fs = simplex[order], fs[order]
        norm = size(simplex, fs)
        record(k, simplex[0], fs[0], float(np.linalg.norm(simplex[0] - prev_best)))

    status = Status.CONVERGED if norm <= cfg.stop_tol else Status.MAX_ITERATIONS
    return SolveResult(status, simplex[0].copy(), 0.5 * fs[0] ** 2, norm, trace)
