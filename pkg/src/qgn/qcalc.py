"""Jackson q-calculus: q-analogs, q-differences, q-partials, q-Jacobians.

Every derivative-like operator accepts ``q == 1`` as a sentinel for the
classical derivative, and falls back to it when the dilated coordinate is
(numerically) zero. When no analytic derivative is supplied the classical
value comes from a central finite difference.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import NumericalFailure, QDomainError

ZERO_THRESHOLD = 1e-12
FD_STEP = 1e-8

ScalarFn = Callable[[float], float]
ScalarField = Callable[[np.ndarray], float]
VectorField = Callable[[np.ndarray], np.ndarray]


def _check_q(q: float) -> float:
    q = float(q)
    if not (0.0 < q <= 1.0):
        raise QDomainError(f"dilation parameter must satisfy 0 < q <= 1, got {q!r}")
    return q


@dataclass(frozen=True)
class DilationParams:
    """Per-coordinate dilation parameters q_i, each in (0, 1].

    ``q_i == 1`` means coordinate i is differentiated classically.
    """

    values: tuple[float, ...]

    def __post_init__(self):
        vals = tuple(_check_q(v) for v in self.values)
        if not vals:
            raise QDomainError("DilationParams needs at least one value")
        object.__setattr__(self, "values", vals)

    @classmethod
    def scalar(cls, q: float, n: int) -> "DilationParams":
        if n < 1:
            raise QDomainError(f"dimension must be >= 1, got {n}")
        return cls((float(q),) * n)

    @classmethod
    def coerce(cls, q, n: int) -> "DilationParams":
        """Accept a DilationParams, a scalar, or a length-n sequence."""
        if isinstance(q, DilationParams):
            params = q
        elif np.ndim(q) == 0:
            return cls.scalar(float(q), n)
        else:
            params = cls(tuple(float(v) for v in q))
        if len(params) != n:
            raise QDomainError(f"expected {n} dilation parameters, got {len(params)}")
        return params

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, i: int) -> float:
        return self.values[i]

    @property
    def is_classical(self) -> bool:
        return all(v == 1.0 for v in self.values)


# --------------------------------------------------------------------------
# q-analogs
# --------------------------------------------------------------------------

def q_number(n: int, q: float) -> float:
    """The q-analog [n] = (q**n - 1) / (q - 1); returns n exactly at q = 1."""
    q = _check_q(q)
    if n < 0:
        raise QDomainError(f"n must be nonnegative, got {n}")
    if q == 1.0:
        return float(n)
    return (q**n - 1.0) / (q - 1.0)


def q_factorial(n: int, q: float) -> float:
    q = _check_q(q)
    if n < 0:
        raise QDomainError(f"n must be nonnegative, got {n}")
    out = 1.0
    for k in range(1, n + 1):
        out *= q_number(k, q)
    return out


def q_binomial(n: int, j: int, q: float) -> float:
    if j < 0 or j > n:
        raise QDomainError(f"q-binomial needs 0 <= j <= n, got n={n}, j={j}")
    return q_factorial(n, q) / (q_factorial(j, q) * q_factorial(n - j, q))


def q_poly_power(x: float, c: float, j: int, q: float) -> float:
    """(x - c)_q^j = prod_{k<j} (x - q**k c); the empty product is 1."""
    if j < 0:
        raise QDomainError(f"degree must be nonnegative, got {j}")
    out = 1.0
    for k in range(j):
        out *= x - q**k * c
    return out


# --------------------------------------------------------------------------
# one-dimensional operators
# --------------------------------------------------------------------------

def _finite(value, what: str):
    if not np.all(np.isfinite(value)):
        raise NumericalFailure(f"non-finite value while evaluating {what}")
    return value


def central_difference(f: ScalarFn, x: float) -> float:
    h = max(FD_STEP, FD_STEP * abs(x))
    return (f(x + h) - f(x - h)) / (2.0 * h)


def q_differential(f: ScalarFn, x: float, q: float) -> float:
    """d_q f(x) = f(qx) - f(x)."""
    return f(q * x) - f(x)


def q_derivative(
    f: ScalarFn,
    x: float,
    q: float,
    df: Optional[ScalarFn] = None,
    zero_threshold: float = ZERO_THRESHOLD,
) -> float:
    """Jackson derivative (f(x) - f(qx)) / ((1 - q) x).

    At ``q == 1`` or ``|x| <= zero_threshold`` the classical derivative is
    returned instead: ``df(x)`` when given, else a central difference.
    """
    q = _check_q(q)
    x = float(x)
    if q == 1.0 or abs(x) <= zero_threshold:
        value = df(x) if df is not None else central_difference(f, x)
    else:
        value = (f(x) - f(q * x)) / ((1.0 - q) * x)
    return float(_finite(value, "q-derivative"))


# --------------------------------------------------------------------------
# multivariate operators
# --------------------------------------------------------------------------

def dilate(x: np.ndarray, i: int, q: float) -> np.ndarray:
    """The substitution x_i -> q x_i, all other coordinates untouched."""
    out = np.array(x, dtype=float, copy=True)
    out[i] *= q
    return out


def _column(fn, x: np.ndarray, fx, i: int, q: float, zero_threshold: float):
    # fn may be scalar- or vector-valued; the arithmetic is the same.
    xi = x[i]
    if q == 1.0 or abs(xi) <= zero_threshold:
        h = max(FD_STEP, FD_STEP * abs(xi))
        xp = np.array(x, copy=True)
        xm = np.array(x, copy=True)
        xp[i] += h
        xm[i] -= h
        return (np.asarray(fn(xp), dtype=float) - np.asarray(fn(xm), dtype=float)) / (2.0 * h)
    return (fx - np.asarray(fn(dilate(x, i, q)), dtype=float)) / ((1.0 - q) * xi)


def q_partial(
    f: ScalarField,
    x: Sequence[float],
    i: int,
    q: float,
    zero_threshold: float = ZERO_THRESHOLD,
) -> float:
    x = np.asarray(x, dtype=float)
    if not 0 <= i < x.size:
        raise QDomainError(f"coordinate index {i} out of range for n={x.size}")
    q = _check_q(q)
    fx = float(f(x))
    value = float(_column(f, x, fx, i, q, zero_threshold))
    return float(_finite(value, f"q-partial along x{i + 1}"))


def q_gradient(
    f: ScalarField,
    x: Sequence[float],
    q,
    zero_threshold: float = ZERO_THRESHOLD,
) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    params = DilationParams.coerce(q, x.size)
    return np.array(
        [q_partial(f, x, i, params[i], zero_threshold) for i in range(x.size)]
    )


def q_jacobian(
    f: VectorField,
    x: Sequence[float],
    q,
    zero_threshold: float = ZERO_THRESHOLD,
) -> np.ndarray:
    """m x n matrix whose (i, j) entry is the q-partial of f_i along x_j."""
    x = np.asarray(x, dtype=float)
    params = DilationParams.coerce(q, x.size)
    fx = np.atleast_1d(np.asarray(f(x), dtype=float))
    _finite(fx, "residuals")
    J = np.empty((fx.size, x.size))
    for j in range(x.size):
        J[:, j] = _column(f, x, fx, j, params[j], zero_threshold)
    return _finite(J, "q-Jacobian")


# --------------------------------------------------------------------------
# polynomials and the truncated q-Taylor expansion
# --------------------------------------------------------------------------

def poly_eval(coeffs: Sequence[float], x: float) -> float:
    """Horner evaluation; coefficients in ascending order of degree."""
    out = 0.0
    for a in reversed(coeffs):
        out = out * x + a
    return out


def poly_q_derivative(coeffs: Sequence[float], q: float) -> list[float]:
    """Exact D_q on ascending coefficients: a_k x^k -> a_k [k] x^(k-1)."""
    return [coeffs[k] * q_number(k, q) for k in range(1, len(coeffs))]


def q_taylor_eval(
    coeffs: Sequence[float], c: float, q: float, x: float, degree: int
) -> float:
    """Sum_{j<=degree} (D_q^j f)(c) (x - c)_q^j / [j]! for polynomial f."""
    if degree < 0:
        raise QDomainError(f"degree must be nonnegative, got {degree}")
    q = _check_q(q)
    current = list(coeffs)
    total = 0.0
    for j in range(degree + 1):
        if not current:
            break
        total += poly_eval(current, c) * q_poly_power(x, c, j, q) / q_factorial(j, q)
        current = poly_q_derivative(current, q)
    return total


__all__ = [
    "DilationParams",
    "ZERO_THRESHOLD",
    "central_difference",
    "dilate",
    "poly_eval",
    "poly_q_derivative",
    "q_binomial",
    "q_derivative",
    "q_differential",
    "q_factorial",
    "q_gradient",
    "q_jacobian",
    "q_number",
    "q_partial",
    "q_poly_power",
    "q_taylor_eval",
]
