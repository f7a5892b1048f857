"""Angular integrals, normalisations and an adaptive quadrature engine.

The closed forms here are checked against :func:`quad_adaptive`, which knows
nothing about them: it is a globally adaptive Gauss-Legendre scheme (10-point
rule for the error estimate, 21-point rule for the value) with bisection of the
worst panel.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

import numpy as np

from .amplitude import pr_process1
from .errors import ConvergenceError, DomainError, InputValidationError
from .kinematics import check_beta

HALF_PI = 0.5 * math.pi
SERIES_THRESHOLD = 1e-6

_LOW = np.polynomial.legendre.leggauss(10)
_HIGH = np.polynomial.legendre.leggauss(21)


@dataclass(frozen=True)
class QuadratureSpec:
    abs_tol: float = 1e-12
    rel_tol: float = 1e-10
    max_refinements: int = 4000

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise InputValidationError("quadrature tolerances must be positive")
        if self.max_refinements < 1:
            raise InputValidationError("max_refinements must be >= 1")


DEFAULT_QUAD = QuadratureSpec()


def _apply(f, x, vectorized):
    if vectorized:
        return np.asarray(f(x), dtype=float)
    return np.array([f(float(xi)) for xi in x], dtype=float)


def _panel(f, a, b, vectorized):
    half, mid = 0.5 * (b - a), 0.5 * (b + a)
    x_lo, w_lo = _LOW
    x_hi, w_hi = _HIGH
    y_lo = _apply(f, mid + half * x_lo, vectorized)
    y_hi = _apply(f, mid + half * x_hi, vectorized)
    i_lo = half * np.tensordot(w_lo, y_lo, axes=(0, 0))
    i_hi = half * np.tensordot(w_hi, y_hi, axes=(0, 0))
    return i_hi, float(np.max(np.abs(i_hi - i_lo)))


def quad_adaptive(f, a: float, b: float, spec: QuadratureSpec | None = None, *, vectorized: bool = False):
    """Integrate ``f`` over ``[a, b]``.

    Parameters
    ----------
    f : callable
        Scalar function of one real.  With ``vectorized=True`` it receives a
        1-d array of nodes and returns an array whose leading axis matches the
        nodes; trailing axes are integrated component-wise.
    spec : QuadratureSpec, optional
        Stop when the summed error estimate is below
        ``max(abs_tol, rel_tol * max|I|)``.

    Raises
    ------
    ConvergenceError
        After ``spec.max_refinements`` bisections, carrying the estimate and
        its error bound.
    """
    spec = spec or DEFAULT_QUAD
    a, b = float(a), float(b)
    if a == b:
        i0, _ = _panel(f, a, a + 1.0, vectorized)
        return np.zeros_like(i0) if np.ndim(i0) else 0.0
    if a > b:
        return -quad_adaptive(f, b, a, spec, vectorized=vectorized)

    i0, e0 = _panel(f, a, b, vectorized)
    heap = [(-e0, a, b, 0)]
    values = {0: i0}
    total = i0
    err = e0
    next_id = 1
    for _ in range(spec.max_refinements):
        if err <= max(spec.abs_tol, spec.rel_tol * float(np.max(np.abs(total)))):
            return float(total) if np.ndim(total) == 0 else total
        neg_e, lo, hi, pid = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        il, el = _panel(f, lo, mid, vectorized)
        ir, er = _panel(f, mid, hi, vectorized)
        total = total - values.pop(pid) + il + ir
        err = err + neg_e + el + er
        values[next_id] = il
        values[next_id + 1] = ir
        heapq.heappush(heap, (-el, lo, mid, next_id))
        heapq.heappush(heap, (-er, mid, hi, next_id + 1))
        next_id += 2
    # Recompute from scratch to shed accumulated round-off in the running sums.
    total = sum(values[i] for i in sorted(values))
    err = sum(-e for e, *_ in heap)
    if err <= max(spec.abs_tol, spec.rel_tol * float(np.max(np.abs(total)))):
        return float(total) if np.ndim(total) == 0 else total
    raise ConvergenceError(
        f"quadrature did not converge after {spec.max_refinements} refinements",
        estimate=total,
        error=err,
    )


@dataclass(frozen=True)
class DeltaWindow:
    """Half-width ``delta`` of the polar window ``[pi/2 - delta, pi/2 + delta]``."""

    delta: float

    def __post_init__(self):
        if not (0.0 < self.delta <= HALF_PI):
            raise InputValidationError(f"delta must satisfy 0 < delta <= pi/2, got {self.delta!r}")

    @property
    def sin(self) -> float:
        return 1.0 if self.delta == HALF_PI else math.sin(self.delta)


def _window(w) -> DeltaWindow:
    return w if isinstance(w, DeltaWindow) else DeltaWindow(float(w))


def log_ratio_over_beta(beta: float, s: float) -> float:
    """``(1/beta) ln((1 + beta s)/(1 - beta s))``, with its series below ``beta s = 1e-6``."""
    x = beta * s
    if x >= 1.0:
        raise DomainError(f"beta * sin(delta) = {x!r} >= 1: integral diverges")
    if x < SERIES_THRESHOLD:
        return 2.0 * s * (1.0 + x * x / 3.0)
    return 2.0 * math.atanh(x) / beta


def int_theta_1(beta: float, w) -> float:
    """``int sin t / (1 - beta^2 cos^2 t) dt`` over the window."""
    return log_ratio_over_beta(check_beta(beta), _window(w).sin)


def int_theta_2(beta: float, w) -> float:
    """``int sin t / (1 - beta^2 cos^2 t)^2 dt`` over the window."""
    beta = check_beta(beta)
    s = _window(w).sin
    lr = log_ratio_over_beta(beta, s)
    return s / (1.0 - beta * beta * s * s) + 0.5 * lr


def f_delta(beta: float, chi1: float, chi2: float, w) -> float:
    """Window integral of ``sin(theta) * pr_process1`` in closed form."""
    beta = check_beta(beta)
    w = _window(w)
    s = w.sin
    u = 1.0 - beta * beta
    c1, c2 = math.cos(chi1), math.cos(chi2)
    x = math.cos(chi1 - chi2) - 2.0 * c1 * c2
    lr = log_ratio_over_beta(beta, s)
    return (
        (1.0 - 4.0 * u * c1 * c2 * x) * lr
        - 4.0 * u * u * c1 * c1 * c2 * c2 * (s / (1.0 - beta * beta * s * s) + 0.5 * lr)
        - 2.0 * s * x * x
    )


def f_delta_quadrature(beta: float, chi1: float, chi2: float, w, spec: QuadratureSpec | None = None) -> float:
    """Same window integral by direct quadrature of ``pr_process1``."""
    w = _window(w)
    return quad_adaptive(
        lambda t: np.sin(t) * pr_process1(beta, t, chi1, chi2),
        HALF_PI - w.delta,
        HALF_PI + w.delta,
        spec,
        vectorized=True,
    )


def _quadruple(chi1, chi2):
    return (
        (chi1, chi2),
        (chi1 + HALF_PI, chi2),
        (chi1, chi2 + HALF_PI),
        (chi1 + HALF_PI, chi2 + HALF_PI),
    )


def n_delta(beta: float, w) -> float:
    """Normalisation: ``f_delta`` summed over the four outcome pairs, in closed form.

    The coefficient of the log term is ``4 + 4u - 2u^2`` with ``u = 1 - beta^2``.
    """
    beta = check_beta(beta)
    w = _window(w)
    s = w.sin
    u = 1.0 - beta * beta
    lr = log_ratio_over_beta(beta, s)
    return (4.0 + 4.0 * u - 2.0 * u * u) * lr - 4.0 * u * u * s / (1.0 - beta * beta * s * s) - 4.0 * s


def n_delta_sum(beta: float, w, chi1: float = 0.0, chi2: float = 0.0) -> float:
    return sum(f_delta(beta, a, b, w) for a, b in _quadruple(chi1, chi2))


def marginal_sums_delta(beta: float, chi1: float, chi2: float, w) -> tuple[float, float]:
    """Partial sums with one photon unmeasured.

    Returns ``F(c1, c2) + F(c1, c2 + pi/2)`` (depends on ``c1`` only) and
    ``F(c1, c2) + F(c1 + pi/2, c2)`` (depends on ``c2`` only).
    """
    beta = check_beta(beta)
    w = _window(w)
    s = w.sin
    u = 1.0 - beta * beta
    lr = log_ratio_over_beta(beta, s)
    tail = s / (1.0 - beta * beta * s * s)

    def one(chi):
        c2 = math.cos(chi) ** 2
        return (2.0 + 2.0 * (1.0 - beta**4) * c2) * lr - 4.0 * u * u * c2 * tail - 2.0 * s

    return one(chi1), one(chi2)


def phi_integrals(chi1: float, chi2: float) -> tuple[float, float]:
    """``int_0^{2pi} cos(p+c1)cos(p+c2) dp`` and ``int_0^{2pi} cos^2(p+c1)cos^2(p+c2) dp``."""
    c = math.cos(chi1 - chi2)
    return math.pi * c, 0.25 * math.pi * (1.0 + 2.0 * c * c)


def _full_log(beta: float) -> float:
    # (1/beta) ln((1+beta)/(1-beta)); infinite at beta = 1.
    if beta == 1.0:
        return math.inf
    return log_ratio_over_beta(beta, 1.0)


def a_of_beta(beta: float) -> float:
    """Angle-independent part of the sphere-averaged rate; ``+inf`` at ``beta = 1``."""
    beta = check_beta(beta)
    u = 1.0 - beta * beta
    return (4.0 * (2.0 - beta * beta) - u * u) / 4.0 * _full_log(beta) - 1.5 + 0.5 * beta * beta


def b_of_beta(beta: float) -> float:
    """Coefficient of ``cos^2(chi1 - chi2)`` in the sphere-averaged rate; 0 at ``beta = 1``."""
    beta = check_beta(beta)
    if beta == 1.0:
        return 0.0
    u = 1.0 - beta * beta
    return -u * (1.0 + 0.5 * u * _full_log(beta))


def n_of_beta(beta: float) -> float:
    """Sphere-averaged normalisation, equal to ``2 (2A + B)``."""
    beta = check_beta(beta)
    u = 1.0 - beta * beta
    return (4.0 * (2.0 - beta * beta) - 2.0 * u * u) * _full_log(beta) - 8.0 + 4.0 * beta * beta
