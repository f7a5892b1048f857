"""Numerical oracle suites: closed forms against independent computations.

Each suite returns a list of :class:`OracleCheck`.  Parameter points are fixed
(deterministic grids or a seeded generator), so reruns give identical reports.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .amplitude import evaluate_levels, pr_process2, relative_spread
from .closed_form import joint_p1, joint_p1_via_delta_limit, joint_p2
from .integrals import (
    HALF_PI,
    QuadratureSpec,
    a_of_beta,
    b_of_beta,
    f_delta,
    f_delta_quadrature,
    int_theta_1,
    int_theta_2,
    marginal_sums_delta,
    n_delta,
    n_delta_sum,
    n_of_beta,
    phi_integrals,
    quad_adaptive,
)

LEVELS = ("integrals", "delta-limit", "amplitude", "process2-angular")
ORACLE_SEED = 20031755
TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class OracleCheck:
    name: str
    max_deviation: float
    tolerance: float
    points: int

    @property
    def passed(self) -> bool:
        return self.max_deviation < self.tolerance


def _rel(a: float, b: float) -> float:
    return abs(a - b) / max(abs(b), 1e-300)


def _check(name, deviations, tol):
    deviations = list(deviations)
    return OracleCheck(name, float(max(deviations)), tol, len(deviations))


def integrals_suite(spec: QuadratureSpec | None = None, tol: float = 1e-10) -> list[OracleCheck]:
    spec = spec or QuadratureSpec(abs_tol=1e-15, rel_tol=1e-13)
    betas = (0.05, 0.3, 0.5, 0.8, 0.99)
    deltas = (0.01, 0.1, 0.4, 0.9, 1.4)
    window = [(b, d) for b in betas for d in deltas]

    def theta_quad(beta, lo, hi, power):
        return quad_adaptive(
            lambda t: np.sin(t) / (1.0 - beta * beta * np.cos(t) ** 2) ** power, lo, hi, spec, vectorized=True
        )

    checks = [
        _check(
            "theta window integral, power 1",
            (_rel(int_theta_1(b, d), theta_quad(b, HALF_PI - d, HALF_PI + d, 1)) for b, d in window),
            tol,
        ),
        _check(
            "theta window integral, power 2",
            (_rel(int_theta_2(b, d), theta_quad(b, HALF_PI - d, HALF_PI + d, 2)) for b, d in window),
            tol,
        ),
    ]
    full_betas = np.linspace(0.02, 0.98, 25)
    checks.append(
        _check("theta full-range integral, power 1", (_rel(int_theta_1(b, HALF_PI), theta_quad(b, 0.0, math.pi, 1)) for b in full_betas), tol)
    )
    checks.append(
        _check("theta full-range integral, power 2", (_rel(int_theta_2(b, HALF_PI), theta_quad(b, 0.0, math.pi, 2)) for b in full_betas), tol)
    )

    chis = [(0.1 * i, 0.37 * j) for i in range(10) for j in range(5)]
    phi1, phi2 = [], []
    for c1, c2 in chis:
        lin, quart = phi_integrals(c1, c2)
        q1 = quad_adaptive(lambda p: np.cos(p + c1) * np.cos(p + c2), 0.0, TWO_PI, spec, vectorized=True)
        q2 = quad_adaptive(lambda p: np.cos(p + c1) ** 2 * np.cos(p + c2) ** 2, 0.0, TWO_PI, spec, vectorized=True)
        # The linear integral passes through zero; measure it against its natural scale pi.
        phi1.append(abs(lin - q1) / math.pi)
        phi2.append(_rel(quart, q2))
    checks.append(_check("phi integral cos*cos (scaled by pi)", phi1, tol))
    checks.append(_check("phi integral cos^2*cos^2", phi2, tol))

    window_pts = [(0.3, 0.2, 1.1, 0.15), (0.7, 0.4, 2.0, 0.3), (0.95, 1.0, 0.1, 0.05), (0.1, 0.0, 0.0, 0.5)]
    checks.append(
        _check(
            "window integral of process-1 rate vs quadrature",
            (_rel(f_delta(b, c1, c2, d), f_delta_quadrature(b, c1, c2, d, spec)) for b, c1, c2, d in window_pts),
            1e-9,
        )
    )
    checks.append(
        _check(
            "window normalisation closed form vs four-term sum",
            (_rel(n_delta(b, d), n_delta_sum(b, d, 0.3, 1.2)) for b, d in window),
            1e-11,
        )
    )
    marg = []
    for b, d in window:
        m1, m2 = marginal_sums_delta(b, 0.4, 1.3, d)
        s1 = f_delta(b, 0.4, 1.3, d) + f_delta(b, 0.4, 1.3 + HALF_PI, d)
        s2 = f_delta(b, 0.4, 1.3, d) + f_delta(b, 0.4 + HALF_PI, 1.3, d)
        marg.extend([_rel(m1, s1), _rel(m2, s2)])
    checks.append(_check("single-photon window sums vs explicit sums", marg, 1e-11))
    nb = np.linspace(0.01, 0.99, 99)
    checks.append(
        _check("N(beta) = 2[2A(beta) + B(beta)]", (_rel(n_of_beta(b), 2.0 * (2.0 * a_of_beta(b) + b_of_beta(b))) for b in nb), 1e-12)
    )
    return checks


def delta_limit_suite(tol: float = 1e-7) -> list[OracleCheck]:
    betas = np.linspace(0.0, 0.99, 5)
    chis = np.linspace(0.0, math.pi, 5, endpoint=False)
    devs = []
    for b in betas:
        for c1 in chis:
            for c2 in chis:
                est = joint_p1_via_delta_limit(float(b), float(c1), float(c2)).estimate
                devs.append(abs(est - joint_p1(float(b), float(c1), float(c2))))
    return [_check("window-ratio limit vs closed-form process-1 joint", devs, tol)]


def amplitude_suite(n: int = 1000, tol: float = 1e-11, seed: int = ORACLE_SEED) -> list[OracleCheck]:
    rng = np.random.default_rng(seed)
    checks = []
    for process in (1, 2):
        spreads = []
        for _ in range(n):
            beta = rng.uniform(0.0, 0.999)
            theta = rng.uniform(0.0, math.pi)
            phi = rng.uniform(0.0, TWO_PI)
            c1, c2 = rng.uniform(0.0, math.pi, 2)
            spreads.append(relative_spread(evaluate_levels(process, beta, theta, phi, c1, c2)))
        checks.append(_check(f"process {process}: covariant / c.m. / specialised spread", spreads, tol))
    return checks


def sphere_integrals(beta: float, chi_pairs, spec: QuadratureSpec | None = None) -> np.ndarray:
    """Numerical ``int dOmega pr_process2`` over the fermion direction for each ``(chi1, chi2)``."""
    spec = spec or QuadratureSpec(abs_tol=1e-13, rel_tol=1e-13)
    pairs = np.asarray(chi_pairs, dtype=float).reshape(-1, 2)
    c1, c2 = pairs[:, 0], pairs[:, 1]

    def over_phi(theta):
        def integrand(phi):
            return pr_process2(beta, theta[None, :, None], phi[:, None, None], c1[None, None, :], c2[None, None, :])

        return np.sin(theta)[:, None] * quad_adaptive(integrand, 0.0, TWO_PI, spec, vectorized=True)

    return quad_adaptive(over_phi, 0.0, math.pi, spec, vectorized=True)


def fit_sphere_form(beta: float, chi1: float = 0.3, n: int = 12, spec: QuadratureSpec | None = None):
    """Least-squares fit of sphere integrals to ``c0 + c1 cos^2(chi1 - chi2)``.

    Returns ``(c0, c1, max_residual)``.
    """
    deltas = np.linspace(0.0, math.pi, n, endpoint=False)
    pairs = np.stack([np.full(n, chi1), chi1 + deltas], axis=1)
    values = sphere_integrals(beta, pairs, spec)
    design = np.stack([np.ones(n), np.cos(deltas) ** 2], axis=1)
    coef, *_ = np.linalg.lstsq(design, values, rcond=None)
    residual = float(np.max(np.abs(design @ coef - values)))
    return float(coef[0]), float(coef[1]), residual


def sphere_joint_p2(beta: float, chi1: float, chi2: float, spec: QuadratureSpec | None = None) -> float:
    """Process-2 joint probability normalised over the four outcome pairs, all by quadrature."""
    pairs = [
        (chi1, chi2),
        (chi1, chi2 + HALF_PI),
        (chi1 + HALF_PI, chi2),
        (chi1 + HALF_PI, chi2 + HALF_PI),
    ]
    values = sphere_integrals(beta, pairs, spec)
    return float(values[0] / values.sum())


def process2_angular_suite(points: int = 25, seed: int = ORACLE_SEED) -> list[OracleCheck]:
    rng = np.random.default_rng(seed + 2)
    fits = [fit_sphere_form(b) for b in (0.1, 0.5, 0.9)]
    coef_devs = []
    for b, (c0, c1, _) in zip((0.1, 0.5, 0.9), fits):
        # The sphere integral is 2*pi times A + B cos^2.
        coef_devs.extend([_rel(c0 / TWO_PI, a_of_beta(b)), _rel(c1 / TWO_PI, b_of_beta(b))])
    prob_devs = []
    for _ in range(points):
        b = rng.uniform(0.01, 0.95)
        c1, c2 = rng.uniform(0.0, math.pi, 2)
        prob_devs.append(abs(sphere_joint_p2(b, c1, c2) - joint_p2(b, c1, c2)))
    return [
        _check("sphere integral fits A + B cos^2 (max residual)", (r for *_, r in fits), 1e-9),
        _check("fitted coefficients / 2pi vs A(beta), B(beta)", coef_devs, 1e-9),
        _check("normalised sphere integral vs closed-form process-2 joint", prob_devs, 1e-8),
    ]


def run_level(level: str, spec: QuadratureSpec | None = None) -> list[OracleCheck]:
    if level == "integrals":
        return integrals_suite(spec)
    if level == "delta-limit":
        return delta_limit_suite()
    if level == "amplitude":
        return amplitude_suite()
    if level == "process2-angular":
        return process2_angular_suite()
    raise ValueError(f"unknown oracle level {level!r}; choose from {', '.join(LEVELS)}")
