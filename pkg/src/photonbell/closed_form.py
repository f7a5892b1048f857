"""Conditional polarization probabilities for both annihilation geometries.

Outcome convention: ``joint(beta, chi1, chi2)`` is the probability that photon 1
passes an analyzer at ``chi1`` and photon 2 one at ``chi2``; the orthogonal
outcome of each photon is the analyzer angle plus ``pi/2``.  The scalar
functions accept numpy arrays for the angles.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .amplitude import ProcessKind
from .errors import ConvergenceError, InputValidationError, ProbabilityRangeError
from .integrals import DeltaWindow, a_of_beta, b_of_beta, f_delta, n_delta
from .kinematics import check_beta

HALF_PI = 0.5 * math.pi
RANGE_TOL = 1e-12

DEFAULT_DELTAS = (1e-1, 3e-2, 1e-2, 3e-3, 1e-3, 3e-4, 1e-4, 3e-5, 1e-5, 3e-6, 1e-6)


class Which(enum.Enum):
    FIRST = "first"
    SECOND = "second"

    @classmethod
    def parse(cls, value) -> Which:
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise InputValidationError(f"which must be 'first' or 'second', got {value!r}") from None


def checked_probability(value):
    """Clip to [0, 1] only after confirming the excursion is round-off sized."""
    arr = np.asarray(value, dtype=float)
    if np.any(arr < -RANGE_TOL) or np.any(arr > 1.0 + RANGE_TOL):
        raise ProbabilityRangeError(
            f"probability outside [0, 1] beyond {RANGE_TOL}: min={arr.min()!r}, max={arr.max()!r}"
        )
    out = np.clip(arr, 0.0, 1.0)
    return float(out) if out.ndim == 0 else out


def _p1_norm(beta: float) -> float:
    return 2.0 * (1.0 + 2.0 * beta * beta * (1.0 - beta * beta))


def joint_p1(beta: float, chi1, chi2):
    """Process 1 (detectors on the x axis, fermions along z)."""
    beta = check_beta(beta)
    inner = np.cos(chi1 - chi2) - 2.0 * beta * beta * np.cos(chi1) * np.cos(chi2)
    return checked_probability((1.0 - inner * inner) / _p1_norm(beta))


def marginal_p1(beta: float, chi, which=Which.FIRST):
    """Process 1 single-photon probability; identical in form for either photon."""
    Which.parse(which)
    beta = check_beta(beta)
    c = np.cos(chi)
    return checked_probability((1.0 + 4.0 * beta * beta * (1.0 - beta * beta) * c * c) / _p1_norm(beta))


def joint_p2(beta: float, chi1, chi2):
    """Process 2 (detectors on the z axis, fermion axis averaged); 1/4 at ``beta = 1``."""
    beta = check_beta(beta)
    c = np.cos(chi1 - chi2)
    if beta == 1.0:
        return checked_probability(np.full_like(c, 0.25))
    a, b = a_of_beta(beta), b_of_beta(beta)
    return checked_probability((a + b * c * c) / (2.0 * (2.0 * a + b)))


def marginal_p2(beta: float, chi, which=Which.FIRST):
    """Process 2 single-photon probability: exactly 1/2."""
    Which.parse(which)
    check_beta(beta)
    c = np.asarray(chi, dtype=float)
    return 0.5 if c.ndim == 0 else np.full_like(c, 0.5)


def joint(process, beta: float, chi1, chi2):
    if ProcessKind.parse(process) is ProcessKind.PROCESS1:
        return joint_p1(beta, chi1, chi2)
    return joint_p2(beta, chi1, chi2)


def marginal(process, beta: float, chi, which=Which.FIRST):
    if ProcessKind.parse(process) is ProcessKind.PROCESS1:
        return marginal_p1(beta, chi, which)
    return marginal_p2(beta, chi, which)


def quadruple(process, beta: float, chi1: float, chi2: float) -> np.ndarray:
    """Joint probabilities for (aligned, aligned), (aligned, orth), (orth, aligned), (orth, orth)."""
    return np.array(
        [
            joint(process, beta, chi1, chi2),
            joint(process, beta, chi1, chi2 + HALF_PI),
            joint(process, beta, chi1 + HALF_PI, chi2),
            joint(process, beta, chi1 + HALF_PI, chi2 + HALF_PI),
        ]
    )


def statistical_dependence_gap(process, beta: float, chi1, chi2):
    """``P(chi1, chi2) - P(chi1, -) P(-, chi2)``; zero means the photons look independent."""
    return joint(process, beta, chi1, chi2) - marginal(process, beta, chi1, Which.FIRST) * marginal(
        process, beta, chi2, Which.SECOND
    )


@dataclass(frozen=True)
class JointProbability:
    value: float
    process: ProcessKind
    beta: float
    chi1: float
    chi2: float


@dataclass(frozen=True)
class MarginalProbability:
    value: float
    which: Which
    process: ProcessKind
    beta: float
    chi: float


def joint_probability(process, beta: float, chi1: float, chi2: float) -> JointProbability:
    process = ProcessKind.parse(process)
    return JointProbability(float(joint(process, beta, chi1, chi2)), process, float(beta), chi1, chi2)


def marginal_probability(process, beta: float, chi: float, which=Which.FIRST) -> MarginalProbability:
    process = ProcessKind.parse(process)
    which = Which.parse(which)
    return MarginalProbability(float(marginal(process, beta, chi, which)), which, process, float(beta), chi)


class DeltaLimit(NamedTuple):
    estimate: float
    converged: bool
    history: tuple[tuple[float, float], ...]


def joint_p1_via_delta_limit(
    beta: float,
    chi1: float,
    chi2: float,
    delta_sequence=DEFAULT_DELTAS,
    *,
    tol: float = 1e-8,
    strict: bool = True,
) -> DeltaLimit:
    """Process 1 joint probability as the limit of window ratios ``F_delta / N_delta``.

    Walks the decreasing ``delta_sequence`` and stops once two successive
    ratios differ by less than ``tol``.  With ``strict`` a sequence that runs
    out first raises :class:`ConvergenceError`; otherwise the last ratio is
    returned with ``converged=False``.
    """
    beta = check_beta(beta)
    deltas = [float(d) for d in delta_sequence]
    if len(deltas) < 2 or any(b >= a for a, b in zip(deltas, deltas[1:])):
        raise InputValidationError("delta_sequence must be strictly decreasing with at least two entries")
    history = []
    prev = None
    for d in deltas:
        w = DeltaWindow(d)
        ratio = f_delta(beta, chi1, chi2, w) / n_delta(beta, w)
        history.append((d, ratio))
        if prev is not None and abs(ratio - prev) < tol:
            return DeltaLimit(ratio, True, tuple(history))
        prev = ratio
    if strict:
        raise ConvergenceError(
            "window ratio did not settle along the delta sequence",
            estimate=prev,
            error=abs(history[-1][1] - history[-2][1]),
            diagnostics=tuple(history),
        )
    return DeltaLimit(prev, False, tuple(history))
