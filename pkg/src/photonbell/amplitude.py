"""Relative transition probability for e+ e- -> gamma gamma at three levels.

``relative_probability_covariant`` works with four-vectors, ``relative_probability_cm``
with c.m. three-vectors, and ``pr_process1`` / ``pr_process2`` are the scalar
forms specialised to each detector geometry.  All three agree identically;
the specialised forms are the fast path used everywhere else.
"""

from __future__ import annotations

import enum

import numpy as np

from .errors import DegenerateKinematicsError, InputValidationError
from .kinematics import (
    Z_HAT,
    CmEvent,
    FourVector,
    ThreeVector,
    build_cm_event,
    check_beta,
    gauge_projected_polarization,
    photon_direction,
    polarization_p1,
    polarization_p2,
    spatial_four,
)


class ProcessKind(enum.Enum):
    """Detector geometry.

    PROCESS1: fermions along z, photons detected on the x axis.
    PROCESS2: photons detected on the z axis, fermion axis averaged over the sphere.
    """

    PROCESS1 = 1
    PROCESS2 = 2

    @classmethod
    def parse(cls, value) -> ProcessKind:
        if isinstance(value, cls):
            return value
        try:
            return cls(int(value))
        except (TypeError, ValueError):
            raise InputValidationError(f"process must be 1 or 2, got {value!r}") from None


def relative_probability_covariant(
    p1: FourVector, k1: FourVector, k2: FourVector, eps1: FourVector, eps2: FourVector
) -> float:
    """``(k1.k2)^2 / (4 (p1.k1)(p1.k2)) - (eps1.eps2)^2``, overall constants dropped."""
    den = p1.dot(k1) * p1.dot(k2)
    if den == 0.0:
        raise DegenerateKinematicsError("(p1.k1)(p1.k2) = 0")
    return 0.25 * k1.dot(k2) ** 2 / den - eps1.dot(eps2) ** 2


def relative_probability_cm(event: CmEvent, e1: ThreeVector, e2: ThreeVector) -> float:
    k1, k2, p1 = event.k1, event.k2, event.p1
    den = p1.dot(k1) * p1.dot(k2)
    if den == 0.0:
        raise DegenerateKinematicsError("(p1.k1)(p1.k2) = 0")
    k12 = k1.dot(k2)
    p = p1.spatial
    bracket = e1.dot(e2) + e1.dot(p) * e2.dot(p) * k12 / den
    return 0.25 * k12**2 / den - bracket**2


def covariant_from_event(event: CmEvent, e1: ThreeVector, e2: ThreeVector) -> float:
    """Gauge-project both polarizations against ``p1`` and evaluate the covariant form."""
    eps1 = gauge_projected_polarization(spatial_four(e1), event.p1, event.k1)
    eps2 = gauge_projected_polarization(spatial_four(e2), event.p1, event.k2)
    return relative_probability_covariant(event.p1, event.k1, event.k2, eps1, eps2)


def _denominator(beta, theta):
    d = 1.0 - beta * beta * np.cos(theta) ** 2
    if np.any(d <= 0.0):
        raise DegenerateKinematicsError("1 - beta^2 cos^2(theta) = 0")
    return d


def _reduced(beta, d, cos_dchi, a1, a2):
    # a1, a2: projections cos(chi_i) (process 1) or cos(phi + chi_i) (process 2).
    u = 1.0 - beta * beta
    x = cos_dchi - 2.0 * a1 * a2
    return (
        (1.0 - 4.0 * u * a1 * a2 * x) / d
        - 4.0 * u * u * a1 * a1 * a2 * a2 / (d * d)
        - x * x
    )


def pr_process1(beta, theta, chi1, chi2):
    """Specialised relative probability for fermions along z; accepts numpy arrays."""
    d = _denominator(beta, theta)
    return _reduced(beta, d, np.cos(chi1 - chi2), np.cos(chi1), np.cos(chi2))


def pr_process2(beta, theta, phi, chi1, chi2):
    """Specialised relative probability for photons along z, fermions at ``(theta, phi)``."""
    d = _denominator(beta, theta)
    return _reduced(beta, d, np.cos(chi1 - chi2), np.cos(phi + chi1), np.cos(phi + chi2))


def process1_geometry(beta: float, theta: float, phi: float, chi1: float, chi2: float):
    """``(event, e1, e2)`` with the fermion along z and photon 1 at ``(theta, phi)``."""
    k = photon_direction(theta, phi)
    event = build_cm_event(beta, Z_HAT, k)
    return event, polarization_p1(theta, phi, chi1), polarization_p1(theta, phi, chi2)


def process2_geometry(beta: float, theta: float, phi: float, chi1: float, chi2: float):
    """``(event, e1, e2)`` with photon 1 along z and the fermion at ``(theta, phi)``."""
    p_dir = photon_direction(theta, phi)
    event = build_cm_event(beta, p_dir, Z_HAT)
    return event, polarization_p2(chi1), polarization_p2(chi2)


def evaluate_levels(process, beta: float, theta: float, phi: float, chi1: float, chi2: float):
    """Return ``(covariant, cm, specialised)`` evaluations for one configuration."""
    process = ProcessKind.parse(process)
    beta = check_beta(beta)
    if process is ProcessKind.PROCESS1:
        event, e1, e2 = process1_geometry(beta, theta, phi, chi1, chi2)
        special = float(pr_process1(beta, theta, chi1, chi2))
    else:
        event, e1, e2 = process2_geometry(beta, theta, phi, chi1, chi2)
        special = float(pr_process2(beta, theta, phi, chi1, chi2))
    return covariant_from_event(event, e1, e2), relative_probability_cm(event, e1, e2), special


def relative_spread(values) -> float:
    """Max pairwise difference scaled by ``max(1, max |value|)``.

    The leading term ``1/(1 - beta^2 cos^2 theta)`` is at least 1, so unit
    scale is the natural floor when the probability itself cancels to zero.
    """
    v = [float(x) for x in values]
    scale = max(1.0, max(abs(x) for x in v))
    return (max(v) - min(v)) / scale

