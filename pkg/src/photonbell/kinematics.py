"""Centre-of-momentum kinematics for e+ e- -> gamma gamma.

Conventions
-----------
* Metric ``diag(-1, 1, 1, 1)``: ``a.b = a_vec . b_vec - a0 * b0``.
* Overall momentum scale fixed by ``p0 = 1``; the fermion mass is then
  ``m = sqrt(1 - beta**2)`` and every photon has ``|k| = k0 = 1``.
* Angles are radians.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateKinematicsError, InputValidationError

UNIT_TOL = 1e-10


@dataclass(frozen=True)
class ThreeVector:
    x: float
    y: float
    z: float

    def __add__(self, other: ThreeVector) -> ThreeVector:
        return ThreeVector(self.x + other.x, self.y + other.y, self.z + other.z)

    def __sub__(self, other: ThreeVector) -> ThreeVector:
        return ThreeVector(self.x - other.x, self.y - other.y, self.z - other.z)

    def __mul__(self, c: float) -> ThreeVector:
        return ThreeVector(c * self.x, c * self.y, c * self.z)

    __rmul__ = __mul__

    def __neg__(self) -> ThreeVector:
        return ThreeVector(-self.x, -self.y, -self.z)

    def dot(self, other: ThreeVector) -> float:
        return self.x * other.x + self.y * other.y + self.z * other.z

    def cross(self, other: ThreeVector) -> ThreeVector:
        return ThreeVector(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )

    def norm(self) -> float:
        return math.sqrt(self.dot(self))

    def to_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])

    @classmethod
    def from_array(cls, a) -> ThreeVector:
        x, y, z = (float(v) for v in a)
        return cls(x, y, z)


@dataclass(frozen=True)
class FourVector:
    t: float
    spatial: ThreeVector

    def __add__(self, other: FourVector) -> FourVector:
        return FourVector(self.t + other.t, self.spatial + other.spatial)

    def __sub__(self, other: FourVector) -> FourVector:
        return FourVector(self.t - other.t, self.spatial - other.spatial)

    def __mul__(self, c: float) -> FourVector:
        return FourVector(c * self.t, self.spatial * c)

    __rmul__ = __mul__

    def dot(self, other: FourVector) -> float:
        """Minkowski product with signature (-, +, +, +)."""
        return self.spatial.dot(other.spatial) - self.t * other.t

    def bar(self) -> FourVector:
        """Parity partner ``(k0, -k_vec)`` used in the completeness relation."""
        return FourVector(self.t, -self.spatial)

    def to_array(self) -> np.ndarray:
        return np.array([self.t, self.spatial.x, self.spatial.y, self.spatial.z])

    @classmethod
    def from_array(cls, a) -> FourVector:
        t, x, y, z = (float(v) for v in a)
        return cls(t, ThreeVector(x, y, z))


METRIC = np.diag([-1.0, 1.0, 1.0, 1.0])
Z_HAT = ThreeVector(0.0, 0.0, 1.0)


def check_beta(beta: float) -> float:
    beta = float(beta)
    if not (0.0 <= beta <= 1.0):
        raise InputValidationError(f"beta must satisfy 0 <= beta <= 1, got {beta!r}")
    return beta


def _check_unit(v: ThreeVector, name: str) -> None:
    if abs(v.norm() - 1.0) > UNIT_TOL:
        raise InputValidationError(f"{name} must be a unit vector, |{name}| = {v.norm()!r}")


@dataclass(frozen=True)
class CmEvent:
    """Four-momenta of ``e+(p1) e-(p2) -> gamma(k1) gamma(k2)`` in the c.m. frame."""

    beta: float
    p1: FourVector
    p2: FourVector
    k1: FourVector
    k2: FourVector

    @property
    def mass(self) -> float:
        return math.sqrt(max(0.0, 1.0 - self.beta * self.beta))

    @property
    def massless(self) -> bool:
        """True in the beta = 1 limit, where collinear photons are degenerate."""
        return self.beta == 1.0


@dataclass(frozen=True)
class PolarizationBasis:
    """Two orthonormal linear polarizations transverse to one photon direction."""

    e1: ThreeVector
    e2: ThreeVector


def rotation_matrix(phi: float, axis: ThreeVector = Z_HAT) -> np.ndarray:
    """Rotation by ``phi`` about ``axis``.

    Built element-wise from
    ``R[i, l] = delta_il + eps_ijl n_j sin(phi) + (delta_il - n_i n_l)(cos(phi) - 1)``;
    with ``axis = z`` it carries ``(sin t, 0, cos t)`` to
    ``(cos phi sin t, sin phi sin t, cos t)``.
    """
    _check_unit(axis, "axis")
    n = axis.to_array() / axis.norm()
    eps = np.zeros((3, 3, 3))
    eps[0, 1, 2] = eps[1, 2, 0] = eps[2, 0, 1] = 1.0
    eps[0, 2, 1] = eps[2, 1, 0] = eps[1, 0, 2] = -1.0
    eye = np.eye(3)
    return (
        eye
        + np.einsum("ijl,j->il", eps, n) * math.sin(phi)
        + (eye - np.outer(n, n)) * (math.cos(phi) - 1.0)
    )


def photon_direction(theta: float, phi: float) -> ThreeVector:
    st = math.sin(theta)
    return ThreeVector(math.cos(phi) * st, math.sin(phi) * st, math.cos(theta))


def polarization_p1(theta: float, phi: float, chi: float) -> ThreeVector:
    """Linear polarization at analyzer angle ``chi`` for a photon along
    ``photon_direction(theta, phi)``, the fermion axis being z.

    At ``phi = 0`` this is ``(-cos t cos chi, sin chi, sin t cos chi)``.
    """
    ct, st = math.cos(theta), math.sin(theta)
    cc, sc = math.cos(chi), math.sin(chi)
    cp, sp = math.cos(phi), math.sin(phi)
    return ThreeVector(-ct * cc * cp - sc * sp, sc * cp - ct * cc * sp, st * cc)


def polarization_p2(chi: float) -> ThreeVector:
    """Polarization for photons along z: ``(-cos chi, sin chi, 0)``."""
    return ThreeVector(-math.cos(chi), math.sin(chi), 0.0)


def polarization_basis(k_dir: ThreeVector, chi: float = 0.0) -> PolarizationBasis:
    """Orthonormal pair ``(e(chi), e(chi + pi/2))`` transverse to ``k_dir``."""
    _check_unit(k_dir, "k_dir")
    theta = math.atan2(math.hypot(k_dir.x, k_dir.y), k_dir.z)
    phi = math.atan2(k_dir.y, k_dir.x)
    return PolarizationBasis(
        polarization_p1(theta, phi, chi),
        polarization_p1(theta, phi, chi + math.pi / 2),
    )


def build_cm_event(beta: float, p_dir: ThreeVector, k_dir: ThreeVector) -> CmEvent:
    beta = check_beta(beta)
    _check_unit(p_dir, "p_dir")
    _check_unit(k_dir, "k_dir")
    p = p_dir * beta
    p1 = FourVector(1.0, p)
    p2 = FourVector(1.0, -p)
    k1 = FourVector(1.0, k_dir)
    k2 = FourVector(1.0, -k_dir)
    return CmEvent(beta, p1, p2, k1, k2)


def spatial_four(e: ThreeVector) -> FourVector:
    """Embed a polarization three-vector as ``(0, e)``."""
    return FourVector(0.0, e)


def gauge_projected_polarization(e: FourVector, p1: FourVector, k: FourVector) -> FourVector:
    """``eps = e - k (p1.e)/(p1.k)``; invariant under ``e -> e + b k`` when ``k`` is null."""
    pk = p1.dot(k)
    if pk == 0.0:
        raise DegenerateKinematicsError("p1.k = 0: photon collinear with a massless fermion")
    return e - k * (p1.dot(e) / pk)


def polarization_projector(p1: FourVector, k: FourVector) -> np.ndarray:
    """Matrix ``M[mu, nu] = delta^mu_nu - k^mu p1_nu / (p1.k)`` acting on contravariant components."""
    pk = p1.dot(k)
    if pk == 0.0:
        raise DegenerateKinematicsError("p1.k = 0: photon collinear with a massless fermion")
    p_lower = METRIC @ p1.to_array()
    return np.eye(4) - np.outer(k.to_array(), p_lower) / pk


def completeness_tensor(basis: PolarizationBasis) -> np.ndarray:
    """``sum_lambda e^mu(lambda) e^nu(lambda)`` for ``e = (0, e_vec)``."""
    out = np.zeros((4, 4))
    for e in (basis.e1, basis.e2):
        v = spatial_four(e).to_array()
        out += np.outer(v, v)
    return out


def completeness_rhs(k: FourVector) -> np.ndarray:
    """``g^{mu nu} - (k^mu kbar^nu + kbar^mu k^nu) / (k.kbar)``."""
    ka = k.to_array()
    kb = k.bar().to_array()
    return METRIC - (np.outer(ka, kb) + np.outer(kb, ka)) / k.dot(k.bar())
