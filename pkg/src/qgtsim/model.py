"""Static two-level model H(theta, phi; A, r): analytic quantum geometry,
spectral gap, eigenstate angle and Chern numbers.

Everything here is closed form; the rest of the package is validated
against this module.  The tracked eigenstate throughout the package is
the one the protocol prepares, cos(theta'/2)|-1> + sin(theta'/2)e^{i phi}|0>,
and the Berry curvature sign convention is fixed so that this state carries
F_{theta phi} = +sin(theta)/2 at r = 0.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import simpson

from .errors import CoverageError, InvalidInputError, SingularityError
from .su2 import SX, SY, SZ

DEGENERACY_TOL = 1e-12


@dataclass(frozen=True)
class StaticParams:
    """Base-point parameters of the static Hamiltonian."""

    A: float                 # drive amplitude, rad/s
    theta0: float            # polar angle, rad
    phi0: float = 0.0        # azimuthal angle, rad
    r: float = 0.0           # dimensionless detuning offset

    def __post_init__(self):
        if not (np.isfinite(self.A) and self.A > 0):
            raise InvalidInputError("A must be positive and finite")
        if not (0.0 <= self.theta0 <= np.pi):
            raise InvalidInputError("theta0 must lie in [0, pi]")
        if not (0.0 <= self.phi0 < 2 * np.pi):
            raise InvalidInputError("phi0 must lie in [0, 2*pi)")
        if not (np.isfinite(self.r) and self.r >= 0):
            raise InvalidInputError("r must be >= 0")


@dataclass(frozen=True)
class QGTComponents:
    """Fubini-Study metric components and Berry curvature at one point."""

    g_tt: float
    g_pp: float
    g_tp: float
    f_tp: float

    @property
    def det_metric(self):
        return self.g_tt * self.g_pp - self.g_tp ** 2


@dataclass(frozen=True)
class ChernResult:
    """Chern number estimate plus the quadrature provenance."""

    value: float
    rule: str
    n_points: int
    theta_min: float
    theta_max: float

    def __float__(self):
        return self.value


def hamiltonian(theta, phi, A, r=0.0):
    """(A/2)[(cos(theta)+r) sz + sin(theta)(cos(phi) sx + sin(phi) sy)].

    Broadcasts over array-valued theta/phi and returns shape (..., 2, 2).
    """
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    if not (np.all(np.isfinite(theta)) and np.all(np.isfinite(phi))
            and np.isfinite(A) and np.isfinite(r)):
        raise InvalidInputError("non-finite Hamiltonian parameters")
    if A <= 0:
        raise InvalidInputError("A must be positive")
    z = (np.cos(theta) + r)[..., None, None]
    x = (np.sin(theta) * np.cos(phi))[..., None, None]
    y = (np.sin(theta) * np.sin(phi))[..., None, None]
    return 0.5 * A * (z * SZ + x * SX + y * SY)


def _denominator(theta, r):
    d = 1.0 + r * r + 2.0 * r * np.cos(theta)
    if np.any(d <= DEGENERACY_TOL):
        raise SingularityError(
            "quantum geometry undefined at the degeneracy point (r ~ 1, theta ~ pi)")
    return d


def gap_frequency(theta, r, A):
    """Spectral gap A*sqrt(1 + r^2 + 2 r cos(theta)) in rad/s."""
    return A * np.sqrt(_denominator(theta, r))


def eigenstate_angle(theta, r):
    """Bloch polar angle theta' of the tracked eigenstate at detuning offset r."""
    d = _denominator(theta, r)
    return np.arccos(np.clip((np.cos(theta) + r) / np.sqrt(d), -1.0, 1.0))


def analytic_qgt(theta, r=0.0):
    """Closed-form QGT components of the tracked eigenstate.

    g_tt = (1 + r cos t)^2 / (4 d^2),  g_pp = sin^2 t / (4 d),  g_tp = 0,
    f_tp = sin t (1 + r cos t) / (2 d^(3/2)),  with d = 1 + r^2 + 2 r cos t.
    At r = 0 this reduces to (1/4, sin^2/4, 0, sin/2).
    """
    theta = float(theta)
    d = float(_denominator(theta, r))
    c, s = np.cos(theta), np.sin(theta)
    g_tt = (1.0 + r * c) ** 2 / (4.0 * d * d)
    g_pp = s * s / (4.0 * d)
    f_tp = s * (1.0 + r * c) / (2.0 * d ** 1.5)
    return QGTComponents(g_tt=g_tt, g_pp=g_pp, g_tp=0.0, f_tp=f_tp)


def _check_grid(theta):
    theta = np.asarray(theta, dtype=float)
    if theta.ndim != 1 or theta.size < 3:
        raise CoverageError("need a 1-d theta grid with at least 3 points")
    if theta.size % 2 == 0:
        raise CoverageError("composite Simpson needs an odd number of points")
    if abs(theta[0]) > 1e-9 or abs(theta[-1] - np.pi) > 1e-9:
        raise CoverageError("theta grid must cover [0, pi]")
    steps = np.diff(theta)
    if np.any(steps <= 0) or np.ptp(steps) > 1e-9 * steps[0]:
        raise CoverageError("theta grid must be uniform and increasing")
    return theta


def chern_from_curvature(theta, f, phi_independent=True):
    """(1/2pi) * Int F dtheta dphi on a phi-independent curvature sample.

    The phi integral contributes 2*pi analytically, leaving a 1-d composite
    Simpson quadrature of F over [0, pi].
    """
    if not phi_independent:
        raise InvalidInputError("only phi-independent curvature samples are supported")
    theta = _check_grid(theta)
    f = np.asarray(f, dtype=float)
    if f.shape != theta.shape:
        raise InvalidInputError("curvature sample and grid lengths differ")
    value = float(simpson(f, x=theta))
    return ChernResult(value=value, rule="composite-simpson", n_points=theta.size,
                       theta_min=float(theta[0]), theta_max=float(theta[-1]))


def chern_from_metric(theta, g_tt, g_pp, g_tp):
    """Metric-based Chern number, integrand 2*sqrt(det g).

    Valid as a Chern number only in the topologically non-trivial phase;
    exposed without that assertion elsewhere.
    """
    theta = _check_grid(theta)
    g_tt, g_pp, g_tp = (np.asarray(v, dtype=float) for v in (g_tt, g_pp, g_tp))
    det = g_tt * g_pp - g_tp ** 2
    if np.any(det < -1e-12):
        raise InvalidInputError("metric determinant is significantly negative")
    integrand = 2.0 * np.sqrt(np.clip(det, 0.0, None))
    value = float(simpson(integrand, x=theta))
    return ChernResult(value=value, rule="composite-simpson", n_points=theta.size,
                       theta_min=float(theta[0]), theta_max=float(theta[-1]))
