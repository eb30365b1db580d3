"""Parametric modulation trajectories, the phase-control function, and the
lab-frame / effective-frame Hamiltonians they generate.

Chirality convention: for the elliptical family the phase trajectory is
phi_t = phi0 - a_phi * cos(omega t).  With this choice a positive a_phi
traces the loop orientation whose interference with a positive a_theta is
constructive for the tracked eigenstate, so the extracted curvature of that
state comes out positive.  Flipping the sign of a_phi flips the chirality.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad
from scipy.special import jv

from .errors import InvalidInputError, NumericalError, PerturbativeRegimeWarning, RwaRegimeWarning
from .model import StaticParams, hamiltonian
from .su2 import SX, SZ

AMPLITUDE_HARD_CAP = 0.3
AMPLITUDE_WARN = 0.15
RWA_RATIO_HARD = 10.0
RWA_RATIO_WARN = 50.0


@dataclass(frozen=True)
class ModulationSpec:
    """Parametric drive description.

    kind is "linear" (both angles modulated in phase, ~sin) or "elliptical"
    (theta ~sin, phi in quadrature).  theta0/phi0 is the base point; a run's
    StaticParams must carry the same base point.
    """

    kind: str
    a_theta: float
    a_phi: float
    omega: float             # modulation angular frequency, rad/s
    theta0: float
    phi0: float = 0.0

    def __post_init__(self):
        if self.kind not in ("linear", "elliptical"):
            raise InvalidInputError(f"unknown modulation kind {self.kind!r}")
        if not (np.isfinite(self.omega) and self.omega > 0):
            raise InvalidInputError("omega must be positive and finite")
        for name, a in (("a_theta", self.a_theta), ("a_phi", self.a_phi)):
            if not np.isfinite(a) or abs(a) > AMPLITUDE_HARD_CAP:
                raise InvalidInputError(
                    f"|{name}| must be <= {AMPLITUDE_HARD_CAP} (got {a})")
            if abs(a) > AMPLITUDE_WARN:
                warnings.warn(
                    f"|{name}| = {abs(a):.3g} exceeds the perturbative guard "
                    f"{AMPLITUDE_WARN}; first-order identities degrade",
                    PerturbativeRegimeWarning, stacklevel=3)

    @property
    def period(self):
        return 2 * np.pi / self.omega


@dataclass(frozen=True)
class DriveSample:
    """One point of the synthesized microwave waveform."""

    t: float
    envelope: float          # A*sin(theta_t), rad/s
    phase: float             # -f(t) + phi_t, rad
    carrier: float           # carrier angular frequency, rad/s


def _check_base(spec: ModulationSpec, params: StaticParams):
    if abs(spec.theta0 - params.theta0) > 1e-12 or abs(spec.phi0 - params.phi0) > 1e-12:
        raise InvalidInputError("modulation base point disagrees with static parameters")


def trajectory(spec: ModulationSpec, t):
    """(theta_t, phi_t) at time(s) t."""
    t = np.asarray(t, dtype=float)
    wt = spec.omega * t
    theta = spec.theta0 + spec.a_theta * np.sin(wt)
    if spec.kind == "linear":
        phi = spec.phi0 + spec.a_phi * np.sin(wt)
    else:
        phi = spec.phi0 - spec.a_phi * np.cos(wt)
    return theta, phi


def phase_control_exact(spec: ModulationSpec, params: StaticParams, t):
    """f(t) = A * Int_0^t cos(theta_tau) dtau by adaptive quadrature.

    Whole modulation periods are integrated in closed form (the period
    average of cos(theta_tau) is J0(a_theta) cos(theta0)); the remainder is
    an adaptive quadrature kept below 1e-10 rad absolute error.
    """
    _check_base(spec, params)
    t = float(t)
    if t < 0:
        raise InvalidInputError("t must be >= 0")
    period = spec.period
    n_full = int(np.floor(t / period))
    full = n_full * period * np.cos(spec.theta0) * jv(0, spec.a_theta)
    t0 = n_full * period
    if t > t0:
        # integrate in modulation phase x = omega*tau so the interval is O(1)
        # regardless of the absolute frequency scale
        val_x, err_x = quad(lambda x: np.cos(spec.theta0
                                             + spec.a_theta * np.sin(x)),
                            spec.omega * t0, spec.omega * t,
                            epsabs=1e-13, epsrel=1e-13, limit=200)
        val = val_x / spec.omega
        if err_x / spec.omega * params.A > 1e-10:
            raise NumericalError(
                f"phase-control quadrature error estimate "
                f"{err_x / spec.omega * params.A:.3e} rad exceeds 1e-10 over "
                f"[{t0}, {t}]")
    else:
        val = 0.0
    return params.A * (full + val)


def phase_control_bessel(spec: ModulationSpec, params: StaticParams, t,
                         truncation_order=1):
    """Bessel-series truncation of the phase-control integral.

    Order 1 keeps the J0 secular term and the J1 harmonic,
    f(t) ~ A cos(theta0) J0(a) t - (4 A sin(theta0)/omega) J1(a) sin^2(omega t/2);
    higher orders add the J2, J3, ... harmonics of cos(theta_tau).
    """
    _check_base(spec, params)
    if truncation_order < 1:
        raise InvalidInputError("truncation_order must be >= 1")
    t = np.asarray(t, dtype=float)
    a = spec.a_theta
    w = spec.omega
    c0, s0 = np.cos(spec.theta0), np.sin(spec.theta0)
    f = c0 * jv(0, a) * t
    for m in range(1, truncation_order + 1):
        if m % 2 == 0:
            f = f + c0 * 2.0 * jv(m, a) * np.sin(m * w * t) / (m * w)
        else:
            f = f - s0 * 2.0 * jv(m, a) * (1.0 - np.cos(m * w * t)) / (m * w)
    return params.A * f


def carrier_frequency(params: StaticParams, omega0):
    """Drive carrier realizing the detuning offset r (omega0 - r*A)."""
    return omega0 - params.r * params.A


def check_rwa_ratio(params: StaticParams, omega0):
    """Warn when omega0/A leaves the rotating-wave regime; never raises."""
    ratio = omega0 / params.A
    if ratio < RWA_RATIO_HARD:
        warnings.warn(
            f"omega0/A = {ratio:.1f} < {RWA_RATIO_HARD:.0f}: rotating-wave "
            "reduction unreliable", RwaRegimeWarning, stacklevel=3)
    elif ratio < RWA_RATIO_WARN:
        warnings.warn(
            f"omega0/A = {ratio:.1f} < {RWA_RATIO_WARN:.0f}: rotating-wave "
            "corrections may be visible", RwaRegimeWarning, stacklevel=3)
    return ratio


def drive_sample(spec: ModulationSpec, params: StaticParams, omega0, t,
                 truncation_order=1):
    """Envelope/phase/carrier triple of the synthesized waveform at time t."""
    theta_t, phi_t = trajectory(spec, t)
    f = phase_control_bessel(spec, params, t, truncation_order)
    return DriveSample(t=float(t), envelope=float(params.A * np.sin(theta_t)),
                       phase=float(phi_t - f), carrier=carrier_frequency(params, omega0))


def lab_hamiltonian(spec: ModulationSpec, params: StaticParams, omega0, t,
                    truncation_order=1):
    """(omega0/2) sz + A sin(theta_t) cos(carrier*t - f(t) + phi_t) sx.

    Broadcasts over t.  The phase-control function is the Bessel truncation
    (order 1 by default, matching the synthesized waveform); the detuning
    offset r is realized by detuning the carrier to omega0 - r*A.
    """
    _check_base(spec, params)
    check_rwa_ratio(params, omega0)
    t = np.asarray(t, dtype=float)
    theta_t, phi_t = trajectory(spec, t)
    f = phase_control_bessel(spec, params, t, truncation_order)
    wd = carrier_frequency(params, omega0)
    v = params.A * np.sin(theta_t) * np.cos(wd * t - f + phi_t)
    return 0.5 * omega0 * SZ + v[..., None, None] * SX


def effective_hamiltonian(spec: ModulationSpec, params: StaticParams, t):
    """Rotating-frame Hamiltonian (A/2)[(cos th_t + r) sz + sin th_t (...)]."""
    _check_base(spec, params)
    theta_t, phi_t = trajectory(spec, t)
    return hamiltonian(theta_t, phi_t, params.A, params.r)
