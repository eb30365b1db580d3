"""Floquet-side predictions: Fourier blocks of the modulated Hamiltonian,
the near-resonant two-level reduction, and closed-form/semi-analytic
resonance and Rabi frequencies.

Fourier convention: H(t) = sum_n H_n exp(-i n omega t), so
H_n = (1/T) Int H(t) exp(+i n omega t) dt and H_{-n} = H_n^dagger.
With this convention the block H_1 is the one that drives the downward
transition out of the tracked (upper) eigenstate at resonance.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import jv

from .drive import ModulationSpec, effective_hamiltonian
from .errors import InvalidInputError
from .model import StaticParams, analytic_qgt, gap_frequency, hamiltonian
from .su2 import EigenSystem, eigensystem

FOURIER_SAMPLES = 2048


@dataclass(frozen=True)
class FourierBlocks:
    """Harmonic blocks {n: H_n} of a periodically modulated Hamiltonian."""

    omega: float
    n_max: int
    blocks: dict

    def __getitem__(self, n):
        return self.blocks[n]


def fourier_blocks(spec: ModulationSpec, params: StaticParams, n_max,
                   n_samples=FOURIER_SAMPLES):
    """Trapezoid Fourier integrals of the effective Hamiltonian over one period.

    The integrand is smooth and periodic, so the uniform-grid trapezoid rule
    converges spectrally; 2048 samples put the error far below 1e-10*A.
    """
    if n_max < 1:
        raise InvalidInputError("n_max must be >= 1")
    ts = np.arange(n_samples) * (spec.period / n_samples)
    hs = effective_hamiltonian(spec, params, ts)
    blocks = {}
    for n in range(-n_max, n_max + 1):
        phase = np.exp(1j * n * spec.omega * ts)
        blocks[n] = np.einsum("t,tij->ij", phase, hs) / n_samples
    return FourierBlocks(omega=spec.omega, n_max=n_max, blocks=blocks)


def phi_modulation_block(n, a_phi, theta0, phi0, A):
    """Closed-form harmonic block for phi-only linear modulation.

    H_n = (A/2) J_n(a_phi) sin(theta0) [[0, e^{-i phi0}], [(-1)^n e^{i phi0}, 0]].
    """
    coeff = 0.5 * A * jv(n, a_phi) * np.sin(theta0)
    return coeff * np.array([[0.0, np.exp(-1j * phi0)],
                             [(-1.0) ** n * np.exp(1j * phi0), 0.0]])


def rwa_reduce(blocks: FourierBlocks, omega, basis: EigenSystem):
    """Two-level rotating-frame Hamiltonian near the one-photon resonance.

    Returns [[E_plus - omega, c], [conj(c), E_minus]] in the (psi_plus,
    psi_minus) eigenbasis, with coupling c = <psi_plus| H_1 |psi_minus>.
    """
    if basis.degenerate:
        raise InvalidInputError("cannot reduce on a degenerate eigenbasis")
    gap = basis.gap
    if abs(gap - omega) >= 0.5 * gap:
        raise InvalidInputError(
            f"omega = {omega:.6g} is not near-resonant with the gap {gap:.6g}")
    c = np.vdot(basis.psi_plus, blocks[1] @ basis.psi_minus)
    return np.array([[basis.e_plus - omega, c],
                     [np.conj(c), basis.e_minus]])


def predict_resonance(spec: ModulationSpec, params: StaticParams):
    """Resonant modulation frequency = spectral gap A*sqrt(1+r^2+2r cos theta0)."""
    return float(gap_frequency(params.theta0, params.r, params.A))


def predict_rabi(spec: ModulationSpec, params: StaticParams):
    """Population-oscillation angular frequency at resonance.

    Defined as twice the magnitude of the rotating-frame coupling
    <psi_plus|H_1|psi_minus>.  The harmonic blocks depend only on the
    trajectory shape, not on the modulation frequency, so the value is
    well-defined whether or not spec.omega equals the resonance.
    """
    basis = eigensystem(hamiltonian(params.theta0, params.phi0, params.A, params.r))
    if basis.degenerate:
        raise InvalidInputError("degenerate base Hamiltonian has no Rabi resonance")
    blocks = fourier_blocks(spec, params, n_max=1)
    c = np.vdot(basis.psi_plus, blocks[1] @ basis.psi_minus)
    return float(2.0 * abs(c))


def linear_rabi_first_order(a_theta, a_phi, params: StaticParams):
    """First-order closed form omega_res * sqrt(at^2 g_tt + 2 at ap g_tp + ap^2 g_pp)."""
    g = analytic_qgt(params.theta0, params.r)
    omega_res = gap_frequency(params.theta0, params.r, params.A)
    s = a_theta ** 2 * g.g_tt + 2 * a_theta * a_phi * g.g_tp + a_phi ** 2 * g.g_pp
    return float(omega_res * np.sqrt(s))


def elliptical_rabi_first_order(a_theta, a_phi, params: StaticParams):
    """First-order closed form omega_res * sqrt(at^2 g_tt + at ap f_tp + ap^2 g_pp)."""
    g = analytic_qgt(params.theta0, params.r)
    omega_res = gap_frequency(params.theta0, params.r, params.A)
    s = a_theta ** 2 * g.g_tt + a_theta * a_phi * g.f_tp + a_phi ** 2 * g.g_pp
    return float(omega_res * np.sqrt(max(s, 0.0)))
