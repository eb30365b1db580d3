"""Complex 2x2 building blocks: Pauli algebra, closed-form propagators,
gauge-fixed eigensystems and state overlaps.

States are plain complex ndarrays of shape (2,) over the basis
(|-1>, |0>); operators are (2, 2) complex ndarrays.  All routines accept
stacked inputs with leading batch axes where that is useful.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError

SI = np.eye(2, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)

STATE_NORM_ATOL = 1e-9
HERMITICITY_ATOL = 1e-12


def state(c_up, c_down):
    """Normalized 2-vector from amplitudes on |-1> and |0>."""
    psi = np.array([c_up, c_down], dtype=complex)
    n = np.linalg.norm(psi)
    if not np.isfinite(n) or n == 0:
        raise InvalidInputError("state amplitudes must be finite and not both zero")
    return psi / n


def require_state(psi):
    psi = np.asarray(psi, dtype=complex)
    if psi.shape != (2,) or not np.all(np.isfinite(psi)):
        raise InvalidInputError("state must be a finite complex 2-vector")
    if abs(np.linalg.norm(psi) - 1.0) > STATE_NORM_ATOL:
        raise InvalidInputError("state is not normalized")
    return psi


def require_hermitian(h, atol=HERMITICITY_ATOL):
    h = np.asarray(h, dtype=complex)
    if h.shape[-2:] != (2, 2) or not np.all(np.isfinite(h)):
        raise InvalidInputError("operator must be a finite complex 2x2 matrix")
    scale = max(1.0, float(np.max(np.abs(h))))
    if np.max(np.abs(h - np.conj(np.swapaxes(h, -1, -2)))) > atol * scale:
        raise InvalidInputError("operator is not Hermitian")
    return h


def pauli_decompose(h):
    """Return (h0, hx, hy, hz) with h = h0*I + hx*sx + hy*sy + hz*sz."""
    h = np.asarray(h, dtype=complex)
    h0 = 0.5 * (h[..., 0, 0] + h[..., 1, 1]).real
    hz = 0.5 * (h[..., 0, 0] - h[..., 1, 1]).real
    hx = h[..., 0, 1].real
    hy = -h[..., 0, 1].imag
    return h0, hx, hy, hz


def exponentiate(h, dt):
    """exp(-i h dt) for Hermitian h (possibly stacked), via the SU(2) closed form.

    The scalar part contributes a global phase exp(-i h0 dt); the traceless
    part rotates by angle |h_vec| dt about the Bloch axis h_vec/|h_vec|.
    The result is unitary to machine precision for any step size.
    """
    h = np.asarray(h, dtype=complex)
    dt = np.asarray(dt, dtype=float)
    if not np.all(np.isfinite(h)):
        raise InvalidInputError("non-finite Hamiltonian entries")
    if not np.all(np.isfinite(dt)):
        raise InvalidInputError("non-finite time step")
    h0, hx, hy, hz = pauli_decompose(h)
    h0, hx, hy, hz, dt = np.broadcast_arrays(h0, hx, hy, hz, dt)
    hn = np.sqrt(hx * hx + hy * hy + hz * hz)
    ang = hn * dt
    # sin(ang)/hn with the hn -> 0 limit dt
    safe = np.where(hn > 0.0, hn, 1.0)
    sinc = np.where(hn > 0.0, np.sin(ang) / safe, dt)
    c = np.cos(ang)
    u = np.empty(np.shape(ang) + (2, 2), dtype=complex)
    u[..., 0, 0] = c - 1j * sinc * hz
    u[..., 0, 1] = -1j * sinc * (hx - 1j * hy)
    u[..., 1, 0] = -1j * sinc * (hx + 1j * hy)
    u[..., 1, 1] = c + 1j * sinc * hz
    return np.exp(-1j * h0 * dt)[..., None, None] * u


def is_unitary(u, atol=1e-10):
    u = np.asarray(u, dtype=complex)
    return np.max(np.abs(np.conj(u.T) @ u - SI)) <= atol


@dataclass(frozen=True)
class EigenSystem:
    """Ordered, gauge-fixed eigenpairs of a Hermitian 2x2 operator."""

    e_minus: float
    e_plus: float
    psi_minus: np.ndarray
    psi_plus: np.ndarray
    degenerate: bool = False

    @property
    def gap(self):
        return self.e_plus - self.e_minus


def eigensystem(h, degeneracy_rtol=1e-12):
    """Eigen-decomposition with a deterministic phase convention.

    A gap below ``degeneracy_rtol * ||h||`` yields a flagged-degenerate
    result with the computational basis; callers needing a unique
    eigenbasis must treat that flag as an error.
    """
    h = require_hermitian(h)
    h0, hx, hy, hz = pauli_decompose(h)
    hn = np.sqrt(hx * hx + hy * hy + hz * hz)
    scale = np.sqrt(2.0 * (h0 * h0 + hn * hn))  # Frobenius norm
    if 2.0 * hn <= degeneracy_rtol * max(scale, 1e-300):
        return EigenSystem(float(h0), float(h0), np.array([0, 1], dtype=complex),
                           np.array([1, 0], dtype=complex), degenerate=True)
    # Bloch angles of the + eigenvector; both vectors built directly in the
    # gauge (real non-negative |-1> component, |0> component when it vanishes)
    theta = np.arccos(np.clip(hz / hn, -1.0, 1.0))
    phi = np.arctan2(hy, hx)
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    plus = np.array([c, s * np.exp(1j * phi)])
    minus = np.array([s, -c * np.exp(1j * phi)])
    if c == 0.0:
        plus = np.array([0.0, 1.0], dtype=complex)
    if s == 0.0:
        minus = np.array([0.0, 1.0], dtype=complex)
    return EigenSystem(float(h0 - hn), float(h0 + hn), minus, plus)


def fidelity(a, b):
    """|<a|b>|^2 for normalized states."""
    a = require_state(a)
    b = require_state(b)
    return float(abs(np.vdot(a, b)) ** 2)
