"""Independent reference implementations used to pin expected values.

Everything here deliberately avoids the library's own code paths: matrix
exponentials come from a Taylor series with scaling and squaring, QGT
components from finite differences of explicitly constructed eigenvectors,
and integrals from dense-grid quadrature.
"""
import numpy as np

SI = np.eye(2, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)


def taylor_expm(m, order=30):
    """exp(m) by scaling-and-squaring with an order-30 Taylor series."""
    m = np.asarray(m, dtype=complex)
    k = 0
    norm = np.max(np.abs(m))
    while norm > 0.25:
        m = m / 2.0
        norm /= 2.0
        k += 1
    out = np.eye(2, dtype=complex)
    term = np.eye(2, dtype=complex)
    for n in range(1, order + 1):
        term = term @ m / n
        out = out + term
    for _ in range(k):
        out = out @ out
    return out


def random_hermitian(rng, scale=1.0):
    v = rng.normal(scale=scale, size=4)
    return v[0] * SI + v[1] * SX + v[2] * SY + v[3] * SZ


def model_hamiltonian(theta, phi, A=1.0, r=0.0):
    return 0.5 * A * ((np.cos(theta) + r) * SZ
                      + np.sin(theta) * (np.cos(phi) * SX + np.sin(phi) * SY))


def tracked_eigenvector(theta, phi, r=0.0):
    """Upper eigenvector of the model Hamiltonian, gauge-fixed by hand."""
    w, v = np.linalg.eigh(model_hamiltonian(theta, phi, 1.0, r))
    psi = v[:, np.argmax(w)]
    anchor = psi[0] if abs(psi[0]) > 1e-13 else psi[1]
    return psi * (np.conj(anchor) / abs(anchor))


def finite_difference_qgt(theta, phi, r=0.0, step=1e-5):
    """QGT of the tracked eigenvector by central differences.

    Returns (g_tt, g_pp, g_tp, f_tp) with the curvature sign convention of
    the tracked state, f = 2 Im chi_{theta phi}.
    """
    psi = tracked_eigenvector(theta, phi, r)
    d_th = (tracked_eigenvector(theta + step, phi, r)
            - tracked_eigenvector(theta - step, phi, r)) / (2 * step)
    d_ph = (tracked_eigenvector(theta, phi + step, r)
            - tracked_eigenvector(theta, phi - step, r)) / (2 * step)
    proj = np.eye(2) - np.outer(psi, psi.conj())

    def chi(a, b):
        return np.vdot(a, proj @ b)

    c_tt, c_pp, c_tp = chi(d_th, d_th), chi(d_ph, d_ph), chi(d_th, d_ph)
    return c_tt.real, c_pp.real, c_tp.real, 2.0 * c_tp.imag


def dense_integral(f, a, b, n=200001):
    """Trapezoid integral on a dense uniform grid."""
    x = np.linspace(a, b, n)
    return np.trapezoid(f(x), x)
