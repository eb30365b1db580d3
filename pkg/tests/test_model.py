import numpy as np
import pytest

from qgtsim.errors import CoverageError, InvalidInputError, SingularityError
from qgtsim.model import (StaticParams, analytic_qgt, chern_from_curvature,
                          chern_from_metric, eigenstate_angle, gap_frequency,
                          hamiltonian)
from qgtsim.su2 import SX, eigensystem

from oracles import finite_difference_qgt


def test_hamiltonian_sigma_x_point():
    np.testing.assert_allclose(hamiltonian(np.pi / 2, 0.0, 2.0), SX, atol=1e-15)


def test_hamiltonian_diagonal_with_offset():
    # cos(pi) + 0.5 = -0.5 on the diagonal
    h = hamiltonian(np.pi, 0.0, 2.0, 0.5)
    np.testing.assert_allclose(h, np.diag([-0.5, 0.5]), atol=1e-15)


def test_hamiltonian_energies_match_closed_form_gap():
    rng = np.random.default_rng(21)
    for _ in range(20):
        theta = rng.uniform(0, np.pi)
        r = rng.uniform(0, 2)
        if 1 + r * r + 2 * r * np.cos(theta) < 1e-3:
            continue
        es = eigensystem(hamiltonian(theta, rng.uniform(0, 2 * np.pi), 1.0, r))
        gap = gap_frequency(theta, r, 1.0)
        assert es.e_plus == pytest.approx(gap / 2, rel=1e-12)
        assert es.e_minus == pytest.approx(-gap / 2, rel=1e-12)


def test_hamiltonian_rejects_non_finite():
    with pytest.raises(InvalidInputError):
        hamiltonian(np.nan, 0.0, 1.0)
    with pytest.raises(InvalidInputError):
        hamiltonian(0.0, 0.0, -1.0)


def test_analytic_qgt_sphere_point():
    g = analytic_qgt(np.pi / 2, 0.0)
    assert (g.g_tt, g.g_pp, g.g_tp, g.f_tp) == pytest.approx((0.25, 0.25, 0.0, 0.5))


def test_analytic_qgt_reduces_to_sphere_at_r_zero():
    for theta in np.linspace(0.05, np.pi - 0.05, 15):
        g = analytic_qgt(theta, 0.0)
        assert g.g_tt == pytest.approx(0.25, abs=1e-14)
        assert g.g_pp == pytest.approx(np.sin(theta) ** 2 / 4, abs=1e-14)
        assert g.f_tp == pytest.approx(np.sin(theta) / 2, abs=1e-14)


def test_analytic_qgt_offset_values():
    g = analytic_qgt(np.pi, 0.5)
    assert g.g_tt == pytest.approx((1 - 0.5) ** 2 / (4 * 0.25 ** 2))
    assert g.f_tp == pytest.approx(0.0, abs=1e-15)
    g2 = analytic_qgt(np.pi / 2, 0.5)
    assert g2.g_pp == pytest.approx(1 / (4 * 1.25))
    assert g2.f_tp == pytest.approx(1 / (2 * 1.25 ** 1.5))


def test_analytic_qgt_raises_at_degeneracy():
    with pytest.raises(SingularityError):
        analytic_qgt(np.pi, 1.0)


def test_analytic_qgt_matches_finite_difference_definition():
    # overlap-projector definition applied to the gauge-fixed tracked state
    rng = np.random.default_rng(22)
    for r in (0.0, 0.3, 0.7, 1.3):
        for theta in np.linspace(0.1, np.pi - 0.1, 11):
            phi = rng.uniform(0, 2 * np.pi)
            g = analytic_qgt(theta, r)
            g_tt, g_pp, g_tp, f_tp = finite_difference_qgt(theta, phi, r)
            assert g.g_tt == pytest.approx(g_tt, abs=1e-6)
            assert g.g_pp == pytest.approx(g_pp, abs=1e-6)
            assert g.g_tp == pytest.approx(g_tp, abs=1e-6)
            assert g.f_tp == pytest.approx(f_tp, abs=1e-6)


def test_metric_determinant_nonnegative():
    for r in (0.0, 0.5, 1.5):
        for theta in np.linspace(0.01, np.pi - 0.01, 25):
            assert analytic_qgt(theta, r).det_metric >= -1e-12


def test_monopole_identity_at_r_zero():
    # 2*sqrt(det g) equals |F| identically on the sphere
    for theta in np.linspace(0.0, np.pi, 181):
        g = analytic_qgt(theta, 0.0)
        assert 2 * np.sqrt(max(g.det_metric, 0.0)) == pytest.approx(abs(g.f_tp),
                                                                    abs=1e-10)


def test_eigenstate_angle_identity_at_r_zero():
    for theta in np.linspace(0, np.pi, 21):
        assert eigenstate_angle(theta, 0.0) == pytest.approx(theta, abs=1e-12)


def test_eigenstate_angle_offset_values():
    assert eigenstate_angle(np.pi / 2, 0.5) == pytest.approx(
        np.arccos(0.5 / np.sqrt(1.25)), rel=1e-12)
    assert eigenstate_angle(np.pi, 1.5) == pytest.approx(0.0, abs=1e-7)


def test_eigenstate_angle_raises_at_degeneracy():
    with pytest.raises(SingularityError):
        eigenstate_angle(np.pi, 1.0)


def test_chern_from_exact_curvature_sample():
    theta = np.linspace(0.0, np.pi, 181)
    c = chern_from_curvature(theta, np.sin(theta) / 2)
    assert c.value == pytest.approx(1.0, abs=1e-6)
    assert c.rule == "composite-simpson"
    assert c.n_points == 181


def test_chern_classification_across_transition():
    theta = np.linspace(0.0, np.pi, 361)
    for r, expected in [(0.0, 1), (0.25, 1), (0.5, 1), (0.75, 1),
                        (1.25, 0), (1.5, 0), (2.0, 0)]:
        f = np.array([analytic_qgt(t, r).f_tp if 0 < t < np.pi else 0.0
                      for t in theta])
        c = chern_from_curvature(theta, f)
        assert round(c.value) == expected
        tol = 1e-4 if r in (0.5, 1.5) else 2e-3
        assert c.value == pytest.approx(expected, abs=tol)


def test_chern_single_point_grid_rejected():
    with pytest.raises(CoverageError):
        chern_from_curvature(np.array([1.0]), np.array([0.5]))


def test_chern_requires_full_coverage():
    theta = np.linspace(0.1, np.pi, 181)
    with pytest.raises(CoverageError):
        chern_from_curvature(theta, np.sin(theta))


def test_chern_requires_odd_uniform_grid():
    theta = np.linspace(0.0, np.pi, 180)
    with pytest.raises(CoverageError):
        chern_from_curvature(theta, np.sin(theta))
    bent = np.concatenate([np.linspace(0, 1, 90, endpoint=False),
                           np.linspace(1, np.pi, 91)])
    with pytest.raises(CoverageError):
        chern_from_curvature(bent, np.sin(bent))


def test_chern_from_metric_values():
    theta = np.linspace(0.0, np.pi, 361)

    def comps(r):
        g = [analytic_qgt(t, r) if 0 < t < np.pi else None for t in theta]
        g_tt = np.array([0.0 if x is None else x.g_tt for x in g])
        g_pp = np.array([0.0 if x is None else x.g_pp for x in g])
        g_tp = np.array([0.0 if x is None else x.g_tp for x in g])
        return g_tt, g_pp, g_tp

    assert chern_from_metric(theta, *comps(0.0)).value == pytest.approx(1.0, abs=1e-4)
    assert chern_from_metric(theta, *comps(0.5)).value == pytest.approx(1.0, abs=1e-3)
    # in the trivial phase the metric integral no longer measures the Chern
    # number: it integrates |F| and stays visibly nonzero
    assert chern_from_metric(theta, *comps(1.5)).value > 0.2


def test_static_params_validation():
    with pytest.raises(InvalidInputError):
        StaticParams(A=-1.0, theta0=0.5)
    with pytest.raises(InvalidInputError):
        StaticParams(A=1.0, theta0=4.0)
    with pytest.raises(InvalidInputError):
        StaticParams(A=1.0, theta0=0.5, phi0=7.0)
    with pytest.raises(InvalidInputError):
        StaticParams(A=1.0, theta0=0.5, r=-0.1)
