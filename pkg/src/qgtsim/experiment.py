"""The virtual experiment: state preparation and verification, resonance
sweep and refinement, Rabi-trace acquisition, readout, and shot noise.

Every acquired point follows the same protocol as the hardware sequence:
prepare the tracked eigenstate, evolve under the modulated Hamiltonian
(effective frame by default, lab frame for RWA validation), rotate back
with the inverse preparation unitary, and read the |-1> population.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .drive import ModulationSpec, effective_hamiltonian, lab_hamiltonian
from .dynamics import IntegratorConfig, frame_transform, propagate_sampled
from .errors import InvalidInputError, RefinementError
from .model import StaticParams, eigenstate_angle
from .su2 import SI, SX, SY, SZ, exponentiate, require_state

EFFECTIVE_STEPS_PER_PERIOD = 256
LAB_STEPS_PER_PERIOD = 64


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything needed to run one virtual acquisition."""

    params: StaticParams
    spec: ModulationSpec
    frame: str = "effective"
    omega0: float | None = None      # carrier, rad/s; required in the lab frame
    T_probe: float = 400e-9          # sweep probe duration, s
    shots: int | None = None         # None -> noiseless expectation values
    seed: int = 0
    integrator: IntegratorConfig | None = None

    def __post_init__(self):
        if self.frame not in ("effective", "lab"):
            raise InvalidInputError("frame must be 'effective' or 'lab'")
        if self.frame == "lab" and self.omega0 is None:
            raise InvalidInputError("lab frame needs omega0")
        if not (np.isfinite(self.T_probe) and self.T_probe > 0):
            raise InvalidInputError("T_probe must be positive")
        if self.shots is not None and self.shots < 100:
            raise InvalidInputError("shots must be >= 100 when set")


@dataclass(frozen=True)
class ResonanceScan:
    omega_grid: np.ndarray
    p0: np.ndarray

    def __post_init__(self):
        if len(self.omega_grid) != len(self.p0):
            raise InvalidInputError("omega grid and p0 lengths differ")
        if np.any(self.p0 < -1e-12) or np.any(self.p0 > 1 + 1e-12):
            raise InvalidInputError("p0 out of [0, 1]")


@dataclass(frozen=True)
class RabiTrace:
    times: np.ndarray
    p0: np.ndarray

    def __post_init__(self):
        if len(self.times) != len(self.p0):
            raise InvalidInputError("times and p0 lengths differ")
        if np.any(np.diff(self.times) <= 0):
            raise InvalidInputError("times must be strictly increasing")
        if np.any(self.p0 < -1e-12) or np.any(self.p0 > 1 + 1e-12):
            raise InvalidInputError("p0 out of [0, 1]")

    @property
    def span(self):
        return float(self.times[-1] - self.times[0])


def preparation_unitary(params: StaticParams):
    """Rotation taking |-1> to the tracked eigenstate of H(theta0, phi0; r)."""
    th = eigenstate_angle(params.theta0, params.r)
    axis = params.phi0 + np.pi / 2
    n_sigma = np.cos(axis) * SX + np.sin(axis) * SY
    return np.cos(th / 2) * SI - 1j * np.sin(th / 2) * n_sigma


def prepare_state(params: StaticParams):
    """Tracked eigenstate cos(th'/2)|-1> + sin(th'/2) e^{i phi0}|0>."""
    th = eigenstate_angle(params.theta0, params.r)
    return np.array([np.cos(th / 2),
                     np.sin(th / 2) * np.exp(1j * params.phi0)], dtype=complex)


def prepare_state_pulsed(params: StaticParams, omega0, omega_prep,
                         cfg: IntegratorConfig | None = None):
    """Lab-frame preparation: resonant pulse from |0>, then frame rotation.

    Drives Omega_prep * sin(omega0 t + phi0) sx for a duration
    (pi - theta')/Omega_prep, which rotates |0> onto the tracked eigenstate
    up to O((Omega_prep/omega0)^2) rotating-wave corrections.
    """
    if not (0 < omega_prep < omega0):
        raise InvalidInputError("need 0 < omega_prep < omega0")
    th = eigenstate_angle(params.theta0, params.r)
    tau = (np.pi - th) / omega_prep

    def h(ts):
        v = omega_prep * np.sin(omega0 * ts + params.phi0)
        return 0.5 * omega0 * SZ + v[..., None, None] * SX

    cfg = cfg or IntegratorConfig(steps_per_fastest_period=LAB_STEPS_PER_PERIOD)
    psi0 = np.array([0, 1], dtype=complex)
    psi = propagate_sampled(h, psi0, [tau], cfg,
                            fastest_period=2 * np.pi / omega0)[-1]
    alpha = 0.5 * omega0 * tau
    return np.array([np.exp(1j * alpha), np.exp(-1j * alpha)]) * psi


def readout(psi_T, params: StaticParams):
    """Probability of remaining in the tracked eigenstate.

    Applies the inverse preparation rotation (the 2*pi - theta' rotation up
    to a global phase) and returns the |-1> population.
    """
    psi_T = require_state(psi_T)
    u = preparation_unitary(params)
    mapped = np.conj(u.T) @ psi_T
    return float(min(1.0, abs(mapped[0]) ** 2))


def verify_preparation(psi0, params: StaticParams, duration, n_samples=64):
    """Survival probability |<psi(t)|psi(0)>|^2 under the static Hamiltonian.

    Flat at 1 for a true eigenstate (spin-locking check); any admixture of
    the other eigenstate oscillates at the spectral gap.
    """
    psi0 = require_state(psi0)
    from .model import hamiltonian
    h = hamiltonian(params.theta0, params.phi0, params.A, params.r)
    if duration == 0 or n_samples == 1:
        return RabiTrace(times=np.array([0.0]), p0=np.array([1.0]))
    times = np.linspace(0.0, duration, n_samples)
    # constant H: one exact exponential per sample
    us = exponentiate(h, times)
    ps = np.abs(np.einsum("i,tij,j->t", np.conj(psi0), us, psi0)) ** 2
    return RabiTrace(times=times, p0=np.clip(ps, 0.0, 1.0))


def _hamiltonian_source(cfg: ExperimentConfig, spec: ModulationSpec):
    if cfg.frame == "effective":
        return (lambda ts: effective_hamiltonian(spec, cfg.params, ts),
                spec.period)
    return (lambda ts: lab_hamiltonian(spec, cfg.params, cfg.omega0, ts),
            2 * np.pi / cfg.omega0)


def _integrator(cfg: ExperimentConfig):
    if cfg.integrator is not None:
        return cfg.integrator
    steps = EFFECTIVE_STEPS_PER_PERIOD if cfg.frame == "effective" else LAB_STEPS_PER_PERIOD
    return IntegratorConfig(steps_per_fastest_period=steps)


def _acquire(cfg: ExperimentConfig, spec: ModulationSpec, times):
    """Noiseless protocol probabilities at the requested times."""
    h, fastest = _hamiltonian_source(cfg, spec)
    psi0 = prepare_state(cfg.params)
    states = propagate_sampled(h, psi0, times, _integrator(cfg), fastest_period=fastest)
    if cfg.frame == "lab":
        states = np.array([frame_transform(s, t, cfg.params, spec, cfg.omega0)
                           for s, t in zip(states, times)])
    return np.array([readout(s, cfg.params) for s in states])


def _sample_shots(p, shots, seed, first_index=0):
    if shots is None:
        return p
    out = np.empty_like(p)
    for i, pi in enumerate(p):
        rng = np.random.default_rng((int(seed), int(first_index + i)))
        out[i] = rng.binomial(shots, min(max(pi, 0.0), 1.0)) / shots
    return out


def resonance_sweep(cfg: ExperimentConfig, omega_grid, threads=1):
    """p0(T_probe) for each modulation frequency in the sorted grid."""
    omega_grid = np.asarray(omega_grid, dtype=float)
    if np.any(np.diff(omega_grid) <= 0):
        raise InvalidInputError("omega grid must be sorted and strictly increasing")

    def one(i):
        spec_i = replace(cfg.spec, omega=float(omega_grid[i]))
        try:
            return _acquire(cfg, spec_i, np.array([cfg.T_probe]))[0]
        except Exception as exc:
            raise type(exc)(f"sweep point omega={omega_grid[i]!r}: {exc}") from exc

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            p = np.array(list(pool.map(one, range(omega_grid.size))))
    else:
        p = np.array([one(i) for i in range(omega_grid.size)])
    return ResonanceScan(omega_grid=omega_grid, p0=_sample_shots(p, cfg.shots, cfg.seed))


def rabi_experiment(cfg: ExperimentConfig, omega_res, t_grid):
    """Protocol Rabi trace at fixed modulation frequency omega_res."""
    t_grid = np.asarray(t_grid, dtype=float)
    if np.any(np.diff(t_grid) <= 0):
        raise InvalidInputError("t_grid must be strictly increasing")
    spec = replace(cfg.spec, omega=float(omega_res))
    p = _acquire(cfg, spec, t_grid)
    return RabiTrace(times=t_grid, p0=_sample_shots(p, cfg.shots, cfg.seed))


def _trace_contrast(cfg, omega, n_periods, n_points, omega_rabi_hint):
    from .extract import fit_rabi
    span = n_periods * 2 * np.pi / omega_rabi_hint
    t_grid = np.linspace(span / n_points, span, n_points)
    trace = rabi_experiment(cfg, omega, t_grid)
    try:
        return fit_rabi(trace).contrast
    except Exception:
        return 0.0


def refine_resonance(cfg: ExperimentConfig, omega_guess, rel_tol=1e-4,
                     bracket_halfwidth=0.1, n_prescan=7,
                     n_periods=4.0, n_points=96):
    """Maximize fitted Rabi contrast over omega by golden-section search.

    The guess must be within ~10% of the true resonance.  A coarse prescan
    over the bracket locates the lobe; if the prescan maximum sits at a
    bracket edge the contrast is not unimodal inside it and refinement
    fails (the caller should widen its sweep).  Tolerance is relative.
    """
    from .floquet import predict_rabi
    hint = predict_rabi(cfg.spec, cfg.params)
    if hint <= 0:
        raise RefinementError("modulation produces no transition to refine on")

    def contrast(w):
        return _trace_contrast(cfg, w, n_periods, n_points, hint)

    lo = omega_guess * (1 - bracket_halfwidth)
    hi = omega_guess * (1 + bracket_halfwidth)
    grid = np.linspace(lo, hi, n_prescan)
    vals = np.array([contrast(w) for w in grid])
    k = int(np.argmax(vals))
    if k == 0 or k == n_prescan - 1:
        raise RefinementError(
            "contrast maximum at bracket edge; widen the sweep before refining")
    a, b = grid[k - 1], grid[k + 1]

    invphi = (np.sqrt(5.0) - 1.0) / 2.0
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = contrast(c), contrast(d)
    while (b - a) > rel_tol * omega_guess:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = contrast(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = contrast(d)
    return float(0.5 * (a + b))
