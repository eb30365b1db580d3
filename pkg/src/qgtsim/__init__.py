"""qgtsim: quantum-geometry measurement of a driven two-level system,
simulated end to end.

A numpy/scipy toolkit that reproduces the full protocol for extracting the
quantum geometric tensor (Fubini-Study metric + Berry curvature) of a
two-level system from Rabi oscillations under parametric modulation,
including the topological transition diagnosed via the Chern number.
"""
__version__ = "0.1.0"

from .defaults import A_DEFAULT, OMEGA0_DEFAULT
from .drive import DriveSample, ModulationSpec, trajectory
from .dynamics import IntegratorConfig, frame_transform, propagate, propagate_sampled
from .experiment import (ExperimentConfig, RabiTrace, ResonanceScan,
                         prepare_state, rabi_experiment, readout,
                         refine_resonance, resonance_sweep, verify_preparation)
from .extract import (CurvaturePoint, QGTEstimate, RabiFit, curvature,
                      curvature_scan, fit_rabi, measure_qgt, metric_diagonal,
                      metric_offdiag, qgt_scan)
from .floquet import (FourierBlocks, fourier_blocks, predict_rabi,
                      predict_resonance, rwa_reduce)
from .model import (ChernResult, QGTComponents, StaticParams, analytic_qgt,
                    chern_from_curvature, chern_from_metric, eigenstate_angle,
                    gap_frequency, hamiltonian)
from .su2 import EigenSystem, eigensystem, exponentiate, fidelity

__all__ = [
    "A_DEFAULT", "OMEGA0_DEFAULT", "ChernResult", "CurvaturePoint",
    "DriveSample", "EigenSystem", "ExperimentConfig", "FourierBlocks",
    "IntegratorConfig", "ModulationSpec", "QGTComponents", "QGTEstimate",
    "RabiFit", "RabiTrace", "ResonanceScan", "StaticParams", "analytic_qgt",
    "chern_from_curvature", "chern_from_metric", "curvature", "curvature_scan",
    "eigenstate_angle", "eigensystem", "exponentiate", "fidelity",
    "fourier_blocks", "frame_transform", "gap_frequency", "hamiltonian",
    "measure_qgt", "metric_diagonal", "metric_offdiag", "predict_rabi",
    "predict_resonance", "prepare_state", "propagate", "propagate_sampled",
    "qgt_scan", "rabi_experiment", "readout", "refine_resonance",
    "resonance_sweep", "rwa_reduce", "trajectory", "verify_preparation",
    "fit_rabi",
]
