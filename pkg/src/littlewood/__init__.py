"""Numerical laboratory for random sign (Littlewood) polynomials.

Modules
-------
poly    representation, sampling, enumeration, evaluation
roots   simultaneous root finding, disk counts, exact unimodular detection
logint  logarithmic circle integrals, Mahler measure, annulus root counting
probes  covariance matrices, trigonometric sums, CDF and small-ball probes
mc      deterministic parallel Monte Carlo experiment harness
cli     command-line front end
"""

from .poly import LittlewoodPoly, EvalGrid, sample, enumerate_polys, eval_point, eval_grid, sigma_sq, normalized_eval, reverse
from .roots import RootSet, DiskCount, find_roots, count_in_disk, unimodular_roots_exact, verify_residuals
from .logint import LogIntegral, log_integral, mahler, jensen_count, normalized_log_integral
from .mc import ExperimentSpec, RunReport, run, derive_seed

__all__ = [
    "LittlewoodPoly", "EvalGrid", "sample", "enumerate_polys", "eval_point",
    "eval_grid", "sigma_sq", "normalized_eval", "reverse",
    "RootSet", "DiskCount", "find_roots", "count_in_disk",
    "unimodular_roots_exact", "verify_residuals",
    "LogIntegral", "log_integral", "mahler", "jensen_count",
    "normalized_log_integral",
    "ExperimentSpec", "RunReport", "run", "derive_seed",
]

__version__ = "0.1.0"
