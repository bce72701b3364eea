"""Root finding and root counting for sign polynomials.

The primary finder is the Aberth-Ehrlich simultaneous iteration, which is
well suited to the circle-clustered roots of random sign polynomials.
Companion-matrix eigenvalues serve as a low-degree cross-check oracle.
Unimodular roots are detected exactly through integer gcd arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import intpoly
from .poly import LittlewoodPoly, eval_point_accurate

# Initial guesses sit on the unit circle (where the roots cluster) with an
# irrational rotation offset that breaks the sign symmetries of the ensemble.
INIT_ROTATION = 0.377

DEFAULT_TOL = 1e-12
DEFAULT_MAX_ITER = 100
COMPANION_MAX_DEGREE = 64

_PAIR_BLOCK = 512  # row block for the O(d^2) pairwise sums


class ConvergenceError(RuntimeError):
    """An operation required a fully converged root set and did not get one."""


@dataclass(frozen=True)
class RootSet:
    """All degree-many roots with residuals and per-root convergence flags."""

    roots: np.ndarray      # complex128
    residuals: np.ndarray  # |P(root)| recomputed by compensated evaluation
    converged: np.ndarray  # bool
    iterations: int

    @property
    def fully_converged(self) -> bool:
        return bool(np.all(self.converged))

    def to_json_obj(self) -> list[list[float]]:
        """Wire format: array of [re, im, residual] triples."""
        return [
            [float(z.real), float(z.imag), float(res)]
            for z, res in zip(self.roots, self.residuals)
        ]


@dataclass(frozen=True)
class DiskCount:
    """Three-way root split relative to the unit circle.

    ``inside`` counts |root| < 1 - band_eps, ``outside`` counts
    |root| > 1 + band_eps, and ``boundary_band`` the rest. The split makes
    the open-versus-closed disk ambiguity explicit; the symmetrized disk
    statistic ``inside + boundary_band/2`` is invariant under coefficient
    reversal of the ensemble.
    """

    inside: int
    boundary_band: int
    outside: int
    band_eps: float

    @property
    def total(self) -> int:
        return self.inside + self.boundary_band + self.outside

    def disk_statistic(self) -> float:
        return self.inside + 0.5 * self.boundary_band


def _horner_vec(coeffs_desc: np.ndarray, z: np.ndarray) -> np.ndarray:
    acc = np.full(z.shape, coeffs_desc[0], dtype=np.complex128)
    for c in coeffs_desc[1:]:
        acc = acc * z + c
    return acc


def _pairwise_inv_sums(z: np.ndarray) -> np.ndarray:
    """S_j = sum_{k != j} 1/(z_j - z_k), computed in row blocks."""
    d = z.size
    S = np.empty(d, dtype=np.complex128)
    for i0 in range(0, d, _PAIR_BLOCK):
        i1 = min(i0 + _PAIR_BLOCK, d)
        diff = z[i0:i1, None] - z[None, :]
        idx = np.arange(i0, i1)
        diff[idx - i0, idx] = np.inf  # excludes the k == j term
        with np.errstate(divide="ignore", invalid="ignore"):
            S[i0:i1] = np.sum(1.0 / diff, axis=1)
    return S


def _abs_coeff_sum(n: int, t: np.ndarray) -> np.ndarray:
    """sum_{k<n} t**k for an array of non-negative t (all |c_k| = 1)."""
    t = np.asarray(t, dtype=np.float64)
    out = np.empty_like(t)
    near = np.abs(t - 1.0) < 1e-6
    # second-order expansion around t = 1 is ample for a stopping threshold
    dt = t[near] - 1.0
    out[near] = n * (1.0 + 0.5 * (n - 1) * dt)
    tt = t[~near]
    with np.errstate(over="ignore"):
        out[~near] = (tt**n - 1.0) / (tt - 1.0)
    return out


def find_roots(
    p: LittlewoodPoly,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> RootSet:
    """All degree-many complex roots by Aberth-Ehrlich simultaneous iteration.

    Starts from equispaced points on the unit circle rotated by
    ``exp(i * INIT_ROTATION)``. A root is flagged converged when its
    correction drops below ``tol`` (absolute) or its value is at the
    floating-point noise floor of evaluation (which is where iterations on
    clustered or multiple roots stall). One Newton polish step is applied
    at the end. Non-converged roots are reported, never silently accepted.
    """
    d = p.degree
    if d < 1:
        raise ValueError("polynomial must have degree >= 1")
    if tol <= 0:
        raise ValueError("tol must be positive")
    if max_iter < 1:
        raise ValueError("max_iter must be >= 1")
    n = p.n
    c_desc = p.coeffs.astype(np.float64)[::-1]
    dc_desc = (p.coeffs[1:].astype(np.float64) * np.arange(1, n))[::-1]

    j = np.arange(d)
    z = np.exp(1j * (2.0 * np.pi * j / d + INIT_ROTATION))
    converged = np.zeros(d, dtype=bool)
    sweeps = 0
    u = np.finfo(np.float64).eps / 2
    for sweeps in range(1, max_iter + 1):
        pv = _horner_vec(c_desc, z)
        dpv = _horner_vec(dc_desc, z)
        S = _pairwise_inv_sums(z)
        with np.errstate(divide="ignore", invalid="ignore"):
            newton = pv / dpv
            w = newton / (1.0 - newton * S)
        w = np.where(np.isfinite(w), w, 0.0)
        # noise floor: |P(z)| indistinguishable from 0 at working precision
        noise = 4.0 * u * (2 * n - 1) * _abs_coeff_sum(n, np.abs(z))
        converged = (np.abs(w) < tol) | (np.abs(pv) <= noise)
        z = z - w
        if converged.all():
            break
    # one Newton polish step per root
    pv = _horner_vec(c_desc, z)
    dpv = _horner_vec(dc_desc, z)
    with np.errstate(divide="ignore", invalid="ignore"):
        step = pv / dpv
    z = z - np.where(np.isfinite(step), step, 0.0)

    residuals = np.abs(eval_point_accurate(p, z))
    # a converged root must also have its residual below tol * sigma(|root|)
    sigma = np.sqrt(_abs_coeff_sum(n, np.abs(z) ** 2))
    converged = converged & (residuals <= tol * sigma)
    return RootSet(roots=z, residuals=residuals, converged=converged, iterations=sweeps)


def companion_roots(p: LittlewoodPoly) -> np.ndarray:
    """Cross-check oracle: roots via companion-matrix eigenvalues (low degree)."""
    if p.degree < 1:
        raise ValueError("polynomial must have degree >= 1")
    if p.degree > COMPANION_MAX_DEGREE:
        raise ValueError(f"companion path limited to degree <= {COMPANION_MAX_DEGREE}")
    return np.roots(p.coeffs.astype(np.float64)[::-1])


def count_in_disk(rs: RootSet, band_eps: float) -> DiskCount:
    """Classify converged roots as inside / boundary band / outside.

    Refuses non-converged root sets: an unconverged root has no trustworthy
    modulus.
    """
    if band_eps <= 0:
        raise ValueError("band_eps must be positive")
    if not rs.fully_converged:
        raise ConvergenceError(
            f"{int(np.sum(~rs.converged))} root(s) not converged; "
            "refusing to count an untrusted root set"
        )
    mod = np.abs(rs.roots)
    inside = int(np.sum(mod < 1.0 - band_eps))
    outside = int(np.sum(mod > 1.0 + band_eps))
    band = rs.roots.size - inside - outside
    return DiskCount(inside=inside, boundary_band=band, outside=outside, band_eps=float(band_eps))


UNIMODULAR_MOD_TOL = 1e-9


def unimodular_roots_exact(p: LittlewoodPoly) -> int:
    """Number of roots (with multiplicity) of modulus exactly 1.

    Any unimodular root of a real-coefficient P is shared with the reversed
    polynomial z**(n-1) P(1/z), so the candidates are the roots of
    g = gcd(P, reverse(P)), computed exactly over the integers via the
    subresultant remainder sequence. g is decomposed into square-free
    factors (so multiple roots are counted with their exact multiplicity),
    each factor's roots are found numerically, and roots within
    ``UNIMODULAR_MOD_TOL`` of the unit circle are counted.

    Caveat: g may also contain reciprocal root pairs of P that are off the
    circle; the modulus test excludes them.
    """
    f = [int(c) for c in p.coeffs]
    g = intpoly.gcd(f, f[::-1])
    if intpoly.degree(g) < 1:
        return 0
    total = 0
    for factor, mult in intpoly.square_free_decomposition(g):
        if intpoly.degree(factor) < 1:
            continue
        rts = np.roots(np.array(factor[::-1], dtype=np.float64))
        total += mult * int(np.sum(np.abs(np.abs(rts) - 1.0) <= UNIMODULAR_MOD_TOL))
    return total


@dataclass(frozen=True)
class ResidualReport:
    """Diagnostics of a computed root set against its polynomial."""

    max_residual: float
    min_pairwise_distance: float   # coincidence detector for spurious duplicates
    log_moduli_sum_error: float    # |sum log|root||; exact value is 0

    def passed(self, residual_tol: float) -> bool:
        return self.max_residual <= residual_tol


def verify_residuals(p: LittlewoodPoly, rs: RootSet) -> ResidualReport:
    """Independent quality report for a root set.

    Residuals |P(root)| come from compensated Horner evaluation. Since the
    first and last coefficients both have modulus 1, the product of root
    moduli is exactly 1, so ``sum log|root|`` reconstructs to 0; the report
    carries the deviation.
    """
    res = np.abs(eval_point_accurate(p, rs.roots))
    z = rs.roots
    d = z.size
    min_dist = math.inf
    for i0 in range(0, d, _PAIR_BLOCK):
        i1 = min(i0 + _PAIR_BLOCK, d)
        diff = np.abs(z[i0:i1, None] - z[None, :])
        idx = np.arange(i0, i1)
        diff[idx - i0, idx] = np.inf
        if diff.size:
            min_dist = min(min_dist, float(diff.min()))
    log_err = abs(float(np.sum(np.log(np.abs(z)))))
    return ResidualReport(
        max_residual=float(res.max()) if d else 0.0,
        min_pairwise_distance=min_dist,
        log_moduli_sum_error=log_err,
    )
