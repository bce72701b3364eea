"""Logarithmic circle integrals, Mahler measure, and annulus root counting.

The central quantity is the average of log|P| over a circle of radius r
against the normalized angular measure. For a polynomial with unit leading
coefficient the average at r = 1 is the log of the Mahler measure, i.e. the
log of the product of max(1, |root|) over all roots. Differences of the
average between two radii count roots in the annulus (Jensen's formula),
which gives a root counter that needs no root finding.

Quadrature is the uniform trapezoid rule on the circle: spectrally accurate
for smooth integrands, with the integrable log singularities handled either
by a truncation floor or by excluding numerically vanishing nodes. Every
result carries the change observed on one internal node doubling as its
error estimate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .poly import LittlewoodPoly, eval_grid, sigma_sq
from .roots import ConvergenceError, find_roots

#: a node counts as an exact zero when |P| falls below this multiple of the
#: evaluation noise floor; genuine non-root values on random circles sit many
#: orders of magnitude higher
_ZERO_NOISE_FACTOR = 64.0


def default_nodes(n: int) -> int:
    """Default quadrature resolution: max(8192, 8n) rounded up to a power of 2."""
    N = max(8192, 8 * n)
    return 1 << (N - 1).bit_length()


def default_floor(n: int) -> float:
    """Default truncation level 1/n for the log integrand."""
    return 1.0 / n


@dataclass(frozen=True)
class LogIntegral:
    """Circle average of log|P| with quadrature metadata.

    ``value`` is the mean over ``nodes`` equispaced circle points of
    ``log(max(|P|, floor))``. With ``floor == 0`` nodes where |P| vanishes
    (to evaluation precision) are excluded from the mean and counted in
    ``singular_nodes``; with a positive floor, ``singular_nodes`` counts the
    clamped nodes. ``refinement_delta`` is the change of ``value`` upon
    doubling the node count, recorded from an actual doubling pass.
    """

    value: float
    radius: float
    nodes: int
    floor: float
    singular_nodes: int
    refinement_delta: float


def _zero_threshold(p: LittlewoodPoly, r: float) -> float:
    # evaluation noise bound ~ 2n * eps * sum_k r^k (all |c_k| = 1)
    n = p.n
    eps = np.finfo(np.float64).eps
    coeff_sum = sigma_sq(n, math.sqrt(r))
    return _ZERO_NOISE_FACTOR * eps * 2 * n * coeff_sum


def _mean_log(amps: np.ndarray, floor: float, zero_tol: float) -> tuple[float, int]:
    if floor > 0.0:
        clamped = int(np.sum(amps < floor))
        return float(np.mean(np.log(np.maximum(amps, floor)))), clamped
    mask = amps > zero_tol
    singular = int(amps.size - np.sum(mask))
    if not np.any(mask):
        raise ArithmeticError("all quadrature nodes are numerically zero")
    return float(np.mean(np.log(amps[mask]))), singular


def log_integral(
    p: LittlewoodPoly,
    r: float,
    N: int | None = None,
    floor: float | None = None,
) -> LogIntegral:
    """Mean of log(max(|P|, floor)) over N equispaced points on radius r.

    Requires N >= 4n so the circle oscillations of P are resolved. With
    ``floor=None`` the default truncation 1/n is used; pass ``floor=0.0``
    for the untruncated integrand with exact-zero node exclusion.
    """
    n = p.n
    if N is None:
        N = default_nodes(n)
    if floor is None:
        floor = default_floor(n)
    if N < 4 * n:
        raise ValueError(f"N must be >= 4n = {4 * n} (got {N})")
    if floor < 0:
        raise ValueError("floor must be non-negative")
    if r <= 0:
        raise ValueError("radius must be positive")

    # one grid at 2N serves both resolutions: its even-index nodes are
    # exactly the N-point grid
    fine = np.abs(eval_grid(p, r, 2 * N).values)
    ztol = _zero_threshold(p, r)
    value, singular = _mean_log(fine[::2], floor, ztol)
    refined, _ = _mean_log(fine, floor, ztol)
    return LogIntegral(
        value=value,
        radius=float(r),
        nodes=N,
        floor=float(floor),
        singular_nodes=singular,
        refinement_delta=refined - value,
    )


@dataclass(frozen=True)
class MahlerPair:
    """Mahler measure computed two independent ways.

    ``from_quadrature`` exponentiates the circle average of log|P| at r = 1;
    ``from_roots`` multiplies max(1, |root|) over all roots (None when the
    root path was not requested). The leading coefficient has modulus 1, so
    no monic normalization is needed.
    """

    from_quadrature: float
    from_roots: float | None

    def relative_gap(self) -> float:
        if self.from_roots is None or self.from_roots == 0:
            return math.nan
        return abs(self.from_quadrature - self.from_roots) / self.from_roots


def mahler(p: LittlewoodPoly, N: int | None = None, with_roots: bool = True) -> MahlerPair:
    """Mahler measure by quadrature, cross-checked by the root product.

    The quadrature path uses the untruncated integrand (floor = 0) with
    exact-zero nodes excluded. The root path requires full convergence of
    the root finder and raises ``ConvergenceError`` otherwise.
    """
    li = log_integral(p, 1.0, N=N, floor=0.0)
    from_quadrature = math.exp(li.value)
    from_roots = None
    if with_roots:
        if p.degree == 0:
            from_roots = 1.0
        else:
            rs = find_roots(p)
            if not rs.fully_converged:
                raise ConvergenceError("root finder did not converge; no cross-check")
            from_roots = float(np.prod(np.maximum(1.0, np.abs(rs.roots))))
    return MahlerPair(from_quadrature=from_quadrature, from_roots=from_roots)


def jensen_count(
    p: LittlewoodPoly,
    r_lo: float,
    r_hi: float,
    N: int | None = None,
) -> float:
    """Radially averaged root count of the disk, without root finding.

    Returns (L(r_hi) - L(r_lo)) / log(r_hi / r_lo) where L(r) is the circle
    average of log|P| at radius r. By Jensen's formula this lies between the
    root counts of the two disks, and equals the common count when the open
    annulus contains no roots. P(0) never vanishes here since |c_0| = 1.
    """
    if not (0 < r_lo < r_hi):
        raise ValueError("radii must satisfy 0 < r_lo < r_hi")
    hi = log_integral(p, r_hi, N=N, floor=0.0)
    lo = log_integral(p, r_lo, N=N, floor=0.0)
    return (hi.value - lo.value) / math.log(r_hi / r_lo)


def normalized_log_integral(
    p: LittlewoodPoly,
    r: float,
    N: int | None = None,
    floor: float | None = None,
) -> float:
    """Circle average of log(|P| / sigma(r)): the concentration statistic.

    For large n this concentrates at -gamma/2 where gamma is Euler's
    constant; at r = 1 it equals log(M(P) / sqrt(n)) with M the (floored)
    Mahler measure.
    """
    li = log_integral(p, r, N=N, floor=floor)
    return li.value - 0.5 * math.log(sigma_sq(p.n, r))
