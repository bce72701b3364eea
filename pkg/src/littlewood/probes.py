"""Numerical probes of the distributional machinery behind the ensemble.

Covers the covariance structure of P(r e^{i theta}) as a random vector in
the plane, cancellation of weighted trigonometric sums, the Taylor bound
controlling log sigma(r) between nearby radii, Turan's inequality for
sparse exponential sums, empirical CDF distances against the exponential
limit law, and small-ball probabilities of |P| on circles.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import mpmath
import numpy as np

from .poly import LittlewoodPoly, eval_grid, sigma_sq
from .rng import derive_seed, sign_matrix

#: fixed sample block width; keeps Monte Carlo results independent of how
#: blocks are distributed across workers
SAMPLE_BLOCK = 64

#: guard for the closed-form geometric sum near its removable singularity
CLOSED_FORM_GUARD = 1e-8


# ---------------------------------------------------------------------------
# covariance matrices
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CovMatrix2:
    """Covariance of (Re, Im) of P(r e^{i theta}) / sigma(r); trace 1."""

    entries: np.ndarray

    @property
    def dim(self) -> int:
        return 2


@dataclass(frozen=True)
class CovMatrix4:
    """Joint covariance at two angles theta, phi; trace 2."""

    entries: np.ndarray

    @property
    def dim(self) -> int:
        return 4


def covariance2(n: int, r: float, theta: float) -> CovMatrix2:
    """Exact finite-sum covariance of the normalized field at one angle."""
    if n < 1:
        raise ValueError("n must be >= 1")
    k = np.arange(n, dtype=np.float64)
    w = np.power(float(r), 2.0 * k)
    norm = np.sum(w)
    c = np.cos(k * theta)
    s = np.sin(k * theta)
    m = np.array(
        [
            [np.sum(w * c * c), np.sum(w * c * s)],
            [np.sum(w * c * s), np.sum(w * s * s)],
        ]
    ) / norm
    return CovMatrix2(entries=m)


def covariance4(n: int, r: float, theta: float, phi: float) -> CovMatrix4:
    """Exact finite-sum joint covariance at angles theta and phi."""
    if n < 1:
        raise ValueError("n must be >= 1")
    k = np.arange(n, dtype=np.float64)
    w = np.power(float(r), 2.0 * k)
    norm = np.sum(w)
    rows = np.vstack([np.cos(k * theta), np.sin(k * theta), np.cos(k * phi), np.sin(k * phi)])
    m = (rows * w) @ rows.T / norm
    return CovMatrix4(entries=m)


def cov_deviation(V: CovMatrix2 | CovMatrix4) -> float:
    """Max absolute entry of V minus half the identity."""
    m = V.entries
    return float(np.max(np.abs(m - 0.5 * np.eye(m.shape[0]))))


# ---------------------------------------------------------------------------
# weighted trigonometric sums
# ---------------------------------------------------------------------------

def weighted_exp_sum(n: int, r: float, eta: float) -> complex:
    """Direct summation of sum_{k<n} r^(2k) e^(i k eta)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    k = np.arange(n, dtype=np.float64)
    w = np.power(float(r), 2.0 * k)
    return complex(np.sum(w * np.exp(1j * k * eta)))


def weighted_exp_sum_closed(n: int, r: float, eta: float) -> complex:
    """Geometric closed form (1 - r^(2n) e^(i n eta)) / (1 - r^2 e^(i eta)).

    Only valid away from the removable singularity; callers must check
    |1 - r^2 e^(i eta)| > CLOSED_FORM_GUARD.
    """
    den = 1.0 - r * r * np.exp(1j * eta)
    if abs(den) <= CLOSED_FORM_GUARD:
        raise ValueError("closed form unusable near its removable singularity")
    num = 1.0 - r ** (2.0 * n) * np.exp(1j * n * eta)
    return complex(num / den)


def trig_sum(n: int, r: float, eta: float) -> float:
    """Normalized magnitude |sum_k r^(2k) e^(i k eta)| / sigma(r)^2.

    Computed by direct summation; when the geometric closed form is usable
    it is evaluated as an internal cross-check and a disagreement beyond
    1e-6 relative raises, since that indicates an implementation fault.
    """
    direct = weighted_exp_sum(n, r, eta)
    den = 1.0 - r * r * np.exp(1j * eta)
    if abs(den) > CLOSED_FORM_GUARD and np.isfinite(r ** (2.0 * n)):
        closed = weighted_exp_sum_closed(n, r, eta)
        scale = max(1.0, abs(direct))
        if abs(direct - closed) > 1e-6 * scale:
            raise ArithmeticError(
                f"direct and closed-form sums disagree: {direct} vs {closed}"
            )
    return abs(direct) / sigma_sq(n, r)


# ---------------------------------------------------------------------------
# Taylor bound for log sigma between nearby radii
# ---------------------------------------------------------------------------

#: smallest n for which the bound is asserted when tau is coupled to n as
#: tau ~ n^(-11/10); for fixed n the bound must fail as tau -> 0 because the
#: difference quotient tends to (n-1)/2, not n/2
TAYLOR_MIN_N = 2


@dataclass(frozen=True)
class TaylorBoundReport:
    n: int
    tau: float
    lhs: float    # |(log sigma(1+tau) - log sigma(1)) / log(1+tau) - n/2|
    bound: float  # 2 * tau * n^2
    passed: bool
    min_n: int = TAYLOR_MIN_N


def taylor_bound_check(n: int, tau: float, dps: int = 50) -> TaylorBoundReport:
    """Check |(log sigma(1+tau) - log sigma(1))/log(1+tau) - n/2| <= 2 tau n^2.

    Both sides are evaluated with high-precision arithmetic, so the check
    reflects the mathematics rather than double-precision cancellation.
    """
    if not 0 < tau < 1:
        raise ValueError("tau must be in (0, 1)")
    if n < 1:
        raise ValueError("n must be >= 1")
    with mpmath.workdps(dps):
        rp = mpmath.mpf(1) + mpmath.mpf(tau)
        s_hi = mpmath.fsum(rp ** (2 * k) for k in range(n))
        quotient = (mpmath.log(s_hi) / 2 - mpmath.log(n) / 2) / mpmath.log(rp)
        lhs = float(abs(quotient - mpmath.mpf(n) / 2))
    bound = 2.0 * tau * n * n
    return TaylorBoundReport(n=n, tau=float(tau), lhs=lhs, bound=bound, passed=lhs <= bound)


# ---------------------------------------------------------------------------
# Turan's inequality for sparse exponential sums
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TuranReport:
    sup_total: float
    sup_interval: float
    bound_factor: float  # (12 / mu(E))^(h-1)
    rhs: float           # bound_factor * (sup_interval + grid slack)
    grid_slack: float
    passed: bool


def _sup_on_grid(coeffs: np.ndarray, freqs: np.ndarray, lo: float, hi: float, grid: int) -> float:
    # dense grid with one refinement pass around the coarse argmax
    x = np.linspace(lo, hi, grid)
    vals = np.abs(np.exp(1j * np.outer(x, freqs)) @ coeffs)
    best = int(np.argmax(vals))
    h = (hi - lo) / max(grid - 1, 1)
    x2 = np.linspace(max(lo, x[best] - h), min(hi, x[best] + h), grid)
    vals2 = np.abs(np.exp(1j * np.outer(x2, freqs)) @ coeffs)
    return float(max(vals.max(), vals2.max()))


def turan_check(coeffs, freqs, interval: tuple[float, float], grid: int = 4096) -> TuranReport:
    """Check sup|T| <= (12/mu(E))^(h-1) sup_E |T| for T = sum c_l e^(i m_l x).

    ``interval`` is a subinterval E of [-pi, pi]; mu is the normalized
    measure, so mu(E) = |E| / (2 pi). Suprema are estimated on dense grids
    (refined once); the interval supremum is padded by a derivative-based
    slack so grid underestimation cannot produce a spurious failure.
    """
    coeffs = np.asarray(coeffs, dtype=np.complex128)
    freqs = np.asarray(freqs, dtype=np.float64)
    if coeffs.size != freqs.size or coeffs.size == 0:
        raise ValueError("coeffs and freqs must be equal-length and non-empty")
    if len(set(freqs.tolist())) != freqs.size:
        raise ValueError("frequencies must be distinct")
    mags = np.abs(coeffs)
    if np.any(mags < 0.5 - 1e-12) or np.any(mags > 1.0 + 1e-12):
        raise ValueError("coefficient magnitudes must lie in [1/2, 1]")
    lo, hi = float(interval[0]), float(interval[1])
    if not (-math.pi - 1e-12 <= lo < hi <= math.pi + 1e-12):
        raise ValueError("interval must be a non-degenerate subinterval of [-pi, pi]")
    if grid < 2:
        raise ValueError("grid must have at least 2 points")

    h = coeffs.size
    mu_E = (hi - lo) / (2.0 * math.pi)
    factor = (12.0 / mu_E) ** (h - 1)
    sup_total = _sup_on_grid(coeffs, freqs, -math.pi, math.pi, grid)
    sup_interval = _sup_on_grid(coeffs, freqs, lo, hi, grid)
    deriv_bound = float(np.sum(np.abs(coeffs) * np.abs(freqs)))
    slack = deriv_bound * (hi - lo) / max(grid - 1, 1)
    rhs = factor * (sup_interval + slack)
    return TuranReport(
        sup_total=sup_total,
        sup_interval=sup_interval,
        bound_factor=factor,
        rhs=rhs,
        grid_slack=slack,
        passed=sup_total <= rhs,
    )


# ---------------------------------------------------------------------------
# empirical CDF distances against the exponential limit
# ---------------------------------------------------------------------------

def sq_samples_block(
    n: int, r: float, theta: float, seed: int, start: int, stop: int
) -> np.ndarray:
    """|P(r e^{i theta})|^2 / sigma(r)^2 for sample indices [start, stop).

    Sample ``i`` uses the derived seed ``derive_seed(seed, i)``; the result
    depends only on the indices, never on how the range was partitioned.
    """
    v = np.power(float(r), np.arange(n, dtype=np.float64)) * np.exp(
        1j * theta * np.arange(n)
    )
    out = np.empty(stop - start, dtype=np.float64)
    norm = sigma_sq(n, r)
    for b0 in range(start, stop, SAMPLE_BLOCK):
        b1 = min(b0 + SAMPLE_BLOCK, stop)
        seeds = [derive_seed(seed, i) for i in range(b0, b1)]
        signs = sign_matrix(n, seeds).astype(np.float64)
        vals = signs @ v.real + 1j * (signs @ v.imag)
        out[b0 - start : b1 - start] = np.abs(vals) ** 2 / norm
    return out


def kolmogorov_distance_exponential(samples: np.ndarray) -> float:
    """Exact sup distance between the empirical CDF and 1 - e^(-x).

    The supremum of |F_m - F| is attained at a sample point or its left
    limit, so sorting the samples gives the exact value.
    """
    x = np.sort(np.asarray(samples, dtype=np.float64))
    m = x.size
    if m == 0:
        raise ValueError("need at least one sample")
    F = 1.0 - np.exp(-x)
    i = np.arange(1, m + 1)
    return float(max(np.max(F - (i - 1) / m), np.max(i / m - F)))


def clt_regime_ok(n: int, theta: float) -> bool:
    """Whether |theta| >= n^(-1/2), the regime of the exponential limit."""
    return abs(theta) >= n ** -0.5


def cdf_distance(n: int, r: float, theta: float, m: int, seed: int) -> float:
    """Kolmogorov distance of m draws of |P~|^2 from the exponential law.

    Outside the regime |theta| >= n^(-1/2) the computation still runs but a
    warning flags the regime violation.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    if not clt_regime_ok(n, theta):
        warnings.warn(
            f"|theta| = {abs(theta):.3g} < n^(-1/2) = {n**-0.5:.3g}: "
            "outside the exponential-limit regime",
            stacklevel=2,
        )
    vals = sq_samples_block(n, r, theta, seed, 0, m)
    return kolmogorov_distance_exponential(vals)


def cdf_distance2(
    n: int, r: float, theta: float, phi: float, m: int, seed: int
) -> float:
    """Sup distance of the joint empirical CDF from the product law F(x)F(y).

    Samples the pair (|P~(r e^{i theta})|^2, |P~(r e^{i phi})|^2) on common
    coefficient draws; the supremum is taken over the sample-induced grid.
    Regime warnings fire when either angle, or their separation, is below
    n^(-1/2).
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    root = n ** -0.5
    if abs(theta) < root or abs(phi) < root or abs(theta - phi) <= root:
        warnings.warn(
            "angles violate the joint exponential-limit regime "
            f"(threshold n^(-1/2) = {root:.3g})",
            stacklevel=2,
        )
    x = sq_samples_block(n, r, theta, seed, 0, m)
    y = sq_samples_block(n, r, phi, seed, 0, m)
    # ranks give the joint empirical CDF on the sample-induced grid
    xi = np.argsort(np.argsort(x, kind="stable"), kind="stable")
    yi = np.argsort(np.argsort(y, kind="stable"), kind="stable")
    counts = np.zeros((m, m), dtype=np.float64)
    counts[xi, yi] = 1.0
    joint = counts.cumsum(axis=0).cumsum(axis=1) / m
    Fx = 1.0 - np.exp(-np.sort(x))
    Fy = 1.0 - np.exp(-np.sort(y))
    return float(np.max(np.abs(joint - np.outer(Fx, Fy))))


# ---------------------------------------------------------------------------
# small-ball probabilities
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SmallBallEstimate:
    """Monte Carlo estimate of the circle-averaged small-ball probability.

    ``estimate`` is the mean over samples of the per-sample fraction of
    circle nodes where |P| <= a; ``std_error`` is the between-sample
    standard error, which is the honest uncertainty since nodes within one
    sample are correlated. Negating all coefficients leaves |P| unchanged,
    so antithetic pairing over the sign ensemble would be a no-op and is
    not applied.
    """

    a: float
    estimate: float
    std_error: float
    samples: int
    nodes: int


def ball_fraction(p: LittlewoodPoly, r: float, a: float, N: int) -> float:
    """Fraction of N circle nodes where |P| <= a."""
    amps = np.abs(eval_grid(p, r, N).values)
    return float(np.mean(amps <= a))


def small_ball(
    n: int, r: float, a: float, m: int, N: int, seed: int
) -> SmallBallEstimate:
    """Estimate the circle average of P(|P(r e^{i theta})| <= a).

    Requires 0 < a < 1/3 (the level regime of interest); m samples with
    derived per-sample seeds, N circle nodes each.
    """
    if not 0 < a < 1.0 / 3.0:
        raise ValueError("a must lie in (0, 1/3)")
    if m < 1 or N < 1:
        raise ValueError("m and N must be >= 1")
    fracs = small_ball_fractions_block(n, r, a, N, seed, 0, m)
    est = float(np.mean(fracs))
    se = float(np.std(fracs, ddof=1) / math.sqrt(m)) if m > 1 else 0.0
    return SmallBallEstimate(a=float(a), estimate=est, std_error=se, samples=m, nodes=N)


def small_ball_fractions_block(
    n: int, r: float, a: float, N: int, seed: int, start: int, stop: int
) -> np.ndarray:
    """Per-sample node fractions for sample indices [start, stop)."""
    out = np.empty(stop - start, dtype=np.float64)
    for i in range(start, stop):
        p = LittlewoodPoly(sign_matrix(n, [derive_seed(seed, i)])[0])
        out[i - start] = ball_fraction(p, r, a, N)
    return out
