"""Sign polynomials: representation, sampling, enumeration, evaluation.

A sign polynomial of length ``n`` is ``P(z) = sum_{k=0}^{n-1} c_k z^k`` with
every ``c_k`` in {-1, +1}. The deterministic variance normalizer is
``sigma_sq(n, r) = sum_k r^(2k)``, the second moment of ``P(r e^{i theta})``
over random signs; ``sigma_sq(n, 1) = n``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .rng import sign_matrix, sign_vector

# |r^2 - 1| below this: the closed form for sigma_sq cancels catastrophically,
# sum the series directly instead (removable singularity at r = 1).
SIGMA_DIRECT_BAND = 1e-8

ENUMERATE_MAX_N = 24


@dataclass(frozen=True)
class LittlewoodPoly:
    """Coefficient sign sequence; ``coeffs[k]`` multiplies ``z**k``.

    Stored as read-only int8. Length ``n >= 1``; the polynomial degree is
    ``n - 1``.
    """

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=np.int8, copy=True)
        if c.ndim != 1 or c.size < 1:
            raise ValueError("coefficient sequence must be 1-D and non-empty")
        if not np.all(np.abs(c) == 1):
            raise ValueError("coefficients must be -1 or +1")
        c.flags.writeable = False
        object.__setattr__(self, "coeffs", c)

    @property
    def n(self) -> int:
        return int(self.coeffs.size)

    @property
    def degree(self) -> int:
        return self.n - 1

    def to_signs(self) -> str:
        """Compact '+'/'-' string, index 0 first (the wire format)."""
        return "".join("+" if c > 0 else "-" for c in self.coeffs)

    @classmethod
    def from_signs(cls, text: str) -> "LittlewoodPoly":
        if not text or any(ch not in "+-" for ch in text):
            raise ValueError("sign string must be non-empty and contain only '+' and '-'")
        return cls(np.array([1 if ch == "+" else -1 for ch in text], dtype=np.int8))

    def __repr__(self) -> str:
        return f"LittlewoodPoly({self.to_signs()!r})"


@dataclass(frozen=True)
class EvalGrid:
    """Values of P on the circle of ``radius``: ``values[j] = P(r e^{2 pi i j / N})``."""

    radius: float
    node_count: int
    values: np.ndarray


def sample(n: int, seed: int) -> LittlewoodPoly:
    """Draw a uniformly random length-``n`` sign sequence, keyed by ``seed``.

    Pure function of ``(n, seed)``: identical inputs give identical output on
    every platform. Over varying seeds each coordinate is an independent
    fair sign.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    return LittlewoodPoly(sign_vector(n, seed))


def sample_batch(n: int, seeds) -> np.ndarray:
    """Sign rows for many seeds at once; row i equals ``sample(n, seeds[i])``."""
    return sign_matrix(n, seeds)


def pattern_from_index(n: int, g: int) -> LittlewoodPoly:
    """Pattern ``g`` (0 <= g < 2**n) in the lexicographic enumeration order."""
    if not 1 <= n <= ENUMERATE_MAX_N:
        raise ValueError(f"n must be in [1, {ENUMERATE_MAX_N}]")
    if not 0 <= g < (1 << n):
        raise ValueError("pattern index out of range")
    bits = (g >> np.arange(n - 1, -1, -1)) & 1
    return LittlewoodPoly((2 * bits - 1).astype(np.int8))


def enumerate_polys(n: int) -> Iterator[LittlewoodPoly]:
    """Yield all 2**n sign patterns of length ``n``, lexicographic order.

    Ordering treats -1 < +1 and compares index 0 first, so the all-minus
    pattern comes first. Bounded at n <= 24 to keep full enumeration sane.
    """
    if not 1 <= n <= ENUMERATE_MAX_N:
        raise ValueError(f"n must be in [1, {ENUMERATE_MAX_N}]")
    for g in range(1 << n):
        yield pattern_from_index(n, g)


def eval_point(p: LittlewoodPoly, z: complex) -> complex:
    """Horner evaluation of P at a point (or numpy array of points)."""
    z = np.asarray(z, dtype=np.complex128)
    c = p.coeffs
    acc = np.full(z.shape, complex(c[-1]), dtype=np.complex128)
    for k in range(p.n - 2, -1, -1):
        acc = acc * z + complex(c[k])
    return complex(acc) if acc.ndim == 0 else acc


def eval_grid(p: LittlewoodPoly, r: float, N: int) -> EvalGrid:
    """Evaluate P at the N-th roots of unity scaled by ``r``.

    Uses a zero-padded inverse transform of the radius-scaled coefficients
    (coefficient k scaled by r**k); for N < n the scaled coefficients are
    folded modulo N first, which is exact in exact arithmetic. Node values
    agree with ``eval_point`` to within the backward error of evaluation.
    """
    if N < 1:
        raise ValueError("node count must be >= 1")
    if r <= 0:
        raise ValueError("radius must be positive")
    n = p.n
    scaled = p.coeffs * np.power(float(r), np.arange(n, dtype=np.float64))
    if not np.all(np.isfinite(scaled)):
        raise OverflowError("r**k overflows double precision for this degree")
    if N >= n:
        vals = np.fft.ifft(scaled, n=N) * N
    else:
        folded = np.bincount(np.arange(n) % N, weights=scaled, minlength=N)
        vals = np.fft.ifft(folded) * N
    return EvalGrid(radius=float(r), node_count=N, values=vals)


def sigma_sq(n: int, r: float) -> float:
    """Variance normalizer ``sum_{k=0}^{n-1} r**(2k)``; equals n at r = 1.

    Evaluated by the closed form (r**(2n) - 1) / (r**2 - 1) away from r = 1
    and by direct summation inside ``|r**2 - 1| <= SIGMA_DIRECT_BAND`` where
    the closed form cancels.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if r < 0:
        raise ValueError("r must be non-negative")
    r = float(r)
    if abs(r * r - 1.0) <= SIGMA_DIRECT_BAND:
        return float(np.sum(np.power(r, 2.0 * np.arange(n))))
    # expm1 keeps the numerator accurate near (but outside) the direct band;
    # (r-1)(r+1) avoids the cancellation of r*r - 1.
    if r == 0.0:
        return 1.0
    num = math.expm1(2.0 * n * math.log(r))
    den = (r - 1.0) * (r + 1.0)
    return num / den


def normalized_eval(p: LittlewoodPoly, z: complex) -> complex:
    """P(z) / sigma(|z|), so the second moment over random signs is 1."""
    return eval_point(p, z) / math.sqrt(sigma_sq(p.n, abs(z)))


def reverse(p: LittlewoodPoly) -> LittlewoodPoly:
    """Coefficient reversal z**(n-1) * P(1/z); roots map to reciprocals."""
    return LittlewoodPoly(p.coeffs[::-1])


# ---------------------------------------------------------------------------
# Compensated evaluation (error-free transformations, no FMA required)
# ---------------------------------------------------------------------------

_SPLITTER = 134217729.0  # 2**27 + 1, Dekker splitting constant


def _two_sum(a, b):
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def _two_prod(a, b):
    p = a * b
    ca = _SPLITTER * a
    ah = ca - (ca - a)
    al = a - ah
    cb = _SPLITTER * b
    bh = cb - (cb - b)
    bl = b - bh
    return p, al * bl - (((p - ah * bh) - al * bh) - ah * bl)


def eval_point_accurate(p: LittlewoodPoly, z) -> complex:
    """Compensated Horner evaluation of P at complex point(s).

    Tracks the rounding error of every multiply-add with error-free
    transformations and adds the accumulated correction at the end. The
    result behaves as if computed in roughly twice the working precision,
    which keeps residuals meaningful near roots.
    """
    z = np.asarray(z, dtype=np.complex128)
    zr, zi = z.real, z.imag
    c = p.coeffs
    sr = np.full(z.shape, float(c[-1]))
    si = np.zeros(z.shape)
    er = np.zeros(z.shape)
    ei = np.zeros(z.shape)
    for k in range(p.n - 2, -1, -1):
        # complex product s*z with error terms
        p1, d1 = _two_prod(sr, zr)
        p2, d2 = _two_prod(si, zi)
        rr, d3 = _two_sum(p1, -p2)
        q1, f1 = _two_prod(sr, zi)
        q2, f2 = _two_prod(si, zr)
        ii, f3 = _two_sum(q1, q2)
        # add the real coefficient
        rr, d4 = _two_sum(rr, float(c[k]))
        # propagate compensation: e = e*z + local errors
        er, ei = er * zr - ei * zi, er * zi + ei * zr
        er = er + (d1 - d2 + d3 + d4)
        ei = ei + (f1 + f2 + f3)
        sr, si = rr, ii
    out = (sr + er) + 1j * (si + ei)
    return complex(out) if out.ndim == 0 else out
