"""Sampling, enumeration, and evaluation of sign polynomials."""

import math

import mpmath
import numpy as np
import pytest

from littlewood.poly import (
    LittlewoodPoly,
    enumerate_polys,
    eval_grid,
    eval_point,
    eval_point_accurate,
    normalized_eval,
    reverse,
    sample,
    sample_batch,
    sigma_sq,
)
from littlewood.rng import derive_seed


def P(*signs):
    return LittlewoodPoly(np.array(signs, dtype=np.int8))


# ---------------------------------------------------------------------------
# sample
# ---------------------------------------------------------------------------

def test_sample_single_sign():
    for s in range(20):
        p = sample(1, s)
        assert p.n == 1
        assert int(p.coeffs[0]) in (-1, 1)


def test_sample_deterministic():
    a = sample(4, 1234)
    b = sample(4, 1234)
    assert np.array_equal(a.coeffs, b.coeffs)


def test_sample_rejects_n_zero():
    with pytest.raises(ValueError):
        sample(0, 1)


def test_sample_coordinate_means():
    # law of large numbers: each coordinate's mean over 1e5 seeds in +-0.02
    m = 100_000
    signs = sample_batch(16, np.arange(m, dtype=np.uint64))
    means = signs.astype(np.float64).mean(axis=0)
    assert np.all(np.abs(means) <= 0.02)


def test_sample_batch_matches_scalar():
    seeds = [0, 1, 7, 2**63 + 5, 12345678901234567]
    batch = sample_batch(130, seeds)
    for i, s in enumerate(seeds):
        assert np.array_equal(batch[i], sample(130, s).coeffs)


def test_derived_seeds_give_independent_draws():
    a = sample(64, derive_seed(42, 0))
    b = sample(64, derive_seed(42, 1))
    assert not np.array_equal(a.coeffs, b.coeffs)


# ---------------------------------------------------------------------------
# enumerate_polys
# ---------------------------------------------------------------------------

def test_enumerate_n1():
    pats = [p.to_signs() for p in enumerate_polys(1)]
    assert sorted(pats) == ["+", "-"]
    assert len(pats) == 2


def test_enumerate_n2_distinct():
    pats = [p.to_signs() for p in enumerate_polys(2)]
    assert len(pats) == 4
    assert len(set(pats)) == 4


def test_enumerate_lexicographic():
    pats = [tuple(p.coeffs) for p in enumerate_polys(3)]
    assert pats == sorted(pats)
    assert pats[0] == (-1, -1, -1)
    assert pats[-1] == (1, 1, 1)


def test_enumerate_xor_fold_n10():
    # bit-counting identity: every coordinate is +1 in exactly 2**(n-1)
    # patterns (an even number), so the XOR of all bit patterns is 0
    acc = np.zeros(10, dtype=np.int64)
    count = 0
    for p in enumerate_polys(10):
        acc ^= (p.coeffs > 0).astype(np.int64)
        count += 1
    assert count == 1024
    assert np.all(acc == 0)


def test_enumerate_range_check():
    with pytest.raises(ValueError):
        list(enumerate_polys(0))
    with pytest.raises(ValueError):
        list(enumerate_polys(25))


# ---------------------------------------------------------------------------
# eval_point
# ---------------------------------------------------------------------------

def test_eval_point_direct_sum():
    assert eval_point(P(1, 1, -1), 2.0) == pytest.approx(-1.0)


def test_eval_point_root_of_one_plus_z():
    assert eval_point(P(1, 1), -1.0) == pytest.approx(0.0, abs=1e-15)


def test_eval_point_factorization_oracle():
    # 1 + z + z^2 + z^3 = (1 + z)(1 + z^2), zero at z = i
    z = 1j
    oracle = (1 + z) * (1 + z * z)
    assert oracle == 0
    assert eval_point(P(1, 1, 1, 1), z) == pytest.approx(0.0, abs=1e-15)


def test_eval_point_array_input():
    zs = np.array([1.0, -1.0, 2.0], dtype=complex)
    out = eval_point(P(1, 1), zs)
    assert np.allclose(out, [2.0, 0.0, 3.0])


# ---------------------------------------------------------------------------
# eval_grid
# ---------------------------------------------------------------------------

def test_eval_grid_constant():
    g = eval_grid(P(1), 0.5, 8)
    assert g.node_count == 8
    assert np.allclose(g.values, 1.0)


def test_eval_grid_two_nodes():
    g = eval_grid(P(1, 1), 1.0, 2)
    assert np.allclose(g.values, [2.0, 0.0], atol=1e-14)


def test_eval_grid_matches_horner():
    p = sample(64, 99)
    r, N = 1.001, 256
    g = eval_grid(p, r, N)
    nodes = r * np.exp(2j * np.pi * np.arange(N) / N)
    horner = eval_point(p, nodes)
    tol = 1e-10 * math.sqrt(sigma_sq(p.n, r))
    assert np.max(np.abs(g.values - horner)) <= tol


@pytest.mark.parametrize("N", [3, 17, 63, 64, 65, 200])
def test_eval_grid_matches_horner_all_node_counts(N):
    # includes N < n (folded transform path)
    p = sample(64, 5)
    r = 0.98
    g = eval_grid(p, r, N)
    nodes = r * np.exp(2j * np.pi * np.arange(N) / N)
    horner = eval_point(p, nodes)
    tol = 1e-10 * math.sqrt(sigma_sq(p.n, r))
    assert np.max(np.abs(g.values - horner)) <= tol


def test_eval_grid_rejects_zero_nodes():
    with pytest.raises(ValueError):
        eval_grid(P(1, 1), 1.0, 0)


# ---------------------------------------------------------------------------
# sigma_sq
# ---------------------------------------------------------------------------

def test_sigma_sq_at_one_is_n():
    for n in (1, 2, 17, 1000):
        assert sigma_sq(n, 1.0) == pytest.approx(n, rel=1e-14)


def test_sigma_sq_small_case():
    assert sigma_sq(3, 2.0) == pytest.approx(21.0, rel=1e-12)  # 1 + 4 + 16


def test_sigma_sq_near_one_matches_high_precision_sum():
    # oracle: high-precision direct summation
    n, r = 100, 1.0 + 1e-9
    with mpmath.workdps(40):
        oracle = float(mpmath.fsum(mpmath.mpf(r) ** (2 * k) for k in range(n)))
    assert sigma_sq(n, r) == pytest.approx(oracle, rel=1e-6)


@pytest.mark.parametrize("n", [10, 100, 1000, 10_000])
def test_sigma_sq_closed_form_vs_direct(n):
    # closed form and direct summation agree across the near-one window
    width = n ** (-11.0 / 10.0)
    for f in (-1.0, -0.31, 0.17, 0.5, 1.0):
        r = 1.0 + f * width
        direct = float(np.sum(np.power(r, 2.0 * np.arange(n))))
        assert sigma_sq(n, r) == pytest.approx(direct, rel=1e-9)


# ---------------------------------------------------------------------------
# normalized_eval
# ---------------------------------------------------------------------------

def test_normalized_eval_constant():
    assert normalized_eval(P(1), 1.0) == pytest.approx(1.0)


def test_normalized_eval_sqrt2():
    assert normalized_eval(P(1, 1), 1.0) == pytest.approx(math.sqrt(2.0))


def test_normalized_second_moment_exact_enumeration():
    # exact enumeration over all n=12 patterns: E |Ptilde|^2 = 1 exactly
    n, r, theta = 12, 1.01, 0.7
    z = r * np.exp(1j * theta)
    acc = 0.0
    for p in enumerate_polys(n):
        acc += abs(normalized_eval(p, z)) ** 2
    assert acc / 2**n == pytest.approx(1.0, abs=1e-12)


# ---------------------------------------------------------------------------
# reverse
# ---------------------------------------------------------------------------

def test_reverse_palindrome():
    assert reverse(P(1, -1, 1)).to_signs() == "+-+"


def test_reverse_simple():
    assert reverse(P(1, 1, -1)).to_signs() == "-++"


def test_reverse_roots_are_reciprocals():
    # quadratic formula on both polynomials
    # p = 1 + z - z^2 has roots (1 +- sqrt 5)/2
    phi = (1 + math.sqrt(5)) / 2
    phi2 = (1 - math.sqrt(5)) / 2
    q = reverse(P(1, 1, -1))  # -1 + z + z^2, roots (-1 +- sqrt 5)/2
    r1 = (-1 + math.sqrt(5)) / 2
    r2 = (-1 - math.sqrt(5)) / 2
    assert sorted([r1, r2]) == pytest.approx(sorted([1 / phi, 1 / phi2]))
    assert abs(eval_point(q, r1)) < 1e-12
    assert abs(eval_point(q, r2)) < 1e-12


def test_reverse_functional_identity():
    # eval_point(reverse(p), z) = z^(n-1) * eval_point(p, 1/z)
    rng = np.random.default_rng(3)
    for trial in range(25):
        n = int(rng.integers(2, 40))
        p = sample(n, 1000 + trial)
        z = complex(rng.normal(), rng.normal())
        if abs(z) < 1e-3:
            z += 0.5
        lhs = eval_point(reverse(p), z)
        rhs = z ** (n - 1) * eval_point(p, 1 / z)
        assert lhs == pytest.approx(rhs, rel=1e-9)


# ---------------------------------------------------------------------------
# type invariants and wire format
# ---------------------------------------------------------------------------

def test_littlewood_poly_validation():
    with pytest.raises(ValueError):
        LittlewoodPoly(np.array([], dtype=np.int8))
    with pytest.raises(ValueError):
        LittlewoodPoly(np.array([1, 0, -1], dtype=np.int8))
    with pytest.raises(ValueError):
        LittlewoodPoly(np.array([2, 1], dtype=np.int8))


def test_coeffs_are_int8_and_readonly():
    p = sample(10, 0)
    assert p.coeffs.dtype == np.int8
    with pytest.raises(ValueError):
        p.coeffs[0] = -1


def test_sign_string_round_trip():
    p = P(1, -1, -1, 1, 1)
    assert p.to_signs() == "+--++"
    assert np.array_equal(LittlewoodPoly.from_signs("+--++").coeffs, p.coeffs)
    with pytest.raises(ValueError):
        LittlewoodPoly.from_signs("+0-")
    with pytest.raises(ValueError):
        LittlewoodPoly.from_signs("")


# ---------------------------------------------------------------------------
# compensated evaluation
# ---------------------------------------------------------------------------

def test_eval_point_accurate_against_mpmath():
    p = sample(200, 17)
    pts = [0.3 + 0.9j, -1.001 + 0.002j, 1.0 + 0.0j, 0.99 * np.exp(1.7j)]
    with mpmath.workdps(50):
        for z in pts:
            zm = mpmath.mpc(z.real, z.imag)
            oracle = mpmath.polyval([int(c) for c in p.coeffs[::-1]], zm)
            got = eval_point_accurate(p, z)
            err = abs(complex(oracle) - got)
            scale = max(1.0, abs(complex(oracle)))
            assert err <= 1e-15 * scale + 1e-18


def test_eval_point_accurate_near_root():
    # compensated evaluation should resolve values near a root far below
    # the plain-Horner noise floor
    p = P(1, 1, -1)
    phi2 = (1 - math.sqrt(5)) / 2  # double-precision root approximation
    with mpmath.workdps(60):
        oracle = mpmath.polyval([-1, 1, 1], mpmath.mpf(phi2))
        assert abs(eval_point_accurate(p, complex(phi2)) - complex(oracle)) < 1e-18
