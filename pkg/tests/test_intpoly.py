"""Exact integer polynomial arithmetic, checked against sympy."""

import numpy as np
import pytest
import sympy
from sympy.abc import x

from littlewood import intpoly


def to_sympy(f):
    return sympy.Poly(f[::-1] if f else [0], x, domain="ZZ")


def from_sympy(p):
    return [int(c) for c in reversed(p.all_coeffs())]


def test_degree_and_trim():
    assert intpoly.degree([]) == -1
    assert intpoly.degree([0, 0]) == -1
    assert intpoly.degree([3]) == 0
    assert intpoly.degree([1, 0, 2, 0]) == 2
    assert intpoly.trim([1, 0, 2, 0]) == [1, 0, 2]


def test_primitive():
    assert intpoly.primitive([2, 4, 6]) == [1, 2, 3]
    assert intpoly.primitive([-2, -4]) == [1, 2]  # positive leading coefficient
    assert intpoly.primitive([0, 0]) == []


def test_derivative():
    assert intpoly.derivative([5, 3, 2, 1]) == [3, 4, 3]
    assert intpoly.derivative([7]) == []


def test_mul_matches_sympy():
    rng = np.random.default_rng(0)
    for _ in range(20):
        f = [int(c) for c in rng.integers(-5, 6, rng.integers(1, 6))]
        g = [int(c) for c in rng.integers(-5, 6, rng.integers(1, 6))]
        if intpoly.degree(f) < 0 or intpoly.degree(g) < 0:
            continue
        got = intpoly.mul(f, g)
        want = from_sympy(to_sympy(f) * to_sympy(g))
        assert got == want


def test_exact_div_round_trip():
    rng = np.random.default_rng(1)
    for _ in range(20):
        f = intpoly.trim([int(c) for c in rng.integers(-4, 5, 4)])
        g = intpoly.trim([int(c) for c in rng.integers(-4, 5, 3)])
        if intpoly.degree(f) < 0 or intpoly.degree(g) < 0:
            continue
        prod = intpoly.mul(f, g)
        assert intpoly.exact_div(prod, g) == f or intpoly.exact_div(prod, f) == g


def test_exact_div_rejects_inexact():
    with pytest.raises(ArithmeticError):
        intpoly.exact_div([1, 1, 1], [1, 1])  # 1+z+z^2 not divisible by 1+z


def test_pseudo_rem_definition():
    # prem(f, g) = lc(g)^(deg f - deg g + 1) * f mod g, checked via sympy
    rng = np.random.default_rng(2)
    for _ in range(30):
        f = intpoly.trim([int(c) for c in rng.integers(-6, 7, rng.integers(2, 7))])
        g = intpoly.trim([int(c) for c in rng.integers(-6, 7, rng.integers(1, 5))])
        if intpoly.degree(f) < intpoly.degree(g) or intpoly.degree(g) < 1:
            continue
        got = intpoly.pseudo_rem(f, g)
        want = from_sympy(sympy.prem(to_sympy(f), to_sympy(g)))
        assert got == want


def test_gcd_known_cases():
    # (1+z)(1+z^2) and (1+z)(1-z): common factor 1+z
    f = intpoly.mul([1, 1], [1, 0, 1])
    g = intpoly.mul([1, 1], [1, -1])
    assert intpoly.gcd(f, g) == [1, 1]
    # coprime
    assert intpoly.gcd([1, 1], [1, -1]) == [1]
    # equal up to sign
    assert intpoly.gcd([1, 1, -1], [-1, -1, 1]) == [-1, -1, 1] or intpoly.gcd(
        [1, 1, -1], [-1, -1, 1]
    ) == [1, 1, -1]


def test_gcd_matches_sympy_random():
    rng = np.random.default_rng(3)
    for _ in range(40):
        a = intpoly.trim([int(c) for c in rng.integers(-3, 4, rng.integers(1, 5))])
        b = intpoly.trim([int(c) for c in rng.integers(-3, 4, rng.integers(1, 5))])
        c = intpoly.trim([int(c) for c in rng.integers(-3, 4, rng.integers(1, 5))])
        if min(intpoly.degree(a), intpoly.degree(b), intpoly.degree(c)) < 0:
            continue
        f = intpoly.mul(a, c)
        g = intpoly.mul(b, c)
        got = intpoly.gcd(f, g)
        # ours is the primitive gcd; sympy's carries the integer content
        want = intpoly.primitive(from_sympy(sympy.gcd(to_sympy(f), to_sympy(g))))
        assert got == want


def test_gcd_sign_polynomials_vs_reverse():
    rng = np.random.default_rng(4)
    for _ in range(30):
        n = int(rng.integers(2, 14))
        f = [int(s) for s in rng.choice([-1, 1], n)]
        got = intpoly.gcd(f, f[::-1])
        want = from_sympy(sympy.gcd(to_sympy(f), to_sympy(f[::-1])))
        assert got == want


def test_square_free_decomposition_simple():
    # (z-1)^2 (z+1): f = (z^2-2z+1)(z+1) = z^3 - z^2 - z + 1
    f = [1, -1, -1, 1]
    out = intpoly.square_free_decomposition(f)
    assert sorted(out, key=lambda t: t[1]) == [([1, 1], 1), ([-1, 1], 2)]


def test_square_free_decomposition_matches_sympy():
    rng = np.random.default_rng(5)
    for _ in range(25):
        a = intpoly.trim([int(c) for c in rng.integers(-2, 3, 3)])
        b = intpoly.trim([int(c) for c in rng.integers(-2, 3, 2)])
        if intpoly.degree(a) < 1 or intpoly.degree(b) < 1:
            continue
        f = intpoly.mul(intpoly.mul(a, a), b)  # a^2 * b
        got = intpoly.square_free_decomposition(f)
        # reconstruct: product of factor^mult must equal primitive(f)
        recon = [1]
        for fac, mult in got:
            for _ in range(mult):
                recon = intpoly.mul(recon, fac)
        assert intpoly.primitive(recon) == intpoly.primitive(f)
        # every factor square-free per sympy
        for fac, _ in got:
            sp = to_sympy(fac)
            assert sympy.degree(sympy.gcd(sp, sp.diff(x)), x) == 0
