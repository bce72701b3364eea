"""Exact integer polynomial arithmetic.

Polynomials are lists of Python ints, ascending powers (index k multiplies
x**k). Everything stays in Z[x]; no floating point. Used for exact gcd
computations via the subresultant remainder sequence and for square-free
decomposition.
"""

from __future__ import annotations

import math


def trim(f: list[int]) -> list[int]:
    d = len(f) - 1
    while d >= 0 and f[d] == 0:
        d -= 1
    return f[: d + 1]


def degree(f: list[int]) -> int:
    """Degree, with the zero polynomial at -1."""
    return len(trim(f)) - 1


def leading(f: list[int]) -> int:
    f = trim(f)
    return f[-1] if f else 0


def content(f: list[int]) -> int:
    g = 0
    for c in f:
        g = math.gcd(g, abs(c))
    return g


def primitive(f: list[int]) -> list[int]:
    """Primitive part with positive leading coefficient."""
    f = trim(f)
    if not f:
        return []
    c = content(f)
    if f[-1] < 0:
        c = -c
    return [x // c for x in f]


def derivative(f: list[int]) -> list[int]:
    return trim([k * f[k] for k in range(1, len(f))])


def sub(f: list[int], g: list[int]) -> list[int]:
    m = max(len(f), len(g))
    return trim([(f[i] if i < len(f) else 0) - (g[i] if i < len(g) else 0) for i in range(m)])


def mul(f: list[int], g: list[int]) -> list[int]:
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] += a * b
    return trim(out)


def pseudo_rem(f: list[int], g: list[int]) -> list[int]:
    """Pseudo-remainder of f by g: lc(g)**(deg f - deg g + 1) * f mod g."""
    f = trim(f)
    g = trim(g)
    if not g:
        raise ZeroDivisionError("pseudo-remainder by zero polynomial")
    df, dg = len(f) - 1, len(g) - 1
    if df < dg:
        return list(f)
    lg = g[-1]
    r = list(f)
    steps = 0
    while len(r) - 1 >= dg and r:
        steps += 1
        lead_r = r[-1]
        shift = len(r) - 1 - dg
        r = [lg * c for c in r]
        for j in range(dg + 1):
            r[shift + j] -= lead_r * g[j]
        r = trim(r)
    # scale up to the full lc(g)**(df-dg+1) factor
    missing = (df - dg + 1) - steps
    if missing > 0 and r:
        s = lg ** missing
        r = [s * c for c in r]
    return r


def exact_div(f: list[int], g: list[int]) -> list[int]:
    """Exact division in Z[x]; raises if g does not divide f."""
    f = trim(f)
    g = trim(g)
    if not g:
        raise ZeroDivisionError("division by zero polynomial")
    if not f:
        return []
    dg = len(g) - 1
    lg = g[-1]
    r = list(f)
    q = [0] * (len(f) - dg)
    for i in range(len(f) - 1 - dg, -1, -1):
        c = r[i + dg]
        if c % lg != 0:
            raise ArithmeticError("inexact polynomial division")
        qi = c // lg
        q[i] = qi
        if qi:
            for j in range(dg + 1):
                r[i + j] -= qi * g[j]
    if any(r):
        raise ArithmeticError("inexact polynomial division")
    return trim(q)


def gcd(f: list[int], g: list[int]) -> list[int]:
    """Primitive gcd in Z[x] via the subresultant remainder sequence.

    Coefficients stay integers throughout; intermediate remainders are
    divided by the predicted subresultant factors, which bounds their
    growth.
    """
    A = primitive(f)
    B = primitive(g)
    if not A:
        return B
    if not B:
        return A
    if degree(A) < degree(B):
        A, B = B, A
    g_ = 1
    h = 1
    while True:
        delta = degree(A) - degree(B)
        R = pseudo_rem(A, B)
        if not R:
            return primitive(B)
        if degree(R) == 0:
            return [1]
        A, B = B, [c // (g_ * h**delta) for c in R]
        g_ = leading(A)
        if delta > 0:
            h = g_**delta // h ** (delta - 1)
    # unreachable


def square_free_decomposition(f: list[int]) -> list[tuple[list[int], int]]:
    """Yun's algorithm: factor f into square-free parts with multiplicities.

    Returns [(factor, multiplicity), ...] with each factor primitive and
    square-free; the product of factor**multiplicity equals f up to a
    constant.
    """
    f = primitive(f)
    if degree(f) < 1:
        return []
    fp = derivative(f)
    a0 = gcd(f, fp)
    if degree(a0) == 0:
        return [(f, 1)]
    b = exact_div(f, a0)
    c = exact_div(fp, a0)
    out: list[tuple[list[int], int]] = []
    i = 1
    while degree(b) > 0:
        d = sub(c, derivative(b))
        if degree(d) < 0:
            out.append((primitive(b), i))
            break
        a = gcd(b, d)
        if degree(a) > 0:
            out.append((a, i))
        b = exact_div(b, a)
        c = exact_div(d, a)
        i += 1
    return out
