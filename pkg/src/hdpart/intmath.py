"""Shared integer combinatorics: generalized binomials, double factorials, Macaulay growth."""

from __future__ import annotations

import math
from functools import lru_cache


def binom(n: int, k: int) -> int:
    """Binomial coefficient with integer (possibly negative) upper index.

    binom(n, k) = prod_{i=0}^{k-1} (n - i) / k! for k >= 0, and 0 for k < 0.
    This is the product convention shared by every inversion formula in the
    package; for n >= 0 it agrees with math.comb.
    """
    if k < 0:
        return 0
    if n >= 0:
        return math.comb(n, k)
    # prod_{i<k}(n-i) = (-1)^k * (k-n-1)(k-n-2)...(-n) = (-1)^k * binom(k-n-1, k) * k!
    return (-1) ** k * math.comb(k - n - 1, k)


def double_factorial(n: int) -> int:
    """n!! with the conventions (-1)!! = 0!! = 1 needed at diagonal boundaries."""
    if n in (-1, 0):
        return 1
    if n < -1:
        raise ValueError(f"double factorial undefined for {n}")
    result = 1
    while n > 1:
        result *= n
        n -= 2
    return result


@lru_cache(maxsize=None)
def macaulay_growth(h: int, i: int) -> int:
    """Largest admissible next value of a Hilbert function after h in degree i.

    Writes h = C(a_i, i) + C(a_{i-1}, i-1) + ... + C(a_j, j) with
    a_i > a_{i-1} > ... > a_j >= j >= 1 (the i-th Macaulay representation)
    and returns C(a_i+1, i+1) + ... + C(a_j+1, j+1), an upper bound for the
    degree-(i+1) value of any monomial-ideal Hilbert function.
    """
    if h < 0 or i < 1:
        raise ValueError("need h >= 0 and degree i >= 1")
    if h == 0:
        return 0
    rest = h
    deg = i
    bound = 0
    while rest > 0 and deg >= 1:
        a = deg
        while math.comb(a + 1, deg) <= rest:
            a += 1
        rest -= math.comb(a, deg)
        bound += math.comb(a + 1, deg + 1)
        deg -= 1
    return bound
