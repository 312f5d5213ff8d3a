"""Reduction of no-unit-socle counts to deep-socle counts.

c(k, e) counts partitions of size 1+k+e with embedding dimension k and socle in
degrees >= 2. Splitting by the type (k', q, m) of the subpartition generated by
the socle part of degree >= 3 turns c into finitely many alpha values plus a
prefix recursion over the embedding dimension.
"""

from __future__ import annotations

from typing import Callable, Iterable

from .intmath import binom

AlphaProvider = Callable[[int, int, int], int]

Triple = tuple[int, int, int]


class MissingDataError(KeyError):
    """A required table entry is unavailable; the message names the indices."""


def refined_count(
    e: int,
    triple: Triple,
    a: int,
    alpha_of: AlphaProvider,
    _memo: dict | None = None,
) -> int:
    """Partitions counted by c(a, e) whose degree->=3 socle part has the given type.

    Prefix recursion: the unrestricted construction (choose k of a variables,
    drop in an M-partition, pad with free quadrics) overcounts by the same
    quantity at every smaller embedding dimension.
    """
    k, q, m = triple
    if a < 0:
        raise ValueError("embedding dimension must be >= 0")
    memo = _memo if _memo is not None else {}

    def rec(av: int) -> int:
        if av == 0:
            return 0
        key = (e, k, q, m, av)
        if key in memo:
            return memo[key]
        total = (
            alpha_of(k, q, m)
            * binom(av, k)
            * binom(binom(av + 1, 2) - q, e - q - m)
        )
        for i in range(1, av):
            total -= binom(av, i) * rec(i)
        memo[key] = total
        return total

    return rec(a)


def contributing_triples(e: int, a: int) -> Iterable[Triple]:
    """All types that can appear inside c(a, e): the zero type plus every
    positive (k, q, m) with k <= a, q + m <= e."""
    yield (0, 0, 0)
    for q in range(1, e):
        for m in range(1, e - q + 1):
            for k in range(1, min(a, q) + 1):
                yield (k, q, m)


def c_from_alpha(e: int, a: int, alpha_of: AlphaProvider) -> int:
    """c(a, e) by summing the refined counts over every contributing type."""
    if e == 0:
        return 1 if a == 0 else 0
    if a == 0:
        return 0
    memo: dict = {}
    total = 0
    for triple in contributing_triples(e, a):
        total += refined_count(e, triple, a, alpha_of, _memo=memo)
    return total
