"""Search engine for partitions with socle in degree >= 3 (fixed quadric layer).

The count alpha(k, q, m) of such partitions with k variables, q quadrics and m
boxes of degree >= 3 is computed orbitwise: enumerate stable quadric
configurations up to coordinate permutation, bound the reachable cells for each
configuration, then run an exact DFS over downward-closed cell subsets.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Optional, Sequence

from .intmath import binom, macaulay_growth
from .lattice import (
    Point,
    ResourceCeilingError,
    degree,
    lower_covers,
    permute_point,
    point_key,
)

DEFAULT_NODE_CEILING = 10**9


def quadric_points(k: int) -> tuple[Point, ...]:
    """All degree-2 points of N^k in lex order."""
    out = []
    for i in range(k):
        for j in range(i, k):
            p = [0] * k
            p[i] += 1
            p[j] += 1
            out.append(tuple(p))
    return tuple(sorted(out))


def quadric_divisors(p: Point) -> list[Point]:
    """Degree-2 points below p."""
    k = len(p)
    out = []
    for i in range(k):
        if p[i] >= 2:
            q = [0] * k
            q[i] = 2
            out.append(tuple(q))
        for j in range(i + 1, k):
            if p[i] >= 1 and p[j] >= 1:
                q = [0] * k
                q[i] = 1
                q[j] = 1
                out.append(tuple(q))
    return out


@lru_cache(maxsize=None)
def _space(k: int):
    """Per-dimension tables: quadrics with index map, cubics with divisor masks."""
    quads = quadric_points(k)
    qindex = {p: i for i, p in enumerate(quads)}
    cubics = []
    seen = set()
    for q in quads:
        for i in range(k):
            c = q[:i] + (q[i] + 1,) + q[i + 1 :]
            if c in seen:
                continue
            seen.add(c)
            mask = 0
            for d in quadric_divisors(c):
                mask |= 1 << qindex[d]
            cubics.append((c, mask))
    cubics.sort(key=lambda cm: point_key(cm[0]))
    return quads, qindex, tuple(cubics)


def support_variables(points: Iterable[Point]) -> frozenset[int]:
    out = set()
    for p in points:
        for i, v in enumerate(p):
            if v:
                out.add(i)
    return frozenset(out)


def is_m_stable(U: Iterable[Point], k: int) -> bool:
    """Whether every quadric of U divides a cubic whose quadric divisors stay in U.

    This is the constructive stability criterion: the closure of such
    certifying cubics is itself a partition with quadric layer exactly U and
    socle in degree 3.
    """
    quads, qindex, cubics = _space(k)
    pts = {tuple(p) for p in U}
    for p in pts:
        if p not in qindex:
            raise ValueError(f"{p} is not a degree-2 point of N^{k}")
    umask = 0
    for p in pts:
        umask |= 1 << qindex[p]
    for p in pts:
        bit = 1 << qindex[p]
        if not any(mask & bit and mask & ~umask == 0 for _, mask in cubics):
            return False
    return True


@dataclass(frozen=True)
class QuadricOrbit:
    """Canonical quadric configuration with its orbit size under S_k."""

    k: int
    rep: tuple[Point, ...]
    orbit_size: int
    support: int


def _orbit(points: tuple[Point, ...], k: int) -> set[tuple[Point, ...]]:
    seen = {points}
    stack = [points]
    while stack:
        cur = stack.pop()
        for i in range(k - 1):
            perm = list(range(k))
            perm[i], perm[i + 1] = perm[i + 1], perm[i]
            img = tuple(sorted((permute_point(p, perm) for p in cur), key=point_key))
            if img not in seen:
                seen.add(img)
                stack.append(img)
    return seen


@lru_cache(maxsize=None)
def orbit_reps(k: int, q: int) -> tuple[QuadricOrbit, ...]:
    """One canonical representative per S_k-orbit of stable q-element quadric sets."""
    quads, _, _ = _space(k)
    if q < 1 or q > len(quads):
        return ()
    transpositions = [
        tuple(range(i)) + (i + 1, i) + tuple(range(i + 2, k)) for i in range(k - 1)
    ]
    reps = []
    for combo in itertools.combinations(quads, q):
        if not is_m_stable(combo, k):
            continue
        # cheap local-minimum filter before the exact orbit walk
        if any(
            tuple(sorted((permute_point(p, t) for p in combo), key=point_key)) < combo
            for t in transpositions
        ):
            continue
        orbit = _orbit(combo, k)
        if min(orbit) != combo:
            continue
        reps.append(
            QuadricOrbit(k, combo, len(orbit), len(support_variables(combo)))
        )
    return tuple(sorted(reps, key=lambda o: o.rep))


@dataclass(frozen=True)
class BoundingRegion:
    """All cells reachable by partitions of bounded length with a fixed quadric layer.

    cells holds the degree >= 3 points, sorted by (degree, lex); the degree <= 2
    part is the k unit points, the origin, and the quadric set itself.
    """

    k: int
    quadrics: tuple[Point, ...]
    max_degree: int
    cells: tuple[Point, ...]

    def all_points(self) -> tuple[Point, ...]:
        low: list[Point] = [(0,) * self.k]
        for i in range(self.k):
            e = [0] * self.k
            e[i] = 1
            low.append(tuple(e))
        return tuple(sorted(low + list(self.quadrics) + list(self.cells), key=point_key))


def bounding_region(U: Iterable[Point], max_degree: int) -> BoundingRegion:
    """Materialize the region: every cell of degree 3..max_degree whose full set
    of quadric divisors lies inside U."""
    pts = tuple(sorted({tuple(p) for p in U}, key=point_key))
    if not pts:
        raise ValueError("empty quadric layer")
    k = len(pts[0])
    uset = set(pts)
    _, _, cubics = _space(k)
    layers: list[list[Point]] = []
    layer3 = [c for c, _ in cubics if all(d in uset for d in quadric_divisors(c))]
    layers.append(sorted(layer3))
    for g in range(4, max_degree + 1):
        prev = layers[-1]
        cand = set()
        for z in prev:
            for i in range(k):
                cand.add(z[:i] + (z[i] + 1,) + z[i + 1 :])
        layer = [c for c in sorted(cand) if all(d in uset for d in quadric_divisors(c))]
        layers.append(layer)
        if not layer:
            break
    cells = tuple(
        p for layer in layers for p in layer if degree(p) <= max_degree
    )
    return BoundingRegion(k, pts, max_degree, cells)


@dataclass(frozen=True)
class AlphaQuery:
    """A request for one count: type (k, q, m), optionally refined by length or
    by the full layer-size profile."""

    k: int
    q: int
    m: int
    length: Optional[int] = None
    profile: Optional[tuple[int, ...]] = None

    def __post_init__(self):
        if self.profile is not None:
            h = self.profile
            if not h or h[0] != 1:
                raise ValueError("layer profile must start with 1")
            if len(h) > 1 and h[1] != self.k:
                raise ValueError("profile embedding dimension must equal k")
            if (h[2] if len(h) > 2 else 0) != self.q:
                raise ValueError("profile quadric count must equal q")
            if sum(h[3:]) != self.m:
                raise ValueError("profile tail must sum to m")
            if self.length is not None and self.length != len(h) - 1:
                raise ValueError("length must match the profile")


BucketTable = dict[tuple[int, int, tuple[int, ...]], int]
# key: (size m, length, layer profile h3..h_length), value: count for one representative


class _RegionSearch:
    """Exact DFS over downward-closed cell subsets of one bounding region."""

    def __init__(self, region: BoundingRegion, node_ceiling: Optional[int]):
        self.k = region.k
        self.region = region
        quads = region.quadrics
        qindex = {p: i for i, p in enumerate(quads)}
        cells = region.cells
        self.cells = cells
        self.degrees = [degree(p) for p in cells]
        cellindex = {p: i for i, p in enumerate(cells)}
        self.parents: list[tuple[int, ...]] = []
        self.covers: list[int] = []
        for p in cells:
            g = degree(p)
            if g == 3:
                self.parents.append(())
                mask = 0
                for d in quadric_divisors(p):
                    mask |= 1 << qindex[d]
                self.covers.append(mask)
            else:
                self.parents.append(
                    tuple(cellindex[c] for c in lower_covers(p) if degree(c) >= 3)
                )
                self.covers.append(0)
        self.n_cubics = sum(1 for g in self.degrees if g == 3)
        self.full_mask = (1 << len(quads)) - 1
        # highest cubic index covering each quadric, for dead-branch detection
        self.last_cover = [-1] * len(quads)
        for i in range(self.n_cubics):
            m = self.covers[i]
            for u in range(len(quads)):
                if m >> u & 1:
                    self.last_cover[u] = i
        self.node_ceiling = node_ceiling
        self.nodes = 0

    def _spend(self):
        self.nodes += 1
        if self.node_ceiling is not None and self.nodes > self.node_ceiling:
            raise ResourceCeilingError(
                f"search exceeded the {self.node_ceiling}-node ceiling"
            )

    def sweep(self, m_max: int) -> BucketTable:
        """Count every valid subset of size <= m_max, bucketed by
        (size, length, layer profile)."""
        table: BucketTable = {}
        chosen: list[bool] = [False] * len(self.cells)
        layer_counts: dict[int, int] = {}

        def rec(last: int, size: int, cover: int, maxdeg: int):
            if cover == self.full_mask and size >= 1:
                profile = tuple(layer_counts.get(g, 0) for g in range(3, maxdeg + 1))
                key = (size, maxdeg, profile)
                table[key] = table.get(key, 0) + 1
            if size == m_max:
                return
            if cover != self.full_mask:
                # only further cubics can complete the quadric cover
                missing = self.full_mask & ~cover
                u = missing.bit_length() - 1
                limit = self.n_cubics
                if self.last_cover[u] <= last:
                    return
            else:
                limit = len(self.cells)
            for i in range(last + 1, limit):
                if any(not chosen[p] for p in self.parents[i]):
                    continue
                self._spend()
                chosen[i] = True
                g = self.degrees[i]
                layer_counts[g] = layer_counts.get(g, 0) + 1
                rec(i, size + 1, cover | self.covers[i], max(maxdeg, g))
                layer_counts[g] -= 1
                chosen[i] = False

        rec(-1, 0, 0, 2)
        return table

    def count(self, m: int, use_macaulay: bool = True) -> int:
        """Count valid subsets of exactly m cells (all lengths), with an optional
        Macaulay-growth bound on the remaining capacity used only for pruning."""
        cells_n = len(self.cells)
        suffix_by_degree: list[dict[int, int]] = [dict() for _ in range(cells_n + 1)]
        for i in range(cells_n - 1, -1, -1):
            d = dict(suffix_by_degree[i + 1])
            d[self.degrees[i]] = d.get(self.degrees[i], 0) + 1
            suffix_by_degree[i] = d
        suffix_total = [sum(d.values()) for d in suffix_by_degree]
        q = len(self.region.quadrics)
        chosen = [False] * cells_n
        layer_counts: dict[int, int] = {}
        total = 0

        def capacity(last: int) -> int:
            """Admissible bound on the final subset size: per-layer availability
            capped by the Macaulay growth chain starting from the quadric count."""
            remaining = suffix_by_degree[last + 1]
            cap = 0
            prev = q
            for g in range(3, self.region.max_degree + 1):
                allowed = macaulay_growth(prev, g - 1)
                ub = min(layer_counts.get(g, 0) + remaining.get(g, 0), allowed)
                cap += ub
                prev = ub
            return cap

        def rec(last: int, size: int, cover: int):
            nonlocal total
            if size == m:
                if cover == self.full_mask:
                    total += 1
                return
            if size + suffix_total[last + 1] < m:
                return
            if use_macaulay and capacity(last) < m:
                return
            if cover != self.full_mask:
                missing = self.full_mask & ~cover
                u = missing.bit_length() - 1
                if self.last_cover[u] <= last:
                    return
            for i in range(last + 1, cells_n):
                if any(not chosen[p] for p in self.parents[i]):
                    continue
                self._spend()
                chosen[i] = True
                g = self.degrees[i]
                layer_counts[g] = layer_counts.get(g, 0) + 1
                rec(i, size + 1, cover | self.covers[i])
                layer_counts[g] -= 1
                chosen[i] = False

        rec(-1, 0, 0)
        return total


def _rep_table(
    k: int,
    rep: tuple[Point, ...],
    m_max: int,
    length_cap: Optional[int],
    node_ceiling: Optional[int],
) -> BucketTable:
    max_degree = length_cap if length_cap is not None else m_max + 2
    region = bounding_region(rep, max_degree)
    search = _RegionSearch(region, node_ceiling)
    return search.sweep(m_max)


def _rep_task(args) -> tuple[int, dict]:
    idx, k, rep, m_max, length_cap, node_ceiling = args
    table = _rep_table(k, rep, m_max, length_cap, node_ceiling)
    return idx, table


def _trivial_alpha(k: int, q: int, m: int) -> Optional[int]:
    """Boundary conventions and vanishing cases decided without search."""
    if k < 0 or q < 0 or m < 0:
        return 0
    if k == 0:
        return 1 if (q == 0 and m == 0) else 0
    if q == 0 or m == 0:
        return 0
    if q < k:  # each variable needs a quadric above it and a cubic above that
        return 0
    if q > k * (k + 1) // 2:
        return 0
    if q > 3 * m:  # a cubic dominates at most three quadrics
        return 0
    return None


def full_support_reps(k: int, q: int) -> tuple[QuadricOrbit, ...]:
    return tuple(o for o in orbit_reps(k, q) if o.support == k)


def alpha_tables(
    k: int,
    q: int,
    m_max: int,
    length_cap: Optional[int] = None,
    workers: int = 1,
    node_ceiling: Optional[int] = DEFAULT_NODE_CEILING,
    progress=None,
    precomputed: Optional[dict[int, BucketTable]] = None,
) -> BucketTable:
    """Orbit-weighted bucket table for all sizes up to m_max at once.

    Keys are (m, length, profile); the value already includes orbit weights.
    progress, when given, is called with (rep_index, rep, table) after each
    representative finishes; precomputed maps rep_index to an already-known
    table (resume support).
    """
    reps = full_support_reps(k, q)
    tables: dict[int, BucketTable] = dict(precomputed or {})
    todo = [
        (i, k, o.rep, m_max, length_cap, node_ceiling)
        for i, o in enumerate(reps)
        if i not in tables
    ]
    if workers > 1 and len(todo) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            for idx, table in ex.map(_rep_task, todo):
                tables[idx] = table
                if progress is not None:
                    progress(idx, reps[idx], table)
    else:
        for args in todo:
            idx, table = _rep_task(args)
            tables[idx] = table
            if progress is not None:
                progress(idx, reps[idx], table)
    out: BucketTable = {}
    for i, orbit in enumerate(reps):
        for key, val in sorted(tables[i].items()):
            out[key] = out.get(key, 0) + orbit.orbit_size * val
    return out


def alpha(
    query: AlphaQuery,
    workers: int = 1,
    node_ceiling: Optional[int] = DEFAULT_NODE_CEILING,
) -> int:
    """Exact number of partitions matching the query (socle degree >= 3 built in)."""
    k, q, m = query.k, query.q, query.m
    trivial = _trivial_alpha(k, q, m)
    if trivial is not None:
        if trivial == 0:
            return 0
        # the single conventional object (k=q=m=0): the origin-only partition
        ok_len = query.length in (None, 0)
        ok_prof = query.profile in (None, (1,))
        return 1 if ok_len and ok_prof else 0
    if query.length is not None and not (3 <= query.length <= m + 2):
        return 0
    length_cap = query.length if query.length is not None else m + 2
    table = alpha_tables(
        k, q, m, length_cap=length_cap, workers=workers, node_ceiling=node_ceiling
    )
    total = 0
    for (size, maxdeg, profile), val in table.items():
        if size != m:
            continue
        if query.length is not None and maxdeg != query.length:
            continue
        if query.profile is not None and profile != tuple(query.profile[3:]):
            continue
        total += val
    return total


def alpha_count(
    k: int,
    q: int,
    m: int,
    length: Optional[int] = None,
    workers: int = 1,
    node_ceiling: Optional[int] = DEFAULT_NODE_CEILING,
) -> int:
    return alpha(
        AlphaQuery(k, q, m, length=length), workers=workers, node_ceiling=node_ceiling
    )


def alpha_by_hilbert(
    h: Sequence[int],
    workers: int = 1,
    node_ceiling: Optional[int] = DEFAULT_NODE_CEILING,
) -> int:
    """Count with the entire layer profile prescribed."""
    h = tuple(h)
    if not h or h[0] != 1:
        raise ValueError("layer profile must start with 1")
    k = h[1] if len(h) > 1 else 0
    q = h[2] if len(h) > 2 else 0
    m = sum(h[3:])
    return alpha(
        AlphaQuery(k, q, m, length=len(h) - 1, profile=h),
        workers=workers,
        node_ceiling=node_ceiling,
    )


def alpha_without_orbit_reduction(
    k: int, q: int, m: int, node_ceiling: Optional[int] = DEFAULT_NODE_CEILING
) -> int:
    """Reference implementation iterating every stable subset, no symmetry quotient."""
    trivial = _trivial_alpha(k, q, m)
    if trivial is not None:
        return trivial
    quads, _, _ = _space(k)
    total = 0
    for combo in itertools.combinations(quads, q):
        if len(support_variables(combo)) != k or not is_m_stable(combo, k):
            continue
        region = bounding_region(combo, m + 2)
        table = _RegionSearch(region, node_ceiling).sweep(m)
        total += sum(v for (size, _, _), v in table.items() if size == m)
    return total


def alpha_targeted(
    k: int,
    q: int,
    m: int,
    use_macaulay: bool = True,
    node_ceiling: Optional[int] = DEFAULT_NODE_CEILING,
) -> int:
    """Single-size search path (exercises the capacity pruning bound)."""
    trivial = _trivial_alpha(k, q, m)
    if trivial is not None:
        return trivial
    total = 0
    for orbit in full_support_reps(k, q):
        region = bounding_region(orbit.rep, m + 2)
        search = _RegionSearch(region, node_ceiling)
        total += orbit.orbit_size * search.count(m, use_macaulay=use_macaulay)
    return total
