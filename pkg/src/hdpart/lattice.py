"""Lattice partitions: invariants, apolarity, and the brute-force counting oracle.

Points of N^n are plain int tuples ordered by (degree, lex). A partition is a
finite downward-closed set of points; enumeration proceeds by appending points
in strictly increasing order, which visits every partition exactly once.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Optional, Sequence

Point = tuple[int, ...]


class ResourceCeilingError(RuntimeError):
    """Raised when an enumeration exceeds its configured state ceiling."""


def degree(p: Point) -> int:
    return sum(p)


def point_key(p: Point) -> tuple[int, Point]:
    return (sum(p), p)


def lower_covers(p: Point) -> list[Point]:
    """Points directly below p (one coordinate decremented)."""
    out = []
    for i, v in enumerate(p):
        if v > 0:
            out.append(p[:i] + (v - 1,) + p[i + 1 :])
    return out


def dominates(a: Point, b: Point) -> bool:
    """Componentwise b <= a."""
    return all(x <= y for x, y in zip(b, a))


def is_downward_closed(points: Iterable[Point]) -> bool:
    s = set(points)
    return all(c in s for p in s for c in lower_covers(p))


def is_antichain(points: Sequence[Point]) -> bool:
    return not any(
        a != b and dominates(a, b) for a, b in itertools.permutations(points, 2)
    )


@dataclass(frozen=True)
class Partition:
    """A downward-closed subset of N^ambient_dim, canonically sorted."""

    ambient_dim: int
    points: tuple[Point, ...]

    def __init__(self, ambient_dim: int, points: Iterable[Point]):
        pts = tuple(sorted(set(points), key=point_key))
        for p in pts:
            if len(p) != ambient_dim or any(v < 0 for v in p):
                raise ValueError(f"bad point {p} for ambient dimension {ambient_dim}")
        if not is_downward_closed(pts):
            raise ValueError("point set is not downward closed")
        object.__setattr__(self, "ambient_dim", ambient_dim)
        object.__setattr__(self, "points", pts)

    @property
    def size(self) -> int:
        return len(self.points)

    @property
    def length(self) -> Optional[int]:
        """Maximal degree of a point; None for the empty partition."""
        if not self.points:
            return None
        return degree(self.points[-1])

    def layer(self, k: int) -> tuple[Point, ...]:
        return tuple(p for p in self.points if degree(p) == k)


@dataclass(frozen=True)
class AdmissibleSet:
    """An antichain in N^ambient_dim (the possible socles)."""

    ambient_dim: int
    points: tuple[Point, ...]

    def __init__(self, ambient_dim: int, points: Iterable[Point]):
        pts = tuple(sorted(set(points), key=point_key))
        for p in pts:
            if len(p) != ambient_dim or any(v < 0 for v in p):
                raise ValueError(f"bad point {p} for ambient dimension {ambient_dim}")
        if not is_antichain(pts):
            raise ValueError("point set is not an antichain")
        object.__setattr__(self, "ambient_dim", ambient_dim)
        object.__setattr__(self, "points", pts)


def apolar_closure(points: Iterable[Point], ambient_dim: int) -> Partition:
    """Downward closure: all lattice points below some element of the input."""
    seen: set[Point] = set()
    stack = [tuple(p) for p in points]
    while stack:
        p = stack.pop()
        if p in seen:
            continue
        seen.add(p)
        stack.extend(lower_covers(p))
    return Partition(ambient_dim, seen)


def socle(part: Partition) -> AdmissibleSet:
    """Maximal elements; together with apolar_closure this is a bijection."""
    pts = set(part.points)
    out = []
    for p in part.points:
        if not any(
            p[:i] + (p[i] + 1,) + p[i + 1 :] in pts for i in range(part.ambient_dim)
        ):
            out.append(p)
    return AdmissibleSet(part.ambient_dim, out)


def hilbert_samuel(part: Partition) -> tuple[int, ...]:
    """Layer sizes (h_0, ..., h_length); empty tuple for the empty partition."""
    if not part.points:
        return ()
    length = degree(part.points[-1])
    counts = [0] * (length + 1)
    for p in part.points:
        counts[degree(p)] += 1
    return tuple(counts)


def socle_type(part: Partition) -> tuple[int, ...]:
    """Socle elements per degree, up to the partition length."""
    if not part.points:
        return ()
    length = degree(part.points[-1])
    counts = [0] * (length + 1)
    for p in socle(part).points:
        counts[degree(p)] += 1
    return tuple(counts)


def embedding_dimension(part: Partition) -> int:
    return len(part.layer(1))


@dataclass(frozen=True)
class ConstraintSpec:
    """Active constraints for a counting query; inconsistent combinations count 0."""

    size: int
    embedding_dim: Optional[int] = None
    min_socle_degree: Optional[int] = None
    hilbert_samuel: Optional[tuple[int, ...]] = None
    quadric_count: Optional[int] = None
    tail_mass: Optional[int] = None  # sum of layer sizes in degrees >= 3
    length: Optional[int] = None


# --- enumeration core --------------------------------------------------------


def _initial_candidates(n: int) -> tuple[Point, ...]:
    return ((0,) * n,)


def _fresh_candidates(chosen: set[Point], c: Point) -> list[Point]:
    out = []
    for i in range(len(c)):
        q = c[:i] + (c[i] + 1,) + c[i + 1 :]
        if all(cov in chosen for cov in lower_covers(q)):
            out.append(q)
    return out


def _merge(a: Sequence[Point], b: Sequence[Point]) -> list[Point]:
    return sorted(itertools.chain(a, b), key=point_key)


class _Budget:
    __slots__ = ("nodes", "ceiling")

    def __init__(self, ceiling: Optional[int]):
        self.nodes = 0
        self.ceiling = ceiling

    def spend(self):
        self.nodes += 1
        if self.ceiling is not None and self.nodes > self.ceiling:
            raise ResourceCeilingError(
                f"enumeration exceeded the {self.ceiling}-state ceiling"
            )


class _ConstraintChecker:
    """Incremental admissibility for the ordered DFS.

    Additions arrive in increasing (degree, lex) order, so when a point of
    degree g is appended every layer below g-0 is final except layer g itself.
    """

    def __init__(self, spec: ConstraintSpec):
        self.spec = spec
        self.hs_target = spec.hilbert_samuel
        self.impossible = self.hs_target is not None and (
            not self.hs_target or self.hs_target[0] != 1
        )

    def admits(self, layers: list[int], p: Point) -> bool:
        """May p be appended to a state with the given layer counts?"""
        if self.impossible:
            return False
        s = self.spec
        g = degree(p)
        if s.length is not None and g > s.length:
            return False
        if s.embedding_dim is not None and g == 1 and layers[1] + 1 > s.embedding_dim:
            return False
        if s.quadric_count is not None and g == 2 and layers[2] + 1 > s.quadric_count:
            return False
        if s.tail_mass is not None and g >= 3:
            tail = sum(layers[3:]) if len(layers) > 3 else 0
            if tail + 1 > s.tail_mass:
                return False
        if self.hs_target is not None:
            if g >= len(self.hs_target):
                return False
            if layers[g] + 1 > self.hs_target[g]:
                return False
        # layers strictly below g can no longer grow: equality targets must hold
        if g >= 2 and s.embedding_dim is not None and layers[1] != s.embedding_dim:
            return False
        if g >= 3 and s.quadric_count is not None and layers[2] != s.quadric_count:
            return False
        if self.hs_target is not None:
            for i in range(g):
                if layers[i] != self.hs_target[i]:
                    return False
        return True

    def accepts_leaf(self, chosen: Sequence[Point], chosen_set: set[Point]) -> bool:
        s = self.spec
        if self.impossible:
            return False
        layers: dict[int, int] = {}
        max_deg = 0
        for p in chosen:
            g = degree(p)
            layers[g] = layers.get(g, 0) + 1
            max_deg = max(max_deg, g)
        if s.embedding_dim is not None and layers.get(1, 0) != s.embedding_dim:
            return False
        if s.quadric_count is not None and layers.get(2, 0) != s.quadric_count:
            return False
        if s.tail_mass is not None:
            if sum(v for g, v in layers.items() if g >= 3) != s.tail_mass:
                return False
        if s.length is not None and (not chosen or max_deg != s.length):
            return False
        if self.hs_target is not None:
            actual = tuple(layers.get(i, 0) for i in range(max_deg + 1)) if chosen else ()
            if actual != self.hs_target:
                return False
        if s.min_socle_degree is not None:
            n = len(chosen[0]) if chosen else 0
            for p in chosen:
                if degree(p) < s.min_socle_degree:
                    if not any(
                        p[:i] + (p[i] + 1,) + p[i + 1 :] in chosen_set for i in range(n)
                    ):
                        return False
        return True


def _count_dfs(
    n: int,
    target_size: int,
    checker: Optional[_ConstraintChecker],
    budget: _Budget,
    chosen: list[Point],
    chosen_set: set[Point],
    cands: Sequence[Point],
    visitor: Optional[Callable[[tuple[Point, ...]], None]] = None,
) -> int:
    total = 0
    size = len(chosen)
    if size == target_size:
        if checker is None or checker.accepts_leaf(chosen, chosen_set):
            if visitor is not None:
                visitor(tuple(chosen))
            return 1
        return 0
    layers = [0] * (target_size + 2)
    for p in chosen:
        layers[degree(p)] += 1
    for idx, c in enumerate(cands):
        if checker is not None and not checker.admits(layers, c):
            continue
        budget.spend()
        chosen.append(c)
        chosen_set.add(c)
        fresh = _fresh_candidates(chosen_set, c)
        total += _count_dfs(
            n,
            target_size,
            checker,
            budget,
            chosen,
            chosen_set,
            _merge(cands[idx + 1 :], fresh) if fresh else cands[idx + 1 :],
            visitor,
        )
        chosen.pop()
        chosen_set.remove(c)
    return total


def _frontier_states(
    n: int, split_size: int, target_size: int, checker: Optional[_ConstraintChecker]
) -> tuple[list[tuple[tuple[Point, ...], tuple[Point, ...]]], int]:
    """All DFS states of exactly split_size points, plus the count of smaller leaves."""
    states: list[tuple[tuple[Point, ...], tuple[Point, ...]]] = []
    small = 0

    def walk(chosen: list[Point], chosen_set: set[Point], cands: Sequence[Point]):
        nonlocal small
        if len(chosen) == target_size:
            if checker is None or checker.accepts_leaf(chosen, chosen_set):
                small += 1
            return
        if len(chosen) == split_size:
            states.append((tuple(chosen), tuple(cands)))
            return
        layers = [0] * (target_size + 2)
        for p in chosen:
            layers[degree(p)] += 1
        for idx, c in enumerate(cands):
            if checker is not None and not checker.admits(layers, c):
                continue
            chosen.append(c)
            chosen_set.add(c)
            fresh = _fresh_candidates(chosen_set, c)
            walk(chosen, chosen_set, _merge(cands[idx + 1 :], fresh))
            chosen.pop()
            chosen_set.remove(c)

    walk([], set(), _initial_candidates(n))
    return states, small


def _subtree_task(args) -> int:
    n, target_size, spec, max_nodes, chosen, cands = args
    checker = _ConstraintChecker(spec) if spec is not None else None
    budget = _Budget(max_nodes)
    return _count_dfs(
        n,
        target_size,
        checker,
        budget,
        list(chosen),
        set(chosen),
        list(cands),
    )


def _count(
    n: int,
    spec: Optional[ConstraintSpec],
    target_size: int,
    workers: int = 1,
    max_nodes: Optional[int] = None,
    visitor: Optional[Callable[[tuple[Point, ...]], None]] = None,
) -> int:
    if target_size == 0:
        if spec is None:
            return 1
        return 1 if _ConstraintChecker(spec).accepts_leaf([], set()) else 0
    if workers <= 1 or visitor is not None:
        checker = _ConstraintChecker(spec) if spec is not None else None
        budget = _Budget(max_nodes)
        return _count_dfs(
            n,
            target_size,
            checker,
            budget,
            [],
            set(),
            _initial_candidates(n),
            visitor,
        )
    checker = _ConstraintChecker(spec) if spec is not None else None
    split = min(2, target_size)
    states, small = _frontier_states(n, split, target_size, checker)
    tasks = [(n, target_size, spec, max_nodes, chosen, cands) for chosen, cands in states]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        parts = list(ex.map(_subtree_task, tasks, chunksize=8))
    return small + sum(parts)


def count_partitions(
    n: int, d: int, workers: int = 1, max_nodes: Optional[int] = None
) -> int:
    """Number of downward-closed subsets of N^n with exactly d points (exhaustive)."""
    if n < 0 or d < 0:
        raise ValueError("dimension and size must be nonnegative")
    return _count(n, None, d, workers=workers, max_nodes=max_nodes)


def count_constrained(
    n: int,
    spec: ConstraintSpec,
    workers: int = 1,
    max_nodes: Optional[int] = None,
) -> int:
    """Count partitions in N^n matching every active constraint of the spec."""
    if n < 0:
        raise ValueError("dimension must be nonnegative")
    return _count(n, spec, spec.size, workers=workers, max_nodes=max_nodes)


def iter_partitions(n: int, size: int) -> Iterator[tuple[Point, ...]]:
    """Yield every partition of the exact size as a sorted point tuple."""
    found: list[tuple[Point, ...]] = []
    _count(n, None, size, visitor=found.append)
    return iter(found)


# --- coordinate symmetry ------------------------------------------------------


def permute_point(p: Point, perm: Sequence[int]) -> Point:
    """Coordinate i of the image reads coordinate perm[i] of p."""
    return tuple(p[perm[i]] for i in range(len(perm)))


def canonical_orbit(
    points: Iterable[Point], n: int, ceiling: int = 12
) -> tuple[tuple[Point, ...], int]:
    """Lexicographically least coordinate-permutation image and the orbit size.

    The orbit is grown by adjacent transpositions, so only n and the actual
    number of distinct images bound the work; n above the ceiling is refused.
    """
    if n > ceiling:
        raise ResourceCeilingError(f"ambient dimension {n} above permutation ceiling {ceiling}")
    base = tuple(sorted({tuple(p) for p in points}, key=point_key))
    for p in base:
        if len(p) != n:
            raise ValueError(f"point {p} does not live in dimension {n}")
    seen = {base}
    queue = [base]
    while queue:
        cur = queue.pop()
        for i in range(n - 1):
            perm = list(range(n))
            perm[i], perm[i + 1] = perm[i + 1], perm[i]
            img = tuple(sorted((permute_point(p, perm) for p in cur), key=point_key))
            if img not in seen:
                seen.add(img)
                queue.append(img)
    rep = min(seen)
    return rep, len(seen)
