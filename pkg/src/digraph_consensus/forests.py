"""Brute-force enumeration of spanning converging forests (in-forests).

An in-forest gives every vertex at most one outgoing arc and contains no
cycle; the vertices without an outgoing arc are the roots of its trees.
The enumeration is deliberately exhaustive: it is the exact oracle the
numerical routes are checked against, so it shares no code with them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from digraph_consensus.digraph import Digraph

ENUMERATION_LIMIT = 12
MAX_FORESTS = 2_000_000


class EnumerationLimitError(RuntimeError):
    """The graph is too large for exhaustive forest enumeration."""


@dataclass(frozen=True)
class InForest:
    # parent[v] is the head of v's forest arc, or None when v is a root
    parent: tuple[int | None, ...]
    weight: float

    @property
    def arc_count(self) -> int:
        return sum(p is not None for p in self.parent)

    @property
    def roots(self) -> tuple[int, ...]:
        return tuple(v for v, p in enumerate(self.parent) if p is None)

    @property
    def arcs(self) -> tuple[tuple[int, int], ...]:
        return tuple((v, p) for v, p in enumerate(self.parent) if p is not None)

    def root_of(self) -> tuple[int, ...]:
        """Root of the tree containing each vertex."""
        out = []
        for v in range(len(self.parent)):
            while self.parent[v] is not None:
                v = self.parent[v]
            out.append(v)
        return tuple(out)


@dataclass(frozen=True)
class ForestFamily:
    host: Digraph
    max_arc_count: int
    maximal_forests: tuple[InForest, ...]

    @cached_property
    def total_weight(self) -> float:
        return math.fsum(f.weight for f in self.maximal_forests)

    @property
    def d(self) -> int:
        return self.host.n - self.max_arc_count


def enumerate_maximal_in_forests(
    g: Digraph,
    limit: int = ENUMERATION_LIMIT,
    max_forests: int | None = MAX_FORESTS,
) -> ForestFamily:
    """All spanning in-forests of ``g`` with the largest number of arcs.

    Depth-first over parent assignments (each vertex picks one out-arc or
    none), rejecting an arc as soon as it would close a cycle and pruning
    branches that cannot reach the best arc count found so far.

    Raises ``EnumerationLimitError`` when ``g.n > limit`` or when more than
    ``max_forests`` maximal forests exist.
    """
    n = g.n
    if n > limit:
        raise EnumerationLimitError(f"n={n} exceeds the enumeration limit {limit}")

    out = [g.out_arcs(v) for v in range(n)]
    # can_extend[k]: how many of vertices k..n-1 could still receive an arc
    can_extend = [0] * (n + 1)
    for v in range(n - 1, -1, -1):
        can_extend[v] = can_extend[v + 1] + (1 if out[v] else 0)

    UNSET, ROOT = -2, -1
    parent = [UNSET] * n
    best = -1
    found: list[tuple[tuple[int, ...], float]] = []

    def closes_cycle(v: int, head: int) -> bool:
        u = head
        while u >= 0:
            if u == v:
                return True
            u = parent[u]
        return False

    def visit(v: int, arcs: int, weight: float) -> None:
        nonlocal best, found
        if arcs + can_extend[v] < best:
            return
        if v == n:
            if arcs > best:
                best = arcs
                found = []
            found.append((tuple(parent), weight))
            if max_forests is not None and len(found) > max_forests:
                raise EnumerationLimitError(
                    f"more than {max_forests} maximal in-forests; use numeric routes"
                )
            return
        for head, w in out[v]:
            if not closes_cycle(v, head):
                parent[v] = head
                visit(v + 1, arcs + 1, weight * w)
        parent[v] = ROOT
        visit(v + 1, arcs, weight)
        parent[v] = UNSET

    visit(0, 0, 1.0)

    forests = sorted(
        (
            InForest(tuple(None if p == ROOT else p for p in par), w)
            for par, w in found
        ),
        key=lambda f: f.arcs,
    )
    return ForestFamily(host=g, max_arc_count=best, maximal_forests=tuple(forests))


def forest_matrix(family: ForestFamily) -> np.ndarray:
    """Normalized matrix of maximal in-forests.

    Entry ``(i, j)`` is the total weight of the maximal in-forests in which
    ``i`` lies in a tree rooted at ``j``, divided by the total weight of
    all maximal in-forests.
    """
    n = family.host.n
    parts: list[list[list[float]]] = [[[] for _ in range(n)] for _ in range(n)]
    for forest in family.maximal_forests:
        for i, r in enumerate(forest.root_of()):
            parts[i][r].append(forest.weight)
    total = family.total_weight
    jbar = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            if parts[i][j]:
                jbar[i, j] = math.fsum(parts[i][j]) / total
    return jbar
