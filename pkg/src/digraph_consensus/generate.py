"""Random and exhaustive digraph generators for the property suites."""

from __future__ import annotations

import itertools
from typing import Iterator

import numpy as np

from digraph_consensus.digraph import Digraph

WEIGHT_RANGE = (0.0, 10.0)


def _weights(rng: np.random.Generator, k: int, weighted: bool) -> list[float]:
    if not weighted:
        return [1.0] * k
    lo, hi = WEIGHT_RANGE
    # uniform on (lo, hi]: reflect the half-open [lo, hi) draw
    return [float(hi + lo - w) for w in rng.uniform(lo, hi, size=k)]


def random_digraph(
    rng: np.random.Generator, n: int, p: float | None = None, weighted: bool = True
) -> Digraph:
    """Erdos-Renyi style digraph; ``p`` defaults to a random sparse-ish density."""
    if p is None:
        p = rng.uniform(0.05, min(0.9, 3.0 / max(n, 1)))
    pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
    keep = rng.random(len(pairs)) < p
    chosen = [pair for pair, k in zip(pairs, keep) if k]
    ws = _weights(rng, len(chosen), weighted)
    return Digraph(n, tuple((i, j, w) for (i, j), w in zip(chosen, ws)))


def converging_tree(rng: np.random.Generator, n: int, weighted: bool = False) -> Digraph:
    """Random converging tree: every vertex has a directed path to the root.

    The root is a random vertex; each other vertex gets one out-arc to a
    vertex placed earlier in a random order.
    """
    order = rng.permutation(n)
    arcs = []
    for k in range(1, n):
        arcs.append((int(order[k]), int(order[rng.integers(0, k)])))
    ws = _weights(rng, len(arcs), weighted)
    return Digraph(n, tuple((i, j, w) for (i, j), w in zip(arcs, ws)))


def converging_path(n: int) -> Digraph:
    """``n-1 -> n-2 -> ... -> 0`` with unit weights."""
    return Digraph(n, tuple((v, v - 1, 1.0) for v in range(n - 1, 0, -1)))


def strongly_connected_digraph(
    rng: np.random.Generator, n: int, p: float | None = None, weighted: bool = True
) -> Digraph:
    """A random Hamiltonian cycle plus random extra arcs."""
    base = random_digraph(rng, n, p, weighted=False)
    arcs = {(i, j) for i, j, _ in base.arcs}
    if n > 1:
        order = [int(v) for v in rng.permutation(n)]
        arcs.update(zip(order, order[1:] + order[:1]))
    arcs = sorted(arcs)
    ws = _weights(rng, len(arcs), weighted)
    return Digraph(n, tuple((i, j, w) for (i, j), w in zip(arcs, ws)))


def all_digraphs(n: int) -> Iterator[Digraph]:
    """Every labelled digraph on ``n`` vertices with unit weights."""
    pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
    for mask in itertools.product((False, True), repeat=len(pairs)):
        yield Digraph(n, tuple((i, j, 1.0) for (i, j), keep in zip(pairs, mask) if keep))


def nonisomorphic_digraphs(n: int) -> Iterator[Digraph]:
    """One unit-weight representative per isomorphism class on ``n`` vertices.

    Every adjacency bitmask is mapped to its minimum image over all vertex
    permutations (vectorized over masks); the distinct minima are the
    classes.  Practical up to ``n = 5`` (2**20 masks).
    """
    pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
    bit = {pair: k for k, pair in enumerate(pairs)}
    masks = np.arange(1 << len(pairs), dtype=np.int64)
    canon = masks.copy()
    for perm in itertools.permutations(range(n)):
        image = np.zeros_like(masks)
        for (i, j), k in bit.items():
            image |= ((masks >> k) & 1) << bit[perm[i], perm[j]]
        np.minimum(canon, image, out=canon)
    for mask in np.unique(canon):
        mask = int(mask)
        yield Digraph(n, tuple((i, j, 1.0) for (i, j), k in bit.items() if mask >> k & 1))
