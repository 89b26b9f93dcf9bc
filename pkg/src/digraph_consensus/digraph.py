"""Weighted digraphs, the edge-list text format, and the Laplacian.

Orientation: an arc ``(i, j, w)`` sets ``a_ij = w``, i.e. agent ``i`` listens
to agent ``j``.  The Laplacian is ``L = D - A`` with ``D`` the diagonal of
weighted out-degrees, so every row of ``L`` sums to zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

Arc = tuple[int, int, float]


class EdgeListError(ValueError):
    """Malformed edge-list input.  ``line`` is 1-based, or None if global."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class Digraph:
    """Immutable weighted digraph on vertices ``0..n-1``.

    At most one arc per ordered pair, no self-loops, every weight positive
    and finite.  Violations raise ``ValueError`` at construction.
    """

    n: int
    arcs: tuple[Arc, ...] = ()
    _out: tuple[tuple[tuple[int, float], ...], ...] = field(
        init=False, repr=False, compare=False
    )

    def __post_init__(self) -> None:
        if not isinstance(self.n, (int, np.integer)) or self.n < 0:
            raise ValueError(f"vertex count must be a non-negative integer, got {self.n!r}")
        object.__setattr__(self, "n", int(self.n))
        arcs = []
        seen = set()
        for arc in self.arcs:
            if len(arc) == 2:
                i, j = arc
                w = 1.0
            else:
                i, j, w = arc
            i, j, w = int(i), int(j), float(w)
            _check_arc(self.n, i, j, w)
            if (i, j) in seen:
                raise ValueError(f"duplicate arc {i}->{j}")
            seen.add((i, j))
            arcs.append((i, j, w))
        object.__setattr__(self, "arcs", tuple(arcs))
        out: list[list[tuple[int, float]]] = [[] for _ in range(self.n)]
        for i, j, w in arcs:
            out[i].append((j, w))
        object.__setattr__(self, "_out", tuple(tuple(sorted(o)) for o in out))

    @property
    def m(self) -> int:
        return len(self.arcs)

    def out_arcs(self, i: int) -> tuple[tuple[int, float], ...]:
        """Heads and weights of the arcs leaving ``i``, sorted by head."""
        return self._out[i]

    def successors(self, i: int) -> list[int]:
        return [j for j, _ in self._out[i]]

    def adjacency(self) -> np.ndarray:
        a = np.zeros((self.n, self.n))
        for i, j, w in self.arcs:
            a[i, j] = w
        return a

    def to_edge_list(self) -> str:
        """Serialize in the format read by :func:`parse_edge_list`."""
        lines = [f"{self.n} {self.m}"]
        lines.extend(f"{i} {j} {w!r}" for i, j, w in self.arcs)
        return "\n".join(lines) + "\n"


def _check_arc(n: int, i: int, j: int, w: float) -> None:
    if not (0 <= i < n and 0 <= j < n):
        raise ValueError(f"arc {i}->{j} has a vertex outside 0..{n - 1}")
    if i == j:
        raise ValueError(f"self-loop at vertex {i}")
    if not math.isfinite(w) or w <= 0:
        raise ValueError(f"arc {i}->{j} has non-positive or non-finite weight {w!r}")


def _content_lines(text: str) -> Iterator[tuple[int, str]]:
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line and not line.startswith("#"):
            yield lineno, line


def _parse_int(token: str, what: str, lineno: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise EdgeListError(f"{what} is not an integer: {token!r}", lineno) from None


def parse_edge_list(text: str | bytes) -> Digraph:
    """Parse the edge-list format.

    The first content line is ``"n m"``; it is followed by exactly ``m`` arc
    lines ``"i j"`` or ``"i j w"`` (weight defaults to 1.0).  Blank lines and
    lines starting with ``#`` are skipped.  Errors carry the offending line.
    """
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    if text.startswith("﻿"):
        text = text[1:]
    lines = _content_lines(text)
    try:
        lineno, header = next(lines)
    except StopIteration:
        raise EdgeListError("empty input: expected header 'n m'") from None
    fields = header.split()
    if len(fields) != 2:
        raise EdgeListError(f"header must be 'n m', got {header!r}", lineno)
    n = _parse_int(fields[0], "vertex count", lineno)
    m = _parse_int(fields[1], "arc count", lineno)
    if n < 0 or m < 0:
        raise EdgeListError("vertex and arc counts must be non-negative", lineno)

    arcs: list[Arc] = []
    seen: dict[tuple[int, int], int] = {}
    for lineno, line in lines:
        if len(arcs) == m:
            raise EdgeListError(f"more arc lines than the declared {m}", lineno)
        fields = line.split()
        if len(fields) not in (2, 3):
            raise EdgeListError(f"expected 'i j' or 'i j w', got {line!r}", lineno)
        i = _parse_int(fields[0], "tail", lineno)
        j = _parse_int(fields[1], "head", lineno)
        if len(fields) == 3:
            try:
                w = float(fields[2])
            except ValueError:
                raise EdgeListError(f"weight is not a number: {fields[2]!r}", lineno) from None
        else:
            w = 1.0
        try:
            _check_arc(n, i, j, w)
        except ValueError as exc:
            raise EdgeListError(str(exc), lineno) from None
        if (i, j) in seen:
            raise EdgeListError(
                f"duplicate arc {i}->{j} (first given on line {seen[i, j]})", lineno
            )
        seen[i, j] = lineno
        arcs.append((i, j, w))
    if len(arcs) != m:
        raise EdgeListError(f"header declares {m} arcs but {len(arcs)} were given")
    return Digraph(n, tuple(arcs))


def laplacian(g: Digraph) -> np.ndarray:
    """Dense ``L = D - A``; rows sum to zero, off-diagonals are ``-a_ij``."""
    lap = np.zeros((g.n, g.n))
    for i, j, w in g.arcs:
        lap[i, j] = -w
    for i in range(g.n):
        # fsum is exactly rounded, so the diagonal does not depend on arc order
        lap[i, i] = math.fsum(w for _, w in g.out_arcs(i))
    return lap
