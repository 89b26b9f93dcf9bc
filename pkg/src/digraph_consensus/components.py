"""Strong and weak components, the condensation, and sink components."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from digraph_consensus.digraph import Digraph


@dataclass(frozen=True)
class ComponentDecomposition:
    """Connectivity structure of a digraph.

    Strong components are numbered in reverse topological order of the
    condensation (Tarjan's output order), so every condensation arc goes
    from a higher index to a lower one and sink components come first
    among their weak component.
    """

    n: int
    scc_id: tuple[int, ...]
    sccs: tuple[tuple[int, ...], ...]
    condensation: tuple[tuple[int, ...], ...]
    wcc_count: int
    sink_flags: tuple[bool, ...]

    @property
    def scc_count(self) -> int:
        return len(self.sccs)

    @property
    def sink_count(self) -> int:
        return sum(self.sink_flags)

    def sink_components(self) -> list[tuple[int, ...]]:
        return [c for c, sink in zip(self.sccs, self.sink_flags) if sink]


def strongly_connected_components(g: Digraph) -> list[list[int]]:
    """Tarjan's algorithm, iterative.  Components come out sinks-first."""
    index: dict[int, int] = {}
    lowlink: dict[int, int] = {}
    on_stack: set[int] = set()
    stack: list[int] = []
    result: list[list[int]] = []
    counter = 0

    for root in range(g.n):
        if root in index:
            continue
        work = [(root, iter(g.successors(root)))]
        index[root] = lowlink[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            for w in it:
                if w not in index:
                    index[w] = lowlink[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(g.successors(w))))
                    break
                if w in on_stack:
                    lowlink[v] = min(lowlink[v], index[w])
            else:
                work.pop()
                if work:
                    parent = work[-1][0]
                    lowlink[parent] = min(lowlink[parent], lowlink[v])
                if lowlink[v] == index[v]:
                    comp = []
                    while True:
                        w = stack.pop()
                        on_stack.discard(w)
                        comp.append(w)
                        if w == v:
                            break
                    result.append(sorted(comp))
    return result


def weak_component_count(g: Digraph) -> int:
    parent = list(range(g.n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    count = g.n
    for i, j, _ in g.arcs:
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[ri] = rj
            count -= 1
    return count


def decompose(g: Digraph) -> ComponentDecomposition:
    comps = strongly_connected_components(g)
    scc_id = [0] * g.n
    for k, comp in enumerate(comps):
        for v in comp:
            scc_id[v] = k
    succ: list[set[int]] = [set() for _ in comps]
    for i, j, _ in g.arcs:
        if scc_id[i] != scc_id[j]:
            succ[scc_id[i]].add(scc_id[j])
    return ComponentDecomposition(
        n=g.n,
        scc_id=tuple(scc_id),
        sccs=tuple(tuple(c) for c in comps),
        condensation=tuple(tuple(sorted(s)) for s in succ),
        wcc_count=weak_component_count(g),
        sink_flags=tuple(not s for s in succ),
    )


def forest_dimension_structural(dec: ComponentDecomposition) -> int:
    """In-forest dimension read off the structure: the number of sink SCCs."""
    return dec.sink_count


def _reaches_all(g: Digraph, target: int, reverse: list[list[int]]) -> bool:
    seen = {target}
    queue = deque([target])
    while queue:
        v = queue.popleft()
        for u in reverse[v]:
            if u not in seen:
                seen.add(u)
                queue.append(u)
    return len(seen) == g.n


def has_spanning_converging_tree(g: Digraph, dec: ComponentDecomposition | None = None) -> bool:
    """True iff some vertex is reachable from every vertex.

    Checked by reverse breadth-first search from each candidate root, not
    from the sink count, so it can serve as an independent check on it.
    ``dec`` is accepted for interface symmetry and only used to order the
    candidates.
    """
    if g.n == 0:
        return False
    reverse: list[list[int]] = [[] for _ in range(g.n)]
    for i, j, _ in g.arcs:
        reverse[j].append(i)
    candidates = range(g.n)
    if dec is not None:
        candidates = sorted(candidates, key=lambda v: not dec.sink_flags[dec.scc_id[v]])
    return any(_reaches_all(g, r, reverse) for r in candidates)
