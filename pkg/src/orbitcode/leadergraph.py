"""Graphs on coset leaders induced by a generating set.

Vertices are the leaders of one tower stage; a directed edge labeled a runs
from c to d when c = a d for a generator a.  These graphs explain two things
about a tower: how a decoder can navigate a stage by local moves instead of
scanning every leader, and how far a single generator slip can displace one
factor of a canonical form (it moves it to an adjacent vertex).

For the towers in this package the graphs come out as cycles (phase stages)
and paths (insertion stages); shape() names what a stage produced so tests
and the command line can assert it.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .linalg import TOL, dist


def fmt_element(g) -> str:
    fmt = getattr(g, "format", None)
    return fmt() if callable(fmt) else str(g)


@dataclass
class LeaderGraph:
    vertices: list
    gens: list
    # (i, j, k): vertices[i] = gens[k] * vertices[j]
    edges: list[tuple[int, int, int]] = field(default_factory=list)

    def __post_init__(self):
        self._index = {v: i for i, v in enumerate(self.vertices)}
        self._adj: dict[int, set[int]] = {i: set() for i in range(len(self.vertices))}
        for i, j, _ in self.edges:
            self._adj[i].add(j)
            self._adj[j].add(i)

    def neighbors(self, v) -> list:
        return [self.vertices[j] for j in sorted(self._adj[self._index[v]])]

    def adjacent(self, u, v) -> bool:
        iu, iv = self._index.get(u), self._index.get(v)
        if iu is None or iv is None:
            return False
        return iv in self._adj[iu]

    def undirected_edge_count(self) -> int:
        return sum(len(s) for s in self._adj.values()) // 2

    def is_connected(self) -> bool:
        if not self.vertices:
            return True
        seen = {0}
        frontier = [0]
        while frontier:
            i = frontier.pop()
            for j in self._adj[i]:
                if j not in seen:
                    seen.add(j)
                    frontier.append(j)
        return len(seen) == len(self.vertices)

    def shape(self) -> str:
        """One of single, path, cycle, tree, other, disconnected."""
        n = len(self.vertices)
        if n == 0:
            return "empty"
        if not self.is_connected():
            return "disconnected"
        if n == 1:
            return "single"
        e = self.undirected_edge_count()
        degrees = [len(self._adj[i]) for i in range(n)]
        if e == n and all(d == 2 for d in degrees):
            return "cycle"
        if e == n - 1:
            return "path" if max(degrees) <= 2 else "tree"
        return "other"

    def to_dot(self, name: str = "leaders") -> str:
        """Deterministic DOT text: vertex order as given, edges sorted."""
        lines = [f"digraph {name} {{"]
        for i, v in enumerate(self.vertices):
            label = fmt_element(v).replace('"', r"\"")
            lines.append(f'  n{i} [label="{label}"];')
        for i, j, k in sorted(self.edges):
            label = fmt_element(self.gens[k]).replace('"', r"\"")
            lines.append(f'  n{i} -> n{j} [label="{label}"];')
        lines.append("}")
        return "\n".join(lines)


def build(group, leaders, gens) -> LeaderGraph:
    """Leader graph of one stage: edge c -> d labeled a whenever c = a d."""
    leaders = list(leaders)
    gens = list(gens)
    index = {v: i for i, v in enumerate(leaders)}
    edges = []
    for j, d in enumerate(leaders):
        for k, a in enumerate(gens):
            c = group.mul(a, d)
            i = index.get(c)
            if i is not None and i != j:
                edges.append((i, j, k))
    return LeaderGraph(vertices=leaders, gens=gens, edges=edges)


def descend(graph: LeaderGraph, group, x0, y, start=None, tau: float = TOL):
    """Pick a stage leader by walking the graph downhill from the identity.

    From the current vertex, move to the neighbor whose action brings y
    closest to x0, as long as that improves on staying put; stop otherwise.
    On the cycle and path graphs of the standard towers this finds the same
    leader as a full scan.  Returns (leader, distance evaluations).
    """
    cur = graph.vertices[0] if start is None else start
    cost = dist(group.apply(cur, y), x0)
    evaluations = 1
    visited = {cur}
    while True:
        best, best_cost = None, cost
        for v in graph.neighbors(cur):
            if v in visited:
                continue
            c = dist(group.apply(v, y), x0)
            evaluations += 1
            if c < best_cost - tau:
                best, best_cost = v, c
        if best is None:
            return cur, evaluations
        cur, cost = best, best_cost
        visited.add(cur)
