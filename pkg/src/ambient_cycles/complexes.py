"""Neighbourhood graphs and flag 2-skeleta on lifted point clouds.

`build_epsilon_graph` joins two cloud points whenever their base distance
is <= epsilon (closed threshold; callers wanting the ball-intersection
convention pass 2*epsilon) and records flag triangles, i.e. vertex
triples whose three sides are all edges.  `cycle_basis` returns the
standard spanning-forest basis of the graph's first homology: one
fundamental cycle per non-tree edge.  Everything is deterministic:
vertices keep their input order, edges are sorted pairs, BFS visits
neighbours in ascending order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InputError
from .kinds import SurfaceKind
from .orbit import DEFAULT_TIE_TOL, pairwise_base_distances
from .surfaces import CoverPoint

DUPLICATE_TOL = 1e-12


@dataclass(frozen=True)
class LiftedPointCloud:
    """Base points with one chosen cover-space lift each."""

    kind: SurfaceKind
    points: tuple[CoverPoint, ...]

    def __post_init__(self):
        pts = tuple(self.points)
        object.__setattr__(self, "points", pts)
        for p in pts:
            if p.kind is not self.kind:
                raise InputError("all cloud points must share the surface kind")

    @property
    def size(self) -> int:
        return len(self.points)


@dataclass
class EpsilonGraph:
    """Neighbourhood graph at scale epsilon, with flag triangles."""

    n: int
    epsilon: float
    edges: list[tuple[int, int]]                 # i < j, sorted
    edge_lengths: list[float]
    degenerate: list[bool]                       # tied orbit minimisers
    triangles: list[tuple[int, int, int]]        # i < j < k, sorted

    def edge_index(self) -> dict[tuple[int, int], int]:
        return {e: i for i, e in enumerate(self.edges)}

    def adjacency(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for i, j in self.edges:
            adj[i].append(j)
            adj[j].append(i)
        for nbrs in adj:
            nbrs.sort()
        return adj

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "epsilon": self.epsilon,
            "edges": [
                [i, j, l, bool(d)]
                for (i, j), l, d in zip(self.edges, self.edge_lengths, self.degenerate)
            ],
            "triangles": [list(t) for t in self.triangles],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "EpsilonGraph":
        edges = [(int(e[0]), int(e[1])) for e in obj["edges"]]
        lengths = [float(e[2]) for e in obj["edges"]]
        degen = [bool(e[3]) for e in obj["edges"]]
        tris = [tuple(int(v) for v in t) for t in obj["triangles"]]
        return cls(int(obj["n"]), float(obj["epsilon"]), edges, lengths, degen, tris)


def build_epsilon_graph(
    cloud: LiftedPointCloud,
    epsilon: float,
    tie_tol: float = DEFAULT_TIE_TOL,
) -> EpsilonGraph:
    """Edges at base distance <= epsilon, flag triangles, degeneracy flags.

    Raises InputError on duplicate base points (pairwise base distance
    below 1e-12): the quotient identifies them even if the lifts differ.
    """
    if epsilon <= 0:
        raise InputError("epsilon must be positive")
    dist, tied = pairwise_base_distances(cloud.kind, list(cloud.points), tie_tol)
    n = cloud.size
    dup = np.argwhere(np.triu(dist <= DUPLICATE_TOL, k=1))
    if len(dup):
        i, j = dup[0]
        raise InputError(f"duplicate base points at indices {i} and {j}")

    edges, lengths, degen = [], [], []
    for i in range(n):
        for j in range(i + 1, n):
            if dist[i, j] <= epsilon:
                edges.append((i, j))
                lengths.append(float(dist[i, j]))
                degen.append(bool(tied[i, j]))

    edge_set = set(edges)
    triangles = [
        (i, j, k)
        for i, j in edges
        for k in range(j + 1, n)
        if (i, k) in edge_set and (j, k) in edge_set
    ]
    return EpsilonGraph(n, float(epsilon), edges, lengths, degen, triangles)


@dataclass
class CycleBasis:
    """Spanning-forest fundamental-cycle basis of a graph's H1."""

    parent: list[int]                            # BFS forest, -1 at roots
    cycles: list[list[int]]                      # closed vertex walks [v0,...,v0]
    non_tree_edges: list[tuple[int, int]]

    @property
    def rank(self) -> int:
        return len(self.cycles)

    def cycle_chain(self, idx: int) -> list[tuple[int, tuple[int, int]]]:
        """The cycle as an oriented integer edge chain [(coef, (i, j)), ...]."""
        walk = self.cycles[idx]
        return [(1, (walk[s], walk[s + 1])) for s in range(len(walk) - 1)]


def cycle_basis(graph: EpsilonGraph) -> CycleBasis:
    """BFS spanning forest plus one fundamental cycle per non-tree edge.

    Each cycle is a closed walk starting with the non-tree edge i -> j
    (i < j), returning through the forest path from j back to i.
    """
    adj = graph.adjacency()
    parent = [-1] * graph.n
    depth = [0] * graph.n
    seen = [False] * graph.n
    tree_edges: set[tuple[int, int]] = set()
    for root in range(graph.n):
        if seen[root]:
            continue
        seen[root] = True
        queue = [root]
        while queue:
            v = queue.pop(0)
            for w in adj[v]:
                if not seen[w]:
                    seen[w] = True
                    parent[w] = v
                    depth[w] = depth[v] + 1
                    tree_edges.add((min(v, w), max(v, w)))
                    queue.append(w)

    non_tree = [e for e in graph.edges if e not in tree_edges]
    cycles = []
    for i, j in non_tree:
        # forest path j -> i via the lowest common ancestor
        up_i, up_j = [i], [j]
        a, b = i, j
        while depth[a] > depth[b]:
            a = parent[a]
            up_i.append(a)
        while depth[b] > depth[a]:
            b = parent[b]
            up_j.append(b)
        while a != b:
            a = parent[a]
            b = parent[b]
            up_i.append(a)
            up_j.append(b)
        # walk: i -> j (non-tree edge), then j up to lca, then lca down to i
        walk = [i, j] + up_j[1:] + list(reversed(up_i[:-1]))
        cycles.append(walk)
    return CycleBasis(parent, cycles, non_tree)
