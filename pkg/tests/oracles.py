"""Independent brute-force oracles used by the test suite.

Nothing here shares logic with the package: the four-point persistence
oracle runs an explicit flag filtration with simplicial homology over
GF(2); graph Betti numbers come from boundary-matrix ranks; the torus
closed form uses fractional parts.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

# unordered vertex pairs of a quadruple, slot order fixed
PAIRS = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))


def gf2_rank(rows: list[int]) -> int:
    """Rank over GF(2) of rows given as bit masks."""
    rank = 0
    basis: list[int] = []
    for row in rows:
        for b in basis:
            row = min(row, row ^ b)
        if row:
            basis.append(row)
            basis.sort(reverse=True)
            rank += 1
    return rank


def _components(n: int, edges) -> int:
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for i, j in edges:
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[ri] = rj
    return len({find(v) for v in range(n)})


def flag_betti1(n: int, edges: list[tuple[int, int]]) -> int:
    """First Betti number of the flag complex on the given graph."""
    edge_set = set(edges)
    edge_idx = {e: k for k, e in enumerate(sorted(edge_set))}
    triangles = [
        (i, j, k)
        for i, j, k in itertools.combinations(range(n), 3)
        if (i, j) in edge_set and (i, k) in edge_set and (j, k) in edge_set
    ]
    rows = []
    for i, j, k in triangles:
        rows.append(
            (1 << edge_idx[(i, j)]) | (1 << edge_idx[(i, k)]) | (1 << edge_idx[(j, k)])
        )
    rank2 = gf2_rank(rows)
    c = _components(n, edge_set)
    return len(edge_set) - n + c - rank2


# Betti-1 of the 4-vertex flag complex for each of the 64 edge masks.
_BETTI_TABLE = np.array(
    [
        flag_betti1(4, [PAIRS[j] for j in range(6) if mask & (1 << j)])
        for mask in range(64)
    ],
    dtype=np.int64,
)


def vr_four_point(d6) -> tuple[bool, float, float]:
    """Four-point Vietoris-Rips persistence by explicit filtration.

    d6: the six pairwise distances in slot order.  Walks the <= filtration
    over the sorted distance values, reading Betti-1 of the flag complex
    at each step.  Returns (trivial, birth, death).  Caller should skip
    inputs with tied distances, where step order is ambiguous.
    """
    d = list(d6)
    values = sorted(set(d))
    betti = []
    for t in values:
        mask = sum((1 << j) for j in range(6) if d[j] <= t)
        betti.append(int(_BETTI_TABLE[mask]))
    assert all(b in (0, 1) for b in betti), "four points carry at most one cycle"
    if 1 not in betti:
        return True, 0.0, 0.0
    first = betti.index(1)
    after = first
    while after < len(betti) and betti[after] == 1:
        after += 1
    assert after < len(betti), "cycle must die by the full complex"
    assert all(b == 0 for b in betti[after:]), "single persistence interval"
    return False, values[first], values[after]


def vr_four_point_batch(D: np.ndarray):
    """Vectorised oracle on (n, 6) distance rows.

    Returns (trivial, birth, death, tied): rows with tied distances are
    flagged and their values are not meaningful.
    """
    n = len(D)
    sortd = np.sort(D, axis=1)
    tied = np.any(np.diff(sortd, axis=1) == 0.0, axis=1)
    # mask after the k-th step: bit j set iff D[:, j] <= k-th smallest
    below = D[:, None, :] <= sortd[:, :, None]          # (n, step, slot)
    masks = below @ (1 << np.arange(6))
    betti = _BETTI_TABLE[masks]                          # (n, 6)
    has = (betti == 1).any(axis=1)
    first = np.argmax(betti == 1, axis=1)
    # first zero step strictly after `first`
    steps = np.arange(6)[None, :]
    dead = (betti == 0) & (steps > first[:, None])
    death_idx = np.argmax(dead, axis=1)
    rows = np.arange(n)
    birth = sortd[rows, first]
    death = sortd[rows, death_idx]
    return ~has, birth, death, tied


def torus_closed_form(p, q) -> float:
    """Flat-torus quotient distance via fractional parts."""
    out = 0.0
    for a, b in zip(p, q):
        f = abs(a - b) % 1.0
        out += min(f, 1.0 - f) ** 2
    return math.sqrt(out)
