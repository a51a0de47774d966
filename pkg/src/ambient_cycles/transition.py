"""Transition maps on neighbourhood graphs and loop/homology evaluation.

An edge i -> j of a graph on a lifted cloud gets the deck element
carrying the lift of x_j nearest to the lift of x_i:

    t(i -> j) = argmin_g  d_cover(lift_i, g . lift_j),

so d_cover(lift_i, t(ij) . lift_j) equals the base distance of the edge
and t(j -> i) = t(i -> j)^-1.  On flag triangles the values satisfy the
cocycle identity t(ij) t(jk) = t(ik) at small scales; `verify_cocycle`
reports violations rather than raising, since large-scale triangles are
outside the regime where the identity is guaranteed.

Changing the lifts by theta(i) (a gauge transformation) conjugates edge
values, t'(ij) = theta(i)^-1 t(ij) theta(j); ordered products over loops
are conjugated as a whole, and abelianized cycle classes are invariant.
That invariance is what makes `homology_class` well defined on the
underlying surface.
"""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from dataclasses import dataclass

from .abelian import AbelianClass
from .complexes import CycleBasis, EpsilonGraph, LiftedPointCloud, build_epsilon_graph, cycle_basis
from .errors import InputError
from .kinds import SurfaceKind
from .orbit import DEFAULT_TIE_TOL, base_distance
from .surfaces import (
    GroupElement,
    abelianize,
    element_from_payload,
    element_to_payload,
    invert,
    multiply,
)


@dataclass
class TransitionMap:
    """Deck-element assignment to oriented edges of a graph."""

    kind: SurfaceKind
    graph: EpsilonGraph
    forward: dict[tuple[int, int], GroupElement]   # keyed by (i, j) with i < j
    degenerate_edges: set[tuple[int, int]]

    def element(self, i: int, j: int) -> GroupElement:
        """t(i -> j) for either orientation of a graph edge."""
        if i < j:
            key = (i, j)
            if key not in self.forward:
                raise InputError(f"({i},{j}) is not a graph edge")
            return self.forward[key]
        if j < i:
            return invert(self.element(j, i))
        raise InputError("self-loops carry no transition element")

    def to_json(self) -> dict:
        return {
            "surface": self.kind.value,
            "edges": [
                [i, j, element_to_payload(g)] for (i, j), g in sorted(self.forward.items())
            ],
            "degenerate_edges": sorted(list(e) for e in self.degenerate_edges),
        }

    @classmethod
    def from_json(cls, graph: EpsilonGraph, obj: dict) -> "TransitionMap":
        kind = SurfaceKind(obj["surface"])
        forward = {
            (int(i), int(j)): element_from_payload(kind, payload)
            for i, j, payload in obj["edges"]
        }
        degen = {tuple(e) for e in obj.get("degenerate_edges", [])}
        return cls(kind, graph, forward, degen)


def compute_transition(
    cloud: LiftedPointCloud,
    graph: EpsilonGraph,
    tie_tol: float = DEFAULT_TIE_TOL,
) -> TransitionMap:
    """Edge minimisers for a graph built on the cloud.

    Tied minimisers (within tie_tol) pick the canonically smallest element
    and flag the edge as degenerate; downstream classifications touching a
    degenerate edge are marked unreliable, never silently resolved.
    """
    if graph.n != cloud.size:
        raise InputError("graph was not built on this cloud")
    forward: dict[tuple[int, int], GroupElement] = {}
    degenerate: set[tuple[int, int]] = set()
    for i, j in graph.edges:
        _, mins = base_distance(cloud.kind, cloud.points[i], cloud.points[j], tie_tol)
        forward[(i, j)] = mins[0]
        if len(mins) > 1:
            degenerate.add((i, j))
    return TransitionMap(cloud.kind, graph, forward, degenerate)


@dataclass
class CocycleReport:
    checked: int
    violations: list[tuple[int, int, int]]

    @property
    def ok(self) -> bool:
        return not self.violations


def verify_cocycle(t: TransitionMap) -> CocycleReport:
    """Check t(ij) t(jk) == t(ik) on every flag triangle of the graph."""
    violations = []
    for i, j, k in t.graph.triangles:
        if multiply(t.element(i, j), t.element(j, k)) != t.element(i, k):
            violations.append((i, j, k))
    return CocycleReport(len(t.graph.triangles), violations)


def gauge_transform(
    t: TransitionMap,
    theta: Sequence[GroupElement] | Mapping[int, GroupElement],
) -> TransitionMap:
    """Re-lift by theta: t'(ij) = theta(i)^-1 t(ij) theta(j).

    Equivalent to recomputing the transition map after replacing each lift
    x_i by theta(i)^-1 . x_i; both paths agree exactly.
    """
    def th(v: int) -> GroupElement:
        g = theta[v]
        if g.kind is not t.kind:
            raise InputError("gauge element kind mismatch")
        return g

    for v in range(t.graph.n):
        th(v)  # fail fast if theta misses a vertex
    forward = {
        (i, j): multiply(multiply(invert(th(i)), g), th(j))
        for (i, j), g in t.forward.items()
    }
    return TransitionMap(t.kind, t.graph, forward, set(t.degenerate_edges))


def loop_monodromy(t: TransitionMap, loop: Sequence[int]) -> GroupElement:
    """Ordered product of edge elements along a closed walk.

    The walk is a vertex sequence [v0, v1, ..., vm, v0] (explicitly
    closed); every consecutive pair must be a graph edge.
    """
    if len(loop) < 2 or loop[0] != loop[-1]:
        raise InputError("loop must be a closed walk [v0, ..., v0]")
    product = GroupElement.identity(t.kind)
    for a, b in zip(loop[:-1], loop[1:]):
        product = multiply(product, t.element(a, b))
    return product


def homology_class(
    t: TransitionMap,
    chain: Sequence[tuple[int, tuple[int, int]]],
) -> AbelianClass:
    """Abelianized class of an integer edge cycle.

    The chain is [(coefficient, (i, j)), ...] over oriented graph edges;
    its boundary must vanish.  The class is the coefficient-weighted sum
    of abelianized edge elements, equal to the abelianized loop monodromy
    for a simple loop.
    """
    boundary: dict[int, int] = {}
    for coef, (i, j) in chain:
        if i == j:
            raise InputError("chains may not contain self-loops")
        boundary[j] = boundary.get(j, 0) + coef
        boundary[i] = boundary.get(i, 0) - coef
    if any(v != 0 for v in boundary.values()):
        raise InputError("chain has non-zero boundary; not a cycle")
    total = AbelianClass.zero(t.kind)
    for coef, (i, j) in chain:
        total = total + abelianize(t.element(i, j)).scale(coef)
    return total


@dataclass
class CycleClassification:
    walk: list[int]
    cls: AbelianClass
    unreliable: bool     # some edge of the cycle had tied minimisers


@dataclass
class CloudClassification:
    """End-to-end classification of a lifted cloud at one scale."""

    kind: SurfaceKind
    epsilon: float
    graph: EpsilonGraph
    transition: TransitionMap
    basis: CycleBasis
    classes: list[CycleClassification]
    cocycle: CocycleReport

    def to_json(self) -> dict:
        return {
            "surface": self.kind.value,
            "epsilon": self.epsilon,
            "graph": self.graph.to_json(),
            "transition": self.transition.to_json(),
            "cycles": [
                {
                    "walk": c.walk,
                    "class_free": list(c.cls.free),
                    "class_torsion": list(c.cls.torsion),
                    "label": c.cls.label(),
                    "unreliable": c.unreliable,
                }
                for c in self.classes
            ],
            "cocycle": {
                "checked": self.cocycle.checked,
                "violations": [list(v) for v in self.cocycle.violations],
            },
            "degenerate_edges": sorted(list(e) for e in self.transition.degenerate_edges),
        }


def classify_cloud(
    cloud: LiftedPointCloud,
    epsilon: float,
    tie_tol: float = DEFAULT_TIE_TOL,
) -> CloudClassification:
    """Build the graph, transition map, cycle basis, and per-cycle classes."""
    graph = build_epsilon_graph(cloud, epsilon, tie_tol)
    t = compute_transition(cloud, graph, tie_tol)
    basis = cycle_basis(graph)
    classes = []
    for idx, walk in enumerate(basis.cycles):
        cls = homology_class(t, basis.cycle_chain(idx))
        edges = {tuple(sorted(e)) for _, e in basis.cycle_chain(idx)}
        unreliable = bool(edges & t.degenerate_edges)
        classes.append(CycleClassification(walk, cls, unreliable))
    return CloudClassification(
        cloud.kind, float(epsilon), graph, t, basis, classes, verify_cocycle(t)
    )
