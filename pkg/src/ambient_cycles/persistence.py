"""Four-point Vietoris-Rips persistence and class-decomposed measures.

Four points admit at most one 1-cycle with nontrivial persistence.  It
exists iff the points can be labelled x0..x3 with

    d(x0,x1) >= d(x2,x3) = death > birth = max cross-pair distance,

where the cross pairs are {0,1} x {2,3}: the two "diagonal" pairs outlive
the four cross edges, so the neighbourhood graph is a 4-cycle exactly for
scales in [birth, death).  Boundary ties (death == birth) are declared
trivial and flagged degenerate, matching the strict inequality.

`classify_quadruple` attaches the ambient homology class of that cycle:
the cycle graph at the midpoint scale gets its transition map, and the
class is the abelianized sum around the cycle, reported with a canonical
sign (first nonzero free coordinate positive) so that histograms over
many samples are well defined.

`principal_persistence_measure` draws independent uniform quadruples,
classifies each, and aggregates: an empirical, class-decomposed sample of
the surface's first principal persistence measure.  All randomness is
drawn up front from the seed, so results are reproducible and independent
of chunking or worker count.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import genus2
from .abelian import AbelianClass
from .complexes import EpsilonGraph, LiftedPointCloud
from .errors import InputError, ResourceLimitError
from .kinds import CLASS_SHAPE, SurfaceKind
from .orbit import DEFAULT_TIE_TOL, base_distance_block, pairwise_base_distances
from .surfaces import sample_uniform_array
from .transition import compute_transition, homology_class

# unordered vertex pairs of a quadruple, in slot order
SLOT_PAIRS = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))
_SLOT_OF = {pair: s for s, pair in enumerate(SLOT_PAIRS)}

# the three perfect matchings into two diagonal pairs
_MATCHINGS = (
    {"diag": (0, 5), "cross": (1, 2, 3, 4), "pairs": ((0, 1), (2, 3))},
    {"diag": (1, 4), "cross": (0, 2, 3, 5), "pairs": ((0, 2), (1, 3))},
    {"diag": (2, 3), "cross": (0, 1, 4, 5), "pairs": ((0, 3), (1, 2))},
)


@dataclass
class QuadrupleResult:
    """Outcome of the four-point persistence test (class optional)."""

    trivial: bool
    degenerate: bool
    birth: float | None = None
    death: float | None = None
    labelling: tuple[int, int, int, int] | None = None
    cycle_order: tuple[int, int, int, int] | None = None
    cls: AbelianClass | None = None


def _check_matrix(distances) -> np.ndarray:
    d = np.asarray(distances, dtype=float)
    if d.shape != (4, 4):
        raise InputError("distance matrix must be 4x4")
    if not np.all(np.isfinite(d)):
        raise InputError("distance matrix has non-finite entries")
    if np.max(np.abs(d - d.T)) > 1e-12 or np.any(np.diag(d) != 0.0):
        raise InputError("distance matrix must be symmetric with zero diagonal")
    off = d[~np.eye(4, dtype=bool)]
    if np.any(off <= 0.0):
        raise InputError("off-diagonal distances must be positive")
    return d


def _slot_vector(d: np.ndarray) -> np.ndarray:
    return np.array([d[i, j] for i, j in SLOT_PAIRS])


def four_point_batch(D: np.ndarray):
    """Vectorised persistence test on (n, 6) slot-distance rows.

    Returns (nontrivial, boundary_degenerate, birth, death, labelling):
    labelling rows are the permutation x0..x3 with diagonals (x0,x1) and
    (x2,x3); entries of trivial rows are undefined.
    """
    n = len(D)
    nontrivial = np.zeros(n, dtype=bool)
    boundary = np.zeros(n, dtype=bool)
    birth = np.zeros(n)
    death = np.zeros(n)
    labelling = np.zeros((n, 4), dtype=np.int64)

    for match in _MATCHINGS:
        d_a = D[:, match["diag"][0]]
        d_b = D[:, match["diag"][1]]
        dmin = np.minimum(d_a, d_b)
        b = D[:, match["cross"]].max(axis=1)
        valid = dmin > b
        boundary |= dmin == b
        fresh = valid & ~nontrivial
        if not fresh.any():
            continue
        nontrivial |= valid
        birth[fresh] = b[fresh]
        death[fresh] = dmin[fresh]
        pair_a, pair_b = match["pairs"]
        larger_is_a = d_a >= d_b
        lab = np.where(
            larger_is_a[:, None],
            np.array(pair_a + pair_b)[None, :],
            np.array(pair_b + pair_a)[None, :],
        )
        labelling[fresh] = lab[fresh]

    boundary &= ~nontrivial
    return nontrivial, boundary, birth, death, labelling


def four_point_persistence(distances) -> QuadrupleResult:
    """Persistence of the unique candidate 1-cycle on four points.

    Non-trivial iff some labelling satisfies the strict inequality chain;
    then death is the smaller diagonal and birth the largest cross
    distance.  Boundary ties are trivial with the degenerate flag set.
    """
    d = _check_matrix(distances)
    nontrivial, boundary, birth, death, labelling = four_point_batch(
        _slot_vector(d)[None, :]
    )
    if not nontrivial[0]:
        return QuadrupleResult(trivial=True, degenerate=bool(boundary[0]))
    lab = tuple(int(v) for v in labelling[0])
    order = (lab[0], lab[2], lab[1], lab[3])
    return QuadrupleResult(
        trivial=False,
        degenerate=False,
        birth=float(birth[0]),
        death=float(death[0]),
        labelling=lab,
        cycle_order=order,
    )


def minimal_cycle_graph(distances, result: QuadrupleResult, epsilon: float) -> EpsilonGraph:
    """The neighbourhood graph on the quadruple at a scale in [birth, death).

    Its edges are exactly the four cross pairs and every vertex has degree
    two; a violation indicates inconsistent inputs and raises
    AssertionError.
    """
    if result.trivial or result.birth is None:
        raise InputError("quadruple has no persistent cycle")
    if not (result.birth <= epsilon < result.death):
        raise InputError("epsilon must lie in [birth, death)")
    d = _check_matrix(distances)
    edges, lengths = [], []
    degree = [0] * 4
    for i, j in SLOT_PAIRS:
        if d[i, j] <= epsilon:
            edges.append((i, j))
            lengths.append(float(d[i, j]))
            degree[i] += 1
            degree[j] += 1
    assert len(edges) == 4 and all(deg == 2 for deg in degree), (
        "scale inside the persistence interval must cut a 4-cycle"
    )
    return EpsilonGraph(4, float(epsilon), edges, lengths, [False] * 4, [])


def classify_quadruple(
    cloud: LiftedPointCloud,
    tie_tol: float = DEFAULT_TIE_TOL,
) -> QuadrupleResult:
    """Four-point persistence plus the ambient class of the cycle.

    The class is evaluated at the midpoint scale (birth+death)/2 from the
    transition map on the cycle's four edges, traversed from the labelled
    vertex x0 through x2, x1, x3; tied orbit minimisers on any cycle edge
    propagate to the degenerate flag.  The class sign is canonical.
    """
    if cloud.size != 4:
        raise InputError("classify_quadruple expects exactly 4 points")
    dist, tied = pairwise_base_distances(cloud.kind, list(cloud.points), tie_tol)
    if np.any(np.triu(dist, k=1)[np.triu_indices(4, k=1)] <= 0.0):
        raise InputError("quadruple has duplicate base points")
    res = four_point_persistence(dist)
    if res.trivial:
        return res
    epsilon = 0.5 * (res.birth + res.death)
    graph = minimal_cycle_graph(dist, res, epsilon)
    tmap = compute_transition(cloud, graph, tie_tol)
    v0, v1, v2, v3 = res.cycle_order
    chain = [(1, (v0, v1)), (1, (v1, v2)), (1, (v2, v3)), (1, (v3, v0))]
    cls = homology_class(tmap, chain).canonical_sign()
    degenerate = bool(tmap.degenerate_edges) or any(
        tied[i, j] for i, j in graph.edges
    )
    res.cls = cls
    res.degenerate = degenerate
    return res


# -- Monte Carlo measure ------------------------------------------------------

@dataclass
class MeasurePoint:
    index: int
    birth: float
    death: float
    cls: AbelianClass
    degenerate: bool


@dataclass
class MeasureSample:
    """Empirical class-decomposed principal persistence measure."""

    surface: SurfaceKind
    total: int
    persistent: int
    degenerate: int
    skipped: int
    points: list[MeasurePoint] = field(default_factory=list)

    @property
    def phi_bar(self) -> float:
        return self.persistent / self.total if self.total else 0.0

    def class_counts(self) -> dict[str, int]:
        """Counts per canonical class label, excluding degenerate points."""
        counts: dict[str, int] = {}
        for pt in self.points:
            if pt.degenerate:
                continue
            counts[pt.cls.label()] = counts.get(pt.cls.label(), 0) + 1
        return dict(sorted(counts.items()))

    def summary(self) -> dict:
        return {
            "surface": self.surface.value,
            "total": self.total,
            "persistent": self.persistent,
            "phi_bar": self.phi_bar,
            "class_counts": self.class_counts(),
            "degenerate": self.degenerate,
            "skipped": self.skipped,
        }


def _slot_points(X, slot_pair, kind):
    i, j = slot_pair
    if kind is SurfaceKind.GENUS_TWO:
        return X[i::4], X[j::4]
    return X[i::4, :], X[j::4, :]


def _classify_chunk(kind, X, offset, tie_tol, config):
    """Classify a chunk of quadruples stored as 4 consecutive points each."""
    nquad = (len(X)) // 4
    D = np.zeros((nquad, 6))
    tied = np.zeros((nquad, 6), dtype=bool)
    nf, nt = CLASS_SHAPE[kind]
    ab_free = np.zeros((nquad, 6, nf), dtype=np.int64)
    ab_tors = np.zeros((nquad, 6, nt), dtype=np.int64)
    for s, pair in enumerate(SLOT_PAIRS):
        P, Q = _slot_points(X, pair, kind)
        res = base_distance_block(kind, P, Q, tie_tol, config)
        D[:, s] = res.dist
        tied[:, s] = res.tied
        ab_free[:, s, :] = res.ab_free
        ab_tors[:, s, :] = res.ab_tors

    nontrivial, _boundary, birth, death, labelling = four_point_batch(D)
    idx = np.nonzero(nontrivial)[0]
    out = []
    for q in idx:
        lab = labelling[q]
        order = (lab[0], lab[2], lab[1], lab[3])
        free = np.zeros(nf, dtype=np.int64)
        tors = np.zeros(nt, dtype=np.int64)
        degenerate = False
        for a, b in zip(order, (*order[1:], order[0])):
            if a < b:
                s = _SLOT_OF[(a, b)]
                sign = 1
            else:
                s = _SLOT_OF[(b, a)]
                sign = -1
            free += sign * ab_free[q, s]
            tors += ab_tors[q, s]
            degenerate |= bool(tied[q, s])
        cls = AbelianClass(
            kind, tuple(int(v) for v in free), tuple(int(v) % 2 for v in tors)
        ).canonical_sign()
        out.append(
            MeasurePoint(
                index=offset + int(q),
                birth=float(birth[q]),
                death=float(death[q]),
                cls=cls,
                degenerate=degenerate,
            )
        )
    return out


def principal_persistence_measure(
    kind: SurfaceKind,
    n_samples: int,
    seed: int,
    tie_tol: float = DEFAULT_TIE_TOL,
    config: genus2.GenusTwoConfig = genus2.DEFAULT_CONFIG,
    threads: int = 1,
    chunk: int = 16384,
    progress: Callable[[int, int], None] | None = None,
) -> MeasureSample:
    """Draw and classify `n_samples` independent uniform quadruples.

    Deterministic in (kind, n_samples, seed); all random draws happen
    before classification, so neither chunk size nor worker count affects
    the output.  Quadruples that exhaust the search budget are counted in
    `skipped` and excluded.
    """
    if n_samples < 1:
        raise InputError("n_samples must be >= 1")
    rng = np.random.default_rng(seed)
    X = sample_uniform_array(kind, 4 * n_samples, rng)

    ranges = [(lo, min(lo + chunk, n_samples)) for lo in range(0, n_samples, chunk)]

    skipped = 0
    results: list[MeasurePoint] = []

    def run(rg):
        lo, hi = rg
        block = X[4 * lo : 4 * hi]
        try:
            return _classify_chunk(kind, block, lo, tie_tol, config), 0
        except ResourceLimitError:
            pts, bad = [], 0
            for q in range(lo, hi):
                quad = X[4 * q : 4 * q + 4]
                try:
                    pts.extend(_classify_chunk(kind, quad, q, tie_tol, config))
                except ResourceLimitError:
                    bad += 1
            return pts, bad

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            outputs = list(pool.map(run, ranges))
    else:
        outputs = []
        for k, rg in enumerate(ranges):
            outputs.append(run(rg))
            if progress is not None:
                progress(rg[1], n_samples)
    for pts, bad in outputs:
        results.extend(pts)
        skipped += bad

    results.sort(key=lambda p: p.index)
    return MeasureSample(
        surface=kind,
        total=n_samples,
        persistent=len(results),
        degenerate=sum(1 for p in results if p.degenerate),
        skipped=skipped,
        points=results,
    )


def write_jsonl(sample: MeasureSample, stream) -> None:
    """One record per persistent quadruple, floats at 17 significant digits."""
    for pt in sample.points:
        free = ",".join(str(v) for v in pt.cls.free)
        tors = ",".join(str(v) for v in pt.cls.torsion)
        stream.write(
            f'{{"surface": "{sample.surface.value}", "index": {pt.index}, '
            f'"birth": {pt.birth:.17g}, "death": {pt.death:.17g}, '
            f'"class_free": [{free}], "class_torsion": [{tors}], '
            f'"degenerate": {"true" if pt.degenerate else "false"}}}\n'
        )
