import itertools

import numpy as np
import pytest

import ambient_cycles as ac
from ambient_cycles import SurfaceKind as K
from ambient_cycles.complexes import LiftedPointCloud, build_epsilon_graph, cycle_basis
from ambient_cycles.errors import InputError

from oracles import gf2_rank


def torus_cloud(coords):
    return LiftedPointCloud(K.TORUS, tuple(ac.point(K.TORUS, x, y) for x, y in coords))


def test_path_graph_with_wrap_gap():
    cloud = torus_cloud([(0, 0), (0.3, 0), (0.6, 0)])
    g = build_epsilon_graph(cloud, 0.35)
    assert g.edges == [(0, 1), (1, 2)]       # wrap edge 2-0 has length 0.4
    assert g.triangles == []


def test_empty_graph_below_min_distance():
    cloud = torus_cloud([(0, 0), (0.3, 0), (0.6, 0)])
    g = build_epsilon_graph(cloud, 0.05)
    assert g.edges == [] and g.triangles == []


def test_four_cycle_at_quarter_spacing():
    cloud = torus_cloud([(k / 4, 0) for k in range(4)])
    g = build_epsilon_graph(cloud, 0.25)
    assert g.edges == [(0, 1), (0, 3), (1, 2), (2, 3)]
    assert g.triangles == []
    basis = cycle_basis(g)
    assert basis.rank == 1
    assert len(basis.cycles[0]) == 5          # closed walk over 4 vertices


def test_tree_has_empty_basis():
    cloud = torus_cloud([(0.1 * k, 0.0) for k in range(5)])
    g = build_epsilon_graph(cloud, 0.11)
    assert len(g.edges) == 4
    assert cycle_basis(g).rank == 0


def test_complete_graph_k4_basis():
    cloud = torus_cloud([(0, 0), (0.1, 0), (0, 0.1), (0.1, 0.1)])
    g = build_epsilon_graph(cloud, 0.2)
    assert len(g.edges) == 6
    basis = cycle_basis(g)
    assert basis.rank == 3                    # |E| - n + c = 6 - 4 + 1
    assert len(g.triangles) == 4


def test_edge_monotonicity_in_epsilon():
    rng = np.random.default_rng(0)
    pts = [(float(x), float(y)) for x, y in rng.random((12, 2))]
    cloud = torus_cloud(pts)
    e_small = set(build_epsilon_graph(cloud, 0.2).edges)
    e_large = set(build_epsilon_graph(cloud, 0.3).edges)
    assert e_small <= e_large


def test_flag_triangles_match_brute_force():
    rng = np.random.default_rng(1)
    pts = [(float(x), float(y)) for x, y in rng.random((10, 2))]
    cloud = torus_cloud(pts)
    g = build_epsilon_graph(cloud, 0.3)
    edge_set = set(g.edges)
    expect = [
        t
        for t in itertools.combinations(range(10), 3)
        if all(e in edge_set for e in itertools.combinations(t, 2))
    ]
    assert g.triangles == expect


def test_cycle_rank_matches_gf2_boundary_rank():
    rng = np.random.default_rng(2)
    for n in (5, 8, 12):
        pts = [(float(x), float(y)) for x, y in rng.random((n, 2))]
        cloud = torus_cloud(pts)
        g = build_epsilon_graph(cloud, 0.35)
        # rank of the vertex-boundary matrix over GF(2) equals n - c
        rows = [(1 << i) | (1 << j) for i, j in g.edges]
        rank1 = gf2_rank(rows)
        betti1 = len(g.edges) - rank1
        assert cycle_basis(g).rank == betti1


def test_cycles_are_closed_walks_on_edges():
    rng = np.random.default_rng(3)
    pts = [(float(x), float(y)) for x, y in rng.random((15, 2))]
    cloud = torus_cloud(pts)
    g = build_epsilon_graph(cloud, 0.3)
    basis = cycle_basis(g)
    edge_set = set(g.edges)
    for walk, (i, j) in zip(basis.cycles, basis.non_tree_edges):
        assert walk[0] == walk[-1]
        assert walk[0] == i and walk[1] == j and i < j
        for a, b in zip(walk[:-1], walk[1:]):
            assert (min(a, b), max(a, b)) in edge_set


def test_duplicate_base_points_rejected():
    cloud = torus_cloud([(0.1, 0.1), (1.1, 0.1)])      # same base point, lifts differ
    with pytest.raises(InputError, match="duplicate"):
        build_epsilon_graph(cloud, 0.2)


def test_epsilon_validation():
    with pytest.raises(InputError):
        build_epsilon_graph(torus_cloud([(0, 0), (0.5, 0.5)]), 0.0)


def test_mixed_kind_cloud_rejected():
    with pytest.raises(InputError):
        LiftedPointCloud(K.TORUS, (ac.point(K.KLEIN_BOTTLE, 0.1, 0.1),))


def test_graph_json_round_trip():
    cloud = torus_cloud([(0, 0), (0.2, 0), (0.2, 0.2), (0, 0.2)])
    g = build_epsilon_graph(cloud, 0.3)
    back = ac.EpsilonGraph.from_json(g.to_json())
    assert back.edges == g.edges
    assert back.triangles == g.triangles
    assert back.edge_lengths == g.edge_lengths
    assert back.degenerate == g.degenerate


def test_degeneracy_flag_on_tied_edge():
    # base distance 0.5 attained by two shifts: flagged, still an edge
    cloud = torus_cloud([(0.25, 0.4), (0.75, 0.4)])
    g = build_epsilon_graph(cloud, 0.5)
    assert g.edges == [(0, 1)]
    assert g.degenerate == [True]
