"""Python-facing smoke tests over the bound C++ core."""

import math
import subprocess
import sys

import pytest

import ftspan


def test_graph_basics():
    g = ftspan.Graph(3, False, [(0, 1, 1.0, 1.0), (1, 2, 1.0, 1.0)])
    assert g.n == 3
    assert not g.directed
    assert ftspan.shortest_path_dist(g, 0, 2) == 2.0
    assert math.isinf(ftspan.shortest_path_dist(ftspan.Graph(2, False, []), 0, 1))


def test_bad_input_raises():
    with pytest.raises(ValueError):
        ftspan.Graph(2, True, [(0, 0, 1.0, 1.0)])


def test_remove_vertices_and_paths():
    g = ftspan.complete_graph(4, directed=True)
    cut = ftspan.remove_vertices(g, [3])
    assert cut.alive_edge_count() == 6
    mids = [p.mid for p in ftspan.length2_paths(g, 0, 1)]
    assert mids == [2, 3]


def test_greedy_and_stretch():
    g = ftspan.complete_graph(16, directed=False)
    s = ftspan.greedy_spanner(g, 3)
    assert s.size() <= 16 ** 1.5 + 16
    assert ftspan.verify_stretch(g, s, 3).ok


def test_ft_greedy_and_oracle():
    g = ftspan.complete_graph(5, directed=False)
    s = ftspan.ft_greedy(g, 3, 1, seed=7)
    assert ftspan.verify_ft(g, s, 3, 1).ok


def test_lp_gap_fixture():
    g = ftspan.gap_fixture(1000.0, 3)
    strong = ftspan.solve_lp(g, 3)
    assert abs(strong.objective - 1006.0) < 1e-5
    assert abs(strong.x[0] - 1.0) < 1e-6
    weak = ftspan.solve_lp(g, 3, use_kc_cuts=False)
    assert weak.objective <= 1000.0 / 4 + 6 + 1e-5


def test_approx_ft2():
    g = ftspan.complete_graph(6, directed=True)
    res = ftspan.approx_ft2(g, 1, seed=3)
    assert res.report.accepted
    assert ftspan.verify_ft2_char(g, res.spanner, 1).ok


def test_lll_round():
    g = ftspan.circulant_graph(12, 3)
    lp = ftspan.solve_lp(g, 1)
    res = ftspan.lll_round(g, 1, lp.x, seed=5)
    assert ftspan.verify_ft(g, res.spanner, 2, 1).ok
    assert res.report.cost <= 8 * res.report.alpha * lp.objective + 1e-9


def test_brute_optimum():
    g = ftspan.complete_graph(3, directed=True)
    opt = ftspan.brute_optimum_ft2(g, 1)
    assert opt.cost == 6.0


def test_padded_decomposition():
    g = ftspan.grid_graph(6, 6)
    p = ftspan.padded_decomposition(g, p_geom=0.1, r_cap=10, seed=1)
    assert sorted(m for c in p.clusters for m in c.members) == list(range(36))


def test_distributed_ft2():
    g = ftspan.complete_graph(6, directed=True)
    res = ftspan.distributed_ft2(g, 1, seed=2)
    assert res.report.verified
    assert res.report.xtilde_cost <= 4 * res.report.lp_central + 1e-9
    assert res.trace.rounds_used == res.report.rounds_used


def test_determinism():
    g = ftspan.gnp_graph(10, 0.5, directed=True, seed=4)
    a = ftspan.approx_ft2(g, 1, seed=11)
    b = ftspan.approx_ft2(g, 1, seed=11)
    assert list(a.spanner.edge_ids) == list(b.spanner.edge_ids)
