import random

import pytest

from tilinglab.engine import (
    CapExceeded,
    caps,
    count_tilings,
    degree_bound,
    peel_forced,
    tgf,
    tgf_dfs,
    tgf_dp,
    tgf_points,
)
from tilinglab.formulas import diagonal_split_tgf
from tilinglab.lattice import L, R, Region, WeightFrame, vertical_edge
from tilinglab.qlaurent import QPoly, q_plus
from tilinglab.regions import HSpec, hex_intrusion, hexagon, trapezoid
from tilinglab.verify import random_region

q = QPoly.monomial(1)
qi = QPoly.monomial(-1)


def test_empty_region_has_one_tiling():
    empty = Region(frozenset())
    assert tgf_dfs(empty) == 1
    assert tgf_dp(empty) == 1


def test_smallest_hexagon():
    for engine in ("dfs", "dp", "both"):
        assert tgf(hexagon(1, 1, 1), engine) == q + qi


def test_forced_lozenge_on_axis():
    assert tgf_dp(trapezoid(0, 2, [-1, 1])) == 1


def test_unbalanced_and_blocked_regions_vanish():
    r = hexagon(2, 2, 2)
    one = sorted(r.tris)[0]
    assert tgf_dp(r.without([one])) == 0
    assert tgf_dfs(r.without([one])) == 0
    # barriers on all three edges of a corner triangle cut it off
    h = hexagon(1, 1, 1)
    left = [t for t in h.tris if t.orient == "L"]
    corner = min(left)
    from tilinglab.lattice import Edge

    blocked = h.without([], [Edge(corner, k) for k in "hud"])
    assert tgf_dp(blocked) == 0
    assert tgf_dfs(blocked) == 0


def test_barrier_removes_tilings():
    r = hexagon(2, 2, 2)
    mid = r.frame.axis2
    with_bar = r.without([], [vertical_edge(2, mid + 1)])
    assert 0 < count_tilings(with_bar) < count_tilings(r)
    assert tgf_dfs(with_bar) == tgf_dp(with_bar)


def test_engines_agree_on_random_regions():
    rng = random.Random(11)
    for _ in range(40):
        r = random_region(rng, 30)
        assert tgf_dfs(r) == tgf_dp(r)


def test_points_match_symbolic_value():
    r = hexagon(2, 2, 3, k=1)
    p = tgf_dp(r)
    for q0 in (2, 3, -2):
        assert tgf_points(r, q0) == p.eval_at(q0)
    rxy = hexagon(2, 1, 2, k=1, xy=True)
    assert tgf_points(rxy, 2, 3, 5) == tgf_dp(rxy).eval_at(2, 3, 5)


def test_degree_bound_covers_exponents():
    for r in (hexagon(2, 3, 2), hexagon(3, 3, 3, k=2), trapezoid(3, 3, [-5, -1, 3])):
        lo, hi = tgf_dp(r).q_degree_range()
        b = degree_bound(r)
        assert -b <= lo and hi <= b


def test_peel_preserves_generating_function():
    rng = random.Random(5)
    for _ in range(30):
        r = random_region(rng, 24)
        residual, factor = peel_forced(r)
        assert tgf_dfs(r) == factor * tgf_dfs(residual)


def test_peel_single_lozenge():
    r = Region(frozenset({L(1, 0), R(1, 0)}), frame=WeightFrame(0))
    residual, factor = peel_forced(r)
    assert len(residual) == 0 and factor == 1
    shifted = Region(r.tris, frame=WeightFrame(-2))
    assert peel_forced(shifted)[1] == q_plus(2)


def test_diagonal_split_matches_sweep():
    spec = HSpec(1, 1, 1, 2, 1, (-4, 4), (-6, 2, 6))
    assert diagonal_split_tgf(spec) == tgf_dp(hex_intrusion(spec))


def test_caps(monkeypatch):
    assert caps()["dp_width"] == 24
    monkeypatch.setenv("TILINGLAB_CAPS", '{"dp_width": 2, "dfs_triangles": 4}')
    with pytest.raises(CapExceeded):
        tgf_dp(hexagon(3, 3, 3))
    with pytest.raises(CapExceeded):
        tgf_dfs(hexagon(2, 2, 2))


def test_count_is_generating_function_at_one():
    r = hexagon(3, 2, 2, k=1)
    assert count_tilings(r) == tgf_dp(r).eval_at(1)
