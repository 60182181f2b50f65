import random
from fractions import Fraction
from math import factorial

from hypothesis import HealthCheck, assume, given, settings
from hypothesis import strategies as st

from tilinglab.engine import count_tilings, peel_forced, tgf_dfs, tgf_dp, tgf_points
from tilinglab.formulas import hexagon_tgf, macmahon
from tilinglab.lattice import Region, Tri, balance, edge_between
from tilinglab.qlaurent import (
    QPoly,
    delta_11,
    delta_12,
    delta_21,
    delta_22,
    eval_at,
    hyper,
    hyper_q,
    q_fact,
    q_int,
    q_plus,
)
from tilinglab.regions import FernSpec, fern_weight, hexagon
from tilinglab.verify import lemma43_sides, random_region, _lemma43_draw

SETTINGS = settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])

small_int = st.integers(-12, 12)
coeff = st.fractions(min_value=-5, max_value=5, max_denominator=6)
polys = st.dictionaries(st.integers(-6, 6), coeff, max_size=5).map(QPoly.from_q_coeffs)
seeds = st.integers(0, 10**6)


def invert(p: QPoly) -> QPoly:
    return QPoly.from_q_coeffs({-e: c for e, c in p.q_coeffs().items()})


@SETTINGS
@given(small_int)
def test_q_int_odd_and_q_plus_even(n):
    assert q_int(-n) == -q_int(n)
    assert q_plus(-n) == q_plus(n)
    assert q_plus(n) * q_int(n) == q_int(2 * n) * Fraction(1, 2)


@SETTINGS
@given(st.integers(0, 7))
def test_q_equals_one_degenerations(n):
    assert eval_at(q_int(n), 1) == n
    assert eval_at(q_fact(n), 1) == factorial(n)
    assert eval_at(hyper_q(n), 1) == hyper(n)


@SETTINGS
@given(polys, polys, st.integers(1, 6) | st.fractions(min_value=Fraction(1, 5), max_value=5))
def test_eval_is_a_ring_morphism(a, b, q0):
    assert eval_at(a * b, q0) == eval_at(a, q0) * eval_at(b, q0)
    assert eval_at(a + b, q0) == eval_at(a, q0) + eval_at(b, q0)


@SETTINGS
@given(polys, polys)
def test_qpoly_canonical_and_serialisable(a, b):
    assert all(c != 0 for c in (a * b).terms.values())
    assert QPoly.from_list((a - b).to_list()) == a - b
    assert (a - a).is_zero()


@st.composite
def disjoint_label_sets(draw, k=3, positive=False):
    parity = draw(st.integers(0, 1))
    lo = 1 if positive else -10
    pool = draw(st.lists(st.integers(lo, 10).map(lambda v: 2 * v - parity), unique=True, max_size=9))
    cuts = sorted(draw(st.lists(st.integers(0, len(pool)), min_size=k - 1, max_size=k - 1)))
    bounds = [0, *cuts, len(pool)]
    return [pool[bounds[i]:bounds[i + 1]] for i in range(k)]


@SETTINGS
@given(disjoint_label_sets())
def test_delta_splitting_rules(sets):
    B, C, D = sets
    assert delta_11(B + C) == delta_11(B) * delta_12(B, C) * delta_11(C)
    assert delta_12(B + C, D) == delta_12(B, D) * delta_12(C, D)


@SETTINGS
@given(disjoint_label_sets(positive=True))
def test_delta_splitting_rules_positive_labels(sets):
    B, C, D = sets
    assert delta_22(B + C, D) == delta_22(B, D) * delta_22(C, D)
    assert delta_21(B + C) == delta_21(B) * delta_22(B, C) * delta_21(C)


@SETTINGS
@given(seeds)
def test_delta_reflection_identities(seed):
    draw = _lemma43_draw(random.Random(seed))
    lhs, rhs = lemma43_sides(draw)
    assert lhs == rhs


@st.composite
def symmetric_regions(draw):
    """A hexagon symmetric about its weight axis with mirrored dents."""
    a, b = draw(st.integers(1, 3)), draw(st.integers(1, 2))
    r = hexagon(a, b, b)
    ax = r.frame.axis2
    mirror = lambda t: Tri(t.col, 2 * ax - t.pos, t.orient)
    pick = sorted(r.tris)
    gone = set()
    for _ in range(draw(st.integers(0, 2))):
        t = draw(st.sampled_from(pick))
        gone |= {t, mirror(t)}
    return r.without(gone)


@SETTINGS
@given(symmetric_regions())
def test_palindromic_on_symmetric_regions(r):
    p = tgf_dp(r)
    assert invert(p) == p


@SETTINGS
@given(seeds)
def test_unbalanced_regions_have_zero_tgf(seed):
    r = random_region(random.Random(seed), 30)
    if balance(r) != 0:
        assert tgf_dp(r).is_zero()
        assert count_tilings(r) == 0


@SETTINGS
@given(seeds)
def test_search_and_sweep_agree(seed):
    r = random_region(random.Random(seed), 36)
    assert tgf_dfs(r) == tgf_dp(r)


@SETTINGS
@given(seeds)
def test_peeling_preserves_tgf(seed):
    r = random_region(random.Random(seed), 24)
    residual, factor = peel_forced(r)
    assert tgf_dfs(r) == factor * tgf_dfs(residual)


@SETTINGS
@given(seeds, st.integers(2, 5))
def test_points_engine_matches_symbolic_evaluation(seed, q0):
    r = random_region(random.Random(seed), 36)
    assert tgf_points(r, q0) == tgf_dp(r).eval_at(q0)
    assert count_tilings(r) == tgf_dp(r).eval_at(1)


@SETTINGS
@given(st.integers(0, 4), st.integers(0, 4), st.integers(0, 4))
def test_hexagon_closed_form_and_count(a, b, c):
    assume(a * b + b * c + c * a <= 16)
    assert count_tilings(hexagon(a, b, c)) == macmahon(a, b, c)
    if a * b + b * c + c * a <= 8:
        assert hexagon_tgf(a, b, c) == tgf_dp(hexagon(a, b, c))


@SETTINGS
@given(seeds)
def test_lozenge_hole_equals_barred_pair(seed):
    # cutting out a lozenge and fencing it in with barriers give the same count
    r = random_region(random.Random(seed), 30)
    pairs = sorted((t, u) for t in r.tris for u in r.partners(t) if t.orient == "L")
    assume(pairs)
    t, u = random.Random(seed).choice(pairs)
    fence = {(w, v) for w in (t, u) for v, _ in w.partners() if v not in (t, u)}
    barred = Region(r.tris, r.barriers | {edge_between(w, v) for w, v in fence}, r.frame)
    assert count_tilings(barred) == count_tilings(r.without([t, u]))


@SETTINGS
@given(st.lists(st.integers(1, 3), min_size=0, max_size=4).filter(lambda a: len(a) % 2 == 0), st.integers(0, 3))
def test_fern_weight_symmetric_under_flip(inner, last):
    arms = [*inner, last]
    assert fern_weight(FernSpec(tuple(arms))) == fern_weight(FernSpec(tuple(arms), True))
