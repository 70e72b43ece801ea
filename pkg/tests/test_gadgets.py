import math
from fractions import Fraction

import pytest

from predimlab import (
    ControlFunction,
    FiniteStructure,
    InputError,
    beatty,
    build_fan_join,
    build_gadget,
    build_tower_amalgam,
    delta,
    delta_rel,
    gadget_params,
    girth,
    graph,
    graph_signature,
    hypergraph_signature,
    in_C0,
    self_sufficient,
    verify_gadget,
)
from predimlab.gadgets import (
    build_cycle_fan,
    build_double_cycle,
    sample_c_closures,
    sample_closed_connected_subsets,
)


def test_beatty_examples():
    assert beatty(2, 5).period == (0, 0, 1, 0, 1)
    assert beatty(1, 2).period == (0, 1)
    with pytest.raises(InputError):
        beatty(5, 5)
    with pytest.raises(InputError):
        beatty(0, 3)


def test_beatty_window_sums():
    for ell, b in [(2, 5), (3, 8), (1, 7), (7, 12)]:
        seq = beatty(ell, b)
        for start in range(-b, b + 1):
            assert seq.window_sum(start, b) == ell
            for s in range(1, 3 * b + 1):
                assert (seq.window_sum(start, s) - 1) * b <= s * ell


def test_gadget_params_examples():
    p = gadget_params(3, 2)
    assert (p.a, p.c, p.b, p.ell, p.case) == (1, 1, 1, 1, "B_EQUALS_1")
    p = gadget_params(12, 5)
    assert (p.a, p.c, p.b, p.ell, p.case) == (2, 2, 2, 1, "B_GE_2")
    assert p.ell * p.m - p.c * p.b == 1
    assert gadget_params(5, 1).case == "M_EQUALS_1"
    with pytest.raises(InputError):
        gadget_params(6, 3)
    with pytest.raises(InputError):
        gadget_params(2, 2, r=2)


def test_gadget_bezout_identity_across_grid():
    for n in range(2, 30):
        for m in range(2, n):
            if math.gcd(n, m) != 1:
                continue
            p = gadget_params(n, m)
            assert p.ell * m - p.c * p.b == 1
            assert 0 < p.b < m and 0 < p.ell <= p.b
            assert n == m * p.a + p.c and 0 < p.c < m


def test_build_gadget_basic_shapes():
    g = build_gadget(2, 1, 2)
    assert len(g.x_set) == 3 and len(g.structure.vertices) == 4
    assert delta_rel(g.structure, sorted(g.y_minus_x), sorted(g.x_set)) == -1
    g32 = build_gadget(3, 2, 2)
    assert len(g32.x_set) == 2
    assert delta_rel(g32.structure, sorted(g32.y_minus_x), sorted(g32.x_set)) == -1
    g85 = build_gadget(8, 5, 2)
    assert g85.params.b == 3 and not g85.degenerate
    assert build_gadget(12, 5, 2).degenerate  # 2-cycle collapses
    assert build_gadget(5, 4, 2).degenerate  # skeleton base too small


def test_build_gadget_determinism():
    a = build_gadget(9, 4, 2)
    b = build_gadget(9, 4, 2)
    assert a.structure == b.structure and a.x_set == b.x_set


def test_verify_gadget_pass_and_degenerate():
    rep = verify_gadget(build_gadget(2, 1, 2))
    assert rep.ok and {c.status for c in rep.cases} == {"PASS"}
    rep = verify_gadget(build_gadget(12, 5, 2))
    assert {c.status for c in rep.cases} == {"DEGENERATE"}


def test_verify_gadget_catches_corruption():
    g = build_gadget(2, 1, 2)
    S = g.structure
    inst = {name: list(tups) for name, tups in S.instances.items()}
    inst["R"].pop()
    corrupted = type(g)(FiniteStructure(S.signature, S.vertices, inst), g.x_set, g.params)
    rep = verify_gadget(corrupted)
    fails = rep.failures()
    assert fails and all(c.witness for c in fails)


def test_gadget_outputs_stay_in_c0():
    for n, m, r in [(2, 1, 2), (3, 2, 2), (8, 5, 2), (9, 4, 2), (1, 1, 3), (3, 2, 3)]:
        g = build_gadget(n, m, r)
        assert in_C0(g.structure).holds


def test_tower_amalgam_point_case():
    sig = graph_signature(2, 1)
    tower = build_tower_amalgam(
        FiniteStructure(sig, [0]), FiniteStructure(sig, [1]), [], build_gadget(2, 1, 2)
    )
    E = tower.structure
    assert len(E.vertices) == 4
    assert len(tower.copy_blocks) == 2
    assert self_sufficient(E, tower.c_block)[0]
    for blk in tower.copy_blocks:
        assert self_sufficient(E, blk)[0]
    assert in_C0(E).holds
    assert delta(E, E.vertices) >= delta(FiniteStructure(sig, [0]), [0])


def test_tower_amalgam_rejects_base_relations():
    sig = graph_signature(2, 1)
    g = build_gadget(2, 1, 2)
    S = g.structure
    inst = {name: list(tups) for name, tups in S.instances.items()}
    inst["R"].append((0, 1))
    bad = type(g)(FiniteStructure(S.signature, S.vertices, inst), g.x_set, g.params)
    with pytest.raises(InputError):
        build_tower_amalgam(FiniteStructure(sig, [0]), FiniteStructure(sig, [1]), [], bad)


def test_tower_amalgam_empty_arms():
    sig = graph_signature(2, 1)
    tower = build_tower_amalgam(
        FiniteStructure(sig, [0]), FiniteStructure(sig, []), [], build_gadget(2, 1, 2)
    )
    assert tower.copy_blocks == ()
    assert self_sufficient(tower.structure, tower.c_block)[0]


def test_fan_join_r3():
    f = ControlFunction.half_harmonic(1)
    B = FiniteStructure(hypergraph_signature(1, 1, 3), [0, 1])
    res = build_fan_join(B, [0], 1, 3, f)
    assert res.membership.holds
    assert all(res.copies_d_closed)
    assert res.base_with_join_d_closed
    assert all(res.probe.spokes_perp_base)
    assert res.probe.anchor_in_closure


def test_fan_join_r4_and_growth_bound():
    f = ControlFunction.half_harmonic(1)
    sig = hypergraph_signature(1, 1, 4)
    B = FiniteStructure(sig, [0, 1, 2, 3], {"R": [(0, 1, 2, 3)]})
    res = build_fan_join(B, [0, 1], 2, 4, f)
    assert res.membership.holds
    assert res.log_bound_checked > 0
    assert res.log_bound_ok


def test_fan_join_default_family_conflict_is_real():
    # with unit anchor and full harmonic increments, the joined relation set
    # dips below the bound: this documents why the slow family is used
    f = ControlFunction.harmonic(1)
    B = FiniteStructure(hypergraph_signature(1, 1, 3), [0, 1])
    res = build_fan_join(B, [0], 1, 3, f)
    assert not res.membership.holds
    assert res.membership.witness == frozenset({2, 3, 4})
    assert res.membership.margin == Fraction(2) - Fraction(5, 2)


def test_double_cycle_shape():
    dc = build_double_cycle(73, 6)
    CD = dc.structure
    assert len(CD.vertices) == 146
    assert delta(CD, CD.vertices) == 73
    assert girth(CD) == 6
    with pytest.raises(InputError):
        build_double_cycle(72, 6)  # step not coprime
    with pytest.raises(InputError):
        build_double_cycle(73, 7)  # 12*step exceeds s


def test_double_cycle_sampling():
    dc = build_double_cycle(73, 6)
    samp = sample_closed_connected_subsets(dc, count=120, seed=7)
    assert samp.ok and samp.samples == 120
    sc = sample_c_closures(dc, count=60, seed=3)
    assert sc.ok


def test_cycle_fan():
    dc = build_double_cycle(73, 6)
    fan = build_cycle_fan(dc, ControlFunction.harmonic(2))
    assert len(fan.structure.vertices) == 219
    assert fan.delta_e == 146
    assert fan.delta_bound_ok
    assert fan.smallest_valid_s == 73
    assert all(fan.d_samples_closed)
    assert all(fan.copies_sampled_closed)
    assert fan.b_closure_is_all
