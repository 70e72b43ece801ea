import itertools
from hypothesis import given, settings
from hypothesis import strategies as st

from predimlab import (
    cl0,
    cld,
    dim,
    graph,
    in_C0,
    is_d_closed,
    path_graph,
    self_sufficient,
)
from predimlab.closures import _flow_solve, _table_solve, d_closed_subset_masks
from predimlab.builder import enumerate_class, C0
from predimlab.structures import graph_signature

from conftest import brute_delta, brute_min_superset, small_graphs, small_hypergraphs


def test_cl0_examples():
    P2 = path_graph(2)
    res = cl0(P2, [0, 2])
    assert res.closure == frozenset({0, 2})
    assert res.dimension == 4
    assert res.trace == ()
    T = graph([(0, 1), (1, 2), (0, 2)])
    assert cl0(T, [0]).closure == frozenset({0})
    # fixed point: an already strong set closes to itself
    assert cl0(P2, [0, 1, 2]).closure == frozenset({0, 1, 2})


def test_cl0_trace_records_absorption():
    E = graph([(0, 1)], n=1, m=2)
    res = cl0(E, [0])
    assert res.closure == frozenset({0, 1})
    assert res.trace == (frozenset({1}),)


def test_dim_examples():
    P3 = path_graph(3)
    assert dim(P3, [0, 3]) == 4
    assert dim(P3, []) == 0
    T = graph([(0, 1), (1, 2), (0, 2)])
    assert dim(T, [0, 1, 2]) == 3


def test_cld_examples():
    P2 = path_graph(2)
    assert cld(P2, [0, 2]) == frozenset({0, 1, 2})
    P3 = path_graph(3)
    assert cld(P3, [0, 3]) == frozenset({0, 3})
    assert cld(P3, P3.vertices) == frozenset(P3.vertices)


def test_is_d_closed_examples():
    assert not is_d_closed(path_graph(2), [0, 2])
    assert is_d_closed(path_graph(3), [0, 3])
    # single vertices and the empty set are closed in these graphs
    P = path_graph(4)
    assert is_d_closed(P, [])
    for v in P.vertices:
        assert is_d_closed(P, [v])


@given(small_graphs())
@settings(max_examples=80, deadline=None)
def test_engines_match_brute_oracle(S):
    for k in range(len(S.vertices) + 1):
        for X in itertools.combinations(S.vertices, k):
            oracle = brute_min_superset(S, X)
            xmask = S.mask_of(X)
            for solver in (_table_solve, _flow_solve):
                val, minimal, maximal = solver(S, xmask)
                assert val == oracle[0]
                assert S.ids_of(minimal) == oracle[1]
                assert S.ids_of(maximal) == oracle[2]


@given(small_hypergraphs())
@settings(max_examples=40, deadline=None)
def test_engines_match_brute_oracle_hypergraphs(S):
    for k in range(min(len(S.vertices), 3) + 1):
        for X in itertools.combinations(S.vertices, k):
            oracle = brute_min_superset(S, X)
            xmask = S.mask_of(X)
            assert _table_solve(S, xmask)[0] == _flow_solve(S, xmask)[0] == oracle[0]
            assert _table_solve(S, xmask) == _flow_solve(S, xmask)


def _c0_structures_up_to(n):
    sig = graph_signature(2, 1)
    return [S for S in enumerate_class(sig, C0, n)]


def test_cl0_is_closure_operator_exhaustive():
    for S in _c0_structures_up_to(6):
        verts = list(S.vertices)
        closures = {}
        for k in range(len(verts) + 1):
            for X in itertools.combinations(verts, k):
                closures[frozenset(X)] = cl0(S, X).closure
        for X, cx in closures.items():
            assert X <= cx  # extensive
            assert closures[cx] == cx  # idempotent
            ok, _ = self_sufficient(S, cx)
            assert ok
            for Y, cy in closures.items():
                if X <= Y:
                    assert cx <= cy  # monotone
            # smallest strong superset: intersection of all strong supersets
            strong = [
                frozenset(Y)
                for k in range(len(verts) + 1)
                for Y in itertools.combinations(verts, k)
                if X <= set(Y) and self_sufficient(S, Y)[0]
            ]
            assert cx == frozenset.intersection(*strong)


def test_cld_properties_exhaustive_small():
    for S in _c0_structures_up_to(5):
        verts = list(S.vertices)
        for k in range(len(verts) + 1):
            for X in itertools.combinations(verts, k):
                dx = cld(S, X)
                assert cl0(S, X).closure <= dx
                assert cld(S, dx) == dx  # idempotent
                assert brute_delta(S, dx) == dim(S, X)
                for v in S.vertices:
                    got = dim(S, set(X) | {v})
                    assert (got == dim(S, X)) == (v in dx)


@given(small_graphs(max_n=6))
@settings(max_examples=40, deadline=None)
def test_dim_monotonicity_bounds(S):
    n_w = S.signature.vertex_weight
    verts = list(S.vertices)
    for k in range(len(verts) + 1):
        for X in itertools.combinations(verts, k):
            dX = dim(S, X)
            for j in range(k, len(verts) + 1):
                for Y in itertools.combinations(verts, j):
                    if set(X) <= set(Y):
                        dY = dim(S, Y)
                        assert dX <= dY <= dX + n_w * (len(Y) - len(X))


def test_d_closed_enumeration_matches_pointwise():
    S = graph([(0, 1), (1, 2), (2, 3), (3, 0), (1, 3)])
    masks = set(d_closed_subset_masks(S))
    for k in range(len(S.vertices) + 1):
        for X in itertools.combinations(S.vertices, k):
            assert (S.mask_of(X) in masks) == is_d_closed(S, X)


def test_flow_engine_on_large_ambient():
    # a 60-vertex cycle: far past the table cutoff, still exact
    S = graph([(i, (i + 1) % 60) for i in range(60)])
    assert dim(S, [0]) == 2
    assert cld(S, [0]) == frozenset({0})
    ok, _ = self_sufficient(S, [0, 1])
    assert ok
    assert in_C0(S).holds
