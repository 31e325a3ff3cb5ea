import itertools

import pytest
from hypothesis import given, settings, strategies as st

import oracles as O
from conftest import total_classes
from unirates.core import ConceptClass, full_class
from unirates.dimensions import natarajan_dim
from unirates.errors import InputError, ProtocolError
from unirates.one_inclusion import (
    OneInclusionPredictor,
    build_graph,
    graph_from_vectors,
    loo_report,
    min_max_orientation,
    orient,
    partial_completion_class,
    predict,
)
from unirates.partial import build_biclique_class, cycle4_instance


def test_square_graph():
    g = build_graph(full_class(2, 1), [0, 1])
    assert len(g.vertices) == 4 and len(g.edges) == 4
    assert min_max_orientation(g)[0] == 1


def test_single_vertex_graph():
    g = build_graph(ConceptClass(1, 2, ((0, 1),)), [0, 1])
    assert len(g.vertices) == 1 and g.edges == []
    assert min_max_orientation(g)[0] == 0


def test_three_way_hyperedge():
    g = build_graph(ConceptClass(2, 3, ((0, 0, 0), (0, 0, 1), (0, 0, 2))), [0, 1, 2])
    assert g.edges == [(2, (0, 1, 2))]


def test_star_orients_to_leaves():
    vs = [(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)]
    g = graph_from_vectors([0, 1, 2], vs)
    d, heads = min_max_orientation(g)
    assert d == 1
    assert max(g.out_degrees(heads)) == 1


def test_empty_projection_gives_empty_graph():
    H = ConceptClass(1, 2, ((0, -1), (-1, 1)), partial=True)
    g = build_graph(H, [0, 1])
    assert g.vertices == () and min_max_orientation(g)[0] == 0


def test_predict_examples():
    assert predict(ConceptClass(1, 2, ((0, 0), (1, 1))), [(0, 0)], 1) == 0
    H = full_class(2, 1)
    g = build_graph(H, [0, 1])
    orient(g)
    e = g.edge_at(g.vertex_id((0, 0)), 1)
    assert predict(H, [(0, 0)], 1) == g.vertices[g.heads[e]][1]


def test_predict_rejects_unrealizable():
    with pytest.raises(ProtocolError):
        predict(ConceptClass(1, 2, ((0, 0),)), [(0, 1)], 1)
    with pytest.raises(ProtocolError):
        predict(full_class(2, 1), [(0, 1), (0, 0)], 1)


def test_partial_completion_examples():
    H = ConceptClass(1, 2, ((0, -1), (-1, 1)), partial=True)
    assert len(partial_completion_class(H, [0, 1])) == 0
    assert predict(H, [(0, 0)], 1) == 0
    H2 = ConceptClass(1, 2, ((0, 1),), partial=True)
    assert partial_completion_class(H2, [0, 1]).hypotheses == ((0, 1),)
    with pytest.raises(InputError):
        partial_completion_class(full_class(2, 1), [0])


def test_biclique_completion_natarajan():
    B = build_biclique_class(cycle4_instance(), 2)
    for m in range(1, B.domain_size + 1):
        for pts in itertools.combinations(range(B.domain_size), m):
            C = partial_completion_class(B, pts)
            assert natarajan_dim(C) <= natarajan_dim(B)


def test_loo_report_on_square():
    r = loo_report(full_class(2, 1), [0, 1])
    assert r.labelings == 4 and r.strict_ok
    assert r.error <= r.bound


@settings(max_examples=40)
@given(total_classes(max_n=3, max_k=2, max_size=8))
def test_orientation_is_optimal(H):
    pts = list(range(H.domain_size))
    g = build_graph(H, pts)
    d, heads = min_max_orientation(g)
    assert max(g.out_degrees(heads), default=0) == d
    assert d == O.exhaustive_min_orientation(g.vertices, [m for _, m in g.edges])


@settings(max_examples=40)
@given(total_classes(max_n=4, max_k=2, max_size=12))
def test_orientation_within_natarajan_bound(H):
    rep, _ = orient(build_graph(H, list(range(H.domain_size))), H.k)
    assert rep.within_bound


@settings(max_examples=40)
@given(total_classes(max_n=4, max_k=2, max_size=12), st.data())
def test_prediction_is_consistent_continuation(H, data):
    h = data.draw(st.sampled_from(H.hypotheses))
    xs = data.draw(st.sets(st.integers(0, H.domain_size - 1), max_size=H.domain_size - 1))
    test = data.draw(st.integers(0, H.domain_size - 1))
    labeled = [(x, h[x]) for x in sorted(xs)]
    y = OneInclusionPredictor(H).predict(labeled, test)
    assert H.index.consistent(labeled + [(test, y)])
