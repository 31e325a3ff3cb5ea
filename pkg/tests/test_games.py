from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

import oracles as O
from conftest import total_classes
from unirates import dimensions as D
from unirates import games as G
from unirates.core import ConceptClass, constant_class, full_class, threshold_class
from unirates.errors import InputError, LimitError, ProtocolError

M = G.ExpGameMove


def test_exp_value_examples():
    assert G.exp_game_value(ConceptClass(1, 2, ((0, 1),))).value == 0
    assert G.exp_game_value(full_class(3, 1)).value == 3
    assert G.exp_game_value(threshold_class(4)).value == D.littlestone_dim_k(threshold_class(4)) == 2
    assert G.exp_game_value(ConceptClass(1, 2, ())).value == -1


def test_exp_strategy_examples():
    assert G.exp_learner_strategy(constant_class(2, 1), [M(0, 0, 1)]) == 0
    H = full_class(2, 1)
    bit = G.exp_learner_strategy(H, [M(0, 0, 1)])
    assert bit == 0
    assert G.exp_game_value(H, H.index.label_mask[0][0]).value == 1
    single = ConceptClass(2, 2, ((1, 2),))
    assert G.exp_learner_strategy(single, [M(1, 2, 0)]) == 1


def test_exp_strategy_rejects_illegal_moves():
    with pytest.raises(InputError):
        G.exp_learner_strategy(full_class(2, 1), [M(0, 1, 1)])
    with pytest.raises(InputError):
        G.exp_learner_strategy(full_class(2, 1), [])
    with pytest.raises(ProtocolError):
        G.exp_version_space(constant_class(2, 1), [M(0, 0, 1, 0), M(1, 0, 1, 1)])


def test_exp_optimal_play_lasts_value_rounds():
    for H in (full_class(3, 1), threshold_class(4), full_class(2, 2)):
        trace = G.exp_optimal_play(H)
        v = G.exp_game_value(H).value
        assert len(trace) == v
        assert [before for _, before in trace] == list(range(v, 0, -1))


def test_nl_value_examples():
    assert G.nl_game_value(ConceptClass(1, 3, ((0, 1, 1),))).value == 0
    assert G.nl_game_value(full_class(3, 2)).value >= 2
    assert G.nl_game_value(ConceptClass(1, 2, ())).value == -1
    with pytest.raises(LimitError):
        G.nl_game_value(full_class(2, 1), horizon=D.MAX_TREE_DEPTH + 1)


def test_nl_value_zero_means_some_pattern_missing():
    H = ConceptClass(2, 3, ((0, 1, 2),))
    for x in range(3):
        for a, b in combinations(range(3), 2):
            bit = G.nl_learner_strategy(H, [G.NLGameMove((x,), (a,), (b,))])
            assert not H.index.consistent([(x, (a, b)[bit[0]])])


def test_nl_strategy_rejects_equal_colorings():
    with pytest.raises(InputError):
        G.nl_learner_strategy(full_class(2, 1), [G.NLGameMove((0,), (1,), (1,))])
    with pytest.raises(InputError):
        G.nl_learner_strategy(full_class(2, 1), [G.NLGameMove((0, 1), (0, 0), (1, 1))])


def test_nl_optimal_play_matches_value():
    H = full_class(3, 2)
    trace = G.nl_optimal_play(H, 3)
    assert len(trace) == G.nl_game_value(H, 3).value
    for t, (mv, _) in enumerate(trace, start=1):
        assert len(mv.points) == t and len(mv.bits) == t


@given(total_classes(max_n=4, max_k=3, max_size=12))
def test_exp_value_equals_littlestone(H):
    assert G.exp_game_value(H).value == O.naive_ldim(H.hypotheses, H.domain_size, H.k)


@settings(max_examples=30)
@given(total_classes(max_n=3, max_k=2, max_size=8))
def test_nl_value_equals_tree_depth(H):
    assert G.nl_game_value(H, 2).value == min(O.naive_nl_depth(H.hypotheses, H.domain_size, H.k, 2), 2)


@given(total_classes(max_n=4, max_k=2, max_size=10), st.data())
def test_exp_learner_beats_any_adversary(H, data):
    # against the learner's bit, every adversary loses within value rounds
    v = G.exp_game_value(H).value
    idx, mask, history, survived = H.index, H.index.full, [], 0
    while mask:
        x = data.draw(st.integers(0, H.domain_size - 1))
        y0, y1 = data.draw(st.sampled_from(list(combinations(range(H.k + 1), 2))))
        if data.draw(st.booleans()):
            y0, y1 = y1, y0
        eta = G.exp_learner_strategy(H, history + [M(x, y0, y1)])
        played = M(x, y0, y1, eta)
        mask &= idx.label_mask[x][played.revealed]
        if mask:
            survived += 1
            history.append(played)
        assert survived <= v


@settings(max_examples=30)
@given(total_classes(max_n=3, max_k=2, max_size=8), st.data())
def test_nl_learner_beats_any_adversary(H, data):
    horizon = 3
    v = G.nl_game_value(H, horizon).value
    idx, mask, history = H.index, H.index.full, []
    for t in range(1, horizon + 1):
        if t > H.domain_size:
            break
        pts = tuple(sorted(data.draw(st.sets(st.integers(0, H.domain_size - 1), min_size=t, max_size=t))))
        pairs = [data.draw(st.sampled_from(list(combinations(range(H.k + 1), 2)))) for _ in pts]
        mv = G.NLGameMove(pts, tuple(p[0] for p in pairs), tuple(p[1] for p in pairs))
        bits = G.nl_learner_strategy(H, history + [mv], horizon)
        mask = D.nl_fiber(idx, mask, mv.points, mv.s0, mv.s1, bits)
        if not mask:
            break
        history.append(G.NLGameMove(mv.points, mv.s0, mv.s1, bits))
        assert len(history) <= v
