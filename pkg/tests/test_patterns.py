from itertools import combinations, product

import pytest
from hypothesis import given, settings, strategies as st

import oracles as O
from conftest import total_classes
from unirates.core import ConceptClass, full_class
from unirates.dimensions import natarajan_dim
from unirates.errors import InputError, LimitError, ProtocolError
from unirates.games import nl_game_value
from unirates.patterns import (
    NLPattern,
    build_pattern_restricted_class,
    coloring_pairs,
    is_realized_pattern,
    new_avoider,
    run_avoider,
)


def naive_restricted(points, g, t, k):
    n = len(points)
    out = []
    for f in product(range(k + 1), repeat=n):
        ok = True
        for pos in combinations(range(n), t):
            for s0 in product(range(k + 1), repeat=t):
                for s1 in product(range(k + 1), repeat=t):
                    if any(a == b for a, b in zip(s0, s1)):
                        continue
                    bits = g(tuple(points[i] for i in pos), s0, s1)
                    if all(f[pos[z]] == (s1[z] if bits[z] else s0[z]) for z in range(t)):
                        ok = False
        if ok:
            out.append(f)
    return sorted(out)


def test_singleton_realizes_own_colors():
    H = ConceptClass(2, 2, ((1, 2),))
    assert is_realized_pattern(H, [0, 1], (1, 0), (0, 2), (0, 1))
    assert not is_realized_pattern(H, [0, 1], (1, 0), (0, 2), (1, 1))


def test_natarajan_zero_misses_a_bit():
    H = ConceptClass(2, 3, ((0, 1, 2),))
    for x in range(3):
        for s0, s1 in coloring_pairs(2, 1):
            assert not all(is_realized_pattern(H, [x], s0, s1, (b,)) for b in (0, 1))


def test_full_class_realizes_everything():
    H = full_class(3, 1)
    for t in (1, 2, 3):
        for pts in combinations(range(3), t):
            for s0, s1 in coloring_pairs(1, t):
                assert all(is_realized_pattern(H, pts, s0, s1, b) for b in product((0, 1), repeat=t))


def test_pattern_rejects_bad_colorings():
    with pytest.raises(InputError):
        NLPattern((0,), (1,), (1,))
    with pytest.raises(InputError):
        is_realized_pattern(full_class(2, 1), [0], (0,), (0,), (1,))


def test_coloring_pairs_are_sorted_and_complete():
    pairs = coloring_pairs(2, 2)
    assert pairs == sorted(pairs) and len(pairs) == 36


def test_avoider_natarajan_zero_stays_at_one():
    H = ConceptClass(1, 3, ((0, 1, 1),))
    st_ = run_avoider(H, [(0, 0), (1, 1), (2, 1), (0, 0)] * 3)
    assert st_.length == 1 and st_.growth_events == 0
    assert set(st_.lengths) == {1}


def test_avoider_full_class_grows_on_first_item():
    st_ = run_avoider(full_class(3, 1), [(0, 1)])
    assert st_.length == 2 and st_.growth_events == 1


def test_avoider_rejects_unrealizable_stream():
    with pytest.raises(ProtocolError):
        run_avoider(ConceptClass(1, 2, ((0, 0),)), [(0, 1)])


def test_new_avoider_checks_horizon():
    with pytest.raises(LimitError):
        new_avoider(full_class(3, 1), horizon=2)


def test_avoidance_function_is_deterministic():
    a = run_avoider(full_class(3, 1), [(0, 1), (1, 0), (2, 1)])
    b = run_avoider(full_class(3, 1), [(0, 1), (1, 0), (2, 1)])
    ga, gb = a.g(), b.g()
    for s0, s1 in coloring_pairs(1, a.length):
        pts = tuple(range(a.length))
        assert ga(pts, s0, s1) == gb(pts, s0, s1)
    with pytest.raises(InputError):
        ga((0,) * (a.length + 1), (0,) * (a.length + 1), (1,) * (a.length + 1))


def test_restricted_class_all_bit_zero():
    def g(pts, s0, s1):
        return (0,) * len(pts)

    for k in (1, 2):
        got = build_pattern_restricted_class([0, 1, 2], g, 1, k)
        assert sorted(got.hypotheses) == naive_restricted([0, 1, 2], g, 1, k) == []


def test_restricted_class_degenerate():
    def g(pts, s0, s1):
        return (0,) * len(pts)

    assert len(build_pattern_restricted_class([0, 1], g, 3, 2)) == 9


def test_ideal_avoider_keeps_the_class():
    H = ConceptClass(1, 3, ((0, 0, 1), (0, 1, 1), (1, 1, 1)))
    t = natarajan_dim(H) + 1

    def g(pts, s0, s1):
        for bits in product((0, 1), repeat=len(pts)):
            if not is_realized_pattern(H, pts, s0, s1, bits):
                return bits
        raise AssertionError("every pattern realized")

    F = build_pattern_restricted_class([0, 1, 2], g, t, 1)
    assert set(H.hypotheses) <= set(F.hypotheses)


@settings(max_examples=25)
@given(st.integers(1, 2), st.integers(1, 4), st.integers(1, 2), st.integers(0, 2 ** 16 - 1))
def test_restricted_class_matches_naive(t, n, k, salt):
    def g(pts, s0, s1):
        h = hash((pts, s0, s1, salt))
        return tuple((h >> i) & 1 for i in range(len(pts)))

    pts = list(range(10, 10 + n))
    got = build_pattern_restricted_class(pts, g, t, k)
    assert sorted(got.hypotheses) == naive_restricted(pts, g, t, k)
    if len(got):
        assert O.naive_ndim(got.hypotheses, n, k) < t


@settings(max_examples=40)
@given(total_classes(max_n=4, max_k=2, max_size=8), st.data())
def test_growth_events_bounded_by_game_value(H, data):
    v = nl_game_value(H, 4).value
    if v >= 4:
        return
    h = data.draw(st.sampled_from(H.hypotheses))
    xs = data.draw(st.lists(st.integers(0, H.domain_size - 1), max_size=20))
    state = run_avoider(H, [(x, h[x]) for x in xs])
    assert state.growth_events <= v
    assert state.lengths == sorted(state.lengths)
