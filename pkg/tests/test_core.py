import numpy as np
import pytest

from unirates.core import (
    STAR,
    ConceptClass,
    FiniteDistribution,
    LabeledSample,
    constant_class,
    distribution_error,
    format_dist,
    format_mcc,
    full_class,
    is_realizable,
    parse_dist,
    parse_mcc,
    parse_pairs,
    project,
    require_realizable,
    threshold_class,
)
from unirates.errors import InputError, ProtocolError


def test_realizable_constant_sample():
    H = constant_class(2, 1)
    assert is_realizable(H, [(0, 0), (1, 0)])


def test_contradictory_labels_not_realizable():
    H = constant_class(2, 1)
    assert not is_realizable(H, [(0, 0), (0, 1)])


def test_point_outside_support_not_realizable():
    H = ConceptClass(1, 2, ((STAR, 1),), partial=True)
    assert not is_realizable(H, [(0, 1)])
    assert is_realizable(H, [(1, 1)])


def test_realizable_rejects_out_of_range():
    H = constant_class(2, 1)
    with pytest.raises(InputError):
        is_realizable(H, [(5, 0)])
    with pytest.raises(InputError):
        is_realizable(H, [(0, 2)])


def test_require_realizable_names_round():
    with pytest.raises(ProtocolError, match="round 2"):
        require_realizable(constant_class(3, 1), LabeledSample(((0, 0), (1, 0), (2, 1))))


def test_project_full_cube():
    assert project(full_class(2, 1), [0, 1]) == {(0, 0), (0, 1), (1, 0), (1, 1)}


def test_project_drops_star_vectors():
    H = ConceptClass(1, 2, ((0, STAR), (STAR, 1)), partial=True)
    assert project(H, [0, 1]) == set()


def test_project_collapses_duplicates():
    assert project(ConceptClass(1, 2, ((0, 0), (0, 1))), [0]) == {(0,)}


def test_project_rejects_duplicate_points():
    with pytest.raises(InputError):
        project(full_class(2, 1), [0, 0])


def test_distribution_error_examples():
    d = FiniteDistribution.uniform({0: 0, 1: 1})
    assert distribution_error(lambda x: d.target[x], d) == 0
    assert distribution_error(lambda x: STAR, d) == 1
    assert distribution_error(lambda x: 0, d) == 0.5
    assert distribution_error([0, 0], d) == 0.5


def test_distribution_validation():
    with pytest.raises(InputError):
        FiniteDistribution(((0, 0, 0.5), (1, 0, 0.4)))
    with pytest.raises(InputError):
        FiniteDistribution(((0, 0, 0.5), (0, 1, 0.5)))
    with pytest.raises(InputError):
        FiniteDistribution(((0, 0, 1.5), (1, 0, -0.5)))


def test_distribution_sample_is_seeded():
    d = FiniteDistribution.uniform({0: 0, 1: 1, 2: 1})
    a = d.sample(np.random.default_rng(7), 20)
    b = d.sample(np.random.default_rng(7), 20)
    assert a == b and len(a) == 20
    assert all(d.target[x] == y for x, y in a)


def test_class_canonicalizes():
    H = ConceptClass(1, 2, ((1, 1), (0, 0), (1, 1)))
    assert H.hypotheses == ((0, 0), (1, 1))


def test_class_rejects_bad_rows():
    with pytest.raises(InputError):
        ConceptClass(1, 2, ((0, 2),))
    with pytest.raises(InputError):
        ConceptClass(1, 2, ((0,),))
    with pytest.raises(InputError):
        ConceptClass(1, 2, ((0, STAR),))


def test_threshold_class_shape():
    H = threshold_class(4)
    assert len(H) == 5 and (0, 0, 1, 1) in H.hypotheses


def test_mcc_round_trip():
    H = ConceptClass(2, 3, ((0, STAR, 2), (1, 1, STAR)), partial=True)
    assert parse_mcc(format_mcc(H)) == H


def test_mcc_errors_carry_line_numbers():
    with pytest.raises(InputError, match=":3:"):
        parse_mcc("mcc k=1 n=2 mode=total\n0 1\n0 5\n")
    with pytest.raises(InputError, match=":1:"):
        parse_mcc("k=1 n=2\n0 1\n")


def test_dist_round_trip():
    d = FiniteDistribution(((0, 1, 0.25), (2, 0, 0.75)))
    assert parse_dist(format_dist(d)).atoms == d.atoms


def test_parse_pairs():
    assert parse_pairs("0 1\n\n2 0\n").pairs == ((0, 1), (2, 0))
    with pytest.raises(InputError):
        parse_pairs("0\n")
