from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from coverlab import from_facets, full_simplex, simplex
from coverlab.errors import MalformedInputError, NotAFaceError, PurityError

import oracles


def test_f_vectors():
    assert from_facets([[0, 1, 2]]).f_vector == (3, 3, 1)
    assert full_simplex(4).f_vector == (4, 6, 4, 1)


def test_non_pure_flag():
    X = from_facets([[0, 1, 2], [2, 3]])
    assert not X.is_pure
    assert X.facets == ((2, 3), (0, 1, 2))
    with pytest.raises(PurityError):
        X.weight((0,))


def test_faces(tetra, triangle):
    assert tetra.faces(1) == tuple(combinations(range(4), 2))
    assert len(tetra.faces(2)) == 4
    assert triangle.faces(2) == ((0, 1, 2),)
    with pytest.raises(IndexError):
        triangle.faces(3)


def test_non_maximal_inputs_are_absorbed():
    X = from_facets([[0, 1], [0, 1, 2], [2]])
    assert X.facets == ((0, 1, 2),)


def test_simplex_canonical_form():
    assert simplex([2, 0, 1]) == (0, 1, 2)
    with pytest.raises(MalformedInputError):
        simplex([0, 0, 1])


def test_links(tetra, triangle):
    assert tetra.link((0,)).facets == ((1, 2, 3),)
    assert triangle.link((0,)).facets == ((1, 2),)
    assert tetra.link((0, 1)).facets == ((2, 3),)
    with pytest.raises(NotAFaceError):
        triangle.link((0, 1, 2))
    with pytest.raises(NotAFaceError):
        triangle.link((0, 5))


def test_weights_examples(tetra, triangle):
    assert tetra.weight((0, 1)) == Fraction(1, 6)
    assert triangle.weight((0,)) == Fraction(1, 3)


def test_star(triangle):
    assert triangle.star((0,)) == frozenset(
        [(0,), (1,), (2,), (0, 1), (0, 2), (1, 2), (0, 1, 2)])


def test_contains_and_index(tetra):
    assert (1, 3) in tetra and (3, 1) in tetra
    assert (0, 4) not in tetra
    assert tetra.index((2, 3)) == 5
    with pytest.raises(NotAFaceError):
        tetra.index((7,))


def test_connected():
    assert from_facets([[0, 1, 2], [2, 3, 4]]).is_connected()
    assert not from_facets([[0, 1, 2], [3, 4, 5]]).is_connected()


def test_equality_and_hash():
    a = from_facets([[0, 1, 2], [1, 2, 3]])
    b = from_facets([[1, 2, 3], [2, 1, 0]])
    assert a == b and hash(a) == hash(b)
    assert a != full_simplex(4)


facet_lists = st.lists(st.frozensets(st.integers(0, 6), min_size=3, max_size=3),
                       min_size=1, max_size=6)


@settings(max_examples=60, deadline=None)
@given(facet_lists)
def test_weights_match_oracle_and_sum_to_one(facets):
    facets = sorted({tuple(sorted(f)) for f in facets})
    X = from_facets(facets)
    for k in range(3):
        w = X.weights(k)
        assert sum(w.values()) == 1
        for f in oracles.faces_of(facets, k):
            assert w[f] == oracles.weight(facets, f)


@settings(max_examples=40, deadline=None)
@given(facet_lists)
def test_weight_marginalizes(facets):
    # c(sigma) is the average over the faces one dimension up
    X = from_facets([sorted(f) for f in facets])
    for k in (1, 2):
        for sigma in X.faces(k - 1):
            up = sum((X.weight(tau) for tau in X.faces(k) if set(sigma) <= set(tau)),
                     Fraction(0))
            assert X.weight(sigma) == up / (len(sigma) + 1)
