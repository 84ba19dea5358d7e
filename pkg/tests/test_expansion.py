from fractions import Fraction
from itertools import product

import pytest

from coverlab import (Cochain0, Cochain1, cyclic_action, d0, from_facets, h1_exact,
                      nearest_cocycle_bound_check, verify_main_theorem, verify_sandwich)
from coverlab.errors import CapacityError, DegenerateError

import oracles


def test_h1_triangle(triangle, z2, sym3):
    rep = h1_exact(triangle, z2)
    assert rep.h1 == 3
    assert rep.d1_norm == 1 and rep.csy == Fraction(1, 3)
    assert h1_exact(triangle, sym3).h1 == 3


def test_h1_matches_oracle(triangle, tetra, z2, sym3):
    for X, G in ((triangle, z2), (triangle, sym3), (tetra, z2)):
        h1, _ = oracles.expansion_and_stability([X.facets[0]], G.elements)
        assert h1_exact(X, G).h1 == h1
        assert h1_exact(X, G, gauge=False).h1 == h1


def test_h1_table_lists_every_scanned_cochain(triangle, z2):
    rep = h1_exact(triangle, z2, gauge=False, keep_table=True)
    assert len(rep.table) == 4            # the non-cocycles
    assert all(r == 3 for _, r in rep.table)


def test_h1_witness_is_lex_least(triangle, z2):
    rep = h1_exact(triangle, z2, gauge=False)
    assert rep.witness.values == (0, 0, 1)


def test_h1_needs_triangles(z2):
    with pytest.raises(DegenerateError):
        h1_exact(from_facets([[0, 1], [1, 2]]), z2)


def test_h1_guard(tetra, sym3):
    with pytest.raises(CapacityError):
        h1_exact(tetra, sym3, max_enum=100)


def test_sandwich_examples(triangle, z2, sym3):
    cert = verify_sandwich(Cochain1.trivial(triangle, sym3))
    assert (cert.lower, cert.deficiency, cert.upper) == (0, 0, 0)
    cert = verify_sandwich(Cochain1.from_dict(triangle, sym3, {(0, 1): (1, 0, 2)}))
    assert (cert.lower, cert.deficiency, cert.upper) == (Fraction(2, 3), Fraction(2, 3), 1)
    cert = verify_sandwich(Cochain1.from_dict(triangle, z2, {(0, 1): (1, 0)}))
    assert (cert.lower, cert.deficiency, cert.upper) == (1, 1, 1)


def test_sandwich_on_random_complexes(rng):
    X = from_facets([[0, 1, 2], [1, 2, 3], [2, 3, 4], [0, 3, 4], [1, 4, 5]])
    G = cyclic_action(4)
    for _ in range(200):
        phi = Cochain1(X, G, tuple(int(x) for x in rng.integers(4, size=len(X.faces(1)))))
        assert verify_sandwich(phi).holds


def test_main_theorem_examples(triangle, tetra, z2, sym3):
    rep = verify_main_theorem(triangle, z2)
    assert rep.chain == (3, 3, 3, 3)
    rep = verify_main_theorem(triangle, sym3)
    assert rep.chain == (2, 2, 2, 3)
    rep = verify_main_theorem(tetra, z2)
    assert rep.c == rep.h1 == 3 and rep.holds


def test_main_theorem_on_tetrahedron_with_sym3(tetra, sym3):
    rep = verify_main_theorem(tetra, sym3)
    assert rep.holds
    assert rep.h1 == 2 and rep.c == Fraction(4, 3)


def test_main_theorem_non_simplex(z2):
    # a triangulated disc: two triangles sharing an edge, plus a pendant one
    X = from_facets([[0, 1, 2], [1, 2, 3], [2, 3, 4]])
    rep = verify_main_theorem(X, z2)
    assert rep.holds
    assert rep.c == rep.h1


def test_nearest_cocycle_examples(triangle, z2, sym3):
    rep = nearest_cocycle_bound_check(d0(Cochain0.constant(triangle, z2, 1)))
    assert rep.distance == 0 and rep.holds
    rep = nearest_cocycle_bound_check(Cochain1.from_dict(triangle, z2, {(0, 1): (1, 0)}))
    assert rep.distance == rep.bound == Fraction(1, 3)
    assert rep.exact


def test_nearest_cocycle_exhaustive(triangle, sym3):
    for vals in product(range(6), repeat=3):
        assert nearest_cocycle_bound_check(Cochain1(triangle, sym3, vals), h1=Fraction(3)).holds


def test_nearest_cocycle_with_candidate(tetra, z2):
    phi = Cochain1.from_dict(tetra, z2, {(0, 1): (1, 0)})
    rep = nearest_cocycle_bound_check(phi, h1=Fraction(3),
                                      candidate=Cochain1.trivial(tetra, z2))
    assert not rep.exact and rep.distance == Fraction(1, 6) and rep.holds
    with pytest.raises(ValueError):
        nearest_cocycle_bound_check(phi, h1=Fraction(3), candidate=phi)
