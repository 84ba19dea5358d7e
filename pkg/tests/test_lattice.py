from collections import Counter
from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest

from coverlab import Cochain0, Cochain1, act, d0, d1, d1_norm, dist1, is_cocycle, norm1
from coverlab import symmetric_action
from coverlab.errors import CapacityError, MalformedInputError
from coverlab.lattice import (OrderingScheme, boolean_lattice, correction_value, decode,
                              delta_s, delta_table, filling, filling_from_atoms,
                              gamma_certificate, gaussian_binomial, general_linear_group,
                              gl_scheme, is_collapsible, min_atom, min_atom_below, psi_s,
                              random_general_linear, rref, subspace_lattice)

import oracles


def test_gaussian_binomial_formula():
    assert [gaussian_binomial(4, k, 2) for k in range(5)] == [1, 15, 35, 15, 1]
    assert [gaussian_binomial(4, k, 3) for k in range(5)] == [1, 40, 130, 40, 1]


@pytest.mark.parametrize("q", [2, 3])
def test_subspace_counts(q):
    L = subspace_lattice(q)
    counts = Counter(L.ranks)
    assert [counts[k] for k in range(5)] == [gaussian_binomial(4, k, q) for k in range(5)]
    # independent count of subspaces as distinct spans of vector tuples
    if q == 2:
        vectors = [tuple((c >> i) & 1 for i in range(4)) for c in range(16)]
        spans = {oracles.span(vs, 2) for k in range(3) for vs in combinations(vectors, k)}
        assert Counter(len(s) for s in spans)[4] == counts[2]


def test_building_structure(building):
    X = building.order_complex
    assert X.f_vector == (65, 315, 315)
    assert X.is_pure
    for tri in X.faces(2):
        assert sorted(building.rank(v) for v in tri) == [1, 2, 3]
        a, b, c = sorted(tri, key=building.rank)
        assert building.leq(a, b) and building.leq(b, c)
    for e in X.faces(1):
        assert X.facet_count(e) == 3
        assert sum(1 for tri in X.faces(2) if set(e) <= set(tri)) == 3
        assert X.weight(e) / X.weight(X.faces(2)[0]) == 1
    assert X.weight(X.faces(2)[7]) == Fraction(1, 315)


def test_join_meet_against_spans(building, rng):
    L = building
    span = {x: oracles.span(L.bases[x], 2) for x in range(len(L))}
    by_span = {s: x for x, s in span.items()}
    for _ in range(400):
        a, b = (int(v) for v in rng.integers(len(L), size=2))
        assert span[L.join(a, b)] == oracles.span(L.bases[a] + L.bases[b], 2)
        assert L.meet(a, b) == by_span[span[a] & span[b]]
        assert L.leq(a, b) == (span[a] <= span[b])


def test_q3_join_meet_against_spans(rng):
    L = subspace_lattice(3)
    for _ in range(150):
        a, b = (int(v) for v in rng.integers(len(L), size=2))
        sa, sb = oracles.span(L.bases[a], 3), oracles.span(L.bases[b], 3)
        assert oracles.span(L.bases[L.join(a, b)], 3) == oracles.span(L.bases[a] + L.bases[b], 3)
        assert oracles.span(L.bases[L.meet(a, b)], 3) == sa & sb


def test_lattice_axioms(building, rng):
    pairs = [tuple(int(v) for v in rng.integers(len(building), size=2)) for _ in range(300)]
    building.check_axioms(pairs)
    boolean_lattice(4).check_axioms()


def test_boolean_lattice_order_complex():
    X = boolean_lattice(4).order_complex
    # chains of proper nonempty subsets of a 4-set: the barycentric subdivision
    # of the boundary of a tetrahedron
    assert X.f_vector == (14, 36, 24)
    assert X.is_pure


def test_unsupported_q():
    with pytest.raises(CapacityError):
        subspace_lattice(5)


def test_rref():
    assert rref([(1, 1, 0, 0), (0, 1, 1, 0), (1, 0, 1, 0)], 2) == ((1, 0, 1, 0), (0, 1, 1, 0))
    assert rref([(2, 0, 0, 0)], 3) == ((1, 0, 0, 0),)


def test_general_linear_group():
    G = general_linear_group(2)
    assert len(G) == 20160
    assert len({m.tobytes() for m in G[:2000]}) == 2000
    with pytest.raises(CapacityError):
        general_linear_group(3)


def test_random_general_linear_is_invertible(rng):
    for m in random_general_linear(3, 20, rng):
        assert len(rref(m.tolist(), 3)) == 4


def test_atom_permutations_match_apply(building, rng):
    L = building
    mats = random_general_linear(2, 10, rng)
    perms = L.atom_permutations(mats)
    for m, perm in zip(mats, perms):
        for j, a in enumerate(L.atoms):
            assert L.atoms[perm[j]] == L.apply(m, a)


# -- orderings and corrections -----------------------------------------------

def test_identity_ordering(building):
    scheme = gl_scheme(building, "sampled", samples=1, seed=0)
    ident = OrderingScheme.from_orders(building, [building.atoms])
    assert min_atom(building, ident, 0) == building.atoms[0]
    for a in building.atoms:
        assert min_atom_below(building, scheme, 0, a) == a


def test_b_table_matches_direct_minimum(building):
    scheme = gl_scheme(building, "sampled", samples=5, seed=2)
    table = scheme.b_table(building)
    for s in range(5):
        for u in building.proper_elements():
            assert building.atoms[table[s, u]] == min_atom_below(building, scheme, s, u)


def test_ordering_equivariance(building, exact_scheme, rng):
    # b(id, u) = s^-1 b(s, s u)
    L = building
    scheme = gl_scheme(L, "sampled", samples=20, seed=4)
    base = OrderingScheme.from_orders(L, [L.atoms])
    for s, mat in enumerate(scheme.matrices):
        inv = _inverse_mod2(mat, exact_scheme.matrices)
        for u in rng.choice(list(L.proper_elements()), size=10):
            su = L.apply(mat, int(u))
            b = min_atom_below(L, scheme, s, su)
            assert L.apply(inv, b) == min_atom_below(L, base, 0, int(u))


def _inverse_mod2(mat, group):
    # brute force over the whole group
    hits = np.flatnonzero(((mat @ group) % 2 == np.eye(4, dtype=np.int64)).all(axis=(1, 2)))
    assert len(hits) == 1
    return group[hits[0]]


def test_from_orders_validation(building):
    with pytest.raises(MalformedInputError):
        OrderingScheme.from_orders(building, [building.atoms[:-1]])
    with pytest.raises(MalformedInputError):
        OrderingScheme.from_orders(building, [building.atoms], weights=[Fraction(1, 2)])


def test_psi_examples(building, rng):
    L = building
    X = L.order_complex
    G = symmetric_action(2)
    scheme = gl_scheme(L, "sampled", samples=5, seed=1)
    trivial = Cochain1.trivial(X, G)
    phi = Cochain1(X, G, tuple(int(v) for v in rng.integers(2, size=315)))
    for s in range(5):
        assert psi_s(L, trivial, scheme, s).values == (0,) * 65
        a = min_atom(L, scheme, s)
        assert psi_s(L, phi, scheme, s)(a) == G.identity


def test_psi_on_coboundary_telescopes(building, rng):
    # for phi = d0 chi, psi_s(u) = chi(a) chi(u)^-1, so psi_s . phi = d0 of
    # the constant chi(a): the corrected cochain vanishes
    L = building
    X = L.order_complex
    G = symmetric_action(3)
    chi = Cochain0.from_dict(X, G, {X.vertices[10]: (1, 2, 0)})
    phi = d0(chi)
    scheme = gl_scheme(L, "sampled", samples=8, seed=6)
    for s in range(8):
        psi = psi_s(L, phi, scheme, s)
        a = min_atom(L, scheme, s)
        for u in X.vertices:
            assert psi(u) == G.mul(chi(a), G.inv(chi(u)))
        assert norm1(act(psi, phi)) == 0


def test_correction_rejects_incomparable_steps(building):
    L = building
    X = L.order_complex
    phi = Cochain1.trivial(X, symmetric_action(2))
    a, b = L.atoms[0], L.atoms[1]
    line = L.join(a, b)
    plane_off = next(x for x in L.proper_elements() if L.rank(x) == 3 and not L.leq(b, x))
    from coverlab.errors import ConsistencyError
    with pytest.raises(ConsistencyError):
        correction_value(L, phi, a, b, plane_off)
    assert correction_value(L, phi, a, b, line) == 0


# -- fillings ----------------------------------------------------------------

def test_generic_filling_has_nine_triangles(building):
    L = building
    a0, a1, a2 = L.atoms[0], L.atoms[1], L.atoms[3]
    # a plane containing a0 and a1 but not a2, and v0 = a0
    v1 = next(x for x in L.proper_elements()
              if L.rank(x) == 3 and L.leq(L.join(a0, a1), x) and not L.leq(a2, x))
    disc = filling_from_atoms(L, a0, a1, a2, a0, v1)
    assert L.rank(disc.apex) == 3
    # v0 = a0 collapses (a0, v0, v1), leaving 8; a0|a1 < v1 keeps the fan
    assert len(disc.triangles) == 8
    v0 = L.join(a0, a1)
    disc = filling_from_atoms(L, a0, a1, a2, v0, v1)
    assert len(disc.triangles) == 8
    # fully generic: distinct atoms, rank 3 apex, v0 a line through a0 other than a0|a1
    v0 = next(x for x in L.proper_elements()
              if L.rank(x) == 2 and L.leq(a0, x) and L.leq(x, v1) and x != L.join(a0, a1))
    disc = filling_from_atoms(L, a0, a1, a2, v0, v1)
    assert len(disc.triangles) == 9
    assert disc.contains_cycle() and disc.is_collapsible()


def test_collapsibility_oracle():
    assert is_collapsible([(0, 1, 2), (1, 2, 3)])
    assert is_collapsible([(0, 1), (1, 2)])
    assert not is_collapsible([(0, 1), (1, 2), (0, 2)])               # circle
    assert not is_collapsible(list(combinations(range(4), 3)))        # sphere
    # a triangulated annulus is not collapsible
    annulus = [(0, 1, 3), (1, 3, 4), (1, 2, 4), (2, 4, 5), (0, 2, 5), (0, 3, 5)]
    assert not is_collapsible(annulus)


def test_cycle_product_equals_correction(building, rng):
    L = building
    X = L.order_complex
    G = symmetric_action(3)
    scheme = gl_scheme(L, "sampled", samples=4, seed=8)
    phi = Cochain1(X, G, tuple(int(v) for v in rng.integers(6, size=315)))
    edges = X.faces(1)
    for s in range(4):
        corrected = act(psi_s(L, phi, scheme, s), phi)
        for i in rng.choice(315, size=30, replace=False):
            v0, v1 = edges[i]
            disc = filling(L, scheme, s, (v0, v1))
            hol = G.identity
            for x, y in zip(disc.cycle, disc.cycle[1:]):
                if x != y:
                    hol = G.mul(hol, phi(x, y))
            assert hol == corrected(v0, v1)


# -- delta, gamma and the decoder ---------------------------------------------

def test_delta_table_matches_direct_sum(building):
    scheme = gl_scheme(building, "sampled", samples=3, seed=11)
    table = delta_table(building, scheme)
    for tau in building.order_complex.faces(2)[::40]:
        direct = sum((delta_s(building, scheme, s, tau) for s in range(3)), Fraction(0)) / 3
        assert table.delta[tau] == direct


def test_delta_table_non_uniform_weights(building):
    base = gl_scheme(building, "sampled", samples=3, seed=11)
    w = (Fraction(1, 2), Fraction(1, 3), Fraction(1, 6))
    scheme = OrderingScheme(base.ranks, w)
    table = delta_table(building, scheme)
    for tau in building.order_complex.faces(2)[::60]:
        direct = sum(wi * delta_s(building, scheme, s, tau) for s, wi in enumerate(w))
        assert table.delta[tau] == direct


def test_averaging_identity(building):
    L = building
    X = L.order_complex
    scheme = gl_scheme(L, "sampled", samples=6, seed=5)
    table = delta_table(L, scheme)
    q = 2
    lhs = sum(table.delta.values(), Fraction(0))
    # each edge sits in q+1 flags and has weight ratio (q+1)/3 to a flag
    rhs = Fraction(q + 1, 3) * table.filling_triangles
    assert lhs == rhs
    b = scheme.b_table(L)
    direct = Fraction(0)
    for s in range(6):
        a2 = L.atoms[scheme.least_atom[s]]
        direct += sum(len(filling_from_atoms(L, L.atoms[b[s, u]], L.atoms[b[s, v]], a2, u, v)
                          .triangles) for u, v in X.faces(1))
    assert table.filling_triangles == direct / 6


def test_gamma_exact_is_constant_and_small(building, exact_scheme):
    cert = gamma_certificate(scheme=exact_scheme, lattice=building, mode="exact")
    assert cert.samples == 20160
    assert cert.table.is_constant
    assert cert.gamma == Fraction(407, 105)
    assert cert.within(9) and cert.h1_lower_bound == Fraction(105, 407)


def test_gamma_equivariance_sampled(building, rng):
    # the exact table is GL-invariant; check on sampled pairs
    L = building
    table = delta_table(L, gl_scheme(L, "exact")).delta
    X = L.order_complex
    for mat in random_general_linear(2, 5, rng):
        for tau in X.faces(2)[::50]:
            image = tuple(sorted(L.apply(mat, v) for v in tau))
            assert table[image] == table[tau]


def test_gamma_workers_agree(building):
    a = gamma_certificate(2, "sampled", samples=300, seed=3, workers=1)
    b = gamma_certificate(2, "sampled", samples=300, seed=3, workers=2)
    assert a.table.delta == b.table.delta


def test_decoder_trivial_and_coboundary(building, exact_scheme, rng):
    L = building
    X = L.order_complex
    G = symmetric_action(2)
    res = decode(L, Cochain1.trivial(X, G), gl_scheme(L, "sampled", samples=10, seed=0))
    assert res.distance == 0 and res.candidate == Cochain1.trivial(X, G)
    chi = Cochain0(X, G, tuple(int(v) for v in rng.integers(2, size=65)))
    res = decode(L, d0(chi), exact_scheme)
    assert res.distance == 0 and res.candidate == d0(chi)


def test_decoder_distances_match_direct(building, rng):
    L = building
    X = L.order_complex
    G = symmetric_action(3)
    phi = Cochain1(X, G, tuple(int(v) for v in rng.integers(6, size=315)))
    scheme = gl_scheme(L, "sampled", samples=6, seed=2)
    res = decode(L, phi, scheme, check_claim=False)
    for s in range(6):
        assert res.distances[s] == norm1(act(psi_s(L, phi, scheme, s), phi))
    assert is_cocycle(res.candidate)
    assert dist1(phi, res.candidate) == res.distance == min(res.distances)


def test_decoder_bound_chain(building, exact_scheme, rng):
    L = building
    X = L.order_complex
    G = symmetric_action(2)
    delta = delta_table(L, exact_scheme).delta
    gamma = max(delta.values())
    for k in (2, 7):
        chi = Cochain0(X, G, tuple(int(v) for v in rng.integers(2, size=65)))
        vals = list(d0(chi).values)
        for i in rng.choice(315, size=k, replace=False):
            vals[i] ^= 1
        phi = Cochain1(X, G, tuple(vals))
        res = decode(L, phi, exact_scheme)
        middle = sum((X.weight(tau) * delta[tau] for tau in d1(phi).violated), Fraction(0))
        assert res.mean_distance <= middle <= gamma * d1_norm(phi)
        assert res.claim_checks > 0


def test_decoder_rejects_foreign_cochain(building, tetra, z2):
    with pytest.raises(MalformedInputError):
        decode(building, Cochain1.trivial(tetra, z2), gl_scheme(building, "sampled", 1, 0))
