"""Atom orderings, correction 0-cochains and filling discs.

An ordering scheme is a weighted family of linear orders on the atoms. For
an ordering s, ``a(s)`` is the least atom and ``b(s, u)`` the least atom
below u. For an edge v0 < v1 these give the atoms a0 = b(s, v0),
a1 = b(s, v1), a2 = a(s) and a small disc through the 8-vertex cycle

    a2, a0|a2, a0, v0, v1, a1, a1|a2, a2

(``|`` is the lattice join), used to trade the cycle's holonomy for a
violated triangle.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np

from ..cochains import Cochain0, Cochain1
from ..complex import SimplicialComplex
from ..errors import ConsistencyError, MalformedInputError
from .core import (GeometricLattice, SubspaceLattice, general_linear_group,
                   random_general_linear)


@dataclass(frozen=True)
class OrderingScheme:
    """Weighted linear orders on the atoms of a lattice.

    ``ranks[s, j]`` is the position of atom ``L.atoms[j]`` in ordering s.
    For schemes induced by GL_4(F_q), ``matrices[s]`` is the group element
    and ordering s compares atoms a, a' through s^-1 a and s^-1 a' in the
    base order (atom index order).
    """
    ranks: np.ndarray
    weights: tuple
    matrices: np.ndarray | None = None
    label: str = "custom"

    def __len__(self):
        return len(self.weights)

    @property
    def uniform(self) -> bool:
        return len(set(self.weights)) == 1

    @classmethod
    def from_orders(cls, L: GeometricLattice, orders, weights=None) -> "OrderingScheme":
        """Build from explicit atom sequences (least first)."""
        rows = []
        for order in orders:
            if sorted(order) != sorted(L.atoms):
                raise MalformedInputError("each ordering must list every atom once")
            r = np.empty(len(L.atoms), dtype=np.int64)
            for pos, a in enumerate(order):
                r[L.atom_pos[a]] = pos
            rows.append(r)
        if weights is None:
            weights = [Fraction(1, len(rows))] * len(rows)
        weights = tuple(Fraction(w) for w in weights)
        if sum(weights) != 1 or any(w < 0 for w in weights):
            raise MalformedInputError("ordering weights must be a probability vector")
        return cls(np.array(rows), weights)

    @cached_property
    def least_atom(self) -> np.ndarray:
        """Atom position of a(s), for every s."""
        return self.ranks.argmin(axis=1)

    def b_table(self, L: GeometricLattice) -> np.ndarray:
        """(m, N) atom positions of b(s, u); -1 for the bottom element."""
        big = len(L.atoms)
        below = L.below_atoms                                  # (N, A)
        masked = np.where(below[None, :, :], self.ranks[:, None, :], big)
        out = masked.argmin(axis=2)
        out[:, ~below.any(axis=1)] = -1
        return out


def gl_scheme(L: SubspaceLattice, mode: str = "exact", samples: int | None = None,
              seed: int | None = None) -> OrderingScheme:
    """Orderings a <_s a' iff s^-1 a < s^-1 a', s uniform on GL_4(F_q).

    ``mode="exact"`` enumerates the group; ``mode="sampled"`` draws
    ``samples`` matrices with numpy's PCG64 seeded by ``seed``.
    """
    if mode == "exact":
        mats = general_linear_group(L.q)
    elif mode == "sampled":
        if not samples or samples < 1:
            raise MalformedInputError("sampled mode needs a positive sample count")
        mats = random_general_linear(L.q, samples, np.random.default_rng(seed))
    else:
        raise MalformedInputError(f"unknown mode {mode!r}")
    perms = L.atom_permutations(mats)          # perm[s, a] = s(a)
    # rank_s(a) = base position of s^-1 a, i.e. the inverse permutation
    ranks = np.argsort(perms, axis=1)
    m = len(mats)
    return OrderingScheme(ranks, (Fraction(1, m),) * m, mats, f"GL4(F{L.q}):{mode}")


def min_atom(L: GeometricLattice, scheme: OrderingScheme, s: int) -> int:
    """a(s): the least atom in ordering s."""
    return L.atoms[int(scheme.least_atom[s])]


def min_atom_below(L: GeometricLattice, scheme: OrderingScheme, s: int, u: int) -> int:
    """b(s, u): the least atom below u in ordering s."""
    below = [a for a in L.atoms if L.leq(a, u)]
    if not below:
        raise MalformedInputError(f"element {u} has no atom below it")
    return min(below, key=lambda a: scheme.ranks[s, L.atom_pos[a]])


def _phi_step(phi: Cochain1, x: int, y: int) -> int:
    return phi.group.identity if x == y else phi(x, y)


def correction_value(L: GeometricLattice, phi: Cochain1, a: int, b: int, u: int) -> int:
    """phi(a, a|b) phi(a|b, b) phi(b, u), degenerate steps counting as 1."""
    G = phi.group
    ab = L.join(a, b)
    for x, y in ((a, ab), (ab, b), (b, u)):
        if x != y and not (L.leq(x, y) or L.leq(y, x)):
            raise ConsistencyError(f"path step {x}-{y} joins incomparable elements")
    return G.prod(_phi_step(phi, a, ab), _phi_step(phi, ab, b), _phi_step(phi, b, u))


def psi_s(L: GeometricLattice, phi: Cochain1, scheme: OrderingScheme, s: int,
          b_row: np.ndarray | None = None) -> Cochain0:
    """The correction 0-cochain attached to ordering s."""
    X = phi.complex
    a = L.atoms[int(scheme.least_atom[s])]
    vals = []
    for u in X.vertices:
        b = L.atoms[int(b_row[u])] if b_row is not None else min_atom_below(L, scheme, s, u)
        vals.append(correction_value(L, phi, a, b, u))
    return Cochain0(X, phi.group, tuple(vals))


@dataclass(frozen=True)
class FillingDisc:
    edge: tuple          # (v0, v1) with v0 < v1
    atoms: tuple         # (a0, a1, a2)
    apex: int            # a0 | a1 | a2
    cycle: tuple         # (x0, ..., x7), x7 == x0
    triangles: tuple     # sorted vertex triples

    def cycle_edges(self) -> list[tuple]:
        return [tuple(sorted((x, y))) for x, y in zip(self.cycle, self.cycle[1:]) if x != y]

    def complex(self) -> SimplicialComplex:
        return SimplicialComplex.from_facets(list(self.triangles) + self.cycle_edges())

    def contains_cycle(self) -> bool:
        K = self.complex()
        return all(e in K for e in self.cycle_edges())

    def is_collapsible(self) -> bool:
        return is_collapsible(list(self.triangles) + self.cycle_edges())


def filling_from_atoms(L: GeometricLattice, a0: int, a1: int, a2: int,
                       v0: int, v1: int) -> FillingDisc:
    """The disc Y_s(v0 v1) determined by its three atoms.

    It is the cone from the apex w = a0|a1|a2 over the hexagon
    a1, a1|a2, a2, a0|a2, a0, a0|a1, followed by the triangles
    (a0, a0|a1, v1), (a1, a0|a1, v1) and (a0, v0, v1). Vertices that
    coincide are merged and triangles with a repeated vertex are dropped.
    """
    j = L.join
    a01, a02, a12 = j(a0, a1), j(a0, a2), j(a1, a2)
    w = j(a01, a2)
    raw = [(a1, a12, w), (a2, a12, w), (a2, a02, w), (a0, a02, w),
           (a0, a01, w), (a1, a01, w), (a0, a01, v1), (a1, a01, v1), (a0, v0, v1)]
    tris = set()
    for tri in raw:
        vs = set(tri)
        if len(vs) < 3:
            continue
        chain = sorted(vs, key=lambda x: (L.rank(x), x))
        if not (L.leq(chain[0], chain[1]) and L.leq(chain[1], chain[2])):
            raise ConsistencyError(f"filling triangle {tri} is not a chain")
        if chain[0] in (L.bottom, L.top) or chain[2] in (L.bottom, L.top):
            raise ConsistencyError(f"filling triangle {tri} leaves the proper part")
        tris.add(tuple(sorted(vs)))
    cycle = (a2, a02, a0, v0, v1, a1, a12, a2)
    return FillingDisc((v0, v1), (a0, a1, a2), w, cycle, tuple(sorted(tris)))


def filling(L: GeometricLattice, scheme: OrderingScheme, s: int, edge) -> FillingDisc:
    v0, v1 = sorted(edge)
    return filling_from_atoms(L, min_atom_below(L, scheme, s, v0),
                              min_atom_below(L, scheme, s, v1), min_atom(L, scheme, s),
                              v0, v1)


def is_collapsible(facets) -> bool:
    """Greedy elementary collapses down to a single vertex.

    A face is free when it lies in exactly one other face, which is then
    a maximal face one dimension higher. For complexes of dimension at most
    two the greedy order does not matter.
    """
    K = SimplicialComplex.from_facets(facets)
    faces = set(K.all_faces())
    cofaces = {f: set() for f in faces}
    for f in faces:
        for i in range(len(f)):
            sub = f[:i] + f[i + 1:]
            if sub:
                cofaces[sub].add(f)
    changed = True
    while changed and len(faces) > 1:
        changed = False
        for f in sorted(faces, key=lambda x: (-len(x), x)):
            if f not in faces or len(cofaces[f]) != 1:
                continue
            (g,) = cofaces[f]
            if cofaces[g]:
                continue
            for face in (g, f):
                faces.discard(face)
                for i in range(len(face)):
                    sub = face[:i] + face[i + 1:]
                    if sub:
                        cofaces[sub].discard(face)
            changed = True
    return len(faces) == 1
