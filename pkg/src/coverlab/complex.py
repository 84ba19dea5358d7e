"""Finite simplicial complexes with the facet-counting probability weights.

A simplex is stored as a strictly increasing tuple of integer vertex ids.
Faces are indexed per dimension in lexicographic order, with a hash map for
membership and position lookups.
"""
from __future__ import annotations

from collections import Counter
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Iterable, Mapping, Sequence

from .errors import MalformedInputError, NotAFaceError, PurityError

Simplex = tuple


def simplex(vertices: Iterable[int]) -> Simplex:
    """Canonical (sorted, duplicate-free) form of a vertex collection."""
    vs = tuple(vertices)
    canon = tuple(sorted(set(vs)))
    if len(canon) != len(vs):
        raise MalformedInputError(f"repeated vertex in {vs!r}")
    return canon


class SimplicialComplex:
    """A finite abstract simplicial complex given by its facets.

    Build instances with :meth:`from_facets`. Objects are immutable after
    construction and may be shared freely between readers.

    Attributes
    ----------
    facets : tuple of Simplex
        The maximal faces, in canonical order.
    n : int
        One more than the dimension, so the complex is (n-1)-dimensional.
    is_pure : bool
        Whether every facet has exactly ``n`` vertices.
    labels : dict or None
        Optional display name for each vertex id.
    """

    def __init__(self, faces_by_dim: Sequence[Sequence[Simplex]],
                 labels: Mapping[int, str] | None = None):
        self._faces = tuple(tuple(sorted(fs)) for fs in faces_by_dim)
        self._index = [{f: i for i, f in enumerate(fs)} for fs in self._faces]
        self.n = len(self._faces)
        self.labels = dict(labels) if labels else None

        cofaces = set()
        for fs in self._faces[1:]:
            for f in fs:
                for i in range(len(f)):
                    cofaces.add(f[:i] + f[i + 1:])
        self.facets = tuple(sorted(
            (f for fs in self._faces for f in fs if f not in cofaces),
            key=lambda f: (len(f), f)))
        self.is_pure = all(len(f) == self.n for f in self.facets)

        self._facet_count = Counter()
        for facet in self.facets:
            for k in range(1, len(facet) + 1):
                for sub in combinations(facet, k):
                    self._facet_count[sub] += 1

    @classmethod
    def from_facets(cls, facets: Iterable[Iterable[int]],
                    labels: Mapping[int, str] | None = None) -> "SimplicialComplex":
        """Downward closure of ``facets``.

        The inputs need not be maximal; non-maximal ones are absorbed.
        """
        faces: list[set] = []
        seen_any = False
        for raw in facets:
            f = simplex(raw)
            if not f:
                raise MalformedInputError("empty facet")
            seen_any = True
            while len(faces) < len(f):
                faces.append(set())
            for k in range(1, len(f) + 1):
                faces[k - 1].update(combinations(f, k))
        if not seen_any:
            raise MalformedInputError("a complex needs at least one facet")
        return cls(faces, labels)

    # -- enumeration ---------------------------------------------------

    @property
    def dim(self) -> int:
        return self.n - 1

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(v for (v,) in self._faces[0])

    @property
    def f_vector(self) -> tuple[int, ...]:
        return tuple(len(fs) for fs in self._faces)

    def faces(self, k: int) -> tuple[Simplex, ...]:
        """All k-dimensional faces in lexicographic order."""
        if not 0 <= k < self.n:
            raise IndexError(f"dimension {k} outside 0..{self.n - 1}")
        return self._faces[k]

    def all_faces(self):
        for fs in self._faces:
            yield from fs

    def index(self, face: Iterable[int]) -> int:
        """Position of ``face`` within :meth:`faces` of its dimension."""
        f = simplex(face)
        try:
            return self._index[len(f) - 1][f]
        except (IndexError, KeyError):
            raise NotAFaceError(f"{f!r} is not a face") from None

    def __contains__(self, face) -> bool:
        try:
            f = simplex(face)
        except MalformedInputError:
            return False
        return 0 < len(f) <= self.n and f in self._index[len(f) - 1]

    def _require(self, face) -> Simplex:
        f = simplex(face)
        if f not in self:
            raise NotAFaceError(f"{f!r} is not a face")
        return f

    def label(self, v: int) -> str:
        if self.labels and v in self.labels:
            return self.labels[v]
        return str(v)

    # -- local structure -------------------------------------------------

    def star(self, tau) -> frozenset:
        """Faces sigma (non-empty) with sigma | tau in the complex."""
        tau = self._require(tau)
        ts = set(tau)
        out = set()
        for facet in self.facets:
            if ts.issubset(facet):
                for k in range(1, len(facet) + 1):
                    out.update(combinations(facet, k))
        return frozenset(out)

    def link(self, tau) -> "SimplicialComplex":
        """The link of ``tau`` as a complex on the original vertex ids."""
        tau = self._require(tau)
        ts = set(tau)
        rest = [tuple(v for v in f if v not in ts)
                for f in self.facets if ts.issubset(f)]
        rest = [r for r in rest if r]
        if not rest:
            raise NotAFaceError(f"{tau!r} is a facet; its link is empty")
        return SimplicialComplex.from_facets(rest, self.labels)

    def is_connected(self) -> bool:
        adj = {v: set() for v in self.vertices}
        if self.n > 1:
            for u, v in self.faces(1):
                adj[u].add(v)
                adj[v].add(u)
        start = self.vertices[0]
        seen = {start}
        stack = [start]
        while stack:
            for w in adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(adj)

    # -- weights -----------------------------------------------------------

    def facet_count(self, face) -> int:
        """Number of facets containing ``face``."""
        return self._facet_count[self._require(face)]

    def weight_parts(self, face) -> tuple[int, int]:
        """Numerator and denominator (unreduced) of the weight of ``face``."""
        if not self.is_pure:
            raise PurityError("weights are defined only for pure complexes")
        f = self._require(face)
        return self._facet_count[f], comb(self.n, len(f)) * len(self._faces[-1])

    def weight(self, face) -> Fraction:
        """Probability that a uniform facet followed by a uniform
        sub-face of the same size yields ``face``."""
        num, den = self.weight_parts(face)
        return Fraction(num, den)

    def weights(self, k: int) -> dict:
        return {f: self.weight(f) for f in self.faces(k)}

    # -- comparisons ---------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, SimplicialComplex):
            return NotImplemented
        return self._faces == other._faces

    def __hash__(self):
        return hash(self.facets)

    def __repr__(self):
        kind = "pure" if self.is_pure else "non-pure"
        return f"<SimplicialComplex {kind} dim={self.dim} f={self.f_vector}>"


def from_facets(facets, labels=None) -> SimplicialComplex:
    return SimplicialComplex.from_facets(facets, labels)


def full_simplex(n: int) -> SimplicialComplex:
    """The (n-1)-simplex on vertices 0..n-1."""
    return SimplicialComplex.from_facets([range(n)])
