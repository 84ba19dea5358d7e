"""Near-covers Y_phi -> X built from 1-cochains, and their deficiency.

The fiber over a vertex u of X is {[u, s] : s in S}. Vertex ``[u, s]`` of
the total complex gets id ``pos(u) * t + s`` where ``pos`` is the position
of u in ``X.vertices``. The matching over an edge uv is the permutation
g_uv = phi(u, v), which carries the fiber over v onto the fiber over u.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import sqrt

import numpy as np

from ._search import CochainScan
from .cochains import Cochain0, Cochain1, d1, dist1
from .complex import SimplicialComplex
from .errors import ConsistencyError, MalformedInputError, PurityError, ShapeError
from .groups import GroupAction


class NearCover:
    """The pair (f, Y_phi) attached to a 1-cochain ``phi``."""

    def __init__(self, cochain: Cochain1):
        if not cochain.complex.is_pure:
            raise PurityError("covers are defined over pure complexes")
        self.cochain = cochain
        self.base = cochain.complex
        self.action = cochain.group
        self.t = self.action.t
        self._pos = {v: i for i, v in enumerate(self.base.vertices)}

    # -- vertex encoding ---------------------------------------------------

    def lift_vertex(self, u: int, s: int) -> int:
        return self._pos[u] * self.t + s

    def project(self, y: int) -> tuple[int, int]:
        """Inverse of :meth:`lift_vertex`: y -> (u, s)."""
        i, s = divmod(y, self.t)
        return self.base.vertices[i], s

    def f(self, y: int) -> int:
        return self.project(y)[0]

    # -- the total complex -----------------------------------------------------

    def lifts(self, face) -> list[tuple]:
        """All compatible lifts of a face of X (at most t of them)."""
        phi, G = self.cochain, self.action
        u0 = face[0]
        out = []
        for s0 in range(self.t):
            sheet = {u0: s0}
            for u in face[1:]:
                sheet[u] = G.apply(phi(u, u0), s0)
            ok = all(sheet[a] == G.apply(phi(a, b), sheet[b])
                     for i, a in enumerate(face) for b in face[i + 1:])
            if ok:
                out.append(tuple(sorted(self.lift_vertex(u, sheet[u]) for u in face)))
        return out

    @cached_property
    def total_complex(self) -> SimplicialComplex:
        faces = []
        for face in self.base.all_faces():
            faces.extend(self.lifts(face))
        labels = {self.lift_vertex(u, s): f"{self.base.label(u)}:{s}"
                  for u in self.base.vertices for s in range(self.t)}
        return SimplicialComplex.from_facets(faces, labels)

    @cached_property
    def triangle_fiber_sizes(self) -> dict:
        """Number of triangles of Y over each triangle of X."""
        Y = self.total_complex
        sizes = dict.fromkeys(self.base.faces(2), 0) if self.base.n >= 3 else {}
        if Y.n >= 3:
            for tri in Y.faces(2):
                sizes[tuple(sorted(self.f(y) for y in tri))] += 1
        return sizes

    def fiber_is_cover(self, tri) -> bool:
        """True iff the preimage of ``tri`` is t disjoint triangles."""
        return self.triangle_fiber_sizes[tuple(sorted(tri))] == self.t

    def is_covering(self) -> bool:
        """Check that f maps every vertex star of Y isomorphically."""
        X, Y = self.base, self.total_complex
        for y in Y.vertices:
            u = self.f(y)
            st_y = Y.star((y,))
            st_x = X.star((u,))
            image = set()
            for face in st_y:
                proj = tuple(sorted(self.f(z) for z in face))
                if len(set(proj)) != len(face):
                    return False
                image.add(proj)
            if len(image) != len(st_y) or image != set(st_x):
                return False
        return True

    def __eq__(self, other):
        if not isinstance(other, NearCover):
            return NotImplemented
        return (self.cochain == other.cochain
                and self.total_complex == other.total_complex)

    def __hash__(self):
        return hash(self.cochain.values)

    def __repr__(self):
        return f"<NearCover t={self.t} over {self.base!r}>"

    @classmethod
    def from_total_complex(cls, X: SimplicialComplex, action: GroupAction,
                           Y: SimplicialComplex) -> "NearCover":
        """Recover the cochain of a map given by its total complex.

        ``Y`` must use the vertex encoding of :meth:`lift_vertex` and be
        exactly the complex Y_phi for the cochain read off its matchings.
        """
        probe = cls(Cochain1.trivial(X, action))
        phi = _read_matchings(probe, Y)
        cover = cls(phi)
        if cover.total_complex != Y:
            raise MalformedInputError("Y is not the lift of its own edge matchings")
        return cover


def _read_matchings(probe: NearCover, Y: SimplicialComplex) -> Cochain1:
    X, G, t = probe.base, probe.action, probe.t
    over = defaultdict(dict)
    for a, b in (Y.faces(1) if Y.n > 1 else ()):
        (ua, sa), (ub, sb) = probe.project(a), probe.project(b)
        if ua == ub:
            raise MalformedInputError("edge of Y inside a single fiber")
        if ua > ub:
            (ua, sa), (ub, sb) = (ub, sb), (ua, sa)
        if sb in over[(ua, ub)]:
            raise MalformedInputError(f"fiber over {(ua, ub)} is not a matching")
        over[(ua, ub)][sb] = sa
    values = []
    for e in X.faces(1):
        m = over.get(e, {})
        if len(m) != t or len(set(m.values())) != t:
            raise MalformedInputError(f"fiber over {e} is not a perfect matching")
        values.append(G.index([m[s] for s in range(t)]))
    return Cochain1(X, G, tuple(values))


def lift_complex(phi: Cochain1) -> NearCover:
    return NearCover(phi)


def extract_cochain(cover: NearCover) -> Cochain1:
    """Read phi(u, v) = g_uv back off the matchings of the total complex."""
    return _read_matchings(cover, cover.total_complex)


@dataclass(frozen=True)
class DeficiencyReport:
    m: Fraction
    local: dict          # (u, s) -> local deficiency
    violated: tuple      # triangles of X whose fiber is not t triangles


def deficiency_exact(cover: NearCover) -> DeficiencyReport:
    """Deficiency of the projection, computed two independent ways.

    The first route reads the links of the total complex; the second uses
    fixed-point counts of d1 phi. They must agree exactly.
    """
    X, Y, t, G = cover.base, cover.total_complex, cover.t, cover.action
    phi = cover.cochain
    local = {}
    route_a = Fraction(0)
    route_b = Fraction(0)

    covered = defaultdict(set)  # y -> projected link edges of y in Y
    if Y.n >= 3:
        for tri in Y.faces(2):
            for i, y in enumerate(tri):
                a, b = (cover.f(z) for j, z in enumerate(tri) if j != i)
                covered[y].add((min(a, b), max(a, b)))

    for u in X.vertices:
        cu = X.weight((u,))
        link_edges = {}
        if X.n >= 3:
            lk = X.link((u,))
            link_edges = {e: lk.weight(e) for e in lk.faces(1)}
        total = Fraction(0)
        for s in range(t):
            y = cover.lift_vertex(u, s)
            mu = sum((w for e, w in link_edges.items() if e not in covered[y]), Fraction(0))
            local[(u, s)] = mu
            total += mu
        route_a += cu * total / t

        moved = Fraction(0)
        for (v, w), c in link_edges.items():
            g = G.prod(phi(u, v), phi(v, w), phi(w, u))
            moved += (t - G.fix(g)) * c
        route_b += cu * moved
    route_b /= t

    if route_a != route_b:
        raise ConsistencyError(f"deficiency routes disagree: {route_a} != {route_b}")
    violated = tuple(tri for tri, k in cover.triangle_fiber_sizes.items() if k != t)
    return DeficiencyReport(route_a, local, violated)


def deficiency(phi: Cochain1) -> Fraction:
    """Closed form: sum over triangles of c(tau) (1 - fix(d1 phi(tau)) / t)."""
    X, G = phi.complex, phi.group
    t = G.t
    return sum((X.weight(tri) * Fraction(t - G.fix(g), t)
                for tri, g in d1(phi).values.items()), Fraction(0))


@dataclass(frozen=True)
class TriangleTestResult:
    samples: int
    failures: int
    frequency: float
    stderr: float
    exact: Fraction
    seed: int

    def within(self, k: float = 3.0) -> bool:
        """Whether the estimate lies within k standard errors of ``exact``.

        Uses the standard error of the exact failure probability so that a
        run with zero observed failures is still judged fairly.
        """
        p = float(self.exact)
        se = sqrt(p * (1 - p) / self.samples)
        return abs(self.frequency - p) <= k * se + 1e-12


def triangle_test(cover: NearCover, samples: int, seed: int = 0) -> TriangleTestResult:
    """Sample triangles with probability c_X and check their fibers.

    A triangle is drawn by picking a uniform facet and then a uniform
    3-subset of it. Randomness comes from numpy's PCG64 generator seeded
    with ``seed``.
    """
    if samples < 1:
        raise MalformedInputError("samples must be positive")
    X = cover.base
    if X.n < 3:
        raise MalformedInputError("the triangle test needs a complex with triangles")
    rng = np.random.default_rng(seed)
    facets = X.facets
    picks = rng.integers(len(facets), size=samples)
    failures = 0
    for k in picks:
        facet = facets[int(k)]
        sub = rng.choice(len(facet), size=3, replace=False)
        tri = tuple(sorted(facet[int(i)] for i in sub))
        if not cover.fiber_is_cover(tri):
            failures += 1
    freq = failures / samples
    exact = sum((X.weight(tri) for tri, k in cover.triangle_fiber_sizes.items()
                 if k != cover.t), Fraction(0))
    return TriangleTestResult(samples, failures, freq,
                              sqrt(freq * (1 - freq) / samples), exact, seed)


def cover_distance(c1: NearCover, c2: NearCover) -> Fraction:
    """Weighted fraction of base edges whose matchings differ."""
    if c1.base != c2.base or c1.action != c2.action:
        raise ShapeError("covers of different complexes or actions")
    return dist1(c1.cochain, c2.cochain)


def relabel(cover: NearCover, psi: Cochain0) -> dict:
    """The vertex map [v, s] -> [v, psi(v)^-1 s] from Y_{psi.phi} to Y_phi."""
    G = cover.action
    return {cover.lift_vertex(v, s): cover.lift_vertex(v, G.apply(G.inv(psi(v)), s))
            for v in cover.base.vertices for s in range(cover.t)}


@dataclass(frozen=True)
class StabilityReport:
    c: Fraction
    witness: Cochain1
    deficiency: Fraction
    csy: Fraction
    scanned: int


def cover_stability_exact(X: SimplicialComplex, action: GroupAction, gauge: bool = True,
                          max_enum: int = 10**8) -> StabilityReport:
    """min over non-cocycles of m(Y_phi) / dist(phi, Z^1).

    The distance to the genuine covers equals the cosystolic norm, so the
    denominator is computed on cochains.
    """
    scan = CochainScan(X, action, gauge=gauge, max_enum=max_enum)
    res = scan.minimize(scan.deficiency_weight, action.t * scan.tri_den)
    return StabilityReport(res.ratio, Cochain1(X, action, res.witness),
                           res.numerator, res.csy, res.scanned)
