"""Group-valued 0- and 1-cochains on a simplicial complex.

A 1-cochain stores one group element per unordered edge ``(u, v)`` with
``u < v``; reading it on the reversed edge returns the inverse, so
antisymmetry holds by construction.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Mapping, Sequence

from .complex import SimplicialComplex
from .errors import CapacityError, MalformedInputError, NotAFaceError, ShapeError
from .groups import GroupAction

DEFAULT_MAX_ENUM = 10**8


@dataclass(frozen=True)
class Cochain0:
    complex: SimplicialComplex
    group: GroupAction
    values: tuple  # aligned with complex.vertices

    def __post_init__(self):
        if len(self.values) != len(self.complex.vertices):
            raise MalformedInputError("0-cochain must be total on the vertices")

    @classmethod
    def constant(cls, X, group, g=0):
        return cls(X, group, (group.index(g),) * len(X.vertices))

    @classmethod
    def from_dict(cls, X, group, values: Mapping[int, object], default=0):
        vals = tuple(group.index(values.get(v, default)) for v in X.vertices)
        return cls(X, group, vals)

    def __call__(self, v: int) -> int:
        return self.values[self.complex.index((v,))]

    def inverse(self) -> "Cochain0":
        return Cochain0(self.complex, self.group,
                        tuple(self.group.inv(g) for g in self.values))

    def __mul__(self, other: "Cochain0") -> "Cochain0":
        _same_shape(self, other)
        return Cochain0(self.complex, self.group,
                        tuple(self.group.mul(a, b) for a, b in zip(self.values, other.values)))


@dataclass(frozen=True)
class Cochain1:
    complex: SimplicialComplex
    group: GroupAction
    values: tuple  # aligned with complex.faces(1)

    def __post_init__(self):
        if len(self.values) != len(self.complex.faces(1)):
            raise MalformedInputError("1-cochain must be total on the edges")

    @classmethod
    def trivial(cls, X, group):
        return cls(X, group, (group.identity,) * len(X.faces(1)))

    @classmethod
    def from_dict(cls, X, group, values: Mapping[tuple, object]):
        """Build from ``{(u, v): g}``; unlisted edges get the identity.

        Either orientation may be given. Listing both orientations with
        values that are not mutually inverse is an error.
        """
        vals = [None] * len(X.faces(1))
        for (u, v), g in values.items():
            g = group.index(g)
            i = X.index((u, v))
            if u > v:
                g = group.inv(g)
            if vals[i] is not None and vals[i] != g:
                raise MalformedInputError(f"inconsistent values on edge {(u, v)}")
            vals[i] = g
        return cls(X, group, tuple(group.identity if g is None else g for g in vals))

    def __call__(self, u: int, v: int) -> int:
        g = self.values[self.complex.index((u, v))]
        return g if u < v else self.group.inv(g)

    def items(self):
        return zip(self.complex.faces(1), self.values)

    def support(self) -> tuple:
        return tuple(e for e, g in self.items() if g != self.group.identity)


@dataclass(frozen=True)
class TriangleDefects:
    """Values of d1 phi on each triangle, read in increasing vertex order."""
    values: dict
    violated: tuple


@dataclass(frozen=True)
class CochainNorms:
    norm: Fraction
    d1_norm: Fraction
    support: tuple
    d1_support: tuple


def _same_shape(a, b):
    if a.complex != b.complex or a.group != b.group:
        raise ShapeError("cochains live on different complexes or groups")


def d0(psi: Cochain0) -> Cochain1:
    """Coboundary: (u, v) -> psi(u) psi(v)^-1."""
    X, G = psi.complex, psi.group
    vals = tuple(G.mul(psi(u), G.inv(psi(v))) for u, v in X.faces(1))
    return Cochain1(X, G, vals)


def d1(phi: Cochain1) -> TriangleDefects:
    """phi(u,v) phi(v,w) phi(w,u) on every triangle u < v < w."""
    X, G = phi.complex, phi.group
    values = {}
    violated = []
    if X.n >= 3:
        for tri in X.faces(2):
            u, v, w = tri
            g = G.prod(phi(u, v), phi(v, w), phi(w, u))
            values[tri] = g
            if g != G.identity:
                violated.append(tri)
    return TriangleDefects(values, tuple(violated))


def d1_at(phi: Cochain1, u: int, v: int, w: int) -> int:
    """d1 phi read starting from vertex ``u`` (in the given orientation)."""
    G = phi.group
    return G.prod(phi(u, v), phi(v, w), phi(w, u))


def is_cocycle(phi: Cochain1) -> bool:
    return not d1(phi).violated


def act(psi: Cochain0, phi: Cochain1) -> Cochain1:
    """(psi . phi)(u, v) = psi(u) phi(u, v) psi(v)^-1."""
    _same_shape(psi, phi)
    G = phi.group
    vals = tuple(G.prod(psi(u), g, G.inv(psi(v))) for (u, v), g in phi.items())
    return Cochain1(phi.complex, G, vals)


def norm1(phi: Cochain1) -> Fraction:
    X = phi.complex
    return sum((X.weight(e) for e in phi.support()), Fraction(0))


def d1_norm(phi: Cochain1) -> Fraction:
    X = phi.complex
    return sum((X.weight(t) for t in d1(phi).violated), Fraction(0))


def dist1(phi: Cochain1, psi: Cochain1) -> Fraction:
    _same_shape(phi, psi)
    X = phi.complex
    return sum((X.weight(e) for e, a, b in zip(X.faces(1), phi.values, psi.values)
                if a != b), Fraction(0))


def norms(phi: Cochain1) -> CochainNorms:
    defects = d1(phi)
    X = phi.complex
    return CochainNorms(norm1(phi),
                        sum((X.weight(t) for t in defects.violated), Fraction(0)),
                        phi.support(), defects.violated)


def holonomy(phi: Cochain1, loop: Sequence[int]) -> int:
    """Ordered product of phi along the closed vertex path ``loop``."""
    X, G = phi.complex, phi.group
    out = G.identity
    for a, b in zip(loop, loop[1:]):
        if a == b:
            continue
        if (a, b) not in X:
            raise NotAFaceError(f"path step {(a, b)} is not an edge")
        out = G.mul(out, phi(a, b))
    return out


# -- exhaustive search over cocycles -------------------------------------------

def _edge_order(X: SimplicialComplex) -> list[int]:
    """Edge positions ordered so that triangles close as early as possible."""
    edges = X.faces(1)
    if X.n < 3:
        return list(range(len(edges)))
    tri_edges = [[X.index((a, b)) for a, b in ((t[0], t[1]), (t[1], t[2]), (t[0], t[2]))]
                 for t in X.faces(2)]
    by_edge = {i: [] for i in range(len(edges))}
    for k, te in enumerate(tri_edges):
        for i in te:
            by_edge[i].append(k)
    placed = set()
    order = []
    remaining = set(range(len(edges)))
    while remaining:
        # prefer the edge that completes the most triangles, then lowest index
        best = min(remaining, key=lambda i: (
            -sum(1 for k in by_edge[i] if all(j in placed or j == i for j in tri_edges[k])),
            -sum(1 for k in by_edge[i] for j in tri_edges[k] if j in placed),
            i))
        order.append(best)
        placed.add(best)
        remaining.discard(best)
    return order


def _triangle_constraints(X: SimplicialComplex, order: list[int]):
    """For each step, the triangles closed by assigning that edge.

    Each constraint is the edge positions (uv, vw, uw) of a triangle
    u < v < w, whose other two edges were assigned at earlier steps.
    """
    if X.n < 3:
        return [[] for _ in order]
    pos = {e: step for step, e in enumerate(order)}
    closes = [[] for _ in order]
    for u, v, w in X.faces(2):
        e_uv, e_vw, e_uw = X.index((u, v)), X.index((v, w)), X.index((u, w))
        last = max((e_uv, e_vw, e_uw), key=lambda e: pos[e])
        closes[pos[last]].append((e_uv, e_vw, e_uw))
    return closes


def _forced_value(G, vals, new, tri):
    # phi(u,v) phi(v,w) = phi(u,w) on a cocycle, for u < v < w
    e_uv, e_vw, e_uw = tri
    if new == e_uw:
        return G.mul(vals[e_uv], vals[e_vw])
    if new == e_uv:
        return G.mul(vals[e_uw], G.inv(vals[e_vw]))
    return G.mul(G.inv(vals[e_uv]), vals[e_uw])


def iter_cocycles(X: SimplicialComplex, group: GroupAction,
                  max_enum: int = DEFAULT_MAX_ENUM):
    """Yield every cocycle value-tuple by depth-first triangle propagation.

    Output order is not lexicographic; callers that need an order sort.
    """
    order = _edge_order(X)
    closes = _triangle_constraints(X, order)
    G = group
    vals = [None] * len(order)
    visits = 0

    def rec(step):
        nonlocal visits
        visits += 1
        if visits > max_enum:
            raise CapacityError(f"cocycle enumeration exceeds guard {max_enum}")
        if step == len(order):
            yield tuple(vals)
            return
        e = order[step]
        forced = None
        for tri in closes[step]:
            if forced is None:
                forced = _forced_value(G, vals, e, tri)
        candidates = range(G.order) if forced is None else (forced,)
        for g in candidates:
            vals[e] = g
            ok = True
            for tri in closes[step]:
                a, b, c = tri
                if G.mul(vals[a], vals[b]) != vals[c]:
                    ok = False
                    break
            if ok:
                yield from rec(step + 1)
        vals[e] = None

    yield from rec(0)


def cocycles(X: SimplicialComplex, group: GroupAction,
             max_enum: int = DEFAULT_MAX_ENUM) -> list[tuple]:
    """All cocycles of X as value tuples, sorted lexicographically."""
    return sorted(iter_cocycles(X, group, max_enum))


def coboundaries(X: SimplicialComplex, group: GroupAction,
                 max_enum: int = DEFAULT_MAX_ENUM) -> list[tuple]:
    """All coboundaries d0 psi with psi pinned to 1 at the first vertex of
    every connected component, sorted lexicographically."""
    verts = X.vertices
    roots = _component_roots(X)
    free = [v for v in verts if v not in roots]
    if group.order ** len(free) > max_enum:
        raise CapacityError(f"{group.order}^{len(free)} coboundaries exceed guard {max_enum}")
    out = set()
    for assignment in product(range(group.order), repeat=len(free)):
        vals = dict(zip(free, assignment))
        psi = Cochain0.from_dict(X, group, vals)
        out.add(d0(psi).values)
    return sorted(out)


def _component_roots(X: SimplicialComplex) -> set:
    adj = {v: set() for v in X.vertices}
    if X.n > 1:
        for u, v in X.faces(1):
            adj[u].add(v)
            adj[v].add(u)
    roots, seen = set(), set()
    for v in X.vertices:
        if v in seen:
            continue
        roots.add(v)
        stack = [v]
        seen.add(v)
        while stack:
            for w in adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
    return roots


def cosystolic_norm_exact(phi: Cochain1, simply_connected: bool = False,
                          max_enum: int = DEFAULT_MAX_ENUM) -> tuple[Fraction, Cochain1]:
    """Distance from ``phi`` to the nearest cocycle, with a witness.

    Among several nearest cocycles the lexicographically least value tuple
    is returned. With ``simply_connected=True`` the caller asserts that
    every cocycle is a coboundary, and only coboundaries are searched.
    """
    X, G = phi.complex, phi.group
    edges = X.faces(1)
    w = [X.weight_parts(e)[0] for e in edges]  # common denominator per dim
    if simply_connected:
        best = None
        for z in coboundaries(X, G, max_enum):
            d = sum(wi for wi, a, b in zip(w, phi.values, z) if a != b)
            if best is None or (d, z) < best:
                best = (d, z)
        den = X.weight_parts(edges[0])[1]
        return Fraction(best[0], den), Cochain1(X, G, best[1])

    order = _edge_order(X)
    closes = _triangle_constraints(X, order)
    vals = [None] * len(order)
    best = [None, None]
    visits = 0
    target = phi.values

    def rec(step, dist):
        nonlocal visits
        visits += 1
        if visits > max_enum:
            raise CapacityError(f"cocycle search exceeds guard {max_enum}")
        if best[0] is not None and dist > best[0]:
            return
        if step == len(order):
            cand = tuple(vals)
            if best[0] is None or (dist, cand) < (best[0], best[1]):
                best[0], best[1] = dist, cand
            return
        e = order[step]
        forced = None
        if closes[step]:
            forced = _forced_value(G, vals, e, closes[step][0])
        if forced is None:
            candidates = [target[e]] + [g for g in range(G.order) if g != target[e]]
        else:
            candidates = [forced]
        for g in candidates:
            vals[e] = g
            if all(G.mul(vals[a], vals[b]) == vals[c] for a, b, c in closes[step]):
                rec(step + 1, dist + (w[e] if g != target[e] else 0))
        vals[e] = None

    rec(0, 0)
    den = X.weight_parts(edges[0])[1]
    return Fraction(best[0], den), Cochain1(X, G, best[1])


def cosystolic_norm(phi: Cochain1, **kw) -> Fraction:
    return cosystolic_norm_exact(phi, **kw)[0]


def same_orbit(phi1: Cochain1, phi2: Cochain1, max_enum: int = DEFAULT_MAX_ENUM):
    """Return psi with psi . phi1 == phi2, or None, by brute force over C^0."""
    _same_shape(phi1, phi2)
    X, G = phi1.complex, phi1.group
    nv = len(X.vertices)
    if G.order ** nv > max_enum:
        raise CapacityError(f"{G.order}^{nv} vertex labelings exceed guard {max_enum}")
    for vals in product(range(G.order), repeat=nv):
        psi = Cochain0(X, G, vals)
        if act(psi, phi1) == phi2:
            return psi
    return None
