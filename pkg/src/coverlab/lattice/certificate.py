"""The averaged filling count delta, the gamma certificate and the decoder."""
from __future__ import annotations

import logging
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import comb

import numpy as np

from ..cochains import Cochain0, Cochain1, d0, d1
from ..errors import ConsistencyError, MalformedInputError
from .core import GeometricLattice, subspace_lattice
from .filling import (FillingDisc, OrderingScheme, correction_value,
                      filling_from_atoms, gl_scheme)

log = logging.getLogger(__name__)


class _FillingCache:
    """Memoized fillings keyed by (a0, a1, a2, v0, v1)."""

    def __init__(self, L: GeometricLattice):
        self.L = L
        self._cache = {}

    def get(self, a0, a1, a2, v0, v1) -> FillingDisc:
        key = (a0, a1, a2, v0, v1)
        disc = self._cache.get(key)
        if disc is None:
            disc = filling_from_atoms(self.L, a0, a1, a2, v0, v1)
            self._cache[key] = disc
        return disc


def _edge_arrays(L: GeometricLattice):
    X = L.order_complex
    edges = X.faces(1)
    return X, edges, np.array([e[0] for e in edges]), np.array([e[1] for e in edges])


def _filling_keys(L: GeometricLattice, scheme: OrderingScheme, rows: np.ndarray):
    """Encoded (a2, a0, a1, edge) keys for the orderings in ``rows``."""
    X, edges, V0, V1 = _edge_arrays(L)
    A, E = len(L.atoms), len(edges)
    sub = OrderingScheme(scheme.ranks[rows], scheme.weights[:len(rows)])
    b = sub.b_table(L)
    a2 = sub.least_atom
    keys = ((a2[:, None] * A + b[:, V0]) * A + b[:, V1]) * E + np.arange(E)[None, :]
    return keys


def _count_chunk(args):
    L, scheme, rows = args
    keys, counts = np.unique(_filling_keys(L, scheme, rows), return_counts=True)
    return keys, counts


@dataclass(frozen=True)
class DeltaTable:
    """Expected weighted filling count delta(tau) for every triangle."""
    delta: dict                  # triangle -> Fraction
    filling_triangles: Fraction  # E_s sum over edges of f_2(Y_s(uv))
    orderings: int

    @property
    def gamma(self) -> Fraction:
        return max(self.delta.values())

    @property
    def is_constant(self) -> bool:
        return len(set(self.delta.values())) == 1


def delta_s(L: GeometricLattice, scheme: OrderingScheme, s: int, tau) -> Fraction:
    """Sum of c(uv)/c(tau) over the edges uv whose filling uses ``tau``."""
    X = L.order_complex
    tau = tuple(sorted(tau))
    b = OrderingScheme(scheme.ranks[[s]], (Fraction(1),)).b_table(L)[0]
    a2 = L.atoms[int(scheme.least_atom[s])]
    total = Fraction(0)
    for v0, v1 in X.faces(1):
        disc = filling_from_atoms(L, L.atoms[b[v0]], L.atoms[b[v1]], a2, v0, v1)
        if tau in disc.triangles:
            total += X.weight((v0, v1)) / X.weight(tau)
    return total


def delta_table(L: GeometricLattice, scheme: OrderingScheme, workers: int = 1,
                chunk: int = 2048) -> DeltaTable:
    """delta(tau) = sum_s mu(s) delta_s(tau), exactly, for every triangle."""
    X, edges, V0, V1 = _edge_arrays(L)
    A, E = len(L.atoms), len(edges)
    n = X.n
    m = len(scheme)
    cache = _FillingCache(L)
    tri_count = {t: X.facet_count(t) for t in X.faces(2)}
    edge_count = [X.facet_count(e) for e in edges]

    # weighted multiplicity of each distinct filling
    multiplicity = defaultdict(int)
    chunks = [np.arange(i, min(i + chunk, m)) for i in range(0, m, chunk)]
    if scheme.uniform:
        jobs = [(L, scheme, rows) for rows in chunks]
        if workers > 1 and len(jobs) > 1:
            with ProcessPoolExecutor(workers) as pool:
                results = list(pool.map(_count_chunk, jobs))
        else:
            results = [_count_chunk(j) for j in jobs]
        for keys, counts in results:
            for k, c in zip(keys.tolist(), counts.tolist()):
                multiplicity[k] += c
        scale = scheme.weights[0]
    else:
        for rows in chunks:
            keys = _filling_keys(L, scheme, rows)
            for r, row in zip(rows, keys.tolist()):
                for k in row:
                    multiplicity[k] += scheme.weights[r]
        scale = Fraction(1)

    acc = defaultdict(int)   # tau -> sum of multiplicity * facet count of uv
    fill_total = 0
    for key, mult in multiplicity.items():
        rest, e = divmod(key, E)
        rest, p1 = divmod(rest, A)
        p2, p0 = divmod(rest, A)
        v0, v1 = edges[e]
        disc = cache.get(L.atoms[p0], L.atoms[p1], L.atoms[p2], v0, v1)
        fill_total += mult * len(disc.triangles)
        for tau in disc.triangles:
            acc[tau] += mult * edge_count[e]
    # c(uv)/c(tau) = count(uv) C(n,3) / (count(tau) C(n,2))
    delta = {tau: scale * Fraction(acc.get(tau, 0) * comb(n, 3), tri_count[tau] * comb(n, 2))
             for tau in X.faces(2)}
    return DeltaTable(delta, scale * fill_total, m)


@dataclass(frozen=True)
class GammaCertificate:
    q: int | None
    gamma: Fraction
    mode: str
    samples: int
    seed: int | None
    table: DeltaTable

    @property
    def h1_lower_bound(self) -> Fraction:
        return 1 / self.gamma

    def within(self, bound=9) -> bool:
        return self.gamma <= bound


def gamma_certificate(q: int = 2, mode: str = "exact", samples: int | None = None,
                      seed: int | None = None, workers: int = 1,
                      scheme: OrderingScheme | None = None,
                      lattice: GeometricLattice | None = None) -> GammaCertificate:
    """gamma = max_tau delta(tau), certifying h1(L; G) >= 1/gamma for all G.

    By default the lattice is the subspace lattice of F_q^4 with orderings
    induced by GL_4(F_q); pass ``lattice`` and ``scheme`` to use others.
    """
    L = lattice if lattice is not None else subspace_lattice(q)
    if scheme is None:
        scheme = gl_scheme(L, mode=mode, samples=samples, seed=seed)
        log.info("gamma: %d orderings (mode=%s, seed=%s)", len(scheme), mode, seed)
    table = delta_table(L, scheme, workers=workers)
    return GammaCertificate(getattr(L, "q", None), table.gamma, mode, len(scheme), seed, table)


@dataclass(frozen=True)
class DecodeResult:
    candidate: Cochain1
    distance: Fraction
    ordering: int
    distances: tuple          # ||psi_s . phi|| for every ordering
    claim_checks: int

    @property
    def mean_distance(self) -> Fraction:
        return sum(self.distances, Fraction(0)) / len(self.distances)


def _correction_table(L: GeometricLattice, phi: Cochain1, scheme: OrderingScheme):
    """(m, N) array of psi_s(u) plus the b table it was built from."""
    G = phi.group
    X = phi.complex
    A = len(L.atoms)
    size = max(X.vertices) + 1
    # P[i, j] = phi(a, a|b) phi(a|b, b) for atoms a = atoms[i], b = atoms[j]
    P = np.zeros((A, A), dtype=np.int64)
    for i, a in enumerate(L.atoms):
        for j, b in enumerate(L.atoms):
            P[i, j] = correction_value(L, phi, a, b, b)
    # Q[j, u] = phi(b, u) for b = atoms[j] below u
    Q = np.zeros((A, size), dtype=np.int64)
    below = L.below_atoms
    for u in X.vertices:
        for j in np.flatnonzero(below[u]):
            b = L.atoms[j]
            Q[j, u] = G.identity if b == u else phi(b, u)
    bt = scheme.b_table(L)[:, :size]
    a = scheme.least_atom[:, None]
    psi = G.table[P[a, bt], Q[bt, np.arange(size)[None, :]]]
    return psi, bt


def decode(L: GeometricLattice, phi: Cochain1, scheme: OrderingScheme,
           check_claim: bool = True) -> DecodeResult:
    """Best coboundary among d0(psi_s^-1) over the orderings of ``scheme``.

    The distance from phi to d0(psi_s^-1) equals the norm of psi_s . phi.
    With ``check_claim`` every edge with non-trivial corrected value is
    checked: the product of phi around its cycle must match, and its
    filling must contain a violated triangle.
    """
    X, G = phi.complex, phi.group
    if X != L.order_complex:
        raise MalformedInputError("cochain does not live on the lattice's order complex")
    _, edges, U, V = _edge_arrays(L)
    A, E = len(L.atoms), len(edges)
    w = np.array([X.weight_parts(e)[0] for e in edges], dtype=np.int64)
    den = X.weight_parts(edges[0])[1]
    mul, inv = G.table, G.inverse
    phi_arr = np.array(phi.values, dtype=np.int64)

    psi, bt = _correction_table(L, phi, scheme)
    corrected = mul[mul[psi[:, U], phi_arr[None, :]], inv[psi[:, V]]]
    moved = corrected != G.identity
    dist = moved.astype(np.int64) @ w
    best = int(np.argmin(dist))          # first minimizer
    distances = tuple(Fraction(int(d), den) for d in dist)

    checks = 0
    if check_claim and moved.any():
        violated = set(d1(phi).violated)
        a2 = scheme.least_atom[:, None]
        keys = ((a2 * A + bt[:, U]) * A + bt[:, V]) * E + np.arange(E)[None, :]
        rows, cols = np.nonzero(moved)
        flat = keys[rows, cols]
        uniq, first = np.unique(flat, return_index=True)
        hol_of = {}
        for key in uniq.tolist():
            rest, e = divmod(key, E)
            rest, p1 = divmod(rest, A)
            p2, p0 = divmod(rest, A)
            v0, v1 = edges[e]
            disc = filling_from_atoms(L, L.atoms[p0], L.atoms[p1], L.atoms[p2], v0, v1)
            hol = G.identity
            for x, y in zip(disc.cycle, disc.cycle[1:]):
                if x != y:
                    hol = G.mul(hol, phi(x, y))
            if hol != G.identity and not violated.intersection(disc.triangles):
                raise ConsistencyError(f"filling of {edges[e]} has no violated triangle")
            hol_of[key] = hol
        expected = np.array([hol_of[k] for k in flat.tolist()], dtype=np.int64)
        bad = np.flatnonzero(expected != corrected[rows, cols])
        if len(bad):
            r, c = rows[bad[0]], cols[bad[0]]
            raise ConsistencyError(f"cycle product differs from correction on {edges[c]} (s={r})")
        checks = len(flat)

    inverse_psi = Cochain0(X, G, tuple(int(inv[psi[best, u]]) for u in X.vertices))
    return DecodeResult(d0(inverse_psi), Fraction(int(dist[best]), den), best, distances, checks)
