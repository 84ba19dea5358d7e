"""Vectorized exhaustive scan of C^1(X; G) used by h1 and cover-stability.

All norms are kept as integer numerators over a fixed per-dimension
denominator, so every comparison is exact.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .cochains import cocycles
from .complex import SimplicialComplex
from .errors import CapacityError, DegenerateError, PurityError
from .groups import GroupAction

# bound on B * |Z1| * |E| booleans held at once
_WORK_CELLS = 4_000_000


def spanning_forest_edges(X: SimplicialComplex) -> set[int]:
    """Edge positions of a BFS spanning forest, roots at the least vertex."""
    adj = {v: [] for v in X.vertices}
    for i, (u, v) in enumerate(X.faces(1)):
        adj[u].append((v, i))
        adj[v].append((u, i))
    tree, seen = set(), set()
    for root in X.vertices:
        if root in seen:
            continue
        seen.add(root)
        queue = deque([root])
        while queue:
            x = queue.popleft()
            for y, i in adj[x]:
                if y not in seen:
                    seen.add(y)
                    tree.add(i)
                    queue.append(y)
    return tree


@dataclass
class ScanResult:
    ratio: Fraction
    witness: tuple
    numerator: Fraction
    csy: Fraction
    scanned: int
    table: list | None


class CochainScan:
    """Enumerate 1-cochains and score them against the full cocycle set.

    With ``gauge=True`` the values on a spanning forest are pinned to the
    identity; every cochain is equivalent to such a one under the vertex
    action, which preserves both the violated-triangle set and the distance
    to the cocycles.
    """

    def __init__(self, X: SimplicialComplex, group: GroupAction, gauge: bool = True,
                 max_enum: int = 10**8):
        if not X.is_pure:
            raise PurityError("exhaustive scans need a pure complex")
        if X.n < 3:
            raise DegenerateError("complex has no triangles; h1 is undefined")
        self.X, self.G = X, group
        edges = X.faces(1)
        tris = X.faces(2)
        self.n_edges = len(edges)
        self.edge_w = np.array([X.weight_parts(e)[0] for e in edges], dtype=np.int64)
        self.edge_den = X.weight_parts(edges[0])[1]
        self.tri_w = np.array([X.weight_parts(t)[0] for t in tris], dtype=np.int64)
        self.tri_den = X.weight_parts(tris[0])[1]
        self.tri_edges = np.array([[X.index((u, v)), X.index((v, w)), X.index((u, w))]
                                   for u, v, w in tris], dtype=np.int64)
        pinned = spanning_forest_edges(X) if gauge else set()
        self.free = [i for i in range(self.n_edges) if i not in pinned]
        self.total = group.order ** len(self.free)
        if self.total > max_enum:
            raise CapacityError(f"{self.total} cochains exceed guard {max_enum}")
        self.Z = np.array(cocycles(X, group, max_enum), dtype=np.int64)
        if self.total * len(self.Z) > max_enum:
            raise CapacityError(
                f"{self.total} cochains x {len(self.Z)} cocycles exceed guard {max_enum}")
        self.mul = group.table
        self.inv = group.inverse
        self.fix = group.fix_counts

    def batches(self):
        k = len(self.free)
        q = self.G.order
        size = max(1, _WORK_CELLS // max(1, len(self.Z) * self.n_edges))
        for start in range(0, self.total, size):
            idx = np.arange(start, min(start + size, self.total), dtype=np.int64)
            phi = np.zeros((len(idx), self.n_edges), dtype=np.int64)
            rest = idx.copy()
            for j in range(k - 1, -1, -1):
                rest, digit = np.divmod(rest, q)
                phi[:, self.free[j]] = digit
            yield phi

    def d1_values(self, phi: np.ndarray) -> np.ndarray:
        a = phi[:, self.tri_edges[:, 0]]
        b = phi[:, self.tri_edges[:, 1]]
        c = self.inv[phi[:, self.tri_edges[:, 2]]]
        return self.mul[self.mul[a, b], c]

    def csy(self, phi: np.ndarray) -> np.ndarray:
        """Integer numerator of the distance to the nearest cocycle."""
        neq = phi[:, None, :] != self.Z[None, :, :]
        return (neq * self.edge_w).sum(axis=2).min(axis=1)

    def minimize(self, numerator, numerator_den: int, keep_table: bool = False) -> ScanResult:
        """Minimize numerator(phi) / csy(phi) over the non-cocycles.

        ``numerator`` maps (phi batch, d1 value batch) to integer numerators
        over ``numerator_den``. Ties go to the lexicographically least phi,
        which is the first one met since batches are produced in lex order.
        """
        best = None  # (num, den, witness)
        scanned = 0
        table = [] if keep_table else None
        for phi in self.batches():
            scanned += len(phi)
            dv = self.d1_values(phi)
            bad = (dv != 0).any(axis=1)
            if not bad.any():
                continue
            phi, dv = phi[bad], dv[bad]
            num = numerator(phi, dv) * self.edge_den
            den = self.csy(phi) * numerator_den
            if keep_table:
                for row, a, b in zip(phi, num, den):
                    table.append((tuple(int(x) for x in row), Fraction(int(a), int(b))))
            ratio = num / den
            lo = ratio.min()
            for i in np.flatnonzero(ratio <= lo * (1 + 1e-9)):
                a, b = int(num[i]), int(den[i])
                if best is None or a * best[1] < best[0] * b:
                    best = (a, b, tuple(int(x) for x in phi[i]))
        if best is None:
            raise DegenerateError("every cochain is a cocycle; the ratio is undefined")
        witness = np.array([best[2]], dtype=np.int64)
        dv = self.d1_values(witness)
        num_w = Fraction(int(numerator(witness, dv)[0]), numerator_den)
        csy_w = Fraction(int(self.csy(witness)[0]), self.edge_den)
        return ScanResult(Fraction(best[0], best[1]), best[2], num_w, csy_w, scanned, table)

    # numerators -------------------------------------------------------

    def d1_weight(self, phi, dv):
        return ((dv != 0) * self.tri_w).sum(axis=1)

    def deficiency_weight(self, phi, dv):
        """t times the deficiency, over the triangle denominator."""
        t = self.G.t
        return ((t - self.fix[dv]) * self.tri_w).sum(axis=1)
