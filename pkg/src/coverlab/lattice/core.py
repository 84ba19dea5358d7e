"""Geometric lattices, subspace lattices of F_q^4 and their order complexes.

Elements are numbered so that the index order refines the rank order;
element 0 is the bottom and the last element is the top. In the order
complex of the proper part, the vertex id of an element is its index.
"""
from __future__ import annotations

from functools import cached_property
from itertools import combinations, product

import numpy as np

from ..complex import SimplicialComplex
from ..errors import CapacityError, MalformedInputError

SUPPORTED_Q = (2, 3)
AMBIENT_DIM = 4


class GeometricLattice:
    """A finite ranked lattice given by ranks and its order relation.

    Parameters
    ----------
    ranks : sequence of int
        Rank of each element; must be non-decreasing in the index.
    leq : (N, N) boolean array
        ``leq[a, b]`` iff a <= b.
    labels : sequence of str, optional
    """

    def __init__(self, ranks, leq, labels=None):
        self.ranks = tuple(int(r) for r in ranks)
        if list(self.ranks) != sorted(self.ranks):
            raise MalformedInputError("element indices must refine the rank order")
        self._leq = np.asarray(leq, dtype=bool)
        n = len(self.ranks)
        self.labels = tuple(labels) if labels is not None else tuple(map(str, range(n)))
        self.bottom = 0
        self.top = n - 1
        self.atoms = tuple(i for i, r in enumerate(self.ranks) if r == 1)
        self.atom_pos = {a: i for i, a in enumerate(self.atoms)}
        self._join, self._meet = {}, {}

    def __len__(self):
        return len(self.ranks)

    @property
    def rank_of_top(self) -> int:
        return self.ranks[-1]

    def rank(self, x: int) -> int:
        return self.ranks[x]

    def leq(self, a: int, b: int) -> bool:
        return bool(self._leq[a, b])

    def join(self, a: int, b: int) -> int:
        key = (a, b) if a <= b else (b, a)
        if key not in self._join:
            ups = np.flatnonzero(self._leq[a] & self._leq[b])
            self._join[key] = int(ups[0])   # least index among upper bounds
        return self._join[key]

    def meet(self, a: int, b: int) -> int:
        key = (a, b) if a <= b else (b, a)
        if key not in self._meet:
            downs = np.flatnonzero(self._leq[:, a] & self._leq[:, b])
            self._meet[key] = int(downs[-1])
        return self._meet[key]

    def join_all(self, *xs: int) -> int:
        out = xs[0]
        for x in xs[1:]:
            out = self.join(out, x)
        return out

    @cached_property
    def below_atoms(self) -> np.ndarray:
        """(N, A) boolean: atom at position j lies below element i."""
        return self._leq[np.array(self.atoms)].T.copy()

    def atoms_below(self, u: int) -> tuple[int, ...]:
        return tuple(a for a in self.atoms if self.leq(a, u))

    def proper_elements(self) -> range:
        return range(1, len(self) - 1)

    def covers(self, x: int) -> list[int]:
        return [int(y) for y in np.flatnonzero(self._leq[x]) if self.ranks[y] == self.ranks[x] + 1]

    def check_axioms(self, pairs=None) -> None:
        """Verify the lattice, rank and geometric axioms.

        ``pairs`` restricts the pairwise checks to a sample; by default all
        pairs are checked.
        """
        n = len(self)
        for x in range(n):
            for y in self.covers(x):
                if not self.leq(x, y):
                    raise MalformedInputError("cover relation outside the order")
        if self.ranks[0] != 0:
            raise MalformedInputError("bottom must have rank 0")
        if pairs is None:
            pairs = combinations(range(n), 2)
        for a, b in pairs:
            j, m = self.join(a, b), self.meet(a, b)
            ups = np.flatnonzero(self._leq[a] & self._leq[b])
            if not all(self.leq(j, u) for u in ups):
                raise MalformedInputError(f"no least upper bound for {a}, {b}")
            downs = np.flatnonzero(self._leq[:, a] & self._leq[:, b])
            if not all(self.leq(d, m) for d in downs):
                raise MalformedInputError(f"no greatest lower bound for {a}, {b}")
            if self.rank(a) + self.rank(b) < self.rank(j) + self.rank(m):
                raise MalformedInputError(f"rank is not submodular at {a}, {b}")
        for x in range(1, n):
            below = self.atoms_below(x)
            if not below or self.join_all(*below) != x:
                raise MalformedInputError(f"element {x} is not a join of atoms")

    def maximal_chains(self) -> list[tuple[int, ...]]:
        """Maximal chains of the proper part, bottom to top."""
        out = []
        coatom_rank = self.rank_of_top - 1

        def walk(chain):
            x = chain[-1]
            if self.ranks[x] == coatom_rank:
                out.append(tuple(chain))
                return
            for y in self.covers(x):
                walk(chain + [y])

        for a in self.atoms:
            walk([a])
        return out

    @cached_property
    def order_complex(self) -> SimplicialComplex:
        """Order complex of the proper part (bottom and top removed)."""
        if self.rank_of_top < 3:
            raise MalformedInputError("proper part of a rank < 3 lattice has no edges")
        labels = {x: self.labels[x] for x in self.proper_elements()}
        return SimplicialComplex.from_facets(self.maximal_chains(), labels)


def boolean_lattice(n: int) -> GeometricLattice:
    """Subsets of {0..n-1} ordered by inclusion."""
    subsets = sorted((frozenset(c) for k in range(n + 1) for c in combinations(range(n), k)),
                     key=lambda s: (len(s), sorted(s)))
    leq = np.array([[a <= b for b in subsets] for a in subsets])
    labels = ["{" + ",".join(map(str, sorted(s))) + "}" for s in subsets]
    return GeometricLattice([len(s) for s in subsets], leq, labels)


# -- linear algebra over F_q --------------------------------------------------------

def rref(rows, q: int) -> tuple[tuple[int, ...], ...]:
    """Reduced row echelon form over the prime field F_q, zero rows dropped."""
    m = [list(r) for r in rows]
    out = []
    col = 0
    ncols = len(m[0]) if m else 0
    r = 0
    while r < len(m) and col < ncols:
        piv = next((i for i in range(r, len(m)) if m[i][col] % q), None)
        if piv is None:
            col += 1
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = pow(m[r][col], q - 2, q)
        m[r] = [(x * inv) % q for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][col] % q:
                f = m[i][col]
                m[i] = [(x - f * y) % q for x, y in zip(m[i], m[r])]
        r += 1
        col += 1
    for row in m[:r]:
        out.append(tuple(row))
    return tuple(out)


def vector_code(v, q: int) -> int:
    code = 0
    for x in v:
        code = code * q + (x % q)
    return code


def code_vector(code: int, q: int, dim: int = AMBIENT_DIM) -> tuple[int, ...]:
    out = []
    for _ in range(dim):
        code, x = divmod(code, q)
        out.append(x)
    return tuple(reversed(out))


def gaussian_binomial(n: int, k: int, q: int) -> int:
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


class SubspaceLattice(GeometricLattice):
    """All subspaces of F_q^4, ordered by inclusion.

    Each element keeps its RREF basis and the bitmask of the vectors it
    contains (bit ``vector_code(v)``); meets are bitwise ANDs.
    """

    def __init__(self, q: int):
        if q not in SUPPORTED_Q:
            raise CapacityError(f"q={q} unsupported; choose from {SUPPORTED_Q}")
        self.q = q
        d = AMBIENT_DIM
        bases = []
        for k in range(d + 1):
            for pivots in combinations(range(d), k):
                free = [(i, j) for i, p in enumerate(pivots)
                        for j in range(p + 1, d) if j not in pivots]
                for fill in product(range(q), repeat=len(free)):
                    rows = [[0] * d for _ in range(k)]
                    for i, p in enumerate(pivots):
                        rows[i][p] = 1
                    for (i, j), x in zip(free, fill):
                        rows[i][j] = x
                    bases.append(tuple(tuple(r) for r in rows))
        bases.sort(key=lambda b: (len(b), b))
        self.bases = tuple(bases)
        self.masks = tuple(self._span_mask(b) for b in bases)
        self._by_basis = {b: i for i, b in enumerate(bases)}
        self._by_mask = {m: i for i, m in enumerate(self.masks)}
        full = (1 << q ** d) - 1
        leq = np.array([[(ma & (full ^ mb)) == 0 for mb in self.masks] for ma in self.masks])
        labels = ["/".join("".join(map(str, r)) for r in b) or "0" for b in bases]
        super().__init__([len(b) for b in bases], leq, labels)
        # representative vector and line lookup for atoms
        self.atom_vectors = np.array([self.bases[a][0] for a in self.atoms], dtype=np.int64)
        self.line_of_code = np.full(q ** d, -1, dtype=np.int64)
        for pos, a in enumerate(self.atoms):
            m = self.masks[a]
            for code in range(1, q ** d):
                if m >> code & 1:
                    self.line_of_code[code] = pos

    def _span_mask(self, basis) -> int:
        q = self.q
        mask = 0
        for coeffs in product(range(q), repeat=len(basis)):
            v = [0] * AMBIENT_DIM
            for c, row in zip(coeffs, basis):
                v = [(x + c * y) % q for x, y in zip(v, row)]
            mask |= 1 << vector_code(v, q)
        return mask

    def element_of(self, rows) -> int:
        """Index of the subspace spanned by ``rows``."""
        return self._by_basis[rref(rows, self.q) if rows else ()]

    def join(self, a: int, b: int) -> int:
        key = (a, b) if a <= b else (b, a)
        if key not in self._join:
            self._join[key] = self.element_of(self.bases[a] + self.bases[b])
        return self._join[key]

    def meet(self, a: int, b: int) -> int:
        return self._by_mask[self.masks[a] & self.masks[b]]

    # -- the action of GL_4(F_q) ------------------------------------------------

    def apply(self, matrix, x: int) -> int:
        """Image s(x) of element x under the matrix s."""
        mat = np.asarray(matrix, dtype=np.int64).reshape(AMBIENT_DIM, AMBIENT_DIM)
        rows = [tuple(int(v) for v in (mat @ np.array(r)) % self.q) for r in self.bases[x]]
        return self.element_of(rows)

    def atom_permutations(self, matrices: np.ndarray) -> np.ndarray:
        """(m, A) array: position of s(a) for every atom position a."""
        imgs = np.einsum("nij,aj->nai", matrices, self.atom_vectors) % self.q
        weights = self.q ** np.arange(AMBIENT_DIM - 1, -1, -1)
        codes = imgs @ weights
        return self.line_of_code[codes]


def subspace_lattice(q: int) -> SubspaceLattice:
    return SubspaceLattice(q)


def order_complex(L: GeometricLattice) -> SimplicialComplex:
    return L.order_complex


def _det_nonzero(mat: np.ndarray, q: int) -> bool:
    return len(rref(mat.tolist(), q)) == AMBIENT_DIM


def _rows_span(rows, q: int) -> set[int]:
    span = set()
    for coeffs in product(range(q), repeat=len(rows)):
        v = [0] * AMBIENT_DIM
        for c, row in zip(coeffs, rows):
            v = [(x + c * y) % q for x, y in zip(v, row)]
        span.add(vector_code(v, q))
    return span


def gl_order(q: int) -> int:
    out = 1
    for i in range(AMBIENT_DIM):
        out *= q ** AMBIENT_DIM - q ** i
    return out


def general_linear_group(q: int, max_order: int = 10**6) -> np.ndarray:
    """All invertible 4x4 matrices over F_q, in lexicographic row order."""
    if gl_order(q) > max_order:
        raise CapacityError(f"|GL_4(F_{q})| = {gl_order(q)} exceeds guard {max_order}")
    d = AMBIENT_DIM
    vectors = [code_vector(c, q) for c in range(q ** d)]
    out = []

    def rec(rows):
        if len(rows) == d:
            out.append(rows)
            return
        span = _rows_span(rows, q)
        for v in vectors:
            if vector_code(v, q) not in span:
                rec(rows + [v])

    rec([])
    return np.array(out, dtype=np.int64)


def random_general_linear(q: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """``count`` uniform draws from GL_4(F_q) by rejection sampling."""
    out = []
    while len(out) < count:
        mat = rng.integers(q, size=(AMBIENT_DIM, AMBIENT_DIM))
        if _det_nonzero(mat, q):
            out.append(mat)
    return np.array(out, dtype=np.int64).reshape(count, AMBIENT_DIM, AMBIENT_DIM)
