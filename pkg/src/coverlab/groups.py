"""Finite permutation groups acting on S = {0, ..., t-1}.

Group elements are handled by their position in ``GroupAction.elements``;
position 0 is always the identity. Products compose right to left, so
``mul(g, h)`` acts on a point by first applying ``h`` and then ``g``.
"""
from __future__ import annotations

from collections import deque
from itertools import permutations
from typing import Iterable, Sequence

import numpy as np

from .errors import CapacityError, DegenerateError, MalformedInputError

DEFAULT_MAX_ORDER = 10**6
# multiplication tables are materialized only up to this order
_TABLE_LIMIT = 4096


class Permutation(tuple):
    """A bijection of {0..t-1}, stored as its tuple of images."""

    def __new__(cls, images: Iterable[int]):
        p = super().__new__(cls, (int(i) for i in images))
        if sorted(p) != list(range(len(p))):
            raise MalformedInputError(f"{tuple(p)!r} is not a permutation")
        return p

    @classmethod
    def identity(cls, t: int) -> "Permutation":
        return cls(range(t))

    def __mul__(self, other: "Permutation") -> "Permutation":
        if len(self) != len(other):
            raise MalformedInputError("permutations of different degree")
        return Permutation(self[i] for i in other)

    def __call__(self, s: int) -> int:
        return self[s]

    def inverse(self) -> "Permutation":
        inv = [0] * len(self)
        for i, j in enumerate(self):
            inv[j] = i
        return Permutation(inv)

    def fix(self) -> int:
        return sum(1 for i, j in enumerate(self) if i == j)

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self))

    def __repr__(self):
        return f"Permutation({list(self)})"


class GroupAction:
    """A finite group given as an explicit set of permutations of S."""

    def __init__(self, elements: Sequence[Permutation], name: str = "custom"):
        if not elements:
            raise MalformedInputError("a group needs at least the identity")
        self.t = len(elements[0])
        if not elements[0].is_identity():
            raise MalformedInputError("element 0 must be the identity")
        self.elements = tuple(elements)
        self.name = name
        self._index = {p: i for i, p in enumerate(self.elements)}
        if len(self._index) != len(self.elements):
            raise MalformedInputError("repeated group element")
        self.identity = 0
        self.inverse = np.array([self._index[p.inverse()] for p in self.elements],
                                dtype=np.int64)
        self.fix_counts = np.array([p.fix() for p in self.elements], dtype=np.int64)
        self._table = None

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self):
        return len(self.elements)

    def index(self, g) -> int:
        """Position of ``g`` (a Permutation, image sequence or position)."""
        if isinstance(g, (int, np.integer)):
            if not 0 <= g < len(self.elements):
                raise MalformedInputError(f"no group element {g}")
            return int(g)
        try:
            return self._index[Permutation(g)]
        except KeyError:
            raise MalformedInputError(f"{tuple(g)!r} is not in {self.name}") from None

    @property
    def table(self) -> np.ndarray:
        """Multiplication table, ``table[g, h] == mul(g, h)``."""
        if self._table is None:
            n = len(self.elements)
            if n > _TABLE_LIMIT:
                raise CapacityError(f"group of order {n} is too large for a table")
            arr = np.array(self.elements, dtype=np.int64)          # (n, t)
            prod = arr[:, arr]                                      # g[h[i]]
            flat = [self._index[Permutation(row)] for row in prod.reshape(-1, self.t)]
            self._table = np.array(flat, dtype=np.int64).reshape(n, n)
        return self._table

    def mul(self, g: int, h: int) -> int:
        if self._table is not None or len(self.elements) <= _TABLE_LIMIT:
            return int(self.table[g, h])
        return self._index[self.elements[g] * self.elements[h]]

    def inv(self, g: int) -> int:
        return int(self.inverse[g])

    def prod(self, *gs: int) -> int:
        out = self.identity
        for g in gs:
            out = self.mul(out, g)
        return out

    def apply(self, g: int, s: int) -> int:
        return self.elements[g][s]

    def fix(self, g: int) -> int:
        return int(self.fix_counts[g])

    def fixity(self) -> int:
        """Largest number of points fixed by a non-identity element."""
        if len(self.elements) < 2:
            raise DegenerateError("fixity of the trivial group is undefined")
        return int(self.fix_counts[1:].max())

    @property
    def is_free(self) -> bool:
        return self.fixity() == 0

    @property
    def is_faithful(self) -> bool:
        return self.fixity() < self.t

    def spec(self) -> str:
        if self.name in ("sym", "cyc"):
            return f"{self.name}:{self.t}"
        return "gen:" + ";".join(",".join(map(str, p)) for p in self.elements[1:])

    def __eq__(self, other):
        if not isinstance(other, GroupAction):
            return NotImplemented
        return self.elements == other.elements

    def __hash__(self):
        return hash(self.elements)

    def __repr__(self):
        return f"<GroupAction {self.name} order={self.order} on {self.t} points>"


def closure(generators: Sequence[Sequence[int]], max_order: int = DEFAULT_MAX_ORDER,
            name: str = "custom") -> GroupAction:
    """Group generated by ``generators``, elements in breadth-first order.

    Generators are tried in lexicographic order at every step, which makes
    the element numbering reproducible.
    """
    gens = sorted({Permutation(g) for g in generators})
    if not gens:
        raise MalformedInputError("closure needs at least one generator")
    t = len(gens[0])
    if any(len(g) != t for g in gens):
        raise MalformedInputError("generators act on sets of different sizes")
    ident = Permutation.identity(t)
    seen = {ident}
    order = [ident]
    queue = deque([ident])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = g * x
            if y not in seen:
                if len(order) >= max_order:
                    raise CapacityError(f"group order exceeds guard {max_order}")
                seen.add(y)
                order.append(y)
                queue.append(y)
    return GroupAction(order, name)


def symmetric_action(t: int, max_order: int = DEFAULT_MAX_ORDER) -> GroupAction:
    """Sym(t) on t points; elements in lexicographic order of images."""
    if t < 1:
        raise MalformedInputError("t must be positive")
    from math import factorial
    if factorial(t) > max_order:
        raise CapacityError(f"Sym({t}) exceeds guard {max_order}")
    return GroupAction([Permutation(p) for p in permutations(range(t))], "sym")


def cyclic_action(t: int) -> GroupAction:
    """Z_t acting regularly on t points; element k is rotation by k."""
    if t < 1:
        raise MalformedInputError("t must be positive")
    return GroupAction([Permutation((i + k) % t for i in range(t)) for k in range(t)],
                       "cyc")


def parse_group(spec: str, max_order: int = DEFAULT_MAX_ORDER) -> GroupAction:
    """Parse ``sym:t``, ``cyc:t`` or ``gen:<perm>;<perm>;...``."""
    kind, _, arg = spec.strip().partition(":")
    try:
        if kind == "sym":
            return symmetric_action(int(arg), max_order)
        if kind == "cyc":
            return cyclic_action(int(arg))
        if kind == "gen":
            gens = [[int(x) for x in p.split(",")] for p in arg.split(";") if p.strip()]
            return closure(gens, max_order)
    except ValueError as exc:
        raise MalformedInputError(f"bad group spec {spec!r}: {exc}") from None
    raise MalformedInputError(f"unknown group spec {spec!r}")
