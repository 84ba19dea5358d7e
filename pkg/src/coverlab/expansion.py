"""Exact cosystolic expansion and the stability/expansion inequalities."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from ._search import CochainScan
from .cochains import Cochain1, cosystolic_norm_exact, d1_norm, dist1, is_cocycle
from .complex import SimplicialComplex
from .covers import cover_stability_exact, deficiency
from .errors import CapacityError
from .groups import GroupAction


@dataclass(frozen=True)
class ExpansionReport:
    h1: Fraction
    witness: Cochain1
    d1_norm: Fraction
    csy: Fraction
    scanned: int
    table: list | None = field(default=None, repr=False)


def h1_exact(X: SimplicialComplex, group: GroupAction, gauge: bool = True,
             max_enum: int = 10**8, keep_table: bool = False) -> ExpansionReport:
    """min ||d1 phi|| / ||phi||_csy over all non-cocycles phi.

    The witness is the lexicographically least minimizer among the scanned
    cochains (those trivial on a spanning forest when ``gauge`` is set).
    """
    scan = CochainScan(X, group, gauge=gauge, max_enum=max_enum)
    res = scan.minimize(scan.d1_weight, scan.tri_den, keep_table=keep_table)
    table = None
    if keep_table:
        table = [(Cochain1(X, group, vals), r) for vals, r in res.table]
    return ExpansionReport(res.ratio, Cochain1(X, group, res.witness),
                           res.numerator, res.csy, res.scanned, table)


@dataclass(frozen=True)
class SandwichCertificate:
    lower: Fraction      # (1 - Fix/|S|) ||d1 phi||
    deficiency: Fraction
    upper: Fraction      # ||d1 phi||

    @property
    def holds(self) -> bool:
        return self.lower <= self.deficiency <= self.upper


def verify_sandwich(phi: Cochain1) -> SandwichCertificate:
    """(1 - Fix/|S|) ||d1 phi|| <= m(Y_phi) <= ||d1 phi||, exactly."""
    G = phi.group
    upper = d1_norm(phi)
    lower = (1 - Fraction(G.fixity(), G.t)) * upper
    return SandwichCertificate(lower, deficiency(phi), upper)


@dataclass(frozen=True)
class TheoremReport:
    h1: Fraction
    c: Fraction
    fixity: int
    t: int
    h1_witness: Cochain1
    c_witness: Cochain1

    @property
    def chain(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        free_bound = Fraction(2, self.t) * self.h1
        fix_bound = (1 - Fraction(self.fixity, self.t)) * self.h1
        return free_bound, fix_bound, self.c, self.h1

    @property
    def holds(self) -> bool:
        a, b, c, d = self.chain
        return a <= b <= c <= d


def verify_main_theorem(X: SimplicialComplex, action: GroupAction, gauge: bool = True,
                        max_enum: int = 10**8) -> TheoremReport:
    """Compute h1 and the cover-stability constant and compare them."""
    h = h1_exact(X, action, gauge=gauge, max_enum=max_enum)
    c = cover_stability_exact(X, action, gauge=gauge, max_enum=max_enum)
    return TheoremReport(h.h1, c.c, action.fixity(), action.t, h.witness, c.witness)


@dataclass(frozen=True)
class NearestCocycleReport:
    distance: Fraction
    bound: Fraction | None   # None when the bound is vacuous (Fix = |S|)
    cocycle: Cochain1
    deficiency: Fraction
    h1: Fraction
    exact: bool

    @property
    def holds(self) -> bool:
        return self.bound is None or self.distance <= self.bound


def nearest_cocycle_bound_check(phi: Cochain1, h1: Fraction | None = None,
                                candidate: Cochain1 | None = None,
                                simply_connected: bool = False,
                                max_enum: int = 10**8) -> NearestCocycleReport:
    """Check dist(phi, psi) <= m(Y_phi) / ((1 - Fix/|S|) h1).

    ``psi`` is the exact nearest cocycle unless a ``candidate`` cocycle is
    supplied (e.g. from the lattice decoder). ``h1`` may be a proven lower
    bound; it is computed exactly when omitted.
    """
    X, G = phi.complex, phi.group
    if h1 is None:
        h1 = h1_exact(X, G, max_enum=max_enum).h1
    if candidate is not None:
        if not is_cocycle(candidate):
            raise ValueError("candidate is not a cocycle")
        psi, dist, exact = candidate, dist1(phi, candidate), False
    else:
        try:
            dist, psi = cosystolic_norm_exact(phi, simply_connected=simply_connected,
                                              max_enum=max_enum)
        except CapacityError:
            raise CapacityError("exact nearest cocycle is out of reach; "
                                "supply a decoder candidate") from None
        exact = True
    m = deficiency(phi)
    factor = 1 - Fraction(G.fixity(), G.t)
    bound = None if factor == 0 else m / (factor * h1)
    return NearestCocycleReport(dist, bound, psi, m, h1, exact)
