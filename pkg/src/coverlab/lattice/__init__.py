"""Geometric lattices, their order complexes and the filling certificate."""
from .core import (GeometricLattice, SubspaceLattice, boolean_lattice, gaussian_binomial,
                   general_linear_group, order_complex, random_general_linear, rref,
                   subspace_lattice)
from .filling import (FillingDisc, OrderingScheme, correction_value, filling,
                      filling_from_atoms, gl_scheme, is_collapsible, min_atom,
                      min_atom_below, psi_s)
from .certificate import (DecodeResult, DeltaTable, GammaCertificate, decode, delta_s,
                          delta_table, gamma_certificate)
