"""Cosystolic expansion and near-cover stability for simplicial complexes."""
__version__ = "0.1.0"

from .complex import SimplicialComplex, from_facets, full_simplex, simplex
from .groups import GroupAction, Permutation, cyclic_action, parse_group, symmetric_action
from .cochains import (Cochain0, Cochain1, act, cosystolic_norm, cosystolic_norm_exact,
                       d0, d1, d1_norm, dist1, holonomy, is_cocycle, norm1, same_orbit)
from .covers import (NearCover, cover_distance, cover_stability_exact, deficiency,
                     deficiency_exact, extract_cochain, lift_complex, relabel, triangle_test)
from .expansion import (h1_exact, nearest_cocycle_bound_check, verify_main_theorem,
                        verify_sandwich)
from .errors import (CapacityError, ConsistencyError, CoverlabError, DegenerateError,
                     MalformedInputError, NotAFaceError, PurityError, ShapeError)
