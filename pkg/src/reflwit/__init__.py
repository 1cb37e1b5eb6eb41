"""Witness sets for nonnegativity of forms invariant under finite reflection groups."""

from .errors import PreconditionError, ReflwitError
from .invariants import InvariantBasis, basic_invariants, custom_basis, degree_table, express_in_invariants
from .jacobian import chevalley_jacobian, d3_locus_check, factorization_check, minor_factorization_check
from .poly import Polynomial, PolyMatrix, is_invariant, read_polynomial, write_polynomial
from .rootsys import RootSystem, build_root_system, enumerate_flats, generate_group, hyperplane_flat, is_general
from .sphere import min_on_subspace
from .sturm import binary_form_nonneg
from .witness import (
    Verdict,
    ci_check,
    conjecture_probe,
    highcodim_check,
    special_point_on_curve,
    sphere_vs_witness_property,
    thmA_check,
    thmB_construct,
)

__version__ = "0.1.0"
