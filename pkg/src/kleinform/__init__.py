"""Exact computations with finite-group cocycles, torus lifts, and their characters."""

from .errors import KleinformError, ValidationError, WindowError, CertificateError
from .qz import QZ, halve
from .intmat import IntMatrix, xgcd, smith_solve, solve_sparse, SmithSolveResult
from .groups import (
    FiniteGroup, GroupHom, cyclic, klein4, symmetric3, dihedral, dicyclic,
    alternating4, direct_product, from_table, closure, centralizer,
    cyclic_generator, generating_set, all_homs, trivial_hom,
    parse_group_text, load_group_file, parse_group_spec)
from .cochains import (
    Cochain, CochainReport, differential, validate_cochain, alpha_cyclic,
    pullback_cochain, coboundary_solve, parse_cochain_text, load_cochain_file)
from .lifts import (
    TorusRep, GammaLift, lift_gamma, conjugate_lift, sigma_diff,
    has_cyclic_image, DEFAULT_WINDOW, E1, E2)
from .moduli import (
    SL2Z, SurfaceRep, in_gamma1, enumerate_bundles, orbit_stabilizer,
    sl2z_act, r_diff, dehn_character, klein_character, holonomy_cocycle_R,
    sections_dimension)
from .groupoid_lines import (
    FiniteGroupoidPresentation, GroupoidCocycle, GroupoidReport,
    validate_groupoid_cocycle, sections_dim_groupoid, shift_cocycle,
    cocycle_from_section, GammaAction, equivariant_assemble,
    group_action_groupoid, parse_groupoid_text, load_groupoid_file,
    sl2z_word_fragment)

__version__ = "0.1.0"
