"""Exact computations with finite topological spaces, sheaves on them, and
the cohomology theories assembled from families of fixed neighbourhoods."""
from .cohom import (
    cech_cohomology,
    cech_complex,
    compare_cech_derived,
    derived_limit_cohomology,
    refined_cech_cohomology,
    structured_cohomology,
)
from .complex import TRIVIAL, CochainComplex, ComplexGrid, assemble_grid, grid_cohomologies, total_cohomology
from .errors import InputError, Rejection, StructuraError
from .exactla import QQ, FgAbGroup, GroupMap, PrimeField, direct_limit, smith_normal_form, subquotient
from .finspace import Cover, FiniteSpace, make_cover, minimal_open, pseudocircle, refine_cover, validate_space
from .hochschild import FiniteDimAlgebra, hochschild_cohomology, structured_hochschild
from .ktheory import grothendieck_complete, k0, validate_bundle, whitney_sum
from .rings import FiniteRing, zmod
from .ringspec import check_locally_ringed, localize_at_prime, spec
from .sheaf import Presheaf, check_presheaf_laws, check_sheaf_axioms, sheafify, stalk
from .strcat import StructuredFamily, StructuredHom, check_category_membership, compose_structured_homs

__version__ = "0.1.0"

__all__ = [
    "CochainComplex",
    "ComplexGrid",
    "Cover",
    "FgAbGroup",
    "FiniteDimAlgebra",
    "FiniteRing",
    "FiniteSpace",
    "GroupMap",
    "InputError",
    "Presheaf",
    "PrimeField",
    "QQ",
    "Rejection",
    "StructuraError",
    "StructuredFamily",
    "StructuredHom",
    "TRIVIAL",
    "assemble_grid",
    "cech_cohomology",
    "cech_complex",
    "check_category_membership",
    "check_locally_ringed",
    "check_presheaf_laws",
    "check_sheaf_axioms",
    "compare_cech_derived",
    "compose_structured_homs",
    "derived_limit_cohomology",
    "direct_limit",
    "grid_cohomologies",
    "grothendieck_complete",
    "hochschild_cohomology",
    "k0",
    "localize_at_prime",
    "make_cover",
    "minimal_open",
    "pseudocircle",
    "refine_cover",
    "refined_cech_cohomology",
    "sheafify",
    "smith_normal_form",
    "spec",
    "stalk",
    "structured_cohomology",
    "structured_hochschild",
    "subquotient",
    "total_cohomology",
    "validate_bundle",
    "validate_space",
    "whitney_sum",
    "zmod",
]
