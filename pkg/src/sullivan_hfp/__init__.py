"""Exact Sullivan models for section spaces of fibrations and homotopy fixed points."""

from .catalog import Factor, Identification, identify_catalog, product_of
from .cdga import (CDGAError, DualCoalgebra, FiniteAlgebra, FreeCDGA, Morphism, cohomology,
                   dualize, free_algebra, skeleton_truncate, truncate_free)
from .dsl import Diagnostic, ModelDocument, ParseError, parse, print_document
from .ellipticity import (certify_component_elliptic, find_witnesses, lift_witness,
                          precedence_order, pure_part)
from .equivariant import (EquivariantPairModel, build_borel, indecomposables, k_model,
                          localize_check, never_equivalence_check, pi_k_injective_check)
from .linalg import RationalMatrix, poly_matrix_rank, rational_roots, solve_membership
from .polynomial import Generator, Polynomial, make_generators
from .section import (RelativeSullivan, Retraction, SectionModel, component_model,
                      eliminate_contractibles, enumerate_retractions)

__version__ = "0.1.0"
