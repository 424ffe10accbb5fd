"""Verification and enumeration tools for fusion rings and modular data."""

from .canonical import canonical_form, canonical_key, is_isomorphic
from .characters import FiniteGroup, character_table, group_analysis
from .classifier import (DimensionProfile, TypeSignature, apply_elimination_rules, classify,
                         enumerate_types, graded_refinement)
from .doubles import double_modular_data
from .errors import (CapacityError, FusionkitError, InputError, NumericalError,
                     UnsatisfiableError, VerificationError)
from .fusion_core import (FusionRing, SubBasis, adjoint_subbasis, fp_dimensions,
                          generated_subbasis, invertibles, is_nilpotent, validate_fusion_ring)
from .grading import (Grading, PointedCochain, component_dimensions, graded_twist,
                      universal_grading, validate_cochain)
from .modular_data import (MetricGroup, ModularData, centralizer, fusion_subcategory_lattice,
                           gauss_sums, group_theoretical_certificate, metric_group_data,
                           twist_equation_check, verify_modular, verlinde_fusion)
from .ring_search import SearchSpec, complete_fusion_rings, derive_forced_entries

__version__ = "0.1.0"
