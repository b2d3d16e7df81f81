"""Exact non-abelian Hopf cohomology in degrees 0 and 1 over prime fields."""

from .algebra import AxiomReport, Element, NotInvertible, StructureAlgebra, tensor_algebra
from .cohomology import AlgebraDiagram, commutative_h1_group, h0, h1, verify_exact_sequence, z1
from .comodule import (
    ComoduleAlgebra,
    HopfModule,
    build_conjugation_comodule,
    build_dual_numbers_comodule,
    check_hopf_module,
    over_trivial_hopf,
    regular_module,
    self_comodule,
    trivial_coefficients,
)
from .config import EnumerationOverBudget, set_budget, set_threads
from .exactmath import Field
from .groupcoh import compare_group_cohomology
from .groups import FiniteGroup, cyclic, symmetric
from .hopf import HopfAlgebra, build_function_hopf, build_sweedler_h4, check_hopf_axioms
from .io import load_spec, parse_spec, serialize
from .restricted import RestrictedDiagram, compare_restricted
from .torsor import (
    classify_torsors,
    deform_coaction,
    deformation_check,
    extract_cocycle,
    group_torsor_bridge,
    module_torsor_check,
    module_units,
    torsor_tensor,
)

__version__ = "0.1.0"
