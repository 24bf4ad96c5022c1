"""Exact tools for module stability under finite group extensions over GF(p)."""

from .gfmat import ContractViolation, GFMatrix, solve
from .groups import (
    FiniteGroup,
    QuotientMap,
    Subgroup,
    cyclic_group,
    heisenberg_group,
    quotient,
    subgroup,
    symmetric_group,
)
from .reps import (
    Representation,
    algebra_radical,
    annihilator_ideal,
    dual,
    enveloping_algebra,
    hom_space,
    induce,
    radical_oracle,
    radical_series,
    regular_rep,
    rep_from_generators,
    restrict,
    socle_series,
    tensor,
    trivial_rep,
)
from .stability import (
    CertificationError,
    FactorSet,
    StructureMap,
    structure_map_for,
    tensor_to_numerical,
    test_numerical_stability,
    test_pair_numerical_stability,
    test_split_observability,
)
from .schreier import (
    CoefficientGroup,
    SchreierSystem,
    build_extension,
    complement_search,
    is_split,
    verify_schreier,
)
from .obstruction import (
    additive_cocycle,
    brute_force_extension_oracle,
    extend_by_layers,
    extend_module_structure,
    gr_module,
    solve_coboundary,
    tensor_kill,
)
from .pipeline import (
    obstruction_analysis,
    seed_independence,
    stability_cycle,
)
from .report import Problem, run, verify_report

__version__ = "0.1.0"
