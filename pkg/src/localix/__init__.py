"""Torsion theories and modules of quotients on finite algebras."""

from .config import Bounds, current_bounds, using_bounds
from .errors import (
    ConsistencyError,
    InvalidDerivationError,
    LocalixError,
    PreconditionError,
    ScenarioError,
    SizeLimitError,
    ValidationError,
)
from .finmod import (
    FinModule,
    ModuleMap,
    Submodule,
    hom_group,
    image,
    intersect,
    kernel,
    preimage,
    quotient,
    smith_normal_form,
)
from .monad import (
    Algebra,
    AlgebraDerivation,
    EMModule,
    LawReport,
    ModuleDerivation,
    adjunction_bijection,
    check_derivation,
    check_em_module,
    check_em_morphism,
    check_module_derivation,
    check_monad_laws,
    direct_sum,
    em_hom_group,
    em_quotient,
    em_submodule,
    enumerate_module_derivations,
    free_module,
    regular_module,
)
from .quotients import (
    QuotientModule,
    ShortExactSequence,
    check_H_left_exact,
    check_lift,
    colimit_hom,
    extend_derivation,
    extend_derivation_general,
    module_of_quotients,
    verify_unique_lift,
)
from .scenario import Scenario, builtin_fixtures, load_scenario, parse_scenario
from .torsion import (
    GabrielFilter,
    TorsionTheory,
    check_delta_invariance,
    check_differential,
    delta_invariant_J,
    enumerate_gabriel_filters,
    enumerate_left_ideals,
    gabriel_filter_of_radical,
    is_gabriel_filter,
    torsion_radical,
    torsion_theory,
)
from .workbench import run
