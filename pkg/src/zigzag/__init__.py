"""Predicted mod-p reductions of two-dimensional crystalline representations.

The package computes the alternating irreducible/reducible case split for
exceptional weights at half-integral slopes, dispatches between the proven
regimes and the conjectural zone, and mechanically verifies the supporting
structures: exact p-adic parameter arithmetic, the mod-p dictionary to
smooth GL_2(Q_p) labels, the twisted-polynomial filtration of symmetric
powers, and the Hecke operator on the tree.
"""

from .apexpr import ApExpression, parse_ap
from .engine import (
    Branch,
    EngineConfig,
    Prediction,
    ZigzagParams,
    berger_bound_holds,
    blz_consistency,
    breuil_weight_reduction,
    caveat_zone,
    classify_regime,
    compute_c,
    exceptional_class,
    irreducibility_conjecture_scan,
    lambda_value,
    local_constancy_conflict,
    predict,
    theta_compatibility,
    zigzag_branch,
    zigzag_params,
)
from .ffield import quadratic_closure, residue_field
from .gammamod import (
    ConcreteModule,
    GammaModuleLabel,
    column_and_diagonal_sums,
    dim_theta_filtration,
    jh_factor_labels,
    verify_subquotient_iso,
)
from .llc import (
    SmoothRepLabel,
    bracket_normalize,
    gr19_constraints,
    jh_selection_table,
    ll_inverse,
    ll_map,
    llc_cross_check,
    supersingular_equivalence,
)
from .padic import (
    FilteredPhiModule,
    PadicElement,
    alpha,
    binomial_valuation,
    is_positive_slope_irreducible,
    padic_add,
    padic_mul,
    teichmuller,
    valuation,
)
from .reps import (
    GaloisRep,
    SymbolicUnit,
    canonical_form,
    equals_on_inertia,
    induced,
    inertial_determinant,
    is_irreducible_label,
    reducible,
    twist_by_omega,
)
from .tree import (
    TreeFunction,
    TreeVertex,
    alternating_sum_functional,
    apply_T,
    g_act,
    normalize_coset,
    support_radius,
    total_sum_functional,
)

__version__ = "0.1.0"
