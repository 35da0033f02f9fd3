"""Exchange-axiom checkers, minimizers and theorem verifiers for
(semi-strictly quasi) M-natural-convex functions on the integer lattice."""

from .core import (
    INF,
    IntBox,
    OracleFunction,
    TabulatedFunction,
    coord_sum,
    coordinate_bounds,
    evaluate,
    exchange_step,
    linf_diameter,
    supp_neg,
    supp_pos,
)
from .axioms import (
    AxiomReport,
    check_descent_lemma,
    check_m_exc,
    check_mnat_exc,
    check_mnat_exc_prj,
    check_mnat_set,
    check_ssqm,
    check_ssqm_nat,
    check_ssqm_nat_prj,
)
from .minimize import (
    basic_steepest_descent,
    domain_reduction,
    find_in_peeled,
    is_local_min,
    modified_steepest_descent,
    peel,
    steepest_direction,
)
from .analysis import (
    TheoremVerdict,
    argmin_set,
    geodesic_snapshot,
    project_to_m,
    replay_verdict,
    verify_geodesic,
    verify_local_global,
    verify_local_global_m,
    verify_min_cut_directional,
    verify_min_cut_strong,
    verify_min_cut_weak,
    verify_proximity,
    verify_statement_A,
)

from .estimators import AxiomChecker, LocalOptimalityClassifier, SteepestDescentMinimizer

__version__ = "0.1.0"
