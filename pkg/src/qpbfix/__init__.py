"""Quasi-partial b-metric spaces and common fixed points of map pairs."""
from .comparison import ComparisonFn, psi_iterate, validate_monotone, validate_series, \
    validate_strict_contraction
from .conditions import (Scenario, check_all, check_condition_1, check_condition_2,
                         check_condition_3, m_s)
from .dominance import DominancePair, dominance_guard, is_locally_dominated, is_pair_triangular
from .solver import (IterationTrace, SolveResult, Status, cauchy_diagnostics, iterate,
                     solve_single_map, uniqueness_probe, verify_ledger)
from .space import (DEFAULT_TOL, Domain, DqSpace, Interval, QpbSpace, Region, Tolerances,
                    ViolationReport, check_dq_axioms, check_qpb_axioms, closed_ball,
                    left_closed_ball, lemma1_separation)

__version__ = "0.1.0"
