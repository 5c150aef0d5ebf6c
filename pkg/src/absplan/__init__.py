"""Forward-search planning with heuristics from abstract interpretation."""
from __future__ import annotations

from .absdom import (
    BoolAbs,
    FiniteAbs,
    Interval,
    SetAbs,
    WideningStrategy,
    abs_eval,
    alpha_value,
    default_strategy,
    default_thresholds,
    widen,
)
from .abssem import (
    AbstractState,
    alpha_state,
    abstract_state,
    apply_induced,
    apply_widened,
    possibly_applicable,
    refresh_predicates,
)
from .concrete import (
    ContractError,
    PlanValidation,
    StateCapExceeded,
    UnknownActionError,
    applicable,
    apply,
    eval_expr,
    optimal_cost_oracle,
    satisfies_goal,
    successors,
    validate_plan,
)
from .frontend import ParseError, format_domain, format_problem, parse_problem
from .heur import (
    LayerCapExceeded,
    h_goal_count,
    h_subgoal,
    h_widening,
    h_zero,
    prove_unreachable,
    reachability,
)
from .model import (
    BOOL,
    INF,
    INT,
    REAL,
    Action,
    ConcreteState,
    Diagnostic,
    Problem,
    VarType,
    typecheck,
)
from .search import ConfigurationError, SearchParams, SearchResult, plan_search
from .stochastic import (
    ProbAction,
    ProbProblem,
    apply_widened_prob,
    determinize_all_outcomes,
    vi_optimal_values,
)

__version__ = "0.1.0"
