"""Abstract states and abstract actions (state-induced and widening-based).

An AbstractState is a Cartesian product of per-variable abstract values,
optionally paired with a predicate vector over the problem's predicate pool
(entry ``True`` = the predicate holds in at least one concretization).
"""
from __future__ import annotations

from collections.abc import Sequence

from .absdom import (
    AbstractValue,
    WideningStrategy,
    alpha_value,
    as_real,
    compile_abs,
    possibly_true,
    widen,
)
from .concrete import ContractError
from .model import ConcreteState, Expr, Lit, Problem, Ref, Schema, affected_predicates


class AbstractState:
    __slots__ = ("schema", "values", "preds", "pool", "_hash")

    def __init__(self, schema: Schema, values: tuple, preds: tuple | None = None,
                 pool: tuple[Expr, ...] | None = None):
        self.schema = schema
        self.values = values
        self.preds = preds
        self.pool = pool
        self._hash = hash((values, preds))

    def __getitem__(self, name: str) -> AbstractValue:
        return self.values[self.schema.index[name]]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AbstractState):
            return NotImplemented
        return self.values == other.values and self.preds == other.preds

    def __hash__(self) -> int:
        return self._hash

    def items(self):
        return zip(self.schema.names, self.values)

    def is_bottom(self) -> bool:
        return any(v.is_bottom() for v in self.values)

    def contains(self, state: ConcreteState) -> bool:
        """Whether ``state`` lies in the Cartesian concretization."""
        return all(a.contains(v) for a, v in zip(self.values, state.values))

    def leq(self, other: AbstractState) -> bool:
        return self.is_bottom() or all(a.leq(b) for a, b in zip(self.values, other.values))

    def join(self, other: AbstractState) -> AbstractState:
        values = tuple(a.join(b) for a, b in zip(self.values, other.values))
        preds = None
        if self.preds is not None and other.preds is not None:
            preds = predicate_vector(self.schema, self.pool, values)
        return AbstractState(self.schema, values, preds, self.pool)

    def replace(self, **updates: AbstractValue) -> AbstractState:
        values = list(self.values)
        for name, value in updates.items():
            values[self.schema.index[name]] = value
        values = tuple(values)
        preds = None if self.preds is None else predicate_vector(self.schema, self.pool, values)
        return AbstractState(self.schema, values, preds, self.pool)

    def predicate_true(self, index: int) -> bool:
        return self.preds[index]

    def __repr__(self) -> str:
        body = ", ".join(f"{n}={v!r}" for n, v in self.items())
        return f"AbstractState({body})"


def predicate_vector(schema: Schema, pool: Sequence[Expr], values: tuple) -> tuple[bool, ...]:
    return tuple(possibly_true(compile_abs(p, schema)(values)) for p in pool)


def alpha_state(problem: Problem, state: ConcreteState,
                with_predicates: bool = False) -> AbstractState:
    """Singleton abstraction of a concrete state, with the predicate vector on request."""
    values = tuple(alpha_value(v) for v in state.values)
    if not with_predicates:
        return AbstractState(state.schema, values)
    pool = problem.predicate_pool
    return AbstractState(state.schema, values, predicate_vector(state.schema, pool, values), pool)


def abstract_state(problem: Problem, assignment: dict[str, AbstractValue],
                   with_predicates: bool = False) -> AbstractState:
    """Build an abstract state from explicit per-variable values (missing ones come from init)."""
    base = alpha_state(problem, problem.init)
    values = list(base.values)
    for name, value in assignment.items():
        values[problem.schema.index[name]] = value
    values = tuple(values)
    if not with_predicates:
        return AbstractState(problem.schema, values)
    pool = problem.predicate_pool
    return AbstractState(problem.schema, values, predicate_vector(problem.schema, pool, values), pool)


class AbstractAction:
    """Abstract evaluators for one (possibly probabilistic) action.

    ``branches`` holds one effect list per outcome; a deterministic action has one.
    """

    __slots__ = ("action", "pre", "branches")

    def __init__(self, action, schema: Schema):
        self.action = action
        self.pre = tuple(compile_abs(p, schema) for p in action.pre)
        raw = getattr(action, "branches", None)
        effect_lists = [b[1] for b in raw] if raw is not None else [action.effects]
        branches = []
        for effects in effect_lists:
            compiled = []
            for target, rhs in effects:
                i = schema.index[target]
                f = compile_abs(rhs, schema)
                if schema.types[i].kind == "real" and rhs.type.kind == "int":
                    f = (lambda g: lambda v: as_real(g(v)))(f)
                compiled.append((i, f))
            branches.append(tuple(compiled))
        self.branches = tuple(branches)

    def possibly_applicable(self, values: tuple) -> bool:
        for p in self.pre:
            if True not in p(values).values:
                return False
        return True

    def widened(self, values: tuple, strategy: WideningStrategy, iteration: int,
                branch: int = 0) -> tuple:
        out = list(values)
        for i, f in self.branches[branch]:
            out[i] = widen(values[i], f(values), strategy, iteration)
        return tuple(out)


def abstract_action(action, schema: Schema) -> AbstractAction:
    key = ("absact", id(action))
    hit = schema.cache.get(key)
    if hit is not None and hit[0] is action:
        return hit[1]
    compiled = AbstractAction(action, schema)
    schema.cache[key] = (action, compiled)
    return compiled


def affected_indices(action, schema: Schema, pool: tuple[Expr, ...]) -> tuple[int, ...]:
    key = ("aff", id(action), id(pool))
    hit = schema.cache.get(key)
    if hit is not None and hit[0] is action and hit[1] is pool:
        return hit[2]
    result = tuple(sorted(affected_predicates(action, pool)))
    schema.cache[key] = (action, pool, result)
    return result


def possibly_applicable(action, astate: AbstractState) -> bool:
    """False only if some precondition conjunct is false in every concretization."""
    if astate.is_bottom():
        return False
    return abstract_action(action, astate.schema).possibly_applicable(astate.values)


def refresh_predicates(old_preds: tuple[bool, ...], new_values: tuple, action,
                       schema: Schema, pool: tuple[Expr, ...]) -> tuple[bool, ...]:
    """Predicate vector after ``action``: only predicates it can affect are re-evaluated."""
    out = list(old_preds)
    for i in affected_indices(action, schema, pool):
        out[i] = possibly_true(compile_abs(pool[i], schema)(new_values))
    return tuple(out)


def finalize_successor(astate: AbstractState, action, values: tuple) -> AbstractState:
    preds = None
    if astate.preds is not None:
        if any(v.is_bottom() for v in values):
            # one empty component empties the whole product
            preds = (False,) * len(astate.preds)
        else:
            preds = refresh_predicates(astate.preds, values, action, astate.schema, astate.pool)
    return AbstractState(astate.schema, values, preds, astate.pool)


def apply_widened(action, astate: AbstractState, strategy: WideningStrategy,
                  iteration: int) -> AbstractState:
    """Widened abstract action: each ``v := E`` becomes ``v := v widen E``.

    Right-hand sides all read the input state (parallel assignment).
    """
    compiled = abstract_action(action, astate.schema)
    if astate.is_bottom() or not compiled.possibly_applicable(astate.values):
        raise ContractError(f"action '{action.name}' is not possibly applicable")
    if len(compiled.branches) != 1:
        raise ContractError(f"action '{action.name}' is probabilistic; use apply_widened_prob")
    return finalize_successor(astate, action, compiled.widened(astate.values, strategy, iteration))


def _constant_rhs(rhs: Expr, schema: Schema):
    if isinstance(rhs, Lit):
        return rhs.value
    if isinstance(rhs, Ref) and rhs.name in schema.constants:
        return schema.constants[rhs.name].value
    return None


def apply_induced(action, astate: AbstractState) -> AbstractState:
    """State-induced abstract action for constant right-hand sides (strong update)."""
    schema = astate.schema
    constants = []
    for target, rhs in action.effects:
        value = _constant_rhs(rhs, schema)
        if value is None:
            raise ContractError(f"action '{action.name}' assigns a non-constant expression "
                                f"to '{target}'; the induced abstraction needs constant effects")
        i = schema.index[target]
        if schema.types[i].kind == "real":
            value = float(value)
        constants.append((i, value))
    if not possibly_applicable(action, astate):
        raise ContractError(f"action '{action.name}' is not possibly applicable")
    values = list(astate.values)
    for i, value in constants:
        values[i] = alpha_value(value)
    return finalize_successor(astate, action, tuple(values))
