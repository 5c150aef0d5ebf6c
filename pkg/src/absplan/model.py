"""Planning-problem data model: variable types, expressions, actions, problems.

Everything here is immutable after construction. Expressions are structural
values (frozen dataclasses), so two separately built trees with the same
shape compare and hash equal; the predicate pool relies on this.
"""
from __future__ import annotations

import math
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass, field
from typing import Any, NamedTuple, Union

INF = math.inf

Value = Union[bool, int, float, str, frozenset]


# ---------------------------------------------------------------------------
# Types
# ---------------------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class VarType:
    """Static type of a variable or expression.

    ``kind`` is one of ``bool``, ``int``, ``real``, ``finite`` or ``set``.
    For ``finite`` the symbols are the domain, for ``set`` the universe.
    A bare symbol literal gets the one-element finite type of itself.
    """

    kind: str
    symbols: tuple[str, ...] = ()

    @property
    def is_numeric(self) -> bool:
        return self.kind in ("int", "real")

    @staticmethod
    def finite(*symbols: str) -> VarType:
        return VarType("finite", tuple(symbols))

    @staticmethod
    def set_of(*symbols: str) -> VarType:
        return VarType("set", tuple(symbols))

    def __str__(self) -> str:
        if self.kind == "finite":
            return "(finite " + " ".join(self.symbols) + ")"
        if self.kind == "set":
            return "(set-of " + " ".join(self.symbols) + ")"
        return self.kind


BOOL = VarType("bool")
INT = VarType("int")
REAL = VarType("real")


def numeric_join(a: VarType, b: VarType) -> VarType:
    return INT if a.kind == "int" and b.kind == "int" else REAL


def assignable(target: VarType, source: VarType) -> bool:
    """Whether a value of type ``source`` may be stored in ``target``."""
    if target.kind == "real":
        return source.is_numeric
    if target.kind in ("finite", "set"):
        return source.kind == target.kind and set(source.symbols) <= set(target.symbols)
    return source.kind == target.kind


def value_fits(vtype: VarType, value: Any) -> bool:
    kind = vtype.kind
    if kind == "bool":
        return isinstance(value, bool)
    if kind == "int":
        return isinstance(value, int) and not isinstance(value, bool)
    if kind == "real":
        return isinstance(value, (int, float)) and not isinstance(value, bool) and math.isfinite(value)
    if kind == "finite":
        return isinstance(value, str) and value in vtype.symbols
    if kind == "set":
        return isinstance(value, frozenset) and value <= frozenset(vtype.symbols)
    return False


def coerce_value(vtype: VarType, value: Value) -> Value:
    """Normalize a literal for storage (integers stored in reals become floats)."""
    if vtype.kind == "real" and isinstance(value, int) and not isinstance(value, bool):
        return float(value)
    return value


def type_of_value(value: Value) -> VarType:
    if isinstance(value, bool):
        return BOOL
    if isinstance(value, int):
        return INT
    if isinstance(value, float):
        return REAL
    if isinstance(value, str):
        return VarType.finite(value)
    if isinstance(value, frozenset):
        return VarType.set_of(*sorted(value))
    raise TypeError(f"not a planning value: {value!r}")


# ---------------------------------------------------------------------------
# Source locations and diagnostics
# ---------------------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class SourceSpan:
    """Byte range in a source file; line and column are 1-based."""

    file: str
    start: int
    end: int
    line: int
    column: int

    def __str__(self) -> str:
        return f"{self.file}:{self.line}:{self.column}"


@dataclass(frozen=True, slots=True)
class Diagnostic:
    code: str
    message: str
    span: SourceSpan | None = None
    location: str = ""

    def __str__(self) -> str:
        where = str(self.span) if self.span else (self.location or "<model>")
        return f"{where}: {self.code}: {self.message}"


class ExprTypeError(Exception):
    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code
        self.message = message


# ---------------------------------------------------------------------------
# Expressions
# ---------------------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class Ref:
    """Reference to a state variable or a named constant."""

    name: str
    type: VarType
    span: SourceSpan | None = field(default=None, compare=False, repr=False)

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True, slots=True)
class Lit:
    value: Value
    type: VarType
    span: SourceSpan | None = field(default=None, compare=False, repr=False)

    def __str__(self) -> str:
        return format_value(self.value)


@dataclass(frozen=True, slots=True)
class Call:
    fn: str
    args: tuple[Expr, ...]
    type: VarType
    span: SourceSpan | None = field(default=None, compare=False, repr=False)

    def __str__(self) -> str:
        return "(" + " ".join([self.fn, *map(str, self.args)]) + ")"


Expr = Union[Ref, Lit, Call]

CONNECTIVES = ("and", "or", "not")
COMPARISONS = ("=", "!=", "<", "<=", ">", ">=")
ARITHMETIC = ("+", "-", "*")
SET_FUNCTIONS = ("add-elem", "remove-elem", "member", "cardinality", "subset")
BUILTINS = CONNECTIVES + COMPARISONS + ARITHMETIC + SET_FUNCTIONS

_ARITY = {"not": 1, "cardinality": 1}


def _eq_compatible(a: VarType, b: VarType) -> bool:
    if a.is_numeric and b.is_numeric:
        return True
    return a.kind == b.kind


def infer_call_type(fn: str, arg_types: tuple[VarType, ...]) -> VarType:
    """Result type of applying built-in ``fn``; raises ExprTypeError on misuse."""
    if fn not in BUILTINS:
        raise ExprTypeError("unknown-function", f"unknown function symbol '{fn}'")
    n = len(arg_types)
    if fn in ("and", "or"):
        if not all(t.kind == "bool" for t in arg_types):
            raise ExprTypeError("type", f"'{fn}' expects boolean arguments")
        return BOOL
    expected = _ARITY.get(fn, 2)
    if n != expected:
        raise ExprTypeError("arity", f"'{fn}' expects {expected} argument(s), got {n}")
    if fn == "not":
        if arg_types[0].kind != "bool":
            raise ExprTypeError("type", "'not' expects a boolean argument")
        return BOOL
    a = arg_types[0]
    b = arg_types[1] if n > 1 else None
    if fn in ("=", "!="):
        if not _eq_compatible(a, b):
            raise ExprTypeError("type", f"cannot compare {a} with {b}")
        return BOOL
    if fn in COMPARISONS:
        if not (a.is_numeric and b.is_numeric):
            raise ExprTypeError("type", f"'{fn}' expects numeric arguments")
        return BOOL
    if fn in ARITHMETIC:
        if not (a.is_numeric and b.is_numeric):
            raise ExprTypeError("type", f"'{fn}' expects numeric arguments")
        return numeric_join(a, b)
    if fn == "cardinality":
        if a.kind != "set":
            raise ExprTypeError("type", "'cardinality' expects a set")
        return INT
    if fn == "member":
        if a.kind != "finite" or b.kind != "set":
            raise ExprTypeError("type", "'member' expects (member SYMBOL SET)")
        return BOOL
    if fn == "subset":
        if a.kind != "set" or b.kind != "set":
            raise ExprTypeError("type", "'subset' expects two sets")
        return BOOL
    # add-elem / remove-elem
    if a.kind != "set" or b.kind != "finite":
        raise ExprTypeError("type", f"'{fn}' expects ({fn} SET SYMBOL)")
    if fn == "add-elem" and not set(b.symbols) <= set(a.symbols):
        missing = sorted(set(b.symbols) - set(a.symbols))
        raise ExprTypeError("type", f"'add-elem' element(s) {missing} outside the set universe")
    return a


def call(fn: str, *args: Expr) -> Call:
    """Build a typed call node, folding it if every argument is a literal."""
    node = Call(fn, tuple(args), infer_call_type(fn, tuple(a.type for a in args)))
    return fold(node)


def lit(value: Value, vtype: VarType | None = None) -> Lit:
    return Lit(value, vtype if vtype is not None else type_of_value(value))


def fold(expr: Expr) -> Expr:
    """Collapse a call whose arguments are all literals into a literal."""
    if isinstance(expr, Call) and all(isinstance(a, Lit) for a in expr.args):
        value = apply_builtin(expr.fn, [a.value for a in expr.args])
        return Lit(value, expr.type, expr.span)
    return expr


def apply_builtin(fn: str, args: list[Value]) -> Value:
    """Concrete semantics of one built-in on already evaluated arguments."""
    if fn == "and":
        return all(args)
    if fn == "or":
        return any(args)
    if fn == "not":
        return not args[0]
    a, b = args[0], (args[1] if len(args) > 1 else None)
    if fn == "=":
        return a == b
    if fn == "!=":
        return a != b
    if fn == "<":
        return a < b
    if fn == "<=":
        return a <= b
    if fn == ">":
        return a > b
    if fn == ">=":
        return a >= b
    if fn == "+":
        return a + b
    if fn == "-":
        return a - b
    if fn == "*":
        return a * b
    if fn == "add-elem":
        return a | {b}
    if fn == "remove-elem":
        return a - {b}
    if fn == "member":
        return a in b
    if fn == "cardinality":
        return len(a)
    if fn == "subset":
        return a <= b
    raise ValueError(f"unknown function {fn!r}")


def walk(expr: Expr) -> Iterator[Expr]:
    yield expr
    if isinstance(expr, Call):
        for arg in expr.args:
            yield from walk(arg)


def referenced_names(expr: Expr) -> set[str]:
    return {node.name for node in walk(expr) if isinstance(node, Ref)}


def format_value(value: Value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        from decimal import Decimal

        text = format(Decimal(repr(value)), "f")
        return text if "." in text else text + ".0"
    if isinstance(value, frozenset):
        return "(set" + "".join(" " + s for s in sorted(value)) + ")"
    return str(value)


# ---------------------------------------------------------------------------
# Actions, states, problems
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Action:
    """Guarded parallel assignment: ``pre`` is a conjunction, ``effects`` a list of (variable, rhs)."""

    name: str
    pre: tuple[Expr, ...]
    effects: tuple[tuple[str, Expr], ...]

    @property
    def assigned(self) -> frozenset[str]:
        return frozenset(target for target, _ in self.effects)


class Constant(NamedTuple):
    type: VarType
    value: Value


class Schema:
    """Variable layout shared by all states of one problem."""

    __slots__ = ("names", "types", "index", "constants", "cache")

    def __init__(self, variables: Mapping[str, VarType], constants: Mapping[str, Constant]):
        self.names: tuple[str, ...] = tuple(variables)
        self.types: tuple[VarType, ...] = tuple(variables.values())
        self.index: dict[str, int] = {n: i for i, n in enumerate(self.names)}
        self.constants: dict[str, Constant] = dict(constants)
        # compiled evaluators, filled lazily by concrete/absdom
        self.cache: dict[Any, Any] = {}

    def state(self, assignment: Mapping[str, Value]) -> ConcreteState:
        missing = [n for n in self.names if n not in assignment]
        unknown = [n for n in assignment if n not in self.index]
        if missing or unknown:
            raise ValueError(f"state must assign exactly the declared variables "
                             f"(missing {missing}, unknown {unknown})")
        values = tuple(coerce_value(t, assignment[n]) for n, t in zip(self.names, self.types))
        return ConcreteState(self, values)


class ConcreteState:
    """Total assignment of values to the variables of a problem.

    Equality and hashing look at the value tuple only, so states from the same
    problem can key dictionaries and closed sets directly.
    """

    __slots__ = ("schema", "values", "_hash")

    def __init__(self, schema: Schema, values: tuple[Value, ...]):
        self.schema = schema
        self.values = values
        self._hash = hash(values)

    def __getitem__(self, name: str) -> Value:
        return self.values[self.schema.index[name]]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ConcreteState):
            return NotImplemented
        return self.values == other.values and self.schema.names == other.schema.names

    def __hash__(self) -> int:
        return self._hash

    def __len__(self) -> int:
        return len(self.values)

    def items(self) -> Iterable[tuple[str, Value]]:
        return zip(self.schema.names, self.values)

    def as_dict(self) -> dict[str, Value]:
        return dict(self.items())

    def replace(self, **updates: Value) -> ConcreteState:
        values = list(self.values)
        for name, value in updates.items():
            i = self.schema.index[name]
            values[i] = coerce_value(self.schema.types[i], value)
        return ConcreteState(self.schema, tuple(values))

    def __repr__(self) -> str:
        body = ", ".join(f"{n}={format_value(v)}" for n, v in self.items())
        return f"ConcreteState({body})"


def build_predicate_pool(actions: Iterable[Any], goal: Iterable[Expr]) -> tuple[Expr, ...]:
    """Distinct precondition and goal conjuncts, in first-occurrence order."""
    seen: dict[Expr, None] = {}
    for action in actions:
        for conj in action.pre:
            seen.setdefault(conj, None)
    for conj in goal:
        seen.setdefault(conj, None)
    return tuple(seen)


@dataclass(frozen=True, eq=False)
class Problem:
    """Ground planning problem: variables, constants, actions, init and a conjunctive goal."""

    name: str
    variables: dict[str, VarType]
    constants: dict[str, Constant]
    actions: tuple[Action, ...]
    init: ConcreteState
    goal: tuple[Expr, ...]
    domain: str = "domain"
    schema: Schema = field(default=None, repr=False)  # type: ignore[assignment]
    predicate_pool: tuple[Expr, ...] = field(init=False, repr=False)

    def __post_init__(self):
        if self.schema is None:
            object.__setattr__(self, "schema", self.init.schema)
        object.__setattr__(self, "predicate_pool", build_predicate_pool(self.actions, self.goal))

    @classmethod
    def build(cls, name: str, variables: Mapping[str, VarType], constants: Mapping[str, Any],
              actions: Iterable[Action], init: Mapping[str, Value], goal: Iterable[Expr],
              domain: str = "domain") -> Problem:
        consts = {k: (v if isinstance(v, Constant) else Constant(type_of_value(v), v))
                  for k, v in constants.items()}
        schema = Schema(variables, consts)
        return cls(name, dict(variables), consts, tuple(actions), schema.state(init),
                   tuple(goal), domain, schema)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Problem):
            return NotImplemented
        return (type(self) is type(other) and self.name == other.name
                and self.domain == other.domain and self.variables == other.variables
                and self.constants == other.constants and self.actions == other.actions
                and self.init == other.init and self.goal == other.goal)

    __hash__ = None  # type: ignore[assignment]

    def action(self, name: str) -> Action:
        for a in self.actions:
            if a.name == name:
                return a
        raise KeyError(name)

    def with_goal(self, goal: Iterable[Expr]) -> Problem:
        return type(self)(self.name, self.variables, self.constants, self.actions, self.init,
                          tuple(goal), self.domain, self.schema)

    def with_init(self, state: ConcreteState | Mapping[str, Value]) -> Problem:
        if not isinstance(state, ConcreteState):
            state = self.schema.state(state)
        return type(self)(self.name, self.variables, self.constants, self.actions, state,
                          self.goal, self.domain, self.schema)

    def with_actions(self, actions: Iterable[Any]) -> Problem:
        return type(self)(self.name, self.variables, self.constants, tuple(actions), self.init,
                          self.goal, self.domain, self.schema)

    def ref(self, name: str) -> Ref:
        """Typed reference to a variable or constant, for building expressions in code."""
        if name in self.variables:
            return Ref(name, self.variables[name])
        return Ref(name, self.constants[name].type)


def affected_predicates(action: Any, pool: tuple[Expr, ...]) -> frozenset[int]:
    """Indices of pooled predicates that mention a variable the action assigns."""
    assigned = action.assigned
    if not assigned:
        return frozenset()
    return frozenset(i for i, p in enumerate(pool) if referenced_names(p) & assigned)


# ---------------------------------------------------------------------------
# Type checking
# ---------------------------------------------------------------------------

def _check_expr(expr: Expr, problem: Problem, where: str, out: list[Diagnostic]) -> None:
    for node in walk(expr):
        span = node.span
        if isinstance(node, Ref):
            if node.name in problem.variables:
                declared = problem.variables[node.name]
            elif node.name in problem.constants:
                declared = problem.constants[node.name].type
            else:
                out.append(Diagnostic("unknown-variable", f"unknown variable '{node.name}'", span, where))
                continue
            if declared != node.type:
                out.append(Diagnostic("type", f"reference to '{node.name}' carries type {node.type}, "
                                              f"declared {declared}", span, where))
        elif isinstance(node, Lit):
            if not _literal_fits(node):
                out.append(Diagnostic("type", f"literal {format_value(node.value)} does not fit "
                                              f"type {node.type}", span, where))
        else:
            try:
                inferred = infer_call_type(node.fn, tuple(a.type for a in node.args))
            except ExprTypeError as err:
                out.append(Diagnostic(err.code, err.message, span, where))
                continue
            if inferred != node.type:
                out.append(Diagnostic("type", f"'{node.fn}' node typed {node.type}, "
                                              f"expected {inferred}", span, where))


def _literal_fits(node: Lit) -> bool:
    if node.type.kind == "real":
        return isinstance(node.value, float)
    return value_fits(node.type, node.value)


def _check_condition(conjuncts: tuple[Expr, ...], problem: Problem, where: str,
                     out: list[Diagnostic]) -> None:
    for conj in conjuncts:
        _check_expr(conj, problem, where, out)
        if conj.type.kind != "bool":
            out.append(Diagnostic("type", f"condition '{conj}' is not boolean", conj.span, where))
        if isinstance(conj, Call) and conj.fn in CONNECTIVES:
            out.append(Diagnostic("connective", f"'{conj.fn}' is not allowed inside a condition; "
                                  "only a top-level conjunction of atomic predicates is supported",
                                  conj.span, where))


def check_effects(effects: tuple[tuple[str, Expr], ...], problem: Problem, where: str,
                  out: list[Diagnostic]) -> None:
    seen: set[str] = set()
    for target, rhs in effects:
        if target in seen:
            out.append(Diagnostic("conflict", f"conflicting assignment to '{target}'", rhs.span, where))
        seen.add(target)
        _check_expr(rhs, problem, where, out)
        if target in problem.constants:
            out.append(Diagnostic("constant", f"assignment to constant '{target}'", rhs.span, where))
        elif target not in problem.variables:
            out.append(Diagnostic("unknown-variable", f"unknown variable '{target}'", rhs.span, where))
        elif not assignable(problem.variables[target], rhs.type):
            out.append(Diagnostic("type", f"cannot assign {rhs.type} expression to '{target}' "
                                          f"of type {problem.variables[target]}", rhs.span, where))


def typecheck(problem: Problem) -> list[Diagnostic]:
    """Every invariant violation in ``problem``; an empty list means it is well formed."""
    out: list[Diagnostic] = []
    for name, vtype in problem.variables.items():
        if vtype.kind in ("finite", "set"):
            if not vtype.symbols:
                out.append(Diagnostic("domain", f"empty domain for '{name}'", None, f"variable {name}"))
            if len(set(vtype.symbols)) != len(vtype.symbols):
                out.append(Diagnostic("domain", f"duplicate symbol in domain of '{name}'", None,
                                      f"variable {name}"))
        if name in problem.constants:
            out.append(Diagnostic("duplicate", f"'{name}' declared as variable and constant", None,
                                  f"variable {name}"))
    for name, const in problem.constants.items():
        if not value_fits(const.type, const.value):
            out.append(Diagnostic("type", f"constant '{name}' value does not fit {const.type}", None,
                                  f"constant {name}"))
    names: set[str] = set()
    for action in problem.actions:
        where = f"action {action.name}"
        if action.name in names:
            out.append(Diagnostic("duplicate", f"duplicate action name '{action.name}'", None, where))
        names.add(action.name)
        _check_condition(action.pre, problem, where, out)
        for branch in getattr(action, "branches", None) or ((None, action.effects),):
            check_effects(branch[1], problem, where, out)
    _check_condition(problem.goal, problem, "goal", out)
    for name, value in problem.init.items():
        vtype = problem.variables.get(name)
        if vtype is None or not value_fits(vtype, value):
            out.append(Diagnostic("type", f"initial value {format_value(value)} does not fit "
                                          f"'{name}'", None, "init"))
    return out
