"""Per-type abstract value lattices, widening, and abstract transfer functions.

Booleans and finite-domain symbols use powerset lattices, numbers use closed
(possibly unbounded) intervals, and sets use a must/may/cardinality triple.
All values are immutable; operations return new values.
"""
from __future__ import annotations

import math
from bisect import bisect_left, bisect_right
from collections.abc import Callable, Iterable
from dataclasses import dataclass
from typing import Any, Union

from .model import INF, Expr, Lit, Ref, Schema, Value, VarType, walk

NEG_INF = -math.inf


# ---------------------------------------------------------------------------
# Powerset lattices (booleans, finite domains)
# ---------------------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class _Powerset:
    values: frozenset

    def is_bottom(self) -> bool:
        return not self.values

    def contains(self, value: Value) -> bool:
        return value in self.values

    def join(self, other):
        return type(self)(self.values | other.values)

    def meet(self, other):
        return type(self)(self.values & other.values)

    def leq(self, other) -> bool:
        return self.values <= other.values

    def is_singleton(self) -> bool:
        return len(self.values) == 1


@dataclass(frozen=True, slots=True)
class BoolAbs(_Powerset):
    """Subset of {True, False}; {True, False} means "either"."""

    def __repr__(self) -> str:
        names = sorted("t" if v else "f" for v in self.values)
        return "{" + ",".join(reversed(names)) + "}"


@dataclass(frozen=True, slots=True)
class FiniteAbs(_Powerset):
    """Subset of a finite symbol domain."""

    def __repr__(self) -> str:
        return "{" + ", ".join(sorted(self.values)) + "}"


TRUE = BoolAbs(frozenset({True}))
FALSE = BoolAbs(frozenset({False}))
EITHER = BoolAbs(frozenset({True, False}))
BOOL_BOTTOM = BoolAbs(frozenset())


def _tri(can_true: bool, can_false: bool) -> BoolAbs:
    if can_true:
        return EITHER if can_false else TRUE
    return FALSE if can_false else BOOL_BOTTOM


# ---------------------------------------------------------------------------
# Intervals
# ---------------------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class Interval:
    """Closed interval ``[lo, hi]``; ``lo > hi`` is normalized to the bottom element.

    Integral intervals round their finite bounds inward to integers.
    """

    lo: float
    hi: float
    integral: bool = False

    def __post_init__(self):
        lo, hi = self.lo, self.hi
        if self.integral:
            if lo != NEG_INF and lo != INF:
                lo = math.ceil(lo)
            if hi != INF and hi != NEG_INF:
                hi = math.floor(hi)
        if lo > hi:
            lo, hi = INF, NEG_INF
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @classmethod
    def bottom(cls, integral: bool = False) -> Interval:
        return cls(INF, NEG_INF, integral)

    @classmethod
    def top(cls, integral: bool = False) -> Interval:
        return cls(NEG_INF, INF, integral)

    def is_bottom(self) -> bool:
        return self.lo > self.hi

    def contains(self, value: Value) -> bool:
        return self.lo <= value <= self.hi

    def join(self, other: Interval) -> Interval:
        if self.is_bottom():
            return other
        if other.is_bottom():
            return self
        return Interval(min(self.lo, other.lo), max(self.hi, other.hi),
                        self.integral and other.integral)

    def meet(self, other: Interval) -> Interval:
        return Interval(max(self.lo, other.lo), min(self.hi, other.hi),
                        self.integral or other.integral)

    def leq(self, other: Interval) -> bool:
        return self.is_bottom() or (other.lo <= self.lo and self.hi <= other.hi)

    def widen_to(self, new: Interval, thresholds: tuple = ()) -> Interval:
        """Standard interval widening, extrapolating unstable bounds to the next threshold."""
        if self.is_bottom():
            return new
        if new.is_bottom():
            return self
        lo, hi = self.lo, self.hi
        if new.lo < lo:
            i = bisect_right(thresholds, new.lo)
            lo = thresholds[i - 1] if i > 0 else NEG_INF
        if new.hi > hi:
            i = bisect_left(thresholds, new.hi)
            hi = thresholds[i] if i < len(thresholds) else INF
        return Interval(lo, hi, self.integral and new.integral)

    def __add__(self, other: Interval) -> Interval:
        if self.is_bottom() or other.is_bottom():
            return Interval.bottom(self.integral and other.integral)
        return Interval(self.lo + other.lo, self.hi + other.hi, self.integral and other.integral)

    def __sub__(self, other: Interval) -> Interval:
        if self.is_bottom() or other.is_bottom():
            return Interval.bottom(self.integral and other.integral)
        return Interval(self.lo - other.hi, self.hi - other.lo, self.integral and other.integral)

    def __mul__(self, other: Interval) -> Interval:
        if self.is_bottom() or other.is_bottom():
            return Interval.bottom(self.integral and other.integral)
        products = [_mul(a, b) for a in (self.lo, self.hi) for b in (other.lo, other.hi)]
        return Interval(min(products), max(products), self.integral and other.integral)

    def __repr__(self) -> str:
        if self.is_bottom():
            return "[bottom]"
        lo = "-inf" if self.lo == NEG_INF else f"{self.lo:g}"
        hi = "+inf" if self.hi == INF else f"{self.hi:g}"
        return f"[{lo},{hi}]"


def _mul(a: float, b: float) -> float:
    # bounds are limits of finite values, so 0 * inf contributes 0
    if a == 0 or b == 0:
        return 0
    return a * b


# ---------------------------------------------------------------------------
# Sets
# ---------------------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class SetAbs:
    """Sets X with ``must <= X <= may`` and ``len(X)`` inside ``card``.

    The cardinality is stored clipped to ``[len(must), len(may)]``; anything
    unsatisfiable collapses to the canonical bottom.
    """

    must: frozenset
    may: frozenset
    card: Interval

    def __post_init__(self):
        card = self.card.meet(Interval(len(self.must), len(self.may), True))
        if card.is_bottom() or not self.must <= self.may:
            object.__setattr__(self, "must", frozenset())
            object.__setattr__(self, "may", frozenset())
            card = Interval.bottom(True)
        object.__setattr__(self, "card", card)

    @classmethod
    def bottom(cls) -> SetAbs:
        return cls(frozenset(), frozenset(), Interval.bottom(True))

    @classmethod
    def exact(cls, value: Iterable[str]) -> SetAbs:
        value = frozenset(value)
        return cls(value, value, Interval(len(value), len(value), True))

    @classmethod
    def top(cls, universe: Iterable[str]) -> SetAbs:
        universe = frozenset(universe)
        return cls(frozenset(), universe, Interval(0, len(universe), True))

    def is_bottom(self) -> bool:
        return self.card.is_bottom()

    def contains(self, value: frozenset) -> bool:
        return self.must <= value <= self.may and self.card.contains(len(value))

    def exact_value(self) -> frozenset | None:
        """The only concrete set described, if there is exactly one."""
        if self.is_bottom() or self.card.lo != self.card.hi:
            return None
        if self.card.lo == len(self.must):
            return self.must
        if self.card.hi == len(self.may):
            return self.may
        return None

    def join(self, other: SetAbs) -> SetAbs:
        if self.is_bottom():
            return other
        if other.is_bottom():
            return self
        return SetAbs(self.must & other.must, self.may | other.may, self.card.join(other.card))

    def meet(self, other: SetAbs) -> SetAbs:
        if self.is_bottom() or other.is_bottom():
            return SetAbs.bottom()
        return SetAbs(self.must | other.must, self.may & other.may, self.card.meet(other.card))

    def leq(self, other: SetAbs) -> bool:
        if self.is_bottom():
            return True
        if other.is_bottom():
            return False
        return (other.must <= self.must and self.may <= other.may
                and self.card.leq(other.card))

    def may_include(self, elem: str) -> bool:
        if elem in self.must:
            return True
        return elem in self.may and self.card.hi > len(self.must)

    def may_exclude(self, elem: str) -> bool:
        if elem not in self.may:
            return True
        return elem not in self.must and self.card.lo < len(self.may)

    def add(self, elem: str) -> SetAbs:
        if self.is_bottom():
            return self
        lo, hi = self.card.lo, self.card.hi
        lo = lo + 1 if elem not in self.may else max(lo, 1)
        hi = hi if elem in self.must else hi + 1
        return SetAbs(self.must | {elem}, self.may | {elem}, Interval(lo, hi, True))

    def remove(self, elem: str) -> SetAbs:
        if self.is_bottom():
            return self
        lo, hi = self.card.lo, self.card.hi
        if elem in self.must:
            lo, hi = lo - 1, hi - 1
        elif elem in self.may:
            lo = max(lo - 1, 0)
        return SetAbs(self.must - {elem}, self.may - {elem}, Interval(lo, hi, True))

    def __repr__(self) -> str:
        if self.is_bottom():
            return "SetAbs(bottom)"
        return (f"SetAbs(must={{{', '.join(sorted(self.must))}}}, "
                f"may={{{', '.join(sorted(self.may))}}}, card={self.card!r})")


AbstractValue = Union[BoolAbs, FiniteAbs, Interval, SetAbs]


# ---------------------------------------------------------------------------
# Abstraction, concretization membership, lattice operations
# ---------------------------------------------------------------------------

def alpha_value(value: Value) -> AbstractValue:
    """Least abstract value containing ``value``."""
    if isinstance(value, bool):
        return TRUE if value else FALSE
    if isinstance(value, int):
        return Interval(value, value, True)
    if isinstance(value, float):
        return Interval(value, value, False)
    if isinstance(value, str):
        return FiniteAbs(frozenset((value,)))
    if isinstance(value, frozenset):
        return SetAbs.exact(value)
    raise TypeError(f"not a planning value: {value!r}")


def alpha_values(values: Iterable[Value]) -> AbstractValue:
    """Join of the singleton abstractions of ``values`` (which must be non-empty)."""
    it = iter(values)
    acc = alpha_value(next(it))
    for v in it:
        acc = join(acc, alpha_value(v))
    return acc


def top_of(vtype: VarType) -> AbstractValue:
    kind = vtype.kind
    if kind == "bool":
        return EITHER
    if kind == "finite":
        return FiniteAbs(frozenset(vtype.symbols))
    if kind == "set":
        return SetAbs.top(vtype.symbols)
    return Interval.top(kind == "int")


def bottom_of(vtype: VarType) -> AbstractValue:
    kind = vtype.kind
    if kind == "bool":
        return BOOL_BOTTOM
    if kind == "finite":
        return FiniteAbs(frozenset())
    if kind == "set":
        return SetAbs.bottom()
    return Interval.bottom(kind == "int")


def contains(a: AbstractValue, value: Value) -> bool:
    """Membership of ``value`` in the concretization of ``a``."""
    return a.contains(value)


def join(a: AbstractValue, b: AbstractValue) -> AbstractValue:
    return a.join(b)


def meet(a: AbstractValue, b: AbstractValue) -> AbstractValue:
    return a.meet(b)


def leq(a: AbstractValue, b: AbstractValue) -> bool:
    return a.leq(b)


# ---------------------------------------------------------------------------
# Widening
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WideningStrategy:
    """How numeric bounds are extrapolated when a value keeps growing.

    ``join`` never extrapolates, ``delayed`` joins for the first ``delay``
    iterations and then jumps unstable bounds to infinity, and the threshold
    variants stop at the nearest threshold first.
    """

    kind: str
    delay: int = 0
    thresholds: tuple = ()

    def __post_init__(self):
        if self.kind not in ("join", "delayed", "thresholds", "delayed_thresholds"):
            raise ValueError(f"unknown widening kind {self.kind!r}")
        if self.delay < 0:
            raise ValueError("widening delay must be >= 0")
        object.__setattr__(self, "thresholds", tuple(sorted(set(self.thresholds))))

    @classmethod
    def join(cls) -> WideningStrategy:
        return cls("join")

    @classmethod
    def delayed(cls, k: int) -> WideningStrategy:
        return cls("delayed", k)

    @classmethod
    def with_thresholds(cls, thresholds: Iterable[float]) -> WideningStrategy:
        return cls("thresholds", 0, tuple(thresholds))

    @classmethod
    def delayed_thresholds(cls, k: int, thresholds: Iterable[float]) -> WideningStrategy:
        return cls("delayed_thresholds", k, tuple(thresholds))

    def __str__(self) -> str:
        if self.kind == "join":
            return "join"
        if self.kind == "delayed":
            return f"delayed:{self.delay}"
        ts = ",".join(f"{t:g}" for t in self.thresholds)
        if self.kind == "thresholds":
            return f"thresholds{{{ts}}}"
        return f"delayed-thresholds:{self.delay}{{{ts}}}"


def widen(old: AbstractValue, new: AbstractValue, strategy: WideningStrategy,
          iteration: int) -> AbstractValue:
    """``old`` widened by ``new`` at the given (1-based) iteration.

    Only intervals are extrapolated; the other lattices are finite and use join.
    """
    if not isinstance(old, (Interval, SetAbs)) or strategy.kind == "join":
        return old.join(new)
    if isinstance(old, SetAbs) or iteration <= strategy.delay:
        return old.join(new)
    return old.widen_to(new, strategy.thresholds)


# ---------------------------------------------------------------------------
# Abstract evaluation
# ---------------------------------------------------------------------------

AbsEvaluator = Callable[[tuple], AbstractValue]


def _abs_eq(a: AbstractValue, b: AbstractValue) -> BoolAbs:
    if a.is_bottom() or b.is_bottom():
        return BOOL_BOTTOM
    if isinstance(a, Interval):
        can_true = max(a.lo, b.lo) <= min(a.hi, b.hi)
        can_false = not (a.lo == a.hi == b.lo == b.hi)
        return _tri(can_true, can_false)
    if isinstance(a, SetAbs):
        must, may = a.must | b.must, a.may & b.may
        common = a.card.meet(b.card).meet(Interval(len(must), len(may), True))
        can_true = must <= may and not common.is_bottom()
        xa, xb = a.exact_value(), b.exact_value()
        can_false = xa is None or xb is None or xa != xb
        return _tri(can_true, can_false)
    can_true = bool(a.values & b.values)
    can_false = not (len(a.values) == 1 and a.values == b.values)
    return _tri(can_true, can_false)


def _negate(x: BoolAbs) -> BoolAbs:
    return BoolAbs(frozenset(not v for v in x.values))


def _abs_lt(a: Interval, b: Interval) -> BoolAbs:
    if a.is_bottom() or b.is_bottom():
        return BOOL_BOTTOM
    return _tri(a.lo < b.hi, a.hi >= b.lo)


def _abs_le(a: Interval, b: Interval) -> BoolAbs:
    if a.is_bottom() or b.is_bottom():
        return BOOL_BOTTOM
    return _tri(a.lo <= b.hi, a.hi > b.lo)


def _abs_member(x: FiniteAbs, s: SetAbs) -> BoolAbs:
    if x.is_bottom() or s.is_bottom():
        return BOOL_BOTTOM
    can_true = any(s.may_include(e) for e in x.values)
    can_false = any(s.may_exclude(e) for e in x.values)
    return _tri(can_true, can_false)


def _abs_subset(a: SetAbs, b: SetAbs) -> BoolAbs:
    if a.is_bottom() or b.is_bottom():
        return BOOL_BOTTOM
    can_true = a.must <= b.may and a.card.lo <= b.card.hi
    can_false = not a.may <= b.must
    return _tri(can_true, can_false)


def _abs_update(s: SetAbs, x: FiniteAbs, add: bool) -> SetAbs:
    if s.is_bottom() or x.is_bottom():
        return SetAbs.bottom()
    result = None
    for e in sorted(x.values):
        r = s.add(e) if add else s.remove(e)
        result = r if result is None else result.join(r)
    return result


def _abs_and(xs: list[BoolAbs]) -> BoolAbs:
    if any(x.is_bottom() for x in xs):
        return BOOL_BOTTOM
    return _tri(all(True in x.values for x in xs), any(False in x.values for x in xs))


def _abs_or(xs: list[BoolAbs]) -> BoolAbs:
    if any(x.is_bottom() for x in xs):
        return BOOL_BOTTOM
    return _tri(any(True in x.values for x in xs), all(False in x.values for x in xs))


_ABS_BINARY: dict[str, Callable[[Any, Any], AbstractValue]] = {
    "=": _abs_eq,
    "!=": lambda a, b: _negate(_abs_eq(a, b)),
    "<": _abs_lt,
    "<=": _abs_le,
    ">": lambda a, b: _abs_lt(b, a),
    ">=": lambda a, b: _abs_le(b, a),
    "+": lambda a, b: a + b,
    "-": lambda a, b: a - b,
    "*": lambda a, b: a * b,
    "member": _abs_member,
    "subset": _abs_subset,
    "add-elem": lambda s, x: _abs_update(s, x, True),
    "remove-elem": lambda s, x: _abs_update(s, x, False),
}


def _build_abs(expr: Expr, schema: Schema) -> AbsEvaluator:
    if isinstance(expr, Lit):
        value = alpha_value(expr.value)
        return lambda v: value
    if isinstance(expr, Ref):
        i = schema.index.get(expr.name)
        if i is None:
            value = alpha_value(schema.constants[expr.name].value)
            return lambda v: value
        return lambda v: v[i]
    args = [_build_abs(a, schema) for a in expr.args]
    fn = expr.fn
    if fn == "and":
        return lambda v: _abs_and([f(v) for f in args])
    if fn == "or":
        return lambda v: _abs_or([f(v) for f in args])
    if fn == "not":
        (a,) = args
        return lambda v: _negate(a(v))
    if fn == "cardinality":
        (a,) = args
        return lambda v: a(v).card
    op = _ABS_BINARY[fn]
    a, b = args
    return lambda v: op(a(v), b(v))


def as_real(x: AbstractValue) -> AbstractValue:
    """Drop integrality, for integer-valued expressions stored in real variables."""
    if isinstance(x, Interval) and x.integral:
        return Interval(x.lo, x.hi, False)
    return x


def compile_abs(expr: Expr, schema: Schema) -> AbsEvaluator:
    key = ("abs", id(expr))
    hit = schema.cache.get(key)
    if hit is not None and hit[0] is expr:
        return hit[1]
    fn = _build_abs(expr, schema)
    schema.cache[key] = (expr, fn)
    return fn


def abs_eval(expr: Expr, astate) -> AbstractValue:
    """Sound abstract value of ``expr`` over every concretization of ``astate``."""
    return compile_abs(expr, astate.schema)(astate.values)


def possibly_true(x: BoolAbs) -> bool:
    return True in x.values


def numeric_literals(exprs: Iterable[Expr]) -> set[float]:
    out: set[float] = set()
    for e in exprs:
        for node in walk(e):
            if isinstance(node, Lit) and node.type.is_numeric:
                out.add(node.value)
    return out


def default_thresholds(problem) -> tuple:
    """Numeric literals of preconditions, goal and effects, plus 0."""
    exprs: list[Expr] = list(problem.goal)
    for action in problem.actions:
        exprs.extend(action.pre)
        for branch in getattr(action, "branches", None) or ((None, action.effects),):
            exprs.extend(rhs for _, rhs in branch[1])
    return tuple(sorted(numeric_literals(exprs) | {0}))


def default_strategy(problem) -> WideningStrategy:
    return WideningStrategy.delayed_thresholds(2, default_thresholds(problem))

