"""Lattice laws, widening and abstract evaluation for the per-variable domains."""
from __future__ import annotations

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from absplan.absdom import (
    EITHER,
    FALSE,
    TRUE,
    BoolAbs,
    FiniteAbs,
    Interval,
    SetAbs,
    WideningStrategy,
    abs_eval,
    alpha_value,
    default_thresholds,
    top_of,
    widen,
)
from absplan.abssem import abstract_state
from absplan.model import INT, VarType

INF = math.inf
UNIVERSE = ("a", "b", "c", "d")

bounds = st.one_of(st.integers(-50, 50).map(float), st.just(-INF), st.just(INF))


@st.composite
def intervals(draw, integral=None):
    integral = draw(st.booleans()) if integral is None else integral
    lo, hi = sorted([draw(bounds), draw(bounds)])
    if draw(st.integers(0, 9)) == 0:
        return Interval.bottom(integral)
    return Interval(lo, hi, integral)


@st.composite
def set_abs(draw):
    must = frozenset(draw(st.sets(st.sampled_from(UNIVERSE))))
    may = must | frozenset(draw(st.sets(st.sampled_from(UNIVERSE))))
    lo = draw(st.integers(0, 4))
    hi = draw(st.integers(lo, 4))
    return SetAbs(must, may, Interval(lo, hi, True))


finite_abs = st.sets(st.sampled_from(UNIVERSE)).map(lambda s: FiniteAbs(frozenset(s)))
concrete_sets = st.sets(st.sampled_from(UNIVERSE)).map(frozenset)


same_kind_pair = st.booleans().flatmap(lambda i: st.tuples(intervals(i), intervals(i)))
same_kind_triple = st.booleans().flatmap(
    lambda i: st.tuples(intervals(i), intervals(i), intervals(i)))


class TestIntervalLattice:
    @given(intervals(), intervals())
    def test_join_is_upper_bound(self, a, b):
        j = a.join(b)
        assert a.leq(j) and b.leq(j)

    @given(intervals(), intervals())
    def test_meet_is_lower_bound(self, a, b):
        m = a.meet(b)
        assert m.leq(a) and m.leq(b)

    @given(same_kind_pair)
    def test_join_commutes(self, pair):
        a, b = pair
        assert a.join(b) == b.join(a)

    @given(same_kind_triple)
    def test_join_associates(self, triple):
        a, b, c = triple
        assert a.join(b).join(c) == a.join(b.join(c))

    @given(intervals())
    def test_join_idempotent(self, a):
        assert a.join(a) == a

    def test_bottom_is_canonical(self):
        assert Interval(5, 1) == Interval.bottom()
        assert Interval(0.2, 0.8, True).is_bottom()

    def test_integral_rounds_inward(self):
        assert Interval(0.5, 3.5, True) == Interval(1, 3, True)

    @given(intervals(False), intervals(False), st.integers(-60, 60), st.integers(-60, 60))
    def test_arithmetic_contains_results(self, a, b, x, y):
        if not (a.contains(x) and b.contains(y)):
            return
        assert (a + b).contains(x + y)
        assert (a - b).contains(x - y)
        assert (a * b).contains(x * y)

    def test_zero_times_infinite(self):
        assert Interval(0, 0) * Interval(0, INF) == Interval(0, 0)


class TestPowersets:
    @given(finite_abs, finite_abs)
    def test_join_meet_are_union_intersection(self, a, b):
        assert a.join(b).values == a.values | b.values
        assert a.meet(b).values == a.values & b.values

    def test_bool_constants(self):
        assert TRUE.join(FALSE) == EITHER
        assert BoolAbs(frozenset()).is_bottom()


class TestSetAbs:
    @given(set_abs(), set_abs())
    def test_join_upper_bound(self, a, b):
        j = a.join(b)
        assert a.leq(j) and b.leq(j)

    @given(set_abs(), set_abs(), concrete_sets)
    def test_join_contains_both(self, a, b, x):
        if a.contains(x) or b.contains(x):
            assert a.join(b).contains(x)

    @given(set_abs(), set_abs(), concrete_sets)
    def test_meet_is_intersection_of_concretizations(self, a, b, x):
        assert a.meet(b).contains(x) == (a.contains(x) and b.contains(x))

    @given(set_abs(), st.sampled_from(UNIVERSE), concrete_sets)
    def test_add_remove_sound(self, a, e, x):
        if a.contains(x):
            assert a.add(e).contains(x | {e})
            assert a.remove(e).contains(x - {e})

    def test_normalization_clips_cardinality(self):
        s = SetAbs(frozenset({"a"}), frozenset({"a", "b"}), Interval(0, 10, True))
        assert s.card == Interval(1, 2, True)

    def test_unsatisfiable_is_bottom(self):
        s = SetAbs(frozenset({"a", "b"}), frozenset({"a", "b"}), Interval(0, 1, True))
        assert s == SetAbs.bottom()

    def test_exact_value(self):
        assert SetAbs.exact({"a"}).exact_value() == frozenset({"a"})
        assert SetAbs.top(UNIVERSE).exact_value() is None


class TestWidening:
    T = (0.0, 10.0, 200.0)

    def test_join_strategy_never_extrapolates(self):
        assert widen(Interval(0, 1), Interval(0, 2), WideningStrategy.join(), 99) == Interval(0, 2)

    def test_delay_then_infinity(self):
        s = WideningStrategy.delayed(2)
        assert widen(Interval(0, 1), Interval(0, 2), s, 2) == Interval(0, 2)
        assert widen(Interval(0, 1), Interval(0, 2), s, 3) == Interval(0, INF)

    def test_thresholds_bound_the_jump(self):
        s = WideningStrategy.with_thresholds(self.T)
        assert widen(Interval(90, 100), Interval(80, 100), s, 1) == Interval(10, 100)
        assert widen(Interval(90, 100), Interval(80, 250), s, 1) == Interval(10, INF)
        assert widen(Interval(5, 5), Interval(-3, 5), s, 1) == Interval(-INF, 5)

    def test_fuel_sequence(self):
        s = WideningStrategy.delayed_thresholds(2, (0, 10, 200))
        x = Interval(100, 100)
        seq = []
        for it in range(1, 5):
            x = widen(x, x - Interval(10, 10), s, it)
            seq.append(x)
        assert seq == [Interval(90, 100), Interval(80, 100), Interval(10, 100), Interval(0, 100)]

    @given(intervals(False), intervals(False), st.integers(0, 5))
    @settings(max_examples=300)
    def test_widening_covers_join(self, a, b, it):
        s = WideningStrategy.delayed_thresholds(1, self.T)
        w = widen(a, b, s, it)
        assert a.join(b).leq(w)

    def test_sets_use_join(self):
        a, b = SetAbs.exact({"a"}), SetAbs.exact({"b"})
        assert widen(a, b, WideningStrategy.delayed(0), 5) == a.join(b)

    def test_unknown_kind_rejected(self):
        with pytest.raises(ValueError):
            WideningStrategy("sometimes")

    def test_default_thresholds(self, air1_fuel):
        assert default_thresholds(air1_fuel) == (0, 200)


class TestAlphaAndTop:
    def test_alpha_of_each_type(self):
        assert alpha_value(True) == TRUE
        assert alpha_value(3) == Interval(3, 3, True)
        assert alpha_value(2.5) == Interval(2.5, 2.5)
        assert alpha_value(frozenset({"a"})) == SetAbs.exact({"a"})

    def test_top_contains_anything(self):
        assert top_of(INT).contains(-(10**9))
        assert top_of(VarType.set_of(*UNIVERSE)).contains(frozenset(UNIVERSE))


class TestAbstractEvaluation:
    def test_fly_guard_on_mixed_state(self, air1):
        fuel_guard = air1.predicate_pool[2]
        astate = abstract_state(air1, {
            "fuel1": Interval(-INF, 100),
            "onboard1": SetAbs(frozenset(), frozenset({"person1_id"}), Interval(0, 1, True)),
        })
        assert abs_eval(fuel_guard, astate) == EITHER

    def test_member_is_precise_on_exact_sets(self, air1):
        member = air1.goal[1]
        assert abs_eval(member, abstract_state(air1, {})) == FALSE
        astate = abstract_state(air1, {"onboard1": SetAbs.exact({"person1_id"})})
        assert abs_eval(member, astate) == TRUE


class TestDocumentedExamples:
    def test_widen_examples(self):
        t = WideningStrategy.with_thresholds((10,))
        assert widen(Interval(0, 5), Interval(0, 7), t, 1) == Interval(0, 10)
        assert widen(Interval(0, 5), Interval(0, 7), WideningStrategy.delayed(2), 1) == Interval(0, 7)
        assert widen(Interval(0, 5), Interval(0, 12), t, 1) == Interval(0, INF)

    def test_lattice_examples(self):
        a, b = FiniteAbs(frozenset({"city1_loc"})), FiniteAbs(frozenset({"city2_loc"}))
        assert a.join(b).values == {"city1_loc", "city2_loc"}
        assert Interval(90, 100).join(Interval(100, 100)) == Interval(90, 100)
        p = SetAbs.exact({"p"}).join(SetAbs.exact(()))
        assert p == SetAbs(frozenset(), frozenset({"p"}), Interval(0, 1, True))

    def test_contains_examples(self):
        assert Interval(90, 100).contains(95)
        assert SetAbs(frozenset(), frozenset({"p"}), Interval(0, 1, True)).contains(frozenset({"p"}))
        assert not FiniteAbs(frozenset({"city1_loc"})).contains("city2_loc")

    def test_abs_eval_examples(self, air1):
        fly = air1.action("fly_city1_city2")
        (_, burn), = [e for e in fly.effects if e[0] == "fuel1"]
        astate = abstract_state(air1, {
            "onboard1": SetAbs(frozenset(), frozenset({"person1_id"}), Interval(0, 1, True))})
        assert abs_eval(burn, astate) == Interval(90, 100)

        from absplan.fixtures import air1_fuel

        p = air1_fuel()
        assert abs_eval(p.goal[0], abstract_state(p, {"fuel1": Interval(90, 100)})) == FALSE
        loc = abstract_state(air1, {"plane1_loc": FiniteAbs(frozenset({"city1_loc", "city2_loc"}))})
        assert abs_eval(air1.goal[0], loc) == EITHER
