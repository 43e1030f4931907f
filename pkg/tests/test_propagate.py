"""The bound-propagation decision procedure and its redundancy counter."""

import random
from fractions import Fraction

import pytest

from bendsat import certify, generate, stats
from bendsat.core import BijunctiveFormula, Bound, Rel, lit, normalize_bend
from bendsat.errors import UnknownVariableError
from bendsat.propagate import PropagateState, propagate, redundant_literal_count
from helpers import formula_sat_with


def B(*raw):
    return normalize_bend(list(raw))


def scaling_pair():
    return BijunctiveFormula(
        [
            B(lit({"y": 1, "x": -2}, ">=", 0)),
            B(lit({"x": 1, "y": -2}, ">=", 0)),
        ]
    )


class TestPinnedAnswers:
    def test_scaling_pair_rejects_positive_probe(self):
        assert propagate(scaling_pair(), "x", Fraction(1)) is False

    def test_scaling_pair_accepts_zero(self):
        assert propagate(scaling_pair(), "x", Fraction(0)) is True

    def test_simple_order_accepts(self):
        phi = BijunctiveFormula([B(lit({"x": 1, "y": -1}, "<=", 0))])
        assert propagate(phi, "x", Fraction(0)) is True

    def test_rung_ladder_accepts_weak_zero(self):
        # Weak rungs with an open top: x = 0, z = 1/2, y = 9/10 fits.
        phi = BijunctiveFormula(
            [
                B(lit({"y": 1}, "<", 2)),
                B(lit({"x": 1}, ">=", 0), lit({"y": 1}, "<=", 0)),
                B(lit({"x": 1}, ">=", 1), lit({"y": 1}, "<=", 1)),
                B(lit({"x": 1}, ">=", 2), lit({"y": 1}, "<=", 2)),
                B(lit({"x": 1, "z": -1}, "<", 0)),
                B(lit({"z": 1, "y": -1}, "<", 0)),
            ],
            ("x", "y", "z"),
        )
        assert propagate(phi, "x", Fraction(0)) is True

    def test_chain_without_anchor_rejects_half(self):
        # The chain instance stays satisfiable once x > 0 is dropped, but
        # any nonnegative x restarts the ascent, so only negative x survives.
        phi = generate.chain_instance(3).without_bend(0)
        assert certify.brute_force_sat(phi) is not None
        assert propagate(phi, "x", Fraction(1, 2)) is False
        assert propagate(phi, "x", Fraction(0)) is False
        assert propagate(phi, "x", Fraction(-1)) is True

    def test_unknown_variable(self):
        with pytest.raises(UnknownVariableError):
            propagate(scaling_pair(), "q", Fraction(0))


class TestStrictness:
    def chain(self, tvpi_rel, bound_rel):
        return BijunctiveFormula(
            [
                B(lit({"x": 1, "y": -1}, tvpi_rel, 0)),
                B(lit({"y": 1}, bound_rel, 1)),
            ]
        )

    def test_weak_weak_touches(self):
        assert propagate(self.chain("<=", "<="), "x", Fraction(1)) is True

    def test_strict_anywhere_separates(self):
        # A strict relation anywhere in the derivation chain makes the
        # derived bound on x strict, so the probe x >= 1 must fail.
        assert propagate(self.chain("<", "<="), "x", Fraction(1)) is False
        assert propagate(self.chain("<=", "<"), "x", Fraction(1)) is False
        assert propagate(self.chain("<", "<"), "x", Fraction(1)) is False

    def test_strict_probe_flag(self):
        phi = BijunctiveFormula([B(lit({"x": 1}, "<=", 1))])
        assert propagate(phi, "x", Fraction(1)) is True
        assert propagate(phi, "x", Fraction(1), strict=True) is False


class TestRedundancy:
    def state_with(self, **bounds):
        st = PropagateState()
        for var, (low, high) in bounds.items():
            st.beta_low[var] = low if low is not None else Bound.trivial(var, upper=False)
            st.beta_high[var] = high if high is not None else Bound.trivial(var, upper=True)
        return st

    def test_dead_disjunct_is_redundant(self):
        phi = BijunctiveFormula([B(lit({"x": 1}, ">=", 2), lit({"y": 1}, "<=", 3))])
        st = self.state_with(x=(None, Bound.make("x", Rel.LE, 1)), y=(None, None))
        assert redundant_literal_count(phi, st) == 1

    def test_bare_inequality_not_redundant(self):
        phi = BijunctiveFormula([B(lit({"x": 1, "y": 1}, "<=", 4))])
        st = self.state_with(x=(None, None), y=(None, None))
        assert redundant_literal_count(phi, st) == 0

    def test_box_excludes_first_disjunct(self):
        phi = BijunctiveFormula([B(lit({"x": 1}, "<=", 0), lit({"x": 1}, ">=", 1))])
        st = self.state_with(x=(Bound.make("x", Rel.GE, 1), None))
        assert redundant_literal_count(phi, st) == 1

    def test_trivial_state_counts_nothing(self):
        phi = generate.chain_instance(2)
        st = self.state_with(
            x=(None, None), y=(None, None), z=(None, None)
        )
        assert redundant_literal_count(phi, st) == 0


class TestDerivationCycles:
    """Conflicts that only a closed derivation walk can expose.

    Each case pins a geometry that once slipped through: the boxes reach a
    fixpoint with no bound conflict, and only the residue of a cycle through
    the recorded predecessors separates YES from NO.
    """

    def test_mixed_direction_cycle(self):
        # The walk from a's lower bound must switch to c's upper-bound
        # provenance mid-walk to close a -> c -> a.
        phi = BijunctiveFormula(
            [
                B(lit({"b": -1, "c": 1}, "<", Fraction(3, 2))),
                B(lit({"a": -1, "c": -2}, "<", Fraction(1, 2))),
                B(lit({"b": 1}, "<", -3), lit({"b": 1}, ">", -2)),
                B(lit({"a": 1}, "<", -3), lit({"a": 1, "c": 1}, "<", Fraction(2, 3))),
            ],
            ("a", "b", "c"),
        )
        assert certify.brute_force_sat(phi) is not None
        assert propagate(phi, "a", Fraction(11, 6)) is False

    def test_same_sweep_dependency_cycle(self):
        # Both arcs of the a -> b -> a conflict fire inside one sweep, so
        # provenance must be ordered finer than sweep numbers.
        phi = BijunctiveFormula(
            [
                B(lit({"a": 1}, ">", 3), lit({"a": -3, "b": 1}, "<=", -2), lit({"b": 1}, "<", 1)),
                B(lit({"a": 1, "b": 1}, "<", Fraction(8, 3))),
                B(lit({"a": -1, "b": -3}, "<", 1)),
                B(lit({"a": 1}, ">=", Fraction(3, 2)), lit({"a": -1, "b": 1}, "<", -1), lit({"b": 1}, "<=", 1)),
                B(lit({"a": -2, "b": 1}, "<", Fraction(-2, 3))),
            ],
            ("a", "b"),
        )
        assert certify.brute_force_sat(phi) is not None
        assert propagate(phi, "a", Fraction(9, 2)) is False
        assert propagate(phi, "a", Fraction(3)) is True

    def test_tie_at_strict_fixed_point_two_cycle(self):
        # Solutions sit exactly at c = -3/2: every re-derivation ties the
        # probe bound, so tie provenance alone closes the cycle.
        phi = BijunctiveFormula(
            [
                B(lit({"c": 1, "d": 1}, "<=", -1)),
                B(lit({"c": -1, "d": -3}, "<=", 0)),
            ],
            ("c", "d"),
        )
        assert propagate(phi, "c", Fraction(-3, 2)) is True
        assert propagate(phi, "c", Fraction(-3, 2), strict=True) is False

    def test_tie_at_strict_fixed_point_three_cycle(self):
        # Going around doubles x, so only x <= 0 survives; the strict probe
        # at the fixed point must be rejected through the full 3-cycle.
        phi = BijunctiveFormula(
            [
                B(lit({"x": -2, "y": 1}, ">=", 0)),
                B(lit({"y": -2, "z": 1}, ">=", 0)),
                B(lit({"x": 1, "z": -2}, ">=", 0)),
            ],
            ("x", "y", "z"),
        )
        assert propagate(phi, "x", Fraction(0)) is True
        assert propagate(phi, "x", Fraction(0), strict=True) is False


class TestAgainstOracle:
    def test_promise_correctness_and_no_soundness(self):
        rng = random.Random(90210)
        sat_checked = 0
        for _ in range(150):
            phi = generate.random_formula(rng, max_vars=4, max_bends=7)
            x = rng.choice(phi.variables)
            s = Fraction(rng.randint(-6, 6), rng.choice((1, 2, 3)))
            strict = rng.random() < 0.3
            got = propagate(phi, x, s, strict=strict)
            probe = lit({x: 1}, ">" if strict else ">=", s)
            want = formula_sat_with(phi, [probe])
            if certify.brute_force_sat(phi) is not None:
                assert got == want, (phi.bends, x, s, strict)
                sat_checked += 1
            elif not got:
                assert not want, (phi.bends, x, s, strict)
        assert sat_checked >= 60

    def test_operation_count_regression(self):
        # The round structure gives O(n m^2) strongest-bound evaluations;
        # assert the counter with a generous constant.
        for n in (4, 8, 16):
            phi = generate.chain_instance(n)
            stats.reset()
            propagate(phi, "x", Fraction(1, 2))
            calls = stats.snapshot().get("strongest_bound", 0)
            assert calls <= 4 * phi.n * phi.m * phi.m, (n, calls)
