"""Micro-solver tests: small systems of strict and weak linear inequalities."""

from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from bendsat import linsolve
from bendsat.core import Bound, Rel, TvpiIneq, lit
from bendsat.rationals import ext


def holds(literal, assignment):
    total = Fraction(0)
    for var, coeff in literal.coeffs:
        total += coeff * assignment[var]
    if literal.rel is Rel.LE:
        return ext(total) <= literal.const
    if literal.rel is Rel.LT:
        return ext(total) < literal.const
    if literal.rel is Rel.GE:
        return ext(total) >= literal.const
    return ext(total) > literal.const


def test_point_system():
    sol = linsolve.solve_linear([lit({"x": 1}, ">=", 1), lit({"x": 1}, "<=", 1)])
    assert sol == {"x": Fraction(1)}


def test_strict_contradiction():
    assert linsolve.solve_linear([lit({"x": 1}, "<", 0), lit({"x": 1}, ">", 0)]) is None


def test_weak_vs_strict_on_same_const():
    assert linsolve.solve_linear([lit({"x": 1}, "<=", 0), lit({"x": 1}, ">", 0)]) is None
    sol = linsolve.solve_linear([lit({"x": 1}, "<=", 0), lit({"x": 1}, ">=", 0)])
    assert sol == {"x": Fraction(0)}


def test_open_interval_solution():
    sol = linsolve.solve_linear([lit({"x": 1}, ">", 0), lit({"x": 1}, "<", 1)])
    assert sol is not None and Fraction(0) < sol["x"] < Fraction(1)


def test_negative_cycle_infeasible():
    lits = [
        lit({"x": 1, "y": -1}, "<=", -1),
        lit({"y": 1, "z": -1}, "<=", -1),
        lit({"z": 1, "x": -1}, "<=", -1),
    ]
    assert not linsolve.feasible(lits)


def test_scaling_chain_infeasible():
    # y >= 2x, x >= 2y, x >= 1 has no rational solution.
    lits = [
        lit({"y": 1, "x": -2}, ">=", 0),
        lit({"x": 1, "y": -2}, ">=", 0),
        lit({"x": 1}, ">=", 1),
    ]
    assert linsolve.solve_linear(lits) is None


def test_two_var_solution_satisfies():
    lits = [
        lit({"x": 2, "y": 3}, "<=", 6),
        lit({"x": 1}, ">=", 1),
        lit({"y": 1}, ">=", Fraction(1, 2)),
    ]
    sol = linsolve.solve_linear(lits)
    assert sol is not None
    assert all(holds(l, sol) for l in lits)


def test_every_mentioned_variable_gets_value():
    sol = linsolve.solve_linear([lit({"x": 1}, ">=", 0), lit({"y": 1, "x": 1}, "<=", "inf")])
    assert sol is not None and set(sol) == {"x", "y"}


def test_infinite_constants():
    assert linsolve.feasible([lit({"x": 1}, "<=", "inf")])
    assert not linsolve.feasible([lit({"x": 1}, "<=", "-inf")])
    assert not linsolve.feasible([lit({"x": 1}, ">", "inf")])


def test_from_bound_round_trip():
    b = Bound.make("x", Rel.LT, Fraction(7, 3))
    converted = linsolve.from_bound(b)
    assert holds(converted, {"x": Fraction(2)})
    assert not holds(converted, {"x": Fraction(7, 3)})


def test_from_ineq_round_trip():
    q = TvpiIneq.make("x", Fraction(1), "y", Fraction(-2), Rel.LE, ext(3))
    converted = linsolve.from_ineq(q)
    assert holds(converted, {"x": Fraction(3), "y": Fraction(0)})
    assert not holds(converted, {"x": Fraction(4), "y": Fraction(0)})


def test_negated():
    original = lit({"x": 1, "y": 1}, "<=", 2)
    flipped = linsolve.negated(original)
    point = {"x": Fraction(1), "y": Fraction(1)}
    outside = {"x": Fraction(2), "y": Fraction(2)}
    assert holds(original, point) and not holds(flipped, point)
    assert not holds(original, outside) and holds(flipped, outside)


def test_negated_is_involution_semantically():
    original = lit({"x": 3, "y": -2}, "<", Fraction(5, 2))
    twice = linsolve.negated(linsolve.negated(original))
    for xv in (-2, 0, 1, 3):
        for yv in (-1, 0, 2):
            point = {"x": Fraction(xv), "y": Fraction(yv)}
            assert holds(original, point) == holds(twice, point)


coeff_st = st.integers(min_value=-3, max_value=3)
const_st = st.fractions(min_value=-4, max_value=4, max_denominator=3)
rel_st = st.sampled_from(["<=", "<", ">=", ">"])


@st.composite
def literal_st(draw):
    n_vars = draw(st.integers(min_value=1, max_value=3))
    names = ["x", "y", "z"][:n_vars]
    coeffs = {}
    for name in names:
        c = draw(coeff_st)
        if c:
            coeffs[name] = c
    if not coeffs:
        coeffs = {"x": 1}
    return lit(coeffs, draw(rel_st), draw(const_st))


@settings(max_examples=200, deadline=None)
@given(st.lists(literal_st(), min_size=1, max_size=6))
def test_solutions_satisfy_all_literals(lits):
    sol = linsolve.solve_linear(lits)
    if sol is not None:
        assert all(holds(l, sol) for l in lits)


@settings(max_examples=100, deadline=None)
@given(st.lists(literal_st(), min_size=1, max_size=5))
def test_infeasible_sets_have_no_grid_point(lits):
    # One-directional check: if the solver says infeasible, a coarse grid
    # search over the mentioned variables finds nothing either.
    if linsolve.feasible(lits):
        return
    names = sorted({v for l in lits for v, _ in l.coeffs})
    if len(names) > 2:
        return
    grid = [Fraction(k, 2) for k in range(-10, 11)]

    def points(idx, acc):
        if idx == len(names):
            yield dict(acc)
            return
        for val in grid:
            acc[names[idx]] = val
            yield from points(idx + 1, acc)

    for point in points(0, {}):
        assert not all(holds(l, point) for l in lits)
