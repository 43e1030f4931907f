"""Exact feasibility of small conjunctions of linear inequalities.

This is the independent micro-solver behind the brute-force oracle,
redundancy tests, and disjunct-dominance checks: plain Fourier-Motzkin
elimination with strictness tracking over Fraction arithmetic, plus witness
construction by back-substitution.  It never sees bends, only flat literals,
so it shares no reasoning with the main decision procedure.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

from . import stats
from .core import Bound, Lit, Rel, TvpiIneq
from .errors import EmptyIntervalError
from .intervals import Interval
from .rationals import ExtendedRational, ext


@dataclass(frozen=True)
class LinearConstraint:
    """sum(coeff*var) rel const with rel in {<=, <} and finite const."""

    coeffs: Tuple[Tuple[str, Fraction], ...]
    rel: Rel
    const: Fraction


_TRUE = "true"
_FALSE = "false"


def _flatten(raw: Lit) -> Union[LinearConstraint, str]:
    """Combine terms and orient to <=; classify trivial results."""
    total: Dict[str, Fraction] = {}
    for var, coeff in raw.coeffs:
        total[var] = total.get(var, Fraction(0)) + coeff
    live = sorted((v, c) for v, c in total.items() if c != 0)
    rel, const = raw.rel, raw.const
    if not rel.is_upper:
        live = [(v, -c) for v, c in live]
        rel, const = rel.flipped, -const
    if const.is_pos_inf:
        return _TRUE
    if const.is_neg_inf:
        return _FALSE
    if not live:
        holds = const.finite() > 0 if rel.is_strict else const.finite() >= 0
        return _TRUE if holds else _FALSE
    return LinearConstraint(tuple(live), rel, const.finite())


def from_bound(bound: Bound) -> Lit:
    return Lit(((bound.var, Fraction(1)),), bound.rel, bound.const)


def from_ineq(ineq: TvpiIneq) -> Lit:
    return Lit(
        ((ineq.var_x, ineq.coeff_x), (ineq.var_y, ineq.coeff_y)), ineq.rel, ineq.const
    )


def from_payload(payload: Union[Bound, TvpiIneq]) -> Lit:
    return from_bound(payload) if isinstance(payload, Bound) else from_ineq(payload)


def negated(raw: Lit) -> Lit:
    """The complement literal: not (e <= c) is e > c."""
    return Lit(raw.coeffs, raw.rel.negated, raw.const)


def _coeff_of(constraint: LinearConstraint, var: str) -> Fraction:
    for v, c in constraint.coeffs:
        if v == var:
            return c
    return Fraction(0)


def _drop_var(constraint: LinearConstraint, var: str) -> Tuple[Tuple[str, Fraction], ...]:
    return tuple((v, c) for v, c in constraint.coeffs if v != var)


def _combine(lower: LinearConstraint, upper: LinearConstraint, var: str) -> Union[LinearConstraint, str]:
    """Eliminate var from a lower form (coeff < 0) and an upper form (coeff > 0)."""
    stats.bump("fm_pivots")
    a = _coeff_of(upper, var)
    b = -_coeff_of(lower, var)
    total: Dict[str, Fraction] = {}
    for v, c in _drop_var(upper, var):
        total[v] = total.get(v, Fraction(0)) + c / a
    for v, c in _drop_var(lower, var):
        total[v] = total.get(v, Fraction(0)) + c / b
    live = sorted((v, c) for v, c in total.items() if c != 0)
    rel = Rel.LT if (lower.rel.is_strict or upper.rel.is_strict) else Rel.LE
    const = upper.const / a + lower.const / b
    stats.note_fraction(const)
    if not live:
        holds = const > 0 if rel.is_strict else const >= 0
        return _TRUE if holds else _FALSE
    return LinearConstraint(tuple(live), rel, const)


def _bound_interval_at(
    constraint: LinearConstraint, var: str, values: Dict[str, Fraction]
) -> Interval:
    """The interval the constraint allows for var, others fixed by values."""
    coeff = _coeff_of(constraint, var)
    rest = sum((c * values[v] for v, c in _drop_var(constraint, var)), Fraction(0))
    threshold = ext((constraint.const - rest) / coeff)
    if coeff > 0:
        return Interval.at_most(threshold, constraint.rel.is_strict)
    return Interval.at_least(threshold, constraint.rel.is_strict)


def solve_linear(
    literals: Sequence[Lit], var_order: Optional[Sequence[str]] = None
) -> Optional[Dict[str, Fraction]]:
    """A satisfying assignment for the conjunction, or None if infeasible.

    The assignment covers every variable mentioned by the literals
    (unconstrained mentioned variables get 0).
    """
    system: List[LinearConstraint] = []
    mentioned: List[str] = []
    seen = set()
    for raw in literals:
        for var, _ in raw.coeffs:
            if var not in seen:
                seen.add(var)
                mentioned.append(var)
        flat = _flatten(raw)
        if flat == _FALSE:
            return None
        if flat != _TRUE:
            system.append(flat)
    order = [v for v in (var_order or sorted(mentioned)) if v in seen]
    order += sorted(v for v in seen if v not in order)

    frames: List[Tuple[str, List[LinearConstraint], List[LinearConstraint]]] = []
    for var in order:
        lowers = [c for c in system if _coeff_of(c, var) < 0]
        uppers = [c for c in system if _coeff_of(c, var) > 0]
        rest = [c for c in system if _coeff_of(c, var) == 0]
        frames.append((var, lowers, uppers))
        for low in lowers:
            for up in uppers:
                combined = _combine(low, up, var)
                if combined == _FALSE:
                    return None
                if combined != _TRUE:
                    rest.append(combined)
        system = rest
    # Everything eliminated; leftovers would be 0-var, already classified.
    assert not system

    values: Dict[str, Fraction] = {}
    for var, lowers, uppers in reversed(frames):
        window = Interval.full()
        for constraint in lowers + uppers:
            window = window.intersect(_bound_interval_at(constraint, var, values))
        if window.is_empty:
            raise EmptyIntervalError(f"back-substitution window empty for {var}")
        values[var] = window.pick()
        stats.note_fraction(values[var])
    return values


def feasible(literals: Sequence[Lit]) -> bool:
    return solve_linear(literals) is not None
