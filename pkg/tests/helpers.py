"""Shared oracle helpers for the test suite.

These deliberately avoid the code paths they are used to check: feasibility
goes through the micro-solver on explicit literal choices, never through
composition, propagation, or elimination.
"""

from fractions import Fraction
from typing import List, Optional

from bendsat import linsolve
from bendsat.core import Bend, BijunctiveFormula, Lit, lit

GRID11 = [Fraction(k, 2) for k in range(-5, 6)]


def pin(var: str, value: Fraction) -> List[Lit]:
    return [lit({var: 1}, "<=", value), lit({var: 1}, ">=", value)]


def exists_middle(phi1: Bend, phi2: Bend, p: Fraction, q: Fraction) -> bool:
    """Does some x1 satisfy phi1(x0=p, x1) and phi2(x1, x2=q)?"""
    if phi1.is_bottom or phi2.is_bottom:
        return False

    def choices(bend: Bend) -> List[Optional[Lit]]:
        if bend.is_top:
            return [None]
        return [linsolve.from_payload(pl) for _, pl in bend.literals()]

    base = pin("x0", p) + pin("x2", q)
    for c1 in choices(phi1):
        for c2 in choices(phi2):
            picked = base + [c for c in (c1, c2) if c is not None]
            if linsolve.feasible(picked):
                return True
    return False


def formula_sat_with(phi: BijunctiveFormula, extra: List[Lit]) -> bool:
    """Oracle SAT check of phi with extra literals conjoined (small inputs)."""
    if any(b.is_bottom for b in phi.bends):
        return False
    choice_lists = [
        [linsolve.from_payload(pl) for _, pl in b.literals()]
        for b in phi.bends
        if not b.is_top
    ]

    def rec(idx: int, acc: List[Lit]) -> bool:
        if not linsolve.feasible(acc):
            return False
        if idx == len(choice_lists):
            return True
        return any(rec(idx + 1, acc + [c]) for c in choice_lists[idx])

    return rec(0, list(extra))
