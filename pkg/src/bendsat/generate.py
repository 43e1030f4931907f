"""Seeded random instance generators for the randomized test suites.

Everything draws through a caller-supplied random.Random, so a fixed seed
reproduces the exact instance stream.  Constants and coefficients stay tiny
(single digits over denominators 1..3) to keep oracle runs fast and
counterexamples readable.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .core import Bend, BijunctiveFormula, Lit, Rel, lit, normalize_bend

VARS = ("a", "b", "c", "d", "e")


def random_constant(rng: random.Random, span: int = 3, max_den: int = 3) -> Fraction:
    den = rng.randint(1, max_den)
    return Fraction(rng.randint(-span * den, span * den), den)


def random_coeff(rng: random.Random, span: int = 3) -> int:
    value = rng.randint(1, span)
    return value if rng.random() < 0.5 else -value


def _bound_lit(rng: random.Random, var: str, rel: Rel) -> Lit:
    return lit({var: 1}, rel, random_constant(rng))


def _free_bound_lit(rng: random.Random, var: str) -> Lit:
    rel = rng.choice((Rel.LE, Rel.LT, Rel.GE, Rel.GT))
    return _bound_lit(rng, var, rel)


def _tvpi_lit(rng: random.Random, var_x: str, var_y: str) -> Lit:
    return lit(
        {var_x: random_coeff(rng), var_y: random_coeff(rng)},
        rng.choice((Rel.LE, Rel.LT)),
        random_constant(rng),
    )


def _sign_matched_bound(rng: random.Random, var: str, coeff: Fraction) -> Lit:
    # The bound beside an inequality is upper-type exactly when the variable's
    # coefficient in the inequality is positive.
    if coeff > 0:
        rel = rng.choice((Rel.LE, Rel.LT))
    else:
        rel = rng.choice((Rel.GE, Rel.GT))
    return _bound_lit(rng, var, rel)


def random_bend(rng: random.Random, variables: Sequence[str]) -> Bend:
    """One random well-shaped bend over up to two of the given variables.

    Shape weights favor single-literal bends; together with the default bend
    counts in random_formula this lands the mixed suite at roughly 40% UNSAT.
    """
    shape = rng.random()
    u = rng.choice(list(variables))
    if len(variables) == 1 or shape < 0.30:
        if rng.random() < 0.75:
            return normalize_bend([_free_bound_lit(rng, u)])
        return normalize_bend([_free_bound_lit(rng, u), _free_bound_lit(rng, u)])
    v = rng.choice([w for w in variables if w != u])
    if shape < 0.42:
        return normalize_bend([_free_bound_lit(rng, u), _free_bound_lit(rng, v)])
    raw = _tvpi_lit(rng, u, v)
    coeffs = dict(raw.coeffs)
    parts = [raw]
    if shape < 0.72:
        pass  # bare inequality
    elif shape < 0.90:
        side = u if rng.random() < 0.5 else v
        parts.append(_sign_matched_bound(rng, side, coeffs[side]))
    else:
        parts.append(_sign_matched_bound(rng, u, coeffs[u]))
        parts.append(_sign_matched_bound(rng, v, coeffs[v]))
    return normalize_bend(parts)


def random_formula(
    rng: random.Random,
    max_vars: int = 5,
    max_bends: int = 10,
    min_bends: int = 3,
) -> BijunctiveFormula:
    """A random mixed instance; tight constants make a sizable share UNSAT."""
    n = rng.randint(1, max_vars)
    variables = VARS[:n]
    m = rng.randint(min_bends, max_bends)
    bends = []
    while len(bends) < m:
        bend = random_bend(rng, variables)
        if bend.is_top:
            continue
        bends.append(bend)
    return BijunctiveFormula(bends, variables)


def random_tvpi_formula(
    rng: random.Random,
    max_vars: int = 5,
    max_bends: int = 8,
    min_bends: int = 3,
) -> BijunctiveFormula:
    """A pure-TVPI instance: every bend is a single two-variable inequality."""
    n = rng.randint(2, max_vars)
    variables = VARS[:n]
    m = rng.randint(min_bends, max_bends)
    bends = []
    while len(bends) < m:
        u, v = rng.sample(variables, 2)
        bends.append(normalize_bend([_tvpi_lit(rng, u, v)]))
    return BijunctiveFormula(bends, variables)


def chain_instance(n: int) -> BijunctiveFormula:
    """An n+5-bend UNSAT instance whose refutation needs a long ascent chain.

    x > 0 forces x past the first rung's threshold, each rung (x >= i+1/2 or
    y <= i-1/2) together with x < z < y pushes the bounds up by one step, and
    after n+1 rungs the derived y > n+1/2 contradicts y < n.  Deleting any
    single bend breaks the chain and makes the instance satisfiable, so the
    whole formula is needed for the contradiction.
    """
    if n < 1:
        raise ValueError("chain_instance needs n >= 1")
    half = Fraction(1, 2)
    bends = [
        normalize_bend([lit({"x": 1}, Rel.GT, 0)]),
        normalize_bend([lit({"y": 1}, Rel.LT, n)]),
    ]
    for i in range(n + 1):
        bends.append(
            normalize_bend(
                [lit({"x": 1}, Rel.GE, i + half), lit({"y": 1}, Rel.LE, i - half)]
            )
        )
    bends.append(normalize_bend([lit({"x": 1, "z": -1}, Rel.LT, 0)]))
    bends.append(normalize_bend([lit({"z": 1, "y": -1}, Rel.LT, 0)]))
    return BijunctiveFormula(bends, ("x", "y", "z"))


def random_bend_pair(rng: random.Random) -> Tuple[Bend, Bend]:
    """Two bends over (x0, x1) and (x1, x2) for composition testing.

    At least one of the two constrains the shared middle variable, so the
    composition is always defined.
    """
    while True:
        phi1 = random_bend(rng, ("x0", "x1"))
        phi2 = random_bend(rng, ("x1", "x2"))
        mentions_middle = any(
            "x1" in b.vars() for b in (phi1, phi2) if not (b.is_top or b.is_bottom)
        )
        if mentions_middle or phi1.is_top or phi2.is_top or phi1.is_bottom or phi2.is_bottom:
            return phi1, phi2
