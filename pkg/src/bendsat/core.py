"""Bounds, two-variable inequalities, bends, and bijunctive formulas.

A bend is a disjunction of at most three literals: a bound on one variable, a
two-variable linear inequality (weak or strict), and a bound on the other
variable, subject to a sign condition tying each bound's direction to the sign
of that variable's coefficient in the inequality.  A bijunctive formula is a
conjunction of bends.  Everything here is exact rational arithmetic.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

from . import stats
from .errors import (
    DifferentVariablesError,
    NotABendError,
    UnassignedVariableError,
    UnknownVariableError,
    VariableMismatchError,
    VariableSetMismatchError,
)
from .intervals import Interval, IntervalSet, scaled_extreme
from .rationals import NEG_INF, POS_INF, ExtendedRational, ext, rat


class Rel(enum.Enum):
    """Comparison relation of a literal; LE/LT are upper-type, GE/GT lower-type."""

    LE = "<="
    LT = "<"
    GE = ">="
    GT = ">"

    @property
    def is_upper(self) -> bool:
        return self in (Rel.LE, Rel.LT)

    @property
    def is_strict(self) -> bool:
        return self in (Rel.LT, Rel.GT)

    @property
    def flipped(self) -> "Rel":
        """The relation after multiplying both sides by -1."""
        return _FLIP[self]

    @property
    def weak(self) -> "Rel":
        return Rel.LE if self.is_upper else Rel.GE

    @property
    def strict(self) -> "Rel":
        return Rel.LT if self.is_upper else Rel.GT

    @property
    def negated(self) -> "Rel":
        """The relation of the complement literal: not (x <= c) is x > c."""
        return _NEG[self]

    def holds(self, lhs: Fraction, rhs: ExtendedRational) -> bool:
        left = ext(lhs)
        if self is Rel.LE:
            return left <= rhs
        if self is Rel.LT:
            return left < rhs
        if self is Rel.GE:
            return left >= rhs
        return left > rhs

    def __str__(self) -> str:
        return self.value


_FLIP = {Rel.LE: Rel.GE, Rel.GE: Rel.LE, Rel.LT: Rel.GT, Rel.GT: Rel.LT}
_NEG = {Rel.LE: Rel.GT, Rel.GT: Rel.LE, Rel.LT: Rel.GE, Rel.GE: Rel.LT}


@dataclass(frozen=True)
class Bound:
    """One-variable comparison `var rel const`; const may be infinite."""

    var: str
    rel: Rel
    const: ExtendedRational

    @staticmethod
    def make(var: str, rel: Rel, const: Union[ExtendedRational, Fraction, int, str]) -> "Bound":
        c = ext(const)
        if not c.is_finite:
            rel = rel.weak  # x < inf and x <= inf denote the same set
        return Bound(var, rel, c)

    @staticmethod
    def trivial(var: str, upper: bool) -> "Bound":
        return Bound(var, Rel.LE, POS_INF) if upper else Bound(var, Rel.GE, NEG_INF)

    @staticmethod
    def unsat_marker(var: str, upper: bool) -> "Bound":
        """The canonical unsatisfiable bound in the given direction."""
        return Bound(var, Rel.LE, NEG_INF) if upper else Bound(var, Rel.GE, POS_INF)

    @property
    def is_upper(self) -> bool:
        return self.rel.is_upper

    @property
    def is_strict(self) -> bool:
        return self.rel.is_strict

    def interval(self) -> Interval:
        if self.rel.is_upper:
            return Interval.at_most(self.const, self.rel.is_strict)
        return Interval.at_least(self.const, self.rel.is_strict)

    @property
    def is_trivial(self) -> bool:
        return self.interval().is_full

    @property
    def is_unsat(self) -> bool:
        return self.interval().is_empty

    def holds(self, value: Fraction) -> bool:
        return self.rel.holds(value, self.const)

    def __str__(self) -> str:
        return f"{self.var} {self.rel} {self.const}"


@dataclass(frozen=True)
class TvpiIneq:
    """Two-variable inequality coeff_x*var_x + coeff_y*var_y rel const.

    Canonical form (through ``make``): rel is <= or <, var_x < var_y by name,
    coefficients are coprime integers (stored as Fractions), both nonzero.
    """

    var_x: str
    var_y: str
    coeff_x: Fraction
    coeff_y: Fraction
    rel: Rel
    const: ExtendedRational

    @staticmethod
    def make(
        var_x: str,
        coeff_x: Fraction,
        var_y: str,
        coeff_y: Fraction,
        rel: Rel,
        const: Union[ExtendedRational, Fraction, int],
    ) -> "TvpiIneq":
        if var_x == var_y:
            raise ValueError("TvpiIneq needs two distinct variables")
        if coeff_x == 0 or coeff_y == 0:
            raise ValueError("TvpiIneq coefficients must be nonzero")
        a, b, c = rat(coeff_x), rat(coeff_y), ext(const)
        if not rel.is_upper:
            a, b, c, rel = -a, -b, -c, rel.flipped
        if var_x > var_y:
            var_x, var_y, a, b = var_y, var_x, b, a
        scale = Fraction(lcm(a.denominator, b.denominator))
        ai, bi = int(a * scale), int(b * scale)
        scale /= gcd(abs(ai), abs(bi))
        a, b = a * scale, b * scale
        if c.is_finite:
            c = ext(c.finite() * scale)
        return TvpiIneq(var_x, var_y, a, b, rel, c)

    @property
    def is_trivial(self) -> bool:
        return self.const.is_pos_inf

    @property
    def is_unsat(self) -> bool:
        return self.const.is_neg_inf

    def mentions(self, var: str) -> bool:
        return var in (self.var_x, self.var_y)

    def coeff_of(self, var: str) -> Fraction:
        if var == self.var_x:
            return self.coeff_x
        if var == self.var_y:
            return self.coeff_y
        raise VariableMismatchError(f"{var} not in {self}")

    def other_var(self, var: str) -> str:
        if var == self.var_x:
            return self.var_y
        if var == self.var_y:
            return self.var_x
        raise VariableMismatchError(f"{var} not in {self}")

    def holds(self, vx: Fraction, vy: Fraction) -> bool:
        return self.rel.holds(self.coeff_x * vx + self.coeff_y * vy, self.const)

    def bound_after_fixing(self, var: str, value: Fraction) -> Bound:
        """The bound on the other variable once `var` is fixed to `value`."""
        other = self.other_var(var)
        a, b = self.coeff_of(var), self.coeff_of(other)
        if self.const.is_finite:
            c = ext((self.const.finite() - a * value) / b)
        else:
            c = self.const / b
        rel = self.rel if b > 0 else self.rel.flipped
        return Bound.make(other, rel, c)

    def __str__(self) -> str:
        return f"{_term(self.coeff_x, self.var_x)} + {_term(self.coeff_y, self.var_y)} {self.rel} {self.const}"


def _term(coeff: Fraction, var: str) -> str:
    if coeff == 1:
        return var
    if coeff == -1:
        return f"-{var}"
    return f"{coeff} {var}"


SLOT_BOUND_X = "bound_x"
SLOT_INEQ = "ineq"
SLOT_BOUND_Y = "bound_y"


@dataclass(frozen=True)
class Bend:
    """A disjunction of up to three literals in canonical slot form.

    Slot discipline: with an inequality present, bound_x sits on ineq.var_x and
    bound_y on ineq.var_y (sign condition: a bound is upper-type iff its
    variable's coefficient is positive).  Without an inequality, two bounds on
    the same variable put the upper in bound_x, and bounds on two different
    variables are ordered by name.  The always-true bend is the `top` marker
    with all slots empty; all slots empty without the marker is the
    always-false bend.
    """

    bound_x: Optional[Bound] = None
    ineq: Optional[TvpiIneq] = None
    bound_y: Optional[Bound] = None
    top: bool = False

    def __post_init__(self) -> None:
        if self.top and (self.bound_x or self.ineq or self.bound_y):
            raise ValueError("top bend must have empty slots")

    @staticmethod
    def always_true() -> "Bend":
        return Bend(top=True)

    @staticmethod
    def always_false() -> "Bend":
        return Bend()

    @property
    def is_top(self) -> bool:
        return self.top

    @property
    def is_bottom(self) -> bool:
        return not self.top and self.bound_x is None and self.ineq is None and self.bound_y is None

    @property
    def literal_ids(self) -> Tuple[str, ...]:
        return tuple(slot for slot, _ in self.literals())

    def literals(self) -> Iterator[Tuple[str, Union[Bound, TvpiIneq]]]:
        if self.bound_x is not None:
            yield SLOT_BOUND_X, self.bound_x
        if self.ineq is not None:
            yield SLOT_INEQ, self.ineq
        if self.bound_y is not None:
            yield SLOT_BOUND_Y, self.bound_y

    def literal(self, slot: str) -> Union[Bound, TvpiIneq]:
        value = getattr(self, slot)
        if value is None:
            raise KeyError(f"slot {slot} is empty")
        return value

    def vars(self) -> Tuple[str, ...]:
        seen = set()
        for _, lit in self.literals():
            if isinstance(lit, Bound):
                seen.add(lit.var)
            else:
                seen.add(lit.var_x)
                seen.add(lit.var_y)
        return tuple(sorted(seen))

    def bounds_on(self, var: str) -> List[Tuple[str, Bound]]:
        return [
            (slot, lit)
            for slot, lit in self.literals()
            if isinstance(lit, Bound) and lit.var == var
        ]

    def single_bound(self) -> Optional[Bound]:
        """The sole literal when the bend is exactly one bound, else None."""
        lits = list(self.literals())
        if len(lits) == 1 and isinstance(lits[0][1], Bound):
            return lits[0][1]
        return None

    def value_set(self, var: str) -> IntervalSet:
        """Satisfying set of a bend mentioning at most `var`."""
        if self.is_top:
            return IntervalSet.full()
        parts = []
        for _, lit in self.literals():
            if isinstance(lit, TvpiIneq) or lit.var != var:
                raise VariableMismatchError(f"{self} is not a bend over {var} alone")
            parts.append(lit.interval())
        return IntervalSet.of(parts)

    def __str__(self) -> str:
        if self.is_top:
            return "true"
        if self.is_bottom:
            return "false"
        return " | ".join(str(lit) for _, lit in self.literals())


@dataclass(frozen=True)
class Lit:
    """A raw linear literal: sum of coeff*var terms compared to a constant."""

    coeffs: Tuple[Tuple[str, Fraction], ...]
    rel: Rel
    const: ExtendedRational


RelLike = Union[Rel, str]


def _rel_of(rel: RelLike) -> Rel:
    return rel if isinstance(rel, Rel) else Rel(rel)


def lit(
    coeffs: Union[Mapping[str, object], Sequence[Tuple[str, object]]],
    rel: RelLike,
    const: Union[ExtendedRational, Fraction, int, str],
) -> Lit:
    """Convenience literal constructor; coeffs as {var: coeff} or pairs."""
    pairs = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
    return Lit(tuple((v, rat(c)) for v, c in pairs), _rel_of(rel), ext(const))


Payload = Union[Bound, TvpiIneq]
_TRUE = "true"
_FALSE = "false"


def _collapse_lit(raw: Lit) -> Union[Payload, str]:
    """Combine terms and classify one literal: payload, 'true', or 'false'."""
    total: Dict[str, Fraction] = {}
    for var, coeff in raw.coeffs:
        total[var] = total.get(var, Fraction(0)) + coeff
    live = {v: c for v, c in total.items() if c != 0}
    if not live:
        return _TRUE if raw.rel.holds(Fraction(0), raw.const) else _FALSE
    if len(live) == 1:
        (var, coeff), = live.items()
        rel = raw.rel if coeff > 0 else raw.rel.flipped
        return Bound.make(var, rel, raw.const / coeff)
    if len(live) == 2:
        (vx, a), (vy, b) = sorted(live.items())
        return TvpiIneq.make(vx, a, vy, b, raw.rel, raw.const)
    raise NotABendError(
        "literal mentions more than two variables",
        literal=str(dict(raw.coeffs)),
    )


def _merge_bounds(existing: Tuple[Bound, object], new: Tuple[Bound, object]) -> Tuple[Bound, object]:
    """Disjunction of two same-direction bounds: the weaker one survives."""
    old_b, _ = existing
    new_b, _ = new
    if bound_implies(new_b, old_b) and not bound_implies(old_b, new_b):
        return existing
    if bound_implies(old_b, new_b) and not bound_implies(new_b, old_b):
        return new
    return existing  # equal strength: first-encountered wins


def assemble_bend(
    parts: Sequence[Tuple[Payload, object]],
) -> Tuple[Bend, Dict[str, object]]:
    """Build a canonical bend from tagged literals, tracking slot provenance.

    Returns (bend, {slot: tag}); the tag of a merged bound is the survivor's.
    Raises NotABendError when the literals cannot fill the bend shape.
    """
    ineq_entry: Optional[Tuple[TvpiIneq, object]] = None
    by_var: Dict[str, Dict[bool, Tuple[Bound, object]]] = {}
    for payload, tag in parts:
        if isinstance(payload, TvpiIneq):
            payload = TvpiIneq.make(
                payload.var_x, payload.coeff_x, payload.var_y, payload.coeff_y,
                payload.rel, payload.const,
            )
            if payload.is_unsat:
                continue
            if payload.is_trivial:
                return Bend.always_true(), {}
            if ineq_entry is None:
                ineq_entry = (payload, tag)
            elif ineq_entry[0] != payload:
                raise NotABendError(
                    "a bend admits only one two-variable inequality",
                    literal=str(payload),
                )
        else:
            payload = Bound.make(payload.var, payload.rel, payload.const)
            if payload.is_unsat:
                continue
            if payload.is_trivial:
                return Bend.always_true(), {}
            slot_map = by_var.setdefault(payload.var, {})
            entry = (payload, tag)
            if payload.is_upper in slot_map:
                slot_map[payload.is_upper] = _merge_bounds(slot_map[payload.is_upper], entry)
            else:
                slot_map[payload.is_upper] = entry
    # A variable holding both an upper and a lower bound may already cover Q.
    for var, slot_map in by_var.items():
        if len(slot_map) == 2:
            union = IntervalSet.of([slot_map[True][0].interval(), slot_map[False][0].interval()])
            if union.is_full:
                return Bend.always_true(), {}
    bound_entries = [entry for slot_map in by_var.values() for entry in slot_map.values()]
    if ineq_entry is not None:
        ineq, ineq_tag = ineq_entry
        slots: Dict[str, Tuple[Payload, object]] = {SLOT_INEQ: ineq_entry}
        for bound, tag in bound_entries:
            if bound.var == ineq.var_x:
                slot = SLOT_BOUND_X
            elif bound.var == ineq.var_y:
                slot = SLOT_BOUND_Y
            else:
                raise NotABendError(
                    "bound variable does not occur in the inequality",
                    literal=str(bound),
                )
            if slot in slots:
                raise NotABendError(
                    "two bounds on one side of an inequality do not fit a bend",
                    literal=str(bound),
                )
            if bound.is_upper != (ineq.coeff_of(bound.var) > 0):
                raise NotABendError(
                    "sign condition violated: a bound is upper-type exactly "
                    "when its coefficient in the inequality is positive",
                    literal=str(bound),
                )
            slots[slot] = (bound, tag)
    else:
        if not bound_entries:
            return Bend.always_false(), {}
        if len(bound_entries) > 2:
            raise NotABendError(
                "more than two bound disjuncts do not fit a bend",
                literal=str(bound_entries[2][0]),
            )
        if len(bound_entries) == 1:
            slots = {SLOT_BOUND_X: bound_entries[0]}
        else:
            (b1, t1), (b2, t2) = bound_entries
            if b1.var == b2.var:
                # Canonical one-variable pair: upper first.
                first, second = ((b1, t1), (b2, t2)) if b1.is_upper else ((b2, t2), (b1, t1))
            else:
                first, second = sorted(((b1, t1), (b2, t2)), key=lambda e: e[0].var)
            slots = {SLOT_BOUND_X: first, SLOT_BOUND_Y: second}
    bend = Bend(
        bound_x=slots.get(SLOT_BOUND_X, (None, None))[0],
        ineq=slots.get(SLOT_INEQ, (None, None))[0],
        bound_y=slots.get(SLOT_BOUND_Y, (None, None))[0],
    )
    sources = {slot: tag for slot, (_, tag) in slots.items()}
    return bend, sources


def normalize_bend(literals: Sequence[Lit]) -> Bend:
    """Canonicalize a disjunction of raw literals into a bend.

    Same-variable two-variable terms collapse to bounds, zero-coefficient
    literals collapse to true/false, and the bend shape (including the sign
    condition) is enforced; NotABendError otherwise.
    """
    parts: List[Tuple[Payload, object]] = []
    for idx, raw in enumerate(literals):
        collapsed = _collapse_lit(raw)
        if collapsed == _TRUE:
            return Bend.always_true()
        if collapsed == _FALSE:
            continue
        parts.append((collapsed, idx))
    bend, _ = assemble_bend(parts)
    return bend


def substitute_bend(bend: Bend, var: str, value: Fraction) -> Bend:
    """The bend with `var` fixed to `value` (a bend over the remaining vars)."""
    if bend.is_top or bend.is_bottom or var not in bend.vars():
        return bend
    parts: List[Tuple[Payload, object]] = []
    for slot, literal in bend.literals():
        if isinstance(literal, Bound):
            if literal.var == var:
                if literal.holds(value):
                    return Bend.always_true()
                continue
            parts.append((literal, slot))
        else:
            if literal.mentions(var):
                parts.append((literal.bound_after_fixing(var, value), slot))
            else:
                parts.append((literal, slot))
    bend2, _ = assemble_bend(parts)
    return bend2


def rename_bend(bend: Bend, mapping: Mapping[str, str]) -> Bend:
    """The bend with variables renamed; merged variables re-canonicalize.

    A non-injective renaming can turn a two-variable inequality into a bound
    (or a constant), so the result is rebuilt from raw literals.
    """
    if bend.is_top or bend.is_bottom:
        return bend
    raws: List[Lit] = []
    for _, literal in bend.literals():
        if isinstance(literal, Bound):
            var = mapping.get(literal.var, literal.var)
            raws.append(Lit(((var, Fraction(1)),), literal.rel, literal.const))
        else:
            vx = mapping.get(literal.var_x, literal.var_x)
            vy = mapping.get(literal.var_y, literal.var_y)
            raws.append(
                Lit(((vx, literal.coeff_x), (vy, literal.coeff_y)), literal.rel, literal.const)
            )
    return normalize_bend(raws)


def bound_implies(b1: Bound, b2: Bound) -> bool:
    """True iff every rational satisfying b1 satisfies b2 (same variable)."""
    if b1.var != b2.var:
        raise DifferentVariablesError(f"{b1.var} vs {b2.var}")
    i1, i2 = b1.interval(), b2.interval()
    if i1.is_empty:
        return True
    if i2.is_full:
        return True
    if b1.is_upper != b2.is_upper:
        return False  # both nonempty, neither full: directions must agree
    if b1.is_upper:
        return i2.hi > i1.hi or (i2.hi == i1.hi and (i1.hi_strict or not i2.hi_strict))
    return i2.lo < i1.lo or (i2.lo == i1.lo and (i1.lo_strict or not i2.lo_strict))


def bounds_conflict(lower: Bound, upper: Bound) -> bool:
    """True iff the conjunction of the two bounds has no rational solution."""
    if lower.var != upper.var:
        raise DifferentVariablesError(f"{lower.var} vs {upper.var}")
    return lower.interval().intersect(upper.interval()).is_empty


def eval_bend(bend: Bend, assignment: Mapping[str, Fraction]) -> bool:
    """True iff at least one disjunct holds under the assignment."""
    for var in bend.vars():
        if var not in assignment:
            raise UnassignedVariableError(f"no value for {var}")
    if bend.is_top:
        return True
    for _, literal in bend.literals():
        if isinstance(literal, Bound):
            if literal.holds(rat(assignment[literal.var])):
                return True
        elif literal.holds(rat(assignment[literal.var_x]), rat(assignment[literal.var_y])):
            return True
    return False


def median3(
    t1: Mapping[str, Fraction], t2: Mapping[str, Fraction], t3: Mapping[str, Fraction]
) -> Dict[str, Fraction]:
    """Componentwise median of three assignments over one variable set."""
    if set(t1) != set(t2) or set(t1) != set(t3):
        raise VariableSetMismatchError(
            f"variable sets differ: {sorted(t1)} / {sorted(t2)} / {sorted(t3)}"
        )
    return {v: sorted((rat(t1[v]), rat(t2[v]), rat(t3[v])))[1] for v in t1}


def project_through_bend(bend: Bend, box: Interval, u: str, v: str) -> IntervalSet:
    """{ t : some w in box has bend true at (u=w, v=t) }, exactly.

    `u` may equal `v` (one-variable bends constraining the box directly).
    """
    stats.bump("projections")
    if box.is_empty:
        return IntervalSet.empty()
    if bend.is_bottom:
        return IntervalSet.empty()
    if u == v:
        if bend.is_top:
            return IntervalSet.of([box])
        return bend.value_set(v).intersect_interval(box)
    if bend.is_top:
        return IntervalSet.full()
    pieces: List[Interval] = []
    for _, literal in bend.literals():
        if isinstance(literal, Bound):
            if literal.var == v:
                pieces.append(literal.interval())
            elif literal.var == u:
                if not box.intersect(literal.interval()).is_empty:
                    return IntervalSet.full()
            else:
                raise VariableMismatchError(f"{literal} mentions neither {u} nor {v}")
        else:
            if not (literal.mentions(u) and literal.mentions(v)):
                raise VariableMismatchError(f"{literal} is not over {u},{v}")
            a, b = literal.coeff_of(u), literal.coeff_of(v)
            c = literal.const.finite()
            # v rel' (c - a*u)/b over u in box; b's sign fixes the direction.
            end, attained = scaled_extreme(box, -a / b, c / b, want_max=b > 0)
            open_end = literal.rel.is_strict or not attained
            if b > 0:
                pieces.append(Interval.at_most(end, open_end and end.is_finite))
            else:
                pieces.append(Interval.at_least(end, open_end and end.is_finite))
    return IntervalSet.of(pieces)


def bound_from_set(values: IntervalSet, var: str, upper: bool) -> Bound:
    """The strongest bound of the given direction valid on the whole set."""
    if values.is_empty:
        return Bound.unsat_marker(var, upper)
    if upper:
        end, attained = values.sup()
        if end.is_finite:
            stats.note_fraction(end.finite())
        return Bound.make(var, Rel.LE if attained else Rel.LT, end)
    end, attained = values.inf()
    if end.is_finite:
        stats.note_fraction(end.finite())
    return Bound.make(var, Rel.GE if attained else Rel.GT, end)


def strongest_bound(bend: Bend, lower: Bound, upper: Bound, target: str, direction: str) -> Bound:
    """Strongest bound on `target` implied by lower(u) and upper(u) and bend.

    `direction` is "upper" or "lower" (the direction sought).  Returns the
    trivial bound when nothing is implied and an unsatisfiable bound when the
    hypotheses cannot be met at all.
    """
    if direction not in ("upper", "lower"):
        raise ValueError(f"bad direction {direction!r}")
    if lower.var != upper.var:
        raise VariableMismatchError(f"box bounds on {lower.var} vs {upper.var}")
    u = lower.var
    if not set(bend.vars()) <= {u, target}:
        raise VariableMismatchError(f"{bend} is not over {u},{target}")
    stats.bump("strongest_bound")
    box = lower.interval().intersect(upper.interval())
    values = project_through_bend(bend, box, u, target)
    return bound_from_set(values, target, direction == "upper")


class BijunctiveFormula:
    """An ordered variable table plus a conjunction of bends."""

    __slots__ = ("variables", "bends", "_index")

    def __init__(self, bends: Sequence[Bend], variables: Sequence[str] = ()) -> None:
        table: List[str] = []
        seen = set()
        for var in variables:
            if var not in seen:
                seen.add(var)
                table.append(var)
        for bend in bends:
            for var in bend.vars():
                if var not in seen:
                    seen.add(var)
                    table.append(var)
        object.__setattr__(self, "variables", tuple(table))
        object.__setattr__(self, "bends", tuple(bends))
        object.__setattr__(self, "_index", {v: i for i, v in enumerate(table)})

    def __setattr__(self, name: str, value: object) -> None:
        raise AttributeError("BijunctiveFormula is immutable")

    @property
    def n(self) -> int:
        return len(self.variables)

    @property
    def m(self) -> int:
        return len(self.bends)

    def var_index(self, var: str) -> int:
        try:
            return self._index[var]
        except KeyError:
            raise UnknownVariableError(f"variable {var} not in formula") from None

    def has_var(self, var: str) -> bool:
        return var in self._index

    def without_bend(self, index: int) -> "BijunctiveFormula":
        kept = self.bends[:index] + self.bends[index + 1:]
        return BijunctiveFormula(kept, self.variables)

    def replace_bend(self, index: int, bend: Bend) -> "BijunctiveFormula":
        swapped = self.bends[:index] + (bend,) + self.bends[index + 1:]
        return BijunctiveFormula(swapped, self.variables)

    def with_bends(self, extra: Iterable[Bend]) -> "BijunctiveFormula":
        return BijunctiveFormula(self.bends + tuple(extra), self.variables)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BijunctiveFormula):
            return NotImplemented
        return self.variables == other.variables and self.bends == other.bends

    def __hash__(self) -> int:
        return hash((self.variables, self.bends))

    def __str__(self) -> str:
        return " and ".join(f"({b})" for b in self.bends) or "(empty)"


Assignment = Dict[str, Fraction]
