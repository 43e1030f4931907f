"""Variable elimination decision procedure with witness reconstruction.

Satisfiability is decided by eliminating variables one at a time.  For the
chosen variable the module enumerates every candidate threshold (the
x-coordinates where two constraint boundary lines cross, plus explicit bound
constants), locates by binary probing the highest threshold the formula can
still clear, and splits into two cases: either the variable is forced to
that threshold exactly and gets substituted away, or an open strip of values
remains, each disjunction collapses to the one branch that covers the strip,
and lower/upper forms are combined pairwise to drop the variable.  A stack
of per-variable records lets a witness for the original formula be rebuilt
from a witness of the reduced one.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from . import linsolve, stats
from .certify import HandcuffRefutation, find_handcuff_refutation
from .core import (
    Bend,
    BijunctiveFormula,
    Bound,
    Lit,
    TvpiIneq,
    eval_bend,
    lit,
    normalize_bend,
    substitute_bend,
)
from .errors import (
    BudgetExceededError,
    EmptyIntervalError,
    NoDisjunctDominatesError,
    NonTvpiInputError,
    UnassignedVariableError,
    UnknownVariableError,
)
from .intervals import Interval
from .propagate import propagate
from .rationals import NEG_INF, POS_INF, ExtendedRational
from .stats import bump, note_fraction

Assignment = Dict[str, Fraction]


@dataclass(frozen=True)
class BreakpointList:
    """Sorted candidate thresholds for one variable, duplicates removed."""

    variable: str
    values: Tuple[Fraction, ...]


@dataclass(frozen=True)
class StripChoice:
    """Outcome of the strip search for one variable.

    `low`/`high` delimit the admissible range found by binary probing.  When
    `pinned` is set the variable is forced to equal `low`; otherwise the open
    range (low, high) is feasible and `chosen` maps each bend index that
    mentions the variable to the literal covering that range.
    """

    variable: str
    low: ExtendedRational
    high: ExtendedRational
    pinned: Optional[Fraction]
    chosen: Tuple[Tuple[int, Lit], ...]

    def chosen_for(self, index: int) -> Optional[Lit]:
        for i, l in self.chosen:
            if i == index:
                return l
        return None


@dataclass(frozen=True)
class EliminationRecord:
    """Everything needed to reintroduce one eliminated variable.

    Either `pinned` holds the forced value, or `strip` is the open admissible
    range and `retained` lists the literals on the variable (including the
    strip edges) whose intersection at the tail assignment yields the
    admissible interval.
    """

    variable: str
    pinned: Optional[Fraction]
    strip: Interval
    retained: Tuple[Lit, ...]
    chosen: Tuple[Tuple[int, Lit], ...] = ()


@dataclass(frozen=True)
class SolveResult:
    """Verdict plus supporting material: witness, refutation, or trace."""

    satisfiable: bool
    assignment: Optional[Assignment]
    refutation: Optional[HandcuffRefutation]
    records: Tuple[EliminationRecord, ...]

    def trace_text(self) -> str:
        lines = []
        for rec in self.records:
            if rec.pinned is not None:
                lines.append(f"pin {rec.variable} := {rec.pinned}")
            else:
                lines.append(f"eliminate {rec.variable} in {rec.strip}")
        lines.append("satisfiable" if self.satisfiable else "unsatisfiable")
        return "\n".join(lines) + "\n"


def _lines_for(bend: Bend, x: str) -> List[Tuple[Fraction, Fraction, Fraction]]:
    """Boundary lines a*x + b*other = c of the bend's live literals."""
    out = []
    for _, payload in bend.literals():
        if isinstance(payload, Bound):
            if not payload.const.is_finite:
                continue
            if payload.var == x:
                out.append((Fraction(1), Fraction(0), payload.const.finite()))
            else:
                out.append((Fraction(0), Fraction(1), payload.const.finite()))
        else:
            if not payload.const.is_finite:
                continue
            if payload.var_x == x:
                out.append((payload.coeff_x, payload.coeff_y, payload.const.finite()))
            else:
                out.append((payload.coeff_y, payload.coeff_x, payload.const.finite()))
    return out


def breakpoints(phi: BijunctiveFormula, x: str) -> BreakpointList:
    """Candidate thresholds for x: boundary crossings plus bound constants."""
    if not phi.has_var(x):
        raise UnknownVariableError(f"{x} is not a variable of the formula")
    values = set()
    groups: Dict[str, List[Tuple[Fraction, Fraction, Fraction]]] = {}
    for bend in phi.bends:
        if bend.is_top or bend.is_bottom:
            continue
        mentioned = bend.vars()
        if x not in mentioned:
            continue
        for payload_slot, payload in bend.literals():
            if isinstance(payload, Bound) and payload.var == x and payload.const.is_finite:
                values.add(payload.const.finite())
        others = [v for v in mentioned if v != x]
        key = others[0] if others else x
        groups.setdefault(key, []).extend(_lines_for(bend, x))
    for lines in groups.values():
        for i in range(len(lines)):
            a1, b1, c1 = lines[i]
            for j in range(i + 1, len(lines)):
                a2, b2, c2 = lines[j]
                bump("breakpoint_pairs")
                det = a1 * b2 - a2 * b1
                if det != 0:
                    values.add((c1 * b2 - c2 * b1) / det)
    for v in values:
        note_fraction(v)
    return BreakpointList(x, tuple(sorted(values)))


def _edge_literals(x: str, low: ExtendedRational, high: ExtendedRational) -> List[Lit]:
    edges = []
    if low.is_finite:
        edges.append(lit({x: 1}, ">", low.finite()))
    if high.is_finite:
        edges.append(lit({x: 1}, "<", high.finite()))
    return edges


def _point_literals(x: str, value: Fraction) -> List[Lit]:
    return [lit({x: 1}, ">=", value), lit({x: 1}, "<=", value)]


def _dominant_literal(bend: Bend, x: str, range_lits: Sequence[Lit]) -> Lit:
    """The literal covering the bend's solutions within the given x-range.

    A candidate dominates when no other literal admits a point in the range
    outside it.  Preference on ties: the two-variable inequality, then the
    bound on x, then the bound on the neighbor.
    """
    def priority(slot_payload):
        _, payload = slot_payload
        if isinstance(payload, TvpiIneq):
            return 0
        return 1 if payload.var == x else 2

    candidates = sorted(bend.literals(), key=priority)
    lits = [linsolve.from_payload(p) for _, p in candidates]
    for i, psi in enumerate(lits):
        negated = linsolve.negated(psi)
        ok = True
        for j, chi in enumerate(lits):
            if i == j:
                continue
            bump("dominance_checks")
            if linsolve.feasible(list(range_lits) + [chi, negated]):
                ok = False
                break
        if ok:
            return psi
    raise NoDisjunctDominatesError(
        f"no branch of {bend} covers the range given by {[str(r) for r in range_lits]}"
    )


def _largest_passing_index(phi: BijunctiveFormula, x: str, values: Tuple[Fraction, ...]) -> int:
    """Largest i with the probe x >= values[i-1] accepted; 0 when none."""
    lo, hi = 0, len(values)
    while lo < hi:
        mid = (lo + hi + 1) // 2
        bump("propagate_probes")
        if propagate(phi, x, values[mid - 1]):
            lo = mid
        else:
            hi = mid - 1
    return lo


def fix_strip(phi: BijunctiveFormula, x: str, bp: BreakpointList) -> StripChoice:
    """Locate the highest admissible strip for x and fix each bend's branch."""
    values = bp.values
    ell = _largest_passing_index(phi, x, values)
    low = ExtendedRational.of(values[ell - 1]) if ell > 0 else NEG_INF
    high = ExtendedRational.of(values[ell]) if ell < len(values) else POS_INF
    pinned: Optional[Fraction] = None
    if low.is_finite:
        bump("propagate_probes")
        if not propagate(phi, x, low.finite(), strict=True):
            pinned = low.finite()
    if pinned is not None:
        range_lits = _point_literals(x, pinned)
    else:
        range_lits = _edge_literals(x, low, high)
    chosen = []
    for i, bend in enumerate(phi.bends):
        if bend.is_top or bend.is_bottom or x not in bend.vars():
            continue
        chosen.append((i, _dominant_literal(bend, x, range_lits)))
    return StripChoice(x, low, high, pinned, tuple(chosen))


def _isolate(raw: Lit, x: str) -> Tuple[bool, Dict[str, Fraction], Fraction]:
    """Rewrite the literal as x (rel) sum(coeffs)+const; True means lower form.

    The returned relation strictness is raw.rel.is_strict; lower means the
    literal reads x >= or > of the isolated side.
    """
    ax = None
    rest: Dict[str, Fraction] = {}
    for v, a in raw.coeffs:
        if v == x:
            ax = (ax or Fraction(0)) + a
        else:
            rest[v] = rest.get(v, Fraction(0)) + a
    if ax is None or ax == 0 or len(rest) > 1:
        raise NonTvpiInputError(f"{raw} does not isolate {x} against one neighbor")
    if not raw.const.is_finite:
        raise NonTvpiInputError(f"{raw} has an infinite constant")
    side = {v: -a / ax for v, a in rest.items() if a != 0}
    const = raw.const.finite() / ax
    upper = raw.rel.is_upper if ax > 0 else not raw.rel.is_upper
    return (not upper, side, const)


def fourier_motzkin_step(pool: Sequence[Lit], x: str) -> List[Lit]:
    """Combine every lower form on x with every upper form, dropping x."""
    lowers = []
    uppers = []
    for raw in pool:
        is_lower, side, const = _isolate(raw, x)
        entry = (side, const, raw.rel.is_strict)
        (lowers if is_lower else uppers).append(entry)
    out = []
    for side1, c1, strict1 in lowers:
        for side2, c2, strict2 in uppers:
            bump("fm_pairs")
            coeffs: Dict[str, Fraction] = dict(side1)
            for v, a in side2.items():
                coeffs[v] = coeffs.get(v, Fraction(0)) - a
            coeffs = {v: a for v, a in coeffs.items() if a != 0}
            const = c2 - c1
            note_fraction(const)
            out.append(lit(coeffs, "<" if strict1 or strict2 else "<=", const))
    return out


def _prune_direction(
    entries: List[Lit], edges: Sequence[Lit], protected: Sequence[Lit]
) -> List[Lit]:
    """Drop literals implied, within the strip, by another kept literal.

    The strip edge literals are protected: they provide the implication
    context, so pruning them would silently weaken the pool.
    """
    kept: List[Lit] = list(protected)
    guard = len(kept)
    for psi in sorted(entries, key=str):
        neg_psi = linsolve.negated(psi)
        implied = False
        for chi in kept:
            bump("dominance_checks")
            if not linsolve.feasible(list(edges) + [chi, neg_psi]):
                implied = True
                break
        if not implied:
            kept = kept[:guard] + [
                chi
                for chi in kept[guard:]
                if linsolve.feasible(list(edges) + [psi, linsolve.negated(chi)])
            ]
            kept.append(psi)
    return kept


def eliminate_once(
    phi: BijunctiveFormula, x: str
) -> Tuple[EliminationRecord, BijunctiveFormula]:
    """One elimination step: returns the record and the reduced formula."""
    bp = breakpoints(phi, x)
    choice = fix_strip(phi, x, bp)
    survivors = tuple(v for v in phi.variables if v != x)
    if choice.pinned is not None:
        value = choice.pinned
        new_bends = []
        for bend in phi.bends:
            nb = substitute_bend(bend, x, value) if x in bend.vars() else bend
            if not nb.is_top:
                new_bends.append(nb)
        record = EliminationRecord(x, value, Interval.point(value), (), choice.chosen)
        return record, BijunctiveFormula(new_bends, survivors)
    edges = _edge_literals(x, choice.low, choice.high)
    keep: List[Bend] = []
    pool: List[Lit] = list(edges)
    for i, bend in enumerate(phi.bends):
        if bend.is_top:
            continue
        if bend.is_bottom or x not in bend.vars():
            keep.append(bend)
            continue
        fixed = choice.chosen_for(i)
        if any(v == x for v, _ in fixed.coeffs):
            pool.append(fixed)
        else:
            keep.append(normalize_bend([fixed]))
    lowers = []
    uppers = []
    edge_lowers = []
    edge_uppers = []
    for raw in pool:
        is_lower, _, _ = _isolate(raw, x)
        if raw in edges:
            (edge_lowers if is_lower else edge_uppers).append(raw)
        else:
            (lowers if is_lower else uppers).append(raw)
    pruned = _prune_direction(lowers, edges, edge_lowers) + _prune_direction(
        uppers, edges, edge_uppers
    )
    new_bends = [normalize_bend([l]) for l in fourier_motzkin_step(pruned, x)]
    seen = set()
    merged: List[Bend] = []
    for bend in keep + new_bends:
        if bend.is_top or bend in seen:
            continue
        seen.add(bend)
        merged.append(bend)
    strip = Interval.make(choice.low, True, choice.high, True)
    record = EliminationRecord(x, None, strip, tuple(pruned), choice.chosen)
    return record, BijunctiveFormula(merged, survivors)


def _interval_at(raw: Lit, x: str, assignment: Assignment) -> Interval:
    """The x-interval the literal allows once the other variable is fixed."""
    ax = Fraction(0)
    rest = Fraction(0)
    for v, a in raw.coeffs:
        if v == x:
            ax += a
        elif v in assignment:
            rest += a * assignment[v]
        else:
            raise UnassignedVariableError(f"{v} has no value during back-substitution")
    if ax == 0:
        raise NonTvpiInputError(f"{raw} does not constrain {x}")
    threshold = (raw.const.finite() - rest) / ax
    upper = raw.rel.is_upper if ax > 0 else not raw.rel.is_upper
    if upper:
        return Interval.at_most(ExtendedRational.of(threshold), raw.rel.is_strict)
    return Interval.at_least(ExtendedRational.of(threshold), raw.rel.is_strict)


def _pick_value(ivl: Interval) -> Fraction:
    """A rational in the interval: midpoint first, then endpoints, then 0."""
    lo, lo_attained = ivl.inf()
    hi, hi_attained = ivl.sup()
    if lo.is_finite and hi.is_finite:
        if lo == hi:
            return lo.finite()
        return (lo.finite() + hi.finite()) / 2
    if lo.is_finite:
        return lo.finite() if lo_attained else lo.finite() + 1
    if hi.is_finite:
        return hi.finite() if hi_attained else hi.finite() - 1
    return Fraction(0)


def back_substitute(
    records: Sequence[EliminationRecord], tail: Assignment
) -> Assignment:
    """Extend a reduced-formula witness to the eliminated variables."""
    out = dict(tail)
    for rec in reversed(records):
        if rec.pinned is not None:
            out[rec.variable] = rec.pinned
            continue
        ivl = rec.strip
        for raw in rec.retained:
            ivl = ivl.intersect(_interval_at(raw, rec.variable, out))
        if ivl.is_empty:
            raise EmptyIntervalError(
                f"no admissible value for {rec.variable}; record {rec}"
            )
        value = _pick_value(ivl)
        note_fraction(value)
        out[rec.variable] = value
    return out


def _pick_variable(phi: BijunctiveFormula) -> str:
    def incidence(v: str) -> int:
        return sum(
            1 for b in phi.bends if not b.is_top and not b.is_bottom and v in b.vars()
        )

    return min(phi.variables, key=lambda v: (incidence(v), phi.var_index(v)))


def _is_single_literal(phi: BijunctiveFormula) -> bool:
    return all(len(list(b.literals())) <= 1 for b in phi.bends)


def _attempt_refutation(phi: BijunctiveFormula) -> Optional[HandcuffRefutation]:
    # A convenience attempt only: tight budgets keep it a small fraction of
    # the solve itself, and callers wanting an exhaustive search run
    # find_handcuff_refutation directly with its defaults.
    if _is_single_literal(phi):
        max_vars = 10
    elif phi.n <= 6:
        max_vars = 6
    else:
        return None
    try:
        return find_handcuff_refutation(
            phi, max_vars=max_vars, state_budget=5_000, check_budget=10_000
        )
    except BudgetExceededError:
        return None


def solve(phi: BijunctiveFormula, *, check: bool = True) -> SolveResult:
    """Decide the formula; SAT results carry a verified rational witness."""
    records: List[EliminationRecord] = []
    current = phi
    tail: Optional[Assignment] = None
    while True:
        if any(b.is_bottom for b in current.bends):
            return SolveResult(False, None, _attempt_refutation(phi), tuple(records))
        if current.n == 0:
            tail = {}
            break
        if current.n == 1:
            var = current.variables[0]
            region = None
            for bend in current.bends:
                if bend.is_top:
                    continue
                vs = bend.value_set(var)
                region = vs if region is None else region.intersect(vs)
            if region is not None and region.is_empty:
                return SolveResult(False, None, _attempt_refutation(phi), tuple(records))
            tail = {var: region.pick() if region is not None else Fraction(0)}
            break
        x = _pick_variable(current)
        record, current = eliminate_once(current, x)
        records.append(record)
    assignment = back_substitute(records, tail)
    if check:
        for bend in phi.bends:
            assert eval_bend(bend, assignment), f"witness fails {bend}"
    return SolveResult(True, assignment, None, tuple(records))
