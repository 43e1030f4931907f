"""Bound propagation: decide satisfiability of phi and x >= s, given phi is SAT.

The promise matters: on an unsatisfiable phi any answer is allowed, but a NO
answer is always sound because every derived bound is implied by the
hypotheses.  The procedure runs rounds of per-bend bound tightening, walks
predecessor chains to detect closed derivation walks, and tightens through
their cycle residues, repeating until the number of redundant literals stops
changing.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from . import linsolve
from .core import (
    Bend,
    BijunctiveFormula,
    Bound,
    Rel,
    TvpiIneq,
    bound_from_set,
    bound_implies,
    bounds_conflict,
    rename_bend,
    strongest_bound,
)
from .errors import UnknownVariableError
from .residue import Cycle, cycle_residue

# An improvement's provenance: which bend, oriented from which variable.
PredEntry = Tuple[int, str]


@dataclass
class PropagateState:
    """Mutable per-run state: strongest bounds and their provenance.

    beta_low[u] / beta_high[u] only ever tighten.  pred_low[u][t] records the
    bend (by index, with source endpoint) that improved beta_low[u] at clock
    tick t.  Ticks order improvement events globally: updates are sequential,
    so two improvements in the same sweep can still depend on one another, and
    round numbers would be too coarse to walk that dependency back.
    """

    beta_low: Dict[str, Bound] = field(default_factory=dict)
    beta_high: Dict[str, Bound] = field(default_factory=dict)
    pred_low: Dict[str, Dict[int, PredEntry]] = field(default_factory=dict)
    pred_high: Dict[str, Dict[int, PredEntry]] = field(default_factory=dict)
    clock: int = 0
    redundant_count: int = 0

    def low(self, u: str) -> Bound:
        return self.beta_low.get(u) or Bound.trivial(u, upper=False)

    def high(self, u: str) -> Bound:
        return self.beta_high.get(u) or Bound.trivial(u, upper=True)


def _initial_bounds(phi: BijunctiveFormula, st: PropagateState) -> None:
    # Only whole-conjunct bounds count: a bend that is exactly one bound
    # literal.  Disjunctions constrain nothing unconditionally.
    for u in phi.variables:
        st.beta_low[u] = Bound.trivial(u, upper=False)
        st.beta_high[u] = Bound.trivial(u, upper=True)
        st.pred_low[u] = {}
        st.pred_high[u] = {}
    for bend in phi.bends:
        single = bend.single_bound()
        if single is None:
            continue
        current = st.beta_high[single.var] if single.is_upper else st.beta_low[single.var]
        if bound_implies(single, current):
            if single.is_upper:
                st.beta_high[single.var] = single
            else:
                st.beta_low[single.var] = single


def _improves(new: Bound, old: Bound) -> bool:
    return bound_implies(new, old) and not bound_implies(old, new)


def _ties(new: Bound, old: Bound) -> bool:
    # Only finite ties matter: re-deriving a trivial bound says nothing.
    return (
        new.const.is_finite
        and bound_implies(new, old)
        and bound_implies(old, new)
    )


def _record(
    st: PropagateState, v: str, direction: str, entry: PredEntry, *, tie: bool = False
) -> bool:
    pmap = st.pred_low if direction == "lower" else st.pred_high
    existing = pmap[v]
    if tie and existing and existing[max(existing)] == entry:
        return False
    st.clock += 1
    existing[st.clock] = entry
    return True


def _orientations(bend: Bend) -> List[Tuple[str, str]]:
    names = bend.vars()
    if len(names) == 2:
        a, b = names
        return [(a, b), (b, a)]
    if len(names) == 1:
        return [(names[0], names[0])]
    return []


def _closed_walk_cycle(
    walk: List[Tuple[Bend, str, str]], anchor: str
) -> Cycle:
    """Lift a closed walk of conjuncts to a cycle by renaming the interior."""
    names = [anchor]
    for i in range(1, len(walk)):
        names.append(f"~{i}")
    names.append(anchor)
    steps = []
    for i, (bend, src, dst) in enumerate(walk):
        steps.append(rename_bend(bend, {src: names[i], dst: names[i + 1]}))
    return Cycle(tuple(names), tuple(steps))


def _tighten_by_cycle(st: PropagateState, v: str, residue: Bend) -> None:
    values = residue.value_set(v)
    low_set = values.intersect_interval(st.low(v).interval())
    st.beta_low[v] = bound_from_set(low_set, v, upper=False)
    high_set = values.intersect_interval(st.high(v).interval())
    st.beta_high[v] = bound_from_set(high_set, v, upper=True)


def _flip(direction: str) -> str:
    return "upper" if direction == "lower" else "lower"


def _binding_direction(bend: Bend, w: str, target_dir: str) -> str:
    """Which end of w's box the derivation of a target_dir bound leaned on.

    The two-variable literal drives the derived value: its slope in w decides
    which box end is binding (same end as the target when the slope is
    positive).  A bend without one only reaches across by making its bound
    branch on w infeasible, which leans on the end that branch's own
    direction names.
    """
    for _, payload in bend.literals():
        if isinstance(payload, TvpiIneq):
            if payload.var_x == w:
                a_w, a_u = payload.coeff_x, payload.coeff_y
            else:
                a_w, a_u = payload.coeff_y, payload.coeff_x
            return target_dir if -a_w / a_u > 0 else _flip(target_dir)
    for _, payload in bend.literals():
        if isinstance(payload, Bound) and payload.var == w:
            return "lower" if payload.is_upper else "upper"
    return target_dir


def _walk_back_pass(
    phi: BijunctiveFormula, st: PropagateState, v: str, direction: str
) -> bool:
    """Walk predecessors back from v and tighten through closed-walk residues.

    A derivation chain switches between lower and upper bounds whenever a
    step's binding box end flips, so the walk tracks the needed direction and
    reads the matching predecessor map at every step.  Returns False on a
    bound conflict.
    """
    u, d, i = v, direction, st.clock + 1
    walk: List[Tuple[Bend, str, str]] = []
    while True:
        pmap = st.pred_low if d == "lower" else st.pred_high
        defined = [j for j in pmap.get(u, {}) if j < i]
        if not defined:
            return True
        j = max(defined)
        bend_index, w = pmap[u][j]
        walk.insert(0, (phi.bends[bend_index], w, u))
        d = _binding_direction(phi.bends[bend_index], w, d)
        u, i = w, j
        if w == v:
            residue = cycle_residue(_closed_walk_cycle(walk, v)).bend
            _tighten_by_cycle(st, v, residue)
            if bounds_conflict(st.low(v), st.high(v)):
                return False


def _redundant_in_bend(phi_bend: Bend, box_literals: List[linsolve.Lit]) -> int:
    if phi_bend.is_top or phi_bend.is_bottom:
        return 0
    payloads = [payload for _, payload in phi_bend.literals()]
    if len(payloads) == 1:
        alone = box_literals + [linsolve.from_payload(payloads[0])]
        return 1 if not linsolve.feasible(alone) else 0
    count = 0
    for keep, psi in enumerate(payloads):
        chosen = box_literals + [linsolve.from_payload(psi)]
        for other_index, chi in enumerate(payloads):
            if other_index != keep:
                chosen.append(linsolve.negated(linsolve.from_payload(chi)))
        if not linsolve.feasible(chosen):
            count += 1
    return count


def redundant_literal_count(phi: BijunctiveFormula, st: PropagateState) -> int:
    """Literals removable from their bend without changing it inside the box.

    A literal is redundant when no point of the box satisfies it while
    falsifying every other literal of its bend; decided exactly through the
    micro-solver, never by sampling.
    """
    total = 0
    for bend in phi.bends:
        box: List[linsolve.Lit] = []
        for u in bend.vars():
            box.append(linsolve.from_bound(st.low(u)))
            box.append(linsolve.from_bound(st.high(u)))
        total += _redundant_in_bend(bend, box)
    return total


def propagate(
    phi: BijunctiveFormula, x: str, s: Fraction, *, strict: bool = False
) -> bool:
    """True (YES) iff phi and x >= s is satisfiable, assuming phi itself is.

    With strict=True the probe is phi and x > s.  On an unsatisfiable phi the
    answer is unspecified, but False (NO) always means the conjunction really
    is unsatisfiable: every bound the run derives is implied by it.
    """
    if not phi.has_var(x):
        raise UnknownVariableError(f"{x} is not a variable of the formula")
    if any(bend.is_bottom for bend in phi.bends):
        return False

    st = PropagateState()
    _initial_bounds(phi, st)
    probe = Bound.make(x, Rel.GT if strict else Rel.GE, s)
    if _improves(probe, st.beta_low[x]):
        st.beta_low[x] = probe
    for u in phi.variables:
        if bounds_conflict(st.low(u), st.high(u)):
            return False

    # The redundant count only grows as bounds tighten, and it is bounded by
    # the total literal count, so the outer loop runs at most L + 1 times.
    literal_total = sum(len(list(bend.literals())) for bend in phi.bends)
    st.redundant_count = redundant_literal_count(phi, st)
    for _ in range(literal_total + 1):
        phase_changed = False
        for _round in range(2 * phi.n):
            changed = False
            for bend_index, bend in enumerate(phi.bends):
                for u, v in _orientations(bend):
                    for direction in ("lower", "upper"):
                        beta = strongest_bound(
                            bend, st.low(u), st.high(u), v, direction
                        )
                        current = st.low(v) if direction == "lower" else st.high(v)
                        if not _improves(beta, current):
                            # A tie at a finite bound is still provenance:
                            # cycles whose residue conflicts with a strict
                            # probe sit exactly at their fixed point, so no
                            # improvement ever fires along them.
                            if u != v and _ties(beta, current):
                                if _record(st, v, direction, (bend_index, u), tie=True):
                                    changed = True
                            continue
                        changed = True
                        if direction == "lower":
                            st.beta_low[v] = beta
                        else:
                            st.beta_high[v] = beta
                        if u != v:
                            _record(st, v, direction, (bend_index, u))
                        if bounds_conflict(st.low(v), st.high(v)):
                            return False
            if changed:
                phase_changed = True
            else:
                # A full round with no improvement and no fresh provenance is
                # a fixed point; further rounds would replay it verbatim.
                break
        if not phase_changed:
            # The whole phase was a no-op, so the walk-backs would see the
            # exact state the previous phase already examined, and the
            # redundant count cannot have moved either.
            break
        for v in phi.variables:
            for direction in ("lower", "upper"):
                if not _walk_back_pass(phi, st, v, direction):
                    return False
        count = redundant_literal_count(phi, st)
        if count == st.redundant_count:
            break
        st.redundant_count = count
    return True
