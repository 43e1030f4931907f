"""Composition of bends along shared variables; residues of paths and cycles.

Existentially projecting the middle variable out of two chained bends yields a
single bend again; folding that composition along a path (or closing it around
a cycle) gives the walk's residue bend.  Bound disjuncts of a residue carry
sources: the original step literal each one descends from.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from . import stats
from .core import (
    Bend,
    Bound,
    Lit,
    Payload,
    Rel,
    TvpiIneq,
    assemble_bend,
    _collapse_lit,
    _FALSE,
    _TRUE,
)
from .errors import (
    NotABendError,
    NotACycleError,
    NotAPathError,
    SharedEndpointError,
    VariableMismatchError,
)
from .linsolve import feasible, from_payload
from .rationals import ext

Source = Tuple[int, str]  # (step index, literal slot in that step's bend)


@dataclass(frozen=True)
class Walk:
    """A chain of bends: steps[i] relates points[i] to points[i+1].

    A single-point walk has no steps (the empty walk) or one step that is a
    one-variable bend on the point (the degenerate closed walk).  Multi-point
    walks consist of genuine two-variable steps; points may repeat, but never
    consecutively.
    """

    points: Tuple[str, ...]
    steps: Tuple[Bend, ...]

    def __post_init__(self) -> None:
        if not self.points:
            raise ValueError("a walk has at least one point")
        if len(self.points) == 1:
            if len(self.steps) > 1:
                raise ValueError("a single-point walk has at most one step")
            for step in self.steps:
                if not set(step.vars()) <= {self.points[0]}:
                    raise ValueError(f"step {step} is not on {self.points[0]}")
            return
        if len(self.steps) != len(self.points) - 1:
            raise ValueError("step count must be point count minus one")
        for i, step in enumerate(self.steps):
            a, b = self.points[i], self.points[i + 1]
            if a == b:
                raise ValueError("consecutive walk points must differ")
            if set(step.vars()) != {a, b}:
                raise ValueError(f"step {step} is not over {a},{b}")

    @property
    def start(self) -> str:
        return self.points[0]

    @property
    def end(self) -> str:
        return self.points[-1]

    @property
    def length(self) -> int:
        return len(self.steps)

    def reversed(self) -> "Walk":
        return Walk(tuple(reversed(self.points)), tuple(reversed(self.steps)))


@dataclass(frozen=True)
class Path(Walk):
    """A walk with pairwise distinct points; may be a single point (empty path)."""

    def __post_init__(self) -> None:
        super().__post_init__()
        if len(self.points) == 1 and self.steps:
            raise NotAPathError("a single-point path has no steps")
        if len(set(self.points)) != len(self.points):
            raise NotAPathError(f"repeated point in {self.points}")


@dataclass(frozen=True)
class Cycle(Walk):
    """A closed walk: one one-variable bend, or a loop of >= 2 genuine steps."""

    def __post_init__(self) -> None:
        super().__post_init__()
        if len(self.points) == 1:
            if len(self.steps) != 1:
                raise NotACycleError("a degenerate cycle is a single one-variable bend")
            return
        if self.points[0] != self.points[-1]:
            raise NotACycleError(f"cycle endpoints differ: {self.points}")
        interior = self.points[:-1]
        if len(set(interior)) != len(interior):
            raise NotACycleError(f"repeated interior point in {self.points}")

    @property
    def anchor(self) -> str:
        return self.points[0]


@dataclass(frozen=True)
class ResidueBend:
    """A bend plus the provenance of each of its bound disjuncts."""

    bend: Bend
    sources: Tuple[Tuple[str, Source], ...]

    def source_of(self, slot: str) -> Source:
        for s, src in self.sources:
            if s == slot:
                return src
        raise KeyError(f"no source for slot {slot}")

    @staticmethod
    def of(bend: Bend, sources: Dict[str, Source]) -> "ResidueBend":
        # Derived literals with no bound-literal ancestry carry no source.
        kept = {slot: src for slot, src in sources.items() if src is not None}
        return ResidueBend(bend, tuple(sorted(kept.items())))


def _identity_residue(bend: Bend, step_index: int) -> ResidueBend:
    sources = {
        slot: (step_index, slot)
        for slot, payload in bend.literals()
        if isinstance(payload, Bound)
    }
    return ResidueBend.of(bend, sources)


def _halfline_upper(coeff: Fraction) -> bool:
    """Direction of the middle-variable halfline cut out by a TVPI literal."""
    return coeff > 0


def _grouped(bend: Bend, outer: str, middle: str):
    """Split a bend's literals into outer bounds, the TVPI, middle bounds."""
    outer_bounds: List[Tuple[str, Bound]] = []
    middle_bounds: List[Tuple[str, Bound]] = []
    ineq: Optional[Tuple[str, TvpiIneq]] = None
    for slot, payload in bend.literals():
        if isinstance(payload, TvpiIneq):
            ineq = (slot, payload)
        elif payload.var == outer:
            outer_bounds.append((slot, payload))
        elif payload.var == middle:
            middle_bounds.append((slot, payload))
        else:
            raise VariableMismatchError(f"{payload} is not on {outer} or {middle}")
    return outer_bounds, ineq, middle_bounds


def _strict_join(r1: Rel, r2: Rel) -> Rel:
    return Rel.LT if (r1.is_strict or r2.is_strict) else Rel.LE


def compose_core(
    phi1: Bend,
    tag1,
    phi2: Bend,
    tag2,
    x0: str,
    x1: str,
    x2: str,
) -> Tuple[Bend, Dict[str, Source]]:
    """The bend equivalent to exists-x1 (phi1(x0,x1) and phi2(x1,x2)).

    tag1/tag2 map a slot of phi1/phi2 to its source entry.  x2 may equal x0
    (cycle closure); then the result is a one-variable bend on x0.
    """
    stats.bump("compositions")
    if phi1.is_bottom or phi2.is_bottom:
        return Bend.always_false(), {}
    if phi1.is_top:
        return _project_tagged(phi2, tag2, x1)
    if phi2.is_top:
        return _project_tagged(phi1, tag1, x1)

    p_list, t1, q1_list = _grouped(phi1, x0, x1)
    r_list, t2, q2_list = _grouped(phi2, x2, x1)
    closing = x0 == x2

    if not (t1 or q1_list) and not (t2 or q2_list) and p_list and r_list:
        raise NotABendError(
            "neither bend constrains the middle variable; the composition "
            f"is the conjunction of {phi1} and {phi2}, not a bend"
        )

    parts: List[Tuple[Payload, object]] = []
    # Pass-through bounds survive whenever the partner constrains the middle.
    if t2 or q2_list:
        for slot, bound in p_list:
            parts.append((bound, tag1(slot)))
    if t1 or q1_list:
        for slot, bound in r_list:
            parts.append((bound, tag2(slot)))

    derived: List[Tuple[Payload, object]] = []
    if t1 and q2_list:
        _, ineq1 = t1
        b1 = ineq1.coeff_of(x1)
        a1 = ineq1.coeff_of(x0)
        for slot, q2 in q2_list:
            if _halfline_upper(b1) == q2.is_upper:
                return Bend.always_true(), {}
            # Middle pinched between the halfline and the bound: bound on x0.
            rel = _strict_join(ineq1.rel, q2.rel)
            const = (ineq1.const.finite() - b1 * q2.const.finite()) / a1
            derived.append(
                (Bound.make(x0, rel if a1 > 0 else rel.flipped, const), tag2(slot))
            )
    if t2 and q1_list:
        _, ineq2 = t2
        a2 = ineq2.coeff_of(x1)
        b2 = ineq2.coeff_of(x2)
        for slot, q1 in q1_list:
            if _halfline_upper(a2) == q1.is_upper:
                return Bend.always_true(), {}
            rel = _strict_join(ineq2.rel, q1.rel)
            const = (ineq2.const.finite() - a2 * q1.const.finite()) / b2
            derived.append(
                (Bound.make(x2, rel if b2 > 0 else rel.flipped, const), tag1(slot))
            )
    if q1_list and q2_list:
        for _, q1 in q1_list:
            for _, q2 in q2_list:
                if not q1.interval().intersect(q2.interval()).is_empty:
                    return Bend.always_true(), {}
    if t1 and t2:
        _, ineq1 = t1
        _, ineq2 = t2
        a1, b1 = ineq1.coeff_of(x0), ineq1.coeff_of(x1)
        a2, b2 = ineq2.coeff_of(x1), ineq2.coeff_of(x2)
        if _halfline_upper(b1) == _halfline_upper(a2):
            return Bend.always_true(), {}
        s1, s2 = abs(a2), abs(b1)
        rel = _strict_join(ineq1.rel, ineq2.rel)
        const = s1 * ineq1.const.finite() + s2 * ineq2.const.finite()
        stats.note_fraction(const)
        if closing:
            combined = _collapse_lit(
                Lit(((x0, s1 * a1), (x0, s2 * b2)), rel, ext(const))
            )
            if combined == _TRUE:
                return Bend.always_true(), {}
            if combined != _FALSE:
                derived.append((combined, None))
        else:
            derived.append(
                (TvpiIneq.make(x0, s1 * a1, x2, s2 * b2, rel, const), None)
            )
    return assemble_bend(parts + derived)


def _project_tagged(bend: Bend, tag, middle: str) -> Tuple[Bend, Dict[str, Source]]:
    """Like _project_away but resolving sources through an existing tagger."""
    if bend.is_top or bend.is_bottom:
        return bend, {}
    parts: List[Tuple[Payload, object]] = []
    for slot, payload in bend.literals():
        if isinstance(payload, TvpiIneq) or payload.var == middle:
            return Bend.always_true(), {}
        parts.append((payload, tag(slot)))
    return assemble_bend(parts)


def compose_bends(phi1: Bend, phi2: Bend, x0: str, x1: str, x2: str) -> ResidueBend:
    """Compose phi1(x0,x1) with phi2(x1,x2) into a bend over (x0,x2)."""
    if x0 == x2:
        raise SharedEndpointError(
            "outer endpoints coincide; close a cycle through cycle_residue"
        )
    if x1 in (x0, x2):
        raise VariableMismatchError("middle variable must differ from the endpoints")
    for bend, allowed in ((phi1, {x0, x1}), (phi2, {x1, x2})):
        if not set(bend.vars()) <= allowed:
            raise VariableMismatchError(f"{bend} is not over {sorted(allowed)}")
    bend, sources = compose_core(
        phi1, lambda slot: (0, slot), phi2, lambda slot: (1, slot), x0, x1, x2
    )
    return ResidueBend.of(bend, sources)


def _fold_path(points: Sequence[str], steps: Sequence[Bend]) -> ResidueBend:
    acc = _identity_residue(steps[0], 0)
    for i in range(1, len(steps)):
        acc_sources = dict(acc.sources)
        bend, sources = compose_core(
            acc.bend,
            lambda slot: acc_sources[slot],
            steps[i],
            lambda slot, i=i: (i, slot),
            points[0],
            points[i],
            points[i + 1],
        )
        acc = ResidueBend.of(bend, sources)
    return acc


def path_residue(p: Path) -> ResidueBend:
    """The single bend equivalent to the path with interior points projected out."""
    if not isinstance(p, Path):
        raise NotAPathError(f"{p!r} is not a Path")
    if p.length == 0:
        return ResidueBend.of(Bend.always_true(), {})
    return _fold_path(p.points, p.steps)


def cycle_residue(c: Cycle) -> ResidueBend:
    """The one-variable bend equivalent to the cycle at its anchor."""
    if not isinstance(c, Cycle):
        raise NotACycleError(f"{c!r} is not a Cycle")
    if len(c.points) == 1:
        return _identity_residue(c.steps[0], 0)
    prefix = _fold_path(c.points[:-1], c.steps[:-1])
    prefix_sources = dict(prefix.sources)
    last = len(c.steps) - 1
    bend, sources = compose_core(
        prefix.bend,
        lambda slot: prefix_sources[slot],
        c.steps[last],
        lambda slot: (last, slot),
        c.points[0],
        c.points[-2],
        c.points[-1],
    )
    return ResidueBend.of(bend, sources)


@dataclass(frozen=True)
class Handcuff:
    """Two cycles joined by a path: (C at x, P from x to y, D at y).

    C and P share exactly x, P and D exactly y; C and D are variable-disjoint
    unless the path is empty (x = y), in which case they share exactly x.
    """

    cycle_c: Cycle
    path_p: Path
    cycle_d: Cycle

    def __post_init__(self) -> None:
        x, y = self.path_p.start, self.path_p.end
        if self.cycle_c.anchor != x:
            raise ValueError(f"first cycle anchored at {self.cycle_c.anchor}, path starts at {x}")
        if self.cycle_d.anchor != y:
            raise ValueError(f"second cycle anchored at {self.cycle_d.anchor}, path ends at {y}")
        vc, vp, vd = (set(w.points) for w in (self.cycle_c, self.path_p, self.cycle_d))
        if vc & vp != {x}:
            raise ValueError(f"first cycle and path share {sorted(vc & vp)}, expected only {x}")
        if vp & vd != {y}:
            raise ValueError(f"path and second cycle share {sorted(vp & vd)}, expected only {y}")
        expected = {x} if x == y else set()
        if vc & vd != expected:
            raise ValueError(f"cycles share variables {sorted(vc & vd)}")

    @property
    def x(self) -> str:
        return self.path_p.start

    @property
    def y(self) -> str:
        return self.path_p.end

    def bends(self) -> List[Tuple[Bend, str, str]]:
        """All steps as (bend, from_point, to_point) triples."""
        out = []
        for walk in (self.cycle_c, self.path_p, self.cycle_d):
            if len(walk.points) == 1:
                for step in walk.steps:
                    out.append((step, walk.points[0], walk.points[0]))
            else:
                for i, step in enumerate(walk.steps):
                    out.append((step, walk.points[i], walk.points[i + 1]))
        return out


def handcuff_unsat(h: Handcuff) -> bool:
    """Whether res_C(x) and res_P(x,y) and res_D(y) has no rational solution."""
    res_c = cycle_residue(h.cycle_c).bend
    res_p = path_residue(h.path_p).bend
    res_d = cycle_residue(h.cycle_d).bend
    branch_sets = []
    for bend in (res_c, res_p, res_d):
        if bend.is_bottom:
            return True
        if bend.is_top:
            branch_sets.append([None])
        else:
            branch_sets.append([payload for _, payload in bend.literals()])
    for b1 in branch_sets[0]:
        for b2 in branch_sets[1]:
            for b3 in branch_sets[2]:
                chosen = [from_payload(p) for p in (b1, b2, b3) if p is not None]
                if feasible(chosen):
                    return False
    return True


@dataclass(frozen=True)
class HandcuffRefutation:
    """A handcuff that is unsatisfiable, plus its homomorphism into a formula."""

    handcuff: Handcuff
    hom: Tuple[Tuple[str, str], ...]

    def hom_map(self) -> Dict[str, str]:
        return dict(self.hom)
