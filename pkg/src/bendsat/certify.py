"""Certificates and independent checks: brute-force oracle, handcuff search.

Nothing here reuses the polynomial decision procedure.  The brute-force
oracle expands a formula into per-bend literal choices and decides each
conjunction with the flat micro-solver; the refutation search enumerates
homomorphic images of handcuffs by dynamic programming over walk residues.
The test suite leans on agreement between these routes and the main solver.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from . import linsolve
from .core import (
    Assignment,
    Bend,
    BijunctiveFormula,
    Bound,
    Lit,
    eval_bend,
    normalize_bend,
    rename_bend,
)
from .errors import BudgetExceededError, UnassignedVariableError
from .intervals import IntervalSet
from .rationals import ext
from .residue import (
    Cycle,
    Handcuff,
    HandcuffRefutation,
    Path,
    compose_core,
    cycle_residue,
    handcuff_unsat,
    path_residue,
)

WITNESS = "witness"
REFUTATION = "handcuff-refutation"
TRACE = "trace"


@dataclass(frozen=True, eq=False)
class Certificate:
    """What `solve` hands back beside its verdict: a proof or a pointer.

    Exactly one payload field is populated, matching `kind`: a satisfying
    assignment, a handcuff refutation, or an opaque reference to the
    elimination trace (for unsatisfiable instances outside the bounded
    refutation search).  Certificates are checkable without solver internals:
    `check_witness` and `check_refutation` only replay definitions.
    """

    kind: str
    witness: Optional[Assignment] = None
    refutation: Optional[HandcuffRefutation] = None
    trace: Optional[str] = None

    @staticmethod
    def of_witness(assignment: Assignment) -> "Certificate":
        return Certificate(WITNESS, witness=assignment)

    @staticmethod
    def of_refutation(refutation: HandcuffRefutation) -> "Certificate":
        return Certificate(REFUTATION, refutation=refutation)

    @staticmethod
    def of_trace(trace: str) -> "Certificate":
        return Certificate(TRACE, trace=trace)


def brute_force_sat(
    phi: BijunctiveFormula,
    budget: int = 3**12,
    parallel: bool = False,
) -> Optional[Assignment]:
    """A satisfying assignment, or None, by literal-choice expansion.

    Every bend offers up to three literals; a choice per bend yields a plain
    conjunction of linear constraints, decided exactly by the flat
    micro-solver.  Infeasible prefixes prune the expansion.  Unconstrained
    variables are assigned 0.  Raises BudgetExceededError when the number of
    choice combinations exceeds `budget` (default 3^12).
    """
    choices: List[List[Lit]] = []
    for bend in phi.bends:
        if bend.is_bottom:
            return None
        if bend.is_top:
            continue
        choices.append([linsolve.from_payload(p) for _, p in bend.literals()])
    total = 1
    for group in choices:
        total *= len(group)
    if total > budget:
        raise BudgetExceededError(
            f"the expansion has {total} literal choices, over the budget of {budget}"
        )

    def search(prefix: List[Lit], depth: int) -> Optional[Dict[str, Fraction]]:
        if depth == len(choices):
            return linsolve.solve_linear(prefix)
        for choice in choices[depth]:
            prefix.append(choice)
            if linsolve.feasible(prefix):
                found = search(prefix, depth + 1)
                if found is not None:
                    prefix.pop()
                    return found
            prefix.pop()
        return None

    solution: Optional[Dict[str, Fraction]] = None
    if parallel and choices:
        first = choices[0]

        def branch(k: int) -> Optional[Dict[str, Fraction]]:
            prefix = [first[k]]
            if not linsolve.feasible(prefix):
                return None
            return search(prefix, 1)

        with ThreadPoolExecutor() as pool:
            results = list(pool.map(branch, range(len(first))))
        solution = next((r for r in results if r is not None), None)
    else:
        solution = search([], 0)
    if solution is None:
        return None
    witness: Assignment = dict(solution)
    for var in phi.variables:
        witness.setdefault(var, Fraction(0))
    return witness


def check_witness(phi: BijunctiveFormula, a: Assignment) -> bool:
    """True iff `a` covers every variable and satisfies every bend."""
    if any(var not in a for var in phi.variables):
        return False
    try:
        return all(eval_bend(bend, a) for bend in phi.bends)
    except UnassignedVariableError:
        return False


# --- bounded handcuff-refutation search -----------------------------------
#
# A handcuff piece used in a refutation is the homomorphic image of a walk in
# the formula's constraint graph, and conversely every walk lifts to a piece
# whose interior points are fresh, pairwise-distinct variables.  The search
# therefore enumerates walks, not abstract handcuffs.  Walks with equal
# residues are interchangeable (unsatisfiability depends only on residues),
# so each (endpoints, residue) class keeps one shortest witness walk.

_START = "~s"
_END = "~e"
_MID = "~m"

Step = Tuple[int, str, str]  # bend index, from-variable, to-variable


@dataclass(frozen=True)
class _Piece:
    """One walk class: its residue over placeholder endpoints, one witness."""

    residue: Bend
    steps: Tuple[Step, ...]


def _no_tag(slot: str) -> None:
    return None


def _extend(acc: Bend, edge: Bend, v: str, w: str, close: bool) -> Bend:
    """Residue of a walk extended by one step v->w (w folds onto the start when closing)."""
    left = rename_bend(acc, {_END: _MID})
    right = rename_bend(edge, {v: _MID, w: _START if close else _END})
    bend, _ = compose_core(left, _no_tag, right, _no_tag, _START, _MID, _START if close else _END)
    return bend


def _cycle_value_set(residue: Bend) -> IntervalSet:
    return residue.value_set(_START)


def _pieces_conflict(set_c: IntervalSet, res_p: Bend, set_d: IntervalSet, joined: bool) -> bool:
    """Whether res_C(x) and res_P(x,y) and res_D(y) has no rational solution.

    `joined` marks the empty-path case, where x and y are the same variable.
    Exact interval reasoning; the accepted refutation is later replayed
    through the independent micro-solver route.
    """
    if joined:
        return set_c.intersect(set_d).is_empty
    if set_c.is_empty or set_d.is_empty:
        return True
    if res_p.is_top:
        return False
    if res_p.is_bottom:
        return True
    for _, payload in res_p.literals():
        if isinstance(payload, Bound):
            side = set_c if payload.var == _START else set_d
            if not side.intersect_interval(payload.interval()).is_empty:
                return False
            continue
        total = ext(0)
        attained = True
        for var, coeff in ((payload.var_x, payload.coeff_x), (payload.var_y, payload.coeff_y)):
            side = set_c if var == _START else set_d
            value, att = side.inf() if coeff > 0 else side.sup()
            total = total + value * coeff
            attained = attained and att
        if total < payload.const:
            return False
        if total == payload.const and attained and not payload.rel.is_strict:
            return False
    return True


def _walk_names(anchor: str, prefix: str, length: int, end: Optional[str] = None) -> List[str]:
    """Point names for a lifted walk: anchor, fresh interiors, end (the anchor again if None)."""
    names = [anchor] + [f"~{prefix}{k}" for k in range(1, length)]
    names.append(anchor if end is None else end)
    return names


def _lift_cycle(
    phi: BijunctiveFormula, steps: Tuple[Step, ...], anchor: str, prefix: str
) -> Tuple[Cycle, Dict[str, str]]:
    first = steps[0]
    if len(steps) == 1 and first[1] == first[2]:
        renamed = rename_bend(phi.bends[first[0]], {first[1]: anchor})
        return Cycle((anchor,), (renamed,)), {anchor: first[1]}
    names = _walk_names(anchor, prefix, len(steps))
    hom: Dict[str, str] = {}
    lifted = []
    for k, (idx, a, b) in enumerate(steps):
        lifted.append(rename_bend(phi.bends[idx], {a: names[k], b: names[k + 1]}))
        hom[names[k]] = a
        hom[names[k + 1]] = b
    return Cycle(tuple(names), tuple(lifted)), hom


def _lift_path(
    phi: BijunctiveFormula, steps: Tuple[Step, ...], start: str, end: str
) -> Tuple[Path, Dict[str, str]]:
    if not steps:
        return Path((start,), ()), {}
    names = _walk_names(start, "p", len(steps), end=end)
    hom: Dict[str, str] = {}
    lifted = []
    for k, (idx, a, b) in enumerate(steps):
        lifted.append(rename_bend(phi.bends[idx], {a: names[k], b: names[k + 1]}))
        hom[names[k]] = a
        hom[names[k + 1]] = b
    return Path(tuple(names), tuple(lifted)), hom


def _assemble(
    phi: BijunctiveFormula,
    x: str,
    y: str,
    piece_c: _Piece,
    piece_p: _Piece,
    piece_d: _Piece,
) -> HandcuffRefutation:
    anchor_x = "~x"
    anchor_y = anchor_x if x == y else "~y"
    cycle_c, hom_c = _lift_cycle(phi, piece_c.steps, anchor_x, "c")
    path_p, hom_p = _lift_path(phi, piece_p.steps, anchor_x, anchor_y)
    cycle_d, hom_d = _lift_cycle(phi, piece_d.steps, anchor_y, "d")
    hom = {anchor_x: x, anchor_y: y}
    hom.update(hom_c)
    hom.update(hom_p)
    hom.update(hom_d)
    handcuff = Handcuff(cycle_c, path_p, cycle_d)
    if not handcuff_unsat(handcuff):
        raise RuntimeError("internal: residue search and handcuff replay disagree")
    return HandcuffRefutation(handcuff, tuple(sorted(hom.items())))


def find_handcuff_refutation(
    phi: BijunctiveFormula,
    *,
    max_vars: int = 6,
    max_piece_len: Optional[int] = None,
    state_budget: int = 20000,
    check_budget: int = 2_000_000,
    parallel: bool = False,
) -> Optional[HandcuffRefutation]:
    """The smallest bounded handcuff refutation of phi, or None if exhausted.

    Enumerates cycle and path residues by dynamic programming over walks of
    length at most max_piece_len (default: the variable count, which bounds
    the pieces of some refutation whenever one exists at all), then scans
    candidate (C, P, D) triples by total size, then by anchor variable
    indices.  Raises BudgetExceededError when phi has more than `max_vars`
    variables or the state or candidate counts overflow their budgets.
    """
    variables = phi.variables
    if not variables:
        return None
    if phi.n > max_vars:
        raise BudgetExceededError(
            f"{phi.n} variables exceed the handcuff search budget of {max_vars}"
        )
    limit = phi.n if max_piece_len is None else max_piece_len

    for i, bend in enumerate(phi.bends):
        if bend.is_bottom:
            steps = ((i, variables[0], variables[0]),)
            piece = _Piece(bend, steps)
            return _assemble(phi, variables[0], variables[0], piece, _Piece(Bend.always_true(), ()), piece)

    # cycles[u]: residue -> _Piece; paths[(u, v)]: residue -> _Piece (u == v kept
    # for extension only, never offered as a handcuff path).
    cycles: Dict[str, Dict[Bend, _Piece]] = {v: {} for v in variables}
    paths: Dict[Tuple[str, str], Dict[Bend, _Piece]] = {}
    states = 0

    def charge() -> None:
        nonlocal states
        states += 1
        if states > state_budget:
            raise BudgetExceededError(
                f"handcuff search exceeded the state budget of {state_budget}"
            )

    edges_from: Dict[str, List[Tuple[int, str, Bend]]] = {v: [] for v in variables}
    for i, bend in enumerate(phi.bends):
        vars_ = bend.vars()
        if len(vars_) == 1:
            u = vars_[0]
            residue = rename_bend(bend, {u: _START})
            if residue not in cycles[u]:
                charge()
                cycles[u][residue] = _Piece(residue, ((i, u, u),))
        elif len(vars_) == 2:
            a, b = vars_
            for f, t in ((a, b), (b, a)):
                edges_from[f].append((i, t, bend))

    frontier: Dict[Tuple[str, str], List[_Piece]] = {}
    for u in variables:
        for i, t, bend in edges_from[u]:
            residue = rename_bend(bend, {u: _START, t: _END})
            bucket = paths.setdefault((u, t), {})
            if residue not in bucket:
                charge()
                piece = _Piece(residue, ((i, u, t),))
                bucket[residue] = piece
                frontier.setdefault((u, t), []).append(piece)

    for length in range(1, limit):
        if not frontier:
            break
        next_frontier: Dict[Tuple[str, str], List[_Piece]] = {}
        for (u, v), pieces in frontier.items():
            for piece in pieces:
                for i, w, bend in edges_from[v]:
                    if w == u:
                        closed = _extend(piece.residue, bend, v, u, close=True)
                        if closed not in cycles[u]:
                            charge()
                            cycles[u][closed] = _Piece(closed, piece.steps + ((i, v, u),))
                    extended = _extend(piece.residue, bend, v, w, close=False)
                    bucket = paths.setdefault((u, w), {})
                    if extended not in bucket:
                        charge()
                        new_piece = _Piece(extended, piece.steps + ((i, v, w),))
                        bucket[extended] = new_piece
                        next_frontier.setdefault((u, w), []).append(new_piece)
        frontier = next_frontier

    # Candidate scan, smallest total size first, then anchor indices, then
    # discovery order within each piece list.
    cycle_buckets: Dict[str, Dict[int, List[Tuple[IntervalSet, _Piece]]]] = {}
    for u, table in cycles.items():
        buckets = cycle_buckets.setdefault(u, {})
        for residue, piece in table.items():
            buckets.setdefault(len(piece.steps), []).append((_cycle_value_set(residue), piece))
    path_buckets: Dict[Tuple[str, str], Dict[int, List[_Piece]]] = {}
    for (u, v), table in paths.items():
        if u == v:
            continue
        buckets = path_buckets.setdefault((u, v), {})
        for piece in table.values():
            buckets.setdefault(len(piece.steps), []).append(piece)
    empty_path = _Piece(Bend.always_true(), ())

    checks = 0
    max_total = 3 * limit
    for total in range(2, max_total + 1):
        for x in variables:
            c_buckets = cycle_buckets.get(x)
            if not c_buckets:
                continue
            for y in variables:
                d_buckets = cycle_buckets.get(y)
                if not d_buckets:
                    continue
                if x == y:
                    p_buckets: Dict[int, List[_Piece]] = {0: [empty_path]}
                else:
                    p_buckets = path_buckets.get((x, y), {})
                    if not p_buckets:
                        continue
                cell: List[Tuple[IntervalSet, _Piece, _Piece, IntervalSet, _Piece]] = []
                for size_c in sorted(c_buckets):
                    for size_p in sorted(p_buckets):
                        size_d = total - size_c - size_p
                        if size_d < 1 or size_d not in d_buckets:
                            continue
                        for set_c, piece_c in c_buckets[size_c]:
                            for piece_p in p_buckets[size_p]:
                                for set_d, piece_d in d_buckets[size_d]:
                                    cell.append((set_c, piece_c, piece_p, set_d, piece_d))
                checks += len(cell)
                if checks > check_budget:
                    raise BudgetExceededError(
                        f"handcuff search exceeded the candidate budget of {check_budget}"
                    )
                joined = x == y
                if parallel and len(cell) > 256:
                    with ThreadPoolExecutor() as pool:
                        verdicts = list(
                            pool.map(
                                lambda c: _pieces_conflict(c[0], c[2].residue, c[3], joined),
                                cell,
                            )
                        )
                else:
                    verdicts = None
                for k, (set_c, piece_c, piece_p, set_d, piece_d) in enumerate(cell):
                    hit = (
                        verdicts[k]
                        if verdicts is not None
                        else _pieces_conflict(set_c, piece_p.residue, set_d, joined)
                    )
                    if hit:
                        return _assemble(phi, x, y, piece_c, piece_p, piece_d)
    return None


def refutation_problem(cert: HandcuffRefutation, phi: BijunctiveFormula) -> Optional[str]:
    """None if the refutation is valid for phi, else a diagnostic reason.

    Handcuff shape is enforced by construction; this replays the remaining
    conditions: the homomorphism lands on conjuncts of phi, and the handcuff
    is unsatisfiable (decided through the micro-solver route, independent of
    the search that produced the certificate).
    """
    handcuff = cert.handcuff
    hom = cert.hom_map()
    known = set(phi.variables)
    for walk in (handcuff.cycle_c, handcuff.path_p, handcuff.cycle_d):
        for point in walk.points:
            if point not in hom:
                return f"the homomorphism does not map {point}"
            if hom[point] not in known:
                return f"the homomorphism sends {point} to unknown variable {hom[point]}"
    for bend, _, _ in handcuff.bends():
        image = rename_bend(bend, hom)
        if image not in phi.bends:
            return f"the image {image} of step {bend} is not a conjunct"
    if not handcuff_unsat(handcuff):
        return "the handcuff is satisfiable"
    return None


def check_refutation(cert: HandcuffRefutation, phi: BijunctiveFormula) -> bool:
    """True iff the homomorphism lands in phi and the handcuff is unsatisfiable."""
    return refutation_problem(cert, phi) is None


def handcuff_consistent_bounded(phi: BijunctiveFormula, **search_kwargs) -> bool:
    """Whether phi and every single-bound-literal strengthening resist the search.

    Replaces each bend, one at a time, by each of its bound literals alone
    and re-runs the bounded refutation search on the modified formula (and on
    phi itself).  True iff no refutation is found anywhere.
    """
    if find_handcuff_refutation(phi, **search_kwargs) is not None:
        return False
    for i, bend in enumerate(phi.bends):
        for _, payload in bend.literals():
            if not isinstance(payload, Bound):
                continue
            single = normalize_bend([linsolve.from_bound(payload)])
            if single == bend:
                continue
            variant = phi.replace_bend(i, single)
            if find_handcuff_refutation(variant, **search_kwargs) is not None:
                return False
    return True


# --- certificate serialization ---------------------------------------------


def _walk_lines(label: str, walk) -> List[str]:
    lines = [label, "  points: " + " ".join(walk.points)]
    lines.extend(f"  step: {bend}" for bend in walk.steps)
    return lines


def format_certificate(cert: Certificate) -> str:
    """Line-oriented text form; refutations list pieces, homomorphism, residues."""
    if cert.kind == WITNESS:
        assert cert.witness is not None
        body = [f"{var} = {value}" for var, value in sorted(cert.witness.items())]
        return "\n".join(["witness", *body, "end"]) + "\n"
    if cert.kind == TRACE:
        return "\n".join(["trace", cert.trace or "", "end"]) + "\n"
    assert cert.refutation is not None
    handcuff = cert.refutation.handcuff
    lines = ["handcuff-refutation"]
    lines.extend(_walk_lines("cycle C", handcuff.cycle_c))
    lines.extend(_walk_lines("path P", handcuff.path_p))
    lines.extend(_walk_lines("cycle D", handcuff.cycle_d))
    lines.append("hom")
    for u, target in cert.refutation.hom:
        lines.append(f"  h({u}) = {target}")
    lines.append("residues")
    lines.append(f"  C: {cycle_residue(handcuff.cycle_c).bend}")
    lines.append(f"  P: {path_residue(handcuff.path_p).bend}")
    lines.append(f"  D: {cycle_residue(handcuff.cycle_d).bend}")
    lines.append("end")
    return "\n".join(lines) + "\n"


def _walk_jsonable(walk) -> Dict[str, object]:
    return {"points": list(walk.points), "steps": [str(bend) for bend in walk.steps]}


def certificate_to_jsonable(cert: Certificate) -> Dict[str, object]:
    """JSON-ready dict; all rationals rendered as strings, never floats."""
    if cert.kind == WITNESS:
        assert cert.witness is not None
        return {
            "kind": WITNESS,
            "assignment": {var: str(value) for var, value in sorted(cert.witness.items())},
        }
    if cert.kind == TRACE:
        return {"kind": TRACE, "trace": cert.trace or ""}
    assert cert.refutation is not None
    handcuff = cert.refutation.handcuff
    return {
        "kind": REFUTATION,
        "cycle_c": _walk_jsonable(handcuff.cycle_c),
        "path_p": _walk_jsonable(handcuff.path_p),
        "cycle_d": _walk_jsonable(handcuff.cycle_d),
        "hom": {u: target for u, target in cert.refutation.hom},
        "residues": {
            "C": str(cycle_residue(handcuff.cycle_c).bend),
            "P": str(path_residue(handcuff.path_p).bend),
            "D": str(cycle_residue(handcuff.cycle_d).bend),
        },
    }
