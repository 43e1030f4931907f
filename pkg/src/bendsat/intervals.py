"""Exact intervals over the rationals and finite unions of them.

These are the workhorse for all one-dimensional reasoning: bound conjunction,
strongest-bound projection, redundancy tests, and witness picking.  Endpoints
are ExtendedRational; each endpoint carries a strictness flag.  An interval
denotes a subset of Q (the infinities are never members).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Tuple

from .errors import EmptyIntervalError
from .rationals import NEG_INF, POS_INF, ExtendedRational, ext


@dataclass(frozen=True)
class Interval:
    """The set { t in Q : lo (<|<=) t (<|<=) hi }.

    Infinite endpoints always carry strict=False (the flag is meaningless
    there); construct through ``make`` to get that canonicalization plus a
    single canonical empty interval.
    """

    lo: ExtendedRational
    lo_strict: bool
    hi: ExtendedRational
    hi_strict: bool

    @staticmethod
    def make(lo: ExtendedRational, lo_strict: bool, hi: ExtendedRational, hi_strict: bool) -> "Interval":
        lo = ext(lo)
        hi = ext(hi)
        if not lo.is_finite:
            lo_strict = False
        if not hi.is_finite:
            hi_strict = False
        ivl = Interval(lo, lo_strict, hi, hi_strict)
        if ivl._computed_empty():
            return EMPTY
        return ivl

    @staticmethod
    def full() -> "Interval":
        return FULL

    @staticmethod
    def empty() -> "Interval":
        return EMPTY

    @staticmethod
    def point(value: Fraction) -> "Interval":
        v = ext(value)
        return Interval.make(v, False, v, False)

    @staticmethod
    def at_least(value: ExtendedRational, strict: bool = False) -> "Interval":
        return Interval.make(value, strict, POS_INF, False)

    @staticmethod
    def at_most(value: ExtendedRational, strict: bool = False) -> "Interval":
        return Interval.make(NEG_INF, False, value, strict)

    def _computed_empty(self) -> bool:
        # No rational is >= +inf or <= -inf.
        if self.lo.is_pos_inf or self.hi.is_neg_inf:
            return True
        if self.lo > self.hi:
            return True
        if self.lo == self.hi:
            if not self.lo.is_finite:
                return True
            return self.lo_strict or self.hi_strict
        return False

    @property
    def is_empty(self) -> bool:
        return self == EMPTY

    @property
    def is_full(self) -> bool:
        return self.lo.is_neg_inf and self.hi.is_pos_inf

    def contains(self, value: Fraction) -> bool:
        v = ext(value)
        if self.lo.is_finite or self.lo.is_pos_inf:
            if v < self.lo or (v == self.lo and self.lo_strict):
                return False
        if self.hi.is_finite or self.hi.is_neg_inf:
            if v > self.hi or (v == self.hi and self.hi_strict):
                return False
        return not self.is_empty

    def intersect(self, other: "Interval") -> "Interval":
        if self.is_empty or other.is_empty:
            return EMPTY
        if self.lo > other.lo:
            lo, lo_strict = self.lo, self.lo_strict
        elif other.lo > self.lo:
            lo, lo_strict = other.lo, other.lo_strict
        else:
            lo, lo_strict = self.lo, self.lo_strict or other.lo_strict
        if self.hi < other.hi:
            hi, hi_strict = self.hi, self.hi_strict
        elif other.hi < self.hi:
            hi, hi_strict = other.hi, other.hi_strict
        else:
            hi, hi_strict = self.hi, self.hi_strict or other.hi_strict
        return Interval.make(lo, lo_strict, hi, hi_strict)

    def overlaps_or_touches(self, other: "Interval") -> bool:
        """True when the union of the two intervals is one interval."""
        if self.is_empty or other.is_empty:
            return True
        a, b = (self, other) if (self.lo, self.lo_strict) <= (other.lo, other.lo_strict) else (other, self)
        if a.hi > b.lo:
            return True
        if a.hi < b.lo:
            return False
        # Touching endpoints glue unless both exclude the point.
        return not (a.hi_strict and b.lo_strict)

    def hull(self, other: "Interval") -> "Interval":
        if self.is_empty:
            return other
        if other.is_empty:
            return self
        if self.lo < other.lo:
            lo, lo_strict = self.lo, self.lo_strict
        elif other.lo < self.lo:
            lo, lo_strict = other.lo, other.lo_strict
        else:
            lo, lo_strict = self.lo, self.lo_strict and other.lo_strict
        if self.hi > other.hi:
            hi, hi_strict = self.hi, self.hi_strict
        elif other.hi > self.hi:
            hi, hi_strict = other.hi, other.hi_strict
        else:
            hi, hi_strict = self.hi, self.hi_strict and other.hi_strict
        return Interval.make(lo, lo_strict, hi, hi_strict)

    def inf(self) -> Tuple[ExtendedRational, bool]:
        """(infimum, attained)."""
        if self.is_empty:
            raise EmptyIntervalError("inf of empty interval")
        return self.lo, self.lo.is_finite and not self.lo_strict

    def sup(self) -> Tuple[ExtendedRational, bool]:
        if self.is_empty:
            raise EmptyIntervalError("sup of empty interval")
        return self.hi, self.hi.is_finite and not self.hi_strict

    def pick(self) -> Fraction:
        """A deterministic rational member.

        Closed finite endpoints are preferred (leftmost first), then the
        midpoint of two finite endpoints, endpoint +-1 for open half-infinite
        intervals, and 0 for the full line.
        """
        if self.is_empty:
            raise EmptyIntervalError("pick from empty interval")
        if self.lo.is_finite and not self.lo_strict:
            return self.lo.finite()
        if self.hi.is_finite and not self.hi_strict:
            return self.hi.finite()
        if self.lo.is_finite and self.hi.is_finite:
            return (self.lo.finite() + self.hi.finite()) / 2
        if self.lo.is_finite:
            return self.lo.finite() + 1
        if self.hi.is_finite:
            return self.hi.finite() - 1
        return Fraction(0)

    def __str__(self) -> str:
        if self.is_empty:
            return "{}"
        left = "(" if (self.lo_strict or not self.lo.is_finite) else "["
        right = ")" if (self.hi_strict or not self.hi.is_finite) else "]"
        return f"{left}{self.lo}, {self.hi}{right}"


EMPTY = Interval(POS_INF, False, NEG_INF, False)
FULL = Interval(NEG_INF, False, POS_INF, False)


class IntervalSet:
    """A finite union of disjoint, non-touching, nonempty intervals.

    Immutable; construct with ``of``.  Parts are kept sorted by lower
    endpoint, which makes equality structural.
    """

    __slots__ = ("parts",)

    def __init__(self, parts: Tuple[Interval, ...]) -> None:
        object.__setattr__(self, "parts", parts)

    def __setattr__(self, name: str, value: object) -> None:
        raise AttributeError("IntervalSet is immutable")

    @staticmethod
    def of(intervals: Iterable[Interval]) -> "IntervalSet":
        todo = [i for i in intervals if not i.is_empty]
        todo.sort(key=lambda i: (i.lo.sign, i.lo.value, i.lo_strict))
        merged: list[Interval] = []
        for ivl in todo:
            if merged and merged[-1].overlaps_or_touches(ivl):
                merged[-1] = merged[-1].hull(ivl)
            else:
                merged.append(ivl)
        return IntervalSet(tuple(merged))

    @staticmethod
    def empty() -> "IntervalSet":
        return IntervalSet(())

    @staticmethod
    def full() -> "IntervalSet":
        return IntervalSet((FULL,))

    @property
    def is_empty(self) -> bool:
        return not self.parts

    @property
    def is_full(self) -> bool:
        return len(self.parts) == 1 and self.parts[0].is_full

    def contains(self, value: Fraction) -> bool:
        return any(p.contains(value) for p in self.parts)

    def intersect(self, other: "IntervalSet") -> "IntervalSet":
        out = []
        for a in self.parts:
            for b in other.parts:
                c = a.intersect(b)
                if not c.is_empty:
                    out.append(c)
        return IntervalSet.of(out)

    def intersect_interval(self, ivl: Interval) -> "IntervalSet":
        return self.intersect(IntervalSet.of([ivl]))

    def union(self, other: "IntervalSet") -> "IntervalSet":
        return IntervalSet.of(list(self.parts) + list(other.parts))

    def complement(self) -> "IntervalSet":
        """Q minus this set."""
        out: list[Interval] = []
        prev_hi: Optional[Tuple[ExtendedRational, bool]] = (NEG_INF, False)
        for part in self.parts:
            lo, lo_strict = prev_hi
            # The gap before this part: endpoint open iff the part includes it.
            gap = Interval.make(lo, not lo_strict, part.lo, not part.lo_strict)
            if not gap.is_empty:
                out.append(gap)
            prev_hi = (part.hi, part.hi_strict)
            if part.hi.is_pos_inf:
                prev_hi = None
                break
        if prev_hi is not None:
            hi, hi_strict = prev_hi
            gap = Interval.make(hi, not hi_strict, POS_INF, False)
            if not gap.is_empty:
                out.append(gap)
        # Gap endpoints at infinity get normalized by make; NEG_INF start of the
        # first gap must not be flipped to strict, which make also handles.
        return IntervalSet.of(out)

    def subset_of(self, other: "IntervalSet") -> bool:
        return self.intersect(other.complement()).is_empty

    def inf(self) -> Tuple[ExtendedRational, bool]:
        if self.is_empty:
            raise EmptyIntervalError("inf of empty set")
        return self.parts[0].inf()

    def sup(self) -> Tuple[ExtendedRational, bool]:
        if self.is_empty:
            raise EmptyIntervalError("sup of empty set")
        return self.parts[-1].sup()

    def pick(self) -> Fraction:
        if self.is_empty:
            raise EmptyIntervalError("pick from empty set")
        return self.parts[0].pick()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IntervalSet):
            return NotImplemented
        return self.parts == other.parts

    def __hash__(self) -> int:
        return hash(self.parts)

    def __str__(self) -> str:
        if self.is_empty:
            return "{}"
        return " u ".join(str(p) for p in self.parts)


def scaled_extreme(
    box: Interval, slope: Fraction, offset: Fraction, want_max: bool
) -> Tuple[ExtendedRational, bool]:
    """Extreme of u -> slope*u + offset over a nonempty interval.

    Returns (value, attained).  Used to project a TVPI literal through a box.
    """
    if box.is_empty:
        raise EmptyIntervalError("extreme over empty interval")
    if slope == 0:
        return ext(offset), True
    # Positive slope: max at hi, min at lo; negative slope swaps them.
    use_hi = want_max == (slope > 0)
    end, strict = (box.hi, box.hi_strict) if use_hi else (box.lo, box.lo_strict)
    if not end.is_finite:
        return (POS_INF if want_max else NEG_INF), False
    return ext(end.finite() * slope + offset), not strict
