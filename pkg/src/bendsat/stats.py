"""Global operation counters and number-size tracking.

The solver's complexity guarantees are phrased in arithmetic operations and in
the bit-size of intermediate rationals.  Hot paths report here; tests snapshot
the counters around a run.  Thread-safe so parallel probes can report too.
"""

from __future__ import annotations

import threading
from fractions import Fraction
from typing import Dict

_lock = threading.Lock()
_counters: Dict[str, int] = {}
_max_bits = 0


def bump(name: str, amount: int = 1) -> None:
    with _lock:
        _counters[name] = _counters.get(name, 0) + amount


def note_fraction(value: Fraction) -> None:
    """Record the bit-size of an intermediate rational."""
    global _max_bits
    bits = value.numerator.bit_length() + value.denominator.bit_length()
    if bits > _max_bits:
        with _lock:
            if bits > _max_bits:
                _max_bits = bits


def reset() -> None:
    global _max_bits
    with _lock:
        _counters.clear()
        _max_bits = 0


def snapshot() -> Dict[str, int]:
    with _lock:
        out = dict(_counters)
        out["max_bits"] = _max_bits
        return out
