"""Query/gate cost accounting.

The emulation never builds circuits, but every subroutine charges the cost
its quantum counterpart would incur.  All closed-form charges use leading
constant 1 and natural logarithms; log arguments are floored at ``e`` so a
vanishing failure budget never produces a negative charge.

Counter semantics:

* ``queries_uh``          -- invocations of the base matrix oracle (and its
                             adjoint), accumulated bottom-up: each emulated
                             circuit run of an encoding charges its
                             ``queries_per_use``.
* ``queries_state_prep``  -- invocations of random state-preparation
                             circuits.
* ``elementary_gates``    -- closed-form total gate costs.  A composed
                             subroutine charges its own closed-form product
                             and suppresses the inner charges it subsumes,
                             so the counter never double-counts.
* ``max_qubits``          -- high-water mark, merged by max.
* ``classical_samples``   -- actual classical randomness consumed (Monte
                             Carlo samples, random bits for state prep).
                             This is the one counter that reflects what the
                             emulation really did rather than a formula.
"""

from __future__ import annotations

import math
import threading

KEYS = (
    "queries_uh",
    "queries_state_prep",
    "elementary_gates",
    "max_qubits",
    "classical_samples",
)


def log1(x: float) -> float:
    """Natural log floored at 1 (i.e. ln of max(x, e))."""
    return max(math.log(x), 1.0) if x > 0 else 1.0


class CostLedger:
    """Monotone counters of theoretical charges, safe to share across threads."""

    def __init__(self):
        self._lock = threading.Lock()
        self._counts = {k: 0 for k in KEYS}

    def charge(self, kind: str, amount) -> None:
        if kind not in self._counts:
            raise KeyError(f"unknown ledger counter {kind!r}")
        if amount < 0 or not math.isfinite(float(amount)):
            raise ValueError(f"charge amount must be finite and >= 0, got {amount!r}")
        units = int(math.ceil(amount))
        with self._lock:
            if kind == "max_qubits":
                self._counts[kind] = max(self._counts[kind], units)
            else:
                self._counts[kind] += units

    def merge(self, other: "CostLedger") -> None:
        snap = other.report()
        with self._lock:
            for k, v in snap.items():
                if k == "max_qubits":
                    self._counts[k] = max(self._counts[k], v)
                else:
                    self._counts[k] += v

    def report(self) -> dict:
        with self._lock:
            return dict(self._counts)

    def __getitem__(self, kind: str) -> int:
        with self._lock:
            return self._counts[kind]

    def __repr__(self):
        return f"CostLedger({self.report()})"
