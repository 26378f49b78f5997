"""Brute-force accumulation of pairing phases, shared by both engines."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .cyclo import PhaseVector, phase_sum_as_integer, phase_sum_float

DEFAULT_PAIR_BUDGET = 10**8
_CHUNK_CELLS = 1 << 22


class BudgetExceeded(RuntimeError):
    pass


class PhaseSumError(ArithmeticError):
    """The accumulated phase sum is not an integer; the enumeration is broken."""


@dataclass
class PathIntegralReport:
    n: int
    pair_count: int
    closed_form_value: Optional[int]
    factors: tuple[int, ...]
    brute_force_value: Optional[int] = None
    phase_vector: Optional[PhaseVector] = None
    match: Optional[bool] = None
    extra: dict = field(default_factory=dict)

    @property
    def float_value(self) -> Optional[complex]:
        return None if self.phase_vector is None else phase_sum_float(self.phase_vector)


def check_budget(pair_count: int, budget: int):
    if pair_count > budget:
        raise BudgetExceeded(f"{pair_count} pairs exceed the budget of {budget}")


def _chunk_counts(n, left, right):
    phases = (left @ right.T) % n
    return np.bincount(phases.ravel(), minlength=n)


def pairing_phases(n: int, left, right, jobs: int = 1) -> PhaseVector:
    """Phase vector of ``sum_i left[a, i] * right[b, i] mod n`` over every row pair ``(a, b)``.

    The right-hand rows are split into blocks; blocks run on ``jobs`` threads and
    their counts are merged by addition, so the result does not depend on ``jobs``.
    """
    left = np.asarray(left, dtype=np.int64).reshape(len(left), -1)
    right = np.asarray(right, dtype=np.int64).reshape(len(right), -1)
    if left.shape[1] != right.shape[1]:
        raise ValueError("pairing dimension mismatch")
    if left.shape[1] == 0:
        counts = [0] * n
        counts[0] = len(left) * len(right)
        return PhaseVector(n, tuple(counts))
    rows = max(1, _CHUNK_CELLS // max(1, len(left)))
    per_job = -(-len(right) // max(1, jobs))
    rows = max(1, min(rows, per_job))
    blocks = [right[i:i + rows] for i in range(0, len(right), rows)]
    if jobs > 1 and len(blocks) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(lambda blk: _chunk_counts(n, left, blk), blocks))
    else:
        parts = [_chunk_counts(n, left, blk) for blk in blocks]
    total = [0] * n
    for part in parts:
        for k, c in enumerate(part.tolist()):
            total[k] += c
    return PhaseVector(n, tuple(total))


def evaluate(pv: PhaseVector) -> int:
    value = phase_sum_as_integer(pv)
    if value is None:
        raise PhaseSumError(f"phase sum {pv.counts} (mod {pv.n}) is not an integer")
    return value
