"""Exact sums of roots of unity.

A path integral is accumulated as a :class:`PhaseVector` (how many pairs
landed on each phase ``k/n``) and evaluated in ``Z[zeta_n]`` by reduction
modulo the cyclotomic polynomial. Floating point is only used for display.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence


@dataclass(frozen=True)
class IntPolynomial:
    """Integer polynomial, coefficients lowest degree first, no trailing zeros."""

    coeffs: tuple[int, ...] = ()

    def __post_init__(self):
        c = [int(x) for x in self.coeffs]
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1  # zero polynomial has degree -1

    def __add__(self, other: "IntPolynomial") -> "IntPolynomial":
        a, b = self.coeffs, other.coeffs
        m = max(len(a), len(b))
        return IntPolynomial(tuple(
            (a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(m)
        ))

    def __neg__(self) -> "IntPolynomial":
        return IntPolynomial(tuple(-x for x in self.coeffs))

    def __sub__(self, other: "IntPolynomial") -> "IntPolynomial":
        return self + (-other)

    def __mul__(self, other: "IntPolynomial") -> "IntPolynomial":
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return IntPolynomial()
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return IntPolynomial(tuple(out))

    def divmod_monic(self, divisor: "IntPolynomial"):
        """Quotient and remainder by a monic divisor; stays inside Z[x]."""
        d = divisor.coeffs
        if not d or d[-1] != 1:
            raise ValueError("divisor must be monic")
        rem = list(self.coeffs)
        k = len(d) - 1
        quot = [0] * max(len(rem) - k, 0)
        for i in range(len(rem) - 1, k - 1, -1):
            q = rem[i]
            if q:
                quot[i - k] = q
                for j in range(k + 1):
                    rem[i - k + j] -= q * d[j]
        return IntPolynomial(tuple(quot)), IntPolynomial(tuple(rem[:k]))

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc


def x_power_minus_one(n: int) -> IntPolynomial:
    return IntPolynomial((-1,) + (0,) * (n - 1) + (1,))


def divisors(n: int) -> list[int]:
    small = [d for d in range(1, int(n**0.5) + 1) if n % d == 0]
    return sorted(set(small + [n // d for d in small]))


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> IntPolynomial:
    """``Phi_n``, obtained by dividing ``x^n - 1`` by ``Phi_d`` for the proper divisors ``d``."""
    if n < 1:
        raise ValueError("n must be positive")
    p = x_power_minus_one(n)
    for d in divisors(n)[:-1]:
        p, r = p.divmod_monic(cyclotomic_polynomial(d))
        assert not r.coeffs, "x^n - 1 not divisible by a lower cyclotomic factor"
    return p


@dataclass(frozen=True)
class PhaseVector:
    """Multiset of phases ``k/n``: ``counts[k]`` pairs landed on ``exp(2 pi i k/n)``."""

    n: int
    counts: tuple[int, ...]

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be positive")
        object.__setattr__(self, "counts", tuple(int(c) for c in self.counts))
        if len(self.counts) != self.n:
            raise ValueError(f"expected {self.n} counts, got {len(self.counts)}")
        if any(c < 0 for c in self.counts):
            raise ValueError("counts must be nonnegative")

    @classmethod
    def zeros(cls, n: int) -> "PhaseVector":
        return cls(n, (0,) * n)

    @property
    def total(self) -> int:
        return sum(self.counts)

    def __add__(self, other: "PhaseVector") -> "PhaseVector":
        if other.n != self.n:
            raise ValueError("cannot merge phase vectors of different moduli")
        return PhaseVector(self.n, tuple(a + b for a, b in zip(self.counts, other.counts)))


def phase_sum_as_integer(p: PhaseVector) -> int | None:
    """Exact value of ``sum c_k zeta_n^k`` if it is a rational integer, else ``None``.

    The polynomial ``sum c_k x^k`` is reduced modulo ``Phi_n``; the sum is an
    integer exactly when the remainder is constant, and that constant is the value.
    """
    _, rem = IntPolynomial(p.counts).divmod_monic(cyclotomic_polynomial(p.n))
    if rem.degree <= 0:
        return rem.coeffs[0] if rem.coeffs else 0
    return None


def phase_sum_float(p: PhaseVector) -> complex:
    # display only; verdicts never use this
    return sum(c * cmath.exp(2j * cmath.pi * k / p.n) for k, c in enumerate(p.counts) if c)


def phase_vector_from_residues(n: int, residues: Sequence[int]) -> PhaseVector:
    counts = [0] * n
    for k in residues:
        counts[k % n] += 1
    return PhaseVector(n, tuple(counts))
