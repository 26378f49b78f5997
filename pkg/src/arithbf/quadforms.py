"""Class groups of imaginary quadratic fields via reduced binary quadratic forms.

Forms ``(a, b, c)`` stand for ``a x^2 + b xy + c y^2`` with discriminant
``b^2 - 4ac < 0`` and ``a > 0``. Composition is Dirichlet's, followed by
reduction; the class group is the group of reduced primitive forms.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd, isqrt

from .abgroup import AbElement, InvariantFactors, smith_normal_form

DEFAULT_MAX_CLASS_NUMBER = 10**4


class DiscriminantError(ValueError):
    """Raised for discriminants outside the supported (negative fundamental) range."""


def _squarefree(m: int) -> bool:
    m = abs(m)
    if m == 0:
        return False
    p = 2
    while p * p <= m:
        if m % (p * p) == 0:
            return False
        p += 1
    return True


def fundamental_failure(D: int) -> str | None:
    """Name of the first violated condition, or ``None`` if ``D`` is a negative fundamental discriminant."""
    if D >= 0:
        return f"D = {D} is not negative"
    if D % 4 == 1:
        return None if _squarefree(D) else f"D = {D} is 1 mod 4 but not squarefree"
    if D % 4 == 0:
        m = D // 4
        if m % 4 not in (2, 3):
            return f"D = {D} = 4m with m = {m} not 2 or 3 mod 4"
        if not _squarefree(m):
            return f"D = {D} = 4m with m = {m} not squarefree"
        return None
    return f"D = {D} is not 0 or 1 mod 4"


def is_fundamental(D: int) -> bool:
    return fundamental_failure(D) is None


def check_fundamental(D: int) -> int:
    reason = fundamental_failure(D)
    if reason is not None:
        raise DiscriminantError(f"not a negative fundamental discriminant: {reason}")
    return D


@dataclass(frozen=True, order=True)
class QuadForm:
    a: int
    b: int
    c: int

    @property
    def discriminant(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    def is_primitive(self) -> bool:
        return gcd(gcd(self.a, self.b), self.c) == 1

    def is_reduced(self) -> bool:
        a, b, c = self.a, self.b, self.c
        if not (abs(b) <= a <= c):
            return False
        if (abs(b) == a or a == c) and b < 0:
            return False
        return True

    def inverse(self) -> "QuadForm":
        return reduce(QuadForm(self.a, -self.b, self.c))

    def __str__(self):
        return f"({self.a}, {self.b}, {self.c})"


def principal_form(D: int) -> QuadForm:
    b = D % 2
    return QuadForm(1, b, (b * b - D) // 4)


def reduce(f: QuadForm) -> QuadForm:
    """The unique reduced form properly equivalent to a positive definite primitive ``f``."""
    a, b, c = f.a, f.b, f.c
    if f.discriminant >= 0:
        raise ValueError(f"form {f} is not definite (discriminant {f.discriminant})")
    if a <= 0:
        raise ValueError(f"form {f} is not positive definite")
    if not f.is_primitive():
        raise ValueError(f"form {f} is not primitive")
    while True:
        # normalize: -a < b <= a
        if not -a < b <= a:
            k = (a - b) // (2 * a)
            c = a * k * k + b * k + c
            b = b + 2 * a * k
        if a > c:
            a, b, c = c, -b, a
            continue
        if a == c and b < 0:
            b = -b
        return QuadForm(a, b, c)


def enumerate_reduced(D: int) -> list[QuadForm]:
    """All reduced primitive forms of a negative fundamental discriminant, sorted."""
    check_fundamental(D)
    forms = []
    for a in range(1, isqrt(-D // 3) + 1):
        for b in range(-a + 1, a + 1):
            if (b - D) % 2:
                continue
            num = b * b - D
            if num % (4 * a):
                continue
            c = num // (4 * a)
            f = QuadForm(a, b, c)
            if c >= a and f.is_reduced() and f.is_primitive():
                forms.append(f)
    return sorted(forms)


def _xgcd(a: int, b: int):
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def compose(f: QuadForm, g: QuadForm) -> QuadForm:
    """Reduced Dirichlet composition of two primitive forms of equal discriminant.

    With ``e = gcd(a1, a2, (b1 + b2)/2)`` and ``mu a1 + nu a2 + om (b1 + b2)/2 = e``,
    the united form is ``(a1 a2 / e^2, B, *)`` where
    ``B = (mu a1 b2 + nu a2 b1 + om (b1 b2 + D)/2) / e``.
    """
    D = f.discriminant
    if g.discriminant != D:
        raise ValueError(f"discriminant mismatch: {D} vs {g.discriminant}")
    a1, b1 = f.a, f.b
    a2, b2 = g.a, g.b
    s = (b1 + b2) // 2
    e1, x, y = _xgcd(a1, a2)
    e, u, om = _xgcd(e1, s)
    mu, nu = u * x, u * y
    A = a1 * a2 // (e * e)
    B = (mu * a1 * b2 + nu * a2 * b1 + om * (b1 * b2 + D) // 2) // e
    B %= 2 * A
    C = (B * B - D) // (4 * A)
    return reduce(QuadForm(A, B, C))


def power(f: QuadForm, k: int) -> QuadForm:
    D = f.discriminant
    if k < 0:
        f, k = f.inverse(), -k
    result = principal_form(D)
    base = reduce(f)
    while k:
        if k & 1:
            result = compose(result, base)
        base = compose(base, base)
        k >>= 1
    return result


def unit_data(D: int) -> int:
    """Number of roots of unity in ``Q(sqrt D)``; for imaginary quadratic fields these are all the units."""
    check_fundamental(D)
    return {-3: 6, -4: 4}.get(D, 2)


@dataclass(frozen=True)
class ClassGroup:
    D: int
    structure: InvariantFactors
    generators: tuple[QuadForm, ...]
    dlog: dict

    @property
    def order(self) -> int:
        return self.structure.order

    def form_of(self, x: AbElement) -> QuadForm:
        for f, y in self.dlog.items():
            if y == x:
                return f
        raise KeyError(x)


def class_group(D: int, max_class_number: int = DEFAULT_MAX_CLASS_NUMBER) -> ClassGroup:
    """Invariant factors of ``Cl(D)``, forms for the canonical generators, and the discrete-log table.

    Generators are picked greedily; each new generator ``g`` contributes the
    relation ``e * g = (its first power landing in the span so far)``. These
    relations are triangular with determinant ``h``, so they present the whole
    group, and the Smith form turns them into invariant factors.
    """
    forms = enumerate_reduced(D)
    h = len(forms)
    if h > max_class_number:
        raise ValueError(f"class number {h} exceeds the configured bound {max_class_number}")
    one = principal_form(D)
    span = {one: ()}  # form -> coordinates in the greedy generators
    gens: list[QuadForm] = []
    relations: list[list[int]] = []
    for f in forms:
        if f in span:
            continue
        k = len(gens)
        gens.append(f)
        power_, e = f, 1
        while power_ not in span:
            power_, e = compose(power_, f), e + 1
        rel = [-x for x in span[power_]] + [0] * (k - len(span[power_])) + [e]
        relations.append(rel)
        new_span = {}
        for g, coords in span.items():
            padded = coords + (0,) * (k - len(coords))
            cur = g
            for j in range(e):
                new_span[cur] = padded + (j,)
                cur = compose(cur, f)
        span = new_span
    k = len(gens)
    relations = [r + [0] * (k - len(r)) for r in relations]
    assert len(span) == h

    _, S, V = smith_normal_form(relations, k)
    diag = [S[i][i] for i in range(k)]
    kept = [i for i, d in enumerate(diag) if d > 1]
    structure = InvariantFactors(tuple(diag[i] for i in kept))
    assert structure.order == h
    dlog = {}
    for f, coords in span.items():
        x = list(coords) + [0] * (k - len(coords))
        y = [sum(x[i] * V[i][j] for i in range(k)) for j in range(k)]
        dlog[f] = structure.element([y[j] for j in kept])
    by_coords = {v: f for f, v in dlog.items()}
    generators = tuple(by_coords[g] for g in structure.generators())
    return ClassGroup(D, structure, generators, dlog)
