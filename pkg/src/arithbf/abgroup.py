"""Finite abelian groups in invariant-factor form.

A group is stored as a divisibility chain ``d1 | d2 | ... | dk`` with every
``di >= 2``; the trivial group is the empty chain. Elements are coordinate
tuples against the canonical generators. Everything here is exact integer
arithmetic on Python ints.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import gcd, prod
from typing import Iterator, Sequence


def _divisibility_chain(factors: Sequence[int]) -> bool:
    return all(b % a == 0 for a, b in zip(factors, factors[1:]))


@dataclass(frozen=True)
class InvariantFactors:
    """Finite abelian group ``Z/d1 + ... + Z/dk`` with ``d1 | d2 | ... | dk``."""

    factors: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(int(d) for d in self.factors))
        if any(d < 2 for d in self.factors):
            raise ValueError(
                f"invariant factors must be >= 2 (trivial group is []), got {list(self.factors)}"
            )
        if not _divisibility_chain(self.factors):
            raise ValueError(f"invariant factors {list(self.factors)} do not form a divisibility chain")

    @classmethod
    def from_cyclic_orders(cls, orders: Sequence[int]) -> "InvariantFactors":
        """Canonical form of ``Z/m1 + ... + Z/mr`` for arbitrary positive ``mi``."""
        orders = [int(m) for m in orders]
        if any(m < 1 for m in orders):
            raise ValueError(f"cyclic orders must be positive, got {orders}")
        r = len(orders)
        rel = [[orders[i] if i == j else 0 for j in range(r)] for i in range(r)]
        group, free_rank = group_from_relations(rel, r)
        assert free_rank == 0
        return group

    @property
    def order(self) -> int:
        return prod(self.factors)

    @property
    def rank(self) -> int:
        return len(self.factors)

    @property
    def exponent(self) -> int:
        return self.factors[-1] if self.factors else 1

    def is_trivial(self) -> bool:
        return not self.factors

    def zero(self) -> "AbElement":
        return AbElement(self, (0,) * self.rank)

    def element(self, coords: Sequence[int]) -> "AbElement":
        if len(coords) != self.rank:
            raise ValueError(f"expected {self.rank} coordinates, got {len(coords)}")
        return AbElement(self, tuple(int(x) % d for x, d in zip(coords, self.factors)))

    def generators(self) -> list["AbElement"]:
        return [
            AbElement(self, tuple(1 if i == j else 0 for j in range(self.rank)))
            for i in range(self.rank)
        ]

    def elements(self) -> Iterator["AbElement"]:
        """All elements, lexicographic in coordinates."""
        for coords in itertools.product(*(range(d) for d in self.factors)):
            yield AbElement(self, coords)

    def element_order(self, x: "AbElement") -> int:
        m = 1
        for xi, d in zip(x.coords, self.factors):
            o = d // gcd(xi, d)
            m = m * o // gcd(m, o)
        return m

    def __str__(self):
        return "trivial" if not self.factors else " x ".join(f"Z/{d}" for d in self.factors)


@dataclass(frozen=True)
class AbElement:
    group: InvariantFactors
    coords: tuple[int, ...]

    def __post_init__(self):
        if len(self.coords) != self.group.rank:
            raise ValueError("coordinate vector does not match the group rank")
        if any(not 0 <= x < d for x, d in zip(self.coords, self.group.factors)):
            raise ValueError(f"coordinates {self.coords} not reduced for {self.group}")

    def _check(self, other):
        if not isinstance(other, AbElement) or other.group != self.group:
            raise ValueError("elements belong to different groups")

    def __add__(self, other: "AbElement") -> "AbElement":
        self._check(other)
        f = self.group.factors
        return AbElement(self.group, tuple((x + y) % d for x, y, d in zip(self.coords, other.coords, f)))

    def __neg__(self) -> "AbElement":
        return AbElement(self.group, tuple(-x % d for x, d in zip(self.coords, self.group.factors)))

    def __sub__(self, other: "AbElement") -> "AbElement":
        return self + (-other)

    def __mul__(self, k: int) -> "AbElement":
        return AbElement(self.group, tuple(k * x % d for x, d in zip(self.coords, self.group.factors)))

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not any(self.coords)


@dataclass(frozen=True)
class GroupHom:
    """Homomorphism given by the images of the canonical generators of ``source``."""

    source: InvariantFactors
    target: InvariantFactors
    images: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.images) != self.source.rank:
            raise ValueError("need one image per source generator")
        for d, img in zip(self.source.factors, self.images):
            y = self.target.element(img)
            if not (y * d).is_zero():
                raise ValueError(f"image {img} of a generator of order {d} is not {d}-torsion")
        object.__setattr__(
            self, "images", tuple(self.target.element(img).coords for img in self.images)
        )

    def __call__(self, x: AbElement) -> AbElement:
        if x.group != self.source:
            raise ValueError("argument is not in the source group")
        out = [0] * self.target.rank
        for xi, img in zip(x.coords, self.images):
            if xi:
                for j, yj in enumerate(img):
                    out[j] += xi * yj
        return self.target.element(out)

    def kernel_size(self) -> int:
        return sum(1 for x in self.source.elements() if self(x).is_zero())

    def is_injective(self) -> bool:
        return self.kernel_size() == 1


@dataclass(frozen=True)
class CyclicHom:
    """A homomorphism ``G -> Z/n``; ``images[i]`` is the image of the i-th generator."""

    group: InvariantFactors
    n: int
    images: tuple[int, ...]

    def __post_init__(self):
        if len(self.images) != self.group.rank:
            raise ValueError("need one image per generator")
        for d, h in zip(self.group.factors, self.images):
            if not 0 <= h < self.n or (d * h) % self.n:
                raise ValueError(f"image {h} is not well defined on Z/{d} -> Z/{self.n}")


# --------------------------------------------------------------------------
# Smith normal form


def _identity(k: int) -> list[list[int]]:
    return [[int(i == j) for j in range(k)] for i in range(k)]


def smith_normal_form(M: Sequence[Sequence[int]], ncols: int | None = None):
    """Smith normal form of an integer matrix.

    Returns ``(U, S, V)`` with ``U @ M @ V == S``, ``U`` and ``V`` unimodular and
    the diagonal of ``S`` a nonnegative divisibility chain. Pivots are chosen as
    the nonzero entry of smallest absolute value in the remaining block.

    ``ncols`` is only needed when ``M`` has no rows.
    """
    S = [[int(x) for x in row] for row in M]
    r = len(S)
    c = len(S[0]) if r else (ncols or 0)
    if any(len(row) != c for row in S):
        raise ValueError("ragged matrix")
    U = _identity(r)
    V = _identity(c)

    def swap_rows(i, j):
        S[i], S[j] = S[j], S[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for mat in (S, V):
            for row in mat:
                row[i], row[j] = row[j], row[i]

    def add_row(src, dst, q):  # row_dst -= q * row_src
        for mat in (S, U):
            rs, rd = mat[src], mat[dst]
            for k in range(len(rd)):
                rd[k] -= q * rs[k]

    def add_col(src, dst, q):  # col_dst -= q * col_src
        for mat in (S, V):
            for row in mat:
                row[dst] -= q * row[src]

    t = 0
    while t < min(r, c):
        nonzero = [(abs(S[i][j]), i, j) for i in range(t, r) for j in range(t, c) if S[i][j]]
        if not nonzero:
            break
        _, pi, pj = min(nonzero)
        swap_rows(t, pi)
        swap_cols(t, pj)
        while True:
            p = S[t][t]
            dirty = False
            for i in range(t + 1, r):
                if S[i][t]:
                    add_row(t, i, S[i][t] // p)
                    dirty = dirty or S[i][t] != 0
            for j in range(t + 1, c):
                if S[t][j]:
                    add_col(t, j, S[t][j] // p)
                    dirty = dirty or S[t][j] != 0
            if not dirty:
                # pivot must divide the whole remaining block
                bad = next(
                    ((i, j) for i in range(t + 1, r) for j in range(t + 1, c) if S[i][j] % p),
                    None,
                )
                if bad is None:
                    break
                add_row(bad[0], t, -1)
                continue
            nonzero = [(abs(S[i][t]), i, t) for i in range(t, r) if S[i][t]]
            nonzero += [(abs(S[t][j]), t, j) for j in range(t, c) if S[t][j]]
            _, pi, pj = min(nonzero)
            swap_rows(t, pi)
            swap_cols(t, pj)
        if S[t][t] < 0:
            for k in range(c):
                S[t][k] = -S[t][k]
            U[t] = [-x for x in U[t]]
        t += 1
    return U, S, V


def group_from_relations(relations: Sequence[Sequence[int]], ngens: int | None = None):
    """Structure of ``Z^g / (row lattice of relations)``.

    Returns ``(InvariantFactors, free_rank)``; only the torsion part goes into the
    invariant factors and trivial factors are dropped.
    """
    g = ngens if ngens is not None else (len(relations[0]) if relations else 0)
    _, S, _ = smith_normal_form(relations, g)
    diag = [S[i][i] for i in range(min(len(S), g))]
    torsion = [d for d in diag if d > 1]
    free_rank = g - sum(1 for d in diag if d != 0)
    return InvariantFactors(tuple(torsion)), free_rank


# --------------------------------------------------------------------------
# subgroups and quotients attached to n


def torsion_subgroup(G: InvariantFactors, n: int):
    """``G[n]`` together with its embedding into ``G``.

    ``G[n] = sum Z/gcd(di, n)``; the generator of the ``Z/gcd(di, n)`` summand maps
    to ``(di / gcd(di, n)) * e_i``.
    """
    if n < 1:
        raise ValueError("n must be positive")
    kept = [i for i, d in enumerate(G.factors) if gcd(d, n) > 1]
    T = InvariantFactors(tuple(gcd(G.factors[i], n) for i in kept))
    images = []
    for i in kept:
        img = [0] * G.rank
        img[i] = G.factors[i] // gcd(G.factors[i], n)
        images.append(tuple(img))
    return T, GroupHom(T, G, tuple(images))


def quotient_mod_n(G: InvariantFactors, n: int):
    """``G / nG`` together with the projection ``G -> G/nG``."""
    if n < 1:
        raise ValueError("n must be positive")
    kept = [i for i, d in enumerate(G.factors) if gcd(d, n) > 1]
    Q = InvariantFactors(tuple(gcd(G.factors[i], n) for i in kept))
    images = []
    for i in range(G.rank):
        img = [0] * Q.rank
        if i in kept:
            img[kept.index(i)] = 1
        images.append(tuple(img))
    return Q, GroupHom(G, Q, tuple(images))


def n_times_torsion(G: InvariantFactors, n: int) -> InvariantFactors:
    """The subgroup ``n * G[n^2]`` (it sits inside ``G[n]``)."""
    if n < 1:
        raise ValueError("n must be positive")
    return InvariantFactors.from_cyclic_orders(
        [gcd(d, n * n) // gcd(d, n) for d in G.factors]
    )


# --------------------------------------------------------------------------
# characters


def enumerate_homs_to_cyclic(G: InvariantFactors, n: int) -> Iterator[CyclicHom]:
    """Every homomorphism ``G -> Z/n`` once, lexicographic in the image vector."""
    if n < 1:
        raise ValueError("n must be positive")
    steps = [n // gcd(d, n) for d in G.factors]
    for images in itertools.product(*(range(0, n, s) for s in steps)):
        yield CyclicHom(G, n, images)


def count_homs_to_cyclic(G: InvariantFactors, n: int) -> int:
    return prod(gcd(d, n) for d in G.factors)


def eval_hom(phi: CyclicHom, x: AbElement) -> int:
    if x.group != phi.group:
        raise ValueError(f"element of {x.group} given to a hom defined on {phi.group}")
    return sum(h * xi for h, xi in zip(phi.images, x.coords)) % phi.n


def embeds_into(H: InvariantFactors, G: InvariantFactors) -> bool:
    """Whether some injective homomorphism ``H -> G`` exists.

    Holds iff, aligning both chains at the top, each factor of ``H`` divides the
    matching factor of ``G`` (equivalently, every p-primary partition of ``H`` is
    dominated part by part).
    """
    if H.rank > G.rank:
        return False
    return all(g % h == 0 for h, g in zip(reversed(H.factors), reversed(G.factors)))
