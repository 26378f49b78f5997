"""Path integral for a pair of dual abelian varieties, over synthetic group models.

Nothing here touches an actual abelian variety. A model fixes four finite
n-torsion groups standing for ``A(F)/n``, ``B(F)/n``, ``Sha(A)[n]`` and
``Sha(B)[n]``; the hypotheses on Neron models, component groups and
``Sha(B)[n] = Sha(B)[n^2]`` are assumed to hold, and their consequence is
built in directly:

* ``H^1(X, A[n])`` is the split product ``A(F)/n x Sha(A)[n]`` (likewise for B);
* ``H^2(X, B[n])`` is the character group of ``H^1(X, A[n])`` with values in
  ``Z/n``, which makes the cup product the evaluation pairing (perfect, since
  everything is n-torsion);
* the Bockstein kills the ``B(F)/n`` coordinate and sends the Sha coordinate
  through an injection ``Sha(B)[n] -> H^2(X, B[n])``.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field, replace
from fractions import Fraction
from math import gcd, prod
from typing import Iterator, Optional, Union

from .abgroup import AbElement, InvariantFactors, embeds_into
from .pathsum import DEFAULT_PAIR_BUDGET, PathIntegralReport, check_budget, evaluate, pairing_phases

DeltaChoice = Union[str, int, tuple]

RANDOM_DELTA_ATTEMPTS = 1000


class ModelError(ValueError):
    pass


def _as_group(g) -> InvariantFactors:
    return g if isinstance(g, InvariantFactors) else InvariantFactors(tuple(g))


@dataclass(frozen=True)
class AVModel:
    """Synthetic data for a pair of dual abelian varieties and an integer ``n``.

    ``delta`` selects the injection ``Sha(B)[n] -> H^2(X, B[n])``:

    ``"canonical"``
        requires ``sha_b == sha_a`` and sends generator ``j`` to the dual of the
        ``j``-th generator of ``sha_a``;
    an int
        seed for a random injection;
    a matrix
        one row per generator of ``sha_b``, giving its image in dual
        coordinates. A row has one entry per generator of ``mw_a`` followed by
        one per generator of ``sha_a`` (or only the ``sha_a`` entries, the
        rest then being zero). Entry ``y`` against a summand ``Z/d`` is the
        character ``1 -> y * n/d``.

    ``label`` and ``source`` are free text for externally sourced orders; they
    are carried into reports and never verified.
    """

    n: int
    mw_a: InvariantFactors
    mw_b: InvariantFactors
    sha_a: InvariantFactors
    sha_b: InvariantFactors
    delta: DeltaChoice = "canonical"
    label: Optional[str] = None
    source: Optional[str] = None

    def __post_init__(self):
        for name in ("mw_a", "mw_b", "sha_a", "sha_b"):
            try:
                object.__setattr__(self, name, _as_group(getattr(self, name)))
            except ValueError as exc:
                raise ModelError(f"{name}: {exc}") from None
        if isinstance(self.delta, list):
            object.__setattr__(self, "delta", tuple(tuple(int(x) for x in row) for row in self.delta))
        if self.n < 2:
            raise ModelError(f"n must be >= 2, got {self.n}")
        for name in ("mw_a", "mw_b", "sha_a", "sha_b"):
            bad = [d for d in getattr(self, name).factors if self.n % d]
            if bad:
                raise ModelError(f"{name} is not {self.n}-torsion: factors {bad} do not divide n")
        if self.sha_a.order != self.sha_b.order:
            raise ModelError(
                f"|sha_a| = {self.sha_a.order} differs from |sha_b| = {self.sha_b.order}"
            )
        if isinstance(self.delta, str) and self.delta != "canonical":
            raise ModelError(f"unknown delta choice {self.delta!r}")


@dataclass(frozen=True)
class SelGroup:
    """The product ``mw x sha`` standing for a Selmer group."""

    mw: InvariantFactors
    sha: InvariantFactors

    @property
    def moduli(self) -> tuple[int, ...]:
        return self.mw.factors + self.sha.factors

    @property
    def order(self) -> int:
        return self.mw.order * self.sha.order

    def elements(self) -> Iterator["SelElement"]:
        for x in self.mw.elements():
            for y in self.sha.elements():
                yield SelElement(x, y)

    def element(self, mw, sha) -> "SelElement":
        return SelElement(self.mw.element(mw), self.sha.element(sha))


@dataclass(frozen=True)
class SelElement:
    mw: AbElement
    sha: AbElement

    @property
    def coords(self) -> tuple[int, ...]:
        return self.mw.coords + self.sha.coords

    def is_zero(self) -> bool:
        return self.mw.is_zero() and self.sha.is_zero()


@dataclass(frozen=True)
class Character:
    """A homomorphism ``sel_a -> Z/n`` in dual coordinates ``y_i`` in ``Z/d_i``."""

    moduli: tuple[int, ...]
    n: int
    coords: tuple[int, ...]

    def values(self) -> tuple[int, ...]:
        """Images of the generators in ``Z/n``."""
        return tuple(y * (self.n // d) % self.n for y, d in zip(self.coords, self.moduli))

    def __call__(self, a: SelElement) -> int:
        return sum(h * x for h, x in zip(self.values(), a.coords)) % self.n

    def is_zero(self) -> bool:
        return not any(self.coords)


@dataclass(frozen=True)
class AVInstance:
    model: AVModel
    delta_bar: tuple[tuple[int, ...], ...]
    # debug only: replaces the evaluation pairing by a degenerate one
    corrupt_pairing: bool = field(default=False, compare=False)

    @property
    def n(self) -> int:
        return self.model.n

    @property
    def sel_a(self) -> SelGroup:
        return SelGroup(self.model.mw_a, self.model.sha_a)

    @property
    def sel_b(self) -> SelGroup:
        return SelGroup(self.model.mw_b, self.model.sha_b)

    @property
    def h2b_moduli(self) -> tuple[int, ...]:
        return self.sel_a.moduli

    def h2b_elements(self) -> Iterator[Character]:
        for y in itertools.product(*(range(d) for d in self.h2b_moduli)):
            yield Character(self.h2b_moduli, self.n, y)

    def delta_bar_apply(self, s: AbElement) -> Character:
        m = self.h2b_moduli
        out = [0] * len(m)
        for x, img in zip(s.coords, self.delta_bar):
            for j, y in enumerate(img):
                out[j] += x * y
        return Character(m, self.n, tuple(v % d for v, d in zip(out, m)))


def _delta_well_defined(sha_b: InvariantFactors, moduli, images) -> bool:
    return all(
        all((e * y) % d == 0 for y, d in zip(img, moduli))
        for e, img in zip(sha_b.factors, images)
    )


def _injective(sha_b: InvariantFactors, moduli, images) -> bool:
    for s in sha_b.elements():
        if s.is_zero():
            continue
        if all(
            sum(x * img[j] for x, img in zip(s.coords, images)) % d == 0
            for j, d in enumerate(moduli)
        ):
            return False
    return True


def _random_injection(model: AVModel, moduli, seed: int):
    rng = random.Random(seed)
    for _ in range(RANDOM_DELTA_ATTEMPTS):
        images = tuple(
            tuple(rng.randrange(gcd(d, e)) * (d // gcd(d, e)) for d in moduli)
            for e in model.sha_b.factors
        )
        if _injective(model.sha_b, moduli, images):
            return images
    raise ModelError(f"no injective delta found in {RANDOM_DELTA_ATTEMPTS} random attempts")


def build_av_instance(model: AVModel) -> AVInstance:
    """Realize the model; the injection ``Sha(B)[n] -> H^2`` is built or validated here."""
    moduli = model.mw_a.factors + model.sha_a.factors
    offset = model.mw_a.rank
    if model.delta == "canonical":
        if model.sha_b != model.sha_a:
            raise ModelError(
                f"canonical delta needs sha_b equal to the dual of sha_a ({list(model.sha_a.factors)}), "
                f"got {list(model.sha_b.factors)}"
            )
        images = tuple(
            tuple(int(j == offset + i) for j in range(len(moduli)))
            for i in range(model.sha_b.rank)
        )
        return AVInstance(model, images)

    target = InvariantFactors.from_cyclic_orders(moduli)
    if not embeds_into(model.sha_b, target):
        raise ModelError(
            f"no injection of sha_b {list(model.sha_b.factors)} into H^2 = {target} exists"
        )
    if isinstance(model.delta, int):
        images = _random_injection(model, moduli, model.delta)
    else:
        rows = model.delta
        if len(rows) != model.sha_b.rank:
            raise ModelError(f"delta matrix needs {model.sha_b.rank} rows, got {len(rows)}")
        padded = []
        for row in rows:
            if len(row) == model.sha_a.rank:
                row = (0,) * offset + tuple(row)
            if len(row) != len(moduli):
                raise ModelError(
                    f"delta row {list(row)} has {len(row)} entries; expected {len(moduli)} or {model.sha_a.rank}"
                )
            padded.append(tuple(y % d for y, d in zip(row, moduli)))
        images = tuple(padded)
        if not _delta_well_defined(model.sha_b, moduli, images):
            raise ModelError("delta matrix does not define a homomorphism on sha_b")
        if not _injective(model.sha_b, moduli, images):
            raise ModelError("delta matrix is not injective")
    return AVInstance(model, images)


def bockstein_av(inst: AVInstance, b: SelElement) -> Character:
    """Kills the Mordell-Weil coordinate, applies ``delta_bar`` to the Sha coordinate."""
    if b.mw.group != inst.model.mw_b or b.sha.group != inst.model.sha_b:
        raise ValueError("b is not an element of sel_b")
    return inst.delta_bar_apply(b.sha)


def bf_value_av(inst: AVInstance, a: SelElement, b: SelElement) -> Fraction:
    if a.mw.group != inst.model.mw_a or a.sha.group != inst.model.sha_a:
        raise ValueError("a is not an element of sel_a")
    return Fraction(bockstein_av(inst, b)(a), inst.n)


def kernel_size(inst: AVInstance) -> int:
    return sum(1 for b in inst.sel_b.elements() if bockstein_av(inst, b).is_zero())


def pairing_is_perfect(inst: AVInstance) -> bool:
    """Brute-force check that ``sel_a x H^2 -> Z/n`` has trivial left and right kernels."""
    chars = list(inst.h2b_elements())
    elems = list(inst.sel_a.elements())
    if len(chars) != len(elems):
        return False
    left_ok = all(any(chi(a) for chi in chars) for a in elems if not a.is_zero())
    right_ok = all(any(chi(a) for a in elems) for chi in chars if not chi.is_zero())
    return left_ok and right_ok


def closed_form_av(model: AVModel) -> tuple[int, int]:
    """``(|A(F)/n| |B(F)/n| |Sha(A)[n]|, |B(F)/n| |A(F)/n| |Sha(B)[n]|)``."""
    a, b = model.mw_a.order, model.mw_b.order
    return a * b * model.sha_a.order, b * a * model.sha_b.order


def pair_count_av(model: AVModel) -> int:
    return model.mw_a.order * model.sha_a.order * model.mw_b.order * model.sha_b.order


def path_integral_av(
    inst: AVInstance, jobs: int = 1, budget: int = DEFAULT_PAIR_BUDGET
) -> PathIntegralReport:
    model = inst.model
    n = model.n
    pairs = pair_count_av(model)
    value, symmetric = closed_form_av(model)
    report = PathIntegralReport(
        n=n,
        pair_count=pairs,
        closed_form_value=value,
        factors=(model.mw_a.order, model.mw_b.order, model.sha_a.order),
    )
    report.extra["symmetric_closed_form_value"] = symmetric
    check_budget(pairs, budget)

    left = [a.coords for a in inst.sel_a.elements()]
    weights = [n // d for d in inst.h2b_moduli]
    if inst.corrupt_pairing:
        weights = [0 for _ in weights]
    right = [
        tuple(y * w % n for y, w in zip(bockstein_av(inst, b).coords, weights))
        for b in inst.sel_b.elements()
    ]
    pv = pairing_phases(n, left, right, jobs)
    report.phase_vector = pv
    report.brute_force_value = evaluate(pv)
    report.match = report.brute_force_value == value
    return report


def swap_roles(model: AVModel, delta: DeltaChoice = "canonical") -> AVModel:
    """The model with the A and B sides exchanged."""
    return AVModel(model.n, model.mw_b, model.mw_a, model.sha_b, model.sha_a, delta)


def with_delta(model: AVModel, delta: DeltaChoice) -> AVModel:
    return replace(model, delta=delta)


# --------------------------------------------------------------------------
# random models


def _factorize(m: int) -> dict[int, int]:
    out: dict[int, int] = {}
    p = 2
    while p * p <= m:
        while m % p == 0:
            out[p] = out.get(p, 0) + 1
            m //= p
        p += 1
    if m > 1:
        out[m] = out.get(m, 0) + 1
    return out


def _random_group(rng: random.Random, n: int, max_order: int, max_rank: int) -> InvariantFactors:
    divs = [d for d in range(2, n + 1) if n % d == 0]
    while True:
        r = rng.randint(0, max_rank)
        G = InvariantFactors.from_cyclic_orders([rng.choice(divs) for _ in range(r)])
        if G.order <= max_order:
            return G


def _random_group_of_order(rng: random.Random, n: int, order: int) -> InvariantFactors:
    """Random group of the given order and exponent dividing ``n``."""
    nf = _factorize(n)
    cyclic = []
    for p, k in _factorize(order).items():
        cap = nf.get(p, 0)
        if cap == 0:
            raise ModelError(f"order {order} has a prime {p} not dividing n = {n}")
        while k:
            part = rng.randint(1, min(cap, k))
            cyclic.append(p**part)
            k -= part
    return InvariantFactors.from_cyclic_orders(cyclic)


def random_model(
    seed: int,
    n: int,
    max_group_order: int = 100,
    max_sel_order: int = 1000,
    max_rank: int = 3,
) -> AVModel:
    """Reproducible random model: ``n``-torsion groups with ``|sha_a| = |sha_b|``.

    ``max_group_order`` bounds each of the four groups and ``max_sel_order``
    bounds both Selmer stand-ins. The delta choice is a derived random seed when
    an injection exists and ``canonical`` (with ``sha_b = sha_a``) otherwise.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    rng = random.Random(seed)
    while True:
        mw_a = _random_group(rng, n, max_group_order, max_rank)
        mw_b = _random_group(rng, n, max_group_order, max_rank)
        sha_a = _random_group(rng, n, max_group_order, max_rank)
        sha_b = _random_group_of_order(rng, n, sha_a.order)
        delta_seed = rng.randrange(2**31)
        if max(mw_a.order, mw_b.order) * sha_a.order > max_sel_order:
            continue
        target = InvariantFactors.from_cyclic_orders(mw_a.factors + sha_a.factors)
        if embeds_into(sha_b, target):
            return AVModel(n, mw_a, mw_b, sha_a, sha_b, delta_seed)
        return AVModel(n, mw_a, mw_b, sha_a, sha_a, "canonical")
