"""Path integral for the multiplicative group over the integers of a totally imaginary field.

The moduli space is ``H^1(X, Z/n) x H^1(X, mu_n)``. The first factor is
realized as ``Hom(Cl_F, Z/n)`` (unramified class field theory; no real places).
The second is an extension of ``Cl_F[n]`` by ``O^x/(O^x)^n`` and is carried as
pairs ``(u, t)``: the BF functional only sees ``t``, so the extension class
never enters. The Bockstein sends ``(u, t)`` to the image of ``t`` in
``Cl_F/n``, and the cup product into ``(1/n)Z/Z`` is the evaluation pairing
``Hom(Cl, Z/n) x Cl/n -> Z/n``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import gcd, prod
from typing import Iterator, NamedTuple, Optional

from .abgroup import (
    AbElement,
    CyclicHom,
    InvariantFactors,
    count_homs_to_cyclic,
    enumerate_homs_to_cyclic,
    eval_hom,
    n_times_torsion,
    quotient_mod_n,
    torsion_subgroup,
)
from .pathsum import (
    DEFAULT_PAIR_BUDGET,
    PathIntegralReport,
    check_budget,
    evaluate,
    pairing_phases,
)


@dataclass(frozen=True)
class FieldData:
    """Arithmetic invariants of a totally imaginary number field of degree ``2r``.

    ``unit_rank`` is the free rank ``r - 1`` of the unit group and ``w`` the
    number of roots of unity. Nothing here is checked against an actual field.
    """

    label: str
    cl: InvariantFactors
    unit_rank: int
    w: int
    degree: int

    def __post_init__(self):
        if not isinstance(self.cl, InvariantFactors):
            object.__setattr__(self, "cl", InvariantFactors(tuple(self.cl)))
        if self.degree < 2 or self.degree % 2:
            raise ValueError(f"degree must be even and >= 2 for a totally imaginary field, got {self.degree}")
        if self.unit_rank != self.degree // 2 - 1:
            raise ValueError(
                f"unit_rank {self.unit_rank} inconsistent with degree {self.degree} "
                f"(expected {self.degree // 2 - 1})"
            )
        if self.w < 2 or self.w % 2:
            raise ValueError(f"roots-of-unity order must be even and >= 2, got {self.w}")

    @classmethod
    def from_discriminant(cls, D: int, max_class_number: Optional[int] = None) -> "FieldData":
        from . import quadforms

        kwargs = {} if max_class_number is None else {"max_class_number": max_class_number}
        cg = quadforms.class_group(D, **kwargs)
        return cls(f"Q(sqrt({D}))", cg.structure, 0, quadforms.unit_data(D), 2)


@dataclass(frozen=True)
class GMInstance:
    field: FieldData
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")

    @property
    def cl(self) -> InvariantFactors:
        return self.field.cl

    @cached_property
    def cl_torsion(self):
        """``(Cl[n], embedding into Cl)``."""
        return torsion_subgroup(self.cl, self.n)

    @cached_property
    def cl_mod_n(self):
        """``(Cl/n, projection from Cl)``."""
        return quotient_mod_n(self.cl, self.n)

    @property
    def unit_quotient_order(self) -> int:
        """``|O^x / (O^x)^n| = gcd(w, n) * n^unit_rank``."""
        return gcd(self.field.w, self.n) * self.n ** self.field.unit_rank

    def homs(self) -> Iterator[CyclicHom]:
        return enumerate_homs_to_cyclic(self.cl, self.n)

    def h1_mu(self) -> Iterator["H1MuElement"]:
        T = self.cl_torsion[0]
        for t in T.elements():
            for u in range(self.unit_quotient_order):
                yield H1MuElement(u, t)


@dataclass(frozen=True)
class H1MuElement:
    """Class in ``H^1(X, mu_n)``: ``u`` indexes ``O^x/(O^x)^n``, ``t`` lies in ``Cl[n]``."""

    u: int
    t: AbElement


def cohomology_orders(inst: GMInstance) -> tuple[int, int, int, int]:
    """Orders of ``H^i(X, mu_n)`` for ``i = 0..3``; higher degrees vanish."""
    n = inst.n
    h0 = gcd(inst.field.w, n)
    h1 = inst.cl_torsion[0].order * inst.unit_quotient_order
    h2 = inst.cl_mod_n[0].order
    return h0, h1, h2, n


def _check_b(inst: GMInstance, b: H1MuElement):
    if b.t.group != inst.cl_torsion[0]:
        raise ValueError("t must be an element of Cl[n]")
    if not 0 <= b.u < inst.unit_quotient_order:
        raise ValueError("unit index out of range")


def bockstein_gm(inst: GMInstance, b: H1MuElement) -> AbElement:
    """``(u, t) -> t -> image of t in Cl/n``. The unit part is the kernel of the first step."""
    _check_b(inst, b)
    _, embed = inst.cl_torsion
    _, project = inst.cl_mod_n
    return project(embed(b.t))


def _lift(inst: GMInstance, y: AbElement) -> AbElement:
    # Cl/n keeps the factors with gcd(d_i, n) > 1; lift residues back into those slots
    Q, _ = inst.cl_mod_n
    coords = [0] * inst.cl.rank
    kept = [i for i, d in enumerate(inst.cl.factors) if gcd(d, inst.n) > 1]
    for i, x in zip(kept, y.coords):
        coords[i] = x
    return inst.cl.element(coords)


def bf_value_gm(inst: GMInstance, a: CyclicHom, b: H1MuElement) -> Fraction:
    """``BF(a, b) = a(delta b) / n`` as an element of ``[0, 1)``."""
    if a.group != inst.cl or a.n != inst.n:
        raise ValueError("a must be a homomorphism Cl -> Z/n")
    k = eval_hom(a, _lift(inst, bockstein_gm(inst, b)))
    return Fraction(k, inst.n)


class ClosedForm(NamedTuple):
    value: int
    factors: tuple[int, int, int]
    stabilized: Optional[int]


def closed_form_gm(inst: GMInstance) -> ClosedForm:
    """``|n Cl[n^2]| * |O^x/(O^x)^n| * |Cl/n|``.

    ``stabilized`` is ``|O^x/(O^x)^n| * |Cl|`` when ``Cl[n] = Cl`` and ``None``
    otherwise; in that case it equals ``value``.
    """
    n = inst.n
    ds = inst.cl.factors
    ntors = prod(gcd(d, n * n) // gcd(d, n) for d in ds)
    units = inst.unit_quotient_order
    clmod = prod(gcd(d, n) for d in ds)
    stabilized = units * inst.cl.order if all(n % d == 0 for d in ds) else None
    return ClosedForm(ntors * units * clmod, (ntors, units, clmod), stabilized)


def etale_count(inst: GMInstance) -> int:
    """Number of unramified ``Z/n``-algebras that embed in a ``Z/n^2``-algebra.

    Obtained by dividing the path integral by ``|Cl[n]| * |O^x/(O^x)^n|``, which
    leaves ``|n Cl[n^2]|`` because ``|Cl/n| = |Cl[n]|``.
    """
    return n_times_torsion(inst.cl, inst.n).order


def pair_count_gm(inst: GMInstance) -> int:
    return count_homs_to_cyclic(inst.cl, inst.n) * cohomology_orders(inst)[1]


def path_integral_gm(
    inst: GMInstance,
    mode: str = "both",
    shortcut: bool = True,
    jobs: int = 1,
    budget: int = DEFAULT_PAIR_BUDGET,
) -> PathIntegralReport:
    """Sum ``exp(2 pi i BF(a, b))`` over the moduli space.

    ``mode`` is ``"brute"``, ``"closed"`` or ``"both"``. With ``shortcut`` the
    unit coordinate is folded in as a multiplicity (BF does not depend on it);
    without it every unit index is enumerated separately.
    """
    if mode not in ("brute", "closed", "both"):
        raise ValueError(f"unknown mode {mode!r}")
    n = inst.n
    pairs = pair_count_gm(inst)
    closed = closed_form_gm(inst)
    report = PathIntegralReport(
        n=n,
        pair_count=pairs,
        closed_form_value=closed.value if mode != "brute" else None,
        factors=closed.factors,
    )
    report.extra["stabilized_value"] = closed.stabilized
    report.extra["cohomology_orders"] = cohomology_orders(inst)
    report.extra["etale_count"] = etale_count(inst)
    if mode == "closed":
        return report

    check_budget(pairs, budget)
    T = inst.cl_torsion[0]
    # a-side: image vectors of every hom; b-side: lift of delta(t) reduced mod n
    left = [a.images for a in inst.homs()]
    right = [
        tuple(x % n for x in _lift(inst, bockstein_gm(inst, H1MuElement(0, t))).coords)
        for t in T.elements()
    ]
    units = inst.unit_quotient_order
    if shortcut:
        pv = pairing_phases(n, left, right, jobs)
        pv = type(pv)(n, tuple(c * units for c in pv.counts))
    else:
        pv = None
        for u in range(units):
            right_u = [
                tuple(x % n for x in _lift(inst, bockstein_gm(inst, H1MuElement(u, t))).coords)
                for t in T.elements()
            ]
            part = pairing_phases(n, left, right_u, jobs)
            pv = part if pv is None else pv + part
    assert pv.total == pairs
    report.phase_vector = pv
    report.brute_force_value = evaluate(pv)
    if mode == "both":
        report.match = report.brute_force_value == report.closed_form_value
    return report
