"""Acceptance battery: one check per exit criterion.

Every check returns a :class:`CheckResult`; ``scope="quick"`` shrinks the
parameter ranges, ``scope="full"`` runs them at their stated size. Oracles
here (element scans, coset enumeration) are deliberately naive and do not
share code paths with the closed forms they check.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, replace
from math import gcd
from typing import Callable

from .abgroup import (
    InvariantFactors,
    count_homs_to_cyclic,
    enumerate_homs_to_cyclic,
    eval_hom,
    n_times_torsion,
    quotient_mod_n,
    torsion_subgroup,
)
from .bf_av import AVModel, build_av_instance, closed_form_av, path_integral_av, random_model, with_delta
from .bf_gm import FieldData, GMInstance, closed_form_gm, etale_count, path_integral_gm
from .cyclo import (
    IntPolynomial,
    PhaseVector,
    cyclotomic_polynomial,
    divisors,
    phase_sum_as_integer,
    phase_sum_float,
    phase_vector_from_residues,
    x_power_minus_one,
)
from .quadforms import class_group, compose, enumerate_reduced, is_fundamental, principal_form
from .reports import av_report, gm_report, mask_timing, to_json

NATIVE_DISCS = (-3, -4, -7, -15, -23, -39, -47, -71)
SPOT_VALUES = {(-23, 3): 3, (-4, 2): 2, (-3, 6): 6, (-39, 2): 8, (-47, 5): 5}
AV_MODULI = (2, 3, 4, 5, 6, 8, 9)

# fixed shapes for the delta-invariance sweep: (n, mw_a, mw_b, sha_a, sha_b)
AV_SHAPES = (
    (2, [], [], [2, 2], [2, 2]),
    (3, [], [], [3, 3], [3, 3]),
    (4, [4], [2], [2, 2], [4]),
    (4, [2], [2], [4], [2, 2]),
    (6, [3], [2], [6], [6]),
    (8, [4], [], [2, 8], [4, 4]),
    (9, [3], [9], [9], [3, 3]),
    (5, [5], [5], [5, 5], [5, 5]),
    (6, [], [], [2, 6], [2, 6]),
    (4, [2, 4], [2], [2, 4], [2, 4]),
)


@dataclass
class CheckResult:
    name: str
    ok: bool
    detail: str
    elapsed: float


def _field(D: int, cache={}) -> FieldData:
    if D not in cache:
        cache[D] = FieldData.from_discriminant(D)
    return cache[D]


def _random_group(rng: random.Random, max_order: int = 1000) -> InvariantFactors:
    orders = []
    remaining = max_order
    for _ in range(rng.randint(0, 4)):
        if remaining < 2:
            break
        m = rng.randint(2, min(remaining, 60))
        orders.append(m)
        remaining //= m
    return InvariantFactors.from_cyclic_orders(orders)


def _scan_multiples(G: InvariantFactors, n: int) -> set:
    return {(x * n).coords for x in G.elements()}


def _scan_torsion(G: InvariantFactors, n: int) -> list:
    return [x for x in G.elements() if (x * n).is_zero()]


# --------------------------------------------------------------------------


def check_gm_native(scope: str = "full") -> tuple[bool, str]:
    worst = 0.0
    for D in NATIVE_DISCS:
        field = _field(D)
        for n in range(1, 13):
            t0 = time.perf_counter()
            rep = path_integral_gm(GMInstance(field, n))
            dt = time.perf_counter() - t0
            worst = max(worst, dt)
            if rep.brute_force_value != rep.closed_form_value:
                return False, f"D={D} n={n}: brute {rep.brute_force_value} != closed {rep.closed_form_value}"
            if dt >= 1.0:
                return False, f"D={D} n={n} took {dt:.2f}s"
    for (D, n), want in SPOT_VALUES.items():
        got = path_integral_gm(GMInstance(_field(D), n)).brute_force_value
        if got != want:
            return False, f"spot value D={D} n={n}: {got} != {want}"
    return True, f"{len(NATIVE_DISCS) * 12} cases, slowest {worst * 1e3:.1f} ms"


def check_stabilization(scope: str = "full") -> tuple[bool, str]:
    field = _field(-23)
    for n in range(3, 31, 3):
        t0 = time.perf_counter()
        rep = path_integral_gm(GMInstance(field, n))
        dt = time.perf_counter() - t0
        want = gcd(2, n) * 3
        stab = closed_form_gm(GMInstance(field, n)).stabilized
        if not (rep.brute_force_value == rep.closed_form_value == stab == want) or dt >= 1.0:
            return False, f"n={n}: brute {rep.brute_force_value}, closed {rep.closed_form_value}, want {want}"
    return True, "D=-23, n in 3..30 step 3"


def check_etale_count(scope: str = "full") -> tuple[bool, str]:
    for D in NATIVE_DISCS:
        for n in range(1, 13):
            inst = GMInstance(_field(D), n)
            cl_n = torsion_subgroup(inst.cl, n)[0].order
            lhs = closed_form_gm(inst).value
            rhs = cl_n * inst.unit_quotient_order * etale_count(inst)
            if lhs != rhs:
                return False, f"D={D} n={n}: {lhs} != {rhs}"
    return True, f"{len(NATIVE_DISCS) * 12} cases"


def check_av_synthetic(scope: str = "full", corrupt_pairing: bool = False) -> tuple[bool, str]:
    count = 200 if scope == "full" else 40
    sweeps = 20 if scope == "full" else 5
    shapes = AV_SHAPES if scope == "full" else AV_SHAPES[:3]
    t0 = time.perf_counter()
    for s in range(count):
        model = random_model(s, AV_MODULI[s % len(AV_MODULI)])
        inst = build_av_instance(model)
        if corrupt_pairing:
            inst = replace(inst, corrupt_pairing=True)
        rep = path_integral_av(inst)
        if rep.brute_force_value != rep.closed_form_value:
            return False, (
                f"product formula fails for seed {s}: brute {rep.brute_force_value} "
                f"!= |mw_a||mw_b||sha_a| = {rep.closed_form_value}"
            )
    for n, mwa, mwb, sa, sb in shapes:
        base = AVModel(n, mwa, mwb, sa, sb, 0)
        values = set()
        for k in range(sweeps):
            values.add(path_integral_av(build_av_instance(with_delta(base, 1000 + k))).brute_force_value)
        want = closed_form_av(base)[0]
        if values != {want}:
            return False, f"delta invariance fails for shape {(n, mwa, mwb, sa, sb)}: {sorted(values)}"
    dt = time.perf_counter() - t0
    if dt >= 60:
        return False, f"battery took {dt:.1f}s"
    return True, f"{count} random models, {len(shapes)} shapes x {sweeps} injections, {dt:.1f}s"


def check_orthogonality(scope: str = "full") -> tuple[bool, str]:
    rng = random.Random(20191)
    trials = 100 if scope == "full" else 30
    hits = 0
    for _ in range(trials):
        G = _random_group(rng)
        n = rng.randint(1, 12)
        x = G.element([rng.randrange(d) for d in G.factors])
        residues = [eval_hom(phi, x) for phi in enumerate_homs_to_cyclic(G, n)]
        total = phase_sum_as_integer(phase_vector_from_residues(n, residues))
        in_nG = x.coords in _scan_multiples(G, n)
        hits += in_nG
        want = count_homs_to_cyclic(G, n) if in_nG else 0
        if total != want:
            return False, f"G={G} n={n} x={x.coords}: sum {total}, expected {want}"
    return True, f"{trials} groups ({hits} with x in nG)"


def check_structural(scope: str = "full") -> tuple[bool, str]:
    rng = random.Random(31415)
    trials = 100 if scope == "full" else 30
    for _ in range(trials):
        G = _random_group(rng)
        n = rng.randint(1, 12)
        tors_n = _scan_torsion(G, n)
        tors_n2 = _scan_torsion(G, n * n)
        quot = G.order // len(_scan_multiples(G, n))
        n_tors = {(x * n).coords for x in tors_n2}
        if not (
            len(tors_n) == quot
            == torsion_subgroup(G, n)[0].order
            == quotient_mod_n(G, n)[0].order
        ):
            return False, f"|G[n]| != |G/nG| for G={G}, n={n}"
        if len(n_tors) * len(tors_n) != len(tors_n2) or len(n_tors) != n_times_torsion(G, n).order:
            return False, f"|nG[n^2]| |G[n]| != |G[n^2]| for G={G}, n={n}"
    return True, f"{trials} groups"


def check_quadforms(scope: str = "full") -> tuple[bool, str]:
    bound = 10**4 if scope == "full" else 2000
    t0 = time.perf_counter()
    ndisc = nassoc = 0
    for D in range(-1, -bound, -1):
        if not is_fundamental(D):
            continue
        ndisc += 1
        forms = enumerate_reduced(D)
        cg = class_group(D)
        if cg.order != len(forms):
            return False, f"D={D}: {len(forms)} reduced forms but class group order {cg.order}"
        one = principal_form(D)
        fset = set(forms)
        for f in forms:
            if compose(one, f) != f or compose(f, one) != f:
                return False, f"D={D}: identity law fails at {f}"
            if compose(f, f.inverse()) != one:
                return False, f"D={D}: inverse law fails at {f}"
        if len(forms) <= 20:
            nassoc += 1
            table = {(f, g): compose(f, g) for f in forms for g in forms}
            if not set(table.values()) <= fset:
                return False, f"D={D}: composition not closed"
            for f in forms:
                for g in forms:
                    fg = table[f, g]
                    for k in forms:
                        if table[fg, k] != table[f, table[g, k]]:
                            return False, f"D={D}: associativity fails at {f},{g},{k}"
    dt = time.perf_counter() - t0
    if dt >= 120:
        return False, f"took {dt:.1f}s"
    return True, f"{ndisc} discriminants > {-bound}, associativity on {nassoc}, {dt:.1f}s"


def check_cyclo(scope: str = "full") -> tuple[bool, str]:
    for n in range(1, 201):
        p = IntPolynomial((1,))
        for d in divisors(n):
            p = p * cyclotomic_polynomial(d)
        if p != x_power_minus_one(n):
            return False, f"product of Phi_d over d | {n} is not x^{n} - 1"
        if n > 1 and phase_sum_as_integer(PhaseVector(n, (7,) * n)) != 0:
            return False, f"uniform phase vector mod {n} does not vanish"
    rng = random.Random(4)
    trials = 1000 if scope == "full" else 200
    integers = 0
    for _ in range(trials):
        n = rng.randint(1, 24)
        counts = [rng.randint(0, 10**6) for _ in range(n)]
        if rng.random() < 0.5:
            # force an integer value: pad with a uniform layer plus a real correction
            c = rng.randint(0, 10**5)
            counts = [c] * n
            counts[0] += rng.randint(0, 10**5)
        pv = PhaseVector(n, tuple(counts))
        m = phase_sum_as_integer(pv)
        if m is not None:
            integers += 1
            z = phase_sum_float(pv)
            if abs(z - m) > 1e-6:
                return False, f"exact {m} vs float {z} for {counts} mod {n}"
    return True, f"n <= 200 product identity; {trials} random vectors ({integers} integral)"


def check_determinism(scope: str = "full") -> tuple[bool, str]:
    jobs_list = (1, 4, 16)
    gm_cases = [(D, n) for D in NATIVE_DISCS for n in range(1, 13)]
    av_count = 200 if scope == "full" else 20
    if scope != "full":
        gm_cases = gm_cases[::6]
    for D, n in gm_cases:
        outs = {to_json(mask_timing(gm_report(_field(D), n, jobs=j))) for j in jobs_list}
        if len(outs) != 1:
            return False, f"gm report for D={D} n={n} differs across --jobs"
    for s in range(av_count):
        model = random_model(s, AV_MODULI[s % len(AV_MODULI)])
        outs = {to_json(mask_timing(av_report(model, jobs=j))) for j in jobs_list}
        if len(outs) != 1:
            return False, f"av report for seed {s} differs across --jobs"
    return True, f"{len(gm_cases)} gm + {av_count} av reports identical for jobs {jobs_list}"


CHECKS: list[tuple[str, Callable]] = [
    ("1 gm_native_fields", check_gm_native),
    ("2 stabilization", check_stabilization),
    ("3 etale_count_identity", check_etale_count),
    ("4 av_synthetic_models", check_av_synthetic),
    ("5 orthogonality", check_orthogonality),
    ("6 structural_identities", check_structural),
    ("7 quadforms_group_laws", check_quadforms),
    ("8 cyclo", check_cyclo),
    ("9 determinism", check_determinism),
]


def run_check(name: str, fn: Callable, scope: str, **kwargs) -> CheckResult:
    t0 = time.perf_counter()
    try:
        ok, detail = fn(scope, **kwargs)
    except Exception as exc:  # a crashing check is a failed check
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    return CheckResult(name, ok, detail, time.perf_counter() - t0)


def run_battery(scope: str = "quick", corrupt_pairing: bool = False) -> list[CheckResult]:
    results = []
    for name, fn in CHECKS:
        kwargs = {"corrupt_pairing": True} if corrupt_pairing and fn is check_av_synthetic else {}
        results.append(run_check(name, fn, scope, **kwargs))
    return results
