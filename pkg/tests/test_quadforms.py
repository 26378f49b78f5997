import itertools
from math import gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from arithbf.abgroup import InvariantFactors
from arithbf.quadforms import (
    DiscriminantError,
    QuadForm,
    class_group,
    compose,
    enumerate_reduced,
    is_fundamental,
    power,
    principal_form,
    reduce,
    unit_data,
)

from conftest import order_profile

FUNDAMENTAL = [D for D in range(-1, -800, -1) if is_fundamental(D)]


def transform(f, p, q, r, s):
    """f(px + qy, rx + sy)."""
    a, b, c = f.a, f.b, f.c
    return QuadForm(
        a * p * p + b * p * r + c * r * r,
        2 * a * p * q + b * (p * s + q * r) + 2 * c * r * s,
        a * q * q + b * q * s + c * s * s,
    )


SL2_SMALL = [
    m for m in itertools.product(range(-3, 4), repeat=4) if m[0] * m[3] - m[1] * m[2] == 1
]


def reduced_neighbours(f):
    """Reduced forms reachable from f by small SL2(Z) substitutions (possibly empty)."""
    return {g for g in (transform(f, *m) for m in SL2_SMALL) if g.a > 0 and g.is_reduced()}


def dirichlet_oracle(f, g):
    """Composition by the textbook recipe: move f, g to coprime leading coefficients,
    then search for the common middle coefficient B directly."""
    D = f.discriminant
    for m1 in SL2_SMALL:
        f1 = transform(f, *m1)
        if f1.a <= 0:
            continue
        for m2 in SL2_SMALL:
            g1 = transform(g, *m2)
            if g1.a <= 0 or gcd(f1.a, g1.a) != 1:
                continue
            A = f1.a * g1.a
            for B in range(2 * A):
                if (B - f1.b) % (2 * f1.a) == 0 and (B - g1.b) % (2 * g1.a) == 0 and (B * B - D) % (4 * A) == 0:
                    return reduce(QuadForm(A, B, (B * B - D) // (4 * A)))
    raise AssertionError("no coprime representatives found")


# -- discriminants -------------------------------------------------------------


@pytest.mark.parametrize("D", [-3, -4, -7, -8, -15, -20, -23, -24, -39, -47, -71, -84])
def test_fundamental(D):
    assert is_fundamental(D)


@pytest.mark.parametrize("D", [-1, -2, -12, -16, -27, -28, -36, -5, 0, 5])
def test_not_fundamental(D):
    assert not is_fundamental(D)
    with pytest.raises(DiscriminantError):
        enumerate_reduced(D)


# -- reduction -----------------------------------------------------------------


def test_reduce_examples():
    assert reduce(QuadForm(1, 1, 6)) == QuadForm(1, 1, 6)
    assert reduce(QuadForm(6, 1, 1)) == QuadForm(1, 1, 6)
    assert reduce(QuadForm(2, -1, 3)) == QuadForm(2, -1, 3)
    assert reduced_neighbours(QuadForm(6, 1, 1)) == {QuadForm(1, 1, 6)}


def test_reduce_rejects_bad_input():
    with pytest.raises(ValueError, match="primitive"):
        reduce(QuadForm(2, 2, 2))
    with pytest.raises(ValueError, match="definite"):
        reduce(QuadForm(1, 3, 1))
    with pytest.raises(ValueError, match="positive"):
        reduce(QuadForm(-1, 1, -6))


@settings(max_examples=300, deadline=None)
@given(st.sampled_from(FUNDAMENTAL), st.data())
def test_reduce_properties(D, data):
    forms = enumerate_reduced(D)
    f = data.draw(st.sampled_from(forms))
    m = data.draw(st.sampled_from(SL2_SMALL))
    g = transform(f, *m)
    r = reduce(g)
    assert r == f  # equivalent forms reduce to the same reduced representative
    assert reduce(r) == r
    assert r.discriminant == D and r.is_primitive()


# -- enumeration ---------------------------------------------------------------


def test_enumerate_examples():
    assert enumerate_reduced(-4) == [QuadForm(1, 0, 1)]
    assert set(enumerate_reduced(-23)) == {QuadForm(1, 1, 6), QuadForm(2, 1, 3), QuadForm(2, -1, 3)}
    assert len(enumerate_reduced(-39)) == 4
    assert enumerate_reduced(-7) == [QuadForm(1, 1, 2)]


def test_enumerate_against_exhaustive_scan():
    # oracle: all (a, b, c) with c bounded by |D|, filtered by the reduced conditions
    for D in FUNDAMENTAL[:60]:
        brute = set()
        for a in range(1, -D + 1):
            for b in range(-a, a + 1):
                if (b * b - D) % (4 * a) == 0:
                    f = QuadForm(a, b, (b * b - D) // (4 * a))
                    if f.is_reduced() and f.is_primitive():
                        brute.add(f)
        assert set(enumerate_reduced(D)) == brute


def test_known_class_numbers():
    known = {-3: 1, -4: 1, -7: 1, -8: 1, -11: 1, -15: 2, -20: 2, -23: 3, -31: 3, -39: 4,
             -47: 5, -56: 4, -71: 7, -84: 4, -104: 6, -163: 1, -199: 9, -231: 12}
    for D, h in known.items():
        assert len(enumerate_reduced(D)) == h


# -- composition -----------------------------------------------------------------


def test_compose_examples():
    D = -23
    one = principal_form(D)
    f, fi = QuadForm(2, 1, 3), QuadForm(2, -1, 3)
    assert compose(one, f) == f
    assert compose(f, fi) == one
    assert compose(f, f) == fi


def test_compose_rejects_mismatch():
    with pytest.raises(ValueError, match="mismatch"):
        compose(QuadForm(1, 1, 6), QuadForm(1, 0, 1))


@pytest.mark.parametrize("D", [-23, -39, -56, -84, -104, -120, -231, -420, -455])
def test_compose_matches_dirichlet_oracle(D):
    forms = enumerate_reduced(D)
    for f, g in itertools.product(forms, repeat=2):
        assert compose(f, g) == dirichlet_oracle(f, g)


# -- class group -------------------------------------------------------------------


def test_class_group_examples():
    assert class_group(-4).structure == InvariantFactors()
    assert class_group(-23).structure == InvariantFactors((3,))
    assert class_group(-39).structure == InvariantFactors((4,))
    assert class_group(-84).structure == InvariantFactors((2, 2))
    assert class_group(-3299).structure == InvariantFactors((3, 9))


def element_orders(D):
    one = principal_form(D)
    out = []
    for f in enumerate_reduced(D):
        k, g = 1, f
        while g != one:
            g, k = compose(g, f), k + 1
        out.append(k)
    return out


@pytest.mark.parametrize("D", [-39, -84, -231, -420, -3299, -840, -1555])
def test_structure_by_order_profile(D):
    # counting elements of order dividing k determines a finite abelian group
    orders = element_orders(D)
    h = len(orders)
    ks = [k for k in range(1, h + 1) if h % k == 0]
    G = class_group(D).structure
    expected = {k: 1 for k in ks}
    for k in ks:
        for d in G.factors:
            expected[k] *= gcd(d, k)
    assert order_profile(orders, ks) == expected


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([D for D in range(-3, -3000, -1) if is_fundamental(D)]), st.data())
def test_dlog_is_isomorphism(D, data):
    cg = class_group(D)
    forms = list(cg.dlog)
    assert len(set(cg.dlog.values())) == len(forms) == cg.order == len(enumerate_reduced(D))
    f = data.draw(st.sampled_from(forms))
    g = data.draw(st.sampled_from(forms))
    assert cg.dlog[compose(f, g)] == cg.dlog[f] + cg.dlog[g]
    assert cg.dlog[principal_form(D)].is_zero()
    for gen, x in zip(cg.generators, cg.structure.generators()):
        assert cg.dlog[gen] == x


def test_group_laws_small_discriminants():
    for D in FUNDAMENTAL:
        forms = enumerate_reduced(D)
        one = principal_form(D)
        table = {(f, g): compose(f, g) for f in forms for g in forms}
        assert set(table.values()) <= set(forms)
        for f in forms:
            assert table[one, f] == f and table[f, one] == f
            assert table[f, f.inverse()] == one
        if len(forms) <= 12:
            for f, g, k in itertools.product(forms, repeat=3):
                assert table[table[f, g], k] == table[f, table[g, k]]


def test_power_matches_repeated_composition():
    f = QuadForm(2, -1, 5)  # order 4 in Cl(-39)
    assert power(f, 4) == principal_form(-39)
    assert power(f, 2) == compose(f, f)
    assert power(f, -1) == f.inverse()


def test_class_group_bound():
    with pytest.raises(ValueError, match="bound"):
        class_group(-3299, max_class_number=10)


@pytest.mark.parametrize("D, w", [(-3, 6), (-4, 4), (-23, 2), (-7, 2), (-8, 2)])
def test_unit_data(D, w):
    assert unit_data(D) == w
