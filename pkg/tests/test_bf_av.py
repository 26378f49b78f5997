import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from arithbf.abgroup import InvariantFactors, embeds_into
from arithbf.bf_av import (
    AVModel,
    ModelError,
    bf_value_av,
    bockstein_av,
    build_av_instance,
    kernel_size,
    pairing_is_perfect,
    path_integral_av,
    random_model,
    swap_roles,
    with_delta,
)
from arithbf.cyclo import phase_sum_as_integer, phase_vector_from_residues
from arithbf.pathsum import BudgetExceeded


def scalar_path_integral(inst):
    residues = [
        int(bf_value_av(inst, a, b) * inst.n)
        for a in inst.sel_a.elements()
        for b in inst.sel_b.elements()
    ]
    return phase_sum_as_integer(phase_vector_from_residues(inst.n, residues))


# -- model validation -------------------------------------------------------------


def test_model_rejects_order_mismatch():
    with pytest.raises(ModelError, match="sha_b"):
        AVModel(2, [], [], [2], [])


def test_model_rejects_non_torsion():
    with pytest.raises(ModelError, match="torsion"):
        AVModel(2, [4], [], [], [])


def test_model_rejects_broken_chain():
    with pytest.raises(ModelError, match="mw_a"):
        AVModel(6, [3, 2], [], [], [])


def test_model_rejects_small_n():
    with pytest.raises(ModelError):
        AVModel(1, [], [], [], [])


def test_no_injection_exists():
    # Z/4 cannot embed in an exponent-2 group
    m = AVModel(4, [], [], [2, 2], [4], 0)
    with pytest.raises(ModelError, match="no injection"):
        build_av_instance(m)


def test_canonical_needs_matching_sha():
    with pytest.raises(ModelError, match="canonical"):
        build_av_instance(AVModel(4, [4], [], [2, 2], [4]))


def test_explicit_matrix_must_be_injective():
    with pytest.raises(ModelError, match="not injective"):
        build_av_instance(AVModel(3, [], [], [3, 3], [3, 3], ((1, 1), (2, 2))))


def test_explicit_matrix_must_be_homomorphism():
    # a generator of order 2 cannot go to a character of order 4
    with pytest.raises(ModelError, match="homomorphism"):
        build_av_instance(AVModel(4, [4], [], [2], [2], ((1, 0),)))


# -- construction -------------------------------------------------------------------


def test_trivial_instance():
    inst = build_av_instance(AVModel(2, [], [], [], []))
    assert inst.sel_a.order == inst.sel_b.order == 1
    assert path_integral_av(inst).brute_force_value == 1


def test_mordell_weil_only():
    inst = build_av_instance(AVModel(2, [2], [2], [], []))
    assert inst.sel_a.order == inst.sel_b.order == 2
    assert inst.delta_bar == ()
    rep = path_integral_av(inst)
    assert rep.brute_force_value == 4 and rep.phase_vector.counts == (4, 0)


def test_sha_three_three_matrix():
    inst = build_av_instance(AVModel(3, [], [], [3, 3], [3, 3], ((1, 2), (0, 1))))
    assert inst.sel_b.order == 9
    a, b, c, d = *inst.delta_bar[0], *inst.delta_bar[1]
    assert (a * d - b * c) % 3 != 0
    rep = path_integral_av(inst)
    assert rep.brute_force_value == 9 and rep.pair_count == 81


def test_short_matrix_rows_pad_mordell_weil():
    inst = build_av_instance(AVModel(2, [2], [], [2], [2], ((1,),)))
    assert inst.delta_bar == ((0, 1),)


# -- Bockstein and BF value -------------------------------------------------------------


def test_bockstein_kernel_contains_mordell_weil():
    inst = build_av_instance(AVModel(6, [3], [2, 6], [6], [6]))
    for b in inst.sel_b.elements():
        if b.sha.is_zero():
            assert bockstein_av(inst, b).is_zero()


def test_canonical_bockstein_is_dual_generator():
    inst = build_av_instance(AVModel(3, [], [], [3], [3]))
    b = inst.sel_b.element([], [1])
    a = inst.sel_a.element([], [1])
    assert bockstein_av(inst, b).coords == (1,)
    assert bf_value_av(inst, a, b) == Fraction(1, 3)


def test_bf_value_zero_cases():
    inst = build_av_instance(AVModel(4, [2], [4], [2, 4], [2, 4], 5))
    zero_a = inst.sel_a.element([0], [0, 0])
    for b in inst.sel_b.elements():
        assert bf_value_av(inst, zero_a, b) == 0
        if b.sha.is_zero():
            for a in inst.sel_a.elements():
                assert bf_value_av(inst, a, b) == 0


@pytest.mark.parametrize("seed", range(25))
def test_random_delta_kernel_is_mordell_weil(seed):
    inst = build_av_instance(AVModel(2, [2], [2, 2], [2, 2], [2, 2], seed))
    assert kernel_size(inst) == 4


# -- pairing ------------------------------------------------------------------------


@pytest.mark.parametrize(
    "model",
    [
        AVModel(2, [2], [], [2, 2], [2, 2]),
        AVModel(4, [2, 4], [], [4], [4]),
        AVModel(6, [6], [], [2, 6], [2, 6]),
        AVModel(9, [3], [], [9], [9]),
    ],
)
def test_pairing_is_perfect(model):
    assert pairing_is_perfect(build_av_instance(model))


def test_corrupted_pairing_breaks_the_identity():
    from dataclasses import replace

    inst = replace(build_av_instance(AVModel(3, [], [], [3], [3])), corrupt_pairing=True)
    rep = path_integral_av(inst)
    assert not rep.match and rep.brute_force_value == 9


# -- path integral -------------------------------------------------------------------


def test_budget():
    with pytest.raises(BudgetExceeded):
        path_integral_av(build_av_instance(AVModel(3, [3], [3], [3], [3])), budget=10)


@pytest.mark.parametrize(
    "shape",
    [
        (2, [], [], [2, 2], [2, 2]),
        (4, [4], [2], [2, 2], [4]),
        (8, [4], [], [2, 8], [4, 4]),
        (9, [3], [9], [9], [3, 3]),
        (6, [], [], [2, 6], [2, 6]),
    ],
)
def test_value_independent_of_injection(shape):
    base = AVModel(*shape, 0)
    values = set()
    for seed in range(20):
        inst = build_av_instance(with_delta(base, seed))
        assert kernel_size(inst) == base.mw_b.order
        values.add(path_integral_av(inst).brute_force_value)
    assert values == {base.mw_a.order * base.mw_b.order * base.sha_a.order}


def test_exhaustive_injections_small_shape():
    # every injective delta for sha = [2, 2] into H^2 = [2, 2, 2]
    base = AVModel(2, [2], [], [2, 2], [2, 2])
    rows = list(itertools.product(range(2), repeat=3))
    count = 0
    for r1, r2 in itertools.product(rows, repeat=2):
        try:
            inst = build_av_instance(with_delta(base, (r1, r2)))
        except ModelError:
            continue
        count += 1
        assert path_integral_av(inst).brute_force_value == 2 * 1 * 4
    # injective maps (Z/2)^2 -> (Z/2)^3: 7 * 6
    assert count == 42


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([2, 3, 4, 5, 6, 8, 9]))
def test_identity_on_random_models(seed, n):
    model = random_model(seed, n, max_group_order=64, max_sel_order=256)
    inst = build_av_instance(model)
    rep = path_integral_av(inst)
    assert rep.match
    assert rep.brute_force_value == model.mw_a.order * model.mw_b.order * model.sha_a.order
    assert rep.extra["symmetric_closed_form_value"] == rep.closed_form_value
    assert kernel_size(inst) == model.mw_b.order
    if rep.pair_count <= 4096:
        assert scalar_path_integral(inst) == rep.brute_force_value
    # the roles of A and B can be exchanged whenever an injection exists the other way
    target = InvariantFactors.from_cyclic_orders(model.mw_b.factors + model.sha_b.factors)
    if embeds_into(model.sha_a, target):
        swapped = build_av_instance(swap_roles(model, seed))
        assert path_integral_av(swapped).brute_force_value == rep.brute_force_value
    assert path_integral_av(inst, jobs=4).phase_vector == rep.phase_vector


# -- random models -------------------------------------------------------------------


def test_random_model_trivial_bound():
    m = random_model(0, 4, max_group_order=1)
    assert all(g.is_trivial() for g in (m.mw_a, m.mw_b, m.sha_a, m.sha_b))


@pytest.mark.parametrize("seed", range(30))
def test_random_model_invariants(seed):
    n = 4
    m = random_model(seed, n, max_group_order=n * n)
    for g in (m.mw_a, m.mw_b, m.sha_a, m.sha_b):
        assert g.order <= n * n
        assert all(n % d == 0 for d in g.factors)
    assert m.sha_a.order == m.sha_b.order
    build_av_instance(m)


def test_random_model_deterministic():
    assert random_model(12345, 4) == random_model(12345, 4)
    assert len({random_model(s, 6) for s in range(20)}) > 10


def test_random_models_reach_bounds():
    sizes = [random_model(s, [2, 3, 4, 5, 6, 8, 9][s % 7]) for s in range(200)]
    assert max(m.mw_a.order * m.sha_a.order for m in sizes) > 100
    assert any(isinstance(m.delta, int) and m.sha_a != m.sha_b for m in sizes)
    assert all(m.mw_a.order * m.sha_a.order <= 1000 and m.mw_b.order * m.sha_b.order <= 1000 for m in sizes)
