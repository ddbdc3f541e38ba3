import random

import pytest

from polycentral.algebra import INF
from polycentral.builder import WeightSchedule, build_group_algebra, recursive_p_schedule
from polycentral.errors import AxiomViolated, PolycentralError
from polycentral.groups import cyclic_tower, free_abelian, heisenberg
from polycentral.pseries import (PSeriesSpec, check_axioms, equivalent_up_to, lower_p_series_weights,
                                 p_adic_valuation, weight_of, weight_table)


def test_valuation_and_recursion():
    assert p_adic_valuation(12, 2) == 2 and p_adic_valuation(-9, 3) == 2
    with pytest.raises(ValueError):
        p_adic_valuation(0, 2)
    assert lower_p_series_weights(2, 4) == [1, 3, 7, 15]
    assert lower_p_series_weights(3, 3) == [1, 4, 13]


def test_jennings_weights_on_z2():
    Z2 = free_abelian(2, 2)
    spec = PSeriesSpec.abelian_jennings(Z2, (1, 5), 20)
    # w(x^a y^b) = min(2^v(a), 5 * 2^v(b))
    assert spec.weight((2, 3)) == 2
    assert spec.weight((8, 1)) == 5
    assert spec.weight((16, 0)) == 16
    assert spec.weight((0, 4)) == 20
    assert spec.weight((0, 8)) == INF
    assert spec.weight((0, 0)) == INF
    with pytest.raises(PolycentralError):
        PSeriesSpec.abelian_jennings(heisenberg(2), (1, 1, 1), 10)
    with pytest.raises(PolycentralError):
        PSeriesSpec.abelian_jennings(Z2, (1,), 10)


def test_jennings_agrees_with_built_algebra():
    Z2 = free_abelian(2, 2)
    ga = build_group_algebra(Z2, WeightSchedule.from_generator_weights((1, 5)), 20)
    a, b = PSeriesSpec.abelian_jennings(Z2, (1, 5), 20), PSeriesSpec.from_algebra(ga)
    rng = random.Random(0)
    for _ in range(200):
        g = Z2.random_element(rng, 16)
        assert weight_of(g, a) == weight_of(g, b)


@pytest.mark.parametrize("p,cutoff", [(2, 15), (3, 13)])
def test_lower_p_series_example_matches_tower(p, cutoff):
    levels = 1
    while lower_p_series_weights(p, levels + 1)[-1] <= cutoff:
        levels += 1
    T = cyclic_tower(p, levels)
    ga = build_group_algebra(T, recursive_p_schedule(T), cutoff)
    Z = free_abelian(p, 1)
    spec = PSeriesSpec.lower_p_series_example(Z, cutoff)
    for j in range(1, 3 * p ** levels):
        assert ga.weight(T.power(T.generator(0), j)) == spec.weight((j,)), j


def test_lower_p_series_needs_z():
    with pytest.raises(PolycentralError):
        PSeriesSpec.lower_p_series_example(free_abelian(2, 2), 5)


@pytest.mark.parametrize("ga", [
    build_group_algebra(heisenberg(2), WeightSchedule.from_generator_weights((1, 1, 3), (1, 2)), 12),
    build_group_algebra(cyclic_tower(2, 3), recursive_p_schedule(cyclic_tower(2, 3)), 15),
], ids=["heisenberg", "tower"])
def test_axioms_hold_on_built_series(ga):
    rep = check_axioms(PSeriesSpec.from_algebra(ga), 200, seed=3)
    assert rep.ok and rep.checked == 200


def test_corrupted_table_is_rejected():
    Z = free_abelian(2, 1)
    flat = PSeriesSpec.custom(Z, lambda g: 1, 10)  # w(x^2) = 1 < 2 w(x)
    rep = check_axioms(flat, 50, seed=0, strict=False)
    assert not rep.ok and "x^2" in rep.message
    with pytest.raises(AxiomViolated):
        check_axioms(flat, 50, seed=0)


def test_commutator_axiom_violation():
    H = heisenberg(2)
    w = {0: 1, 1: 1, 2: 1}
    spec = PSeriesSpec.custom(H, lambda g: min(w[i] * 2 ** p_adic_valuation(e, 2) for i, e in enumerate(g) if e), 10)
    rep = check_axioms(spec, 300, seed=0, strict=False)
    assert not rep.ok and rep.message.startswith("w([x,y])")


def test_refinement_tables():
    Z = free_abelian(2, 1)
    jen = PSeriesSpec.abelian_jennings(Z, (1,), 15)
    low = PSeriesSpec.lower_p_series_example(Z, 15)
    rep = equivalent_up_to(jen, low, 15, elements=[(j,) for j in range(1, 65)])
    # w_low(g^j) = 2^(v+1) - 1, w_jen(g^j) = 2^v
    assert rep.a_to_b[:4] == [(1, 1), (2, 3), (3, 7), (4, 7)]
    assert rep.b_to_a[:4] == [(1, 1), (2, 2), (3, 2), (4, 4)]
    assert rep.samples == 64
    with pytest.raises(PolycentralError):
        equivalent_up_to(jen, PSeriesSpec.abelian_jennings(free_abelian(2, 2), (1, 1), 5), 5)


def test_weight_table_format():
    Z = free_abelian(2, 1)
    spec = PSeriesSpec.lower_p_series_example(Z, 7)
    assert weight_table(spec, [(1,), (2,), (4,), (8,)]) == "g\t1\ng^2\t3\ng^4\t7\ng^8\tinf\n"
