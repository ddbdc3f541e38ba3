import random

import pytest

from polycentral.algebra import INF, check_graded_polynomial
from polycentral.builder import (ExtensionStep, WeightSchedule, build_group_algebra, default_schedule,
                                 direct_product, extend_cyclic_p_power, extend_infinite_cyclic,
                                 finite_pgroup_schedule, line_embedding, recursive_p_schedule, step_for,
                                 trivial_group_algebra, unit_schedule)
from polycentral.errors import (BuildError, CentralizingConditionViolated, KTooSmall, NotAFinitePGroup,
                                PowerValueMismatch, PrimeMismatch, ScheduleError)
from polycentral.groups import cyclic_p_power, cyclic_tower, free_abelian, heisenberg


def heis(p=2, weights=(1, 1, 3), cutoff=12, layers=(1, 2)):
    return build_group_algebra(heisenberg(p), WeightSchedule.from_generator_weights(weights, layers), cutoff)


def test_heisenberg_variables_and_tail():
    ga = heis()
    alg = ga.algebra
    assert [(v.name, v.weight) for v in alg.variables] == [("t_z", 3), ("t_b", 1), ("t_a", 1)]
    # delta = a b a^-1 - b = b (z - 1) = (1 + t_b) t_z, and the tail is delta (1 + t_a)
    expected = alg.element({(1, 0, 0): 1, (1, 1, 0): 1, (1, 0, 1): 1, (1, 1, 1): 1})
    assert alg.tails == {(1, 2): expected}
    assert list(alg.tails) == [(1, 2)]


def test_heisenberg_build_log():
    lines = heis().build_log()
    assert lines == [
        "step 1: infinite_cyclic z -> t_z weight=3 regime=- centralizing_margin=inf",
        "step 2: infinite_cyclic b -> t_b weight=1 regime=- centralizing_margin=inf",
        "step 3: infinite_cyclic a -> t_a weight=1 regime=- centralizing_margin=1",
    ]


@pytest.mark.parametrize("ga", [
    heis(), heis(3, (1, 1, 3), 9), heis(5, (1, 1, 3), 7),
    build_group_algebra(cyclic_p_power(2, 3), finite_pgroup_schedule(cyclic_p_power(2, 3)), 12),
    build_group_algebra(cyclic_tower(3, 2), recursive_p_schedule(cyclic_tower(3, 2)), 15),
    build_group_algebra(free_abelian(2, 2), unit_schedule(2), 8),
], ids=lambda ga: ga.algebra.describe())
def test_embedding_is_a_homomorphism(ga, backend):
    pres = ga.pres
    rng = random.Random(11)
    one = ga.algebra.one()
    for _ in range(40):
        x, y = pres.random_element(rng), pres.random_element(rng)
        assert ga.embed(pres.multiply(x, y)) == ga.embed(x) * ga.embed(y)
        assert ga.embed(x) * ga.embed(pres.inverse(x)) == one


def test_weights_follow_the_schedule():
    ga = heis()
    H = ga.pres
    assert ga.weight(H.generator(0)) == 1
    assert ga.weight(H.generator(2)) == 3
    assert ga.weight(H.generator(0, 2)) == 2  # (1 + t)^2 - 1 = t^2 in characteristic 2
    assert ga.weight(H.identity()) == INF
    assert ga.weight(H.generator(2, 8)) == INF  # 24 > cutoff


def test_finite_pgroup_schedule_and_regimes():
    C = cyclic_p_power(2, 2)
    s = finite_pgroup_schedule(C)
    assert [s.generator_weight(i) for i in range(2)] == [1, 3]
    ga = build_group_algebra(C, s, 12)
    assert [r.regime for r in ga.log] == ["b", "b"]
    assert ga.log[-1].power_value == 3
    # weight 2 on g^2 puts the top step exactly on the boundary
    ga = build_group_algebra(C, WeightSchedule.from_generator_weights([1, 2]), 12)
    assert ga.log[-1].regime == "a" and ga.log[-1].power_value == 2
    C9 = cyclic_p_power(3, 2)
    s = finite_pgroup_schedule(C9)
    assert [s.generator_weight(i) for i in range(2)] == [1, 4]


def test_schedule_errors():
    with pytest.raises(KTooSmall):
        default_schedule((1, 2), 2)
    assert default_schedule((1, 2), 3).weights == (27, 9, 3)
    with pytest.raises(ScheduleError):
        WeightSchedule((3, 2, 1), (1, 2)).validate()
    with pytest.raises(ScheduleError):
        WeightSchedule((0, 1))
    with pytest.raises(ScheduleError):
        WeightSchedule((1, 1), (3,))
    with pytest.raises(NotAFinitePGroup):
        finite_pgroup_schedule(heisenberg(2))
    with pytest.raises(ScheduleError):
        build_group_algebra(heisenberg(2), unit_schedule(2), 5)


def test_centralizing_condition_violation():
    with pytest.raises(BuildError) as info:
        heis(weights=(1, 1, 1), layers=None)
    assert isinstance(info.value.cause, CentralizingConditionViolated)
    assert info.value.level == 0
    assert info.value.cause.witness == ("a", "b")


def test_power_value_mismatch():
    with pytest.raises(BuildError) as info:
        build_group_algebra(cyclic_p_power(2, 2), WeightSchedule.from_generator_weights([2, 3]), 12)
    assert isinstance(info.value.cause, PowerValueMismatch)


def test_stepwise_extension_matches_full_build():
    H = heisenberg(2)
    sched = WeightSchedule.from_generator_weights((1, 1, 3), (1, 2))
    ga = trivial_group_algebra(H, 12, sched)
    for k in (2, 1, 0):
        ga = extend_infinite_cyclic(ga, step_for(H, k, sched.generator_weight(k)))
    full = heis()
    assert {k: t.terms for k, t in ga.algebra.tails.items()} == {k: t.terms for k, t in full.algebra.tails.items()}
    assert ga.parent.parent.parent.level == 3
    C = cyclic_p_power(2, 2)
    g = trivial_group_algebra(C, 8)
    with pytest.raises(BuildError):
        extend_infinite_cyclic(g, step_for(C, 1, 3))
    g = extend_cyclic_p_power(g, step_for(C, 1, 3))
    with pytest.raises(BuildError):
        extend_cyclic_p_power(g, step_for(C, 1, 3))  # wrong level


def test_graded_check_during_build():
    ga = build_group_algebra(heisenberg(2), WeightSchedule.from_generator_weights((1, 1, 3), (1, 2)), 10,
                             graded_samples=100)
    assert check_graded_polynomial(ga.algebra, 100).ok


def test_direct_product_of_group_algebras():
    p = 2
    g1 = build_group_algebra(free_abelian(p, 1, ["x"]), WeightSchedule((1,)), 20)
    g2 = build_group_algebra(free_abelian(p, 1, ["y"]), WeightSchedule((5,)), 20)
    prod = direct_product(g1, g2)
    assert prod.pres.names == ("x", "y")
    assert [v.name for v in prod.algebra.variables] == ["t_x", "t_y"]
    assert prod.weight((2, 1)) == 2 and prod.weight((8, 1)) == 5
    g3 = build_group_algebra(free_abelian(3, 1, ["z"]), WeightSchedule((1,)), 20)
    with pytest.raises(PrimeMismatch):
        direct_product(g1, g3)
    g4 = build_group_algebra(free_abelian(p, 1, ["z"]), WeightSchedule((1,)), 10)
    with pytest.raises(BuildError):
        direct_product(g1, g4)


def test_line_embedding():
    ga = line_embedding(free_abelian(2, 2, ["u", "v"]), 20, [{0: 1, 1: 1}, {0: 1, 1: 1, 2: 1}])
    t = ga.algebra.var(0)
    assert ga.embed((1, 1)) - ga.algebra.one() == t ** 3
    with pytest.raises(BuildError):
        line_embedding(free_abelian(2, 1), 5, [{1: 1}])
    with pytest.raises(BuildError):
        line_embedding(heisenberg(2), 5, [{0: 1}] * 3)


def test_unknown_step_kind():
    C = cyclic_p_power(2, 1)
    with pytest.raises(BuildError):
        extend_infinite_cyclic(trivial_group_algebra(C, 4), ExtensionStep("cyclic_p_power", 0, 1, 2, (0,)))
