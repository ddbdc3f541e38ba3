"""The eleven acceptance criteria, each with its time limit.

A summary line per criterion is printed at the end of the pytest run.
"""

import random
import time
from contextlib import contextmanager

import pytest

from polycentral.algebra import INF, check_graded_polynomial
from polycentral.builder import (WeightSchedule, build_group_algebra, direct_product, line_embedding,
                                 recursive_p_schedule, unit_schedule)
from polycentral.graded_lie import classify, generate_subalgebra, hom_component
from polycentral.groups import cyclic_p_power, cyclic_tower, free_abelian, heisenberg
from polycentral.pseries import PSeriesSpec, check_axioms, p_adic_valuation
from polycentral.report import (build, check_associativity, check_theta_expansion, check_pseudovaluation,
                                check_routes, component_law_table)
from polycentral.scenario import builtin_names, load_builtin


@contextmanager
def criterion(log, number, title, limit=None):
    start = time.perf_counter()
    status, note = "PASS", ""
    try:
        yield
        elapsed = time.perf_counter() - start
        if limit is not None and elapsed >= limit:
            status, note = "FAIL", f" (took {elapsed:.2f}s, limit {limit}s)"
            raise AssertionError(f"criterion {number} took {elapsed:.2f}s >= {limit}s")
    except Exception as exc:
        status = "FAIL"
        note = note or f" ({str(exc).splitlines()[0][:120]})"
        raise
    finally:
        elapsed = time.perf_counter() - start
        log.append(f"criterion {number}: {status} {title} [{elapsed:.2f}s]{note}")


def example2(p, D):
    return line_embedding(free_abelian(p, 2, ["u", "v"]), D, [{0: 1, 1: 1}, {0: 1, 1: 1, p: 1}])


def test_criterion_01_example2_components(acceptance_log):
    with criterion(acceptance_log, 1, "one-variable example: component laws, p=2,3, D=30", 5):
        for p in (2, 3):
            ga = example2(p, 30)
            rows, ok, witness = component_law_table(ga, 6)
            assert ok, witness
            t = ga.algebra.var(0)
            for n in range(1, 7):
                k = p_adic_valuation(n, p)
                n1 = n // p ** k
                assert hom_component((n, -n), ga).body == -n1 * t ** (p ** (k + 1))


def test_criterion_02_example2_classification(acceptance_log):
    # Expected to fail: u v - 1 = t^3 at p = 2 adds a second free generator.
    with criterion(acceptance_log, 2, "one-variable example: free abelian of rank 1, p=2, D=20", 5):
        ga = example2(2, 20)
        seeds = [hom_component((a, b), ga) for a in range(-3, 4) for b in range(-3, 4) if a or b]
        cl = classify(generate_subalgebra(seeds, 20))
        assert cl.free_abelian_up_to_D
        assert cl.rank_estimate == 1, f"rank_estimate = {cl.rank_estimate}, dims {cl.dims}"


def test_criterion_03_example1_tower(acceptance_log):
    with criterion(acceptance_log, 3, "Z through its lower p-series: weights 1,3,7,15", 1):
        T = cyclic_tower(2, 4)
        ga = build_group_algebra(T, recursive_p_schedule(T), 15)
        g = T.generator(0)
        assert [ga.weight(T.power(g, 2 ** k)) for k in range(4)] == [1, 3, 7, 15]
        seeds = [hom_component(T.generator(i), ga) for i in range(4)]
        cl = classify(generate_subalgebra(seeds, 15))
        assert cl.abelian_up_to_D and cl.exponent_p_up_to_D
        assert cl.dims == {1: 1, 3: 1, 7: 1, 15: 1}


@pytest.mark.parametrize("p,weights", [(2, (1, 3)), (3, (1, 4))])
def test_criterion_04_cyclic_p_squared(acceptance_log, p, weights):
    with criterion(acceptance_log, 4, f"C_(p^2), p={p}, schedule {weights}", 1):
        C = cyclic_p_power(p, 2)
        ga = build_group_algebra(C, WeightSchedule.from_generator_weights(weights), 12)
        assert check_axioms(PSeriesSpec.from_algebra(ga), 300, seed=0).ok
        seeds = [hom_component(C.generator(i), ga) for i in range(2)]
        cl = classify(generate_subalgebra(seeds, 12))
        assert cl.abelian_up_to_D and cl.exponent_p_up_to_D
        assert cl.dims == {weights[0]: 1, weights[1]: 1}


def test_criterion_05_heisenberg(acceptance_log):
    with criterion(acceptance_log, 5, "Heisenberg p=2, weights z:3 a:1 b:1, D=12", 30):
        H = heisenberg(2)
        ga = build_group_algebra(H, WeightSchedule.from_generator_weights((1, 1, 3), (1, 2)), 12)
        assert len(ga.log) == 3
        assert all("centralizing_margin=" in line for line in ga.build_log())
        assert ga.log[-1].margin == 1
        assert check_graded_polynomial(ga.algebra, 500, seed=0).ok
        seeds = [hom_component(H.generator(i), ga) for i in range(3)]
        cl = classify(generate_subalgebra(seeds, 12))
        assert cl.free_abelian_up_to_D and cl.rank_estimate == 3 == H.hirsch_number()


def test_criterion_06_associativity(acceptance_log):
    with criterion(acceptance_log, 6, "Heisenberg p=2, D=10: 200 associativity triples", 10):
        ga = build_group_algebra(heisenberg(2), WeightSchedule.from_generator_weights((1, 1, 3), (1, 2)), 10)
        r = check_associativity(ga, 200, random.Random(0))
        assert r.passed, r.detail


def _built_algebras():
    out = {}
    for name in builtin_names():
        out[name] = build(load_builtin(name))
    g1 = build_group_algebra(free_abelian(2, 1, ["x"]), WeightSchedule((1,)), 20)
    g2 = build_group_algebra(free_abelian(2, 1, ["y"]), WeightSchedule((5,)), 20)
    out["z_times_z"] = direct_product(g1, g2)
    return out


def test_criterion_07_pseudovaluation(acceptance_log):
    with criterion(acceptance_log, 7, "pseudovaluation laws on every built algebra, 500 pairs"):
        for name, ga in _built_algebras().items():
            r = check_pseudovaluation(ga.algebra, 500, random.Random(name))
            assert r.passed, f"{name}: {r.detail}"


def test_criterion_08_theta_expansion(acceptance_log):
    with criterion(acceptance_log, 8, "value of sum lambda_i theta^i after each infinite step, 100 samples"):
        seen = 0
        for name, ga in _built_algebras().items():
            r = check_theta_expansion(ga, 100, random.Random(name))
            assert r.passed, f"{name}: {r.detail}"
            seen += r.samples
        assert seen > 0


def _jennings_weight(g, p, order):
    w = order
    for e in g:
        if e % order:
            w = min(w, p ** p_adic_valuation(e % order, p))
    return w


def jennings_oracle_dims(max_degree, order=8):
    """dim A_n / A_(n+1) in F_2[C_order x C_order] by brute force.

    A_n is spanned by products (h_1 - 1)...(h_r - 1) with sum of Jennings
    weights >= n, i.e. the smallest family of subspaces with
    A_n >= {h - 1 : w(h) >= n}, A_n >= A_(n+1) and
    A_n >= (h - 1) A_max(1, n - w(h)).  Vectors are bitmasks over the 64
    group elements.
    """
    p = 2
    elems = [(a, b) for a in range(order) for b in range(order)]
    index = {g: i for i, g in enumerate(elems)}
    shift = {g: [index[((g[0] + a) % order, (g[1] + b) % order)] for a, b in elems] for g in elems}
    one = 1 << index[(0, 0)]

    def times_h_minus_1(h, v):
        out = v
        for i, j in enumerate(shift[h]):
            if (v >> i) & 1:
                out ^= 1 << j
        return out

    def add(basis, v):
        for piv, b in basis:
            if (v >> piv) & 1:
                v ^= b
        if not v:
            return False
        basis.append((v.bit_length() - 1, v))
        return True

    nontrivial = [g for g in elems if any(g)]
    weight = {g: _jennings_weight(g, p, order) for g in nontrivial}
    top = max_degree + 1
    spaces = {n: [] for n in range(1, top + 2)}
    for n in range(1, top + 1):
        for g in nontrivial:
            if weight[g] >= n:
                add(spaces[n], one ^ (1 << index[g]))
    changed = True
    while changed:
        changed = False
        for n in range(top, 0, -1):
            for _, v in list(spaces[n + 1]):
                changed |= add(spaces[n], v)
            for g in nontrivial:
                for _, v in list(spaces[max(1, n - weight[g])]):
                    changed |= add(spaces[n], times_h_minus_1(g, v))
    return {n: len(spaces[n]) - len(spaces[n + 1]) for n in range(1, max_degree + 1)}


def test_criterion_09_quillen(acceptance_log):
    with criterion(acceptance_log, 9, "dimension oracle: Z^2, p=2, unit weights, degrees <= 6", 20):
        ga = build_group_algebra(free_abelian(2, 2), unit_schedule(2), 6)
        oracle = jennings_oracle_dims(6)
        counts = {n: ga.algebra.count_monomials(n) for n in range(1, 7)}
        assert oracle == counts, (oracle, counts)


def test_criterion_10_routes(acceptance_log):
    with criterion(acceptance_log, 10, "bracket and [p]-map routes agree on all built-in scenarios, 300 inputs"):
        for name in builtin_names():
            ga = build(load_builtin(name))
            r = check_routes(ga, 300, random.Random(name))
            assert r.passed and r.samples == 300, f"{name}: {r.detail} ({r.samples})"


def test_criterion_11_direct_product(acceptance_log):
    with criterion(acceptance_log, 11, "Z x Z with weights (1, 5), p=2: min rule and additive dimensions"):
        D = 20
        g1 = build_group_algebra(free_abelian(2, 1, ["x"]), WeightSchedule((1,)), D)
        g2 = build_group_algebra(free_abelian(2, 1, ["y"]), WeightSchedule((5,)), D)
        prod = direct_product(g1, g2)
        rng = random.Random(0)
        for _ in range(200):
            a, b = rng.randint(-40, 40), rng.randint(-40, 40)
            if not (a or b):
                continue
            assert prod.weight((a, b)) == min(g1.weight((a,)), g2.weight((b,)))
        dims = []
        for ga in (g1, g2, prod):
            seeds = [hom_component(ga.pres.generator(i), ga) for i in range(ga.pres.n)]
            dims.append(generate_subalgebra(seeds, D).dims())
        total = {d: dims[0].get(d, 0) + dims[1].get(d, 0) for d in set(dims[0]) | set(dims[1])}
        assert dims[2] == dict(sorted(total.items()))
        assert INF not in dims[2]
