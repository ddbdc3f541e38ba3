"""Build filtered algebras for polycyclic groups one cyclic extension at a time.

The algebra of ``<g_{k+1}, ..., g_n>`` is extended by ``theta = g_k - 1`` of
weight ``w``.  For a deeper generator ``g`` with variable ``t = g - 1`` and
``psi(g) = g_k g g_k^-1`` the rewriting rule is

    theta t = t theta + delta (1 + theta),   delta = psi(g) - g,

and for a generator of relative order ``p^m`` with ``g_k^(p^m) = a`` the
power rule is ``theta^(p^m) = a - 1`` (exact in characteristic p).

The step requires ``value(delta) > value(g - 1) + w`` for every deeper
generator, in both conjugation directions.  A p-power step additionally
needs ``value(a - 1) >= w * p^m``: equality is the algebraic regime 'a',
strict inequality the nilpotent regime 'b'.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Sequence

from .algebra import INF, FilteredAlgebra, FilteredElement, WeightedVariable
from .errors import (BuildError, CentralizingConditionViolated, KTooSmall, NotAFinitePGroup,
                     PowerValueMismatch, PrimeMismatch, ScheduleError)
from .groups import direct_product as _direct_product_pres
from .pcgroup import PcPresentation

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class WeightSchedule:
    """Weights in algebra order: ``weights[0]`` belongs to ``t_1``, the most central variable.

    With ``layers`` (sizes, most central layer first) every weight of a
    layer must exceed twice every weight of the next one.
    """

    weights: tuple
    layers: tuple | None = None

    def __post_init__(self):
        if any(int(w) < 1 for w in self.weights):
            raise ScheduleError(f"weights must be positive: {self.weights}")
        if self.layers is not None and sum(self.layers) != len(self.weights):
            raise ScheduleError(f"layer sizes {self.layers} do not cover {len(self.weights)} variables")

    @classmethod
    def from_generator_weights(cls, weights: Sequence[int], layers=None) -> "WeightSchedule":
        """Weights listed in generator order ``g_1..g_n`` (top of the series first)."""
        return cls(tuple(int(w) for w in reversed(weights)), None if layers is None else tuple(layers))

    def generator_weight(self, i: int) -> int:
        return self.weights[len(self.weights) - 1 - i]

    def layer_blocks(self) -> list:
        sizes = self.layers or (len(self.weights),)
        blocks, start = [], 0
        for s in sizes:
            blocks.append(self.weights[start:start + s])
            start += s
        return blocks

    def validate(self) -> None:
        blocks = self.layer_blocks()
        for i in range(len(blocks) - 1):
            lo, hi = min(blocks[i]), max(blocks[i + 1])
            if not lo > 2 * hi:
                raise ScheduleError(
                    f"layer {i + 1} weight {lo} is not > 2 * {hi} (layer {i + 2} weight)"
                )


def default_schedule(layer_sizes: Sequence[int], k: int) -> WeightSchedule:
    """``f(t_i) = 3^(k - i + 1)`` for ``i = 1..n``; needs ``k >= n``."""
    n = sum(layer_sizes)
    if k < n:
        raise KTooSmall(f"k = {k} is smaller than the number of variables {n}")
    sched = WeightSchedule(tuple(3 ** (k - i + 1) for i in range(1, n + 1)), tuple(layer_sizes))
    sched.validate()
    return sched


def finite_pgroup_schedule(pres: PcPresentation) -> WeightSchedule:
    """Weights for a finite p-group with an abelian exponent-p graded algebra.

    Going down the series, each generator gets ``M = p * m + 1`` where ``m``
    is the largest weight used above it; the top generator gets 1.
    """
    if not pres.is_finite():
        raise NotAFinitePGroup("every relative order must be a finite power of p")
    return recursive_p_schedule(pres)


def recursive_p_schedule(pres: PcPresentation) -> WeightSchedule:
    """``w(g_1) = 1`` and ``w(g_{i+1}) = p * max(w(g_1..g_i)) + 1`` for any presentation."""
    gen_weights = []
    for _ in range(pres.n):
        gen_weights.append(pres.p * max(gen_weights) + 1 if gen_weights else 1)
    return WeightSchedule.from_generator_weights(gen_weights, (1,) * pres.n)


def unit_schedule(n: int) -> WeightSchedule:
    return WeightSchedule((1,) * n, None)


@dataclass(frozen=True)
class ExtensionStep:
    kind: str  # "infinite_cyclic" | "cyclic_p_power"
    generator: int
    weight: int
    order: int | None = None
    target: tuple | None = None
    action: dict = field(default_factory=dict)  # j -> g_k g_j g_k^-1
    inverse_action: dict = field(default_factory=dict)  # j -> g_k^-1 g_j g_k


@dataclass
class StepRecord:
    level: int
    kind: str
    generator: str
    variable: str
    weight: int
    regime: str
    margin: float
    power_value: float | None = None

    def line(self) -> str:
        margin = "inf" if self.margin == INF else str(self.margin)
        regime = self.regime or "-"
        extra = ""
        if self.power_value is not None:
            pv = "inf" if self.power_value == INF else str(self.power_value)
            extra = f" power_value={pv}"
        return (f"step {self.level}: {self.kind} {self.generator} -> {self.variable} "
                f"weight={self.weight} regime={regime} centralizing_margin={margin}{extra}")


class GroupAlgebra:
    """A polycyclic group realised by units of a filtered algebra.

    ``images[j]`` is the unit representing generator ``j`` for the covered
    generators ``j >= level``; uncovered entries are ``None``.
    """

    def __init__(self, pres: PcPresentation, algebra: FilteredAlgebra, images: Sequence,
                 level: int = 0, log_records: list | None = None, schedule=None, parent=None):
        self.pres = pres
        self.parent = parent  # the group algebra one extension step below, if any
        self.algebra = algebra
        self.images = tuple(images)
        self.level = level
        self.log = list(log_records or [])
        self.schedule = schedule
        self._inverse_images = {}

    @property
    def p(self):
        return self.algebra.p

    @property
    def cutoff(self):
        return self.algebra.cutoff

    def embed(self, g: Sequence[int]) -> FilteredElement:
        alg = self.algebra
        if any(g[: self.level]):
            raise BuildError(f"{g} is outside the covered subgroup", self.level)
        result = alg.one()
        for j in range(self.level, len(g)):
            e = g[j]
            if not e:
                continue
            if e < 0:
                inv = self._inverse_images.get(j)
                if inv is None:
                    inv = self._inverse_images[j] = alg.unit_inverse(self.images[j])
                u, e = inv, -e
            else:
                u = self.images[j]
            result = alg.mul(result, alg.power(u, e))
        return result

    def weight(self, g: Sequence[int]):
        """``value(embed(g) - 1)``; ``inf`` means above the cutoff."""
        return self.algebra.value(self.embed(g) - self.algebra.one())

    def build_log(self) -> list:
        return [r.line() for r in self.log]


def _transport(x: FilteredElement, new: FilteredAlgebra, extra: int = 0) -> FilteredElement:
    pad = (0,) * (new.n - x.alg.n)
    if extra:
        pad = pad[:-1] + (extra,)
    return new.element({m + pad: c for m, c in x.terms.items()})


def _centralizing_margin(ga: GroupAlgebra, step: ExtensionStep) -> float:
    """Smallest ``value(delta) - value(g - 1) - w`` over deeper generators and both directions."""
    alg = ga.algebra
    pres = ga.pres
    margin = INF
    for j in range(ga.level, pres.n):
        g = pres.generator(j)
        eg = ga.embed(g)
        base = alg.value(eg - alg.one())
        for table in (step.action, step.inverse_action):
            if j not in table:
                continue
            delta = ga.embed(table[j]) - eg
            vd = alg.value(delta)
            if vd == INF:
                continue
            m = vd - (base + step.weight)
            if m < margin:
                margin = m
            if m <= 0:
                raise CentralizingConditionViolated(
                    f"value({pres.format(table[j])} - {pres.names[j]}) = {vd} is not > "
                    f"{base} + {step.weight}",
                    witness=(pres.names[step.generator], pres.names[j]),
                )
    return margin


def _extend(ga: GroupAlgebra, step: ExtensionStep, name: str | None = None) -> GroupAlgebra:
    pres = ga.pres
    old = ga.algebra
    k = step.generator
    if k != ga.level - 1:
        raise BuildError(f"step adds generator {k}, expected {ga.level - 1}", k)
    margin = _centralizing_margin(ga, step)
    cap = None
    power_value = None
    regime = ""
    if step.kind == "cyclic_p_power":
        cap = step.order
        ptail_old = ga.embed(step.target) - old.one()
        power_value = old.value(ptail_old)
        need = step.weight * cap
        if power_value < need:
            raise PowerValueMismatch(
                f"value({pres.format(step.target)} - 1) = {power_value} < {step.weight} * {cap}"
            )
        regime = "a" if power_value == need else "b"
    elif step.kind != "infinite_cyclic":
        raise BuildError(f"unknown extension kind {step.kind!r}", k)

    vname = name or f"t_{pres.names[k]}"
    variables = list(old.variables) + [WeightedVariable(vname, step.weight, cap)]
    new_index = len(variables) - 1
    # variable of generator j sits at index n - 1 - j
    n = pres.n

    def build_tails(new: FilteredAlgebra) -> dict:
        tails = {key: _transport(t, new) for key, t in old.tails.items()}
        for j in range(ga.level, n):
            if j not in step.action:
                continue
            g = pres.generator(j)
            delta = ga.embed(step.action[j]) - ga.embed(g)
            if not delta:
                continue
            tails[(n - 1 - j, new_index)] = _transport(delta, new) + _transport(delta, new, extra=1)
        return tails

    probe = FilteredAlgebra(old.p, variables, old.cutoff, validate=False)
    tails = build_tails(probe)
    ptails = {i: _transport(t, probe) for i, t in old.ptails.items()}
    if cap:
        ptails[new_index] = _transport(ptail_old, probe)
    new = FilteredAlgebra(old.p, variables, old.cutoff,
                          tails={key: t.terms for key, t in tails.items()},
                          ptails={i: t.terms for i, t in ptails.items()})
    images = [None] * n
    for j in range(ga.level, n):
        images[j] = _transport(ga.images[j], new)
    images[k] = new.one() + new.var(new_index)
    record = StepRecord(n - k, step.kind, pres.names[k], vname, step.weight, regime, margin, power_value)
    log.debug(record.line())
    return GroupAlgebra(pres, new, images, k, ga.log + [record], ga.schedule, parent=ga)


def extend_infinite_cyclic(ga: GroupAlgebra, step: ExtensionStep, name: str | None = None) -> GroupAlgebra:
    if step.kind != "infinite_cyclic":
        raise BuildError("extend_infinite_cyclic needs an infinite_cyclic step", step.generator)
    return _extend(ga, step, name)


def extend_cyclic_p_power(ga: GroupAlgebra, step: ExtensionStep, name: str | None = None) -> GroupAlgebra:
    if step.kind != "cyclic_p_power":
        raise BuildError("extend_cyclic_p_power needs a cyclic_p_power step", step.generator)
    return _extend(ga, step, name)


def trivial_group_algebra(pres: PcPresentation, cutoff: int, schedule=None) -> GroupAlgebra:
    """The algebra ``F_p`` realising the trivial subgroup at the bottom of the series."""
    alg = FilteredAlgebra(pres.p, [], cutoff)
    return GroupAlgebra(pres, alg, [None] * pres.n, pres.n, [], schedule)


def step_for(pres: PcPresentation, k: int, weight: int) -> ExtensionStep:
    """The extension step adding generator ``k`` on top of ``<g_{k+1}..g_n>``."""
    g = pres.generator(k)
    gi = pres.inverse(g)
    action, inverse_action = {}, {}
    for j in range(k + 1, pres.n):
        gj = pres.generator(j)
        action[j] = pres.product(g, gj, gi)
        inverse_action[j] = pres.product(gi, gj, g)
    if pres.orders[k] is None:
        return ExtensionStep("infinite_cyclic", k, weight, None, None, action, inverse_action)
    target = pres.powers.get(k, pres.identity())
    return ExtensionStep("cyclic_p_power", k, weight, pres.orders[k], target, action, inverse_action)


def build_group_algebra(pres: PcPresentation, schedule: WeightSchedule, cutoff: int,
                        graded_samples: int = 0, seed: int = 0) -> GroupAlgebra:
    """Climb the polycyclic series from the bottom generator to the top."""
    if len(schedule.weights) != pres.n:
        raise ScheduleError(f"schedule has {len(schedule.weights)} weights for {pres.n} generators")
    schedule.validate()
    ga = trivial_group_algebra(pres, cutoff, schedule)
    for k in range(pres.n - 1, -1, -1):
        step = step_for(pres, k, schedule.generator_weight(k))
        try:
            ga = _extend(ga, step)
        except (CentralizingConditionViolated, PowerValueMismatch) as exc:
            raise BuildError(f"extension by {pres.names[k]} failed: {exc}", k, exc) from exc
        if graded_samples:
            from .algebra import check_graded_polynomial
            check_graded_polynomial(ga.algebra, graded_samples, seed)
    return ga


def line_embedding(pres: PcPresentation, cutoff: int, polynomials: Sequence[dict],
                   name: str = "t") -> GroupAlgebra:
    """Realise an abelian group inside ``F_p[t]`` (weight 1) by units ``1 + ...``.

    ``polynomials[j]`` maps exponents of ``t`` to coefficients and is the
    image of generator ``j``.  The images commute, so this is a
    homomorphism for any free abelian presentation.
    """
    if pres.conj or any(o is not None for o in pres.orders):
        raise BuildError("line_embedding needs a free abelian presentation")
    alg = FilteredAlgebra(pres.p, [WeightedVariable(name, 1)], cutoff)
    images = []
    for poly in polynomials:
        u = alg.element({(e,): c for e, c in poly.items()})
        if u.constant_term() != 1:
            raise BuildError(f"image {u} is not of the form 1 + (higher terms)")
        images.append(u)
    if len(images) != pres.n:
        raise BuildError(f"{len(images)} images for {pres.n} generators")
    return GroupAlgebra(pres, alg, images, 0)


def direct_product(ga1: GroupAlgebra, ga2: GroupAlgebra) -> GroupAlgebra:
    """Disjoint union of variables with commuting cross terms."""
    a1, a2 = ga1.algebra, ga2.algebra
    if a1.p != a2.p:
        raise PrimeMismatch(f"primes differ: {a1.p} vs {a2.p}")
    if a1.cutoff != a2.cutoff:
        raise BuildError(f"cutoffs differ: {a1.cutoff} vs {a2.cutoff}")
    if ga1.level or ga2.level:
        raise BuildError("direct_product needs fully built group algebras")
    pres = _direct_product_pres(ga1.pres, ga2.pres)
    names1 = [v.name for v in a1.variables]
    names2 = [v.name for v in a2.variables]
    if set(names1) & set(names2):
        names1 = [f"{x}_1" for x in names1]
        names2 = [f"{x}_2" for x in names2]
    variables = ([WeightedVariable(nm, v.weight, v.cap) for nm, v in zip(names1, a1.variables)]
                 + [WeightedVariable(nm, v.weight, v.cap) for nm, v in zip(names2, a2.variables)])
    n1 = a1.n
    pad2 = (0,) * a2.n
    pad1 = (0,) * n1

    def left(x):
        return {m + pad2: c for m, c in x.terms.items()}

    def right(x):
        return {pad1 + m: c for m, c in x.terms.items()}

    tails = {key: left(t) for key, t in a1.tails.items()}
    tails.update({(i + n1, j + n1): right(t) for (i, j), t in a2.tails.items()})
    ptails = {i: left(t) for i, t in a1.ptails.items()}
    ptails.update({i + n1: right(t) for i, t in a2.ptails.items()})
    alg = FilteredAlgebra(a1.p, variables, a1.cutoff, tails, ptails)
    images = [alg.element(left(u)) for u in ga1.images] + [alg.element(right(u)) for u in ga2.images]
    return GroupAlgebra(pres, alg, images, 0, ga1.log + ga2.log)
