"""p-series of a polycyclic group described by weight functions.

A weight function ``w`` defines ``H_i = {h : w(h) >= i}``; it is a p-series
when ``w([x, y]) >= w(x) + w(y)`` and ``w(x^p) >= p w(x)``.  Weights above
the cutoff are reported as ``inf``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .algebra import INF
from .errors import AxiomViolated, PolycentralError
from .pcgroup import PcPresentation


def p_adic_valuation(a: int, p: int) -> int:
    if a == 0:
        raise ValueError("valuation of 0")
    k = 0
    while a % p == 0:
        a //= p
        k += 1
    return k


def lower_p_series_weights(p: int, count: int) -> list:
    """``w_1 = 1``, ``w_{n+1} = p w_n + 1``."""
    out = [1]
    while len(out) < count:
        out.append(p * out[-1] + 1)
    return out[:count]


@dataclass
class PSeriesSpec:
    source: str  # from_algebra | abelian_jennings | lower_p_series_example | custom
    pres: PcPresentation
    cutoff: int
    group_algebra: object = None
    generator_weights: tuple | None = None
    func: Callable | None = None

    @classmethod
    def from_algebra(cls, ga) -> "PSeriesSpec":
        return cls("from_algebra", ga.pres, ga.cutoff, group_algebra=ga)

    @classmethod
    def abelian_jennings(cls, pres: PcPresentation, weights: Sequence[int], cutoff: int) -> "PSeriesSpec":
        if any(o is not None for o in pres.orders) or pres.conj:
            raise PolycentralError("abelian_jennings needs a free abelian presentation")
        if len(weights) != pres.n:
            raise PolycentralError("one weight per generator is required")
        return cls("abelian_jennings", pres, cutoff, generator_weights=tuple(weights))

    @classmethod
    def lower_p_series_example(cls, pres: PcPresentation, cutoff: int) -> "PSeriesSpec":
        if pres.n != 1 or pres.orders[0] is not None:
            raise PolycentralError("the lower p-series example lives on the infinite cyclic group")
        return cls("lower_p_series_example", pres, cutoff)

    @classmethod
    def custom(cls, pres: PcPresentation, func: Callable, cutoff: int) -> "PSeriesSpec":
        return cls("custom", pres, cutoff, func=func)

    def _cap(self, w):
        return INF if w > self.cutoff else w

    def weight(self, g: Sequence[int]):
        g = tuple(g)
        if not any(g):
            return INF
        if self.source == "from_algebra":
            return self.group_algebra.weight(g)
        if self.source == "abelian_jennings":
            p = self.pres.p
            return self._cap(min(p ** p_adic_valuation(a, p) * f
                                 for a, f in zip(g, self.generator_weights) if a))
        if self.source == "lower_p_series_example":
            p = self.pres.p
            k = p_adic_valuation(g[0], p)
            # w_{k+1}, computed without building the whole list when it is huge
            w = 1
            for _ in range(k):
                w = p * w + 1
                if w > self.cutoff:
                    return INF
            return self._cap(w)
        if self.source == "custom":
            w = self.func(g)
            return INF if w is None else self._cap(w)
        raise PolycentralError(f"unknown p-series source {self.source!r}")


def weight_of(g: Sequence[int], spec: PSeriesSpec):
    return spec.weight(g)


def weight_table(spec: PSeriesSpec, elements: Iterable) -> str:
    """Two columns: element normal form, weight."""
    lines = []
    for g in elements:
        w = spec.weight(g)
        lines.append(f"{spec.pres.format(tuple(g))}\t{'inf' if w == INF else w}")
    return "\n".join(lines) + ("\n" if lines else "")


@dataclass
class AxiomReport:
    ok: bool
    cutoff: int
    checked: int
    commutator_margin: float = INF
    power_margin: float = INF
    commutators_trivial: bool = True
    witness: tuple | None = None
    message: str = ""


def check_axioms(spec: PSeriesSpec, sample_count: int = 300, seed: int = 0, cutoff: int | None = None,
                 strict: bool = True, bound: int = 3, elements: Sequence | None = None) -> AxiomReport:
    """Sample ``w([x,y]) >= w(x) + w(y)`` and ``w(x^p) >= p w(x)``.

    Weights above the cutoff count as ``+inf``.  The weights of ``x`` and
    ``[x, y]`` are exact when they are within the cutoff, so a finite
    left-hand side below the bound is a genuine violation.
    """
    pres = spec.pres
    D = spec.cutoff if cutoff is None else cutoff
    rng = random.Random(seed)
    p = pres.p
    comm_margin = INF
    pow_margin = INF
    trivial = True

    def w(g):
        v = spec.weight(g)
        return INF if v > D else v

    def draw():
        if elements:
            return tuple(rng.choice(elements))
        return pres.random_element(rng, bound)

    for k in range(sample_count):
        x, y = draw(), draw()
        c = pres.commutator(x, y)
        if any(c):
            trivial = False
        wx, wy, wc = w(x), w(y), w(c)
        rhs = wx + wy
        bad = None
        if wc < rhs:
            bad = f"w([x,y]) = {wc} < {wx} + {wy}"
        elif wc != INF and rhs != INF:
            comm_margin = min(comm_margin, wc - rhs)
        xp = pres.power(x, p)
        wp = w(xp)
        if bad is None and wp < p * wx:
            bad = f"w(x^{p}) = {wp} < {p} * {wx}"
        elif wp != INF and wx != INF:
            pow_margin = min(pow_margin, wp - p * wx)
        if bad:
            rep = AxiomReport(False, D, k + 1, comm_margin, pow_margin, trivial,
                              (pres.format(x), pres.format(y)), bad)
            if strict:
                raise AxiomViolated(bad, (x, y))
            return rep
    return AxiomReport(True, D, sample_count, comm_margin, pow_margin, trivial, None,
                       f"p-series axioms hold on all samples up to cutoff D={D}")


@dataclass
class RefinementReport:
    cutoff: int
    a_to_b: list = field(default_factory=list)  # (d, d') or (d, None) when no sample reaches d
    b_to_a: list = field(default_factory=list)
    samples: int = 0


def _refine(elements, wa, wb, cutoff):
    rows = []
    for d in range(1, cutoff + 1):
        reach = [wb[i] for i, x in enumerate(wa) if x >= d]
        rows.append((d, min(reach) if reach else None))
    return rows


def equivalent_up_to(spec_a: PSeriesSpec, spec_b: PSeriesSpec, cutoff: int,
                     elements: Sequence | None = None, sample_count: int = 200,
                     seed: int = 0, bound: int = 4) -> RefinementReport:
    """Finite refinement tables between two weight functions on a sample.

    Row ``(d, d')`` says every sampled ``x`` with ``w_a(x) >= d`` has
    ``w_b(x) >= d'`` and ``d'`` is the largest such threshold.  Sampling
    cannot prove equivalence of the topologies; it only exhibits data.
    """
    if spec_a.pres is not spec_b.pres and spec_a.pres.orders != spec_b.pres.orders:
        raise PolycentralError("specs live on different groups")
    if elements is None:
        rng = random.Random(seed)
        elements = [spec_a.pres.random_element(rng, bound) for _ in range(sample_count)]
    elements = [tuple(g) for g in elements if any(g)]
    wa = [spec_a.weight(g) for g in elements]
    wb = [spec_b.weight(g) for g in elements]
    return RefinementReport(cutoff, _refine(elements, wa, wb, cutoff), _refine(elements, wb, wa, cutoff),
                            len(elements))
