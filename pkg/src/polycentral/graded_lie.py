"""The restricted Lie algebra of a p-series, realised inside ``gr`` of a filtered algebra.

The class of ``h`` in ``H_d / H_{d+1}`` is represented by the degree-``d``
part of ``embed(h) - 1``.  Brackets and the [p]-map can be computed two
ways: from the group (leading part of ``embed([g, h]) - 1`` or
``embed(g^p) - 1`` in the expected degree, else zero) or from the ring
(commutator or p-th power of the bodies).  The two must agree.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from . import _backend
from .algebra import INF, FilteredAlgebra, FilteredElement
from .errors import AxiomViolated, ExceedsCutoff, IdentityElement, PolycentralError


@dataclass(frozen=True, eq=False)
class HomogeneousElement:
    degree: int
    body: FilteredElement
    source: tuple | None = None  # group element whose class this is, when known

    def is_zero(self) -> bool:
        return not self.body

    def __eq__(self, other):
        if not isinstance(other, HomogeneousElement):
            return NotImplemented
        return self.degree == other.degree and self.body == other.body

    def __str__(self):
        return f"[{self.degree}] {self.body}"


def _zero(alg: FilteredAlgebra, degree: int, source=None) -> HomogeneousElement:
    return HomogeneousElement(degree, alg.zero(), source)


def hom_component(g: Sequence[int], ga) -> HomogeneousElement:
    """Degree and leading part of ``embed(g) - 1``."""
    g = tuple(g)
    if not any(g):
        raise IdentityElement("the identity has no homogeneous component")
    alg = ga.algebra
    x = ga.embed(g) - alg.one()
    d = alg.value(x)
    if d == INF:
        raise ExceedsCutoff(f"{ga.pres.format(g)} has weight above the cutoff {alg.cutoff}")
    return HomogeneousElement(d, alg.homogeneous_part(x, d), g)


def _group_class(ga, g: tuple, degree: int) -> HomogeneousElement:
    alg = ga.algebra
    x = ga.embed(g) - alg.one()
    v = alg.value(x)
    if v < degree:
        raise AxiomViolated(f"{ga.pres.format(g)} has weight {v} < expected degree {degree}", (g,))
    if v > degree:
        return _zero(alg, degree, g)
    return HomogeneousElement(degree, alg.homogeneous_part(x, degree), g)


def bracket(x: HomogeneousElement, y: HomogeneousElement, ga=None, route: str = "ring") -> HomogeneousElement:
    alg = x.body.alg
    d = x.degree + y.degree
    if d > alg.cutoff:
        raise ExceedsCutoff(f"degree {d} exceeds the cutoff {alg.cutoff}")
    source = None
    if ga is not None and x.source is not None and y.source is not None:
        source = ga.pres.commutator(x.source, y.source)
    if route == "group":
        if source is None:
            raise PolycentralError("the group route needs source elements and a group algebra")
        return _group_class(ga, source, d)
    body = alg.homogeneous_part(alg.commutator(x.body, y.body), d)
    return HomogeneousElement(d, body, source)


def p_power(x: HomogeneousElement, ga=None, route: str = "ring") -> HomogeneousElement:
    alg = x.body.alg
    p = alg.p
    d = p * x.degree
    if d > alg.cutoff:
        raise ExceedsCutoff(f"degree {d} exceeds the cutoff {alg.cutoff}")
    source = None
    if ga is not None and x.source is not None:
        source = ga.pres.power(x.source, p)
    if route == "group":
        if source is None:
            raise PolycentralError("the group route needs a source element and a group algebra")
        return _group_class(ga, source, d)
    return HomogeneousElement(d, alg.homogeneous_part(alg.power(x.body, p), d), source)


class _DegreeSpace:
    """Incrementally row-reduced span of vectors in one degree."""

    def __init__(self, alg: FilteredAlgebra, degree: int):
        self.alg = alg
        self.degree = degree
        self.monomials = [m for m in alg.standard_monomials(degree) if alg.monomial_value(m) == degree]
        self.position = {m: i for i, m in enumerate(self.monomials)}
        self.rows = []  # (pivot, row) with row[pivot] == 1
        self.elements = []

    def vector(self, x: FilteredElement) -> list:
        v = [0] * len(self.monomials)
        for m, c in x.terms.items():
            v[self.position[m]] = c
        return v

    def reduce(self, v: list) -> list:
        p = self.alg.p
        v = list(v)
        for piv, row in self.rows:
            f = v[piv]
            if f:
                v = [(a - f * b) % p for a, b in zip(v, row)]
        return v

    def add(self, x: FilteredElement) -> bool:
        v = self.reduce(self.vector(x))
        piv = next((i for i, a in enumerate(v) if a), None)
        if piv is None:
            return False
        p = self.alg.p
        inv = pow(v[piv], p - 2, p)
        self.rows.append((piv, [a * inv % p for a in v]))
        self.elements.append(x)
        return True

    def rank_of(self, xs: Iterable[FilteredElement]) -> int:
        rows = [self.vector(x) for x in xs]
        if not rows:
            return 0
        basis, _ = _backend.rref(rows, self.alg.p)
        return len(basis)

    def canonical_basis(self) -> list:
        if not self.rows:
            return []
        basis, _ = _backend.rref([r for _, r in self.rows], self.alg.p)
        return [self.alg.element({m: c for m, c in zip(self.monomials, row) if c}) for row in basis]


@dataclass
class GradedBasis:
    algebra: FilteredAlgebra
    cutoff: int
    spaces: dict = field(default_factory=dict)  # degree -> _DegreeSpace
    generators: dict = field(default_factory=dict)  # degree -> list of HomogeneousElement added

    def dims(self) -> dict:
        return {d: len(s.rows) for d, s in sorted(self.spaces.items()) if s.rows}

    def basis(self, d: int) -> list:
        s = self.spaces.get(d)
        return s.canonical_basis() if s else []

    def elements(self) -> list:
        out = []
        for d in sorted(self.generators):
            out.extend(self.generators[d])
        return out

    def serialize(self) -> str:
        lines = []
        for d, dim in self.dims().items():
            lines.append(f"degree {d}: dim {dim}")
            for b in self.basis(d):
                lines.append(f"  {b}")
        return "\n".join(lines) + ("\n" if lines else "")


def generate_subalgebra(seeds: Sequence[HomogeneousElement], cutoff: int | None = None,
                        algebra: FilteredAlgebra | None = None) -> GradedBasis:
    """Restricted Lie subalgebra of ``gr`` spanned by the seeds, closed under bracket and [p].

    Only degrees up to ``cutoff`` are kept.  New independent elements are
    bracketed with every element found so far and raised to the p-th power;
    since ``(x + y)^[p] - x^[p] - y^[p]`` is a Lie polynomial this closes
    the span.
    """
    if algebra is None:
        if not seeds:
            raise PolycentralError("an algebra is needed when there are no seeds")
        algebra = seeds[0].body.alg
    D = algebra.cutoff if cutoff is None else min(cutoff, algebra.cutoff)
    p = algebra.p
    gb = GradedBasis(algebra, D)
    queue = deque(s for s in seeds if s.degree <= D)
    found = []
    while queue:
        h = queue.popleft()
        if h.is_zero() or h.degree > D:
            continue
        space = gb.spaces.get(h.degree)
        if space is None:
            space = gb.spaces[h.degree] = _DegreeSpace(algebra, h.degree)
        if not space.add(h.body):
            continue
        gb.generators.setdefault(h.degree, []).append(h)
        for e in found + [h]:
            if e.degree + h.degree <= D:
                queue.append(bracket(h, e))
        if p * h.degree <= D:
            queue.append(p_power(h))
        found.append(h)
    return gb


@dataclass
class Classification:
    cutoff: int
    dims: dict
    abelian_up_to_D: bool
    exponent_p_up_to_D: bool
    free_abelian_up_to_D: bool
    rank_estimate: int
    rank_degrees: dict  # degree -> number of generators not in the [p]-image

    def summary(self) -> str:
        return (f"up to cutoff D={self.cutoff}: abelian={self.abelian_up_to_D} "
                f"exponent_p={self.exponent_p_up_to_D} free_abelian={self.free_abelian_up_to_D} "
                f"rank_estimate={self.rank_estimate} (rank counted in degrees <= D/p)")

    def to_dict(self) -> dict:
        return {
            "cutoff": self.cutoff,
            "dims": {str(d): n for d, n in self.dims.items()},
            "abelian_up_to_D": self.abelian_up_to_D,
            "exponent_p_up_to_D": self.exponent_p_up_to_D,
            "free_abelian_up_to_D": self.free_abelian_up_to_D,
            "rank_estimate": self.rank_estimate,
            "rank_degrees": {str(d): n for d, n in self.rank_degrees.items()},
        }


def classify(basis: GradedBasis, cutoff: int | None = None) -> Classification:
    alg = basis.algebra
    D = basis.cutoff if cutoff is None else min(cutoff, basis.cutoff)
    p = alg.p
    per_degree = {d: [HomogeneousElement(d, b) for b in basis.basis(d)] for d in basis.dims() if d <= D}
    elems = [x for d in sorted(per_degree) for x in per_degree[d]]

    abelian = True
    for i, x in enumerate(elems):
        for y in elems[i + 1:]:
            if x.degree + y.degree <= D and not bracket(x, y).is_zero():
                abelian = False
                break
        if not abelian:
            break

    exponent_p = True
    injective = True
    images = {}
    for d, xs in per_degree.items():
        if p * d > D:
            continue
        pw = [p_power(x) for x in xs]
        if any(not y.is_zero() for y in pw):
            exponent_p = False
        images[p * d] = [y.body for y in pw]
        space = _DegreeSpace(alg, p * d)
        if space.rank_of(images[p * d]) < len(xs):
            injective = False

    # Free generators in degree d: the part of L_d outside the [p]-image whose
    # p-th powers survive.  Counted as rank([p] on L_d) - rank([p] on [p]L_{d/p}),
    # which is dim L_d - dim [p]L_{d/p} when [p] is injective and 0 for exponent p.
    rank_degrees = {}
    for d, xs in per_degree.items():
        if p * d > D:
            continue
        space = _DegreeSpace(alg, p * d)
        r = space.rank_of(images[p * d])
        below = images.get(d, [])
        if below:
            r -= space.rank_of([alg.homogeneous_part(alg.power(b, p), p * d) for b in below])
        if r:
            rank_degrees[d] = r
    return Classification(D, {d: len(xs) for d, xs in per_degree.items()}, abelian, exponent_p,
                          abelian and injective, sum(rank_degrees.values()), rank_degrees)
