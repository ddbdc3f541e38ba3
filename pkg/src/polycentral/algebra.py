"""Truncated filtered algebras with a standard-monomial basis over F_p.

An algebra has ordered variables ``t_1 < ... < t_n`` (``t_1`` most central),
each with a positive integer weight and optionally a cap ``p^m``.  Elements
are F_p-combinations of standard monomials ``t_1^e_1 ... t_n^e_n``; the value
of a monomial is ``sum(e_i * weight_i)`` and everything of value above the
cutoff ``D`` is discarded, so all arithmetic happens modulo ``B_{D+1}``.

Out-of-order products are rewritten with commutation tails
``t_j t_i = t_i t_j + tail(i, j)`` and power tails ``t_i^cap = ptail(i)``.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from . import _backend
from .errors import AlgebraMismatch, GradedCheckFailed, InvalidRewriteSystem, NotAUnit

INF = math.inf


@dataclass(frozen=True)
class WeightedVariable:
    name: str
    weight: int
    cap: int | None = None


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % q for q in range(2, math.isqrt(p) + 1))


class FilteredElement:
    """An immutable element of a :class:`FilteredAlgebra`."""

    __slots__ = ("alg", "terms")

    def __init__(self, alg: "FilteredAlgebra", terms: dict):
        self.alg = alg
        self.terms = terms

    # -- arithmetic -------------------------------------------------------------
    def _check(self, other):
        if isinstance(other, int):
            return self.alg.scalar(other)
        if not isinstance(other, FilteredElement):
            return NotImplemented
        if other.alg is not self.alg:
            raise AlgebraMismatch("elements belong to different algebras")
        return other

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self.alg.add(self, other)

    __radd__ = __add__

    def __neg__(self):
        return self.alg.scale(-1, self)

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self.alg.add(self, self.alg.scale(-1, other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return self.alg.scale(other, self)
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self.alg.mul(self, other)

    def __rmul__(self, other):
        if isinstance(other, int):
            return self.alg.scale(other, self)
        return NotImplemented

    def __pow__(self, k: int):
        return self.alg.power(self, k)

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.alg.scalar(other)
        if not isinstance(other, FilteredElement):
            return NotImplemented
        return other.alg is self.alg and self.terms == other.terms

    __hash__ = None

    def __bool__(self):
        return bool(self.terms)

    # -- filtration -------------------------------------------------------------
    def value(self):
        return self.alg.value(self)

    def homogeneous_part(self, d: int) -> "FilteredElement":
        return self.alg.homogeneous_part(self, d)

    def leading_part(self) -> "FilteredElement":
        v = self.value()
        return self if v == INF else self.homogeneous_part(v)

    def constant_term(self) -> int:
        return self.terms.get(self.alg.zero_monomial, 0)

    def __str__(self):
        return self.alg.format(self)

    def __repr__(self):
        return f"<{self.alg.format(self)}>"


class FilteredAlgebra:
    """Truncated completed algebra over F_p with a polycentral rewriting system.

    ``tails`` maps ``(i, j)`` with ``i < j`` (0-based) to the correction in
    ``t_j t_i = t_i t_j + tail``; ``ptails`` maps a capped variable to
    ``t_i^cap``.  Both accept elements of this algebra-to-be as plain dicts
    ``{exponent tuple: coefficient}`` or callables ``alg -> FilteredElement``
    evaluated after the variables exist.
    """

    def __init__(
        self,
        p: int,
        variables: Sequence[WeightedVariable],
        cutoff: int,
        tails: Mapping | None = None,
        ptails: Mapping | None = None,
        validate: bool = True,
    ):
        if not _is_prime(p) or p > 2 ** 31:
            raise InvalidRewriteSystem(f"{p} is not a prime <= 2^31")
        self.p = p
        self.cutoff = int(cutoff)
        self.variables = tuple(variables)
        self.n = len(self.variables)
        for v in self.variables:
            if v.weight < 1:
                raise InvalidRewriteSystem(f"variable {v.name} has weight {v.weight} < 1")
            if v.cap is not None:
                c = v.cap
                while c % p == 0 and c > 1:
                    c //= p
                if c != 1 or v.cap < p:
                    raise InvalidRewriteSystem(f"cap of {v.name} is {v.cap}, not a power of {p}")
        if len({v.name for v in self.variables}) != self.n:
            raise InvalidRewriteSystem("variable names must be distinct")
        self.weights = tuple(v.weight for v in self.variables)
        self.caps = tuple(v.cap or 0 for v in self.variables)
        self.zero_monomial = (0,) * self.n
        self._index = {v.name: i for i, v in enumerate(self.variables)}
        self._monomials = None
        self._kernel = _backend.Rewriter(p, self.cutoff, self.weights, self.caps, {}, [None] * self.n)

        self.tails = {}
        for (i, j), t in (tails or {}).items():
            if not 0 <= i < j < self.n:
                raise InvalidRewriteSystem(f"tail index ({i}, {j}) out of range")
            t = self._coerce(t)
            if t:
                self.tails[(i, j)] = t
        self.ptails = {}
        for i, t in (ptails or {}).items():
            if not self.caps[i]:
                raise InvalidRewriteSystem(f"power tail given for uncapped variable {self.variables[i].name}")
            self.ptails[i] = self._coerce(t)
        for i in range(self.n):
            if self.caps[i] and i not in self.ptails:
                self.ptails[i] = self.zero()
        if validate:
            self.validate()
        self._kernel = _backend.Rewriter(
            p, self.cutoff, self.weights, self.caps,
            {k: t.terms for k, t in self.tails.items()},
            [self.ptails[i].terms if self.caps[i] else None for i in range(self.n)],
        )

    def _coerce(self, t) -> FilteredElement:
        if callable(t):
            t = t(self)
        if isinstance(t, FilteredElement):
            if t.alg.n != self.n or t.alg.p != self.p:
                raise InvalidRewriteSystem("tail lives in an incompatible algebra")
            return self.element(t.terms)
        return self.element(t)

    def validate(self) -> None:
        """Check the rewriting invariants; raise :class:`InvalidRewriteSystem`."""
        for (i, j), t in self.tails.items():
            if any(e for m in t.terms for e in m[j + 1:]):
                raise InvalidRewriteSystem(
                    f"tail({self.variables[i].name}, {self.variables[j].name}) uses variables beyond "
                    f"{self.variables[j].name}"
                )
            if self.value(t) <= self.weights[i] + self.weights[j]:
                raise InvalidRewriteSystem(
                    f"tail({self.variables[i].name}, {self.variables[j].name}) has value {self.value(t)}, "
                    f"needs > {self.weights[i] + self.weights[j]}"
                )
        for i, t in self.ptails.items():
            if any(e for m in t.terms for e in m[i:]):
                raise InvalidRewriteSystem(
                    f"power tail of {self.variables[i].name} must use only earlier variables"
                )
            if self.value(t) < self.caps[i] * self.weights[i]:
                raise InvalidRewriteSystem(
                    f"power tail of {self.variables[i].name} has value {self.value(t)} "
                    f"< {self.caps[i]} * {self.weights[i]}"
                )

    # -- constructors -----------------------------------------------------------
    def index(self, name_or_index) -> int:
        if isinstance(name_or_index, int):
            return name_or_index
        return self._index[name_or_index]

    def monomial_value(self, m) -> int:
        return sum(e * w for e, w in zip(m, self.weights))

    def element(self, terms: Mapping) -> FilteredElement:
        """Build an element from ``{exponent tuple: coefficient}``.

        Monomials must be standard (exponents below caps); values above the
        cutoff are dropped.
        """
        p = self.p
        out = {}
        for m, c in terms.items():
            m = tuple(int(e) for e in m)
            if len(m) != self.n:
                raise AlgebraMismatch(f"monomial {m} has wrong length")
            if any(e < 0 or (cap and e >= cap) for e, cap in zip(m, self.caps)):
                raise AlgebraMismatch(f"{m} is not a standard monomial")
            if self.monomial_value(m) > self.cutoff:
                continue
            c = (out.get(m, 0) + c) % p
            if c:
                out[m] = c
            else:
                out.pop(m, None)
        return FilteredElement(self, out)

    def zero(self) -> FilteredElement:
        return FilteredElement(self, {})

    def scalar(self, c: int) -> FilteredElement:
        c %= self.p
        return FilteredElement(self, {self.zero_monomial: c} if c else {})

    def one(self) -> FilteredElement:
        return self.scalar(1)

    def var(self, name_or_index, e: int = 1) -> FilteredElement:
        i = self.index(name_or_index)
        m = [0] * self.n
        m[i] = 1
        return self.power(self.element({tuple(m): 1}), e)

    def monomial(self, exponents: Sequence[int], c: int = 1) -> FilteredElement:
        return self.element({tuple(exponents): c})

    # -- ring operations --------------------------------------------------------
    def _own(self, x: FilteredElement) -> FilteredElement:
        if not isinstance(x, FilteredElement) or x.alg is not self:
            raise AlgebraMismatch("element does not belong to this algebra")
        return x

    def add(self, x: FilteredElement, y: FilteredElement) -> FilteredElement:
        self._own(x)
        self._own(y)
        p = self.p
        out = dict(x.terms)
        for m, c in y.terms.items():
            s = (out.get(m, 0) + c) % p
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return FilteredElement(self, out)

    def scale(self, c: int, x: FilteredElement) -> FilteredElement:
        self._own(x)
        c %= self.p
        if not c:
            return self.zero()
        p = self.p
        return FilteredElement(self, {m: a * c % p for m, a in x.terms.items()})

    def mul(self, x: FilteredElement, y: FilteredElement) -> FilteredElement:
        self._own(x)
        self._own(y)
        if not x.terms or not y.terms:
            return self.zero()
        return FilteredElement(self, self._kernel.mul(x.terms, y.terms))

    def power(self, x: FilteredElement, k: int) -> FilteredElement:
        if k < 0:
            x, k = self.unit_inverse(x), -k
        result = self.one()
        base = x
        while k:
            if k & 1:
                result = self.mul(result, base)
            k >>= 1
            if k:
                base = self.mul(base, base)
        return result

    def commutator(self, x: FilteredElement, y: FilteredElement) -> FilteredElement:
        """Ring commutator ``xy - yx``."""
        return self.mul(x, y) - self.mul(y, x)

    def unit_inverse(self, x: FilteredElement) -> FilteredElement:
        """Inverse of ``c + y`` (``c`` a nonzero scalar) by a truncated geometric series."""
        self._own(x)
        c = x.constant_term()
        if not c:
            raise NotAUnit(f"{self.format(x)} has zero constant term")
        cinv = pow(c, self.p - 2, self.p)
        w = self.scale(cinv, x) - self.one()
        z = -w
        total = self.one()
        term = self.one()
        while True:
            term = self.mul(term, z)
            if not term:
                break
            total = total + term
        return self.scale(cinv, total)

    # -- filtration -------------------------------------------------------------
    def value(self, x: FilteredElement):
        """Minimum monomial value; ``inf`` for zero (i.e. value above the cutoff)."""
        if not x.terms:
            return INF
        return min(self.monomial_value(m) for m in x.terms)

    def homogeneous_part(self, x: FilteredElement, d: int) -> FilteredElement:
        return FilteredElement(self, {m: c for m, c in x.terms.items() if self.monomial_value(m) == d})

    def components(self, x: FilteredElement) -> dict:
        out = {}
        for m, c in x.terms.items():
            out.setdefault(self.monomial_value(m), {})[m] = c
        return {d: FilteredElement(self, t) for d, t in sorted(out.items())}

    # -- group elements ---------------------------------------------------------
    def embed(self, g: Sequence[int], images: Sequence[FilteredElement]) -> FilteredElement:
        """The unit ``prod_i images[i]^g_i`` realising a normal-form group element."""
        if len(g) != len(images):
            raise AlgebraMismatch("generator dictionary does not cover the element")
        result = self.one()
        for e, u in zip(g, images):
            if e:
                result = self.mul(result, self.power(u, e))
        return result

    # -- basis ------------------------------------------------------------------
    def standard_monomials(self, max_value: int | None = None) -> list:
        """All standard monomials of value <= max_value, in storage order."""
        if max_value is None:
            max_value = self.cutoff
        if self._monomials is None:
            self._monomials = self._enumerate(self.cutoff)
        return [m for m in self._monomials if self.monomial_value(m) <= max_value]

    def _enumerate(self, bound: int) -> list:
        out = []

        def rec(i, prefix, v):
            if i == self.n:
                out.append(tuple(prefix))
                return
            w = self.weights[i]
            e = 0
            while v + e * w <= bound and (not self.caps[i] or e < self.caps[i]):
                prefix.append(e)
                rec(i + 1, prefix, v + e * w)
                prefix.pop()
                e += 1

        rec(0, [], 0)
        out.sort(key=lambda m: (self.monomial_value(m), m))
        return out

    def count_monomials(self, d: int) -> int:
        return sum(1 for m in self.standard_monomials(d) if self.monomial_value(m) == d)

    def random_element(self, rng: random.Random, terms: int = 3, min_value: int = 0,
                       max_value: int | None = None) -> FilteredElement:
        pool = [m for m in self.standard_monomials(max_value)
                if self.monomial_value(m) >= min_value]
        if not pool:
            return self.zero()
        k = rng.randint(1, terms)
        return self.element({rng.choice(pool): rng.randrange(1, self.p) for _ in range(k)})

    def power_regime(self, i: int) -> str | None:
        """'a' if ``value(ptail) == cap*weight``, 'b' if larger, None if uncapped."""
        if not self.caps[i]:
            return None
        v = self.value(self.ptails[i])
        return "a" if v == self.caps[i] * self.weights[i] else "b"

    def expects_domain(self) -> bool:
        return all(self.power_regime(i) != "b" for i in range(self.n))

    # -- output -----------------------------------------------------------------
    def sort_key(self, m):
        return (self.monomial_value(m), m)

    def format_monomial(self, m) -> str:
        return " ".join(f"{self.variables[i].name}^{e}" for i, e in enumerate(m) if e)

    def format(self, x: FilteredElement) -> str:
        if not x.terms:
            return "0"
        parts = []
        for m in sorted(x.terms, key=self.sort_key):
            c = x.terms[m]
            mono = self.format_monomial(m)
            parts.append(f"{c} * {mono}" if mono else f"{c}")
        return " + ".join(parts)

    def describe(self) -> str:
        vs = ", ".join(
            f"{v.name}(w={v.weight}{', cap=' + str(v.cap) if v.cap else ''})" for v in self.variables
        )
        return f"FilteredAlgebra(p={self.p}, D={self.cutoff}, [{vs}])"

    def __repr__(self):
        return self.describe()


# module-level spellings of the element operations
def add(x, y):
    return x.alg.add(x, y)


def scale(c, x):
    return x.alg.scale(c, x)


def mul(x, y):
    if x.alg is not y.alg:
        raise AlgebraMismatch("elements belong to different algebras")
    return x.alg.mul(x, y)


def value(x):
    return x.alg.value(x)


def homogeneous_part(x, d):
    return x.alg.homogeneous_part(x, d)


def unit_inverse(x):
    return x.alg.unit_inverse(x)


@dataclass
class GradedReport:
    ok: bool
    cutoff: int
    checked: int
    domain_checked: bool
    witness: tuple | None = None
    message: str = ""
    min_commutator_margin: float = INF


def check_graded_polynomial(alg: FilteredAlgebra, sample_count: int = 500, seed: int = 0,
                            strict: bool = True, require_domain: bool | None = None,
                            terms: int = 3) -> GradedReport:
    """Sample the two properties that make ``gr`` a commutative domain.

    (a) ``value(xy) == value(x) + value(y)`` when the sum is within the cutoff;
    (b) ``value(xy - yx) > value(x) + value(y)``.
    (a) is skipped when a power tail is nilpotent in ``gr`` (regime 'b'),
    unless ``require_domain`` forces it.
    """
    if require_domain is None:
        require_domain = alg.expects_domain()
    rng = random.Random(seed)
    margin = INF
    D = alg.cutoff
    for k in range(sample_count):
        x = alg.random_element(rng, terms, min_value=0)
        y = alg.random_element(rng, terms, min_value=0)
        vx, vy = alg.value(x), alg.value(y)
        if vx == INF or vy == INF:
            continue
        xy = alg.mul(x, y)
        s = vx + vy
        bad = None
        if require_domain and s <= D and alg.value(xy) != s:
            bad = f"value(xy) = {alg.value(xy)} != {vx} + {vy}"
        else:
            c = xy - alg.mul(y, x)
            vc = alg.value(c)
            if vc != INF:
                margin = min(margin, vc - s)
            if vc <= s:
                bad = f"value(xy - yx) = {vc} <= {vx} + {vy}"
        if bad:
            rep = GradedReport(False, D, k + 1, require_domain, (str(x), str(y)), bad, margin)
            if strict:
                raise GradedCheckFailed(bad, (x, y))
            return rep
    return GradedReport(True, D, sample_count, require_domain, None,
                        f"graded checks passed up to cutoff D={D}", margin)
