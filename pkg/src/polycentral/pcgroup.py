"""Polycyclic groups given by consistent polycyclic presentations.

Elements are exponent vectors ``(e_1, ..., e_n)`` standing for the normal
form ``g_1^e_1 * ... * g_n^e_n``.  Generator ``g_1`` is the top of the series
``H = <g_1..g_n> > <g_2..g_n> > ... > <g_n> > 1``; each ``<g_i..g_n>`` is
normalised by ``g_{i-1}``.

Products are computed by collection from the left with an explicit stack
of pending letters.  Exponents of infinite-order generators are Python
integers, so nothing overflows.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import InconsistentPresentation, PolycentralError

ExponentVector = tuple  # tuple[int, ...]

INFINITE = None


def _is_p_power(n: int, p: int) -> bool:
    if n < p:
        return False
    while n % p == 0:
        n //= p
    return n == 1


class PcPresentation:
    """An immutable polycyclic presentation over a fixed prime ``p``.

    ``orders[i]`` is ``None`` for an infinite-order generator or a power of
    ``p``.  ``powers[i]`` is the normal form of ``g_i^{orders[i]}`` (support in
    generators ``> i``).  ``conj[(i, j)]`` is ``g_i^-1 g_j g_i`` and
    ``conj_inv[(i, j)]`` is ``g_i g_j g_i^-1`` for ``i < j`` (support in
    generators ``>= j``).  Missing entries mean the generators commute / the
    power is trivial.  ``conj_inv`` is only consulted for infinite-order
    ``g_i``; it is required there whenever ``conj[(i, j)]`` is nontrivial.
    """

    def __init__(
        self,
        p: int,
        orders: Sequence[int | None],
        powers: Mapping[int, Sequence[int]] | None = None,
        conj: Mapping[tuple[int, int], Sequence[int]] | None = None,
        conj_inv: Mapping[tuple[int, int], Sequence[int]] | None = None,
        names: Sequence[str] | None = None,
    ):
        self.p = int(p)
        self.orders = tuple(None if o is None else int(o) for o in orders)
        n = self.n = len(self.orders)
        if names is None:
            names = [f"g{i + 1}" for i in range(n)]
        if len(names) != n or len(set(names)) != n:
            raise PolycentralError("generator names must be distinct, one per generator")
        self.names = tuple(names)
        for i, o in enumerate(self.orders):
            if o is not None and not _is_p_power(o, self.p):
                raise PolycentralError(
                    f"relative order of {self.names[i]} is {o}, not infinite or a power of {self.p}"
                )

        self._identity = (0,) * n
        self.powers = {}
        for i, w in (powers or {}).items():
            w = self._vector(w)
            if self.orders[i] is None:
                raise PolycentralError(f"power relation given for infinite generator {self.names[i]}")
            if any(w[: i + 1]):
                raise PolycentralError(f"power word of {self.names[i]} must lie in deeper generators")
            self.powers[i] = w
        self.conj = {}
        self.conj_inv = {}
        for table, target in ((conj or {}, self.conj), (conj_inv or {}, self.conj_inv)):
            for (i, j), w in table.items():
                w = self._vector(w)
                if not 0 <= i < j < n:
                    raise PolycentralError(f"conjugation pair ({i}, {j}) out of range")
                if any(w[:j]):
                    raise PolycentralError(
                        f"conjugate of {self.names[j]} by {self.names[i]} must lie in <{self.names[j]}..>"
                    )
                target[(i, j)] = w
        for (i, j), w in self.conj.items():
            if self.orders[i] is None and w != self.generator(j) and (i, j) not in self.conj_inv:
                raise PolycentralError(
                    f"conj_inv[({i}, {j})] is required: {self.names[i]} has infinite order"
                )

        # letter lists (gen, exp) used by the collector
        self._conj_letters = {}
        for i in range(n):
            for j in range(i + 1, n):
                self._conj_letters[(i, j, 1)] = self._letters(self.conj.get((i, j), self.generator(j)))
                if self.orders[i] is None:
                    self._conj_letters[(i, j, -1)] = self._letters(
                        self.conj_inv.get((i, j), self.generator(j))
                    )
        self._power_letters = {i: self._letters(self.powers.get(i, self._identity))
                               for i in range(n) if self.orders[i] is not None}

    # -- construction helpers -------------------------------------------------
    def _vector(self, w) -> ExponentVector:
        w = tuple(int(e) for e in w)
        if len(w) != self.n:
            raise PolycentralError(f"exponent vector {w} has wrong length (expected {self.n})")
        return w

    @staticmethod
    def _letters(v: ExponentVector) -> list:
        return [(j, e) for j, e in enumerate(v) if e]

    def identity(self) -> ExponentVector:
        return self._identity

    def generator(self, i: int, e: int = 1) -> ExponentVector:
        if e == 1:
            return tuple(int(j == i) for j in range(self.n))
        return self.collect([(i, e)])

    def is_finite(self) -> bool:
        return all(o is not None for o in self.orders)

    def hirsch_number(self) -> int:
        return sum(1 for o in self.orders if o is None)

    def is_normal_form(self, x: Sequence[int]) -> bool:
        if len(x) != self.n:
            return False
        return all(o is None or 0 <= e < o for e, o in zip(x, self.orders))

    def format(self, x: ExponentVector) -> str:
        parts = [self.names[i] if e == 1 else f"{self.names[i]}^{e}" for i, e in enumerate(x) if e]
        return " ".join(parts) if parts else "1"

    # -- collection -------------------------------------------------------------
    def collect(self, word: Iterable) -> ExponentVector:
        """Normal form of a word.

        Letters are either signed 1-based generator indices (``-2`` is
        ``g_2^-1``) or ``(index0, exponent)`` pairs.
        """
        letters = []
        for a in word:
            if isinstance(a, tuple):
                i, e = a
            else:
                if a == 0 or abs(a) > self.n:
                    raise PolycentralError(f"invalid generator letter {a}")
                i, e = abs(a) - 1, (1 if a > 0 else -1)
            if not 0 <= i < self.n:
                raise PolycentralError(f"invalid generator index {i}")
            letters.append((i, e))
        x = [0] * self.n
        self._collect_onto(x, letters[::-1])
        return tuple(x)

    def _push_word(self, stack: list, letters: list, count: int) -> None:
        # push letters^count so that the leftmost letter pops first
        if count == 0 or not letters:
            return
        if count < 0:
            letters = [(j, -e) for j, e in reversed(letters)]
            count = -count
        if len(letters) == 1:
            j, e = letters[0]
            stack.append((j, e * count))
            return
        rev = letters[::-1]
        for _ in range(count):
            stack.extend(rev)

    def _collect_onto(self, x: list, stack: list) -> None:
        n = self.n
        orders = self.orders
        while stack:
            i, e = stack.pop()
            if e == 0:
                continue
            tail_clear = not any(x[i + 1:])
            if tail_clear:
                self._add_exponent(x, i, e, stack)
                continue
            if e > 1 or e < -1:
                s = 1 if e > 0 else -1
                stack.append((i, e - s))
                stack.append((i, s))
                continue
            if e == -1 and orders[i] is not None:
                # g^-1 = g^(r-1) * w^-1 with w = g^r
                self._push_word(stack, self._power_letters[i], -1)
                stack.append((i, orders[i] - 1))
                continue
            # x = prefix * suffix, x * g_i^e = prefix * g_i^e * (g_i^-e suffix g_i^e)
            suffix = x[i + 1:]
            for j in range(i + 1, n):
                x[j] = 0
            for j in range(n - 1, i, -1):
                if suffix[j - i - 1]:
                    self._push_word(stack, self._conj_letters[(i, j, e)], suffix[j - i - 1])
            self._add_exponent(x, i, e, stack)

    def _add_exponent(self, x: list, i: int, e: int, stack: list) -> None:
        order = self.orders[i]
        if order is None:
            x[i] += e
            return
        q, r = divmod(x[i] + e, order)
        x[i] = r
        if q:
            self._push_word(stack, self._power_letters[i], q)

    # -- group operations -------------------------------------------------------
    def multiply(self, x: ExponentVector, y: ExponentVector) -> ExponentVector:
        out = list(x)
        self._collect_onto(out, [(j, e) for j, e in reversed(list(enumerate(y))) if e])
        return tuple(out)

    def product(self, *xs: ExponentVector) -> ExponentVector:
        out = self._identity
        for x in xs:
            out = self.multiply(out, x)
        return out

    def inverse(self, x: ExponentVector) -> ExponentVector:
        out = [0] * self.n
        # x^-1 = g_n^-e_n ... g_1^-e_1; the stack pops the leftmost letter first
        self._collect_onto(out, [(j, -e) for j, e in enumerate(x) if e])
        return tuple(out)

    def power(self, x: ExponentVector, k: int) -> ExponentVector:
        if k < 0:
            x, k = self.inverse(x), -k
        result = self._identity
        base = x
        while k:
            if k & 1:
                result = self.multiply(result, base)
            k >>= 1
            if k:
                base = self.multiply(base, base)
        return result

    def commutator(self, x: ExponentVector, y: ExponentVector) -> ExponentVector:
        """``x^-1 y^-1 x y``."""
        return self.product(self.inverse(x), self.inverse(y), x, y)

    def conjugate(self, x: ExponentVector, by: ExponentVector) -> ExponentVector:
        """``by^-1 x by``."""
        return self.product(self.inverse(by), x, by)

    def random_element(self, rng: random.Random, bound: int = 3) -> ExponentVector:
        return tuple(
            rng.randint(-bound, bound) if o is None else rng.randrange(o) for o in self.orders
        )

    def __repr__(self):
        return f"PcPresentation(p={self.p}, names={self.names}, orders={self.orders})"


def collect(word, pres: PcPresentation) -> ExponentVector:
    return pres.collect(word)


def multiply(x, y, pres: PcPresentation) -> ExponentVector:
    return pres.multiply(x, y)


@dataclass
class ConsistencyReport:
    ok: bool
    checked: int
    witness: tuple | None = None
    message: str = ""
    details: list = field(default_factory=list)


def check_consistency(pres: PcPresentation, sample_count: int = 1000, seed: int = 0,
                      strict: bool = True, bound: int = 3) -> ConsistencyReport:
    """Sampled consistency test of a presentation.

    Checks the defining relations against the collector, then associativity
    and inverses on ``sample_count`` pseudorandom triples.  With ``strict``
    the first failure raises :class:`InconsistentPresentation`.
    """
    rng = random.Random(seed)
    one = pres.identity()
    checked = 0

    def fail(msg, witness):
        report = ConsistencyReport(False, checked, witness, msg)
        if strict:
            raise InconsistentPresentation(msg, witness)
        return report

    n = pres.n
    gens = [pres.generator(i) for i in range(n)]
    for i in range(n):
        g = gens[i]
        gi = pres.inverse(g)
        checked += 1
        if pres.multiply(g, gi) != one or pres.multiply(gi, g) != one:
            return fail(f"{pres.names[i]} * {pres.names[i]}^-1 != 1", (g, gi))
        if pres.orders[i] is not None:
            r = pres.orders[i]
            gr1 = pres.power(g, r - 1)
            w = pres.powers.get(i, one)
            if pres.multiply(gr1, g) != w or pres.multiply(g, gr1) != w:
                return fail(f"power relation of {pres.names[i]} is incoherent", (g, gr1, w))
        for j in range(i + 1, n):
            checked += 1
            gj = gens[j]
            want = pres.conj.get((i, j), gj)
            if pres.product(gi, gj, g) != want:
                return fail(f"{pres.names[i]}^-1 {pres.names[j]} {pres.names[i]} != stated conjugate",
                            (gi, gj, g))
            if pres.orders[i] is None:
                want_inv = pres.conj_inv.get((i, j), gj)
                if pres.product(g, gj, gi) != want_inv:
                    return fail(f"{pres.names[i]} {pres.names[j]} {pres.names[i]}^-1 != stated conjugate",
                                (g, gj, gi))
                if pres.product(gi, want_inv, g) != gj:
                    return fail(f"conj and conj_inv of ({pres.names[i]}, {pres.names[j]}) are not inverse",
                                (gi, want_inv, g))
    for _ in range(sample_count):
        x, y, z = (pres.random_element(rng, bound) for _ in range(3))
        checked += 1
        if pres.multiply(pres.multiply(x, y), z) != pres.multiply(x, pres.multiply(y, z)):
            return fail("(xy)z != x(yz)", (x, y, z))
        if pres.multiply(x, pres.inverse(x)) != one:
            return fail("x * x^-1 != 1", (x,))
    return ConsistencyReport(True, checked, None, "consistent on all samples")
