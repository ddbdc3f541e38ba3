"""Built-in polycyclic presentations used by scenarios and tests."""

from __future__ import annotations

from .pcgroup import PcPresentation


def free_abelian(p: int, rank: int, names=None) -> PcPresentation:
    if names is None:
        names = ["g"] if rank == 1 else [f"g{i + 1}" for i in range(rank)]
    return PcPresentation(p, [None] * rank, names=names)


def heisenberg(p: int) -> PcPresentation:
    """Integer Heisenberg group on ``(a, b, z)`` with ``[a, b] = z`` central.

    ``a^-1 b a = b z^-1`` and ``a b a^-1 = b z``.
    """
    return PcPresentation(
        p,
        [None, None, None],
        conj={(0, 1): (0, 1, -1)},
        conj_inv={(0, 1): (0, 1, 1)},
        names=("a", "b", "z"),
    )


def cyclic_p_power(p: int, m: int) -> PcPresentation:
    """``C_{p^m}`` refined into ``m`` generators ``g_i = g^(p^(i-1))`` of order p."""
    if m < 1:
        raise ValueError("m must be >= 1")
    names = ["g"] + [f"g{p ** i}" for i in range(1, m)]
    powers = {}
    for i in range(m - 1):
        powers[i] = tuple(int(j == i + 1) for j in range(m))
    return PcPresentation(p, [p] * m, powers=powers, names=names)


def cyclic_tower(p: int, levels: int) -> PcPresentation:
    """Infinite cyclic ``<g>`` refined through ``g, g^p, ..., g^(p^levels)``.

    The first ``levels`` generators have relative order ``p``; the last one
    generates the infinite cyclic subgroup ``<g^(p^levels)>``.
    """
    n = levels + 1
    names = ["g"] + [f"g{p ** i}" for i in range(1, n)]
    orders = [p] * levels + [None]
    powers = {i: tuple(int(j == i + 1) for j in range(n)) for i in range(levels)}
    return PcPresentation(p, orders, powers=powers, names=names)


def direct_product(a: PcPresentation, b: PcPresentation) -> PcPresentation:
    if a.p != b.p:
        from .errors import PrimeMismatch
        raise PrimeMismatch(f"primes differ: {a.p} vs {b.p}")
    na = a.n
    pad = (0,) * b.n

    def left(v):
        return tuple(v) + pad

    def right(v):
        return (0,) * na + tuple(v)

    powers = {i: left(w) for i, w in a.powers.items()}
    powers.update({na + i: right(w) for i, w in b.powers.items()})
    conj = {k: left(w) for k, w in a.conj.items()}
    conj.update({(na + i, na + j): right(w) for (i, j), w in b.conj.items()})
    conj_inv = {k: left(w) for k, w in a.conj_inv.items()}
    conj_inv.update({(na + i, na + j): right(w) for (i, j), w in b.conj_inv.items()})
    names = list(a.names) + list(b.names)
    if len(set(names)) != len(names):
        names = [f"{x}_1" for x in a.names] + [f"{x}_2" for x in b.names]
    return PcPresentation(a.p, a.orders + b.orders, powers, conj, conj_inv, names)
