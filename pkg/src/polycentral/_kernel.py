"""Pure-Python rewriting and linear-algebra kernels.

This module and the compiled ``_ckernel`` expose the same API; ``_backend``
picks one at import.  Monomials are exponent tuples, elements are dicts
``{monomial: coefficient}`` with coefficients already reduced mod p.
Returned dicts may be shared memo entries and must not be mutated.
"""


class Rewriter:
    """Normal-form multiplication in a truncated polycentral algebra.

    ``tails[(i, j)]`` (``i < j``) is the element with
    ``t_j t_i = t_i t_j + tails[(i, j)]``; ``ptails[i]`` is ``t_i^caps[i]``
    for capped variables (``caps[i] == 0`` means uncapped).
    """

    def __init__(self, p, cutoff, weights, caps, tails, ptails):
        self.p = p
        self.cutoff = cutoff
        self.weights = tuple(weights)
        self.caps = tuple(caps)
        self.n = len(self.weights)
        self.tails = dict(tails)
        self.ptails = list(ptails)
        self._val = {}
        self._mv = {}
        self._mm = {}

    def value(self, m):
        v = self._val.get(m)
        if v is None:
            v = 0
            for e, w in zip(m, self.weights):
                v += e * w
            self._val[m] = v
        return v

    def _add_into(self, acc, x, c):
        p = self.p
        for m, a in x.items():
            s = (acc.get(m, 0) + a * c) % p
            if s:
                acc[m] = s
            else:
                acc.pop(m, None)

    def mul_mono_var(self, m, i):
        key = (m, i)
        r = self._mv.get(key)
        if r is not None:
            return r
        if self.value(m) + self.weights[i] > self.cutoff:
            r = {}
        else:
            j = self.n - 1
            while j >= 0 and m[j] == 0:
                j -= 1
            if j <= i:
                e = m[i] + 1
                cap = self.caps[i]
                if cap and e == cap:
                    base = m[:i] + (0,) + m[i + 1:]
                    r = self.mul_mono_elem(base, self.ptails[i])
                else:
                    r = {m[:i] + (e,) + m[i + 1:]: 1}
            else:
                rest = m[:j] + (m[j] - 1,) + m[j + 1:]
                r = {}
                for mm, c in self.mul_mono_var(rest, i).items():
                    self._add_into(r, self.mul_mono_var(mm, j), c)
                tail = self.tails.get((i, j))
                if tail:
                    self._add_into(r, self.mul_mono_elem(rest, tail), 1)
        self._mv[key] = r
        return r

    def mul_mono_elem(self, m, x):
        acc = {}
        for m2, c in x.items():
            self._add_into(acc, self.mul_mono_mono(m, m2), c)
        return acc

    def mul_mono_mono(self, m1, m2):
        key = (m1, m2)
        r = self._mm.get(key)
        if r is not None:
            return r
        if self.value(m1) + self.value(m2) > self.cutoff:
            r = {}
        else:
            n = self.n
            f = 0
            while f < n and m2[f] == 0:
                f += 1
            if f == n:
                r = {m1: 1}
            else:
                last = n - 1
                while last >= 0 and m1[last] == 0:
                    last -= 1
                if last < f:
                    r = {tuple(a + b for a, b in zip(m1, m2)): 1}
                else:
                    rest = m2[:f] + (m2[f] - 1,) + m2[f + 1:]
                    r = {}
                    for mm, c in self.mul_mono_var(m1, f).items():
                        self._add_into(r, self.mul_mono_mono(mm, rest), c)
        self._mm[key] = r
        return r

    def mul(self, x, y):
        cutoff = self.cutoff
        ys = sorted(((self.value(m), m, c) for m, c in y.items()), key=lambda t: t[0])
        acc = {}
        for m1, c1 in x.items():
            v1 = self.value(m1)
            for v2, m2, c2 in ys:
                if v1 + v2 > cutoff:
                    break
                c = c1 * c2
                for m, a in self.mul_mono_mono(m1, m2).items():
                    acc[m] = acc.get(m, 0) + a * c
        p = self.p
        out = {}
        for m, a in acc.items():
            a %= p
            if a:
                out[m] = a
        return out


def rref(rows, p):
    """Reduced row echelon form over F_p.

    ``rows`` is a list of equal-length integer lists.  Returns
    ``(basis, pivots)`` where ``basis`` holds the nonzero reduced rows.
    """
    mat = [[a % p for a in r] for r in rows]
    pivots = []
    if not mat:
        return [], pivots
    ncols = len(mat[0])
    rank = 0
    for col in range(ncols):
        piv = None
        for r in range(rank, len(mat)):
            if mat[r][col]:
                piv = r
                break
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        row = mat[rank]
        inv = pow(row[col], p - 2, p)
        if inv != 1:
            row = mat[rank] = [a * inv % p for a in row]
        for r in range(len(mat)):
            if r != rank:
                other = mat[r]
                f = other[col]
                if f:
                    mat[r] = [(a - f * b) % p for a, b in zip(other, row)]
        pivots.append(col)
        rank += 1
        if rank == len(mat):
            break
    return mat[:rank], pivots
