# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled twin of ``_kernel``: same API, same results."""


cdef class Rewriter:
    cdef public long p
    cdef public long cutoff
    cdef public int n
    cdef public tuple weights
    cdef public tuple caps
    cdef public dict tails
    cdef public list ptails
    cdef dict _val
    cdef dict _mv
    cdef dict _mm

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

    cpdef long value(self, tuple m):
        cdef object v = self._val.get(m)
        cdef long s = 0
        cdef int i
        if v is not None:
            return <long>v
        for i in range(self.n):
            s += (<long>m[i]) * (<long>self.weights[i])
        self._val[m] = s
        return s

    cdef void _add_into(self, dict acc, dict x, long c):
        cdef long p = self.p
        cdef long s
        cdef object a
        for m, a in x.items():
            s = ((<long>acc.get(m, 0)) + (<long>a) * c) % p
            if s < 0:
                s += p
            if s:
                acc[m] = s
            else:
                acc.pop(m, None)

    cpdef dict mul_mono_var(self, tuple m, int i):
        cdef tuple key = (m, i)
        cdef object cached = self._mv.get(key)
        cdef dict r
        cdef int j
        cdef long e, cap
        cdef tuple base, rest
        cdef object tail
        if cached is not None:
            return <dict>cached
        if self.value(m) + <long>self.weights[i] > self.cutoff:
            r = {}
        else:
            j = self.n - 1
            while j >= 0 and m[j] == 0:
                j -= 1
            if j <= i:
                e = <long>m[i] + 1
                cap = <long>self.caps[i]
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

    cpdef dict mul_mono_elem(self, tuple m, dict x):
        cdef dict acc = {}
        for m2, c in x.items():
            self._add_into(acc, self.mul_mono_mono(m, m2), c)
        return acc

    cpdef dict mul_mono_mono(self, tuple m1, tuple m2):
        cdef tuple key = (m1, m2)
        cdef object cached = self._mm.get(key)
        cdef dict r
        cdef int f, last, k
        cdef int n = self.n
        cdef tuple rest
        if cached is not None:
            return <dict>cached
        if self.value(m1) + self.value(m2) > self.cutoff:
            r = {}
        else:
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
                    r = {tuple([<long>m1[k] + <long>m2[k] for k in range(n)]): 1}
                else:
                    rest = m2[:f] + (m2[f] - 1,) + m2[f + 1:]
                    r = {}
                    for mm, c in self.mul_mono_var(m1, f).items():
                        self._add_into(r, self.mul_mono_mono(mm, rest), c)
        self._mm[key] = r
        return r

    cpdef dict mul(self, dict x, dict y):
        cdef long cutoff = self.cutoff
        cdef long p = self.p
        cdef long v1, v2, c, a
        cdef list ys = sorted([(self.value(m), m, c2) for m, c2 in y.items()], key=_first)
        cdef dict acc = {}
        cdef dict out = {}
        cdef tuple m1, m2, t
        cdef dict r
        for m1, c1 in x.items():
            v1 = self.value(m1)
            for t in ys:
                v2 = <long>t[0]
                if v1 + v2 > cutoff:
                    break
                m2 = <tuple>t[1]
                c = (<long>c1) * (<long>t[2]) % p
                r = self.mul_mono_mono(m1, m2)
                for m, aa in r.items():
                    acc[m] = ((<long>acc.get(m, 0)) + (<long>aa) * c) % p
        for m, aa in acc.items():
            a = <long>aa
            if a:
                out[m] = a
        return out


def _first(t):
    return t[0]


def rref(rows, p):
    """Reduced row echelon form over F_p; returns ``(basis, pivots)``."""
    cdef long P = p
    # cdivision gives C remainders, which keep the sign of negative inputs
    cdef list mat = [[((<long>a) % P + P) % P for a in src] for src in rows]
    cdef list pivots = []
    cdef int ncols, nrows, rank = 0, col, r, piv, k
    cdef long inv, f, v
    cdef list row, other
    if not mat:
        return [], pivots
    ncols = len(mat[0])
    nrows = len(mat)
    for col in range(ncols):
        piv = -1
        for r in range(rank, nrows):
            if <long>(<list>mat[r])[col]:
                piv = r
                break
        if piv < 0:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        row = <list>mat[rank]
        inv = pow(<long>row[col], P - 2, P)
        if inv != 1:
            row = [(<long>a) * inv % P for a in row]
            mat[rank] = row
        for r in range(nrows):
            if r != rank:
                other = <list>mat[r]
                f = <long>other[col]
                if f:
                    for k in range(ncols):
                        v = ((<long>other[k]) - f * (<long>row[k])) % P
                        if v < 0:
                            v += P
                        other[k] = v
        pivots.append(col)
        rank += 1
        if rank == nrows:
            break
    return mat[:rank], pivots
