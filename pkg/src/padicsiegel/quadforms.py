"""Half-integral symmetric matrices, block matrices indexing Eisenstein
coefficients, and enumeration of the coset space GL_n(Z)\\D(I).

D(I) = {G integral : G^(-t) I G^(-1) half-integral}; the canonical coset
representative is the row-style Hermite normal form (upper triangular,
positive pivots, entries above a pivot reduced mod it).  Soundness of the
determinant bound: det(2 G^(-t) I G^(-1)) * det(G)^2 = det(2I), so
det(G)^2 | det(2I).
"""

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt

from .errors import DomainError
from .numutil import divisors, factor

__all__ = ["HalfIntMat", "BlockI", "CosetRep", "enumerate_I", "d_cosets",
           "hermite_normal_form", "hnf_with_det", "cosets_of_form"]


class HalfIntMat:
    """Symmetric half-integral matrix T, stored via 2T (even diagonal)."""

    __slots__ = ("size", "twice")

    def __init__(self, twice):
        n = len(twice)
        tw = tuple(tuple(int(x) for x in row) for row in twice)
        for i in range(n):
            if tw[i][i] % 2:
                raise DomainError("diagonal of 2T must be even")
            for j in range(n):
                if tw[i][j] != tw[j][i]:
                    raise DomainError("2T must be symmetric")
        self.size = n
        self.twice = tw

    @classmethod
    def from_integral(cls, mat):
        """Embed an integral symmetric matrix (T integral, not just 2T)."""
        return cls([[2 * x for x in row] for row in mat])

    def det_twice(self):
        return _det(self.twice)

    def is_positive_definite(self):
        return all(_det([r[:k] for r in self.twice[:k]]) > 0
                   for k in range(1, self.size + 1))

    def is_positive_semidefinite(self):
        # all principal minors (not just leading) nonnegative
        n = self.size
        for mask in range(1, 1 << n):
            idx = [i for i in range(n) if mask >> i & 1]
            if _det([[self.twice[i][j] for j in idx] for i in idx]) < 0:
                return False
        return True

    def content(self):
        """gcd of the T_ii and 2T_ij: the content of the quadratic form."""
        g = 0
        for i in range(self.size):
            g = gcd(g, self.twice[i][i] // 2)
            for j in range(i + 1, self.size):
                g = gcd(g, self.twice[i][j])
        return g

    def transform(self, u):
        """u^t T u for an integer matrix u (same size)."""
        n = self.size
        ut = _transpose(u)
        return HalfIntMat(_mul(_mul(ut, self.twice), u))

    def __eq__(self, other):
        return isinstance(other, HalfIntMat) and self.twice == other.twice

    def __hash__(self):
        return hash(self.twice)

    def __repr__(self):
        return f"HalfIntMat(2T={self.twice})"

    def to_json(self):
        return [list(r) for r in self.twice]


@dataclass(frozen=True)
class BlockI:
    """I = [[L^2 T1, T2], [T2^t, L^2 T4]] with T1, T4 integral symmetric."""

    g: int
    ell: int            # L, 1 or a p-power
    t1: tuple           # integral symmetric g x g, rows as tuples
    t4: tuple
    t2_twice: tuple     # 2*T2, integral g x g (not necessarily symmetric)

    def assembled(self):
        g, l2 = self.g, self.ell**2
        top = [list(2 * l2 * x for x in self.t1[i]) + list(self.t2_twice[i])
               for i in range(g)]
        bot = [[self.t2_twice[i][j] for i in range(g)]
               + [2 * l2 * x for x in self.t4[j]] for j in range(g)]
        return HalfIntMat([top[i] if i < g else bot[i - g]
                           for i in range(2 * g)])

    def det_twice(self):
        return self.assembled().det_twice()

    def det_t2_twice(self):
        return _det(self.t2_twice)


@dataclass(frozen=True)
class CosetRep:
    """HNF representative G of a coset of D(I), with the transformed form."""

    mat: tuple          # rows of G
    det: int
    form: HalfIntMat    # G^(-t) I G^(-1)


def enumerate_I(t1, t4, ell=1, g=None):
    """All positive-definite blocks I = [[L^2 T1, T2],[T2^t, L^2 T4]].

    t1, t4 are integral symmetric matrices (tuples of rows).  Completeness:
    the (i, g+j) principal 2x2 minor forces |(2T2)_ij|^2 < 4 L^4 T1_ii T4_jj.
    """
    t1 = tuple(tuple(r) for r in t1)
    t4 = tuple(tuple(r) for r in t4)
    g = g or len(t1)
    if any(t1[i][i] <= 0 for i in range(g)) or \
       any(t4[i][i] <= 0 for i in range(g)):
        return []
    bounds = [[isqrt(4 * ell**4 * t1[i][i] * t4[j][j] - 1)
               for j in range(g)] for i in range(g)]
    out = []
    for entries in _box(bounds):
        cand = BlockI(g, ell, t1, t4,
                      tuple(tuple(entries[i * g + j] for j in range(g))
                            for i in range(g)))
        if cand.assembled().is_positive_definite():
            out.append(cand)
    out.sort(key=lambda b: b.t2_twice)
    return out


def _box(bounds):
    flat = [b for row in bounds for b in row]
    idx = [-b for b in flat]
    while True:
        yield tuple(idx)
        i = 0
        while i < len(flat):
            idx[i] += 1
            if idx[i] <= flat[i]:
                break
            idx[i] = -flat[i]
            i += 1
        else:
            return


def hnf_with_det(n, d):
    """All n x n HNF matrices (upper triangular, 0 <= above < pivot) of
    determinant d, one per left GL_n(Z)-coset."""
    out = []

    def diag_tuples(rem, k):
        if k == n - 1:
            yield (rem,)
            return
        for a in divisors(rem):
            for tail in diag_tuples(rem // a, k + 1):
                yield (a,) + tail

    for diag in diag_tuples(d, 0):
        cols = []
        for j in range(n):
            # entries above the pivot in column j, each in [0, diag[j])
            cols.append(diag[j])
        ranges = [cols[j] for j in range(n) for _ in range(j)]

        def fill(pos, acc):
            if pos == len(ranges):
                mat = [[0] * n for _ in range(n)]
                k = 0
                for j in range(n):
                    for i in range(j):
                        mat[i][j] = acc[k]
                        k += 1
                    mat[j][j] = diag[j]
                out.append(tuple(tuple(r) for r in mat))
                return
            for v in range(ranges[pos]):
                fill(pos + 1, acc + (v,))

        fill(0, ())
    return out


def _xgcd(a, b):
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def hermite_normal_form(mat):
    """Row-style HNF of a nonsingular integer matrix (canonical in its
    left GL_n(Z)-orbit): upper triangular, positive pivots, entries above
    each pivot reduced modulo it."""
    n = len(mat)
    m = [list(r) for r in mat]
    for j in range(n):
        for i in range(j + 1, n):
            if m[i][j] == 0:
                continue
            a, b = m[j][j], m[i][j]
            g, x, y = _xgcd(a, b)
            rj = [x * p + y * q for p, q in zip(m[j], m[i])]
            ri = [-(b // g) * p + (a // g) * q for p, q in zip(m[j], m[i])]
            m[j], m[i] = rj, ri
        if m[j][j] == 0:
            raise DomainError("singular matrix has no square HNF")
        if m[j][j] < 0:
            m[j] = [-x for x in m[j]]
    for j in range(n):
        for i in range(j):
            q = m[i][j] // m[j][j]
            if q:
                m[i] = [a - q * b for a, b in zip(m[i], m[j])]
    return tuple(tuple(r) for r in m)


def _transform_by_inverse(a_twice, gmat, d):
    """2J = G^(-t) (2I) G^(-1) if half-integral, else None (det G = d)."""
    n = len(gmat)
    adj = _adjugate(gmat)
    adj_t = _transpose(adj)
    m = _mul(_mul(adj_t, [list(r) for r in a_twice]), adj)
    d2 = d * d
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            v = m[i][j]
            if v % d2:
                return None
            row.append(v // d2)
        if row[i] % 2:
            return None
        out.append(row)
    return HalfIntMat(out)


def cosets_of_form(form, dets):
    """Coset reps of D(form) with det G in `dets` (HNF enumeration +
    half-integrality filter)."""
    n = form.size
    out = []
    for d in sorted(set(dets)):
        for gmat in hnf_with_det(n, d):
            j = _transform_by_inverse(form.twice, gmat, d)
            if j is not None:
                out.append(CosetRep(gmat, d, j))
    out.sort(key=lambda r: (r.det, r.mat))
    return out


def d_cosets(block):
    """GL_2g(Z)\\D(I) for a positive-definite block I."""
    a = block.assembled()
    if not a.is_positive_definite():
        raise DomainError("coset enumeration needs positive-definite I")
    det2 = a.det_twice()
    dets = [d for d in range(1, isqrt(det2) + 1) if det2 % (d * d) == 0]
    return cosets_of_form(a, dets)


# -- integer matrix helpers -------------------------------------------------

def _det(m):
    n = len(m)
    if n == 1:
        return m[0][0]
    if n == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    # fraction-free Gaussian elimination (Bareiss)
    a = [list(map(int, r)) for r in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            piv = next((i for i in range(k + 1, n) if a[i][k]), None)
            if piv is None:
                return 0
            a[k], a[piv] = a[piv], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[-1][-1]


def _mul(a, b):
    n, m, k = len(a), len(b[0]), len(b)
    return [[sum(a[i][t] * b[t][j] for t in range(k)) for j in range(m)]
            for i in range(n)]


def _transpose(m):
    return [list(col) for col in zip(*m)]


def _adjugate(m):
    n = len(m)
    if n == 1:
        return [[1]]
    out = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [[m[r][c] for c in range(n) if c != j]
                     for r in range(n) if r != i]
            out[j][i] = (-1) ** (i + j) * _det(minor)
    return out
