"""Exact cyclotomic numbers: Q(zeta_m) in the power basis mod Phi_m.

Coefficients are Fractions of length phi(m).  Mixed orders promote to the
lcm.  Complex embedding (zeta_m -> e^(2*pi*i/m)) is for float sanity checks
only; the p-adic embedding sends zeta_m to the Teichmuller root
teich(g)^((p-1)/m) for the least primitive root g mod p, which fixes one
embedding C = C_p once and for all.
"""

import cmath
from fractions import Fraction
from functools import lru_cache
from math import gcd

from .errors import DomainError, UnsupportedCharacterError
from .numutil import divisors, euler_phi, factor
from .padic import PAdic, teichmuller
from .numutil import primitive_root

__all__ = ["CycNumber", "cyclotomic_poly", "root_of_unity"]


@lru_cache(maxsize=None)
def cyclotomic_poly(m):
    """Coefficients (ascending) of Phi_m, by exact division of x^m - 1."""
    poly = [-1] + [0] * (m - 1) + [1]
    for d in divisors(m):
        if d == m:
            continue
        phi_d = cyclotomic_poly(d)
        poly = _exact_div(poly, phi_d)
    return tuple(poly)


def _exact_div(num, den):
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for i in range(len(out) - 1, -1, -1):
        c = num[i + len(den) - 1] // den[-1]
        out[i] = c
        if c:
            for j, dj in enumerate(den):
                num[i + j] -= c * dj
    assert all(c == 0 for c in num[:len(den) - 1]), "non-exact division"
    return out


@lru_cache(maxsize=None)
def _reduction_table(m):
    """x^k mod Phi_m for phi(m) <= k < m, as tuples of Fractions."""
    phi = cyclotomic_poly(m)
    d = len(phi) - 1
    rows = {}
    prev = None
    for k in range(d, m):
        if k == d:
            row = [Fraction(-c) for c in phi[:d]]
        else:
            row = [Fraction(0)] + prev[:-1]
            if prev[-1]:
                top = prev[-1]
                row = [row[i] - top * phi[i] for i in range(d)]
        rows[k] = tuple(row)
        prev = list(row)
    return rows


class CycNumber:
    __slots__ = ("order", "coeffs")

    def __init__(self, order, coeffs):
        d = euler_phi(order)
        coeffs = [Fraction(c) for c in coeffs]
        if len(coeffs) > d:
            table = _reduction_table(order)
            red = coeffs[:d]
            for k in range(d, len(coeffs)):
                if coeffs[k]:
                    row = table[k]
                    red = [red[i] + coeffs[k] * row[i] for i in range(d)]
            coeffs = red
        else:
            coeffs = coeffs + [Fraction(0)] * (d - len(coeffs))
        self.order = order
        self.coeffs = tuple(coeffs)

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_rational(cls, x, order=1):
        c = [Fraction(x)] + [Fraction(0)] * (euler_phi(order) - 1)
        return cls(order, c)

    @classmethod
    def zeta_power(cls, m, j):
        """zeta_m^j."""
        j %= m
        c = [Fraction(0)] * (j + 1)
        c[j] = Fraction(1)
        return cls(m, c)

    # -- promotion ---------------------------------------------------------

    def promote(self, order):
        if order == self.order:
            return self
        if order % self.order:
            raise DomainError("can only promote to a multiple order")
        k = order // self.order
        c = [Fraction(0)] * (euler_phi(self.order) * k)
        for i, ci in enumerate(self.coeffs):
            if ci:
                c[i * k] = ci
        # pad so constructor reduces correctly
        return CycNumber(order, c)

    def _pair(self, other):
        if not isinstance(other, CycNumber):
            other = CycNumber.from_rational(other)
        m = self.order * other.order // gcd(self.order, other.order)
        return self.promote(m), other.promote(m)

    # -- ring operations ---------------------------------------------------

    def __add__(self, other):
        a, b = self._pair(other)
        return CycNumber(a.order, [x + y for x, y in zip(a.coeffs, b.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return CycNumber(self.order, [-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other if isinstance(other, CycNumber)
                       else CycNumber.from_rational(-Fraction(other)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return CycNumber(self.order, [c * other for c in self.coeffs])
        a, b = self._pair(other)
        d = len(a.coeffs)
        prod = [Fraction(0)] * (2 * d - 1)
        for i, ai in enumerate(a.coeffs):
            if ai:
                for j, bj in enumerate(b.coeffs):
                    if bj:
                        prod[i + j] += ai * bj
        return CycNumber(a.order, prod)

    __rmul__ = __mul__

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        out = CycNumber.from_rational(1, self.order)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def inverse(self):
        """Field inverse via the product of Galois conjugates."""
        m = self.order
        part = CycNumber.from_rational(1, m)
        for a in range(2, m + 1):
            if gcd(a, m) == 1:
                part = part * self.galois(a)
        r = (self * part).to_rational()
        if r == 0:
            raise DomainError("inverse of zero")
        return part * Fraction(1, r)

    def galois(self, a):
        """Galois twist zeta -> zeta^a, gcd(a, order) = 1."""
        m = self.order
        c = [Fraction(0)] * m
        for i, ci in enumerate(self.coeffs):
            if ci:
                c[(i * a) % m] += ci
        return CycNumber(m, c)

    def conj(self):
        """Complex conjugation zeta -> zeta^(-1)."""
        return self.galois(self.order - 1) if self.order > 2 else self

    # -- predicates and conversions ----------------------------------------

    def is_zero(self):
        return all(c == 0 for c in self.coeffs)

    def is_rational(self):
        return all(c == 0 for c in self.coeffs[1:])

    def to_rational(self):
        if not self.is_rational():
            raise DomainError("not a rational cyclotomic number")
        return self.coeffs[0]

    def __eq__(self, other):
        a, b = self._pair(other)
        return a.coeffs == b.coeffs

    def __hash__(self):
        return hash((self.order, self.coeffs))

    def __repr__(self):
        if self.is_rational():
            return f"Cyc({self.coeffs[0]})"
        terms = [f"{c}*z{self.order}^{i}" for i, c in enumerate(self.coeffs) if c]
        return "Cyc(" + " + ".join(terms) + ")"

    def complex_value(self):
        z = cmath.exp(2j * cmath.pi / self.order)
        return sum(float(c) * z**i for i, c in enumerate(self.coeffs))

    def min_order(self):
        """Smallest d | order whose cyclotomic field contains this value."""
        m = self.order
        for d in divisors(m):
            stab = [a for a in range(1, m + 1)
                    if gcd(a, m) == 1 and a % d == 1 % d]
            if all(self.galois(a) == self for a in stab):
                return d
        return m

    def descend(self, d):
        """Rewrite in Q(zeta_d) for d | order; requires Galois fixedness."""
        if d == self.order:
            return self
        m = self.order
        basis = [CycNumber.zeta_power(m, (m // d) * j) for j in range(euler_phi(d))]
        target = list(self.coeffs)
        rows = [list(b.coeffs) for b in basis]
        sol = _solve_exact(rows, target)
        if sol is None:
            raise DomainError("value does not lie in the requested subfield")
        return CycNumber(d, sol)

    def padic(self, p, aprec):
        """Embed into Z_p via zeta_m -> teich(g)^((p-1)/m), m | p-1."""
        if self.is_rational():
            return PAdic.from_rational(self.coeffs[0], p, aprec)
        d = self.min_order()
        val = self.descend(d) if d != self.order else self
        if (p - 1) % val.order:
            raise UnsupportedCharacterError(
                f"zeta_{val.order} does not embed in Z_{p}")
        g = primitive_root(p)
        zeta = teichmuller(g, p, aprec) ** ((p - 1) // val.order)
        out = PAdic.zero(p, aprec)
        for i, c in enumerate(val.coeffs):
            if c:
                out = out + zeta**i * PAdic.from_rational(c, p, aprec)
        return out

    # -- serialization -----------------------------------------------------

    def to_json(self):
        return {"order": self.order, "coeffs": [str(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, d):
        return cls(d["order"], [Fraction(c) for c in d["coeffs"]])


def root_of_unity(m, j=1):
    return CycNumber.zeta_power(m, j)


def _solve_exact(rows, target):
    """Solve sum_j x_j rows[j] = target over Q; None if inconsistent."""
    ncols = len(target)
    nvars = len(rows)
    aug = [[rows[j][i] for j in range(nvars)] + [target[i]]
           for i in range(ncols)]
    piv = []
    r = 0
    for c in range(nvars):
        pr = next((i for i in range(r, ncols) if aug[i][c]), None)
        if pr is None:
            continue
        aug[r], aug[pr] = aug[pr], aug[r]
        pivval = aug[r][c]
        aug[r] = [x / pivval for x in aug[r]]
        for i in range(ncols):
            if i != r and aug[i][c]:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        piv.append(c)
        r += 1
    for i in range(r, ncols):
        if aug[i][nvars]:
            return None
    sol = [Fraction(0)] * nvars
    for i, c in enumerate(piv):
        sol[c] = aug[i][nvars]
    return sol
