"""Capped-precision p-adic numbers over Q_p (odd p only).

A value is unit * p^val known modulo p^aprec (absolute precision).  The unit
part is stored reduced mod p^(aprec - val).  An inexact zero is unit == 0,
meaning O(p^aprec).  Rationals with denominator divisible by p embed with
negative valuation; the unit part stays a genuine unit.
"""

from fractions import Fraction
from math import gcd

from .errors import DomainError, PrecisionError

__all__ = ["PAdic", "teichmuller", "angle", "padic_log", "exponent_l"]


def _val_int(n, p):
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


class PAdic:
    __slots__ = ("p", "aprec", "val", "unit")

    def __init__(self, p, aprec, val, unit):
        if p < 3:
            raise DomainError("only odd primes are supported")
        if unit:
            unit %= p ** max(aprec - val, 0)
        if unit == 0:
            val = aprec
        else:
            v = _val_int(unit, p)
            if v:
                val += v
                unit //= p**v
                unit %= p ** max(aprec - val, 0)
                if unit == 0:
                    val = aprec
        self.p, self.aprec, self.val, self.unit = p, aprec, val, unit

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_rational(cls, x, p, aprec):
        x = Fraction(x)
        if x == 0:
            return cls(p, aprec, aprec, 0)
        num, den = x.numerator, x.denominator
        v = 0
        while num % p == 0:
            num //= p
            v += 1
        while den % p == 0:
            den //= p
            v -= 1
        rel = aprec - v
        if rel <= 0:
            return cls(p, aprec, aprec, 0)
        return cls(p, aprec, v, num * pow(den, -1, p**rel))

    @classmethod
    def zero(cls, p, aprec):
        return cls(p, aprec, aprec, 0)

    @classmethod
    def one(cls, p, aprec):
        return cls(p, aprec, 0, 1)

    # -- queries -----------------------------------------------------------

    @property
    def rel(self):
        return self.aprec - self.val

    def is_zero(self):
        """Indistinguishable from zero at this precision."""
        return self.unit == 0

    def is_unit(self):
        return self.val == 0 and self.unit != 0

    def residue(self):
        """Canonical representative in [0, p^aprec); requires val >= 0."""
        if self.unit == 0:
            return 0
        if self.val < 0:
            raise DomainError("negative valuation has no integral residue")
        return self.unit * self.p**self.val % self.p**self.aprec

    def unit_residue(self, m):
        if self.unit == 0:
            raise DomainError("zero has no unit part")
        if m > self.rel:
            raise PrecisionError("unit part not known mod p^%d" % m)
        return self.unit % self.p**m

    # -- arithmetic --------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, PAdic):
            if other.p != self.p:
                raise DomainError("mixed primes")
            return other
        if isinstance(other, (int, Fraction)):
            return PAdic.from_rational(other, self.p, self.aprec)
        raise TypeError(f"cannot coerce {type(other).__name__} to PAdic")

    def __add__(self, other):
        other = self._coerce(other)
        n = min(self.aprec, other.aprec)
        if self.unit == 0:
            return PAdic(self.p, n, other.val, other.unit)
        if other.unit == 0:
            return PAdic(self.p, n, self.val, self.unit)
        m = min(self.val, other.val)
        s = (self.unit * self.p ** (self.val - m)
             + other.unit * self.p ** (other.val - m))
        return PAdic(self.p, n, m, s)

    __radd__ = __add__

    def __neg__(self):
        return PAdic(self.p, self.aprec, self.val, -self.unit)

    def __sub__(self, other):
        return self.__add__(-self._coerce(other))

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        other = self._coerce(other)
        if self.unit == 0 or other.unit == 0:
            return PAdic.zero(self.p, self.val + other.val)
        v = self.val + other.val
        rel = min(self.rel, other.rel)
        return PAdic(self.p, v + rel, v, self.unit * other.unit)

    __rmul__ = __mul__

    def inverse(self):
        if self.unit == 0:
            raise DomainError("cannot invert (p-adic) zero")
        rel = self.rel
        return PAdic(self.p, -self.val + rel, -self.val,
                     pow(self.unit, -1, self.p**rel))

    def __truediv__(self, other):
        return self.__mul__(self._coerce(other).inverse())

    def __rtruediv__(self, other):
        return self.inverse().__mul__(other)

    def __pow__(self, k):
        if not isinstance(k, int):
            raise TypeError("p-adic powers take integer exponents")
        if k < 0:
            return self.inverse() ** (-k)
        if k == 0:
            return PAdic.one(self.p, self.rel if self.unit else self.aprec)
        if self.unit == 0:
            return PAdic.zero(self.p, self.val * k)
        rel = self.rel
        return PAdic(self.p, self.val * k + rel, self.val * k,
                     pow(self.unit, k, self.p**rel))

    # -- comparisons -------------------------------------------------------

    def eq_mod(self, other, m):
        """Certified agreement modulo p^m; raises if precision is too low."""
        d = self - self._coerce(other)
        if d.unit == 0:
            if d.aprec < m:
                raise PrecisionError(
                    f"cannot compare mod p^{m} at precision {d.aprec}")
            return True
        return d.val >= m

    def __eq__(self, other):
        try:
            other = self._coerce(other)
        except (TypeError, DomainError):
            return NotImplemented
        return self.eq_mod(other, min(self.aprec, other.aprec))

    __hash__ = None

    def __repr__(self):
        if self.unit == 0:
            return f"O({self.p}^{self.aprec})"
        return f"{self.unit}*{self.p}^{self.val} + O({self.p}^{self.aprec})"

    # -- serialization -----------------------------------------------------

    def to_json(self):
        return {"p": self.p, "precision": self.aprec,
                "valuation": self.val if self.unit else None,
                "unit": str(self.unit)}

    @classmethod
    def from_json(cls, d):
        if d["valuation"] is None:
            return cls.zero(d["p"], d["precision"])
        return cls(d["p"], d["precision"], d["valuation"], int(d["unit"]))


def teichmuller(z, p, aprec):
    """Teichmuller lift: the (p-1)-st root of unity congruent to z mod p."""
    if gcd(z, p) != 1:
        raise DomainError("Teichmuller character needs a unit argument")
    q = p**aprec
    x = z % q
    for _ in range(aprec + 2):
        y = pow(x, p, q)
        if y == x:
            break
        x = y
    return PAdic(p, aprec, 0, x)


def angle(z, p, aprec):
    """One-unit part <z> = z / omega(z) of a unit z."""
    return PAdic.from_rational(z, p, aprec) / teichmuller(z, p, aprec)


def padic_log(x):
    """Logarithm of a one-unit, by the series on 1 + pZ_p."""
    p, n = x.p, x.aprec
    d = x - PAdic.one(p, n)
    if d.unit == 0:
        return PAdic.zero(p, n)
    if d.val < 1:
        raise DomainError("p-adic log needs an argument = 1 mod p")
    # exact truncated series; term i has valuation >= i - log_p(i),
    # so stop once that clears n
    nterms = n + 2
    while nterms - _log_floor(nterms, p) < n:
        nterms += 1
    xv = Fraction(d.unit * p**d.val)
    acc, power = Fraction(0), Fraction(1)
    for i in range(1, nterms + 1):
        power *= xv
        acc += power / i if i % 2 == 1 else -power / i
    return PAdic.from_rational(acc, p, n)


def _log_floor(i, p):
    k = 0
    while p**(k + 1) <= i:
        k += 1
    return k


def exponent_l(z, p, aprec):
    """l_z = log_p(<z>) / log_p(1+p); satisfies (1+p)^(l_z) = <z>."""
    if isinstance(z, int):
        if gcd(z, p) != 1:
            raise DomainError("l_z needs a p-adic unit")
        z = angle(z, p, aprec + 1)
    lu = padic_log(PAdic.from_rational(1 + p, p, z.aprec))
    return padic_log(z) / lu
