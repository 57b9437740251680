"""Truncated power series with PAdic coefficients, in a variable centered
at a chosen base point (here k - k0 with k0 = g + 1).

Arithmetic truncates at the common order; derivatives are formal (the
finite-difference check in the derivative engine is the independent
oracle for them).
"""

from .errors import DomainError, PrecisionError
from .padic import PAdic

__all__ = ["PSeries"]


class PSeries:
    """sum_i coeffs[i] X^i + O(X^order)."""

    __slots__ = ("p", "order", "coeffs")

    def __init__(self, p, order, coeffs):
        if len(coeffs) > order:
            coeffs = list(coeffs)[:order]
        self.p = p
        self.order = order
        self.coeffs = tuple(coeffs)

    @classmethod
    def from_rationals(cls, vals, p, order, aprec):
        cs = [v if isinstance(v, PAdic) else PAdic.from_rational(v, p, aprec)
              for v in vals]
        cs += [PAdic.zero(p, aprec)] * (order - len(cs))
        return cls(p, order, cs)

    @classmethod
    def constant(cls, value, p, order, aprec):
        return cls.from_rationals([value], p, order, aprec)

    def _pad(self, n):
        ap = self.coeffs[0].aprec if self.coeffs else 1
        return list(self.coeffs) + [PAdic.zero(self.p, ap)] * (n - len(self.coeffs))

    def __add__(self, other):
        other = self._coerce(other)
        n = min(self.order, other.order)
        a, b = self._pad(n), other._pad(n)
        return PSeries(self.p, n, [x + y for x, y in zip(a[:n], b[:n])])

    def _coerce(self, other):
        if isinstance(other, PSeries):
            return other
        ap = self.coeffs[0].aprec if self.coeffs else 1
        return PSeries.constant(other, self.p, self.order, ap)

    def __neg__(self):
        return PSeries(self.p, self.order, [-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __mul__(self, other):
        other = self._coerce(other)
        n = min(self.order, other.order)
        a, b = self._pad(n), other._pad(n)
        p0 = self.coeffs[0] if self.coeffs else None
        out = [PAdic.zero(self.p, a[0].aprec) for _ in range(n)]
        for i, x in enumerate(a[:n]):
            if x.is_zero():
                continue
            for j, y in enumerate(b[:n - i]):
                out[i + j] = out[i + j] + x * y
        return PSeries(self.p, n, out)

    def inverse(self):
        """Multiplicative inverse; needs a unit constant term."""
        c0 = self.coeffs[0]
        if c0.is_zero() or c0.val != 0:
            raise DomainError("series inverse needs a unit constant term")
        n = self.order
        inv0 = c0.inverse()
        out = [inv0]
        a = self._pad(n)
        for i in range(1, n):
            acc = PAdic.zero(self.p, c0.aprec)
            for j in range(1, i + 1):
                acc = acc + a[j] * out[i - j]
            out.append(-inv0 * acc)
        return PSeries(self.p, n, out)

    def derivative(self):
        """Formal derivative (coefficient shift); order drops by one."""
        if self.order < 2:
            raise PrecisionError("series order too low for a derivative")
        return PSeries(self.p, self.order - 1,
                       [self.coeffs[i] * i for i in range(1, len(self.coeffs))])

    def evaluate(self, x):
        """Value at a PAdic x (truncation error O(x^order))."""
        out = None
        for c in reversed(self._pad(self.order)):
            out = c if out is None else out * x + c
        return out

    def constant_term(self):
        return self.coeffs[0]

    def eq_mod(self, other, m):
        other = self._coerce(other)
        n = min(self.order, other.order)
        a, b = self._pad(n), other._pad(n)
        return all(x.eq_mod(y, m) for x, y in zip(a[:n], b[:n]))

    def to_json(self):
        return {"p": self.p, "order": self.order,
                "coeffs": [c.to_json() for c in self.coeffs]}

    @classmethod
    def from_json(cls, d):
        return cls(d["p"], d["order"],
                   [PAdic.from_json(c) for c in d["coeffs"]])

    def __repr__(self):
        return f"PSeries({list(self.coeffs)} + O(X^{self.order}))"
