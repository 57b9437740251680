"""Arithmetic points of the Iwasawa algebra: characters z -> eps(z) z^k of
Z_p^* evaluated on the one-unit line through u = 1 + p.

Numeric evaluation supports trivial eps (or eps absorbed into a Dirichlet
character of order dividing p-1 elsewhere); genuinely p-power-order eps
takes values in ramified extensions and stays symbolic.
"""

from dataclasses import dataclass
from typing import Optional

from .cyclotomic import CycNumber
from .errors import UnsupportedCharacterError
from .padic import PAdic, angle, exponent_l

__all__ = ["ArithPoint", "eval_point"]


@dataclass(frozen=True)
class ArithPoint:
    """Point kind is bookkeeping only ('weight' for kappa, 'cyclo' for
    kappa'); evaluation is the same character z -> eps(z) z^k."""

    p: int
    exponent: int
    kind: str = "weight"
    eps_on_u: Optional[CycNumber] = None   # value at u of the finite part

    def is_trivial_eps(self):
        return self.eps_on_u is None or \
            self.eps_on_u == CycNumber.from_rational(1)

    def shifted(self, delta):
        return ArithPoint(self.p, self.exponent + delta, self.kind,
                          self.eps_on_u)

    def combined(self, other, sign=1):
        """Pointwise product with other^sign (exponents add)."""
        if not (self.is_trivial_eps() and other.is_trivial_eps()):
            raise UnsupportedCharacterError(
                "products of nontrivial finite-order parts stay symbolic")
        return ArithPoint(self.p, self.exponent + sign * other.exponent,
                          self.kind, None)

    def to_json(self):
        return {"p": self.p, "kind": self.kind, "exponent": self.exponent,
                "eps_on_u": None if self.eps_on_u is None
                else self.eps_on_u.to_json()}

    @classmethod
    def from_json(cls, d):
        eps = d.get("eps_on_u")
        return cls(d["p"], d["exponent"], d.get("kind", "weight"),
                   None if eps is None else CycNumber.from_json(eps))


def eval_point(point, z, aprec):
    """eps(u^(l_z)) <z>^k as a PAdic (the angle-line evaluation used by the
    coefficient families); z an integer unit mod p."""
    if not point.is_trivial_eps():
        raise UnsupportedCharacterError(
            "p-power-order eps has no Z_p-valued evaluation")
    return angle(z, point.p, aprec) ** point.exponent


def angle_power(z, k, p, aprec):
    """<z>^k for an integer unit z."""
    return angle(z, p, aprec) ** k
