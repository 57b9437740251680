"""Dirichlet characters with exact cyclotomic values, Gauss sums, and the
quadratic character attached to a discriminant.

A character mod M = prod q^e is stored componentwise: for each prime power
we fix generators of the local unit group (least primitive root for odd q;
(-1, 5) for 2^e, e >= 3) and record the image exponent of each generator,
chi(g_i) = zeta_(ord g_i)^(exps_i).  Values at arguments sharing a factor
with M are 0, matching the convention chi(M) = 0 if (M, S) != 1.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm

from .cyclotomic import CycNumber
from .errors import DomainError, UnsupportedCharacterError
from .numutil import (crt, factor, fundamental_discriminant, kronecker,
                      primitive_root, valuation)
from .padic import PAdic, teichmuller

__all__ = ["DirichletChar", "gauss_sum", "matrix_gauss_sum",
           "quad_char_sigma", "teichmuller_char"]


@lru_cache(maxsize=None)
def _unit_group(q, e):
    """Generators and their orders for (Z/q^e)^*."""
    mod = q**e
    if q == 2:
        if e == 1:
            return (), ()
        if e == 2:
            return (3,), (2,)
        return (mod - 1, 5), (2, 2 ** (e - 2))
    g = primitive_root(q**e)
    return (g,), ((q - 1) * q ** (e - 1),)


@lru_cache(maxsize=None)
def _dlog_table(q, e):
    """Discrete logs w.r.t. the generators of (Z/q^e)^*."""
    mod = q**e
    gens, orders = _unit_group(q, e)
    if q == 2:
        if e == 1:
            return {1: ()}
        if e == 2:
            return {1: (0,), 3: (1,)}
        tbl = {}
        x = 1
        for t in range(orders[1]):
            tbl[x] = (0, t)
            tbl[mod - x] = (1, t)
            x = x * 5 % mod
        return tbl
    g, o = gens[0], orders[0]
    tbl, x = {}, 1
    for k in range(o):
        tbl[x] = (k,)
        x = x * g % mod
    return tbl


def _reduce_exponent(k, o):
    k %= o
    if k == 0:
        return 0, 1
    g = gcd(k, o)
    return k // g, o // g


@dataclass(frozen=True)
class _Component:
    q: int
    e: int
    exps: tuple  # chi(g_i) = zeta_(ord g_i)^(exps_i)

    @property
    def modulus(self):
        return self.q**self.e

    def gens_orders(self):
        return _unit_group(self.q, self.e)

    def eval_exponent(self, n):
        """Reduced pair (k, o): chi_local(n) = zeta_o^k; n must be a unit."""
        order = self.order()
        if order == 1:
            return 0, 1
        if order == 2 and self.e == 1 and self.q != 2:
            # quadratic character mod an odd prime: Legendre symbol
            return (0, 1) if kronecker(n, self.q) == 1 else (1, 2)
        dlogs = _dlog_table(self.q, self.e)[n % self.modulus]
        _, orders = self.gens_orders()
        o = 1
        for oi in orders:
            o = lcm(o, oi)
        k = sum(d * x * (o // oi) for d, x, oi in zip(dlogs, self.exps, orders))
        return _reduce_exponent(k, o)

    def order(self):
        _, orders = self.gens_orders()
        out = 1
        for x, o in zip(self.exps, orders):
            out = lcm(out, o // gcd(x, o))
        return out

    def conductor(self):
        if self.order() == 1:
            return 1
        _, orders = self.gens_orders()
        if self.q != 2:
            o = self.order()
            return self.q ** (1 + valuation(o, self.q) if o % self.q == 0
                              else 1)
        # q = 2: conductor from the (-1, 5) structure
        if self.e == 2:
            return 4
        x_minus, x_five = self.exps
        o5 = orders[1] // gcd(self.exps[1], orders[1])
        if o5 == 1:
            return 4 if x_minus % 2 else 1
        return 2 ** (2 + valuation(o5, 2))


class DirichletChar:
    """Dirichlet character mod M with exact cyclotomic values."""

    def __init__(self, modulus, components):
        self.modulus = modulus
        self.components = tuple(sorted(components, key=lambda c: c.q))
        assert modulus == 1 or \
            all(q**e == c.modulus for (q, e), c
                in zip(factor(modulus), self.components))

    # -- constructors ------------------------------------------------------

    @classmethod
    def trivial(cls, modulus=1):
        comps = [_Component(q, e, (0,) * len(_unit_group(q, e)[0]))
                 for q, e in factor(modulus)]
        return cls(modulus, comps)

    @classmethod
    def from_exponents(cls, modulus, exps_by_prime):
        """exps_by_prime: {q: tuple of generator image exponents}."""
        comps = []
        for q, e in factor(modulus):
            ngens = len(_unit_group(q, e)[0])
            exps = tuple(exps_by_prime.get(q, (0,) * ngens))
            if len(exps) != ngens:
                raise DomainError(f"component at {q} needs {ngens} exponents")
            comps.append(_Component(q, e, exps))
        return cls(modulus, comps)

    # -- structure ---------------------------------------------------------

    def order(self):
        out = 1
        for c in self.components:
            out = lcm(out, c.order())
        return out

    def conductor(self):
        out = 1
        for c in self.components:
            out *= c.conductor()
        return out

    def is_primitive(self):
        return self.conductor() == self.modulus

    def primitive_part(self):
        """The primitive character inducing this one."""
        comps = []
        for c in self.components:
            f = c.conductor()
            if f == 1:
                continue
            e_new = valuation(f, c.q)
            comps.append(self._restrict_component(c, e_new))
        return DirichletChar(self.conductor(), comps)

    @staticmethod
    def _restrict_component(c, e_new):
        gens_new, orders_new = _unit_group(c.q, e_new)
        exps = []
        for g, o in zip(gens_new, orders_new):
            k, ko = c.eval_exponent(g)
            # chi(g) is an o-th root of unity since chi factors through e_new
            assert o % ko == 0
            exps.append(k * (o // ko) % o)
        return _Component(c.q, e_new, tuple(exps))

    def extend(self, modulus):
        """Induce to a larger modulus (zero off the new unit group)."""
        if modulus % self.modulus:
            raise DomainError("can only extend to a multiple modulus")
        mine = {c.q: c for c in self.components}
        comps = []
        for q, e in factor(modulus):
            gens, orders = _unit_group(q, e)
            if q not in mine:
                comps.append(_Component(q, e, (0,) * len(gens)))
                continue
            old = mine[q]
            exps = []
            for g, o in zip(gens, orders):
                k, ko = old.eval_exponent(g)
                assert o % ko == 0
                exps.append(k * (o // ko) % o)
            comps.append(_Component(q, e, tuple(exps)))
        return DirichletChar(modulus, comps)

    def __mul__(self, other):
        m = lcm(self.modulus, other.modulus)
        a, b = self.extend(m), other.extend(m)
        comps = []
        for ca, cb in zip(a.components, b.components):
            _, orders = ca.gens_orders()
            exps = tuple((x + y) % o
                         for x, y, o in zip(ca.exps, cb.exps, orders))
            comps.append(_Component(ca.q, ca.e, exps))
        return DirichletChar(m, comps)

    def inverse(self):
        comps = []
        for c in self.components:
            _, orders = c.gens_orders()
            comps.append(_Component(
                c.q, c.e, tuple((-x) % o for x, o in zip(c.exps, orders))))
        return DirichletChar(self.modulus, comps)

    def __pow__(self, k):
        comps = []
        for c in self.components:
            _, orders = c.gens_orders()
            comps.append(_Component(
                c.q, c.e, tuple((x * k) % o for x, o in zip(c.exps, orders))))
        return DirichletChar(self.modulus, comps)

    def __eq__(self, other):
        return (isinstance(other, DirichletChar)
                and self.modulus == other.modulus
                and self.components == other.components)

    def __hash__(self):
        return hash((self.modulus, self.components))

    def __repr__(self):
        return f"DirichletChar(mod {self.modulus}, cond {self.conductor()})"

    # -- evaluation --------------------------------------------------------

    def value_exponent(self, n):
        """Reduced (k, o) with chi(n) = zeta_o^k, or None if gcd(n, M) > 1."""
        if self.modulus == 1:
            return 0, 1
        if gcd(n, self.modulus) != 1:
            return None
        o = 1
        pairs = []
        for c in self.components:
            k, ko = c.eval_exponent(n)
            pairs.append((k, ko))
            o = lcm(o, ko)
        k = sum(ki * (o // oi) for ki, oi in pairs)
        return _reduce_exponent(k, o)

    def eval(self, n):
        """chi(n) as a CycNumber (0 when n shares a factor with M)."""
        ko = self.value_exponent(n)
        if ko is None:
            return CycNumber.from_rational(0)
        k, o = ko
        return CycNumber.zeta_power(o, k)

    def __call__(self, n):
        return self.eval(n)

    def eval_padic(self, n, p, aprec):
        """chi(n) in Z_p; needs the value to be a (p-1)-st root of unity."""
        ko = self.value_exponent(n)
        if ko is None:
            return PAdic.zero(p, aprec)
        k, o = ko
        if o == 1:
            return PAdic.one(p, aprec)
        if (p - 1) % o:
            raise UnsupportedCharacterError(
                f"character value of order {o} does not embed in Z_{p}")
        g = primitive_root(p)
        root = teichmuller(g, p, aprec) ** ((p - 1) // o)
        return root ** k

    def is_even(self):
        if self.modulus <= 2:
            return True
        k, o = self.value_exponent(self.modulus - 1)
        return k == 0

    def is_odd(self):
        return not self.is_even()

    # -- decomposition -----------------------------------------------------

    def decompose(self, n1, r, pp):
        """Split chi mod N1*R*p^a into (chi1 mod N1, chi' mod R, eps1 mod p^a).

        The middle part is returned primitive (conductor modulus).  The
        pointwise product of the three parts agrees with chi on units.
        """
        if gcd(n1, r) != 1 or gcd(n1, pp) != 1 or gcd(r, pp) != 1:
            raise DomainError("decomposition moduli must be pairwise coprime")
        if (n1 * r * pp) % self.modulus:
            raise DomainError("modulus does not divide N1*R*p")
        buckets = {n1: [], r: [], pp: []}
        for c in self.components:
            for m in (n1, r, pp):
                if m % c.modulus == 0:
                    buckets[m].append(c)
                    break
            else:
                raise DomainError(f"component modulus {c.modulus} fits no part")
        out = []
        for m in (n1, r, pp):
            mod = 1
            for c in buckets[m]:
                mod *= c.modulus
            out.append(DirichletChar(mod, buckets[m]))
        chi1, chi_r, eps1 = out
        return chi1, chi_r.primitive_part(), eps1

    # -- serialization -----------------------------------------------------

    def to_json(self):
        images = []
        for c in self.components:
            for x in c.exps:
                images.append([c.q, c.e, x])
        return {"modulus": self.modulus, "generator_images": images,
                "conductor": self.conductor()}

    @classmethod
    def from_json(cls, d):
        by_prime = {}
        for q, e, x in d["generator_images"]:
            by_prime.setdefault(q, []).append(x)
        return cls.from_exponents(d["modulus"],
                                  {q: tuple(v) for q, v in by_prime.items()})


def teichmuller_char(p, power=1):
    """omega^power as a Dirichlet character mod p."""
    return DirichletChar.from_exponents(p, {p: (power % (p - 1),)})


def gauss_sum(chi):
    """G(chi) = sum chi(a) zeta_M^a over a mod M."""
    m = chi.modulus
    if m == 1:
        return CycNumber.from_rational(1)
    order = lcm(m, chi.order())
    counts = [0] * order
    for a in range(m):
        ko = chi.value_exponent(a)
        if ko is None:
            continue
        k, o = ko
        counts[(k * (order // o) + a * (order // m)) % order] += 1
    return CycNumber(order, [Fraction(c) for c in counts])


def matrix_gauss_sum(t2, n, eta):
    """G_g(T2, N, eta) = sum over X in M_g(Z/N) of eta(det X) e(tr(T2 X)/N).

    `t2` is the half-integral matrix T2 given by its doubled entries 2*T2
    (a g x g integer matrix as list of rows).  For odd N the exponential is
    zeta_N^(tr(2 T2 X)/2 mod N); for even N the trace pairing lives in
    zeta_(2N) with X taken in the canonical range [0, N).
    """
    g = len(t2)
    if n == 1:
        return CycNumber.from_rational(1)
    if n % 2:
        inv2 = pow(2, -1, n)
        root_order, scale = n, inv2
    else:
        root_order, scale = 2 * n, 1
    order = lcm(root_order, lcm(n, eta.order()) if eta.modulus > 1 else root_order)
    counts = [0] * order
    cells = [(i, j) for i in range(g) for j in range(g)]
    for x_flat in _tuples(n, g * g):
        det = _det_int([[x_flat[i * g + j] for j in range(g)] for i in range(g)])
        ko = eta.value_exponent(det)
        if ko is None:
            continue
        k, o = ko
        tr2 = sum(t2[i][j] * x_flat[j * g + i] for i, j in cells)
        expo = (k * (order // o)
                + (tr2 * scale) % root_order * (order // root_order)) % order
        counts[expo] += 1
    return CycNumber(order, [Fraction(c) for c in counts])


def matrix_gauss_closed_form(t2, eta):
    """Conductor-C closed form C^(g(g-1)/2) eta^(-1)(det T2) G(eta)^g.

    Valid for primitive eta of odd conductor C with gcd(det 2T2, C) = 1.
    """
    g = len(t2)
    c = eta.modulus
    if c % 2 == 0:
        raise DomainError("closed form implemented for odd conductor")
    det2 = _det_int(t2)
    if gcd(det2, c) != 1:
        raise DomainError("closed form needs gcd(det 2T2, C) = 1")
    det_t2 = det2 * pow(pow(2, g, c), -1, c) % c
    return (CycNumber.from_rational(c ** (g * (g - 1) // 2))
            * eta.inverse().eval(det_t2) * gauss_sum(eta) ** g)


@lru_cache(maxsize=None)
def quad_char_sigma(d):
    """Quadratic character attached to disc(Q(sqrt(d))).

    Returns (chi, f) with d = d0 * f^2, d0 fundamental, and chi the
    Kronecker character (d0/.) of conductor |d0|.
    """
    if d == 0:
        raise DomainError("discriminant must be nonzero")
    d0, f = fundamental_discriminant(d)
    if d0 == 1:
        return DirichletChar.trivial(1), f
    comps = []
    fac = factor(abs(d0))
    moduli = [q**e for q, e in fac]
    for (q, e), mod in zip(fac, moduli):
        gens, orders = _unit_group(q, e)
        exps = []
        for g, o in zip(gens, orders):
            lift = crt([g if m == mod else 1 for m in moduli], moduli)
            v = kronecker(d0, lift)
            assert v in (1, -1)
            exps.append(0 if v == 1 else o // 2)
        comps.append(_Component(q, e, tuple(exps)))
    return DirichletChar(abs(d0), comps), f


def _tuples(base, length):
    idx = [0] * length
    while True:
        yield tuple(idx)
        i = 0
        while i < length:
            idx[i] += 1
            if idx[i] < base:
                break
            idx[i] = 0
            i += 1
        else:
            return


def _det_int(m):
    n = len(m)
    if n == 1:
        return m[0][0]
    if n == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    out = 0
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        out += (-1) ** j * m[0][j] * _det_int(minor)
    return out
