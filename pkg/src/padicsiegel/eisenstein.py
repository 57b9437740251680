"""Assembly of Eisenstein Fourier coefficients: the classical bracket at
s = 0, the two p-adic coefficient families, truncated measure evaluation,
normalization constants, and the classical-vs-family congruence check.

Conventions pinned here:
  * the classical side is evaluated only at s = 0 (weight k = t + g), where
    the holomorphic differential operator acts as the identity;
  * Dirichlet characters are evaluated at their stated moduli, so terms
    sharing a factor with the twist level vanish and imprimitive L-values
    carry their Euler factors (this is what matches the family's
    Kubota-Leopoldt factor exactly);
  * Gamma_g(s) = pi^(g(g-1)/4) prod Gamma(s - (i-1)/2), the convention
    under which both proof identities of gamma_identities_check hold.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .bernoulli import kl_eval, l_neg, l_neg_padic
from .characters import (DirichletChar, gauss_sum, matrix_gauss_sum,
                         quad_char_sigma, teichmuller_char)
from .cyclotomic import CycNumber
from .errors import DomainError, PoleError
from .numutil import factor, valuation
from .padic import PAdic, angle
from .quadforms import BlockI, d_cosets, enumerate_I
from .siegel import poly_eval, siegel_poly_Bq

__all__ = ["EisParams", "QExp2", "gamma_g", "const_B2g", "SymbolicConst",
           "Prefactor", "prefactor_A", "prefactor_A_star", "classical_coeff",
           "classical_coeff_padic", "family_coeff", "improved_coeff",
           "measure_eval", "congruence_check", "gamma_identities_check"]


@dataclass(frozen=True)
class EisParams:
    """Level and character data for one Eisenstein family.

    phi is the Nebentypus mod N*p; chi = chi1 * chi_prime * eps_p with
    chi1 mod N1 (N1 | N), chi_prime primitive mod R (gcd(R, Np) = 1) and
    eps_p mod p^(1+n).
    """

    g: int
    p: int
    level: int          # N, prime to p
    n1: int
    r: int
    nn: int             # p-power exponent of the twist level
    phi: DirichletChar
    chi1: DirichletChar
    chi_prime: DirichletChar
    eps_p: DirichletChar

    def __post_init__(self):
        if self.level % self.n1:
            raise DomainError("N1 must divide N")
        if math.gcd(self.r, self.level * self.p) != 1:
            raise DomainError("R must be coprime to Np")

    def chi(self):
        return self.chi1 * self.chi_prime * self.eps_p

    @classmethod
    def trivial(cls, g, p, phi=None):
        one = DirichletChar.trivial()
        return cls(g, p, 1, 1, 1, 0, phi if phi is not None else one,
                   one, one, one)


class QExp2:
    """Truncated two-sided expansion: finite map (T1, T4) -> coefficient.

    Keys are integral symmetric g x g matrices as tuples of row tuples;
    absent keys mean 0.  The truncation bound is a per-side pair of trace
    bounds (an int means both sides).  Serialization order is the sorted
    key order.
    """

    def __init__(self, g, bound, entries=None):
        self.g = g
        self.bounds = (bound, bound) if isinstance(bound, int) else tuple(bound)
        self.entries = dict(entries or {})

    @staticmethod
    def key(t1, t4):
        return (tuple(tuple(r) for r in t1), tuple(tuple(r) for r in t4))

    def set(self, t1, t4, value):
        self.entries[self.key(t1, t4)] = value

    def get(self, t1, t4):
        return self.entries.get(self.key(t1, t4))

    def items_sorted(self):
        return sorted(self.entries.items(), key=lambda kv: kv[0])

    def map_index(self, factor):
        """Pushforward (T1, T4) -> (factor*T1, factor*T4) of the index map."""
        out = {}
        for (t1, t4), v in self.entries.items():
            s1 = tuple(tuple(factor * x for x in r) for r in t1)
            s4 = tuple(tuple(factor * x for x in r) for r in t4)
            out[(s1, s4)] = v
        return QExp2(self.g, (self.bounds[0] * factor,
                              self.bounds[1] * factor), out)

    def to_json(self):
        out = []
        for (t1, t4), v in self.items_sorted():
            if isinstance(v, PAdic):
                val = v.to_json()
            elif isinstance(v, CycNumber):
                val = v.to_json()
            else:
                val = str(v)
            out.append({"T1": [list(r) for r in t1],
                        "T4": [list(r) for r in t4], "value": val})
        return out


# -- Gamma machinery ---------------------------------------------------------

def gamma_g(s, g):
    """Siegel Gamma factor pi^(g(g-1)/4) prod_i Gamma(s - (i-1)/2), float."""
    args = [s - (i - 1) / 2 for i in range(1, g + 1)]
    for a in args:
        if a <= 0 and abs(a - round(a)) < 1e-12:
            raise PoleError(f"Gamma factor has a pole at argument {a}")
    return math.pi ** (g * (g - 1) / 4) * math.prod(math.gamma(a) for a in args)


def _gamma_half_exact(j):
    """Gamma(j/2) as (rational, half) with value = rational * pi^half."""
    if j % 2 == 0:
        return Fraction(math.factorial(j // 2 - 1)), Fraction(0)
    n = (j - 1) // 2
    return Fraction(math.factorial(2 * n), 4**n * math.factorial(n)), \
        Fraction(1, 2)


@dataclass(frozen=True)
class SymbolicConst:
    """sign * rational * 2^two_power * pi^pi_power with odd rational."""

    sign: int
    rational: Fraction
    pi_power: int
    two_power: int

    def float_value(self):
        return (self.sign * float(self.rational) * 2.0**self.two_power
                * math.pi**self.pi_power)

    def to_json(self):
        return {"sign": self.sign, "rational": str(self.rational),
                "pi_power": self.pi_power, "two_power": self.two_power}


def _split_two(x):
    """x = 2^k * odd; returns (k, odd) for a positive Fraction."""
    num, den = x.numerator, x.denominator
    k = 0
    while num % 2 == 0:
        num //= 2
        k += 1
    while den % 2 == 0:
        den //= 2
        k -= 1
    return k, Fraction(num, den)


def const_B2g(t, g):
    """B_2g(t) = (-1)^(g(g+t)) 2^(g+2gt) pi^(g+2g^2) / Gamma_2g(g + 1/2),
    reduced exactly (Gamma_2g(g+1/2) is rational * pi^(g^2))."""
    if t < 1:
        raise DomainError("t must be >= 1")
    rat = Fraction(1)
    half = Fraction(g * (2 * g - 1), 2)  # pi-exponent of the prefactor
    for j in range(2, 2 * g + 2):
        r, h = _gamma_half_exact(j)
        rat *= r
        half += h
    assert half.denominator == 1
    pi_pow = g + 2 * g * g - int(half)
    sign = -1 if (g * (g + t)) % 2 else 1
    k, odd = _split_two(Fraction(1) / rat)
    return SymbolicConst(sign, odd, pi_pow, g + 2 * g * t + k)


@dataclass(frozen=True)
class Prefactor:
    """A = level_power * B_2g(t) * (2 pi i)^(s g) * G(char)^g."""

    b2g: SymbolicConst
    level_power: int
    two_pi_i_power: int
    gauss: CycNumber

    def collapses_to_b2g(self):
        return (self.level_power == 1 and self.two_pi_i_power == 0
                and self.gauss.is_rational()
                and self.gauss.to_rational() == 1)

    def to_json(self):
        return {"b2g": self.b2g.to_json(), "level_power": self.level_power,
                "two_pi_i_power": self.two_pi_i_power,
                "gauss": self.gauss.to_json()}


def prefactor_A(params, t, s, extra=None):
    """A(k, t, eps) with the Gauss factor of the primitive part of
    chi' * eps_p * extra (extra carries eps omega^(-t) when twisting)."""
    g = params.g
    char = params.chi_prime * params.eps_p
    if extra is not None:
        char = char * extra
    prim = char.primitive_part()
    levpow = (params.r * params.p**params.nn) ** (g * (g - 1) // 2)
    return Prefactor(const_B2g(t, g), levpow, s * g, gauss_sum(prim) ** g)


def prefactor_A_star(params, k):
    """A*(k) = R^(g(g-1)/2) B_2g(k-g) (2 pi i)^(sg)|_(s=0) G(chi')^g."""
    g = params.g
    return Prefactor(const_B2g(k - g, g), params.r ** (g * (g - 1) // 2),
                     0, gauss_sum(params.chi_prime.primitive_part()) ** g)


# -- coefficient assembly ----------------------------------------------------

@lru_cache(maxsize=None)
def _cosets_cached(assembled_twice, g, ell, t1, t4, t2tw):
    return tuple(d_cosets(BlockI(g, ell, t1, t4, t2tw)))


def _block_cosets(block):
    return _cosets_cached(block.assembled().twice, block.g, block.ell,
                          block.t1, block.t4, block.t2_twice)


def _as_matrix(x, g):
    if isinstance(x, int):
        if g != 1:
            raise DomainError("scalar index only valid for g = 1")
        return ((x,),)
    return tuple(tuple(r) for r in x)


def classical_coeff(t1, t4, params, t, ell=1):
    """Bracketed Fourier coefficient of the classical series at s = 0,
    exact in a cyclotomic field.

    Sum over I of G_g(T2, N, chi1) (chi' eps_p)^(-1)(det 2T2) *
    sum over G in GL\\D(I) of (phi chi)^2(det G) |det G|^(2t-1) *
    L(1-t, sigma_(-det 2I) phi chi) * prod_q B_q(chi phi(q) q^(t-g-1), J_G).
    """
    g = params.g
    t1m, t4m = _as_matrix(t1, g), _as_matrix(t4, g)
    chi = params.chi()
    chirp = params.chi_prime * params.eps_p
    chiphi = chi * params.phi
    gsq = chiphi ** 2
    total = CycNumber.from_rational(0)
    for block in enumerate_I(t1m, t4m, ell):
        z = block.det_t2_twice()
        fac_inv = chirp.inverse().eval(z)
        if fac_inv.is_zero():
            continue
        gg = matrix_gauss_sum(block.t2_twice, params.level, params.chi1)
        if gg.is_zero():
            continue
        det2i = block.det_twice()
        sigma_chi, _ = quad_char_sigma(-det2i)
        lval = l_neg(t, sigma_chi * params.phi * chi)
        if lval.is_zero():
            continue
        gsum = CycNumber.from_rational(0)
        for rep in _block_cosets(block):
            term = gsq.eval(rep.det)
            if term.is_zero():
                continue
            term = term * Fraction(rep.det) ** (2 * t - 1)
            det2j = rep.form.det_twice()
            for q, _ in factor(det2j):
                arg = chiphi.eval(q)
                if arg.is_zero():
                    bval = CycNumber.from_rational(1)  # empty local factor
                else:
                    bq = siegel_poly_Bq(rep.form, q)
                    bval = poly_eval(bq, arg * Fraction(q) ** (t - g - 1))
                term = term * bval
            gsum = gsum + term
        total = total + fac_inv * gg * lval * gsum
    return total


def classical_coeff_padic(t1, t4, params, t, aprec, ell=1):
    """The same bracket embedded in Z_p at absolute precision aprec (the
    scalable route for classical-vs-family congruence checks)."""
    g, p = params.g, params.p
    work = aprec + 2
    t1m, t4m = _as_matrix(t1, g), _as_matrix(t4, g)
    chi = params.chi()
    chirp = params.chi_prime * params.eps_p
    chiphi = chi * params.phi
    gsq = chiphi ** 2
    total = PAdic.zero(p, work)
    for block in enumerate_I(t1m, t4m, ell):
        z = block.det_t2_twice()
        fac_inv = chirp.inverse().eval_padic(z, p, work)
        if fac_inv.is_zero():
            continue
        gg = matrix_gauss_sum(block.t2_twice, params.level, params.chi1)
        if gg.is_zero():
            continue
        det2i = block.det_twice()
        sigma_chi, _ = quad_char_sigma(-det2i)
        lval = l_neg_padic(t, sigma_chi * params.phi * chi, p, work)
        gsum = PAdic.zero(p, work)
        for rep in _block_cosets(block):
            term = gsq.eval_padic(rep.det, p, work)
            if term.is_zero():
                continue
            term = term * PAdic.from_rational(
                Fraction(rep.det) ** (2 * t - 1), p, work)
            det2j = rep.form.det_twice()
            for q, _ in factor(det2j):
                arg = chiphi.eval_padic(q, p, work)
                if not arg.is_zero():
                    bq = siegel_poly_Bq(rep.form, q)
                    term = term * poly_eval(
                        bq, arg * PAdic.from_rational(
                            Fraction(q) ** (t - g - 1), p, work))
            gsum = gsum + term
        total = total + fac_inv * gg.padic(p, work) * lval * gsum
    return total


def family_coeff(t1, t4, ell, k, t, params, aprec):
    """a_(T1,T4,L)(kappa, kappa') at integer points kappa = [k],
    kappa' = [t]; terms with p | det(2T2) vanish."""
    g, p = params.g, params.p
    work = aprec + 3
    t1m, t4m = _as_matrix(t1, g), _as_matrix(t4, g)
    chi = params.chi()
    gsq = (params.phi * params.chi1 * params.chi_prime) ** 2
    # the B_q twist carries the full phi*chi, matching the improved family's
    # display and the classical side (the two-variable display drops the
    # chi factors its own specialization needs)
    bq_char = params.phi * chi
    total = PAdic.zero(p, work)
    for block in enumerate_I(t1m, t4m, ell):
        z = block.det_t2_twice()
        if z % p == 0:
            continue  # stated vanishing of p-divisible terms
        ang = angle(z, p, work) ** (k - t - g)
        fac = params.chi_prime.inverse().eval_padic(z, p, work)
        if fac.is_zero():
            continue
        det2i = block.det_twice()
        sigma_chi, _ = quad_char_sigma(-det2i)
        try:
            klv = kl_eval(t, sigma_chi * params.phi * chi, p, work)
        except PoleError as exc:
            raise PoleError(
                f"Kubota-Leopoldt pole inside the I-term with 2T2 = "
                f"{block.t2_twice}", residue=exc.residue) from exc
        if klv.is_zero():
            continue
        gsum = PAdic.zero(p, work)
        for rep in _block_cosets(block):
            d = rep.det
            cval = gsq.eval_padic(d, p, work)
            if cval.is_zero():
                continue
            term = cval * PAdic.from_rational(Fraction(1, d), p, work) \
                * angle(d, p, work) ** (2 * t)
            det2j = rep.form.det_twice()
            for q, _ in factor(det2j):
                chq = bq_char.eval_padic(q, p, work)
                if chq.is_zero():
                    continue
                bq = siegel_poly_Bq(rep.form, q)
                arg = chq * angle(q, p, work) ** t \
                    * PAdic.from_rational(Fraction(1, q ** (g + 1)), p, work)
                term = term * poly_eval(bq, arg)
            gsum = gsum + term
        total = total + ang * fac * klv * gsum
    return PAdic(p, min(aprec, total.aprec), total.val, total.unit)


def improved_coeff(t1, t4, k, params, aprec):
    """a*_(T1,T4)(kappa[1-k0]) at kappa = [k], k0 = g+1: the one-variable
    improved family.  Terms with p | det(2T2) are retained; on p-coprime
    terms this agrees with family_coeff at kappa' = [k - g]."""
    g, p = params.g, params.p
    work = aprec + 3
    kt = k - g  # net exponent shift kappa[1 - k0]
    t1m, t4m = _as_matrix(t1, g), _as_matrix(t4, g)
    chi_tame = params.chi1 * params.chi_prime
    gsq = (params.phi * chi_tame) ** 2
    total = PAdic.zero(p, work)
    for block in enumerate_I(t1m, t4m, 1):
        z = block.det_t2_twice()
        fac = chi_tame.inverse().eval_padic(z, p, work)
        if fac.is_zero():
            continue
        det2i = block.det_twice()
        sigma_chi, _ = quad_char_sigma(-det2i)
        try:
            klv = kl_eval(kt, sigma_chi * params.phi * chi_tame, p, work)
        except PoleError as exc:
            raise PoleError(
                f"Kubota-Leopoldt pole inside the I-term with 2T2 = "
                f"{block.t2_twice}", residue=exc.residue) from exc
        if klv.is_zero():
            continue
        gsum = PAdic.zero(p, work)
        for rep in _block_cosets(block):
            d = rep.det
            cval = gsq.eval_padic(d, p, work)
            if cval.is_zero():
                continue
            term = cval * PAdic.from_rational(Fraction(1, d), p, work) \
                * angle(d, p, work) ** (2 * kt)
            det2j = rep.form.det_twice()
            for q, _ in factor(det2j):
                cq = (params.phi * chi_tame).eval_padic(q, p, work)
                if cq.is_zero():
                    continue
                bq = siegel_poly_Bq(rep.form, q)
                arg = cq * angle(q, p, work) ** kt \
                    * PAdic.from_rational(Fraction(1, q ** (g + 1)), p, work)
                term = term * poly_eval(bq, arg)
            gsum = gsum + term
        total = total + fac * klv * gsum
    return PAdic(p, min(aprec, total.aprec), total.val, total.unit)


def measure_eval(k, t, bound, params, aprec, ell=1):
    """Truncated double expansion of the measure at ([k], [t]): all indices
    with tr(T1) <= bound and tr(T4) <= bound (g = 1: scalar indices)."""
    if params.g != 1:
        raise DomainError("measure tables are materialized for g = 1")
    out = QExp2(params.g, bound)
    for i1 in range(bound + 1):
        for i4 in range(bound + 1):
            val = family_coeff(i1, i4, ell, k, t, params, aprec)
            out.set(((i1,),), ((i4,),), val)
    return out


def congruence_check(k, t, j, t1, t4, params, eps=None):
    """Normalized classical coefficient of the p^j-twisted series vs the
    family coefficient at ([k], [t]), compared mod p^j (s = 0, so the
    operator constant is 1 and the comparison is exact equality checked to
    the stated modulus).  Returns (bool, witness)."""
    g, p = params.g, params.p
    if k != t + g:
        raise DomainError("the classical side is computable only at s = 0 "
                          "(k = t + g)")
    if eps is not None:
        raise DomainError("nontrivial eps twists are outside numeric scope")
    if j == 0:
        return True, {"note": "mod p^0 congruence is vacuous"}
    # the U_p^(2j)-image structure makes both sides highly divisible by p;
    # witnesses are computed with extra digits so agreement is visible
    aprec = j + 4
    ell = p**j
    fam = family_coeff(t1, t4, ell, k, t, params, aprec)
    twisted = EisParams(
        g, p, params.level, params.n1, params.r, params.nn, params.phi,
        params.chi1, params.chi_prime,
        params.eps_p * teichmuller_char(p, -t))
    cla = classical_coeff_padic(t1, t4, twisted, t, aprec, ell=ell)
    ok = fam.eq_mod(cla, j)
    strong = fam.eq_mod(cla, min(fam.aprec, cla.aprec))
    witness = {"family": fam.to_json(), "classical": cla.to_json(),
               "modulus": f"{p}^{j}", "indices": {"T1": t1, "T4": t4},
               "point": {"k": k, "t": t},
               "agree_at_full_precision": strong}
    return ok, witness


def gamma_identities_check(g, s_values=None, tol=1e-10):
    """Both Gamma identities used in the interpolation constant:
    the duplication formula and Gamma_2g(g+1/2)/(Gamma_g(g+1/2)
    Gamma_g((g+1)/2)) = pi^(g^2/2)."""
    if s_values is None:
        s_values = [1 + i / 2 for i in range(2, 22)]
    for s in s_values:
        lhs = gamma_g(s, g) * gamma_g(s + 0.5, g)
        rhs = (math.pi ** (g * (g - 1) / 2) * 2 ** (g * (g + 1) / 2 - 2 * g * s)
               * math.pi ** (g / 2)
               * math.prod(math.gamma(2 * s - i + 1) for i in range(1, g + 1)))
        if not math.isclose(lhs, rhs, rel_tol=tol):
            return False
    ratio = gamma_g(g + 0.5, 2 * g) / (gamma_g(g + 0.5, g)
                                       * gamma_g((g + 1) / 2, g))
    return math.isclose(ratio, math.pi ** (g * g / 2), rel_tol=tol)
