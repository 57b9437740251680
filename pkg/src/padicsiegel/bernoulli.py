"""Generalized Bernoulli numbers, Dirichlet L-values at non-positive
integers, and the Kubota-Leopoldt p-adic L-function at arithmetic points.

Values are computed pointwise from exact special values; there is no
power-series model.  Two evaluation paths exist for B_(t,chi): an exact
cyclotomic one (small modulus) and a modular one working mod p^m that
vectorizes the character sum, used for large conductors.  Both implement
B_(t,chi) = M^(t-1) sum_(a=1..M) chi(a) B_t(a/M), which gives B_1 = +1/2
for the trivial character, so L(0, trivial) = -1/2.
"""

from fractions import Fraction
from functools import lru_cache
from math import comb, gcd, lcm

import numpy as np

from .characters import DirichletChar, teichmuller_char
from .cyclotomic import CycNumber
from .errors import (DomainError, PoleError, PrecisionError,
                     UnsupportedCharacterError)
from .numutil import primitive_root, valuation
from .padic import PAdic, teichmuller

__all__ = ["bernoulli_number", "bernoulli_poly_coeffs", "gen_bernoulli",
           "gen_bernoulli_padic", "l_neg", "kl_eval", "kl_residue"]

_EXACT_MODULUS_CUTOFF = 4000


_BERNOULLI_CACHE = [Fraction(1), Fraction(-1, 2)]


def _bernoulli_list(n):
    """B_0..B_n (B_1 = -1/2 convention) via the binomial recurrence."""
    out = _BERNOULLI_CACHE
    for m in range(len(out), n + 1):
        if m % 2 and m > 1:
            out.append(Fraction(0))
            continue
        s = sum(Fraction(comb(m + 1, j)) * out[j] for j in range(0, m, 1 if m <= 2 else 2))
        if m > 2:
            s += Fraction(comb(m + 1, 1)) * out[1]
        out.append(-s / (m + 1))
    return out[:n + 1]


def bernoulli_number(n):
    return _bernoulli_list(n)[n]


@lru_cache(maxsize=None)
def bernoulli_poly_coeffs(t):
    """Ascending coefficients of B_t(x) = sum_j C(t,j) B_(t-j) x^j."""
    bs = _bernoulli_list(t)
    return tuple(Fraction(comb(t, j)) * bs[t - j] for j in range(t + 1))


def gen_bernoulli(t, eta):
    """B_(t,eta) = M^(t-1) sum_(a=1..M) eta(a) B_t(a/M), exact."""
    if t < 0:
        raise DomainError("t must be >= 0")
    m = eta.modulus
    coeffs = bernoulli_poly_coeffs(t)
    acc = CycNumber.from_rational(0)
    for a in range(1, m + 1):
        val = eta.eval(a)
        if val.is_zero():
            continue
        x = Fraction(a, m)
        bt = Fraction(0)
        xp = Fraction(1)
        for c in coeffs:
            bt += c * xp
            xp *= x
        acc = acc + val * bt
    return acc * Fraction(m) ** (t - 1)


@lru_cache(maxsize=512)
def _component_value_table(comp, p, m):
    """Embedded values of one character component mod p^m, indexed by
    residue; zero at non-units."""
    q, e = comp.q, comp.e
    mod = q**e
    pm = p**m
    out = np.zeros(mod, dtype=np.int64 if pm < 2**62 else object)
    order = comp.order()
    if order == 1:
        idx = np.arange(mod, dtype=np.int64)
        out[idx % q != 0] = 1
        return out
    if order == 2 and e == 1 and q != 2:
        # the quadratic character mod an odd prime: Legendre symbol table
        idx = np.arange(mod, dtype=np.int64)
        out[1:] = (-1) % pm
        out[(idx * idx) % q] = 1
        out[0] = 0
        return out
    if (p - 1) % order:
        raise UnsupportedCharacterError(
            f"component of order {order} does not embed in Z_{p}")
    g = primitive_root(p)
    root = teichmuller(g, p, m) ** ((p - 1) // order)
    powers = [1]
    for _ in range(order - 1):
        powers.append(powers[-1] * root.unit_residue(m) % pm)
    for a in range(mod):
        if gcd(a, q) != 1:
            continue
        k, o = comp.eval_exponent(a)
        out[a] = powers[(k * (order // o)) % order]
    return out


def _power_sums_padic(chi, t, p, m):
    """S_i = sum_(a=1..M) chi(a) a^i mod p^m for i = 0..t, via numpy.

    Products stay below 2^63 only when p^m < 2^31; beyond that an exact
    object-dtype pass is used.
    """
    pm = p**m
    dtype = np.int64 if pm < 2**31 else object
    mmod = chi.modulus
    idx = np.arange(mmod + 1, dtype=np.int64)  # a = 0..M; a=0 contributes 0
    val = np.ones(mmod + 1, dtype=dtype)
    for comp in chi.components:
        tbl = _component_value_table(comp, p, m).astype(dtype)
        val = val * tbl[idx % comp.modulus] % pm
    val[0] = 0
    sums = []
    power = np.ones(mmod + 1, dtype=dtype)
    amod = (idx % pm).astype(dtype)
    for _ in range(t + 1):
        sums.append(int((val * power % pm).sum() % pm))
        power = power * amod % pm
    return sums


_GENB_CACHE = {}


def gen_bernoulli_padic(t, chi, p, aprec):
    """B_(t,chi) embedded in Q_p at absolute precision aprec.

    Three routes: exact cyclotomic evaluation (small modulus), modular
    power sums over the full modulus, or a CRT split peeling off the
    largest quadratic component (large conductors).
    """
    aprec = (aprec + 5) // 6 * 6  # bucket so different callers share work
    key = (t, chi, p, aprec)
    if key in _GENB_CACHE:
        return _GENB_CACHE[key]
    out = _gen_bernoulli_padic_impl(t, chi, p, aprec)
    _GENB_CACHE[key] = out
    return out


def _gen_bernoulli_padic_impl(t, chi, p, aprec):
    mmod = chi.modulus
    if mmod <= _EXACT_MODULUS_CUTOFF:
        slack = 2 + (valuation(mmod, p) if mmod % p == 0 else 0) * max(t, 1)
        return gen_bernoulli(t, chi).padic(p, aprec + slack)
    if mmod > 100_000:
        return _gen_bernoulli_padic_split(t, chi, p, aprec)
    vm = valuation(mmod, p) if mmod % p == 0 else 0
    work = aprec + vm + 3
    sums = _power_sums_padic(chi, t, p, work)
    bs = _bernoulli_list(t)
    acc = PAdic.zero(p, work)
    for j in range(t + 1):
        coef = Fraction(comb(t, j)) * bs[j] * Fraction(mmod) ** (j - 1)
        s = sums[t - j]
        if s == 0 or coef == 0:
            continue
        term = PAdic.from_rational(coef, p, work) * PAdic(p, work, 0, s)
        acc = acc + term
    return acc


def _gen_bernoulli_padic_split(t, chi, p, aprec):
    """CRT split B_(t, chi1 chi2): chi1 carries the large components
    (vectorized side, modulus m1), chi2 the small ones (looped side, m2).
    With a = CRT(b, c), a/M = {b~/m1} + {c~/m2} mod 1, so the Bernoulli
    addition theorem separates the double sum up to the carry correction
    B_t(z-1) = B_t(z) - t (z-1)^(t-1) on x + y >= 1, handled by suffix
    sums over the vectorized side."""
    from .characters import DirichletChar
    comps = sorted(chi.components, key=lambda c: c.modulus)
    m2, small = 1, []
    for c in comps:
        if m2 * c.modulus <= 4000 and len(small) < len(comps) - 1:
            m2 *= c.modulus
            small.append(c)
        else:
            break
    rest = [c for c in comps if c not in small]
    m1 = 1
    for c in rest:
        m1 *= c.modulus
    chi1 = DirichletChar(m1, rest)
    chi2 = DirichletChar(m2, small)
    vm2 = valuation(m2, p) if m2 % p == 0 else 0
    work = aprec + vm2 + 3
    pm = p**work
    dtype = np.int64 if pm < 2**31 else object
    # chi1 value table over [0, m1) as a product of component tables
    idx = np.arange(m1, dtype=np.int64)
    tbl1 = np.ones(m1, dtype=dtype)
    for c in rest:
        ctbl = _component_value_table(c, p, work).astype(dtype)
        tbl1 = tbl1 * ctbl[idx % c.modulus] % pm
    bmod = (idx % pm).astype(dtype)
    # cumulative sums of chi1(b) b^r for the suffix machinery
    u_tot = []
    cums = []
    vals = tbl1
    for r in range(t + 1):
        cs = np.cumsum(vals)
        cums.append(cs)
        u_tot.append(int(cs[-1]) % pm)
        if r < t:
            vals = vals * bmod % pm
    bsn = _bernoulli_list(t)

    def fr(x):
        return PAdic.from_rational(x, p, work)

    def pint(x):
        return PAdic(p, work, 0, int(x) % pm)

    def chi2_val(c):
        if m2 == 1:
            return 1 if c == 0 else None
        ko = chi2.value_exponent(c)
        return None if ko is None else _embedded_value(ko, p, work)

    # separated main term, premultiplied by m2^(t-1):
    #   sum_j C(t,j) m2^(j-1) [sum_r C(j,r) B_(j-r) m1^(-r) U_r] V_(t-j)
    v_sums = []
    for jj in range(t + 1):
        acc = 0
        for c in range(m2 + (1 if m2 == 1 else 0)):
            val = chi2_val(c)
            if val is None:
                continue
            acc = (acc + val * pow(c, jj, pm)) % pm
        v_sums.append(acc)
    main = PAdic.zero(p, work)
    for j in range(t + 1):
        if v_sums[t - j] == 0:
            continue
        inner = PAdic.zero(p, work)
        for r in range(j + 1):
            coef = Fraction(comb(j, r)) * bsn[j - r] / Fraction(m1) ** r
            if coef == 0 or u_tot[r] == 0:
                continue
            inner = inner + fr(coef) * pint(u_tot[r])
        main = main + fr(Fraction(comb(t, j)) * Fraction(m2) ** (j - 1)) \
            * inner * pint(v_sums[t - j])
    # carry correction, premultiplied by m2^(t-1):
    #   t * sum_c chi2(c) sum_i C(t-1,i) m1^(-i) m2^i (c-m2)^(t-1-i) Suf_i
    corr = PAdic.zero(p, work)
    for c in range(1, m2):
        val2 = chi2_val(c)
        if val2 is None:
            continue
        thresh = -((-m1 * (m2 - c)) // m2)  # ceil(m1 (m2-c) / m2)
        if thresh >= m1:
            continue
        inner = PAdic.zero(p, work)
        for i in range(t):
            suf = int(cums[i][-1] - (cums[i][thresh - 1] if thresh else 0))
            suf %= pm
            if suf == 0:
                continue
            coef = Fraction(comb(t - 1, i), m1**i) \
                * Fraction(m2) ** i * Fraction(c - m2) ** (t - 1 - i)
            if coef == 0:
                continue
            inner = inner + fr(coef) * pint(suf)
        corr = corr + pint(val2) * inner
    total = main - fr(Fraction(t)) * corr
    scale = fr(Fraction(m1) ** (t - 1))
    cv1 = chi1.eval_padic(m2 % m1, p, work)
    cv2 = chi2.eval_padic(m1 % m2, p, work) if m2 > 1 else PAdic.one(p, work)
    return scale * cv1 * cv2 * total


@lru_cache(maxsize=None)
def _embedded_root(p, work, o):
    """Residue mod p^work of the canonical primitive o-th root of unity."""
    if (p - 1) % o:
        raise UnsupportedCharacterError(
            f"value of order {o} does not embed in Z_{p}")
    g = primitive_root(p)
    return (teichmuller(g, p, work) ** ((p - 1) // o)).unit_residue(work)


def _embedded_value(ko, p, work):
    """Embedded root of unity from a reduced exponent pair, as an integer
    residue mod p^work."""
    k, o = ko
    if o == 1:
        return 1
    if o == 2:
        return (-1) % p**work
    return pow(_embedded_root(p, work, o), k, p**work)


def _gen_bernoulli_padic_impl_plain(t, chi, p, aprec):
    vm = valuation(chi.modulus, p) if chi.modulus % p == 0 else 0
    work = aprec + vm + 3
    sums = _power_sums_padic(chi, t, p, work)
    bs = _bernoulli_list(t)
    acc = PAdic.zero(p, work)
    for j in range(t + 1):
        coef = Fraction(comb(t, j)) * bs[j] * Fraction(chi.modulus) ** (j - 1)
        s = sums[t - j]
        if s == 0 or coef == 0:
            continue
        acc = acc + PAdic.from_rational(coef, p, work) * PAdic(p, work, 0, s)
    return acc


def l_neg(t, eta):
    """L(1-t, eta) = -B_(t,eta)/t, exact in the cyclotomic field."""
    if t < 1:
        raise DomainError("t must be >= 1")
    return gen_bernoulli(t, eta) * Fraction(-1, t)


_LNEG_CACHE = {}


def l_neg_padic(t, eta, p, aprec):
    """L(1-t, eta) embedded in Q_p, eta taken at its stated modulus: the
    Euler factors (1 - eta0(q) q^(t-1)) at primes of the modulus away from
    the conductor are included, matching the exact imprimitive value."""
    if t < 1:
        raise DomainError("t must be >= 1")
    key = (t, eta, p, aprec)
    if key in _LNEG_CACHE:
        return _LNEG_CACHE[key]
    psi0 = eta.primitive_part()
    vt = valuation(t, p) if t % p == 0 else 0
    work = aprec + vt + 2
    val = gen_bernoulli_padic(t, psi0, p, work) * Fraction(-1, t)
    cond = psi0.conductor()
    from .numutil import factor
    for q, _ in factor(eta.modulus):
        if cond % q:
            val = val * (PAdic.one(p, work)
                         - psi0.eval_padic(q, p, work)
                         * PAdic.from_rational(Fraction(q) ** (t - 1), p, work))
    _LNEG_CACHE[key] = val
    return val


_KL_CACHE = {}


def kl_eval(t, eta, p, aprec, eps=None, literal_euler=False):
    """Kubota-Leopoldt value L_p(eps(u)[t], eta) as a PAdic.

    Interpolation: (1 - psi0(p) p^(t-1)) L(1-t, psi0) for psi0 the primitive
    character attached to eps * omega^(-t) * eta.  The paper's display omits
    the power p^(t-1); `literal_euler=True` reproduces that literal factor
    (it then fails Kummer congruences).  Only eps trivial is supported
    numerically: p-power-order values live in ramified extensions.
    """
    if eps is not None and not (isinstance(eps, int) and eps == 1):
        raise UnsupportedCharacterError(
            "finite-order eps of p-power order does not embed in Z_p")
    if t < 0:
        raise DomainError("t must be >= 0")
    key = (t, eta, p, aprec, literal_euler)
    if key in _KL_CACHE:
        return _KL_CACHE[key]
    # odd eta makes every interpolated value vanish by the parity of
    # generalized Bernoulli numbers; the value 0 is returned honestly
    psi = teichmuller_char(p, -t) * eta
    psi0 = psi.primitive_part()
    if t == 0:
        if psi0.modulus == 1:
            raise PoleError("simple pole of L_p at [0]",
                            residue=kl_residue(DirichletChar.trivial(), p, aprec))
        raise DomainError("t = 0 away from the pole is outside interpolation")
    vt = valuation(t, p) if t % p == 0 else 0
    work = aprec + vt + 2
    bval = gen_bernoulli_padic(t, psi0, p, work)
    lval = bval * Fraction(-1, t)
    chi_p = psi0.eval_padic(p, p, work)
    if literal_euler:
        euler = PAdic.one(p, work) - chi_p
    else:
        euler = PAdic.one(p, work) - chi_p * PAdic.from_rational(
            Fraction(p) ** (t - 1), p, work)
    out = euler * lval
    out = PAdic(p, min(aprec, out.aprec), out.val, out.unit)
    _KL_CACHE[key] = out
    return out


def kl_residue(eta, p, aprec):
    """Residue of L_p(., trivial) at [0]: 1 - 1/p.

    Reported in the coordinate s = 1 - t vanishing at the pole with
    d/ds = -d/dt, i.e. lim (-t) L_p([t]) as [t] -> [0] along (p-1)p^m.
    """
    if eta.conductor() != 1:
        raise DomainError("L_p(., eta) has no pole for nontrivial eta")
    return PAdic.from_rational(Fraction(p - 1, p), p, aprec)
