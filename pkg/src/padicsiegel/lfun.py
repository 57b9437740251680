"""Satake data, standard-L Euler factors, the modified interpolation
factors E_1 / E / E*, the epsilon factor at p, trivial-zero detection, and
the derivative engine for the trivial zero of the two-variable p-adic
L-function.

The family-side objects are truncated series in (k - k0), k0 = g + 1,
with unit-normalized Satake parameters: beta_i = B_i(k) p^(i - k), each
B_i a unit.  Everything Galois-theoretic enters only through the input
monodromy flag and the identity l = -B_g'(k0).
"""

from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError, PoleError, PrecisionError
from .padic import PAdic
from .series import PSeries

__all__ = ["SatakeData", "SatakeFamily", "DerivativeReport", "euler_Dq",
           "euler_E1", "euler_E", "euler_Estar", "epsilon_factor",
           "detect_steinberg", "e1_family", "gs_derivative",
           "two_var_vanishing_check"]


@dataclass(frozen=True)
class SatakeData:
    """Spectral data of one eigenform: betas at p (indexed so beta_i p^(k-i)
    is a unit), the U_p eigenvalue, bad-prime Satake parameters, and the
    input monodromy flag of the Steinberg condition."""

    g: int
    p: int
    k: int
    betas: tuple          # PAdic, sorted so v(beta_i) = i - k
    alpha_p: PAdic
    bad: dict = None      # q -> list of alpha_(q,i)
    monodromy_nonzero: bool = False

    @classmethod
    def build(cls, g, p, k, betas, alpha_p, bad=None,
              monodromy_nonzero=False):
        if len(betas) != g:
            raise DomainError(f"need {g} Satake parameters")
        betas = tuple(sorted(betas, key=lambda b: b.val))
        for i, b in enumerate(betas, start=1):
            if b.is_zero() or b.val != i - k:
                raise DomainError(
                    f"beta_{i} p^(k-{i}) is not a unit (val {b.val})")
        if not alpha_p.is_unit():
            raise DomainError("alpha_p must be a unit (ordinarity)")
        lhs = betas[0]
        for b in betas[1:]:
            lhs = lhs * b
        rhs = alpha_p ** 2 * PAdic.from_rational(
            Fraction(p) ** (g * (g + 1) // 2 - g * k), p, alpha_p.aprec)
        if not lhs.eq_mod(rhs, min(lhs.aprec, rhs.aprec)):
            raise DomainError(
                "prod beta_i != p^(g(g+1)/2 - gk) alpha_p^2 at this precision")
        return cls(g, p, k, betas, alpha_p, bad or {}, monodromy_nonzero)


def _inv_or_zero(x):
    if isinstance(x, PAdic):
        return x.inverse() if not x.is_zero() else x
    return 0 if x == 0 else Fraction(1, 1) / Fraction(x)


def euler_Dq(q, data, chi_value, s):
    """Local standard-L Euler polynomial at T = chi(q) q^(-s):
    (1 - phi(q)T) prod (1 - phi(q) a^(-1) T)(1 - phi(q) a T) for good q,
    prod (1 - a T) for bad q.  phi(q) is taken as 1 (trivial Nebentypus
    fixtures) unless supplied inside data.bad as ("phi", value)."""
    one = PAdic.one(data.p, data.alpha_p.aprec) \
        if isinstance(chi_value, PAdic) else Fraction(1)
    if not isinstance(chi_value, PAdic) and chi_value == 0:
        return one
    if isinstance(chi_value, PAdic) and chi_value.is_zero():
        return one
    tval = chi_value * Fraction(1, q**s) if s >= 0 \
        else chi_value * Fraction(q ** (-s))
    bad = data.bad or {}
    if q in bad:
        out = one
        for a in bad[q]:
            out = out * (one - a * tval)
        return out
    out = one - tval
    for b in data.betas:
        out = out * (one - _inv_or_zero(b) * tval) * (one - b * tval)
    return out


def euler_E1(data, char_value, t):
    """E_1 = prod_i (1 - (chi eps omega^(-t))(p) beta_i^(-1) p^(-t)).

    char_value is the combined character's value at p: 0 for ramified
    characters (then E_1 = 1), a unit otherwise."""
    p = data.p
    aprec = data.alpha_p.aprec
    one = PAdic.one(p, aprec)
    if isinstance(char_value, PAdic) and char_value.is_zero():
        return one
    if not isinstance(char_value, PAdic):
        if char_value == 0:
            return one
        char_value = PAdic.from_rational(char_value, p, aprec)
    pt = PAdic.from_rational(Fraction(1, p**t) if t >= 0
                             else Fraction(p ** (-t)), p, aprec)
    out = one
    for b in data.betas:
        out = out * (one - char_value * b.inverse() * pt)
    return out


def euler_E(data, char_value, t):
    """E = E_1 * prod_i 1/(1 - (chi eps omega^(-t))^(-1)(p) beta_i p^(t-1));
    a vanishing denominator factor raises a pole error naming its index."""
    p = data.p
    aprec = data.alpha_p.aprec
    one = PAdic.one(p, aprec)
    out = euler_E1(data, char_value, t)
    inv_value = _inv_or_zero(char_value if isinstance(char_value, PAdic)
                             else PAdic.from_rational(char_value, p, aprec))
    if isinstance(inv_value, PAdic) and inv_value.is_zero():
        return out
    pt = PAdic.from_rational(Fraction(p) ** (t - 1), p, aprec)
    for i, b in enumerate(data.betas, start=1):
        den = one - inv_value * b * pt
        if den.is_zero():
            raise PoleError(f"denominator factor i={i} of E vanishes")
        out = out * den.inverse()
    return out


def euler_Estar(data):
    """E* = prod_(i=2..g) (1 - beta_i^(-1) p^(-1)) / prod_i (1 - beta_i p)."""
    p = data.p
    aprec = data.alpha_p.aprec
    one = PAdic.one(p, aprec)
    num = one
    pinv = PAdic.from_rational(Fraction(1, p), p, aprec)
    pp = PAdic.from_rational(p, p, aprec)
    for b in data.betas[1:]:
        num = num * (one - b.inverse() * pinv)
    den = one
    for i, b in enumerate(data.betas, start=1):
        f = one - b * pp
        if f.is_zero():
            raise PoleError(f"denominator factor i={i} of E* vanishes "
                            "(beta_i p = 1)")
        den = den * f
    return num * den.inverse()


def epsilon_factor(n, t, k, g, alpha_p, gauss_eps):
    """p^(ng(1-t)) / (G(eps omega^(-t))^g (p^(g(g+1)/2 - gk) alpha_p^2)^n),
    the epsilon factor of the ordinary Weil-Deligne submodule."""
    if not alpha_p.is_unit():
        raise DomainError("alpha_p must be a unit")
    p = alpha_p.p
    aprec = alpha_p.aprec
    num = PAdic.from_rational(Fraction(p) ** (n * g * (1 - t)), p, aprec)
    den = gauss_eps ** g * (
        PAdic.from_rational(Fraction(p) ** (g * (g + 1) // 2 - g * k),
                            p, aprec) * alpha_p ** 2) ** n
    return num * den.inverse()


def detect_steinberg(data):
    """True iff some beta_i = p^(-1) exactly at working precision (the
    monodromy half of the definition is the input flag, not computed)."""
    p = data.p
    for b in data.betas:
        if b.val != -1:
            continue
        d = b * PAdic.from_rational(p, p, b.aprec) - 1
        if d.is_zero():
            return True
        if d.val >= d.aprec - 1:
            raise PrecisionError(
                "beta_i p = 1 holds one digit below working precision: "
                "Steinberg detection is indeterminate")
    return False


@dataclass(frozen=True)
class SatakeFamily:
    """Unit-normalized Satake parameters as series B_i(k) around k0 = g+1."""

    g: int
    p: int
    series: tuple      # PSeries for B_1..B_g, unit constant terms
    order: int
    aprec: int

    @property
    def k0(self):
        return self.g + 1

    @classmethod
    def build(cls, g, p, series, order, aprec):
        if len(series) != g:
            raise DomainError(f"need {g} unit series")
        for i, s in enumerate(series, start=1):
            c = s.constant_term()
            if c.is_zero() or c.val != 0:
                raise DomainError(f"B_{i}(k0) must be a unit")
        return cls(g, p, tuple(series), order, aprec)

    def to_json(self):
        return {"g": self.g, "p": self.p, "k0": self.k0,
                "series": [s.to_json() for s in self.series],
                "order": self.order}

    @classmethod
    def from_json(cls, d):
        series = [PSeries.from_json(s) for s in d["series"]]
        aprec = min(c.aprec for s in series for c in s.coeffs)
        return cls.build(d["g"], d["p"], series, d["order"], aprec)


def e1_family(fam):
    """E_1(f_x, 1, k - g) = prod_i (1 - B_i(k)^(-1) p^(g-i)) as a series
    in (k - k0)."""
    p = fam.p
    out = PSeries.constant(1, p, fam.order, fam.aprec)
    for i, s in enumerate(fam.series, start=1):
        factor = PSeries.constant(1, p, fam.order, fam.aprec) - (
            s.inverse() * PSeries.constant(
                Fraction(p) ** (fam.g - i), p, fam.order, fam.aprec))
        out = out * factor
    return out


@dataclass(frozen=True)
class DerivativeReport:
    l_invariant: PAdic
    e_star_cofactor: PAdic
    l_star_value: PAdic
    derivative: PAdic          # d/ds L_p at (k, s) = (g+1, 0)
    fd_residual_val: int       # valuation of (finite difference - formal)

    def to_json(self):
        return {"l_invariant": self.l_invariant.to_json(),
                "e_star_cofactor": self.e_star_cofactor.to_json(),
                "l_star_value": self.l_star_value.to_json(),
                "derivative": self.derivative.to_json(),
                "fd_residual_val": self.fd_residual_val}


def gs_derivative(fam, lstar):
    """Greenberg-Stevens step: d/ds L_p(g+1, 0) = -d/dk [E_1 L*](k0) with
    l = -B_g'(k0); requires the trivial-zero configuration B_g(k0) = 1.

    The formal derivative is cross-checked by a finite difference at step
    h = p^(floor(N/2)) and the closed form l * cofactor * L*(k0)."""
    p = fam.p
    bg = fam.series[-1]
    dee = bg.constant_term() - 1
    if not dee.is_zero():
        raise DomainError("B_g(k0) != 1: not a trivial-zero configuration")
    if lstar.order < 2 or fam.order < 2:
        raise PrecisionError("series order must be >= 2 for the derivative")
    e1 = e1_family(fam)
    prod = e1 * lstar
    dk = prod.derivative().constant_term()
    dds = -dk
    ell = -bg.derivative().constant_term()
    one = PAdic.one(p, fam.aprec)
    cof = one
    for i, s in enumerate(fam.series[:-1], start=1):
        cof = cof * (one - s.constant_term().inverse()
                     * PAdic.from_rational(Fraction(p) ** (fam.g - i),
                                           p, fam.aprec))
    lstar0 = lstar.constant_term()
    closed = ell * cof * lstar0
    m = min(dds.aprec, closed.aprec)
    if not dds.eq_mod(closed, m):
        raise PrecisionError("derivative does not match the closed form "
                             "l * cofactor * L*(k0) at series precision")
    # finite-difference oracle
    half = fam.aprec // 2
    h = PAdic.from_rational(Fraction(p) ** half, p, fam.aprec + half)
    fd = (prod.evaluate(h) - prod.constant_term()) * h.inverse()
    resid = fd - dk
    resid_val = resid.aprec if resid.is_zero() else resid.val
    if resid_val < half:
        raise PrecisionError("finite-difference check failed: residual "
                             f"valuation {resid_val} < {half}")
    return DerivativeReport(ell, cof, lstar0, dds, resid_val)


def two_var_vanishing_check(sampler, g, samples, prec):
    """True iff every sample on the line s = k - g - 1 vanishes mod
    p^prec; sampler(k, s) returns a PAdic."""
    for k, s in samples:
        if s != k - g - 1:
            continue
        v = sampler(k, s)
        if not v.eq_mod(PAdic.zero(v.p, prec), prec):
            return False
    return True
