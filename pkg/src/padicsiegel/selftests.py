"""Acceptance suites: each runner executes one acceptance block and returns
a report dict {suite, passed, cases, failures, seconds, details}.

The pytest acceptance module and the CLI `selftest` command both dispatch
here, so the printed pass/fail lines describe the same computations.
"""

import random
import time
from fractions import Fraction
from math import isqrt

import numpy as np

from .bernoulli import gen_bernoulli, kl_eval
from .characters import (DirichletChar, gauss_sum, matrix_gauss_closed_form,
                         matrix_gauss_sum, teichmuller_char)
from .cyclotomic import CycNumber
from .eisenstein import (EisParams, classical_coeff, congruence_check,
                         family_coeff, gamma_identities_check, measure_eval)
from .errors import PadicSiegelError
from .numutil import euler_phi, factor
from .ordinary import (LinearModel, ordinary_projector, projector_rank,
                       tensor_projector)
from .padic import PAdic
from .quadforms import BlockI, cosets_of_form, d_cosets, enumerate_I, \
    hermite_normal_form, hnf_with_det, _transform_by_inverse
from .series import PSeries
from .siegel import cohen_oracle, siegel_poly_Bq
from .lfun import SatakeFamily, e1_family, gs_derivative, \
    two_var_vanishing_check

SUITES = {}


def _suite(name):
    def deco(fn):
        SUITES[name] = fn
        return fn
    return deco


def _report(name, failures, cases, t0, details=None):
    return {"suite": name, "passed": not failures, "cases": cases,
            "failures": failures[:20], "seconds": round(time.time() - t0, 2),
            "details": details or {}}


def _even_characters(max_conductor, value_order_divides):
    """Primitive even characters of conductor <= bound whose value order
    divides the given bound (so they embed p-adically)."""
    out = [DirichletChar.trivial()]
    for m in range(3, max_conductor + 1):
        seen = set()
        for exps in _char_exponents(m):
            chi = DirichletChar.from_exponents(m, exps)
            if chi.conductor() != m or not chi.is_even():
                continue
            if value_order_divides % chi.order():
                continue
            if chi in seen:
                continue
            seen.add(chi)
            out.append(chi)
    return out


def _char_exponents(m):
    from .characters import _unit_group
    gens_orders = [(q, e, _unit_group(q, e)[1]) for q, e in factor(m)]
    ranges = []
    for q, e, orders in gens_orders:
        ranges.append([q, [range(o) for o in orders]])

    def rec(i, acc):
        if i == len(ranges):
            yield dict(acc)
            return
        q, rs = ranges[i]
        for combo in _product(rs):
            yield from rec(i + 1, acc + [(q, tuple(combo))])
    yield from rec(0, [])


def _product(ranges):
    if not ranges:
        yield ()
        return
    for head in ranges[0]:
        for tail in _product(ranges[1:]):
            yield (head,) + tail


@_suite("kl")
def suite_kl(fast=False):
    """Criteria 1 and 2: Kubota-Leopoldt interpolation against the
    Bernoulli-polynomial oracle, and Kummer congruences on a branch."""
    t0 = time.time()
    failures = []
    cases = 0
    for p in (3, 5, 7):
        for chi in _even_characters(12, p - 1):
            for t in range(1, 7):
                eta = teichmuller_char(p, t) * chi
                got = kl_eval(t, eta, p, 8)
                # independent assembly: exact generalized Bernoulli of the
                # primitive combined character + explicit Euler factor
                psi0 = (teichmuller_char(p, -t) * eta).primitive_part()
                bt = gen_bernoulli(t, psi0)
                lval = bt.padic(p, 12) * Fraction(-1, t)
                chi_p = psi0.eval_padic(p, p, 12)
                expect = (PAdic.one(p, 12)
                          - chi_p * Fraction(p) ** (t - 1)) * lval
                cases += 1
                if not got.eq_mod(expect, 8):
                    failures.append(("kl", p, chi.to_json(), t))
        if fast:
            break
    # Kummer congruences: p = 5, branch eta = omega^(t mod 4), pairs mod 20
    p = 5
    pairs = [(t, t + 20) for t in range(2, 82, 4)]
    for t, t2 in pairs:
        eta = teichmuller_char(p, t % 4)
        a = kl_eval(t, eta, p, 6)
        b = kl_eval(t2, eta, p, 6)
        cases += 1
        if not a.eq_mod(b, 2):
            failures.append(("kummer", t, t2))
    return _report("kl", failures, cases, t0,
                   {"kummer_pairs": len(pairs)})


@_suite("gauss")
def suite_gauss(fast=False):
    """Criterion 3: matrix Gauss sums, closed form vs brute force."""
    t0 = time.time()
    failures = []
    cases = 0
    for c in (3, 5):
        prims = [chi for chi in _all_characters(c) if chi.conductor() == c]
        for chi in prims:
            gs = gauss_sum(chi)
            order = gs.order if not gs.is_rational() else 1
            # g = 1
            for tt in range(-3, 4):
                if tt == 0 or tt % c == 0:
                    continue
                brute = matrix_gauss_sum([[tt]], c, chi)
                closed = matrix_gauss_closed_form([[tt]], chi)
                cases += 1
                if brute != closed:
                    failures.append((1, c, tt))
            # g = 2, vectorized brute force against the closed form
            fails2, n2 = _gauss_g2_battery(c, chi)
            cases += n2
            failures.extend(fails2)
            if fast:
                break
        if fast:
            break
    return _report("gauss", failures, cases, t0)


def _all_characters(m):
    out = []
    seen = set()
    for exps in _char_exponents(m):
        chi = DirichletChar.from_exponents(m, exps)
        if chi not in seen:
            seen.add(chi)
            out.append(chi)
    return out


def _gauss_g2_battery(c, chi):
    """All 2T2 with entries in [-3,3], gcd(det 2T2, c) = 1: brute matrix
    Gauss sum (vectorized counting) == closed form, exact in Q(zeta)."""
    failures = []
    xs = []
    dets = []
    for x in range(c**4):
        a, b, d, e = x % c, x // c % c, x // c**2 % c, x // c**3 % c
        xs.append((a, b, d, e))
        dets.append((a * e - b * d) % c)
    xs = np.array(xs, dtype=np.int64)        # rows are [x11, x12, x21, x22]
    dets = np.array(dets, dtype=np.int64)
    # value exponents of chi(det) in a common order
    val_order = chi.order()
    exp_of = np.full(c, -1, dtype=np.int64)
    for n in range(c):
        ko = chi.value_exponent(n)
        if ko is not None:
            k, o = ko
            exp_of[n] = k * (val_order // o)
    from math import lcm
    order = lcm(val_order, c)
    inv2 = pow(2, -1, c)
    n_cases = 0
    rng = range(-3, 4)
    for t11 in rng:
        for t12 in rng:
            for t21 in rng:
                for t22 in rng:
                    det2 = t11 * t22 - t12 * t21
                    if det2 % c == 0:
                        continue
                    n_cases += 1
                    # tr(2T2 X) = t11 x11 + t21 x12 + t12 x21 + t22 x22
                    tr = (t11 * xs[:, 0] + t21 * xs[:, 1]
                          + t12 * xs[:, 2] + t22 * xs[:, 3]) * inv2 % c
                    mask = exp_of[dets] >= 0
                    combo = (exp_of[dets[mask]] * (order // val_order)
                             + tr[mask] * (order // c)) % order
                    counts = np.bincount(combo, minlength=order)
                    brute = CycNumber(order,
                                      [Fraction(int(x)) for x in counts])
                    closed = matrix_gauss_closed_form(
                        [[t11, t12], [t21, t22]], chi)
                    if brute != closed:
                        failures.append((2, c, (t11, t12, t21, t22)))
    return failures, n_cases


@_suite("cosets")
def suite_cosets(fast=False):
    """Criterion 4: d_cosets vs a bounded search reduced to HNF."""
    t0 = time.time()
    failures = []
    cases = 0
    rng = random.Random(7)
    blocks = []
    for t1 in range(1, 11):
        for t4 in range(t1, 11):
            for tt in range(0, isqrt(4 * t1 * t4) + 1):
                b = BlockI(1, 1, ((t1,),), ((t4,),), ((tt,),))
                det2 = 4 * t1 * t4 - tt * tt
                if 0 < det2 <= 40:
                    blocks.append(b)
    for blk in blocks:
        a = blk.assembled()
        det2 = a.det_twice()
        mine = {c.mat for c in d_cosets(blk)}
        # oracle: HNF candidates for every determinant up to det(2I),
        # membership-tested; this is the bounded search with each candidate
        # already in reduced (HNF) form
        ref = set()
        for d in range(1, det2 + 1):
            for gmat in hnf_with_det(2, d):
                if _transform_by_inverse(a.twice, gmat, d) is not None:
                    ref.add(gmat)
        cases += 1
        if mine != ref:
            failures.append((blk.t1, blk.t4, blk.t2_twice, mine, ref))
        # random-matrix reduction spot check: membership is coset-invariant
        for _ in range(20):
            m = [[rng.randint(-6, 6) for _ in range(2)] for _ in range(2)]
            dd = m[0][0] * m[1][1] - m[0][1] * m[1][0]
            if dd == 0:
                continue
            j = _transform_by_inverse(a.twice, tuple(map(tuple, m)), abs(dd))
            cases += 1
            if j is not None and hermite_normal_form(m) not in mine:
                failures.append(("random", blk.t2_twice, m))
        if fast and len(blocks) > 5:
            break
    return _report("cosets", failures, cases, t0,
                   {"blocks": len(blocks)})


@_suite("bq")
def suite_bq(fast=False):
    """Criterion 5: level-1 classical coefficients == the Cohen-type
    divisor-sum oracle (certifies B_q, quad_char_sigma and L_neg)."""
    t0 = time.time()
    failures = []
    cases = 0
    params = EisParams.trivial(1, 5)
    weights = (4,) if fast else (4, 6)
    for k in weights:
        t = k - 1
        for t4 in range(1, 11):
            got = classical_coeff(1, t4, params, t)
            expect = sum(cohen_oracle(t, 4 * t4 - tt * tt)
                         for tt in range(-isqrt(4 * t4), isqrt(4 * t4) + 1)
                         if 4 * t4 - tt * tt > 0)
            cases += 1
            if got.to_rational() != expect:
                failures.append((k, t4, str(got.to_rational()), str(expect)))
    # per-block certification across every discriminant <= 40
    for blk_t4 in range(1, 11):
        for tt in range(0, isqrt(4 * blk_t4) + 1):
            det2 = 4 * blk_t4 - tt * tt
            if det2 <= 0 or det2 > 40:
                continue
            blk = BlockI(1, 1, ((1,),), ((blk_t4,),), ((tt,),))
            for t in (3, 5):
                got = _bracket_term(blk, t)
                expect = _divisor_part(t, det2)
                cases += 1
                if got != expect:
                    failures.append(("block", blk_t4, tt, t))
    return _report("bq", failures, cases, t0)


def _bracket_term(block, t):
    from .siegel import poly_eval
    acc = Fraction(0)
    for rep in d_cosets(block):
        prod = Fraction(rep.det) ** (2 * t - 1)
        for q, _ in factor(rep.form.det_twice()):
            prod *= poly_eval(siegel_poly_Bq(rep.form, q),
                              Fraction(q) ** (t - 2))
        acc += prod
    return acc


def _divisor_part(t, det2i):
    from .numutil import fundamental_discriminant, kronecker, moebius, \
        divisors, sigma
    d0, f = fundamental_discriminant(-det2i)
    acc = Fraction(0)
    for d in divisors(f):
        mu = moebius(d)
        if mu:
            acc += mu * kronecker(d0, d) * Fraction(d) ** (t - 1) \
                * sigma(2 * t - 1, f // d)
    return acc


def _test_params(p=5):
    return EisParams(1, p, 1, 1, 1, 0, teichmuller_char(p, 1),
                     DirichletChar.trivial(), DirichletChar.trivial(),
                     DirichletChar.trivial())


@_suite("measure")
def suite_measure(fast=False):
    """Criterion 6: measure congruences between congruent weight pairs."""
    t0 = time.time()
    failures = []
    cases = 0
    p = 5
    params = _test_params(p)
    pairs = [((5, 4), (9, 8), 1), ((5, 4), (25, 4), 2), ((5, 4), (5, 24), 2),
             ((7, 2), (27, 22), 2), ((6, 3), (10, 7), 1)]
    if fast:
        pairs = pairs[:2]
    for (k1, t1), (k2, t2), m in pairs:
        for i1 in range(0, 3):
            for i4 in range(0, 4 - i1):
                a = family_coeff(i1, i4, 1, k1, t1, params, m + 2)
                b = family_coeff(i1, i4, 1, k2, t2, params, m + 2)
                cases += 1
                if not a.eq_mod(b, m):
                    failures.append(((k1, t1), (k2, t2), m, i1, i4))
    return _report("measure", failures, cases, t0,
                   {"pairs": len(pairs)})


@_suite("congruences")
def suite_congruences(fast=False):
    """Criterion 7: classical vs family coefficients of the p^j-twisted
    series, mod p^j (s = 0).

    At L = p^j (j >= 1) both sides vanish exactly: the p-depleted series
    lies in the kernel of U_(p^2) (the (1 - V U)-mechanism), so the stated
    congruence holds identically; the runner therefore also matches the
    two pipelines at L = 1 where the shared value is a nonzero unit, which
    is the substantive dual-route comparison."""
    t0 = time.time()
    failures = []
    cases = 0
    p = 5
    pa = _test_params(p)                     # phi = omega, t = 0 mod 4
    pb = EisParams(1, p, 1, 1, 1, 0, teichmuller_char(p, 1),
                   DirichletChar.trivial(), DirichletChar.trivial(),
                   teichmuller_char(p, 2))   # eps1 = omega^2, t = 2 mod 4
    jobs = [(pa, 5, 4, 1, 1, 1), (pa, 5, 4, 1, 1, 2), (pa, 5, 4, 1, 2, 1),
            (pb, 3, 2, 1, 1, 1), (pb, 3, 2, 1, 1, 2),
            (pb, 3, 2, 2, 1, 1)]
    if fast:
        jobs = [j for j in jobs if j[3] == 1][:3]
    strong_all = True
    for params, k, t, j, t1, t4 in jobs:
        ok, wit = congruence_check(k, t, j, t1, t4, params)
        cases += 1
        strong_all = strong_all and wit["agree_at_full_precision"]
        if not ok:
            failures.append((k, t, j, t1, t4, wit))
    # substantive L = 1 comparison: nonzero values through both pipelines
    from .eisenstein import classical_coeff_padic
    nonzero_seen = False
    for params, k, t in ((pa, 5, 4), (pb, 3, 2)):
        twisted = EisParams(1, p, 1, 1, 1, 0, params.phi, params.chi1,
                            params.chi_prime,
                            params.eps_p * teichmuller_char(p, -t))
        for t1, t4 in ((1, 1), (1, 2), (2, 1)):
            fam = family_coeff(t1, t4, 1, k, t, params, 7)
            cla = classical_coeff_padic(t1, t4, twisted, t, 7)
            cases += 1
            if not fam.eq_mod(cla, 6):
                failures.append(("L1", k, t, t1, t4))
            nonzero_seen = nonzero_seen or not fam.is_zero()
    if not nonzero_seen:
        failures.append(("L1", "all comparisons degenerated to zero"))
    return _report("congruences", failures, cases, t0,
                   {"agree_at_full_precision": strong_all})


@_suite("ordinary")
def suite_ordinary(fast=False):
    """Criterion 8: projector laws on random integral models with planted
    spectra."""
    t0 = time.time()
    failures = []
    cases = 0
    p, aprec = 5, 12
    rng = random.Random(20240817)
    n_models = 10 if fast else 50
    for trial in range(n_models):
        d = 6
        units = rng.randint(1, 5)
        eig = []
        for i in range(d):
            if i < units:
                eig.append(rng.choice([1, 2, 3, 4]) + p * rng.randint(0, 3))
            else:
                eig.append(p * rng.randint(1, 4) + p * p * rng.randint(0, 2))
        diag = [[eig[i] if i == j else 0 for j in range(d)] for i in range(d)]
        ul = [[1 if i == j else (rng.randint(-2, 2) if i > j else 0)
               for j in range(d)] for i in range(d)]
        ur = [[1 if i == j else (rng.randint(-2, 2) if i < j else 0)
               for j in range(d)] for i in range(d)]
        u = _mat_mul_int(ul, ur)
        uinv = _mat_mul_int(_unipotent_inverse(ur), _unipotent_inverse(ul))
        m_int = _mat_mul_int(_mat_mul_int(u, diag), uinv)
        model = LinearModel.from_ints(m_int, p, aprec)
        e = ordinary_projector(model, 10)
        cases += 1
        ok = (e.mul(e).eq_mod(e, 10)
              and e.mul(model).eq_mod(model.mul(e), 10)
              and projector_rank(e) == units)
        if not ok:
            failures.append((trial, units, projector_rank(e)))
    # tensor projector sanity
    ident = LinearModel.identity(2, p, aprec)
    tp = tensor_projector(ident, ident)
    cases += 1
    if not tp.eq_mod(LinearModel.identity(4, p, aprec), 10):
        failures.append(("tensor-identity",))
    return _report("ordinary", failures, cases, t0, {"models": n_models})


def _mat_mul_int(a, b):
    n = len(a)
    return [[sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)]
            for i in range(n)]


def _unipotent_inverse(u):
    n = len(u)
    out = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    m = [row[:] for row in u]
    # Gauss-Jordan over Z works for unipotent triangular matrices
    for col in range(n):
        for row in range(n):
            if row != col and m[row][col]:
                f = m[row][col]
                m[row] = [x - f * y for x, y in zip(m[row], m[col])]
                out[row] = [x - f * y for x, y in zip(out[row], out[col])]
    return out


@_suite("gs")
def suite_gs(fast=False):
    """Criterion 9: derivative engine on synthetic Satake families plus the
    two-variable vanishing fixture."""
    t0 = time.time()
    failures = []
    cases = 0
    p, aprec, order = 5, 12, 4
    rng = random.Random(99)
    n_fix = 8 if fast else 25
    for trial in range(n_fix):
        g = rng.choice([1, 2, 3])
        series = []
        for i in range(1, g):
            const = rng.choice([1, 2, 3, 4]) + p * rng.randint(0, 4)
            series.append(PSeries.from_rationals(
                [const, rng.randint(-9, 9)], p, order, aprec))
        cg = rng.randint(1, 20) * rng.choice([1, 2, 3])
        series.append(PSeries.from_rationals(
            [1, cg, rng.randint(-5, 5)], p, order, aprec))
        fam = SatakeFamily.build(g, p, series, order, aprec)
        lstar = PSeries.from_rationals(
            [rng.choice([1, 2, 3, 4, 6, 7]), rng.randint(-9, 9)],
            p, order, aprec)
        rep = gs_derivative(fam, lstar)
        cases += 1
        one = PAdic.one(p, aprec)
        cof = one
        for i, s in enumerate(fam.series[:-1], start=1):
            cof = cof * (one - s.constant_term().inverse()
                         * Fraction(p) ** (fam.g - i))
        closed = rep.l_invariant * cof * lstar.constant_term()
        ok = (rep.l_invariant.eq_mod(PAdic.from_rational(-cg, p, aprec),
                                     aprec - 1)
              and rep.derivative.eq_mod(closed,
                                        min(rep.derivative.aprec,
                                            closed.aprec))
              and rep.fd_residual_val >= aprec // 2)
        if not ok:
            failures.append((trial, g))
        # e1_family constant term == pointwise E_1 at k0, trivial char, t=1
        e1c = e1_family(fam).constant_term()
        from .lfun import SatakeData, euler_E1
        betas = [s.constant_term()
                 * PAdic.from_rational(Fraction(p) ** (i - (g + 1)), p, aprec)
                 for i, s in enumerate(fam.series, start=1)]
        alpha2 = betas[0]
        for b in betas[1:]:
            alpha2 = alpha2 * b
        alpha2 = alpha2 * PAdic.from_rational(
            Fraction(p) ** (g * (g + 1) - g * (g + 1) // 2), p, aprec)
        sq = _sqrt_unit(alpha2, p, aprec)
        cases += 1
        if sq is not None:
            data = SatakeData.build(g, p, g + 1, betas, sq)
            point = euler_E1(data, 1, 1)
            if not e1c.eq_mod(point, aprec - 2):
                failures.append(("e1-consistency", trial))
        # vanishing fixture with the proof's factor (1 - p^(t-1))
    def sampler(k, s):
        tt = k - 1 - s  # g = 1 fixture
        return PAdic.from_rational(
            (Fraction(1) - Fraction(p) ** (tt - 1)) * 7, p, 8)
    cases += 2
    if not two_var_vanishing_check(sampler, 1, [(3, 1), (4, 2), (9, 7)], 6):
        failures.append(("vanishing-line",))
    if two_var_vanishing_check(
            lambda k, s: PAdic.one(p, 8), 1, [(3, 1)], 6):
        failures.append(("vanishing-nonzero-not-detected",))
    return _report("gs", failures, cases, t0, {"fixtures": n_fix})


def _sqrt_unit(x, p, aprec):
    """Square root of a unit by Hensel lifting, or None if x is not a
    square mod p."""
    if not x.is_unit():
        return None
    r = x.unit_residue(1)
    root = next((y for y in range(1, p) if y * y % p == r), None)
    if root is None:
        return None
    q = p**aprec
    y = root
    for _ in range(aprec + 2):
        y = (y + x.unit_residue(aprec) * pow(y, -1, q)) * pow(2, -1, q) % q
    return PAdic(p, aprec, 0, y)


@_suite("gamma")
def suite_gamma(fast=False):
    """Criterion 10: both Gamma identities to 1e-10 for g <= 3."""
    t0 = time.time()
    failures = []
    cases = 0
    for g in (1, 2, 3):
        pts = [1.7 + 0.35 * i for i in range(20)]
        cases += 1
        if not gamma_identities_check(g, pts, tol=1e-10):
            failures.append((g,))
    return _report("gamma", failures, cases, t0)


def run_suite(name, fast=False):
    if name not in SUITES:
        raise KeyError(name)
    return SUITES[name](fast=fast)


def run_all(fast=False):
    return [run_suite(name, fast=fast) for name in SUITES]
