import random
from fractions import Fraction
from math import gcd

import pytest

from padicsiegel.characters import (DirichletChar, gauss_sum,
                                    matrix_gauss_closed_form,
                                    matrix_gauss_sum, quad_char_sigma,
                                    teichmuller_char)
from padicsiegel.cyclotomic import CycNumber
from padicsiegel.errors import DomainError
from padicsiegel.numutil import fundamental_discriminant, kronecker
from padicsiegel.padic import teichmuller


def test_zero_off_units_and_multiplicative():
    chi, _ = quad_char_sigma(-3)
    chi = chi.extend(12)
    for n in range(24):
        if gcd(n, 12) > 1:
            assert chi.eval(n).is_zero()
    units = [n for n in range(1, 12) if gcd(n, 12) == 1]
    for a in units:
        for b in units:
            assert chi.eval(a * b) == chi.eval(a) * chi.eval(b)


def test_decompose_examples():
    # trivial mod 15 with p = 5
    triv15 = DirichletChar.trivial(15)
    c1, cp, e1 = triv15.decompose(3, 1, 5)
    assert (c1.modulus, cp.modulus, e1.modulus) == (3, 1, 5)
    assert c1.order() == cp.order() == e1.order() == 1
    # quadratic mod 3 times quadratic mod 5
    chi = quad_char_sigma(-3)[0] * quad_char_sigma(5)[0]
    c1, cp, e1 = chi.decompose(3, 1, 5)
    assert c1 == quad_char_sigma(-3)[0]
    assert cp.modulus == 1
    assert e1 == quad_char_sigma(5)[0]
    # random character mod 45: product of parts matches on all units
    rng = random.Random(11)
    for _ in range(5):
        chi45 = DirichletChar.from_exponents(
            45, {3: (rng.randrange(6),), 5: (rng.randrange(4),)})
        c1, cp, e1 = chi45.decompose(9, 1, 5)
        prod = c1 * cp * e1
        for n in range(1, 45):
            if gcd(n, 45) == 1:
                assert prod.eval(n) == chi45.eval(n)
    with pytest.raises(DomainError):
        triv15.decompose(3, 5, 5)


def test_gauss_sum_examples():
    assert gauss_sum(DirichletChar.trivial()).to_rational() == 1
    chi3, _ = quad_char_sigma(-3)
    z3 = CycNumber.zeta_power(3, 1)
    assert gauss_sum(chi3) == z3 - z3 ** 2
    chi5, _ = quad_char_sigma(5)
    g5 = gauss_sum(chi5)
    assert (g5 * g5.conj()).to_rational() == 5


def test_gauss_sum_conjugation_invariant():
    # G(chi) G(chibar) = chi(-1) * C for primitive chi
    for mod in (3, 4, 5, 7, 8, 9, 11, 12):
        for chi in _primitive_chars(mod):
            g = gauss_sum(chi)
            gbar = gauss_sum(chi.inverse())
            val = chi.eval(mod - 1) * Fraction(mod)
            assert g * gbar == val


def _primitive_chars(mod):
    from padicsiegel.characters import _unit_group
    from padicsiegel.numutil import factor
    out = []
    ranges = []
    for q, e in factor(mod):
        _, orders = _unit_group(q, e)
        ranges.append((q, orders))

    def rec(i, acc):
        if i == len(ranges):
            chi = DirichletChar.from_exponents(mod, dict(acc))
            if chi.conductor() == mod:
                out.append(chi)
            return
        q, orders = ranges[i]
        for combo in _tuples([range(o) for o in orders]):
            rec(i + 1, acc + [(q, combo)])
    rec(0, [])
    return out


def _tuples(ranges):
    if not ranges:
        yield ()
        return
    for h in ranges[0]:
        for t in _tuples(ranges[1:]):
            yield (h,) + t


def test_matrix_gauss_examples():
    triv = DirichletChar.trivial()
    assert matrix_gauss_sum([[2]], 1, triv).to_rational() == 1
    chi3, _ = quad_char_sigma(-3)
    # T2 = (1), i.e. 2T2 = (2): the scalar Gauss sum
    assert matrix_gauss_sum([[2]], 3, chi3) == gauss_sum(chi3)
    # g = 2, T2 = I2: 3 * chi^{-1}(1) G(chi)^2
    ms = matrix_gauss_sum([[2, 0], [0, 2]], 3, chi3)
    assert ms == CycNumber.from_rational(3) * gauss_sum(chi3) ** 2
    assert matrix_gauss_closed_form([[2, 0], [0, 2]], chi3) == ms


def test_matrix_gauss_closed_form_battery():
    rng = random.Random(3)
    for c in (3, 5):
        chis = [chi for chi in _primitive_chars(c)]
        for chi in chis:
            for _ in range(6):
                t2 = [[rng.randint(-3, 3) for _ in range(2)] for _ in range(2)]
                det2 = t2[0][0] * t2[1][1] - t2[0][1] * t2[1][0]
                if gcd(det2, c) != 1:
                    continue
                assert matrix_gauss_sum(t2, c, chi) == \
                    matrix_gauss_closed_form(t2, chi)


def test_quad_char_sigma_examples():
    chi, f = quad_char_sigma(1)
    assert chi.modulus == 1 and f == 1
    chi4, f4 = quad_char_sigma(-4)
    assert chi4.modulus == 4 and f4 == 1 and chi4.is_odd()
    chi12, f12 = quad_char_sigma(-12)
    assert chi12.modulus == 3 and f12 == 2
    with pytest.raises(DomainError):
        quad_char_sigma(0)


def test_quad_char_euler_criterion():
    for d in (-3, -4, -8, -7, -11, 5, 8, 12, -15, -20, -24, 13):
        chi, _ = quad_char_sigma(d)
        d0, _ = fundamental_discriminant(d)
        for n in (3, 5, 7, 11, 13, 17, 19, 23, 29):
            if (2 * d0) % n == 0:
                continue
            euler = pow(d0 % n, (n - 1) // 2, n)
            expect = 1 if euler == 1 else -1
            assert chi.eval(n).to_rational() == expect == kronecker(d0, n)


def test_omega_consistency_with_teichmuller():
    for p in (5, 7):
        w = teichmuller_char(p)
        for n in (2, 3, p - 1):
            assert w.eval_padic(n, p, 6).eq_mod(teichmuller(n, p, 6), 6)
        assert (w ** (p - 1)).order() == 1


def test_primitive_part_and_conductor():
    chi3, _ = quad_char_sigma(-3)
    ext = chi3.extend(36)
    assert ext.conductor() == 3
    assert ext.primitive_part() == chi3
    assert DirichletChar.trivial(15).conductor() == 1


def test_serialization_roundtrip():
    chi = quad_char_sigma(-24)[0] * teichmuller_char(5, 2)
    again = DirichletChar.from_json(chi.to_json())
    assert again == chi
