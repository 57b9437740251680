import pytest
from fractions import Fraction

from padicsiegel.errors import DomainError, PrecisionError
from padicsiegel.padic import PAdic, angle, exponent_l, padic_log, teichmuller


def test_rational_embedding_and_arithmetic():
    x = PAdic.from_rational(Fraction(7, 3), 5, 8)
    # b * embed(a/b) = a mod p^N
    assert (x * 3).eq_mod(7, 8)
    y = PAdic.from_rational(Fraction(-2, 9), 5, 8)
    assert (x + y).eq_mod(PAdic.from_rational(Fraction(7, 3) - Fraction(2, 9), 5, 8), 8)
    assert (x * y).eq_mod(PAdic.from_rational(Fraction(-14, 27), 5, 8), 8)
    assert ((x / y) * y).eq_mod(x, 8)


def test_negative_valuation():
    z = PAdic.from_rational(Fraction(3, 25), 5, 8)
    assert z.val == -2
    assert (z * 25).eq_mod(3, 8)
    with pytest.raises(DomainError):
        z.residue()


def test_precision_tracking():
    a = PAdic(5, 4, 0, 2)
    b = PAdic(5, 8, 0, 2)
    assert (a + b).aprec == 4
    assert (a * b).rel == 4
    # division adjusts the absolute window by the valuation
    c = PAdic(5, 6, 2, 3)  # 3*25 known mod 5^6
    assert c.inverse().val == -2


def test_p2_rejected():
    with pytest.raises(DomainError):
        PAdic.from_rational(1, 2, 4)


def test_teichmuller_examples():
    # identity case
    assert teichmuller(1, 5, 8).eq_mod(1, 8)
    # (-1)^2 = 1 and -1 = 2 mod 3
    assert teichmuller(2, 3, 8).eq_mod(-1, 8)
    # Hensel-lift oracle: iterate x <- x^5 until stable mod 5^4
    x = 2
    for _ in range(10):
        x = pow(x, 5, 5**4)
    w = teichmuller(2, 5, 4)
    assert w.residue() == x
    assert (w ** 4).eq_mod(1, 4) and w.residue() % 5 == 2
    with pytest.raises(DomainError):
        teichmuller(10, 5, 4)


def test_teichmuller_times_angle():
    for z in (2, 3, 7, 11):
        w = teichmuller(z, 5, 8) * angle(z, 5, 8)
        assert w.eq_mod(z, 8)


def test_angle_examples():
    assert angle(6, 5, 8).eq_mod(6, 8)           # 1+p is its own angle
    assert angle(2, 3, 8).eq_mod(-2, 8)          # omega(2) = -1 mod 3^8
    assert angle(1, 7, 6).eq_mod(1, 6)


def test_exponent_l_examples():
    assert exponent_l(1, 5, 6).is_zero()
    assert exponent_l(6, 5, 6).eq_mod(1, 5)
    assert exponent_l(pow(6, 2, 5**9), 5, 6).eq_mod(2, 5)


def test_exponent_l_additivity_and_exp_check():
    p, n = 5, 6
    for z, w in ((2, 3), (7, 11), (4, 9)):
        lz = exponent_l(z, p, n)
        lw = exponent_l(w, p, n)
        lzw = exponent_l(z * w % p**(n + 2), p, n)
        assert lzw.eq_mod(lz + lw, n - 1)
    # u^(l_z) = <z>, verified by binary exponentiation on the residue
    for z in (2, 3, 12):
        lz = exponent_l(z, p, n)
        power = pow(1 + p, lz.residue(), p**n)
        assert angle(z, p, n).eq_mod(power, n - 1)


def test_log_multiplicative():
    lu = padic_log(PAdic.from_rational(6, 5, 8))
    l3 = padic_log(PAdic.from_rational(pow(6, 3, 5**8), 5, 8))
    assert l3.eq_mod(lu * 3, 7)
    with pytest.raises(DomainError):
        padic_log(PAdic.from_rational(2, 5, 8))


def test_eq_mod_guard():
    a = PAdic(5, 3, 3, 0)  # O(5^3)
    with pytest.raises(PrecisionError):
        a.eq_mod(PAdic.zero(5, 10), 8)


def test_serialization_roundtrip():
    for x in (PAdic.from_rational(Fraction(7, 3), 5, 8),
              PAdic.from_rational(Fraction(2, 25), 5, 6),
              PAdic.zero(5, 4)):
        y = PAdic.from_json(x.to_json())
        assert y.p == x.p and y.aprec == x.aprec and y.val == x.val \
            and y.unit == x.unit
