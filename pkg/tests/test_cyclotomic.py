import random
from fractions import Fraction

import pytest

from padicsiegel.cyclotomic import CycNumber, cyclotomic_poly
from padicsiegel.errors import DomainError
from padicsiegel.padic import teichmuller


def test_cyclotomic_polynomials():
    assert cyclotomic_poly(1) == (-1, 1)
    assert cyclotomic_poly(4) == (1, 0, 1)
    assert cyclotomic_poly(12) == (1, 0, -1, 0, 1)
    assert cyclotomic_poly(9) == (1, 0, 0, 1, 0, 0, 1)


def test_root_power_is_one():
    for m in (3, 4, 5, 8, 12):
        z = CycNumber.zeta_power(m, 1)
        assert (z ** m) == CycNumber.from_rational(1)
        assert not (z ** (m - 1)).is_rational() or m <= 2


def test_ring_laws_random():
    rng = random.Random(5)
    m = 12
    for _ in range(30):
        a = CycNumber(m, [Fraction(rng.randint(-3, 3)) for _ in range(4)])
        b = CycNumber(m, [Fraction(rng.randint(-3, 3)) for _ in range(4)])
        c = CycNumber(m, [Fraction(rng.randint(-3, 3)) for _ in range(4)])
        assert a * b == b * a
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c


def test_complex_embedding_multiplicative():
    rng = random.Random(6)
    for _ in range(10):
        a = CycNumber(8, [Fraction(rng.randint(-2, 2)) for _ in range(4)])
        b = CycNumber(8, [Fraction(rng.randint(-2, 2)) for _ in range(4)])
        lhs = (a * b).complex_value()
        rhs = a.complex_value() * b.complex_value()
        assert abs(lhs - rhs) < 1e-9


def test_mixed_order_promotion():
    z3 = CycNumber.zeta_power(3, 1)
    z4 = CycNumber.zeta_power(4, 1)
    prod = z3 * z4
    assert prod.order == 12
    assert prod == CycNumber.zeta_power(12, 4 + 3)


def test_descend_and_min_order():
    z12 = CycNumber.zeta_power(12, 1)
    v = z12 ** 4
    assert v.min_order() == 3
    assert v.descend(3) == CycNumber.zeta_power(3, 1)
    with pytest.raises(DomainError):
        z12.descend(3)


def test_inverse():
    z5 = CycNumber.zeta_power(5, 2)
    x = 1 + z5 - z5 ** 3
    assert (x * x.inverse()).to_rational() == 1
    with pytest.raises(DomainError):
        CycNumber.from_rational(0).inverse()


def test_padic_embedding_consistency():
    # zeta_4 -> the 4th root teich(g)^((p-1)/4) and squares to -1
    v = CycNumber.zeta_power(4, 1).padic(5, 6)
    assert (v * v).eq_mod(-1, 6)
    # embeddings are multiplicative
    a = CycNumber.zeta_power(4, 1) + 2
    b = CycNumber.zeta_power(4, 3) - 1
    assert (a * b).padic(5, 6).eq_mod(a.padic(5, 6) * b.padic(5, 6), 6)
    # order-12 value living in Q(zeta_3) does not embed in Z_5
    with pytest.raises(Exception):
        (CycNumber.zeta_power(12, 4)).padic(5, 6)


def test_serialization_roundtrip():
    x = CycNumber(12, [Fraction(1, 2), Fraction(-3), Fraction(0), Fraction(7, 5)])
    assert CycNumber.from_json(x.to_json()) == x
