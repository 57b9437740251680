"""Small exact number-theory helpers (factorization, symbols, discriminants)."""

from functools import lru_cache
from math import gcd, isqrt

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    # deterministic Miller-Rabin for 64-bit-ish inputs
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@lru_cache(maxsize=None)
def factor(n: int):
    """Return sorted list of (prime, exponent) for |n|; factor(1) == []."""
    n = abs(n)
    if n <= 1:
        return []
    out = {}
    for p in (2, 3, 5):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    f = 7
    # 6k +/- 1 wheel: 7, 11, 13, 17, 19, 23, ...
    while f * f <= n:
        if n % f == 0:
            out[f] = out.get(f, 0) + 1
            n //= f
        else:
            f += 4 if f % 6 == 1 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return sorted(out.items())


def divisors(n: int):
    ds = [1]
    for p, e in factor(n):
        ds = [d * p**i for d in ds for i in range(e + 1)]
    return sorted(ds)


def moebius(n: int) -> int:
    fac = factor(n)
    if any(e > 1 for _, e in fac):
        return 0
    return -1 if len(fac) % 2 else 1


def sigma(k: int, n: int) -> int:
    """Divisor power sum sigma_k(n)."""
    return sum(d**k for d in divisors(n))


def euler_phi(n: int) -> int:
    out = 1
    for p, e in factor(n):
        out *= p ** (e - 1) * (p - 1)
    return out


def valuation(n: int, p: int) -> int:
    if n == 0:
        raise ValueError("valuation of 0")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


@lru_cache(maxsize=None)
def primitive_root(q: int) -> int:
    """Least primitive root mod q (q an odd prime power or 2, 4)."""
    if q in (2,):
        return 1
    if q == 4:
        return 3
    fac = factor(q)
    if len(fac) != 1:
        raise ValueError(f"no primitive root mod {q}")
    p, e = fac[0]
    if p == 2:
        raise ValueError("no primitive root mod 2^e for e >= 3")
    phi = (p - 1) * p ** (e - 1)
    qs = [r for r, _ in factor(phi)]
    g = 2
    while True:
        if gcd(g, q) == 1 and all(pow(g, phi // r, q) != 1 for r in qs):
            return g
        g += 1


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a/n), full extension of Jacobi."""
    if n == 0:
        return 1 if a in (1, -1) else 0
    k = 1
    if n < 0:
        n = -n
        if a < 0:
            k = -1
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    if v % 2 == 1:
        if a % 2 == 0:
            return 0
        if a % 8 in (3, 5):
            k = -k
    a %= n
    while a:
        v = 0
        while a % 2 == 0:
            a //= 2
            v += 1
        if v % 2 == 1 and n % 8 in (3, 5):
            k = -k
        if a % 4 == 3 and n % 4 == 3:
            k = -k
        a, n = n % a, a
    return k if n == 1 else 0


def squarefree_decompose(n: int):
    """n = s * g**2 with s squarefree (sign carried by s). n != 0."""
    if n == 0:
        raise ValueError("n must be nonzero")
    s, g = (1 if n > 0 else -1), 1
    for p, e in factor(n):
        g *= p ** (e // 2)
        if e % 2:
            s *= p
    return s, g


def fundamental_discriminant(D: int):
    """Write D = D0 * f**2 with D0 fundamental; requires D = 0, 1 mod 4."""
    if D == 0:
        raise ValueError("D must be nonzero")
    if D % 4 not in (0, 1):
        raise ValueError(f"{D} is not a discriminant")
    s, g = squarefree_decompose(D)
    if s % 4 == 1:
        return s, g
    # here s = 2, 3 mod 4, so 4s is the fundamental part and 2 | g
    return 4 * s, g // 2


def crt(residues, moduli):
    """Chinese remainder for pairwise coprime moduli."""
    x, m = 0, 1
    for r, q in zip(residues, moduli):
        t = ((r - x) * pow(m, -1, q)) % q
        x += m * t
        m *= q
    return x % m
