"""Small number-theoretic helpers shared across the package.

Everything here is exact integer/rational arithmetic.  Primality, modular
square roots and multiplicative orders are delegated to sympy.
"""

from __future__ import annotations

import functools
import itertools
from fractions import Fraction
from math import gcd, isqrt

import sympy


@functools.lru_cache(maxsize=None)
def is_prime(n: int) -> bool:
    return sympy.isprime(n)


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a/p) for odd prime p, in {-1, 0, 1}."""
    a %= p
    if a == 0:
        return 0
    r = pow(a, (p - 1) // 2, p)
    return 1 if r == 1 else -1


def smallest_qnr(p: int) -> int:
    """Smallest positive quadratic non-residue mod an odd prime p."""
    for n in range(2, p):
        if legendre(n, p) == -1:
            return n
    raise ValueError(f"no non-residue mod {p}")


def valuation(n: int, p: int) -> int:
    """p-adic valuation of a nonzero integer."""
    if n == 0:
        raise ValueError("valuation of zero")
    v = 0
    n = abs(n)
    while n % p == 0:
        n //= p
        v += 1
    return v


def fraction_valuation(x: Fraction, p: int) -> int:
    if x == 0:
        raise ValueError("valuation of zero")
    return valuation(x.numerator, p) - valuation(x.denominator, p)


def _hilbert_odd(a: int, b: int, p: int) -> int:
    """Hilbert symbol (a, b)_p for odd prime p; a, b nonzero integers."""
    alpha = valuation(a, p)
    beta = valuation(b, p)
    u = a // p**alpha
    v = b // p**beta
    eps = (p - 1) // 2
    sign = (-1) ** (alpha * beta * eps)
    return sign * legendre(u, p) ** beta * legendre(v, p) ** alpha


def _hilbert_two(a: int, b: int) -> int:
    alpha = valuation(a, 2)
    beta = valuation(b, 2)
    u = a // 2**alpha
    v = b // 2**beta
    eps_u = (u - 1) // 2
    eps_v = (v - 1) // 2
    omega_u = (u * u - 1) // 8
    omega_v = (v * v - 1) // 8
    e = eps_u * eps_v + alpha * omega_v + beta * omega_u
    return (-1) ** (e % 2)


def hilbert_symbol(a: Fraction, b: Fraction, place) -> int:
    """Hilbert symbol of (a, b) at a finite prime or the string 'inf'."""
    if a == 0 or b == 0:
        raise ValueError("hilbert symbol needs nonzero arguments")
    if place == "inf":
        return -1 if (a < 0 and b < 0) else 1
    p = int(place)
    an = a.numerator * a.denominator
    bn = b.numerator * b.denominator
    if p == 2:
        return _hilbert_two(an, bn)
    return _hilbert_odd(an, bn, p)


def ramified_primes(a: Fraction, b: Fraction) -> set:
    """Finite primes where the quaternion algebra (a, b / Q) ramifies."""
    candidates = {2}
    for x in (a, b):
        for n in (x.numerator, x.denominator):
            for q in sympy.factorint(abs(n)):
                candidates.add(q)
    return {q for q in candidates if hilbert_symbol(a, b, q) == -1}


def sqrt_mod_prime(a: int, p: int):
    """A square root of a mod prime p, or None."""
    return sympy.ntheory.residue_ntheory.sqrt_mod(a, p)


def multiplicative_order_mod(a: int, n: int) -> int:
    return sympy.n_order(a, n)


def crt_pair(r1: int, m1: int, r2: int, m2: int) -> int:
    """x mod m1*m2 with x = r1 mod m1, x = r2 mod m2 (coprime moduli)."""
    g, inv = gcd(m1, m2), pow(m1, -1, m2)
    if g != 1:
        raise ValueError("moduli not coprime")
    return (r1 + m1 * ((r2 - r1) * inv % m2)) % (m1 * m2)


def is_perfect_square(n: int) -> bool:
    if n < 0:
        return False
    r = isqrt(n)
    return r * r == n


def floor_sqrt_fraction(x: Fraction) -> int:
    """floor(sqrt(x)) for a nonnegative rational x."""
    if x < 0:
        raise ValueError("negative argument")
    return isqrt(x.numerator * x.denominator) // x.denominator


def binary_form_min(n_mod: int, root: int, d_coeff: int):
    """Shortest vector of {(a, b) : a = root*b mod n_mod} under a^2 + D*b^2.

    Gauss-reduces the rank-2 lattice spanned by (n_mod, 0) and (root, 1).
    Returns the candidate vectors worth testing for representations of
    n_mod by x^2 + D*y^2.
    """

    def q(v):
        return v[0] * v[0] + d_coeff * v[1] * v[1]

    def dot(u, v):
        return u[0] * v[0] + d_coeff * u[1] * v[1]

    u = (n_mod, 0)
    v = (root % n_mod, 1)
    if q(u) < q(v):
        u, v = v, u
    while True:
        # round(dot/q) with ties toward zero keeps the loop terminating
        num, den = dot(u, v), q(v)
        m = (2 * num + den) // (2 * den) if num >= 0 else -((2 * -num + den) // (2 * den))
        u = (u[0] - m * v[0], u[1] - m * v[1])
        if q(u) >= q(v):
            break
        u, v = v, u
    return [v, u, (u[0] + v[0], u[1] + v[1]), (u[0] - v[0], u[1] - v[1])]


_SMALL_PRIMES = tuple(sympy.primerange(2, 100))


def represent_binary(d_coeff: int, n: int, rng=None) -> tuple | None:
    """Find (x, y) with x^2 + d_coeff*y^2 == n, or None.

    Exact for small n (brute force).  For large n the search is complete
    only when n factors as (smooth part) * P with P prime: the modular
    square roots of -d_coeff are then computable, and each one is reduced
    to a shortest lattice vector; other shapes return None.
    """
    if n < 0:
        return None
    if n <= 10**6:
        y = 0
        while d_coeff * y * y <= n:
            r = n - d_coeff * y * y
            if is_perfect_square(r):
                return (isqrt(r), y)
            y += 1
        return None
    rem = n
    smooth = 1
    for q in _SMALL_PRIMES:
        while rem % q == 0 and smooth <= 10**6:
            rem //= q
            smooth *= q
    if smooth > 10**6 or (rem != 1 and not is_prime(rem)):
        return None
    try:
        roots = sympy.ntheory.residue_ntheory.sqrt_mod(-d_coeff % n, n, all_roots=True)
    except ValueError:
        return None
    if not roots:
        return None
    for root in itertools.islice(roots, 48):
        for (x, y) in binary_form_min(n, int(root), d_coeff):
            if x * x + d_coeff * y * y == n:
                return (abs(x), abs(y))
    return None
