"""Ring axioms, Frobenius, Teichmuller digits, and Hensel norm solving in
the truncated Witt vectors."""

import random

import pytest

from isodensity.fields import FqElement, all_fq, fq_gen
from isodensity.witt import (
    WittElement,
    ZpElement,
    from_digits,
    hensel_norm_solve,
    teichmuller,
    witt_modulus,
    zp_digits,
)

PRIMES = [2, 3, 5, 7, 13]
PRECISION = 4


def random_elements(p, count, seed):
    rng = random.Random(seed)
    q = p**PRECISION
    return [
        WittElement(p, PRECISION, rng.randrange(q), rng.randrange(q))
        for _ in range(count)
    ]


@pytest.mark.parametrize("p", PRIMES)
def test_ring_axioms(p):
    xs = random_elements(p, 12, f"axioms:{p}")
    zero = WittElement.zero(p, PRECISION)
    one = WittElement.one(p, PRECISION)
    for x in xs:
        assert x + zero == x
        assert x * one == x
        assert x - x == zero
    for x, y, z in zip(xs, xs[1:], xs[2:]):
        assert x + y == y + x
        assert x * y == y * x
        assert (x + y) + z == x + (y + z)
        assert (x * y) * z == x * (y * z)
        assert x * (y + z) == x * y + x * z


@pytest.mark.parametrize("p", PRIMES)
def test_frobenius_involution_and_multiplicativity(p):
    for x in random_elements(p, 10, f"frob:{p}"):
        assert x.frobenius().frobenius() == x
    xs = random_elements(p, 10, f"frobmul:{p}")
    for x, y in zip(xs, xs[1:]):
        assert (x * y).frobenius() == x.frobenius() * y.frobenius()


@pytest.mark.parametrize("p", PRIMES)
def test_norm_multiplicative_and_trace_additive(p):
    xs = random_elements(p, 10, f"norm:{p}")
    q = p**PRECISION
    for x, y in zip(xs, xs[1:]):
        assert (x * y).norm().value == x.norm().value * y.norm().value % q
        assert (x + y).trace().value == (x.trace().value + y.trace().value) % q


@pytest.mark.parametrize("p", PRIMES)
def test_modulus_reduction_consistency(p):
    """The integer modulus defining W must reduce to the F_{p^2} modulus,
    so residue() is a ring homomorphism."""
    m1, m0 = witt_modulus(p)
    g = fq_gen(p)
    assert g * g + g * m1 + FqElement(p, m0, 0) == FqElement(p, 0, 0)
    xs = random_elements(p, 8, f"res:{p}")
    for x, y in zip(xs, xs[1:]):
        assert (x * y).residue() == x.residue() * y.residue()
        assert (x + y).residue() == x.residue() + y.residue()


@pytest.mark.parametrize("p", PRIMES)
def test_teichmuller_digits_roundtrip(p):
    for x in random_elements(p, 6, f"digits:{p}"):
        ds = x.digits()
        assert len(ds) == PRECISION
        assert from_digits(p, list(ds)) == x


@pytest.mark.parametrize("p", PRIMES)
def test_teichmuller_lift_is_fixed_by_power(p):
    for c in list(all_fq(p))[: p * p]:
        tau = teichmuller(c, PRECISION)
        assert tau ** (p * p) == tau
        assert tau.residue() == c


@pytest.mark.parametrize("p", PRIMES)
def test_inverse(p):
    for x in random_elements(p, 10, f"inv:{p}"):
        if x.is_unit():
            assert x * x.inverse() == WittElement.one(p, PRECISION)


@pytest.mark.parametrize("p", PRIMES)
def test_hensel_norm_solve(p):
    rng = random.Random(f"hensel:{p}")
    for _ in range(5):
        t = rng.randrange(1, p**PRECISION)
        if t % p == 0:
            t += 1
        target = ZpElement(p, PRECISION, t)
        w = hensel_norm_solve(target)
        assert w.norm().value == target.value


def test_zp_digits_example():
    # 9 = 1 + 0*2 + 0*4 + 1*8
    assert zp_digits(ZpElement(2, 4, 9)) == (1, 0, 0, 1)


@pytest.mark.parametrize("p", PRIMES)
def test_divide_by_p(p):
    x = WittElement(p, PRECISION, p * 7, p * 3)
    y = x.divide_by_p()
    assert y.precision == PRECISION - 1
    assert y * p == x.truncate(PRECISION - 1)
