"""Quaternion algebras, maximal orders, and norm/trace element searches."""

import random
from fractions import Fraction

import pytest

from isodensity.arith import hilbert_symbol, ramified_primes, represent_binary
from isodensity.linalg import mat_det
from isodensity.quatalg import (
    algebra_and_order,
    enumerate_norm_trace,
    find_norm_trace_element,
    is_in_order_localized,
)

PRIMES = [2, 3, 5, 7, 13]


@pytest.mark.parametrize("p", PRIMES)
def test_ramified_exactly_at_p_and_infinity(p):
    algebra, _ = algebra_and_order(p)
    assert ramified_primes(algebra.a, algebra.b) == {p}
    assert hilbert_symbol(algebra.a, algebra.b, "inf") == -1


@pytest.mark.parametrize("p", PRIMES)
def test_order_discriminant(p):
    _, order = algebra_and_order(p)
    assert mat_det(order.gram) == p * p


@pytest.mark.parametrize("p", PRIMES)
def test_order_closed_under_multiplication(p):
    _, order = algebra_and_order(p)
    rng = random.Random(f"ring:{p}")
    basis = order.basis_elements
    for _ in range(20):
        x = sum(
            (b.scale(Fraction(rng.randrange(-3, 4))) for b in basis),
            order.algebra.element(0),
        )
        y = sum(
            (b.scale(Fraction(rng.randrange(-3, 4))) for b in basis),
            order.algebra.element(0),
        )
        assert order.contains(x * y)
        assert order.contains(x + y)


def test_hurwitz_unit_and_norm3_counts():
    _, order = algebra_and_order(2)
    assert len(enumerate_norm_trace(order, 1)) == 24
    assert len(enumerate_norm_trace(order, 3)) == 96


def _naive_box_scan(order, n, t=None):
    """Independent oracle: scan integer coordinates in the exact box that
    the positive-definite norm form allows."""
    from isodensity.linalg import mat_inverse

    a_mat = order.norm_form_matrix()
    inv = mat_inverse(a_mat)
    bounds = []
    for i in range(4):
        # c_i^2 <= n * (A^-1)_{ii}
        b2 = Fraction(n) * inv[i][i]
        top = 0
        while Fraction((top + 1) * (top + 1)) <= b2:
            top += 1
        bounds.append(top)
    found = []
    for c0 in range(-bounds[0], bounds[0] + 1):
        for c1 in range(-bounds[1], bounds[1] + 1):
            for c2 in range(-bounds[2], bounds[2] + 1):
                for c3 in range(-bounds[3], bounds[3] + 1):
                    y = order.from_coordinates(
                        [Fraction(c0), Fraction(c1), Fraction(c2), Fraction(c3)]
                    )
                    if y.reduced_norm() != n:
                        continue
                    if t is not None and y.reduced_trace() != t:
                        continue
                    found.append(tuple(order.coordinates(y)))
    return sorted(found)


@pytest.mark.parametrize("p", PRIMES)
def test_enumerate_matches_naive_box_scan(p):
    _, order = algebra_and_order(p)
    for n in range(1, 11):
        mine = sorted(tuple(order.coordinates(y)) for y in enumerate_norm_trace(order, n))
        assert mine == _naive_box_scan(order, n)
    # and with a trace constraint
    for n, t in [(1, 0), (4, 2), (9, -3), (7, 1)]:
        mine = sorted(
            tuple(order.coordinates(y)) for y in enumerate_norm_trace(order, n, t)
        )
        assert mine == _naive_box_scan(order, n, t)


@pytest.mark.parametrize("p", PRIMES)
def test_norm_trace_search_small(p):
    _, order = algebra_and_order(p)
    y = find_norm_trace_element(order, 4, 2)
    if y is not None:
        assert y.reduced_norm() == 4 and y.reduced_trace() == 2


@pytest.mark.parametrize(
    "p,ell,k,t",
    [
        (5, 2, 18, -3),
        (5, 7, 29, -17),
        (13, 2, 78, -15),
        (13, 3, 80, -41),
        (7, 3, 40, -23),
    ],
)
def test_norm_trace_search_large(p, ell, k, t):
    """Large targets that defeat any single-binary-form reduction; the
    trace-slice search must land exact solutions."""
    _, order = algebra_and_order(p)
    n = ell ** (2 * k)
    y = find_norm_trace_element(order, n, t)
    assert y is not None
    assert y.reduced_norm() == n
    assert y.reduced_trace() == t
    assert order.contains(y)


def test_represent_binary_exact_small():
    assert represent_binary(1, 25) in {(3, 4), (4, 3), (5, 0), (0, 5)}
    assert represent_binary(3, 7) == (2, 1)
    assert represent_binary(7, 3) is None


def test_represent_binary_large():
    # 2^89 - 1 is not representable shapes aside, use a known-friendly one:
    n = 5**41 + 4  # even?  no: odd; just check consistency of any output
    sol = represent_binary(1, n)
    if sol is not None:
        x, y = sol
        assert x * x + y * y == n


@pytest.mark.parametrize("p", PRIMES)
def test_is_in_order_localized(p):
    _, order = algebra_and_order(p)
    y = order.basis_elements[0]
    ok, k = is_in_order_localized(order, y, 3)
    assert ok and k == 0
    half = y.scale(Fraction(1, 3))
    ok, k = is_in_order_localized(order, half, 3)
    assert ok and k <= 1
    bad = y.scale(Fraction(1, 5))
    ok, _ = is_in_order_localized(order, bad, 3)
    assert not ok or order.contains(bad)
