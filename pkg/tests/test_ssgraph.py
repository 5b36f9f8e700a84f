"""Supersingular loci, modular-polynomial tables, and isogeny-graph
connectivity."""

import sympy
import pytest

from isodensity.fields import FqElement, fq, fq_zero
from isodensity.modpoly import coefficients, phi_in_y
from isodensity.ssgraph import (
    field_split,
    hasse_supersingular,
    isogeny_graph,
    mass_formula_count,
    point_count_locus,
    supersingular_j,
    verify_kohel,
)

SMALL_PRIMES = list(sympy.primerange(2, 51))
SWEEP_PRIMES = list(sympy.primerange(2, 201))


def test_known_loci():
    assert {(j.c0, j.c1) for j in supersingular_j(2).j_invariants} == {(0, 0)}
    assert {(j.c0, j.c1) for j in supersingular_j(3).j_invariants} == {(0, 0)}
    assert {(j.c0, j.c1) for j in supersingular_j(11).j_invariants} == {(0, 0), (1, 0)}
    assert {(j.c0, j.c1) for j in supersingular_j(13).j_invariants} == {(5, 0)}


@pytest.mark.parametrize("p", [p for p in SMALL_PRIMES if p >= 5])
def test_locus_matches_point_counting(p):
    """Independent oracle: exhaustive point counting over F_{p^2}."""
    locus = supersingular_j(p)
    assert locus.j_invariants == point_count_locus(p)


@pytest.mark.parametrize("p", SWEEP_PRIMES)
def test_mass_formula(p):
    locus = supersingular_j(p)
    assert len(locus) == mass_formula_count(p)
    in_fp, pairs = field_split(locus)
    assert in_fp + 2 * pairs == len(locus)


@pytest.mark.parametrize("p", [p for p in SMALL_PRIMES if p >= 5])
def test_hasse_criterion_rejects_ordinary(p):
    locus = {(j.c0, j.c1) for j in supersingular_j(p).j_invariants}
    ordinary = [
        FqElement(p, c0, c1)
        for c0 in range(p)
        for c1 in range(2)
        if (c0, c1) not in locus
    ]
    for j in ordinary[:10]:
        assert not hasse_supersingular(p, j)


def test_modpoly_specializations():
    # Phi_2(0, Y) = (Y - 54000)^3 and Phi_3(0, Y) = Y*(Y + 12288000)^3 over Z
    x, y = sympy.symbols("x y")
    for ell, expected in [
        (2, (y - 54000) ** 3),
        (3, y * (y + 12288000) ** 3),
    ]:
        poly = sum(
            c * x**i * y**j for (i, j), c in coefficients(ell).items()
        )
        assert sympy.expand(poly.subs(x, 0) - expected) == 0


def test_modpoly_symmetry():
    for ell in (2, 3):
        table = coefficients(ell)
        assert all(table[(j, i)] == c for (i, j), c in table.items())


@pytest.mark.parametrize("ell", [2, 3])
def test_kronecker_congruence(ell):
    """Phi_ell(X, Y) == (X^ell - Y)(X - Y^ell) mod ell."""
    x, y = sympy.symbols("x y")
    poly = sum(c * x**i * y**j for (i, j), c in coefficients(ell).items())
    target = (x**ell - y) * (x - y**ell)
    assert sympy.Poly(sympy.expand(poly - target), x, y, modulus=ell).is_zero


def test_phi_in_y_evaluation():
    p = 11
    j = fq(p, 0)
    coeffs = phi_in_y(2, j)
    assert len(coeffs) == 4
    # Phi_2(0, Y) = (Y - 54000)^3; root Y = 54000 mod 11 = 10
    root = fq(p, 54000)
    acc = fq_zero(p)
    for c in reversed(coeffs):
        acc = acc * root + c
    assert acc.is_zero()


@pytest.mark.parametrize("p", SWEEP_PRIMES)
@pytest.mark.parametrize("ell", [2, 3])
def test_graph_connectivity_sweep(p, ell):
    if p == ell:
        return
    connected, diameter, parity_mix = verify_kohel(p, ell)
    assert connected
    assert parity_mix
    assert diameter <= max(1, len(supersingular_j(p)))


@pytest.mark.parametrize("p,ell", [(11, 2), (13, 2), (31, 3), (101, 2), (199, 3)])
def test_graph_out_degrees(p, ell):
    graph = isogeny_graph(p, ell)
    for row in graph.edges:
        assert sum(m for _, m in row) == ell + 1


def test_graph_rejects_bad_ell():
    with pytest.raises(ValueError):
        isogeny_graph(11, 5)
    with pytest.raises(ValueError):
        isogeny_graph(3, 3)
