"""Supersingular j-invariants over F_{p^2}, their fields of definition,
and connectivity of the ell-isogeny graph for ell in {2, 3}.

The locus is produced from the roots of the classical degree-(p-1)/2
lambda-polynomial sum_k C((p-1)/2, k)^2 lambda^k, mapped through the
j-line; every candidate is then re-verified by the Hasse-invariant
criterion (vanishing x^{p-1} coefficient of the half-power of the cubic)
and the total is checked against the mass-formula count.  For p <= 50 an
exhaustive point-counting oracle is available as an independent check.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

import sympy

from .arith import is_prime, legendre, smallest_qnr, sqrt_mod_prime
from .fields import FqElement, fq, fq_one, fq_zero
from .modpoly import phi_in_y


def mass_formula_count(p: int) -> int:
    """Number of supersingular j-invariants in characteristic p (the
    Eichler mass formula, rounded with the classical p mod 12 corrections)."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if p in (2, 3):
        return 1
    return p // 12 + {1: 0, 5: 1, 7: 1, 11: 2}[p % 12]


def curve_model(p: int, j: FqElement):
    """Deterministic short Weierstrass model (A, B) with invariant j."""
    if j == fq_zero(p):
        return fq(p, 0), fq(p, 1)
    if j == fq(p, 1728):
        return fq(p, 1), fq(p, 0)
    d = fq(p, 1728) - j
    scale = d.inverse()
    return j * 3 * scale, j * 2 * scale


def hasse_supersingular(p: int, j: FqElement) -> bool:
    """Hasse-invariant criterion for p >= 5: the coefficient of x^{p-1} in
    (x^3 + A x + B)^{(p-1)/2} vanishes.  Computed by the multinomial
    expansion; only terms with 3a + b = p - 1 contribute."""
    if p < 5:
        raise ValueError("the Hasse-coefficient shortcut needs p >= 5")
    a_co, b_co = curve_model(p, j)
    m = (p - 1) // 2
    total = fq_zero(p)
    for a in range((m + 1) // 2, 2 * m // 3 + 1):
        b = 2 * m - 3 * a
        c = 2 * a - m
        mult = comb(m, a) * comb(m - a, b) % p
        if mult == 0:
            continue
        total = total + (a_co**b) * (b_co**c) * mult
    return total.is_zero()


@dataclass(frozen=True)
class SupersingularLocus:
    p: int
    j_invariants: tuple
    in_prime_field: tuple

    def __len__(self):
        return len(self.j_invariants)


def _lambda_roots(p: int) -> list:
    """Roots in F_{p^2} of the degree-(p-1)/2 lambda-polynomial; they all
    lie in F_{p^2}, so every irreducible factor mod p has degree <= 2."""
    m = (p - 1) // 2
    coeffs = [comb(m, k) ** 2 % p for k in range(m, -1, -1)]
    x = sympy.symbols("x")
    factors = sympy.Poly(coeffs, x, modulus=p).factor_list()[1]
    n = smallest_qnr(p)
    half = pow(2, -1, p)
    roots = []
    for fac, _mult in factors:
        cs = [int(c) % p for c in fac.all_coeffs()]
        if len(cs) == 2:
            lead_inv = pow(cs[0], -1, p)
            roots.append(fq(p, -cs[1] * lead_inv))
        elif len(cs) == 3:
            lead_inv = pow(cs[0], -1, p)
            u, v = cs[1] * lead_inv % p, cs[2] * lead_inv % p
            disc = (u * u - 4 * v) % p
            if legendre(disc, p) != -1:
                raise AssertionError("reducible quadratic escaped factorization")
            s = sqrt_mod_prime(disc * pow(n, -1, p) % p, p)
            roots.append(FqElement(p, -u * half, s * half))
            roots.append(FqElement(p, -u * half, -s * half))
        else:
            raise AssertionError("lambda-polynomial factor of degree > 2")
    return roots


def supersingular_j(p: int) -> SupersingularLocus:
    """The supersingular locus over F_{p^2}, Hasse-verified and checked
    against the mass formula."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if p in (2, 3):
        if _special_count(p) != p + 1:
            raise AssertionError("special supersingular model has wrong count")
        return SupersingularLocus(p, (fq_zero(p),), (True,))
    one = fq_one(p)
    js = {}
    for lam in _lambda_roots(p):
        num = (lam * lam - lam + one) ** 3 * 256
        den = (lam * lam) * (lam - one) ** 2
        j = num * den.inverse()
        js[(j.c0, j.c1)] = j
    ordered = tuple(js[key] for key in sorted(js))
    for j in ordered:
        if not hasse_supersingular(p, j):
            raise AssertionError(f"candidate j = {j} fails the Hasse criterion")
    if len(ordered) != mass_formula_count(p):
        raise AssertionError("supersingular count disagrees with the mass formula")
    flags = tuple(j.in_prime_field() for j in ordered)
    return SupersingularLocus(p, ordered, flags)


def field_split(locus: SupersingularLocus):
    """(count of j in F_p, count of Galois-conjugate pairs)."""
    in_fp = sum(1 for f in locus.in_prime_field if f)
    others = [j for j, f in zip(locus.j_invariants, locus.in_prime_field) if not f]
    remaining = {(j.c0, j.c1) for j in others}
    pairs = 0
    while remaining:
        c0, c1 = min(remaining)
        conj = FqElement(locus.p, c0, c1).frobenius()
        if (conj.c0, conj.c1) not in remaining:
            raise AssertionError("locus is not Galois-stable")
        remaining.discard((c0, c1))
        remaining.discard((conj.c0, conj.c1))
        pairs += 1
    return in_fp, pairs


# -- point-counting oracle ------------------------------------------------


def _special_count(p: int) -> int:
    """#E(F_p) for the fixed supersingular model in characteristic 2 or 3."""
    count = 1  # point at infinity
    if p == 2:
        for x in range(2):
            for y in range(2):
                if (y * y + y - x**3) % 2 == 0:
                    count += 1
    else:
        for x in range(3):
            for y in range(3):
                if (y * y - (x**3 - x)) % 3 == 0:
                    count += 1
    return count


def point_count_locus(p: int) -> tuple:
    """Supersingular j-invariants found by exhaustive point counting over
    F_{p^2}: j is supersingular iff the Frobenius trace of a model is
    divisible by p.  Exact but O(p^4); intended for p <= 50."""
    if p in (2, 3):
        if _special_count(p) != p + 1:
            raise AssertionError("special supersingular model has wrong count")
        return (fq_zero(p),)
    n = smallest_qnr(p)
    q = p * p

    def mul(a0, a1, b0, b1):
        return (a0 * b0 + n * a1 * b1) % p, (a0 * b1 + a1 * b0) % p

    cubes = []
    squares = set()
    for code in range(q):
        c0, c1 = code % p, code // p
        s0, s1 = mul(c0, c1, c0, c1)
        cubes.append(mul(s0, s1, c0, c1))
        if code:
            squares.add((s0, s1))
    out = []
    for code in range(q):
        j = FqElement(p, code % p, code // p)
        a_co, b_co = curve_model(p, j)
        a0, a1, b0, b1 = a_co.c0, a_co.c1, b_co.c0, b_co.c1
        total = q + 1
        for x_code in range(q):
            x0, x1 = x_code % p, x_code // p
            m0, m1 = mul(a0, a1, x0, x1)
            c3 = cubes[x_code]
            r0, r1 = (c3[0] + m0 + b0) % p, (c3[1] + m1 + b1) % p
            if r0 or r1:
                total += 1 if (r0, r1) in squares else -1
        if total % p == 1:
            out.append(j)
    out.sort(key=lambda j: (j.c0, j.c1))
    return tuple(out)


# -- the ell-isogeny graph ------------------------------------------------


@dataclass(frozen=True)
class IsogenyGraph:
    p: int
    ell: int
    vertices: tuple
    edges: tuple  # edges[i] = tuple of (target_index, multiplicity)


def _synthetic_divide(coeffs: list, root: FqElement):
    """Divide a polynomial (ascending coefficients) by (Y - root); returns
    (quotient, remainder)."""
    desc = list(reversed(coeffs))
    out = [desc[0]]
    for c in desc[1:]:
        out.append(c + out[-1] * root)
    rem = out[-1]
    return list(reversed(out[:-1])), rem


def isogeny_graph(p: int, ell: int) -> IsogenyGraph:
    """Vertices are the supersingular j-invariants; the edge j -> j' has
    multiplicity equal to the root multiplicity of Phi_ell(j, Y) at j'.
    Every vertex must have total out-degree ell + 1."""
    if ell not in (2, 3):
        raise ValueError("only ell in {2, 3} is supported")
    if p == ell:
        raise ValueError("ell must differ from the characteristic")
    locus = supersingular_j(p)
    verts = locus.j_invariants
    edges = []
    for j in verts:
        coeffs = phi_in_y(ell, j)
        row = []
        for idx, j2 in enumerate(verts):
            mult = 0
            work = coeffs
            while True:
                quotient, rem = _synthetic_divide(work, j2)
                if not rem.is_zero():
                    break
                mult += 1
                work = quotient
                if not work:
                    break
            if mult:
                row.append((idx, mult))
        if sum(m for _, m in row) != ell + 1:
            raise AssertionError(
                f"vertex j = {j} has out-degree != {ell + 1}; an isogenous "
                "invariant escaped the supersingular locus"
            )
        edges.append(tuple(row))
    return IsogenyGraph(p, ell, verts, tuple(edges))


def verify_kohel(p: int, ell: int):
    """(connected, diameter, parity_mix) of the ell-isogeny graph.

    connected: every ordered vertex pair is joined by a path, so some
    ell-power isogeny exists between any two curves at the j-level.
    parity_mix: the graph is additionally non-bipartite, so walks of both
    parities exist between every pair and ALL sufficiently large powers
    occur.
    """
    graph = isogeny_graph(p, ell)
    size = len(graph.vertices)
    adj = [[t for t, _ in row] for row in graph.edges]
    # undirected reachability (the edge relation is symmetric as a set)
    diameter = 0
    connected = True
    for start in range(size):
        dist = {start: 0}
        frontier = [start]
        while frontier:
            nxt = []
            for v in frontier:
                for w in adj[v]:
                    if w not in dist:
                        dist[w] = dist[v] + 1
                        nxt.append(w)
            frontier = nxt
        if len(dist) != size:
            connected = False
            break
        diameter = max(diameter, max(dist.values()))
    bipartite = True
    if any(v in adj[v] for v in range(size)):
        bipartite = False
    else:
        color = {0: 0}
        frontier = [0]
        while frontier and bipartite:
            nxt = []
            for v in frontier:
                for w in adj[v]:
                    if w not in color:
                        color[w] = 1 - color[v]
                        nxt.append(w)
                    elif color[w] == color[v]:
                        bipartite = False
            frontier = nxt
    parity_mix = connected and not bipartite
    return connected, diameter, parity_mix
