"""Rational quaternion algebras ramified at {p, infinity}, explicit maximal
orders, and enumeration of order elements with prescribed norm and trace.

All coordinates are exact Fractions.  Maximality of an order is certified
by det(gram) == p^2 together with ring closure, never assumed from tables.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt, lcm

from .arith import is_prime, legendre, ramified_primes, represent_binary
from .linalg import (
    integer_kernel_of_vector,
    lattice_hnf,
    ldl,
    mat_det,
    mat_inverse,
    mat_vec,
    solve,
)

_ZERO = Fraction(0)
_ONE = Fraction(1)


class SearchExhausted(Exception):
    """Raised when a witness search hits its configured bound."""


@dataclass(frozen=True)
class QuaternionAlgebra:
    """Q<i, j> with i^2 = a, j^2 = b, ij = -ji = k; definite (a, b < 0)."""

    a: Fraction
    b: Fraction

    def __post_init__(self):
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "b", Fraction(self.b))
        if self.a >= 0 or self.b >= 0:
            raise ValueError("algebra must be definite: a < 0 and b < 0")

    def ramified_finite_primes(self) -> set:
        return ramified_primes(self.a, self.b)

    def element(self, w, x=0, y=0, z=0) -> "QuaternionElement":
        return QuaternionElement(self, (Fraction(w), Fraction(x), Fraction(y), Fraction(z)))

    def one(self) -> "QuaternionElement":
        return self.element(1)

    def basis_ijk(self):
        return (
            self.element(1, 0, 0, 0),
            self.element(0, 1, 0, 0),
            self.element(0, 0, 1, 0),
            self.element(0, 0, 0, 1),
        )


@dataclass(frozen=True)
class QuaternionElement:
    algebra: QuaternionAlgebra
    coords: tuple

    def _check(self, other):
        if self.algebra != other.algebra:
            raise ValueError("elements of different algebras")

    def __add__(self, other):
        self._check(other)
        return QuaternionElement(
            self.algebra, tuple(s + o for s, o in zip(self.coords, other.coords))
        )

    def __sub__(self, other):
        self._check(other)
        return QuaternionElement(
            self.algebra, tuple(s - o for s, o in zip(self.coords, other.coords))
        )

    def __neg__(self):
        return QuaternionElement(self.algebra, tuple(-c for c in self.coords))

    def scale(self, s) -> "QuaternionElement":
        s = Fraction(s)
        return QuaternionElement(self.algebra, tuple(c * s for c in self.coords))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        self._check(other)
        a, b = self.algebra.a, self.algebra.b
        w1, x1, y1, z1 = self.coords
        w2, x2, y2, z2 = other.coords
        return QuaternionElement(
            self.algebra,
            (
                w1 * w2 + a * x1 * x2 + b * y1 * y2 - a * b * z1 * z2,
                w1 * x2 + x1 * w2 - b * y1 * z2 + b * z1 * y2,
                w1 * y2 + y1 * w2 + a * x1 * z2 - a * z1 * x2,
                w1 * z2 + z1 * w2 + x1 * y2 - y1 * x2,
            ),
        )

    __rmul__ = __mul__

    def conjugate(self) -> "QuaternionElement":
        w, x, y, z = self.coords
        return QuaternionElement(self.algebra, (w, -x, -y, -z))

    def reduced_norm(self) -> Fraction:
        a, b = self.algebra.a, self.algebra.b
        w, x, y, z = self.coords
        return w * w - a * x * x - b * y * y + a * b * z * z

    def reduced_trace(self) -> Fraction:
        return 2 * self.coords[0]

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def inverse(self) -> "QuaternionElement":
        n = self.reduced_norm()
        if n == 0:
            raise ZeroDivisionError("zero quaternion")
        return self.conjugate().scale(1 / n)


def reduced_norm_trace(x: QuaternionElement) -> tuple[Fraction, Fraction]:
    return x.reduced_norm(), x.reduced_trace()


def conjugate(x: QuaternionElement) -> QuaternionElement:
    return x.conjugate()


class MaximalOrder:
    """A maximal order given by a 4x4 exact-rational basis matrix.

    Rows are basis elements in (1, i, j, k) coordinates.  Construction
    verifies that the lattice is a ring containing 1 and that
    det(gram) == p^2 (maximality certificate for D ramified at {p, inf}).
    """

    def __init__(self, algebra: QuaternionAlgebra, basis_rows, p: int):
        self.algebra = algebra
        self.p = p
        self.basis = lattice_hnf([[Fraction(x) for x in row] for row in basis_rows])
        if len(self.basis) != 4:
            raise ValueError("order basis must have rank 4")
        self._basis_inv = mat_inverse(self.basis)
        self.basis_elements = tuple(
            QuaternionElement(algebra, tuple(row)) for row in self.basis
        )
        self.gram = [
            [
                (e_r * e_s.conjugate()).reduced_trace()
                for e_s in self.basis_elements
            ]
            for e_r in self.basis_elements
        ]
        self._verify()

    def _verify(self):
        if not self.contains(self.algebra.one()):
            raise ValueError("order does not contain 1")
        for e_r in self.basis_elements:
            for e_s in self.basis_elements:
                if not self.contains(e_r * e_s):
                    raise ValueError("order basis not closed under multiplication")
        d = mat_det(self.gram)
        if d != self.p * self.p:
            raise ValueError(f"det(gram) = {d}, expected {self.p**2}: order not maximal")
        ram = self.algebra.ramified_finite_primes()
        if ram != {self.p}:
            raise ValueError(f"algebra ramified at {ram}, expected {{{self.p}}}")

    def coordinates(self, x: QuaternionElement):
        """Coordinates of x with respect to the order basis."""
        return mat_vec(mat_inverse_transposed_cache(self), list(x.coords))

    def contains(self, x: QuaternionElement) -> bool:
        return all(c.denominator == 1 for c in self.coordinates(x))

    def from_coordinates(self, coords) -> QuaternionElement:
        acc = self.algebra.element(0)
        for c, e in zip(coords, self.basis_elements):
            acc = acc + e.scale(c)
        return acc

    def trace_vector(self):
        return [e.reduced_trace() for e in self.basis_elements]

    def norm_form_matrix(self):
        """A with N(sum x_r e_r) = x^T A x; A = gram / 2."""
        return [[g / 2 for g in row] for row in self.gram]


def mat_inverse_transposed_cache(order: MaximalOrder):
    # coordinates(x) solves basis^T * c = x; cache the inverse transpose
    if not hasattr(order, "_coord_matrix"):
        order._coord_matrix = mat_inverse(
            [[order.basis[r][c] for r in range(4)] for c in range(4)]
        )
    return order._coord_matrix


def _choose_invariants(p: int) -> tuple[int, int]:
    """(a, b) for the definite algebra ramified exactly at {p, inf}."""
    if p == 2:
        return (-1, -1)
    if p % 4 == 3:
        return (-1, -p)
    q = 3
    while True:
        if is_prime(q) and q % 4 == 3 and legendre(q, p) == -1:
            break
        q += 4
    return (-q, -p)


def _saturate(algebra: QuaternionAlgebra, basis_rows, p: int):
    """Grow the lattice at primes dividing the index until det(gram) = p^2.

    Candidates are single-element extensions (sum c_i e_i)/r; each is
    accepted only if integral and the enlarged lattice is still a ring.
    """
    basis = lattice_hnf([[Fraction(x) for x in row] for row in basis_rows])

    def gram_det(rows):
        els = [QuaternionElement(algebra, tuple(r)) for r in rows]
        g = [[(u * v.conjugate()).reduced_trace() for v in els] for u in els]
        return mat_det(g)

    def is_ring(rows):
        els = [QuaternionElement(algebra, tuple(r)) for r in rows]
        minv = mat_inverse([[rows[r][c] for r in range(4)] for c in range(4)])
        for u in els:
            for v in els:
                coords = mat_vec(minv, list((u * v).coords))
                if any(c.denominator != 1 for c in coords):
                    return False
        return True

    target = Fraction(p * p)
    while True:
        d = gram_det(basis)
        if d == target:
            return basis
        index_sq = d / target
        assert index_sq.denominator == 1
        primes = sorted(set(_prime_factors(int(index_sq))))
        improved = False
        for r in primes:
            els = [QuaternionElement(algebra, tuple(row)) for row in basis]
            for combo in _nonzero_tuples(r):
                cand = algebra.element(0)
                for c, e in zip(combo, els):
                    cand = cand + e.scale(Fraction(c, r))
                tr, nm = cand.reduced_trace(), cand.reduced_norm()
                if tr.denominator != 1 or nm.denominator != 1:
                    continue
                new_rows = basis + [list(cand.coords)]
                new_basis = lattice_hnf(new_rows)
                if len(new_basis) != 4:
                    continue
                new_d = gram_det(new_basis)
                if new_d >= d:
                    continue
                if is_ring(new_basis):
                    basis = new_basis
                    improved = True
                    break
            if improved:
                break
        if not improved:
            raise ValueError(f"saturation stuck at det(gram) = {d} for p = {p}")


def _prime_factors(n: int):
    out = []
    d = 2
    while d * d <= n:
        while n % d == 0:
            out.append(d)
            n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _nonzero_tuples(r: int):
    for c0 in range(r):
        for c1 in range(r):
            for c2 in range(r):
                for c3 in range(r):
                    if c0 or c1 or c2 or c3:
                        yield (c0, c1, c2, c3)


def algebra_and_order(p: int) -> tuple[QuaternionAlgebra, MaximalOrder]:
    """The fixed algebra ramified at {p, inf} with a verified maximal order."""
    if not is_prime(p):
        raise ValueError(f"p must be prime, got {p}")
    a, b = _choose_invariants(p)
    algebra = QuaternionAlgebra(Fraction(a), Fraction(b))
    half = Fraction(1, 2)
    if p == 2:
        rows = [
            [1, 0, 0, 0],
            [0, 1, 0, 0],
            [0, 0, 1, 0],
            [half, half, half, half],  # omega = (1 + i + j + k)/2
        ]
        return algebra, MaximalOrder(algebra, rows, p)
    if p % 4 == 3:
        rows = [
            [1, 0, 0, 0],
            [0, 1, 0, 0],
            [half, 0, half, 0],  # (1 + j)/2
            [0, half, 0, half],  # (i + k)/2
        ]
        return algebra, MaximalOrder(algebra, rows, p)
    rows = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]
    basis = _saturate(algebra, rows, p)
    return algebra, MaximalOrder(algebra, basis, p)


# -- lattice point enumeration ------------------------------------------


def _ellipsoid_points(a_mat, center, value):
    """Integer points x with (x - center)^T A (x - center) == value, A
    positive definite rational.  Exhaustive; exact arithmetic throughout."""
    n = len(a_mat)
    d, l = ldl(a_mat)
    results = []

    # Q(y) = sum_i d[i] * (y_i + sum_{j>i} l[i][j] y_j)^2 with y = x - center
    def rec(idx, rem, chosen):
        if rem < 0:
            return
        # chosen holds x_j for j > idx
        shift = center[idx] - sum(
            l[idx][j] * (chosen[j - idx - 1] - center[j]) for j in range(idx + 1, n)
        )
        bound = rem / d[idx]  # (x_idx - shift)^2 <= bound
        if idx == 0:
            # innermost variable: solve (x - shift)^2 == bound exactly
            s_num, s_den = bound.numerator, bound.denominator
            r = isqrt(s_num * s_den)
            if r * r != s_num * s_den:
                return
            root = Fraction(r, s_den)
            for x in {shift + root, shift - root}:
                if x.denominator == 1:
                    results.append([int(x)] + list(chosen))
            return
        s = isqrt(bound.numerator * bound.denominator) // bound.denominator
        base = shift.numerator // shift.denominator
        lo, hi = base - s - 2, base + s + 2
        while lo <= hi and d[idx] * (Fraction(lo) - shift) ** 2 > rem:
            lo += 1
        while hi >= lo and d[idx] * (Fraction(hi) - shift) ** 2 > rem:
            hi -= 1
        for x in range(lo, hi + 1):
            used = d[idx] * (Fraction(x) - shift) ** 2
            rec(idx - 1, rem - used, [x] + list(chosen))

    rec(n - 1, Fraction(value), [])
    return sorted(results)


def _trace_slice(order: MaximalOrder, n: int, t: int):
    """Restrict the norm form to the affine sublattice Tr(y) == t.

    Returns (x0, b_rows, a_prime, center, value) such that the solutions
    are exactly y = x0 + z^T B with z in Z^3 and
    (z - center)^T A' (z - center) == value, or None when the slice is
    empty for parity or positivity reasons.
    """
    a_mat = order.norm_form_matrix()
    tau = order.trace_vector()
    tau_int = [int(x) for x in tau]
    if any(Fraction(x) != y for x, y in zip(tau_int, tau)):
        raise AssertionError("trace vector of an order basis must be integral")
    g, x_part, kernel = integer_kernel_of_vector(tau_int)
    if t % g != 0:
        return None
    scale = t // g
    x0 = [Fraction(scale * v) for v in x_part]
    b_rows = [[Fraction(v) for v in row] for row in kernel]  # 3 rows of Z^4
    # y = x0 + z^T B ;  N = (x0 + B^T z)^T A (x0 + B^T z)
    bt = [[b_rows[r][c] for r in range(3)] for c in range(4)]  # 4x3
    a_b = [[sum(a_mat[i][j] * bt[j][c] for j in range(4)) for c in range(3)] for i in range(4)]
    a_prime = [[sum(bt[i][r] * a_b[i][c] for i in range(4)) for c in range(3)] for r in range(3)]
    lin = [sum(x0[i] * a_b[i][c] for i in range(4)) for c in range(3)]
    const = sum(x0[i] * sum(a_mat[i][j] * x0[j] for j in range(4)) for i in range(4))
    # (z + s)^T A' (z + s) = n - const + s^T A' s  with  A' s = lin
    s_vec = solve(a_prime, lin)
    sts = sum(s_vec[r] * sum(a_prime[r][c] * s_vec[c] for c in range(3)) for r in range(3))
    value = Fraction(n) - const + sts
    if value < 0:
        return None
    center = [-s for s in s_vec]
    return x0, b_rows, a_prime, center, value


def enumerate_norm_trace(order: MaximalOrder, n: int, t=None):
    """All order elements y with N(y) == n (and Tr(y) == t when given).

    Exhaustive via recursive bound propagation on the exact Gram matrix;
    results are sorted by order-basis coordinates for determinism.
    """
    if n < 1:
        raise ValueError("norm target must be >= 1")
    a_mat = order.norm_form_matrix()
    if t is None:
        coords_list = _ellipsoid_points(a_mat, [Fraction(0)] * 4, Fraction(n))
        return [order.from_coordinates(c) for c in coords_list]
    slice_data = _trace_slice(order, n, t)
    if slice_data is None:
        return []
    x0, b_rows, a_prime, center, value = slice_data
    zs = _ellipsoid_points(a_prime, center, value)
    out = []
    for z in zs:
        coords = [x0[i] + sum(Fraction(z[r]) * b_rows[r][i] for r in range(3)) for i in range(4)]
        out.append(coords)
    out.sort()
    return [order.from_coordinates(c) for c in out]


def is_in_order_localized(order: MaximalOrder, x: QuaternionElement, ell: int):
    """(True, k) with k minimal such that ell^k * x lies in the order, or
    (False, None) when no power of ell clears the denominators."""
    if ell < 2:
        raise ValueError("ell must be >= 2")
    coords = order.coordinates(x)
    k = 0
    for c in coords:
        den = c.denominator
        if den == 1:
            continue
        v = 0
        while den % ell == 0:
            den //= ell
            v += 1
        if den != 1:
            return (False, None)
        k = max(k, v)
    return (True, k)


# -- representation search for large norm/trace targets ------------------


def find_norm_trace_element(order: MaximalOrder, n: int, t: int, rng=None, attempts=4000):
    """One order element with N == n and Tr == t, or None.

    Small targets are solved by exhaustive enumeration (deterministic,
    first in sorted coordinate order).  Large targets are searched on the
    trace slice directly: the slice lattice makes trace and order
    membership automatic, one slice coordinate is randomized, and the
    remaining rank-2 inhomogeneous problem is cleared of denominators and
    solved by lattice reduction (Cornacchia pattern).  Cycling through
    the three choices of fixed coordinate varies the binary form and the
    target residues, so no single class-group obstruction can pin the
    search.  Every candidate is checked exactly before being returned.
    """
    if n <= 50_000:
        found = enumerate_norm_trace(order, n, t)
        for y in found:
            return y
        return None
    if rng is None:
        rng = random.Random(f"norm-trace:{order.p}:{n}:{t}")
    slice_data = _trace_slice(order, n, t)
    if slice_data is None:
        return None
    x0, b_rows, a_prime, center, value = slice_data
    perms = ((0, 1, 2), (1, 2, 0), (2, 0, 1))
    prepared = []
    for perm in perms:
        ap = [[a_prime[perm[r]][perm[c]] for c in range(3)] for r in range(3)]
        ct = [center[perm[r]] for r in range(3)]
        d, low = ldl(ap)
        prepared.append((perm, ct, d, low))
    for trial in range(attempts):
        perm, ct, d, low = prepared[trial % 3]
        # fix the outermost slice coordinate z2 at random in its exact range
        bound = value / d[2]
        span = isqrt(bound.numerator * bound.denominator) // bound.denominator
        base2 = ct[2].numerator // ct[2].denominator
        z2 = base2 + rng.randrange(-span - 1, span + 2)
        w2 = Fraction(z2) - ct[2]
        rest = value - d[2] * w2 * w2
        if rest < 0:
            continue
        # inner problem: d0*X^2 + d1*Y^2 == rest with
        # X = z0 + l01*z1 + gamma,  Y = z1 + beta,  z0, z1 in Z
        beta = low[1][2] * w2 - ct[1]
        gamma = -ct[0] - low[0][1] * ct[1] + low[0][2] * w2
        den_y = beta.denominator
        den_x = lcm(low[0][1].denominator, gamma.denominator, den_y)
        mult = lcm(
            (d[0] / den_x**2).denominator, (d[1] / den_y**2).denominator, rest.denominator
        )
        a_co = int(d[0] * mult / den_x**2)
        b_co = int(d[1] * mult / den_y**2)
        c_co = int(rest * mult)
        # a*Xh^2 + b*Yh^2 = c  with Xh = den_x*X, Yh = den_y*Y integers;
        # multiply by a to reach u^2 + a*b*Yh^2 = a*c with u = a*Xh
        sol = represent_binary(a_co * b_co, a_co * c_co, rng)
        if sol is None or sol[0] % a_co != 0:
            continue
        xh, yh = sol[0] // a_co, sol[1]
        for sx in (1, -1):
            for sy in (1, -1):
                z1 = Fraction(sy * yh, den_y) - beta
                if z1.denominator != 1:
                    continue
                z0 = Fraction(sx * xh, den_x) - low[0][1] * z1 - gamma
                if z0.denominator != 1:
                    continue
                z = [None] * 3
                z[perm[0]], z[perm[1]], z[perm[2]] = int(z0), int(z1), z2
                coords = [
                    x0[i] + sum(Fraction(z[r]) * b_rows[r][i] for r in range(3))
                    for i in range(4)
                ]
                y = order.from_coordinates(coords)
                if y.reduced_trace() == t and y.reduced_norm() == n and order.contains(y):
                    return y
    return None
