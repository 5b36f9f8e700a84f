"""Local structure of a maximal order at p: the ring W<S> with S^2 = p and
S*a = sigma(a)*S, an explicit splitting of the order into it at finite
precision, and the Teichmuller digit calculus t_i / s_i on its units.

The splitting is constructed, not assumed: a Teichmuller generator u of W
is produced inside the order by iterating x -> x^(p^2), a square root
gamma of the quadratic-extension modulus is lifted next to it, and the
twisted part is generated by S = s0*w where s0 = u*y - y*u for a basis
element y and w solves a norm equation making S^2 = p exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .arith import valuation
from .fields import FqElement, fq_modulus
from .quatalg import MaximalOrder, QuaternionElement
from .witt import WittElement, ZpElement, zp_digits


@dataclass(frozen=True)
class StabilizerElement:
    """a + b*S with a, b in W(F_{p^2}) at a common precision.

    Multiplication uses S^2 = p and S*a = sigma(a)*S:
    (a1 + b1 S)(a2 + b2 S) = (a1 a2 + p b1 sigma(b2)) + (a1 b2 + b1 sigma(a2)) S.
    """

    a: WittElement
    b: WittElement

    def __post_init__(self):
        if (self.a.p, self.a.precision) != (self.b.p, self.b.precision):
            raise ValueError("a and b must share prime and precision")

    @property
    def p(self) -> int:
        return self.a.p

    @property
    def precision(self) -> int:
        return self.a.precision

    @staticmethod
    def one(p: int, precision: int) -> "StabilizerElement":
        return StabilizerElement(
            WittElement.one(p, precision), WittElement.zero(p, precision)
        )

    @staticmethod
    def zero(p: int, precision: int) -> "StabilizerElement":
        z = WittElement.zero(p, precision)
        return StabilizerElement(z, z)

    def __add__(self, other):
        return StabilizerElement(self.a + other.a, self.b + other.b)

    def __sub__(self, other):
        return StabilizerElement(self.a - other.a, self.b - other.b)

    def __neg__(self):
        return StabilizerElement(-self.a, -self.b)

    def __mul__(self, other):
        if isinstance(other, WittElement):
            other = StabilizerElement(other, WittElement.zero(other.p, other.precision))
        a1, b1, a2, b2 = self.a, self.b, other.a, other.b
        return StabilizerElement(
            a1 * a2 + (b1 * b2.frobenius()) * self.p,
            a1 * b2 + b1 * a2.frobenius(),
        )

    def scale(self, c: WittElement) -> "StabilizerElement":
        """Left multiplication by a central (Z_p) scalar."""
        if c.c1 != 0:
            raise ValueError("scalars must lie in Z_p (central)")
        return StabilizerElement(self.a * c, self.b * c)

    def truncate(self, precision: int) -> "StabilizerElement":
        return StabilizerElement(self.a.truncate(precision), self.b.truncate(precision))

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = StabilizerElement.one(self.p, self.precision)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def is_unit(self) -> bool:
        return self.a.is_unit()

    def conjugate(self) -> "StabilizerElement":
        return StabilizerElement(self.a.frobenius(), -self.b)

    def norm(self) -> ZpElement:
        """Reduced norm N(a) - p*N(b), an element of Z_p."""
        n = self.a.norm().value - self.p * self.b.norm().value
        return ZpElement(self.p, self.precision, n)

    def trace(self) -> ZpElement:
        return self.a.trace()

    def inverse(self) -> "StabilizerElement":
        if not self.is_unit():
            raise ZeroDivisionError("non-unit stabilizer element")
        n_inv = pow(self.norm().value, -1, self.p**self.precision)
        conj = self.conjugate()
        scalar = WittElement.from_integer(self.p, self.precision, n_inv)
        return StabilizerElement(conj.a * scalar, conj.b * scalar)


@dataclass(frozen=True)
class DigitVector:
    """Coordinates t_1 ... t_{2N-1} of a unit x = a + b*S with tau_0(a) = 1:
    t_{2k} is the k-th Teichmuller digit of a, t_{2k+1} the k-th digit of b."""

    p: int
    entries: tuple

    def t(self, i: int) -> FqElement:
        if not 1 <= i <= len(self.entries):
            raise IndexError(f"digit t_{i} out of range (have 1..{len(self.entries)})")
        return self.entries[i - 1]


@dataclass(frozen=True)
class FrattiniImage:
    """Image in the Frattini quotient: t_1 for odd p, (t_1, t_3 + t_1 t_2)
    for p = 2."""

    p: int
    components: tuple


@dataclass(frozen=True)
class MembershipFlags:
    in_S0: bool
    norm_one: bool
    in_Sl0: bool
    in_tilde_S2: bool | None


def digits(x: StabilizerElement) -> DigitVector:
    """Digit vector of eq-style coordinates; requires tau_0(a) = 1."""
    a_digits = x.a.digits()
    b_digits = x.b.digits()
    one = FqElement(x.p, 1, 0)
    if a_digits[0] != one:
        raise ValueError("digits are defined only for elements with a == 1 mod p")
    entries = []
    for i in range(1, 2 * x.precision):
        if i % 2 == 1:
            entries.append(b_digits[i // 2])
        else:
            entries.append(a_digits[i // 2])
    return DigitVector(x.p, tuple(entries))


def norm_digits(x: StabilizerElement) -> tuple:
    """Digits s_1, ..., s_{N-1} of N(x) = 1 + p s_1 + p^2 s_2 + ...; requires
    tau_0(a) = 1 (which forces the leading norm digit to be 1)."""
    one = FqElement(x.p, 1, 0)
    if x.a.digits()[0] != one:
        raise ValueError("norm digits are defined only for elements with a == 1 mod p")
    nd = zp_digits(x.norm())
    if nd[0] != 1:
        raise ArithmeticError("leading norm digit is not 1; inconsistent element")
    return tuple(nd[1:])


def frattini_image(x: StabilizerElement, p: int) -> FrattiniImage:
    """Image of a norm-one unit in the Frattini quotient of the norm-one
    principal unit group: t_1 (odd p), or (t_1, t_3 + t_1*t_2) (p = 2)."""
    if x.p != p:
        raise ValueError("prime mismatch")
    if any(s != 0 for s in norm_digits(x)):
        raise ValueError("element is not norm-one to the working precision")
    d = digits(x)
    if p > 2:
        return FrattiniImage(p, (d.t(1),))
    if x.precision < 2:
        raise ValueError("p = 2 needs precision >= 2 for t_3")
    return FrattiniImage(p, (d.t(1), d.t(3) + d.t(1) * d.t(2)))


def membership(x: StabilizerElement, ell: int) -> MembershipFlags:
    """Subgroup flags for a stabilizer element.

    in_S0: a == 1 mod p.  norm_one: N(x) == 1 to the working precision.
    in_Sl0: both.  in_tilde_S2 (p = 2 only): N(x) mod 8 lies in {1, ell mod 8}.
    """
    one = FqElement(x.p, 1, 0)
    in_s0 = x.is_unit() and x.a.digits()[0] == one
    norm_one = x.norm().value == 1
    tilde = None
    if x.p == 2:
        if x.precision < 3:
            raise ValueError("in_tilde_S2 needs precision >= 3")
        tilde = x.norm().value % 8 in {1, ell % 8}
    return MembershipFlags(in_s0, norm_one, in_s0 and norm_one, tilde)


# -- local coordinate ring O (x) Z/p^M ----------------------------------


class _LocalRing:
    """The order tensored with Z/p^M, in order-basis coordinates.

    Structure constants are integers because the order is a ring; all
    products reduce to integer arithmetic mod p^M.
    """

    def __init__(self, order: MaximalOrder, p: int, exponent: int):
        self.order = order
        self.p = p
        self.q = p**exponent
        self.exponent = exponent
        els = order.basis_elements
        table = []
        for e_r in els:
            row = []
            for e_s in els:
                coords = order.coordinates(e_r * e_s)
                assert all(c.denominator == 1 for c in coords)
                row.append(tuple(int(c) for c in coords))
            table.append(row)
        self.table = table
        one_coords = order.coordinates(order.algebra.one())
        assert all(c.denominator == 1 for c in one_coords)
        self.one = tuple(int(c) % self.q for c in one_coords)
        tr = order.trace_vector()
        assert all(t.denominator == 1 for t in tr)
        self.trace_vec = tuple(int(t) for t in tr)

    def reduce(self, v):
        return tuple(int(c) % self.q for c in v)

    def add(self, x, y):
        return tuple((a + b) % self.q for a, b in zip(x, y))

    def sub(self, x, y):
        return tuple((a - b) % self.q for a, b in zip(x, y))

    def scale(self, x, c):
        return tuple(a * c % self.q for a in x)

    def mul(self, x, y):
        out = [0, 0, 0, 0]
        for r in range(4):
            if x[r] == 0:
                continue
            for s in range(4):
                if y[s] == 0:
                    continue
                coeff = x[r] * y[s]
                row = self.table[r][s]
                for t in range(4):
                    out[t] += coeff * row[t]
        return tuple(c % self.q for c in out)

    def pow(self, x, e):
        result = self.one
        base = x
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def trace(self, x) -> int:
        return sum(c * t for c, t in zip(x, self.trace_vec)) % self.q

    def conj(self, x):
        return self.sub(self.scale(self.one, self.trace(x)), x)

    def scalar_of(self, x) -> int:
        """x as lambda * 1; raises if x is not central-scalar."""
        idx = next(i for i in range(4) if self.one[i] % self.p != 0)
        lam = x[idx] * pow(self.one[idx], -1, self.q) % self.q
        if self.scale(self.one, lam) != x:
            raise ArithmeticError("element is not a Z_p scalar")
        return lam

    def norm(self, x) -> int:
        return self.scalar_of(self.mul(x, self.conj(x)))

    def inverse(self, x):
        n = self.norm(x)
        if n % self.p == 0:
            raise ZeroDivisionError("non-unit in local ring")
        return self.scale(self.conj(x), pow(n, -1, self.q))

    def teichmullerize(self, x):
        """Iterate x -> x^(p^2) to the Teichmuller representative."""
        for _ in range(self.exponent + 1):
            x = self.pow(x, self.p * self.p)
        return x


def _solve_mod(columns, rhs, p, q):
    """Solve M*x = rhs mod q where M has the given columns and unit det mod p."""
    n = len(rhs)
    m = [[columns[j][i] % q for j in range(n)] + [rhs[i] % q] for i in range(n)]
    piv_rows = []
    used = set()
    for col in range(n):
        pivot = next(
            (r for r in range(n) if r not in used and m[r][col] % p != 0), None
        )
        if pivot is None:
            raise ArithmeticError("coordinate matrix not invertible mod p")
        used.add(pivot)
        piv_rows.append((col, pivot))
        inv = pow(m[pivot][col], -1, q)
        m[pivot] = [v * inv % q for v in m[pivot]]
        for r in range(n):
            if r != pivot and m[r][col] % q != 0:
                f = m[r][col]
                m[r] = [(m[r][j] - f * m[pivot][j]) % q for j in range(n + 1)]
    out = [0] * n
    for col, row in piv_rows:
        out[col] = m[row][n]
    return out


class Splitting:
    """An isomorphism of the p-completed order with W<S> at finite precision.

    Stores the images of the four order basis elements as StabilizerElements
    and applies to any quaternion whose order-basis coordinates have
    denominator prime to p.
    """

    def __init__(self, p: int, precision: int, order: MaximalOrder, ell: int, images):
        self.p = p
        self.precision = precision
        self.order = order
        self.ell = ell
        self.images = tuple(images)
        self._self_check()

    def apply(self, x: QuaternionElement) -> StabilizerElement:
        coords = self.order.coordinates(x)
        q = self.p**self.precision
        acc = StabilizerElement.zero(self.p, self.precision)
        for c, img in zip(coords, self.images):
            if c.denominator % self.p == 0:
                raise ValueError("coordinate denominator is divisible by p")
            scalar = WittElement.from_fraction(self.p, self.precision, c)
            acc = acc + img.scale(scalar)
        return acc

    def _self_check(self):
        p, n = self.p, self.precision
        one_img = self.apply(self.order.algebra.one())
        if one_img != StabilizerElement.one(p, n):
            raise ArithmeticError("splitting does not send 1 to 1")
        for e_r in self.order.basis_elements:
            for e_s in self.order.basis_elements:
                lhs = self.apply(e_r) * self.apply(e_s)
                rhs = self.apply(e_r * e_s)
                if lhs != rhs:
                    raise ArithmeticError("splitting is not multiplicative")
        for e_r in self.order.basis_elements:
            rational = e_r.reduced_norm()
            local = self.apply(e_r).norm()
            expected = ZpElement(p, n, rational.numerator * pow(rational.denominator, -1, p**n))
            if local.value != expected.value:
                raise ArithmeticError("splitting is not norm-compatible")


def _generator_seed(ring: _LocalRing, order: MaximalOrder, p: int):
    """A small order element whose residue minimal polynomial is an
    irreducible quadratic mod p."""

    def irreducible(tr, nm):
        if nm % p == 0:
            return False
        if p == 2:
            return tr % 2 == 1 and nm % 2 == 1
        disc = (tr * tr - 4 * nm) % p
        return disc != 0 and pow(disc, (p - 1) // 2, p) == p - 1

    candidates = []
    for i in range(4):
        v = [0] * 4
        v[i] = 1
        candidates.append(tuple(v))
    for i in range(4):
        for j in range(i + 1, 4):
            for ci in (1, 2):
                for cj in (1, 2):
                    v = [0] * 4
                    v[i], v[j] = ci, cj
                    candidates.append(tuple(v))
    for v in candidates:
        x = order.from_coordinates([Fraction(c) for c in v])
        tr, nm = x.reduced_trace(), x.reduced_norm()
        if irreducible(int(tr), int(nm)):
            return ring.reduce(v)
    raise ArithmeticError("no quadratic generator among small order elements")


def _gamma_from_u(ring: _LocalRing, u, p: int):
    """Teichmuller element of Z_p[u] matching the fixed F_{p^2} modulus."""
    if p == 2:
        # the modulus is x^2 + x + 1; u already has order 3
        gamma = u
        check = ring.add(ring.add(ring.mul(gamma, gamma), gamma), ring.one)
        if check != (0, 0, 0, 0):
            raise ArithmeticError("order-3 Teichmuller element misses its minimal polynomial")
        return gamma
    _, m0 = fq_modulus(p)
    n_val = (-m0) % p  # gamma^2 = n
    for c0 in range(p):
        for c1 in range(p):
            if c0 == 0 and c1 == 0:
                continue
            cand = ring.add(ring.scale(ring.one, c0), ring.scale(u, c1))
            sq = ring.sub(ring.mul(cand, cand), ring.scale(ring.one, n_val))
            if all(c % p == 0 for c in sq):
                # Newton iteration g <- g - (g^2 - n) / (2g) in Z_p[u]
                gamma = cand
                for _ in range(ring.exponent.bit_length() + 2):
                    err = ring.sub(ring.mul(gamma, gamma), ring.scale(ring.one, n_val))
                    step = ring.mul(err, ring.inverse(ring.scale(gamma, 2)))
                    gamma = ring.sub(gamma, step)
                if ring.sub(ring.mul(gamma, gamma), ring.scale(ring.one, n_val)) != (0, 0, 0, 0):
                    raise ArithmeticError("square root of the modulus failed to lift")
                return gamma
    raise ArithmeticError("no residue square root of the extension modulus")


def _norm_solve_local(ring: _LocalRing, u, target: int):
    """w in Z_p[u] with w*conj(w) == target mod p^M (target a unit)."""
    p, q = ring.p, ring.q
    seed = None
    for c0 in range(p):
        for c1 in range(p):
            cand = ring.add(ring.scale(ring.one, c0), ring.scale(u, c1))
            if ring.norm(cand) % p == target % p and (c0 or c1):
                seed = cand
                break
        if seed is not None:
            break
    if seed is None:
        raise ArithmeticError("local norm equation has no residue solution")
    eps = None
    for c0 in range(p):
        for c1 in range(p):
            cand = ring.add(ring.scale(ring.one, c0), ring.scale(u, c1))
            if ring.trace(cand) % p == 1:
                eps = cand
                break
        if eps is not None:
            break
    w = seed
    for k in range(1, ring.exponent):
        cur = ring.norm(w)
        delta = (target - cur) % q
        if delta % p**k != 0:
            raise ArithmeticError("local norm lift lost precision")
        d = (delta // p**k) * pow(cur, -1, q) % p
        adj = ring.add(ring.one, ring.scale(eps, d * p**k))
        w = ring.mul(w, adj)
    if ring.norm(w) != target % q:
        raise ArithmeticError("local norm solve failed to converge")
    return w


def build_splitting(p: int, ell: int, precision: int) -> Splitting:
    """Construct the splitting of the p-completed maximal order as W<S>.

    Requires precision >= 2 (Hensel steps) and gcd(ell, p) = 1.
    """
    if precision < 2:
        raise ValueError("precision must be >= 2")
    if ell % p == 0:
        raise ValueError("ell must be prime to p")
    from .quatalg import algebra_and_order

    _, order = algebra_and_order(p)
    return split_order(order, ell, precision)


def split_order(order: MaximalOrder, ell: int, precision: int) -> Splitting:
    """The splitting construction for an already-built maximal order."""
    p = order.p
    work = precision + 4
    ring = _LocalRing(order, p, work)
    u = ring.teichmullerize(_generator_seed(ring, order, p))
    gamma = _gamma_from_u(ring, u, p)

    # twisted generator: u*y - y*u lands in W*S; pick y with unit b-part
    s0 = None
    for i in range(4):
        y = tuple(1 if j == i else 0 for j in range(4))
        cand = ring.sub(ring.mul(u, y), ring.mul(y, u))
        if cand == (0, 0, 0, 0):
            continue
        lam = ring.scalar_of(ring.mul(cand, cand))
        if lam != 0 and valuation(lam, p) == 1:
            s0 = cand
            break
    if s0 is None:
        raise ArithmeticError("no twisted element of valuation 1 found")

    # s0^2 = p*v with v a unit; S = s0*w with N(w) = 1/v gives S^2 = p
    lam = ring.scalar_of(ring.mul(s0, s0))
    v_unit = lam // p
    inner = _LocalRing(order, p, work - 1)
    target = pow(v_unit % inner.q, -1, inner.q)
    w = _norm_solve_local(inner, inner.reduce(u), target)
    s_elt = inner.mul(inner.reduce(s0), w)
    if inner.mul(s_elt, s_elt) != inner.scale(inner.one, p):
        raise ArithmeticError("normalized S fails S^2 = p")
    gamma_i = inner.reduce(gamma)
    gamma_s = inner.mul(gamma_i, s_elt)

    columns = [inner.one, gamma_i, s_elt, gamma_s]
    images = []
    for r in range(4):
        rhs = [1 if i == r else 0 for i in range(4)]
        a0, a1, b0, b1 = _solve_mod(columns, rhs, p, inner.q)
        images.append(
            StabilizerElement(
                WittElement(p, precision, a0, a1),
                WittElement(p, precision, b0, b1),
            )
        )
    return Splitting(p, precision, order, ell, images)
