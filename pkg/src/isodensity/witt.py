"""Truncated Witt vectors over F_{p^2}.

W = W(F_{p^2}) is realized as Z_p[G]/(G^2 + m1*G + m0) with (m1, m0) the
integer lift of the fixed F_{p^2} modulus; this is the unramified
quadratic extension of Z_p.  Elements are stored as an integer pair
(c0, c1) modulo p^N; Teichmuller digit vectors are extracted on demand
and cached, so ring arithmetic stays in the cheap integer-pair form.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .arith import fraction_valuation, is_prime, smallest_qnr
from .fields import FqElement


def witt_modulus(p: int) -> tuple[int, int]:
    """Integer coefficients (m1, m0) of the modulus x^2 + m1*x + m0 defining
    W as Z_p[G]; its reduction mod p is the fixed F_{p^2} modulus."""
    if p == 2:
        return (1, 1)
    return (0, -smallest_qnr(p))


@dataclass(frozen=True)
class ZpElement:
    """Integer modulo p^precision."""

    p: int
    precision: int
    value: int

    def __post_init__(self):
        object.__setattr__(self, "value", self.value % self.p**self.precision)

    def unit(self) -> bool:
        return self.value % self.p != 0

    def truncate(self, precision: int) -> "ZpElement":
        if precision > self.precision:
            raise ValueError("cannot raise precision")
        return ZpElement(self.p, precision, self.value)


@dataclass(frozen=True)
class WittElement:
    """c0 + c1*G in W(F_{p^2}) modulo p^precision."""

    p: int
    precision: int
    c0: int
    c1: int
    _digits: list = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if self.precision < 1:
            raise ValueError("precision must be >= 1")
        q = self.p**self.precision
        object.__setattr__(self, "c0", self.c0 % q)
        object.__setattr__(self, "c1", self.c1 % q)

    # -- construction ---------------------------------------------------

    @staticmethod
    def from_integer(p: int, precision: int, n: int) -> "WittElement":
        return WittElement(p, precision, n, 0)

    @staticmethod
    def from_fraction(p: int, precision: int, x: Fraction) -> "WittElement":
        x = Fraction(x)
        if x.denominator % p == 0:
            raise ValueError(f"denominator not a p-adic unit: {x}")
        q = p**precision
        return WittElement(p, precision, x.numerator * pow(x.denominator, -1, q), 0)

    @staticmethod
    def zero(p: int, precision: int) -> "WittElement":
        return WittElement(p, precision, 0, 0)

    @staticmethod
    def one(p: int, precision: int) -> "WittElement":
        return WittElement(p, precision, 1, 0)

    @staticmethod
    def gen(p: int, precision: int) -> "WittElement":
        return WittElement(p, precision, 0, 1)

    # -- ring structure -------------------------------------------------

    def _join(self, other: "WittElement") -> int:
        if self.p != other.p:
            raise ValueError("mixed primes in Witt arithmetic")
        return min(self.precision, other.precision)

    def truncate(self, precision: int) -> "WittElement":
        if precision > self.precision:
            raise ValueError("cannot raise precision")
        return WittElement(self.p, precision, self.c0, self.c1)

    def __add__(self, other):
        n = self._join(other)
        return WittElement(self.p, n, self.c0 + other.c0, self.c1 + other.c1)

    def __sub__(self, other):
        n = self._join(other)
        return WittElement(self.p, n, self.c0 - other.c0, self.c1 - other.c1)

    def __neg__(self):
        return WittElement(self.p, self.precision, -self.c0, -self.c1)

    def __mul__(self, other):
        if isinstance(other, int):
            return WittElement(self.p, self.precision, self.c0 * other, self.c1 * other)
        n = self._join(other)
        m1, m0 = witt_modulus(self.p)
        hi = self.c1 * other.c1
        return WittElement(
            self.p,
            n,
            self.c0 * other.c0 - hi * m0,
            self.c0 * other.c1 + self.c1 * other.c0 - hi * m1,
        )

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = WittElement.one(self.p, self.precision)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def is_zero(self) -> bool:
        return self.c0 == 0 and self.c1 == 0

    def is_unit(self) -> bool:
        return self.c0 % self.p != 0 or self.c1 % self.p != 0

    def residue(self) -> FqElement:
        return FqElement(self.p, self.c0, self.c1)

    def frobenius(self) -> "WittElement":
        """The lift of Frobenius: G maps to the conjugate root -m1 - G."""
        m1, _ = witt_modulus(self.p)
        return WittElement(self.p, self.precision, self.c0 - self.c1 * m1, -self.c1)

    def norm(self) -> ZpElement:
        """N(x) = x * sigma(x) in Z_p."""
        prod = self * self.frobenius()
        if prod.c1 != 0:
            raise ArithmeticError("norm left the prime-field line; normalization bug")
        return ZpElement(self.p, prod.precision, prod.c0)

    def trace(self) -> ZpElement:
        s = self + self.frobenius()
        if s.c1 != 0:
            raise ArithmeticError("trace left the prime-field line; normalization bug")
        return ZpElement(self.p, s.precision, s.c0)

    def inverse(self) -> "WittElement":
        if not self.is_unit():
            raise ZeroDivisionError("not a unit in W (residue digit is zero)")
        q = self.p**self.precision
        n_inv = pow(self.norm().value, -1, q)
        return self.frobenius() * n_inv

    def divide_by_p(self) -> "WittElement":
        """Exact division by p; drops one digit of precision."""
        if self.c0 % self.p or self.c1 % self.p:
            raise ValueError("element not divisible by p")
        if self.precision < 2:
            raise ValueError("no precision left after division")
        return WittElement(self.p, self.precision - 1, self.c0 // self.p, self.c1 // self.p)

    # -- Teichmuller structure ------------------------------------------

    def teichmuller_digit(self) -> "WittElement":
        """tau_0: the Teichmuller representative of the residue of x."""
        x = self
        for _ in range(self.precision):
            x = x ** (self.p * self.p)
        return x

    def digits(self) -> tuple[FqElement, ...]:
        """Teichmuller digit vector (tau_0, ..., tau_{N-1})."""
        if self._digits is not None:
            return tuple(self._digits)
        out = []
        x = self
        for k in range(self.precision):
            tau = x.teichmuller_digit()
            out.append(tau.residue())
            if k + 1 < self.precision:
                x = (x - tau).divide_by_p()
        object.__setattr__(self, "_digits", out)
        return tuple(out)


def teichmuller(c: FqElement, precision: int) -> WittElement:
    """Teichmuller lift of c in F_{p^2}: the digit vector (c, 0, ..., 0)."""
    raw = WittElement(c.p, precision, c.c0, c.c1)
    return raw.teichmuller_digit()


def from_digits(p: int, digits: list[FqElement]) -> WittElement:
    """Reassemble sum tau_k p^k from residue digits."""
    precision = len(digits)
    acc = WittElement.zero(p, precision)
    for k, d in enumerate(digits):
        acc = acc + teichmuller(d, precision) * (p**k)
    return acc


def zp_digits(x: ZpElement) -> tuple[int, ...]:
    """Teichmuller digits of a Z_p element (values in [0, p), p odd means
    representatives of the (p-1)st roots of unity plus zero, reported by
    their residue)."""
    w = WittElement.from_integer(x.p, x.precision, x.value)
    return tuple(d.c0 for d in w.digits())


def hensel_norm_solve(target: ZpElement) -> WittElement:
    """Find w in W with w * sigma(w) == target (a unit of Z_p), exactly to
    the target's precision.  Deterministic: smallest residue seed, smallest
    trace adjustment at each lift step."""
    p, n = target.p, target.precision
    if not target.unit():
        raise ValueError("norm equation is only solvable for units")
    # residue seed: c with c^(p+1) == target mod p
    t0 = target.value % p
    seed = None
    for c0 in range(p):
        for c1 in range(p):
            c = FqElement(p, c0, c1)
            if not c.is_zero() and c.norm() == t0:
                seed = c
                break
        if seed is not None:
            break
    if seed is None:
        raise ArithmeticError("residue norm equation unsolvable; impossible for units")
    w = WittElement(p, n, seed.c0, seed.c1)
    # find an epsilon in W with Tr(epsilon) == 1 mod p
    eps = None
    for c0 in range(p):
        for c1 in range(p):
            cand = FqElement(p, c0, c1)
            if cand.trace() % p == 1:
                eps = WittElement(p, n, c0, c1)
                break
        if eps is not None:
            break
    q = p**n
    for k in range(1, n):
        cur = w.norm().value
        delta = (target.value - cur) % q
        if delta % p**k != 0:
            raise ArithmeticError("hensel lift lost precision")
        d = (delta // p**k) * pow(cur, -1, q) % p
        # w *= 1 + p^k * d * eps ; norm picks up 1 + p^k d Tr(eps) = 1 + p^k d
        w = w * (WittElement.one(p, n) + eps * (d * p**k))
    if w.norm().value != target.value:
        raise ArithmeticError("norm solve failed to converge")
    return w
