"""Arithmetic in F_p and the quadratic extension F_{p^2}.

The extension is presented as F_p[g] with a fixed, deterministic modulus:
x^2 - n for odd p (n the smallest positive non-residue) and x^2 + x + 1
for p = 2, so that g is a primitive cube root of unity there.
"""

from __future__ import annotations

from dataclasses import dataclass

from .arith import is_prime, smallest_qnr


def fq_modulus(p: int) -> tuple[int, int]:
    """Coefficients (m1, m0) of the modulus x^2 + m1*x + m0 of F_{p^2}."""
    if p == 2:
        return (1, 1)
    return (0, (-smallest_qnr(p)) % p)


@dataclass(frozen=True)
class FqElement:
    """c0 + c1*g in F_{p^2}, residues reduced into [0, p)."""

    p: int
    c0: int
    c1: int

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        object.__setattr__(self, "c0", self.c0 % self.p)
        object.__setattr__(self, "c1", self.c1 % self.p)

    # -- ring structure -------------------------------------------------

    def _check(self, other: "FqElement"):
        if self.p != other.p:
            raise ValueError("mixed characteristics")

    def __add__(self, other):
        self._check(other)
        return FqElement(self.p, self.c0 + other.c0, self.c1 + other.c1)

    def __sub__(self, other):
        self._check(other)
        return FqElement(self.p, self.c0 - other.c0, self.c1 - other.c1)

    def __neg__(self):
        return FqElement(self.p, -self.c0, -self.c1)

    def __mul__(self, other):
        if isinstance(other, int):
            return FqElement(self.p, self.c0 * other, self.c1 * other)
        self._check(other)
        m1, m0 = fq_modulus(self.p)
        # (a0 + a1 g)(b0 + b1 g) with g^2 = -m1 g - m0
        a0, a1, b0, b1 = self.c0, self.c1, other.c0, other.c1
        hi = a1 * b1
        return FqElement(self.p, a0 * b0 - hi * m0, a0 * b1 + a1 * b0 - hi * m1)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = FqElement(self.p, 1, 0)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def is_zero(self) -> bool:
        return self.c0 == 0 and self.c1 == 0

    def frobenius(self) -> "FqElement":
        m1, _ = fq_modulus(self.p)
        # conjugate root of the modulus: g -> -m1 - g
        return FqElement(self.p, self.c0 - self.c1 * m1, -self.c1)

    def norm(self) -> int:
        """Norm to F_p as an integer residue."""
        prod = self * self.frobenius()
        assert prod.c1 == 0
        return prod.c0

    def trace(self) -> int:
        s = self + self.frobenius()
        assert s.c1 == 0
        return s.c0

    def inverse(self) -> "FqElement":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in F_{p^2}")
        n_inv = pow(self.norm(), -1, self.p)
        return self.frobenius() * n_inv

    def in_prime_field(self) -> bool:
        return self.c1 == 0

    def multiplicative_order(self) -> int:
        if self.is_zero():
            raise ValueError("order of zero")
        order = 1
        x = self
        one = FqElement(self.p, 1, 0)
        while x != one:
            x = x * self
            order += 1
            if order > self.p * self.p:
                raise RuntimeError("order computation ran away")
        return order


def fq(p: int, c0: int, c1: int = 0) -> FqElement:
    return FqElement(p, c0, c1)


def fq_zero(p: int) -> FqElement:
    return FqElement(p, 0, 0)


def fq_one(p: int) -> FqElement:
    return FqElement(p, 1, 0)


def fq_gen(p: int) -> FqElement:
    """The fixed generator g of F_{p^2} over F_p."""
    return FqElement(p, 0, 1)


def all_fq(p: int):
    for c0 in range(p):
        for c1 in range(p):
            yield FqElement(p, c0, c1)


def fp_span_rank(values: list[FqElement]) -> int:
    """Rank over F_p of a list of F_{p^2} elements viewed as vectors."""
    if not values:
        return 0
    p = values[0].p
    rows = [[v.c0, v.c1] for v in values]
    return _fp_rank(rows, p)


def _fp_rank(rows, p: int) -> int:
    m = [row[:] for row in rows]
    rank = 0
    ncols = len(m[0]) if m else 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, len(m)) if m[r][col] % p != 0), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        inv = pow(m[rank][col], -1, p)
        m[rank] = [x * inv % p for x in m[rank]]
        for r in range(len(m)):
            if r != rank and m[r][col] % p != 0:
                f = m[r][col]
                m[r] = [(m[r][j] - f * m[rank][j]) % p for j in range(ncols)]
        rank += 1
    return rank


def fp_rank(rows: list[list[int]], p: int) -> int:
    return _fp_rank(rows, p)
