"""Classical modular polynomials Phi_2 and Phi_3 as exact integer tables.

The coefficients are the classical public constants.  A structural
self-check guards against transcription errors: symmetry in (X, Y), the
exact factorizations of Phi_ell(0, Y), and the Kronecker congruence
Phi_ell(X, Y) == (X^ell - Y)(X - Y^ell) mod ell.
"""

from __future__ import annotations

from .fields import FqElement, fq

# coefficient of X^i Y^j stored once per unordered pair {i, j}
_PHI2 = {
    (3, 0): 1,
    (2, 2): -1,
    (2, 1): 1488,
    (2, 0): -162000,
    (1, 1): 40773375,
    (1, 0): 8748000000,
    (0, 0): -157464000000000,
}

_PHI3 = {
    (4, 0): 1,
    (3, 3): -1,
    (3, 2): 2232,
    (3, 1): -1069956,
    (3, 0): 36864000,
    (2, 2): 2587918086,
    (2, 1): 8900222976000,
    (2, 0): 452984832000000,
    (1, 1): -770845966336000000,
    (1, 0): 1855425871872000000000,
}

_TABLES = {2: _PHI2, 3: _PHI3}
_checked = False


def coefficients(ell: int) -> dict:
    """Full coefficient dict {(i, j): c} of Phi_ell, symmetric in (i, j)."""
    if ell not in _TABLES:
        raise ValueError("only ell in {2, 3} is supported")
    _self_check()
    out = {}
    for (i, j), c in _TABLES[ell].items():
        out[(i, j)] = c
        out[(j, i)] = c
    return out


def phi_in_y(ell: int, j: FqElement) -> list:
    """Coefficients [c_0, ..., c_{ell+1}] of Phi_ell(j, Y) over F_{p^2}."""
    table = coefficients(ell)
    p = j.p
    coeffs = [fq(p, 0) for _ in range(ell + 2)]
    j_pows = [fq(p, 1)]
    for _ in range(ell + 1):
        j_pows.append(j_pows[-1] * j)
    for (a, b), c in table.items():
        coeffs[b] = coeffs[b] + j_pows[a] * (c % p)
    return coeffs


def _expand(table: dict) -> dict:
    out = {}
    for (i, j), c in table.items():
        out[(i, j)] = c
        out[(j, i)] = c
    return out


def _self_check():
    """Validate the embedded tables once per process."""
    global _checked
    if _checked:
        return
    for ell, table in _TABLES.items():
        full = _expand(table)
        deg = ell + 1
        # symmetry is structural; check the univariate specializations
        # Phi_2(0, Y) = (Y - 54000)^3 and Phi_3(0, Y) = Y (Y + 12288000)^3
        at_zero = [full.get((0, j), 0) for j in range(deg + 1)]
        if ell == 2:
            expect = _poly_pow([-54000, 1], 3)
        else:
            expect = [0] + _poly_pow([12288000, 1], 3)
        if at_zero != expect:
            raise AssertionError(f"Phi_{ell}(0, Y) specialization mismatch")
        # Kronecker congruence mod ell
        kron = {(deg, 0): 1, (0, deg): 1, (ell, ell): -1, (1, 1): -1}
        for i in range(deg + 1):
            for j in range(deg + 1):
                if (full.get((i, j), 0) - kron.get((i, j), 0)) % ell != 0:
                    raise AssertionError(
                        f"Phi_{ell} violates the Kronecker congruence at X^{i} Y^{j}"
                    )
    _checked = True


def _poly_pow(poly: list, e: int) -> list:
    out = [1]
    for _ in range(e):
        new = [0] * (len(out) + len(poly) - 1)
        for a, ca in enumerate(out):
            for b, cb in enumerate(poly):
                new[a + b] += ca * cb
        out = new
    return out
