"""Data of the Rubin-Silverberg family congruent mod 5 to y^2 = x^3 - x.

Only the bad-reduction polynomial f(t), the discriminant 64*f(t)^5 and the
level-5 modular polynomial are needed; the Weierstrass coefficients of the
family members are never built.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from importlib import resources
from typing import Sequence

from .arith import factor
from .errors import OutOfRange, SchemaError
from .polymod import PolyModP

J_1728 = 1728
DISC_SCALE = 64


def _poly_mul(a: Sequence[int], b: Sequence[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


# little-endian integer coefficients
QUARTIC = (1, 0, -2, 0, 5)
OCTIC = (1, 0, -20, 0, -210, 0, -100, 0, 25)
F_COEFFS = tuple(_poly_mul(QUARTIC, OCTIC))
F_PRIME_COEFFS = tuple(i * c for i, c in enumerate(F_COEFFS))[1:]


def _horner(coeffs: Sequence[int], t: int) -> int:
    acc = 0
    for c in reversed(coeffs):
        acc = acc * t + c
    return acc


def f_eval(t: int) -> int:
    return _horner(F_COEFFS, t)


def f_eval_mod(t: int, ell: int) -> int:
    """f(t) mod ell using only residues below ell."""
    t %= ell
    acc = 0
    for c in reversed(F_COEFFS):
        acc = (acc * t + c) % ell
    return acc


def disc_eval(t: int) -> int:
    return DISC_SCALE * f_eval(t) ** 5


def f_mod(ell: int) -> PolyModP:
    return PolyModP(ell, F_COEFFS)


def f_prime_mod(ell: int) -> PolyModP:
    return PolyModP(ell, F_PRIME_COEFFS)


def parse_phi5(text: str) -> list[tuple[int, int, int]]:
    """Parse the ``xdeg ydeg coefficient`` table; comments start with '#'."""
    rows = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 3:
            raise SchemaError(f"phi5 table line {lineno}: expected 3 fields")
        try:
            i, j, c = (int(p) for p in parts)
        except ValueError as exc:
            raise SchemaError(f"phi5 table line {lineno}: {exc}") from None
        if i < j or j < 0:
            raise SchemaError(f"phi5 table line {lineno}: need xdeg >= ydeg >= 0")
        rows.append((i, j, c))
    return rows


def format_phi5(rows: Sequence[tuple[int, int, int]]) -> str:
    return "".join(f"{i} {j} {c}\n" for i, j, c in rows)


@lru_cache(maxsize=1)
def phi5_table() -> tuple[tuple[int, int, int], ...]:
    text = resources.files("kida").joinpath("data/phi5.txt").read_text()
    rows = tuple(parse_phi5(text))
    check_phi5(rows)
    return rows


def symmetrize(rows: Sequence[tuple[int, int, int]]) -> dict[tuple[int, int], int]:
    full: dict[tuple[int, int], int] = {}
    for i, j, c in rows:
        full[(i, j)] = full.get((i, j), 0) + c
        if i != j:
            full[(j, i)] = full.get((j, i), 0) + c
    return full


def phi5_symmetric() -> dict[tuple[int, int], int]:
    return symmetrize(phi5_table())


def check_phi5(rows: Sequence[tuple[int, int, int]]) -> None:
    """Fail fast on a mistranscribed table.

    The symmetric expansion must be symmetric, reduce to (X^5 - Y)(X - Y^5)
    modulo 5, and vanish at (1728, 1728) since j = 1728 has a degree-5
    endomorphism.
    """
    full = symmetrize(rows)
    if any(full.get((j, i)) != c for (i, j), c in full.items()):
        raise SchemaError("phi5 table is not symmetric")
    kronecker = {(6, 0): 1, (0, 6): 1, (1, 1): -1, (5, 5): -1}
    keys = set(full) | set(kronecker)
    if any((full.get(k, 0) - kronecker.get(k, 0)) % 5 for k in keys):
        raise SchemaError("phi5 table fails Kronecker's congruence mod 5")
    if sum(c * J_1728**i * J_1728**j for (i, j), c in full.items()) != 0:
        raise SchemaError("phi5(1728, 1728) != 0")


@lru_cache(maxsize=1)
def phi5_at_1728() -> tuple[int, ...]:
    """Coefficients (little-endian, monic sextic) of the table at Y = 1728.

    The table is evaluated monomial by monomial as listed, i.e. without the
    mirrored X^j*Y^i terms. This is the polynomial whose factorizations modulo
    63241 and 63901 are the published ones (the full symmetric polynomial
    has a double root at X = 1728 and never splits into distinct factors).
    """
    coeffs = [0] * 7
    for i, j, c in phi5_table():
        coeffs[i] += c * J_1728**j
    if coeffs[6] != 1:
        raise SchemaError("phi5 at 1728 is not monic of degree 6")
    return tuple(coeffs)


def phi5_symmetric_at_1728() -> tuple[int, ...]:
    coeffs = [0] * 7
    for (i, j), c in phi5_symmetric().items():
        coeffs[i] += c * J_1728**j
    return tuple(coeffs)


def phi5_mod(ell: int) -> PolyModP:
    return PolyModP(ell, phi5_at_1728())


def resultant(f: Sequence[int], g: Sequence[int]) -> int:
    """Res(f, g) of integer polynomials (little-endian) by Euclid over Q.

    Uses Res(f, g) = (-1)^(deg f deg g) lc(g)^(deg f - deg r) Res(g, r)
    with r = f mod g.
    """
    a = [Fraction(c) for c in f]
    b = [Fraction(c) for c in g]
    while a and a[-1] == 0:
        a.pop()
    while b and b[-1] == 0:
        b.pop()
    if not a or not b:
        return 0
    res = Fraction(1)
    while True:
        da, db = len(a) - 1, len(b) - 1
        if db == 0:
            res *= b[0] ** da
            break
        r = list(a)
        for k in range(da, db - 1, -1):
            c = r[k] / b[-1]
            for j in range(db + 1):
                r[k - db + j] -= c * b[j]
        r = r[:db]
        while r and r[-1] == 0:
            r.pop()
        if not r:
            return 0
        dr = len(r) - 1
        if da * db % 2:
            res = -res
        res *= b[-1] ** (da - dr)
        a, b = b, r
    if res.denominator != 1:
        raise ArithmeticError("resultant of integer polynomials is not an integer")
    return res.numerator


@lru_cache(maxsize=1)
def res_f_fprime() -> int:
    return resultant(F_COEFFS, F_PRIME_COEFFS)


@lru_cache(maxsize=1)
def inadmissible_primes() -> frozenset[int]:
    """Prime divisors of Res(f, f')."""
    report = factor(abs(res_f_fprime()))
    if report.status != "complete":
        raise ArithmeticError("could not factor Res(f, f')")
    return frozenset(report.primes())


def is_admissible(ell: int) -> bool:
    """True iff f and f' are coprime modulo the prime ell > 5."""
    if ell <= 5:
        raise OutOfRange(f"admissibility is defined for ell > 5, got {ell}")
    return ell not in inadmissible_primes()
