"""Dense univariate polynomials over F_ell.

Coefficient lists are little-endian (index = degree) and carry no trailing
zeros; the empty list is the zero polynomial.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import ModulusMismatch, NotMonic


def _trim(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


@dataclass(frozen=True)
class PolyModP:
    modulus: int
    coeffs: tuple[int, ...]

    def __init__(self, modulus: int, coeffs: Sequence[int]):
        object.__setattr__(self, "modulus", modulus)
        object.__setattr__(self, "coeffs", tuple(_trim([c % modulus for c in coeffs])))

    @classmethod
    def from_roots(cls, modulus: int, roots: Sequence[int]) -> "PolyModP":
        c = [1]
        for r in roots:
            c = _mul([(-r) % modulus, 1], c, modulus)
        return cls(modulus, c)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def monic(self) -> "PolyModP":
        if not self.coeffs:
            return self
        inv = pow(self.coeffs[-1], -1, self.modulus)
        return PolyModP(self.modulus, [c * inv for c in self.coeffs])

    def derivative(self) -> "PolyModP":
        return PolyModP(self.modulus, [i * c for i, c in enumerate(self.coeffs)][1:])

    def __call__(self, x: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = (acc * x + c) % self.modulus
        return acc

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if c == 1 and mono:
                terms.append(mono)
            else:
                terms.append(f"{c}{'*' if mono else ''}{mono}")
        return " + ".join(terms) + f" (mod {self.modulus})"


def _mul(a: Sequence[int], b: Sequence[int], m: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim([c % m for c in out])


def _divmod(a: Sequence[int], b: Sequence[int], m: int) -> tuple[list[int], list[int]]:
    r = list(a)
    db = len(b) - 1
    if len(r) - 1 < db:
        return [], _trim(r)
    inv = pow(b[-1], -1, m)
    q = [0] * (len(r) - db)
    for k in range(len(r) - 1, db - 1, -1):
        c = r[k] * inv % m
        if c:
            q[k - db] = c
            for j in range(db + 1):
                r[k - db + j] = (r[k - db + j] - c * b[j]) % m
    return _trim(q), _trim(r[:db])


def _mulmod(a: Sequence[int], b: Sequence[int], f: Sequence[int], m: int) -> list[int]:
    """a*b mod f for monic f, reducing top-down in place."""
    n = len(f) - 1
    prod = [0] * max(len(a) + len(b) - 1, 0)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] += x * y
    for k in range(len(prod) - 1, n - 1, -1):
        c = prod[k] % m
        if c:
            base = k - n
            for j in range(n):
                prod[base + j] -= c * f[j]
    return _trim([c % m for c in prod[:n]])


def _powmod(base: Sequence[int], e: int, f: Sequence[int], m: int) -> list[int]:
    result = _divmod([1], f, m)[1]
    b = _divmod(list(base), f, m)[1]
    while e:
        if e & 1:
            result = _mulmod(result, b, f, m)
        e >>= 1
        if e:
            b = _mulmod(b, b, f, m)
    return result


def _gcd(a: list[int], b: list[int], m: int) -> list[int]:
    while b:
        a, b = b, _divmod(a, b, m)[1]
    if not a:
        return a
    inv = pow(a[-1], -1, m)
    return [c * inv % m for c in a]


def _check_same(f: PolyModP, g: PolyModP) -> None:
    if f.modulus != g.modulus:
        raise ModulusMismatch(f"moduli differ: {f.modulus} vs {g.modulus}")


def poly_mul(f: PolyModP, g: PolyModP) -> PolyModP:
    _check_same(f, g)
    return PolyModP(f.modulus, _mul(f.coeffs, g.coeffs, f.modulus))


def poly_divmod(f: PolyModP, g: PolyModP) -> tuple[PolyModP, PolyModP]:
    _check_same(f, g)
    if g.is_zero():
        raise ZeroDivisionError("polynomial division by zero")
    q, r = _divmod(f.coeffs, g.coeffs, f.modulus)
    return PolyModP(f.modulus, q), PolyModP(f.modulus, r)


def poly_gcd(f: PolyModP, g: PolyModP) -> PolyModP:
    """Monic gcd by Euclid; gcd(f, 0) = monic(f)."""
    _check_same(f, g)
    return PolyModP(f.modulus, _gcd(list(f.coeffs), list(g.coeffs), f.modulus))


def poly_powmod(base: PolyModP, e: int, f: PolyModP) -> PolyModP:
    """base**e mod f for monic f."""
    _check_same(base, f)
    if not f.is_monic():
        raise NotMonic("modulus polynomial must be monic")
    return PolyModP(f.modulus, _powmod(base.coeffs, e, f.coeffs, f.modulus))


def frobenius_power(f: PolyModP) -> PolyModP:
    """x**ell mod f by repeated squaring."""
    if not f.is_monic() or f.degree < 1:
        raise NotMonic("frobenius_power needs a monic polynomial of degree >= 1")
    return PolyModP(f.modulus, _powmod([0, 1], f.modulus, f.coeffs, f.modulus))


def splits_distinct_linear(f: PolyModP) -> bool:
    """True iff f is a product of distinct monic linear factors over F_ell."""
    if not f.is_monic() or f.degree < 1:
        raise NotMonic("splitting test needs a monic polynomial of degree >= 1")
    x = _divmod([0, 1], f.coeffs, f.modulus)[1]
    if list(frobenius_power(f).coeffs) != x:
        return False
    return poly_gcd(f, f.derivative()).degree == 0


def _minus_x_power(h: list[int], k: int, m: int) -> list[int]:
    """h - x**k for k in {0, 1}."""
    h = list(h) + [0] * max(0, k + 1 - len(h))
    h[k] = (h[k] - 1) % m
    return _trim(h)


def _split(g: list[int], m: int, rng: random.Random, out: list[int]) -> None:
    """Equal-degree splitting of a squarefree product of linear factors."""
    d = len(g) - 1
    if d <= 0:
        return
    if d == 1:
        out.append((-g[0]) * pow(g[1], -1, m) % m)
        return
    while True:
        c = rng.randrange(m)
        h = _minus_x_power(_powmod([c, 1], (m - 1) // 2, g, m), 0, m)
        k = _gcd(list(g), h, m)
        if 0 < len(k) - 1 < d:
            break
    _split(k, m, rng, out)
    _split(_divmod(g, k, m)[0], m, rng, out)


def roots(f: PolyModP, seed: Optional[int] = 0) -> list[int]:
    """All distinct roots of f in F_ell, ascending.

    Randomized splitting uses a local PRNG seeded by ``seed``; the result
    does not depend on it.
    """
    if f.is_zero():
        raise ValueError("the zero polynomial has every element as a root")
    m = f.modulus
    if f.degree == 0:
        return []
    if m == 2:
        return [x for x in (0, 1) if f(x) == 0]
    monic = f.monic().coeffs
    # gcd(f, x^ell - x) is the product of the distinct linear factors
    diff = _minus_x_power(_powmod([0, 1], m, monic, m), 1, m)
    g = _gcd(list(monic), diff, m)
    found: list[int] = []
    _split(g, m, random.Random(seed), found)
    return sorted(found)
