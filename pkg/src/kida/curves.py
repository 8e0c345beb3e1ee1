"""Elliptic curves over prime fields.

Point counts (naive Legendre sums and the CM shortcut for y^2 = x^3 - x),
brute-force group structure, and reduction types at primes >= 5.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .arith import factor, is_prime, legendre, small_primes, sqrt_mod
from .errors import (
    CostGuard,
    NoRepresentation,
    OutOfRange,
    SmallPrimeUnsupported,
)

NAIVE_LIMIT = 10**6
GROUP_LIMIT = 10**4

# Sign of a_ell / (2a) for y^2 = x^3 - x, keyed by (a mod 4, b mod 4) where
# ell = a^2 + b^2 with a odd, b even. Fitted by calibrate_cm_sign().
CM_SIGN = {(1, 0): 1, (3, 0): -1, (1, 2): -1, (3, 2): 1}


@dataclass(frozen=True)
class CurveFp:
    """Short Weierstrass curve y^2 = x^3 + a*x + b over F_ell."""

    ell: int
    a: int
    b: int

    def __post_init__(self):
        if self.ell <= 3 or not is_prime(self.ell):
            raise OutOfRange(f"ell must be a prime > 3, got {self.ell}")
        object.__setattr__(self, "a", self.a % self.ell)
        object.__setattr__(self, "b", self.b % self.ell)
        if (4 * self.a**3 + 27 * self.b**2) % self.ell == 0:
            raise ValueError(f"singular curve modulo {self.ell}")

    def rhs(self, x: int) -> int:
        return (x * x * x + self.a * x + self.b) % self.ell

    def points(self) -> list[Optional[tuple[int, int]]]:
        """All points, the point at infinity (None) first."""
        ell = self.ell
        out: list[Optional[tuple[int, int]]] = [None]
        for x in range(ell):
            r = self.rhs(x)
            if r == 0:
                out.append((x, 0))
            elif legendre(r, ell) == 1:
                y = sqrt_mod(r, ell)
                out += [(x, y), (x, ell - y)]
        return out

    def add(self, p, q):
        if p is None:
            return q
        if q is None:
            return p
        ell = self.ell
        (x1, y1), (x2, y2) = p, q
        if x1 == x2:
            if (y1 + y2) % ell == 0:
                return None
            lam = (3 * x1 * x1 + self.a) * pow(2 * y1, -1, ell) % ell
        else:
            lam = (y2 - y1) * pow(x2 - x1, -1, ell) % ell
        x3 = (lam * lam - x1 - x2) % ell
        return x3, (lam * (x1 - x3) - y1) % ell

    def mul(self, k: int, p):
        acc = None
        while k:
            if k & 1:
                acc = self.add(acc, p)
            p = self.add(p, p)
            k >>= 1
        return acc


def ap_naive(curve: CurveFp) -> int:
    """a_ell = -sum_x (x^3 + ax + b | ell), vectorized over F_ell."""
    ell = curve.ell
    if ell >= NAIVE_LIMIT:
        raise CostGuard(f"naive point count refused for ell = {ell} >= {NAIVE_LIMIT}")
    x = np.arange(ell, dtype=np.int64)
    squares = np.zeros(ell, dtype=np.int64)
    squares[x * x % ell] = 1
    chi = 2 * squares - 1
    chi[0] = 0
    vals = (x * x % ell * x + curve.a * x + curve.b) % ell
    return -int(chi[vals].sum())


def count_points(curve: CurveFp) -> int:
    return curve.ell + 1 - ap_naive(curve)


def cornacchia(ell: int) -> tuple[int, int]:
    """Write ell = a^2 + b^2 with a odd, b even, both positive."""
    if ell % 4 != 1:
        raise NoRepresentation(f"{ell} is not 1 mod 4")
    r = sqrt_mod(-1, ell)
    a, b = ell, ell - r
    limit = math.isqrt(ell)
    while b > limit:
        a, b = b, a % b
    x = b
    y = math.isqrt(ell - x * x)
    if x * x + y * y != ell:
        raise NoRepresentation(f"{ell} is not a sum of two squares (not prime?)")
    return (x, y) if x % 2 else (y, x)


def _cm_sign(a: int, b: int) -> int:
    return CM_SIGN[(a % 4, b % 4)]


def ap_cm(ell: int) -> int:
    """a_ell of y^2 = x^3 - x for a prime ell = 1 mod 4, from ell = a^2 + b^2."""
    if ell <= 5:
        raise OutOfRange(f"ap_cm needs ell > 5, got {ell}")
    a, b = cornacchia(ell)
    return 2 * _cm_sign(a, b) * a


def calibrate_cm_sign(bound: int) -> dict[tuple[int, int], int]:
    """Fit the sign rule a_ell = +-2a against naive counts for 5 < ell < bound.

    Raises if some residue class of (a mod 4, b mod 4) needs both signs.
    """
    fitted: dict[tuple[int, int], int] = {}
    for ell in small_primes(bound - 1):
        if ell <= 5 or ell % 4 != 1:
            continue
        a, b = cornacchia(ell)
        ap = ap_naive(CurveFp(ell, -1, 0))
        if abs(ap) != 2 * a:
            raise AssertionError(f"|a_{ell}| = {abs(ap)} is not 2*{a}")
        key = (a % 4, b % 4)
        sign = 1 if ap == 2 * a else -1
        if fitted.setdefault(key, sign) != sign:
            raise AssertionError(f"no consistent sign for class {key}")
    return fitted


def group_structure(curve: CurveFp) -> tuple[int, int]:
    """Invariant factors (n1, n2), n1 | n2, of E(F_ell) by enumeration."""
    if curve.ell > GROUP_LIMIT:
        raise CostGuard(f"group structure refused for ell = {curve.ell} > {GROUP_LIMIT}")
    pts = curve.points()
    order = len(pts)
    qs = [q for q, _ in factor(order).factors]
    exponent = 1
    for p in pts[1:]:
        k = order
        for q in qs:
            while k % q == 0 and curve.mul(k // q, p) is None:
                k //= q
        exponent = math.lcm(exponent, k)
        if exponent == order:
            break
    return order // exponent, exponent


REDUCTION_TYPES = ("good", "split_mult", "nonsplit_mult", "additive")


@dataclass(frozen=True)
class ReductionDatum:
    c4: int
    c6: int
    disc: int
    ell: int

    def __post_init__(self):
        if self.c4**3 - self.c6**2 != 1728 * self.disc:
            raise ValueError("c4^3 - c6^2 must equal 1728 * disc")

    @classmethod
    def from_ainvariants(cls, ainvs, ell: int) -> "ReductionDatum":
        a1, a2, a3, a4, a6 = ainvs
        b2 = a1 * a1 + 4 * a2
        b4 = 2 * a4 + a1 * a3
        b6 = a3 * a3 + 4 * a6
        b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
        c4 = b2 * b2 - 24 * b4
        c6 = -(b2**3) + 36 * b2 * b4 - 216 * b6
        disc = -b2 * b2 * b8 - 8 * b4**3 - 27 * b6 * b6 + 9 * b2 * b4 * b6
        return cls(c4, c6, disc, ell)


def reduction_type(datum: ReductionDatum) -> str:
    """Reduction type at ell >= 5 from a model minimal at ell."""
    ell = datum.ell
    if ell < 5:
        raise SmallPrimeUnsupported(f"reduction type needs ell >= 5, got {ell}")
    if datum.disc % ell:
        return "good"
    if datum.c4 % ell == 0:
        return "additive"
    return "split_mult" if legendre(-datum.c6, ell) == 1 else "nonsplit_mult"
