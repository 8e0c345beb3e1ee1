"""Exact integer arithmetic: modular powers, Legendre symbols, square roots,
primality, factorization and the Chinese remainder theorem.

Python ints serve as the arbitrary-precision integer type; residues are
plain ints in ``[0, m)`` passed together with their modulus.
"""

from __future__ import annotations

import math
import random
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterable, Optional

import numpy as np

try:
    from gmpy2 import gcd as _gcd, mpz as _big
except ImportError:  # pragma: no cover - gmpy2 is a declared dependency
    _big, _gcd = int, math.gcd

from .errors import EmptyInput, InvalidModulus, NoSquareRoot, NotCoprime

# Deterministic Miller-Rabin witnesses; complete for n < 3.3 * 10**24.
_MR_BASES_64 = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_MR_ROUNDS = 64


def mod_pow(base: int, exp: int, m: int) -> int:
    """Return ``base**exp mod m``."""
    if m < 3:
        raise InvalidModulus(f"modulus must be >= 3, got {m}")
    if exp < 0:
        raise ValueError("exponent must be non-negative")
    return pow(base % m, exp, m)


def legendre(a: int, ell: int) -> int:
    """Legendre symbol (a | ell) for an odd prime ell, by quadratic reciprocity.

    Primality of ``ell`` is the caller's responsibility; for composite odd
    ``ell`` the value returned is the Jacobi symbol.
    """
    if ell < 3 or ell % 2 == 0:
        raise InvalidModulus(f"Legendre symbol needs an odd prime, got {ell}")
    a %= ell
    n = ell
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def sqrt_mod(a: int, ell: int) -> int:
    """Square root of ``a`` modulo the odd prime ``ell`` (Tonelli-Shanks).

    Returns the smaller of the two roots.
    """
    a %= ell
    if a == 0:
        return 0
    if legendre(a, ell) != 1:
        raise NoSquareRoot(f"{a} is not a square modulo {ell}")
    if ell % 4 == 3:
        r = pow(a, (ell + 1) // 4, ell)
        return min(r, ell - r)

    q, s = ell - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while legendre(z, ell) != -1:
        z += 1
    c = pow(z, q, ell)
    r = pow(a, (q + 1) // 2, ell)
    t = pow(a, q, ell)
    m = s
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % ell
            i += 1
        b = pow(c, 1 << (m - i - 1), ell)
        r = r * b % ell
        c = b * b % ell
        t = t * c % ell
        m = i
    return min(r, ell - r)


@lru_cache(maxsize=8)
def small_primes(limit: int) -> tuple[int, ...]:
    """All primes <= limit (plain sieve; intended for limit up to ~10**7)."""
    if limit < 2:
        return ()
    sieve = np.ones(limit + 1, dtype=bool)
    sieve[:2] = False
    sieve[4::2] = False
    for p in range(3, math.isqrt(limit) + 1, 2):
        if sieve[p]:
            sieve[p * p :: 2 * p] = False
    return tuple(np.flatnonzero(sieve).tolist())


@lru_cache(maxsize=4)
def _prime_array(limit: int) -> np.ndarray:
    return np.array(small_primes(limit), dtype=np.int64)


def _strong_probable_prime(n: int, a: int, d: int, s: int) -> bool:
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def is_prime(n: int) -> bool:
    """Miller-Rabin: deterministic below 2**64, 64 random rounds above."""
    if n < 2:
        return False
    for p in _MR_BASES_64:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    if n < 1 << 64:
        bases: Iterable[int] = _MR_BASES_64
    else:
        # Seeded by n so the answer is reproducible.
        rng = random.Random(n)
        bases = (rng.randrange(2, n - 1) for _ in range(_MR_ROUNDS))
    return all(_strong_probable_prime(n, a, d, s) for a in bases)


@dataclass(frozen=True)
class FactorBudget:
    """Work limits for :func:`factor`.

    ``pm1_bound``/``pm1_stage2`` drive both the p-1 and the p+1 stages;
    set ``pm1_bound`` to 0 to skip them.
    """

    trial_bound: int = 10**6
    rho_iterations: int = 1 << 26
    rho_restarts: int = 8
    pm1_bound: int = 10**6
    pm1_stage2: int = 5 * 10**7
    pp1_seeds: tuple[int, ...] = (3, 4, 5, 6)


@dataclass
class FactorReport:
    input: int
    factors: list[tuple[int, int]] = field(default_factory=list)
    cofactor: Optional[int] = None
    status: str = "complete"

    def product(self) -> int:
        out = 1
        for p, e in self.factors:
            out *= p**e
        if self.cofactor is not None:
            out *= self.cofactor
        return out

    def primes(self) -> list[int]:
        return [p for p, _ in self.factors]

    def to_dict(self) -> dict:
        return {
            "input": str(self.input),
            "factors": [[str(p), e] for p, e in self.factors],
            "cofactor": None if self.cofactor is None else str(self.cofactor),
            "status": self.status,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "FactorReport":
        return cls(
            input=int(d["input"]),
            factors=[(int(p), int(e)) for p, e in d["factors"]],
            cofactor=None if d["cofactor"] is None else int(d["cofactor"]),
            status=d["status"],
        )


@lru_cache(maxsize=4)
def _trial_blocks(bound: int, chunk: int = 1024) -> tuple:
    """Primes below ``bound`` in blocks, each with its product."""
    primes = _prime_array(bound).tolist()
    blocks = (tuple(primes[i : i + chunk]) for i in range(0, len(primes), chunk))
    return tuple((b, _big(math.prod(b))) for b in blocks)


def _trial_divide(n: int, bound: int, found: Counter) -> int:
    for block, prod in _trial_blocks(bound):
        if block[0] * block[0] > n:
            break
        if _gcd(n, prod) == 1:
            continue
        for p in block:
            while n % p == 0:
                n //= p
                found[p] += 1
    if 1 < n and n < bound * bound:
        # every remaining factor exceeds the trial bound, so n is prime
        found[n] += 1
        n = 1
    return n


def _integer_root(n: int) -> Optional[tuple[int, int]]:
    for k in small_primes(n.bit_length()):
        r = _iroot(n, k)
        if r < 2:
            break
        if r**k == n:
            return r, k
    return None


def _iroot(n: int, k: int) -> int:
    x = 1 << ((n.bit_length() + k - 1) // k)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            return x
        x = y


def pollard_brent(n: int, iterations: int, rng: random.Random) -> Optional[int]:
    """One Brent-variant Pollard rho attempt; a proper divisor or None."""
    if n % 2 == 0:
        return 2
    y = _big(rng.randrange(1, n))
    c = _big(rng.randrange(1, n))
    n = _big(n)
    batch = 128
    g, r, q = 1, 1, 1
    x = ys = y
    done = 0
    while g == 1 and done < iterations:
        x = y
        for _ in range(r):
            y = (y * y + c) % n
        k = 0
        while k < r and g == 1:
            ys = y
            for _ in range(min(batch, r - k)):
                y = (y * y + c) % n
                q = q * abs(x - y) % n
            g = math.gcd(q, n)
            k += batch
        done += r
        r *= 2
    if g == n:
        g = 1
        while g == 1:
            ys = (ys * ys + c) % n
            g = math.gcd(abs(x - ys), n)
    return int(g) if 1 < g < n else None


def _lucas_v(a: int, k: int, n: int) -> int:
    """V_k(a) mod n for the Lucas sequence V_0 = 2, V_1 = a."""
    if k == 0:
        return 2
    x, y = a, (a * a - 2) % n
    for bit in bin(k)[3:]:
        if bit == "1":
            x, y = (x * y - a) % n, (y * y - 2) % n
        else:
            x, y = (x * x - 2) % n, (x * y - a) % n
    return x


def _product_tree(values: list[int]) -> int:
    while len(values) > 1:
        values = [
            values[i] * values[i + 1] if i + 1 < len(values) else values[i]
            for i in range(0, len(values), 2)
        ]
    return values[0] if values else 1


@lru_cache(maxsize=4)
def _stage1_exponent(bound: int) -> int:
    powers = []
    for p in small_primes(bound):
        pk = p
        while pk * p <= bound:
            pk *= p
        powers.append(pk)
    return int(_product_tree(powers))


@lru_cache(maxsize=2)
def _stage2_primes(lo: int, hi: int) -> np.ndarray:
    primes = _prime_array(hi)
    return primes[primes > lo]


def _stage2(a: int, n: int, lo: int, hi: int) -> Optional[int]:
    """Baby-step giant-step continuation on V-values.

    ``a`` is V_M(alpha) after stage 1; finds p when the order of alpha
    modulo p divides M*q for one prime q in (lo, hi].
    """
    w = 2310
    half = w // 2
    baby = [2, a]
    for _ in range(half - 1):
        baby.append((baby[-1] * a - baby[-2]) % n)
    vw = _lucas_v(a, w, n)
    primes = _stage2_primes(lo, hi)
    if len(primes) == 0:
        return None
    j = (int(primes[0]) + half) // w
    g_prev = _lucas_v(a, w * (j - 1), n)
    g_cur = _lucas_v(a, w * j, n)
    acc = 1
    step = 1 << 16
    for start in range(0, len(primes), step):
        for q in primes[start : start + step].tolist():
            jq = (q + half) // w
            while j < jq:
                g_prev, g_cur = g_cur, (g_cur * vw - g_prev) % n
                j += 1
            acc = acc * (g_cur - baby[abs(q - w * j)]) % n
        g = math.gcd(acc, n)
        if g == n:
            return None
        if g > 1:
            return int(g)
    return None


def pollard_pm1(n: int, bound: int, stage2: int) -> Optional[int]:
    """Pollard p-1 with a baby-step giant-step second stage."""
    n = _big(n)
    h = pow(2, _stage1_exponent(bound), n)
    g = math.gcd(h - 1, n)
    if 1 < g < n:
        return int(g)
    if g == n:
        return None
    inv = pow(h, -1, n)
    return _stage2((h + inv) % n, n, bound, stage2)


def williams_pp1(n: int, seed: int, bound: int, stage2: int) -> Optional[int]:
    """Williams p+1 with starting value ``seed``; same stage layout as p-1."""
    n = _big(n)
    a = _lucas_v(_big(seed), _stage1_exponent(bound), n)
    g = math.gcd(a - 2, n)
    if 1 < g < n:
        return int(g)
    if g == n:
        return None
    return _stage2(a, n, bound, stage2)


def _find_divisor(n: int, budget: FactorBudget, rng: random.Random) -> Optional[int]:
    quick = min(budget.rho_iterations, 1 << 16)
    if quick and budget.rho_restarts:
        d = pollard_brent(n, quick, rng)
        if d:
            return d
    if budget.pm1_bound:
        d = pollard_pm1(n, budget.pm1_bound, budget.pm1_stage2)
        if d:
            return d
        for seed in budget.pp1_seeds:
            d = williams_pp1(n, seed, budget.pm1_bound, budget.pm1_stage2)
            if d:
                return d
    for _ in range(budget.rho_restarts):
        d = pollard_brent(n, budget.rho_iterations, rng)
        if d:
            return d
    return None


def factor(
    n: int,
    budget: Optional[FactorBudget] = None,
    seed: int = 0,
    stop_when: Optional[Callable[[int], bool]] = None,
) -> FactorReport:
    """Factor ``n`` as far as ``budget`` allows.

    Trial division, then Pollard rho (Brent), p-1 and p+1 on each composite
    piece. Pieces that survive the budget are multiplied into ``cofactor``
    and the report is marked partial. If ``stop_when`` returns True for a
    newly found prime, the search ends early and whatever is left over
    becomes the cofactor.
    """
    if n < 1:
        raise ValueError("factor() needs n >= 1")
    budget = budget or FactorBudget()
    rng = random.Random(seed)
    found: Counter = Counter()
    rest = _trial_divide(n, budget.trial_bound, found)
    stack = [(rest, 1)] if rest > 1 else []
    stuck = []
    stopped = stop_when is not None and any(stop_when(p) for p in found)
    while stack and not stopped:
        m, mult = stack.pop()
        if is_prime(m):
            found[m] += mult
            stopped = stop_when is not None and stop_when(m)
            continue
        root = _integer_root(m)
        if root:
            stack.append((root[0], mult * root[1]))
            continue
        d = _find_divisor(m, budget, rng)
        if d is None:
            stuck.append((m, mult))
            continue
        stack.append((d, mult))
        stack.append((m // d, mult))
    report = FactorReport(input=n, factors=sorted(found.items()))
    leftover = stuck + stack
    if leftover:
        report.cofactor = math.prod(m**k for m, k in leftover)
        report.status = "partial"
    return report


def crt(congruences: list[tuple[int, int]]) -> tuple[int, int]:
    """Combine ``[(r_i, m_i)]`` into ``(r, prod m_i)`` with 0 <= r < prod m_i."""
    if not congruences:
        raise EmptyInput("crt needs at least one congruence")
    r, m = congruences[0]
    r %= m
    for ri, mi in congruences[1:]:
        if math.gcd(m, mi) != 1:
            raise NotCoprime(f"moduli {m} and {mi} share a factor")
        k = (ri - r) * pow(m, -1, mi) % mi
        r, m = r + m * k, m * mi
    return r, m
