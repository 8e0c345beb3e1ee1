"""Bookkeeping for lambda-invariants.

Kida-type formula for a p-power extension L/K of Z_p-extensions, its
Herbrand-quotient form for degree p, and the ledger comparing the
lambda-invariants of two p-congruent curves through local coranks.
None of the Iwasawa-theoretic inputs are computed here; they are data.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from .arith import is_prime
from .curves import REDUCTION_TYPES
from .errors import (
    AssumptionViolation,
    ContradictsLemma,
    DecompositionViolation,
    DegreeMismatch,
    InvalidCorank,
)

ASSUMPTIONS = (
    "mu_zero_cotorsion",
    "good_ordinary_and_no_CM_or_no_p_torsion",
    "p_ramified_in_tower",
)


def _is_power_of(n: int, p: int) -> bool:
    while n > 1 and n % p == 0:
        n //= p
    return n == 1


@dataclass(frozen=True)
class PlaceDatum:
    """A place w' of L_infinity with the data the formula needs."""

    label: str
    e: int
    reduction: str
    over_p: bool = False
    has_p_torsion_locally: bool = False
    finitely_decomposed: bool = True
    above: Optional[str] = None

    def __post_init__(self):
        if self.e < 1:
            raise ValueError(f"place {self.label!r}: ramification index must be >= 1")
        if self.reduction not in REDUCTION_TYPES:
            raise ValueError(f"place {self.label!r}: unknown reduction {self.reduction!r}")

    @property
    def ramified_over_base(self) -> bool:
        return self.e > 1


@dataclass
class TowerSpec:
    p: int
    degree: int
    lambda_K: int
    places: list[PlaceDatum] = field(default_factory=list)
    assumptions: dict[str, bool] = field(default_factory=lambda: dict.fromkeys(ASSUMPTIONS, True))

    def __post_init__(self):
        if self.p < 3 or not is_prime(self.p):
            raise ValueError(f"p must be an odd prime, got {self.p}")
        if self.degree < 1 or not _is_power_of(self.degree, self.p):
            raise ValueError(f"degree {self.degree} is not a power of p = {self.p}")
        if self.lambda_K < 0:
            raise ValueError("lambda_K must be non-negative")
        for w in self.places:
            if self.degree % w.e or not _is_power_of(w.e, self.p):
                raise ValueError(
                    f"place {w.label!r}: e = {w.e} must be a power of p dividing the degree"
                )


def classify_place(place: PlaceDatum, p: Optional[int] = None) -> str:
    """'P1', 'P2' or 'neither'. Places above p are never in P1 or P2."""
    if place.over_p:
        return "neither"
    if place.reduction == "split_mult":
        return "P1"
    if place.ramified_over_base and place.reduction == "good" and place.has_p_torsion_locally:
        return "P2"
    return "neither"


def _check(tower: TowerSpec) -> list[tuple[PlaceDatum, str]]:
    for flag in ASSUMPTIONS:
        if not tower.assumptions.get(flag, False):
            raise AssumptionViolation(flag)
    classified = [(w, classify_place(w, tower.p)) for w in tower.places]
    for w, cls in classified:
        if cls != "neither" and not w.finitely_decomposed:
            raise DecompositionViolation(w.label)
    return classified


def kida_lambda(tower: TowerSpec) -> int:
    """lambda(E/L) = [L:K] lambda(E/K) + sum_P1 (e - 1) + sum_P2 2(e - 1)."""
    total = tower.degree * tower.lambda_K
    for w, cls in _check(tower):
        if cls == "P1":
            total += w.e - 1
        elif cls == "P2":
            total += 2 * (w.e - 1)
    return total


def herbrand_ord(tower: TowerSpec) -> int:
    """ord_p of the Herbrand quotient of Sel(E/L) for a degree-p tower, negated.

    Each ramified P1 place contributes 1 and each P2 place contributes 2.
    """
    if tower.degree != tower.p:
        raise DegreeMismatch(f"Herbrand form needs degree p = {tower.p}, got {tower.degree}")
    total = 0
    for w, cls in _check(tower):
        if cls == "P1" and w.ramified_over_base:
            total += 1
        elif cls == "P2":
            total += 2
    return total


def lambda_via_herbrand(tower: TowerSpec) -> int:
    return tower.p * tower.lambda_K + (tower.p - 1) * herbrand_ord(tower)


# -- congruence ledger ----------------------------------------------------------


@dataclass(frozen=True)
class Corank:
    """A Z_p-corank known exactly or only from below."""

    value: int
    exact: bool = True

    def __post_init__(self):
        if self.value < 0:
            raise InvalidCorank(f"corank must be non-negative, got {self.value}")

    def __str__(self) -> str:
        return str(self.value) if self.exact else f">={self.value}"


@dataclass(frozen=True)
class LedgerPlace:
    label: str
    sigma_1: Corank
    sigma_2: Corank
    over_p: bool = False

    def __post_init__(self):
        if self.over_p:
            raise ValueError(f"Omega_0 place {self.label!r} must not lie above p")


@dataclass
class LambdaLedger:
    p: int
    lambda_1: int
    omega0: list[LedgerPlace] = field(default_factory=list)

    def swapped(self, lambda_2: int) -> "LambdaLedger":
        return LambdaLedger(
            self.p,
            lambda_2,
            [LedgerPlace(v.label, v.sigma_2, v.sigma_1, v.over_p) for v in self.omega0],
        )


@dataclass(frozen=True)
class Bounds:
    """Integer range; None means unbounded on that side."""

    lo: Optional[int]
    hi: Optional[int]

    @property
    def exact(self) -> bool:
        return self.lo is not None and self.lo == self.hi

    def __add__(self, k: int) -> "Bounds":
        return Bounds(
            None if self.lo is None else self.lo + k,
            None if self.hi is None else self.hi + k,
        )

    def __neg__(self) -> "Bounds":
        return Bounds(
            None if self.hi is None else -self.hi,
            None if self.lo is None else -self.lo,
        )

    def describe(self, name: str) -> str:
        if self.exact:
            return f"{name} = {self.lo}"
        if self.hi is None and self.lo is None:
            return f"{name} unbounded"
        if self.hi is None:
            return f"{name} >= {self.lo}"
        if self.lo is None:
            return f"{name} <= {self.hi}"
        return f"{self.lo} <= {name} <= {self.hi}"


def sigma_shift(ledger: LambdaLedger) -> Bounds:
    """Range of sum over Omega_0 of (sigma_1 - sigma_2)."""
    lo: Optional[int] = 0
    hi: Optional[int] = 0
    for v in ledger.omega0:
        d = v.sigma_1.value - v.sigma_2.value
        lo = None if lo is None or not v.sigma_2.exact else lo + d
        hi = None if hi is None or not v.sigma_1.exact else hi + d
    return Bounds(lo, hi)


def lambda_difference(ledger: LambdaLedger) -> Union[int, Bounds]:
    """lambda_2 = lambda_1 + sum_{Omega_0} (sigma_1 - sigma_2).

    Exact coranks give an int; any lower-bound corank gives a Bounds.
    """
    if ledger.lambda_1 < 0:
        raise InvalidCorank("lambda_1 must be non-negative")
    result = sigma_shift(ledger) + ledger.lambda_1
    return result.lo if result.exact else result


def imprimitive_lambda(ledger: LambdaLedger) -> Bounds:
    """The common imprimitive invariant lambda_1 + sum sigma_1."""
    total = ledger.lambda_1 + sum(v.sigma_1.value for v in ledger.omega0)
    exact = all(v.sigma_1.exact for v in ledger.omega0)
    return Bounds(total, total if exact else None)


def sigma_diff_bound(
    reduction_1: str,
    reduction_2: str,
    frobenius_trivial_on_e1: bool,
    finitely_decomposed: bool,
    over_p: bool = False,
) -> int:
    """Lower bound for sigma_1 - sigma_2 at a place where E_1 is good and E_2 is bad.

    With Frobenius trivial on E_1[p] the bound is 1, which is only possible
    when E_2 has split multiplicative reduction there; other reduction
    types for E_2 are rejected.
    """
    if over_p:
        raise ValueError("the corank comparison needs a place not above p")
    if not finitely_decomposed:
        raise DecompositionViolation("v")
    if reduction_1 != "good" or reduction_2 == "good":
        raise ValueError("needs E_1 with good and E_2 with bad reduction at v")
    if reduction_2 not in REDUCTION_TYPES:
        raise ValueError(f"unknown reduction {reduction_2!r}")
    if not frobenius_trivial_on_e1:
        return 0
    if reduction_2 == "additive":
        raise ContradictsLemma("E_2 cannot have additive reduction at v")
    if reduction_2 == "nonsplit_mult":
        raise ContradictsLemma(
            "non-split multiplicative reduction gives equal coranks; "
            "E_2 must be split multiplicative at v"
        )
    return 1


def anticyclotomic_sigma_class(ell: int, splits_in_K: bool, p: int) -> str:
    """Decomposition of a rational prime in the anticyclotomic Z_p-extension."""
    return "finitely_decomposed" if ell == p or splits_in_K else "infinitely_decomposed"


def splits_in_gaussian_field(ell: int) -> bool:
    """Whether the odd prime ell splits in Q(i)."""
    return ell % 4 == 1


def congruence_ledger(primes: list[int], lambda_1: int = 0, p: int = 5) -> LambdaLedger:
    """Ledger for a family member with split multiplicative reduction at the
    primes above each ell (two per ell, all split in Q(i)).

    Every such place gets sigma_1 >= 1 and sigma_2 = 0.
    """
    places = []
    for ell in primes:
        if not splits_in_gaussian_field(ell):
            raise DecompositionViolation(str(ell))
        bound = sigma_diff_bound("good", "split_mult", True, True)
        for conj in ("v", "vbar"):
            places.append(LedgerPlace(f"{conj}|{ell}", Corank(bound, exact=False), Corank(0)))
    return LambdaLedger(p, lambda_1, places)
