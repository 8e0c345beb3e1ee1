"""Prime search and parameter search for the congruent family.

A prime ell is kept when

  c1   ell = 1 mod 5
  c4   ell = 1 mod 4
  adm  f and f' stay coprime mod ell
  c2   a_ell(y^2 = x^3 - x) = 2 mod 5
  c3   phi5(X, 1728) splits into distinct linear factors mod ell

Survivors are combined by CRT into parameters t with ell | f(t) for each
chosen ell, and each t is checked by factoring f(t).
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Iterator, Optional, Sequence

import numpy as np

from .arith import FactorBudget, FactorReport, crt, factor, small_primes
from .curves import ap_cm
from .iwasawa import congruence_ledger, lambda_difference
from .errors import CostGuard, EmptyInput, OutOfRange, RootNotFound, SchemaError
from .polymod import roots, splits_distinct_linear
from .rsfamily import f_eval, f_mod, is_admissible, phi5_mod

SEARCH_LIMIT = 10**9
SEGMENT_ODDS = 1 << 20
FILTER_VERSION = 1
CONDITIONS = ("c1", "c4", "adm", "c2", "c3")

FAMILY_NOTES = (
    "E_t[5] ~ E[5] and good reduction at 5 hold for every member of the "
    "family and are not re-checked here"
)


def sieve_primes(lo: int, hi: int) -> list[int]:
    """Primes in [lo, hi] by a segmented sieve over odd numbers."""
    if hi > SEARCH_LIMIT:
        raise CostGuard(f"sieve bound {hi} exceeds {SEARCH_LIMIT}")
    lo = max(lo, 2)
    if hi < lo:
        return []
    out = [2] if lo <= 2 <= hi else []
    base = np.array(small_primes(math.isqrt(hi)), dtype=np.int64)[1:]
    start = max(lo, 3) | 1
    while start <= hi:
        stop = min(start + 2 * SEGMENT_ODDS, hi + 1)
        mask = np.ones((stop - start + 1) // 2, dtype=bool)
        for p in base.tolist():
            if p * p >= stop:
                break
            first = max(p * p, -(-start // p) * p)
            if first % 2 == 0:
                first += p
            mask[(first - start) // 2 :: p] = False
        out.extend((start + 2 * np.flatnonzero(mask)).tolist())
        start = stop if stop % 2 else stop + 1
    return out


def trace_of_frobenius(ell: int) -> int:
    """a_ell of y^2 = x^3 - x; zero for ell = 3 mod 4 (supersingular)."""
    return 0 if ell % 4 == 3 else ap_cm(ell)


@dataclass
class PrimeCandidate:
    ell: int
    c1: Optional[bool] = None
    c2: Optional[bool] = None
    c3: Optional[bool] = None
    c4: Optional[bool] = None
    adm: Optional[bool] = None
    first_failure: Optional[str] = None

    @property
    def accepted(self) -> bool:
        return self.first_failure is None


_TESTS = {
    "c1": lambda ell: ell % 5 == 1,
    "c4": lambda ell: ell % 4 == 1,
    "adm": is_admissible,
    "c2": lambda ell: trace_of_frobenius(ell) % 5 == 2,
    "c3": lambda ell: splits_distinct_linear(phi5_mod(ell)),
}


def candidate_filter(
    ell: int, admissibility: bool = True, order: Sequence[str] = CONDITIONS
) -> PrimeCandidate:
    """Evaluate the conditions in ``order``, stopping at the first failure."""
    if ell <= 5:
        raise OutOfRange(f"candidate filter needs ell > 5, got {ell}")
    if sorted(order) != sorted(CONDITIONS):
        raise ValueError(f"order must be a permutation of {CONDITIONS}")
    cand = PrimeCandidate(ell)
    for name in order:
        if name == "adm" and not admissibility:
            continue
        ok = bool(_TESTS[name](ell))
        setattr(cand, name, ok)
        if not ok:
            cand.first_failure = name
            break
    return cand


@dataclass
class ScanResult:
    bound: int
    admissibility: bool
    primes: list[int] = field(default_factory=list)
    scanned: int = 0
    failures: dict[str, int] = field(default_factory=lambda: dict.fromkeys(CONDITIONS, 0))

    def merge(self, other: "ScanResult") -> None:
        self.primes.extend(other.primes)
        self.scanned += other.scanned
        for k, v in other.failures.items():
            self.failures[k] += v

    def to_dict(self) -> dict:
        return asdict(self)


def _scan_range(args) -> ScanResult:
    lo, hi, admissibility, order = args
    res = ScanResult(bound=hi, admissibility=admissibility)
    for ell in sieve_primes(max(lo, 7), hi):
        cand = candidate_filter(ell, admissibility, order)
        res.scanned += 1
        if cand.accepted:
            res.primes.append(ell)
        else:
            res.failures[cand.first_failure] += 1
    return res


def _chunks(bound: int, workers: int) -> list[tuple[int, int]]:
    pieces = max(1, 4 * workers)
    size = max(-(-bound // pieces), 1 << 16)
    return [(lo, min(lo + size - 1, bound)) for lo in range(1, bound + 1, size)]


def scan(
    bound: int,
    workers: int = 1,
    admissibility: bool = True,
    order: Sequence[str] = CONDITIONS,
) -> ScanResult:
    """Run the filter on every prime 5 < ell <= bound.

    The range is cut into fixed chunks and merged in order, so the result
    does not depend on ``workers``.
    """
    if bound > SEARCH_LIMIT:
        raise CostGuard(f"search bound {bound} exceeds {SEARCH_LIMIT}")
    if workers < 1:
        raise ValueError("workers must be >= 1")
    total = ScanResult(bound=bound, admissibility=admissibility)
    if bound < 7:
        return total
    jobs = [(lo, hi, admissibility, tuple(order)) for lo, hi in _chunks(bound, workers)]
    if workers == 1:
        for part in map(_scan_range, jobs):
            total.merge(part)
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for part in pool.map(_scan_range, jobs):
                total.merge(part)
    return total


def find_candidates(bound: int, workers: int = 1, admissibility: bool = True) -> list[int]:
    return scan(bound, workers, admissibility).primes


# -- prime cache ------------------------------------------------------------

_CACHE_MAGIC = "kida-candidates"


def format_cache(result: ScanResult) -> str:
    fields = [
        f"bound={result.bound}",
        f"filter={FILTER_VERSION}",
        f"admissibility={int(result.admissibility)}",
        f"scanned={result.scanned}",
    ] + [f"fail.{k}={v}" for k, v in result.failures.items()]
    lines = [f"# {_CACHE_MAGIC} " + " ".join(fields)]
    lines += [str(p) for p in result.primes]
    return "\n".join(lines) + "\n"


def parse_cache(text: str) -> ScanResult:
    lines = text.splitlines()
    if not lines or not lines[0].startswith(f"# {_CACHE_MAGIC} "):
        raise SchemaError("not a candidate cache file")
    header = dict(kv.split("=", 1) for kv in lines[0].split()[2:])
    try:
        if int(header.pop("filter")) != FILTER_VERSION:
            raise SchemaError("cache written by another filter version")
        res = ScanResult(
            bound=int(header.pop("bound")),
            admissibility=bool(int(header.pop("admissibility"))),
            scanned=int(header.pop("scanned")),
        )
        for k in CONDITIONS:
            res.failures[k] = int(header.pop(f"fail.{k}"))
        res.primes = [int(x) for x in lines[1:] if x.strip()]
    except (KeyError, ValueError) as exc:
        raise SchemaError(f"malformed cache header: {exc}") from None
    if header:
        raise SchemaError(f"unknown cache header keys: {sorted(header)}")
    return res


def cached_scan(
    bound: int,
    cache: Optional[Path],
    workers: int = 1,
    admissibility: bool = True,
) -> ScanResult:
    """``scan`` backed by a flat-file cache, reused only on an exact header match."""
    if cache is not None and cache.exists():
        try:
            hit = parse_cache(cache.read_text())
        except SchemaError:
            hit = None
        if hit and hit.bound == bound and hit.admissibility == admissibility:
            return hit
    result = scan(bound, workers, admissibility)
    if cache is not None:
        cache.parent.mkdir(parents=True, exist_ok=True)
        cache.write_text(format_cache(result))
    return result


# -- parameter search ---------------------------------------------------------


@dataclass
class TReport:
    t: int
    primes: list[int]
    f_value: int
    divisibility: dict[int, bool]
    factorization: Optional[FactorReport] = None
    all_factors_1mod4: Optional[bool] = None
    lambda_bound: Optional[int] = None
    status: str = "unverified"
    notes: str = FAMILY_NOTES

    def to_dict(self) -> dict:
        return {
            "t": str(self.t),
            "primes": list(self.primes),
            "f_value": str(self.f_value),
            "divisibility": {str(k): v for k, v in self.divisibility.items()},
            "factorization": None if self.factorization is None else self.factorization.to_dict(),
            "all_factors_1mod4": self.all_factors_1mod4,
            "lambda_bound": self.lambda_bound,
            "status": self.status,
            "notes": self.notes,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "TReport":
        fac = d["factorization"]
        return cls(
            t=int(d["t"]),
            primes=[int(p) for p in d["primes"]],
            f_value=int(d["f_value"]),
            divisibility={int(k): v for k, v in d["divisibility"].items()},
            factorization=None if fac is None else FactorReport.from_dict(fac),
            all_factors_1mod4=d["all_factors_1mod4"],
            lambda_bound=d["lambda_bound"],
            status=d["status"],
            notes=d["notes"],
        )


def verify_t(
    t: int,
    primes: Sequence[int],
    budget: Optional[FactorBudget] = None,
    seed: int = 0,
) -> TReport:
    """Check ell | f(t) for each ell and that every prime factor of f(t) is 1 mod 4.

    Factoring stops at the first prime factor that is not 1 mod 4. A verified
    t gives the lower bound 2 * len(primes) on the lambda-invariant, two
    places of K = Q(i) lying over each split prime.
    """
    value = f_eval(t)
    report = TReport(
        t=t,
        primes=list(primes),
        f_value=value,
        divisibility={ell: value % ell == 0 for ell in primes},
    )
    if not all(report.divisibility.values()):
        report.status = "rejected"
        return report
    fac = factor(abs(value), budget, seed, stop_when=lambda q: q % 4 != 1)
    report.factorization = fac
    if any(q % 4 != 1 for q in fac.primes()):
        report.all_factors_1mod4 = False
        report.status = "rejected"
    elif fac.status == "complete":
        report.all_factors_1mod4 = True
        # lambda(E/K^ac) = 0 since Sel(E/K^ac) is trivial
        bound = lambda_difference(congruence_ledger(list(primes), lambda_1=0))
        report.lambda_bound = bound if isinstance(bound, int) else bound.lo
        report.status = "verified"
    return report


def f_roots(ell: int, seed: int = 0) -> list[int]:
    return roots(f_mod(ell), seed)


def crt_lifts(primes: Sequence[int], seed: int = 0) -> Iterator[tuple[int, tuple[int, ...], int]]:
    """Yield ``(t, root_tuple, j)`` with ell_i | f(t), in search order.

    Order is by j first, then lexicographically by root tuple, where
    t = r + m*j and r is the least non-negative CRT lift of the tuple.
    """
    if not primes:
        raise EmptyInput("need at least one prime")
    if len(set(primes)) != len(primes):
        raise ValueError("primes must be distinct")
    root_lists = []
    for ell in primes:
        rs = f_roots(ell, seed)
        if not rs:
            raise RootNotFound(ell)
        root_lists.append(rs)
    tuples = list(itertools.product(*root_lists))
    lifts = [crt(list(zip(tup, primes))) for tup in tuples]
    for j in itertools.count():
        for tup, (r, m) in zip(tuples, lifts):
            yield r + m * j, tup, j


def root_tuple_count(primes: Sequence[int], seed: int = 0) -> int:
    return math.prod(len(f_roots(ell, seed)) for ell in primes)


def find_t(
    primes: Sequence[int],
    max_candidates: int = 1,
    max_lifts: Optional[int] = None,
    budget: Optional[FactorBudget] = None,
    seed: int = 0,
) -> list[TReport]:
    """Verify CRT lifts until ``max_candidates`` are verified or ``max_lifts`` are tried.

    ``max_lifts`` defaults to one pass over all root tuples (j = 0).
    Every examined lift is reported, whatever its status.
    """
    if not primes:
        raise EmptyInput("need at least one prime")
    if max_candidates <= 0:
        return []
    if max_lifts is None:
        max_lifts = root_tuple_count(primes, seed)
    out: list[TReport] = []
    verified = 0
    for t, _, _ in itertools.islice(crt_lifts(primes, seed), max_lifts):
        rep = verify_t(t, primes, budget, seed)
        out.append(rep)
        if rep.status == "verified":
            verified += 1
            if verified >= max_candidates:
                break
    return out
