"""Command-line entry point.

Exit codes: 0 ok, 2 configuration error, 3 cost guard, 4 nothing verified,
5 assumption violated.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

from .arith import FactorBudget
from .errors import AssumptionViolation, CostGuard, KidaError, SchemaError
from .formats import ledger_to_dict, load_ledger, load_tower
from .iwasawa import (
    Bounds,
    classify_place,
    herbrand_ord,
    imprimitive_lambda,
    kida_lambda,
    lambda_difference,
    lambda_via_herbrand,
)
from .polymod import roots
from .rsfamily import phi5_mod
from .search import (
    CONDITIONS,
    SEARCH_LIMIT,
    TReport,
    cached_scan,
    candidate_filter,
    find_t,
    verify_t,
)

EXIT_OK, EXIT_CONFIG, EXIT_COST, EXIT_NOT_FOUND, EXIT_ASSUMPTION = 0, 2, 3, 4, 5


@dataclass
class RunConfig:
    command: str
    bound: int = 10**5
    primes: list[int] = field(default_factory=list)
    t: Optional[int] = None
    max_candidates: int = 1
    max_lifts: Optional[int] = None
    rho_budget: int = FactorBudget.rho_iterations
    cache_path: Optional[Path] = None
    output_format: str = "text"
    seed: int = 0
    workers: int = 1
    admissibility: bool = True
    spec: Optional[Path] = None

    def __post_init__(self):
        if self.bound > SEARCH_LIMIT:
            raise CostGuard(f"--bound {self.bound} exceeds {SEARCH_LIMIT}")
        if self.workers < 1:
            raise SchemaError("--workers must be >= 1")
        if self.max_candidates < 0 or self.rho_budget < 0:
            raise SchemaError("budgets must be non-negative")

    @property
    def budget(self) -> FactorBudget:
        return FactorBudget(rho_iterations=self.rho_budget)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="text", dest="output_format")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--workers", type=int, default=1)

    parser = _Parser(prog="kida", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("sieve", parents=[common], help="list primes passing all conditions")
    p.add_argument("--bound", type=int, default=10**5)
    p.add_argument("--cache", type=Path, dest="cache_path")
    p.add_argument("--no-admissibility", action="store_false", dest="admissibility")

    p = sub.add_parser("find-t", parents=[common], help="search and verify parameters t")
    p.add_argument("--primes", type=int, nargs="+", required=True)
    p.add_argument("--check-t", type=int, dest="t")
    p.add_argument("--max-candidates", type=int, default=1)
    p.add_argument("--max-lifts", type=int)
    p.add_argument("--rho-budget", type=int, default=FactorBudget.rho_iterations)
    p.add_argument("--no-admissibility", action="store_false", dest="admissibility")

    p = sub.add_parser("kida", parents=[common], help="evaluate the Kida formula for a tower")
    p.add_argument("spec", type=Path)

    p = sub.add_parser("ledger", parents=[common], help="compare lambda-invariants of congruent curves")
    p.add_argument("spec", type=Path)
    return parser


def _emit(cfg: RunConfig, payload: dict, text: list[str]) -> None:
    if cfg.output_format == "json":
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print("\n".join(text))


def cmd_sieve(cfg: RunConfig) -> int:
    res = cached_scan(cfg.bound, cfg.cache_path, cfg.workers, cfg.admissibility)
    text = [
        f"primes <= {cfg.bound} passing {', '.join(c for c in CONDITIONS if cfg.admissibility or c != 'adm')}:",
        " ".join(map(str, res.primes)) if res.primes else "(none)",
        f"count: {len(res.primes)}",
        f"scanned: {res.scanned}",
        "first failures: " + ", ".join(f"{k}={v}" for k, v in res.failures.items()),
    ]
    _emit(cfg, res.to_dict(), text)
    return EXIT_OK


def render_phi5_factors(ell: int) -> str:
    return " ".join(f"(x + {ell - r})" if r else "x" for r in sorted(roots(phi5_mod(ell)), reverse=True))


def _render_report(rep: TReport) -> list[str]:
    lines = [f"t = {rep.t}: {rep.status}"]
    lines.append("  divisibility: " + ", ".join(f"{ell}|f(t)={ok}" for ell, ok in rep.divisibility.items()))
    if rep.factorization is not None:
        fac = rep.factorization
        parts = [str(q) if e == 1 else f"{q}^{e}" for q, e in fac.factors]
        if fac.cofactor is not None:
            parts.append(f"[{fac.cofactor}]")
        sign = "-" if rep.f_value < 0 else ""
        lines.append(f"  f(t) = {sign}{' x '.join(parts)} ({fac.status})")
    lines.append(f"  all prime factors 1 mod 4: {'unknown' if rep.all_factors_1mod4 is None else rep.all_factors_1mod4}")
    if rep.lambda_bound is not None:
        lines.append(f"  lambda(E_t/K^ac) >= {rep.lambda_bound}")
    return lines


def cmd_find_t(cfg: RunConfig) -> int:
    for ell in cfg.primes:
        if ell <= 5:
            raise SchemaError(f"prime {ell} is not > 5")
        cand = candidate_filter(ell, cfg.admissibility)
        if not cand.accepted:
            raise SchemaError(f"{ell} fails condition {cand.first_failure}")
    if cfg.t is not None:
        reports = [verify_t(cfg.t, cfg.primes, cfg.budget, cfg.seed)]
    else:
        reports = find_t(cfg.primes, cfg.max_candidates, cfg.max_lifts, cfg.budget, cfg.seed)
    text = [f"phi5(X, 1728) = {render_phi5_factors(ell)} in F_{ell}[x]" for ell in cfg.primes]
    for rep in reports:
        text += _render_report(rep)
    if not reports:
        text.append("no candidates examined")
    _emit(cfg, {"reports": [r.to_dict() for r in reports]}, text)
    if cfg.max_candidates and not any(r.status == "verified" for r in reports):
        return EXIT_NOT_FOUND
    return EXIT_OK


def cmd_kida(cfg: RunConfig) -> int:
    tower = load_tower(cfg.spec)
    lam = kida_lambda(tower)
    classes = [(w, classify_place(w, tower.p)) for w in tower.places]
    payload = {
        "lambda_L": lam,
        "places": [
            {"label": w.label, "above": w.above, "e": w.e, "class": c} for w, c in classes
        ],
    }
    text = [f"lambda(E/L_inf) = {lam}"]
    for w, c in classes:
        where = f" (above {w.above})" if w.above else ""
        text.append(f"  {w.label}{where}: e={w.e} {w.reduction} -> {c}")
    if tower.degree == tower.p:
        h = herbrand_ord(tower)
        via = lambda_via_herbrand(tower)
        payload["herbrand"] = {"ord_p": h, "lambda_L": via, "consistent": via == lam}
        text.append(f"herbrand: ord_p = {h}, lambda = {via} ({'consistent' if via == lam else 'MISMATCH'})")
    _emit(cfg, payload, text)
    return EXIT_OK


def cmd_ledger(cfg: RunConfig) -> int:
    ledger = load_ledger(cfg.spec)
    res = lambda_difference(ledger)
    bounds = Bounds(res, res) if isinstance(res, int) else res
    imp = imprimitive_lambda(ledger)
    headline = bounds.describe("lambda_2")
    if all(v.sigma_1 == v.sigma_2 and v.sigma_1.exact for v in ledger.omega0):
        headline = f"lambda_2 = lambda_1 = {ledger.lambda_1}"
    text = [
        headline,
        f"imprimitive: lambda_1 + sum sigma_1 = lambda_2 + sum sigma_2 ({imp.describe('lambda^Omega0')})",
    ]
    payload = {
        "ledger": ledger_to_dict(ledger),
        "lambda_2": {"lo": bounds.lo, "hi": bounds.hi},
        "imprimitive": {"lo": imp.lo, "hi": imp.hi},
    }
    _emit(cfg, payload, text)
    return EXIT_OK


COMMANDS = {"sieve": cmd_sieve, "find-t": cmd_find_t, "kida": cmd_kida, "ledger": cmd_ledger}


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = vars(build_parser().parse_args(argv))
    try:
        cfg = RunConfig(**args)
        return COMMANDS[cfg.command](cfg)
    except CostGuard as exc:
        print(f"kida: cost guard: {exc}", file=sys.stderr)
        return EXIT_COST
    except AssumptionViolation as exc:
        print(f"kida: {exc}", file=sys.stderr)
        return EXIT_ASSUMPTION
    except (KidaError, OSError) as exc:
        print(f"kida: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
