"""Readers for tower-spec and ledger files.

Both are YAML documents (JSON is accepted, being a subset). Unknown keys
are rejected everywhere.

Tower spec::

    p: 5
    degree: 5
    lambda_K: 0
    assumptions:
      mu_zero_cotorsion: true
      good_ordinary_and_no_CM_or_no_p_torsion: true
      p_ramified_in_tower: true
    places:
      - label: w1
        above: v1                 # optional, display grouping only
        over_p: false
        e: 5
        reduction: split_mult     # good | split_mult | nonsplit_mult | additive
        ramified_over_base: true  # optional; must agree with e > 1
        has_p_torsion_locally: false
        finitely_decomposed: true

Ledger::

    p: 5
    lambda_1: 0
    omega0:
      - label: v|63241
        sigma_1: {at_least: 1}    # or a plain integer for an exact corank
        sigma_2: 0
"""

from __future__ import annotations

from pathlib import Path
from typing import Any, Union

import yaml

from .errors import InvalidCorank, SchemaError
from .iwasawa import ASSUMPTIONS, Corank, LambdaLedger, LedgerPlace, PlaceDatum, TowerSpec

_PLACE_REQUIRED = {"label", "e", "reduction", "over_p", "has_p_torsion_locally", "finitely_decomposed"}
_PLACE_OPTIONAL = {"above", "ramified_over_base"}


def _keys(d: Any, required: set, optional: set, where: str) -> dict:
    if not isinstance(d, dict):
        raise SchemaError(f"{where}: expected a mapping")
    unknown = set(d) - required - optional
    if unknown:
        raise SchemaError(f"{where}: unknown keys {sorted(unknown)}")
    missing = required - set(d)
    if missing:
        raise SchemaError(f"{where}: missing keys {sorted(missing)}")
    return d


def _int(v: Any, where: str) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        raise SchemaError(f"{where}: expected an integer, got {v!r}")
    return v


def _bool(v: Any, where: str) -> bool:
    if not isinstance(v, bool):
        raise SchemaError(f"{where}: expected true/false, got {v!r}")
    return v


def _load(source: Union[str, Path]) -> Any:
    text = Path(source).read_text() if isinstance(source, Path) else source
    try:
        return yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise SchemaError(f"not valid YAML/JSON: {exc}") from None


def tower_from_dict(doc: Any) -> TowerSpec:
    _keys(doc, {"p", "degree", "lambda_K", "assumptions", "places"}, set(), "tower")
    flags = _keys(doc["assumptions"], set(ASSUMPTIONS), set(), "assumptions")
    if not isinstance(doc["places"], list):
        raise SchemaError("places: expected a list")
    places = []
    for i, raw in enumerate(doc["places"]):
        where = f"places[{i}]"
        _keys(raw, _PLACE_REQUIRED, _PLACE_OPTIONAL, where)
        e = _int(raw["e"], f"{where}.e")
        if "ramified_over_base" in raw and _bool(raw["ramified_over_base"], where) != (e > 1):
            raise SchemaError(f"{where}: ramified_over_base disagrees with e = {e}")
        try:
            places.append(
                PlaceDatum(
                    label=str(raw["label"]),
                    e=e,
                    reduction=raw["reduction"],
                    over_p=_bool(raw["over_p"], f"{where}.over_p"),
                    has_p_torsion_locally=_bool(
                        raw["has_p_torsion_locally"], f"{where}.has_p_torsion_locally"
                    ),
                    finitely_decomposed=_bool(
                        raw["finitely_decomposed"], f"{where}.finitely_decomposed"
                    ),
                    above=None if raw.get("above") is None else str(raw["above"]),
                )
            )
        except ValueError as exc:
            raise SchemaError(str(exc)) from None
    try:
        return TowerSpec(
            p=_int(doc["p"], "p"),
            degree=_int(doc["degree"], "degree"),
            lambda_K=_int(doc["lambda_K"], "lambda_K"),
            places=places,
            assumptions={k: _bool(flags[k], f"assumptions.{k}") for k in ASSUMPTIONS},
        )
    except ValueError as exc:
        raise SchemaError(str(exc)) from None


def load_tower(source: Union[str, Path]) -> TowerSpec:
    return tower_from_dict(_load(source))


def _corank(v: Any, where: str) -> Corank:
    if isinstance(v, dict):
        _keys(v, {"at_least"}, set(), where)
        value, exact = _int(v["at_least"], where), False
    else:
        value, exact = _int(v, where), True
    if value < 0:
        raise InvalidCorank(f"{where}: corank must be non-negative, got {value}")
    return Corank(value, exact)


def ledger_from_dict(doc: Any) -> LambdaLedger:
    _keys(doc, {"p", "lambda_1", "omega0"}, set(), "ledger")
    if not isinstance(doc["omega0"], list):
        raise SchemaError("omega0: expected a list")
    places = []
    for i, raw in enumerate(doc["omega0"]):
        where = f"omega0[{i}]"
        _keys(raw, {"label", "sigma_1", "sigma_2"}, {"over_p"}, where)
        try:
            places.append(
                LedgerPlace(
                    label=str(raw["label"]),
                    sigma_1=_corank(raw["sigma_1"], f"{where}.sigma_1"),
                    sigma_2=_corank(raw["sigma_2"], f"{where}.sigma_2"),
                    over_p=_bool(raw.get("over_p", False), f"{where}.over_p"),
                )
            )
        except InvalidCorank:
            raise
        except ValueError as exc:
            raise SchemaError(str(exc)) from None
    lambda_1 = _int(doc["lambda_1"], "lambda_1")
    if lambda_1 < 0:
        raise InvalidCorank("lambda_1 must be non-negative")
    return LambdaLedger(p=_int(doc["p"], "p"), lambda_1=lambda_1, omega0=places)


def load_ledger(source: Union[str, Path]) -> LambdaLedger:
    return ledger_from_dict(_load(source))


def ledger_to_dict(ledger: LambdaLedger) -> dict:
    def cor(c: Corank):
        return c.value if c.exact else {"at_least": c.value}

    return {
        "p": ledger.p,
        "lambda_1": ledger.lambda_1,
        "omega0": [
            {"label": v.label, "sigma_1": cor(v.sigma_1), "sigma_2": cor(v.sigma_2)}
            for v in ledger.omega0
        ],
    }
