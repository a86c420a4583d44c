"""
JSON codecs. Rationals are written as "p/q" strings and read from either
integers or "p/q" strings; floats are rejected.
"""

from __future__ import annotations

import json
import re
from dataclasses import asdict
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, Optional, Union

from .construction import VerifierReport
from .decision import Decision
from .errors import InvalidInstanceError
from .families import Fixture
from .model import Allocation, Instance, Valuation
from .oracle import LedgerSnapshot

_RATIONAL = re.compile(r"^\s*(-?\d+)\s*(?:/\s*(\d+)\s*)?$")


def parse_rational(value: Union[int, str]) -> Fraction:
    if isinstance(value, bool):
        raise InvalidInstanceError(f"expected a rational, got {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        match = _RATIONAL.match(value)
        if match:
            numerator, denominator = match.groups()
            if denominator is not None and int(denominator) == 0:
                raise InvalidInstanceError(f"zero denominator in {value!r}")
            return Fraction(int(numerator), int(denominator or 1))
    raise InvalidInstanceError(f"expected an integer or a 'p/q' string, got {value!r}")


def format_rational(value: Fraction) -> str:
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def instance_from_dict(data: Dict[str, Any]) -> Instance:
    try:
        agents = data["agents"]
    except (KeyError, TypeError):
        raise InvalidInstanceError("instance JSON needs an 'agents' list") from None
    if not isinstance(agents, list) or not agents:
        raise InvalidInstanceError("'agents' must be a non-empty list")
    valuations, names = [], []
    for index, agent in enumerate(agents):
        try:
            segments = agent["segments"]
            widths = [parse_rational(s["width"]) for s in segments]
            values = [parse_rational(s["value"]) for s in segments]
        except (KeyError, TypeError):
            raise InvalidInstanceError(
                f"agent {index} needs 'segments' with 'width' and 'value'"
            ) from None
        valuations.append(Valuation.from_weights(values, widths))
        names.append(str(agent.get("name", f"agent{index}")))
    entitlements = data.get("entitlements")
    if entitlements is None:
        return Instance.with_equal_entitlements(valuations, names)
    if not isinstance(entitlements, list):
        raise InvalidInstanceError("'entitlements' must be a list")
    return Instance(tuple(valuations), tuple(parse_rational(w) for w in entitlements),
                    tuple(names))


def instance_to_dict(instance: Instance) -> Dict[str, Any]:
    return {
        "agents": [
            {
                "name": name,
                "segments": [
                    {"width": format_rational(s.width), "value": format_rational(s.value)}
                    for s in valuation.segments
                ],
            }
            for name, valuation in zip(instance.names, instance.valuations)
        ],
        "entitlements": [format_rational(w) for w in instance.entitlements],
    }


def fixture_to_dict(fixture: Fixture) -> Dict[str, Any]:
    """Instance JSON preceded by a provenance header naming the family and its parameters."""
    params = {}
    for key, value in asdict(fixture.params).items():
        if key == "family" or value is None:
            continue
        params[key] = format_rational(value) if isinstance(value, Fraction) else value
    if "perturb_target" in params:
        params["perturb_target"] = list(params["perturb_target"])
    return {"family": fixture.params.family, "params": params,
            **instance_to_dict(fixture.instance)}


def allocation_from_dict(data: Dict[str, Any]) -> Allocation:
    try:
        cuts = [parse_rational(c) for c in data["cuts"]]
        order = data["order"]
    except (KeyError, TypeError):
        raise InvalidInstanceError("allocation JSON needs 'cuts' and 'order'") from None
    if not isinstance(order, list) or not all(
        isinstance(i, int) and not isinstance(i, bool) for i in order
    ):
        raise InvalidInstanceError("'order' must be a list of agent indices")
    return Allocation(tuple(cuts), tuple(order))


def allocation_to_dict(allocation: Allocation,
                       report: Optional[VerifierReport] = None) -> Dict[str, Any]:
    data = {
        "cuts": [format_rational(c) for c in allocation.cuts],
        "order": list(allocation.order),
    }
    if report is not None and report.values:
        # values listed in piece order, matching "order"
        data["values"] = [format_rational(report.values[i]) for i in allocation.order]
    return data


def ledger_to_dict(snapshot: LedgerSnapshot) -> Dict[str, Any]:
    return {
        "rows": snapshot.rows(),
        "evals": snapshot.evals,
        "marks": snapshot.marks,
        "total": snapshot.total(),
    }


def decision_to_dict(decision: Decision) -> Dict[str, Any]:
    data: Dict[str, Any] = {
        "exists": decision.exists,
        "mode": decision.mode,
        "algorithm": decision.algorithm,
    }
    if decision.z is not None:
        data["z"] = format_rational(decision.z)
    if decision.order is not None:
        data["permutation"] = list(decision.order)
    if decision.marks is not None:
        data["marks"] = [format_rational(x) for x in decision.marks]
    if decision.disagreement is not None:
        t, i, j = decision.disagreement
        data["disagreement"] = {"t": t, "agents": [i, j]}
    data["queries"] = ledger_to_dict(decision.queries)
    return data


def report_to_dict(report: VerifierReport) -> Dict[str, Any]:
    data = {
        "mode": report.mode,
        "connected": report.connected,
        "covers_cake": report.covers_cake,
        "satisfied": report.satisfied,
        "values": [format_rational(v) for v in report.values],
        "targets": [format_rational(t) for t in report.targets],
        "strict": list(report.strict),
        "weak": list(report.weak),
    }
    if report.z is not None:
        data["z"] = format_rational(report.z)
    return data


def load_json(path: Union[str, Path]) -> Any:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return json.load(handle)
    except UnicodeDecodeError as e:
        raise InvalidInstanceError(f"{path} is not UTF-8 text: {e}") from e


def dumps(data: Any) -> str:
    return json.dumps(data, indent=2) + "\n"


def load_instance(path: Union[str, Path]) -> Instance:
    return instance_from_dict(load_json(path))


def load_allocation(path: Union[str, Path]) -> Allocation:
    return allocation_from_dict(load_json(path))
