"""JSON file formats: instances, allocations, and solver results.

Rationals travel as strings ("7/3", or a decimal literal parsed exactly in
tenths/hundredths — never through binary floats); integers stay integers.
"""

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .core import Allocation, Cost, INFINITY, Instance, load_instance
from .criteria import ConceptReport, DeviationWitness, EnvyWitness, SwapWitness
from .errors import ParseError


def parse_rational(value) -> Fraction:
    """int, "p/q", or decimal string -> exact Fraction."""
    if isinstance(value, bool):
        raise ParseError(f"not a rational: {value!r}")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"not a rational: {value!r}") from exc
    if isinstance(value, float):
        raise ParseError(
            f"refusing float {value!r}: write it as a string to stay exact"
        )
    raise ParseError(f"not a rational: {value!r}")


def rational_to_json(value: Cost):
    """Instance-side serialization: whole numbers stay JSON integers."""
    if value is INFINITY:
        return "inf"
    if value.denominator == 1:
        return int(value)
    return f"{value.numerator}/{value.denominator}"


def cost_string(value: Cost) -> str:
    """Result-side serialization: always an exact string ("17", "5/3", "inf")."""
    if value is INFINITY:
        return "inf"
    return str(value)


def _json_load(path):
    try:
        with open(path) as handle:
            # floats reach us as their literal text, so "2.5" stays 5/2
            return json.load(handle, parse_float=str)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc


@dataclass
class InstanceFile:
    """Raw instance data in the caller's original order."""

    destinations: list
    capacities: list
    labels: Optional[list] = None
    groups: Optional[list] = None

    @classmethod
    def from_json(cls, data) -> "InstanceFile":
        if not isinstance(data, dict):
            raise ParseError("instance file must be a JSON object")
        try:
            destinations = [parse_rational(d) for d in data["destinations"]]
            capacities = [int(q) for q in data["capacities"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"bad instance file: {exc!r}") from exc
        labels = data.get("labels")
        if labels is not None and len(labels) != len(destinations):
            raise ParseError("labels must match destinations one to one")
        groups = data.get("groups")
        if groups is not None:
            if not all(isinstance(g, list) for g in groups):
                raise ParseError("groups must be lists of agent ids")
            groups = [list(map(int, g)) for g in groups]
        return cls(destinations, capacities, labels, groups)

    def to_json(self) -> dict:
        data = {
            "destinations": [rational_to_json(Fraction(d)) for d in self.destinations],
            "capacities": list(self.capacities),
        }
        if self.labels is not None:
            data["labels"] = list(self.labels)
        if self.groups is not None:
            data["groups"] = [list(g) for g in self.groups]
        return data

    def to_instance(self) -> Instance:
        return load_instance(self.destinations, self.capacities)

    def sorted_groups(self, inst: Instance) -> Optional[list]:
        """Groups translated from original ids to sorted agent ids."""
        if self.groups is None:
            return None
        to_sorted = {orig: a for a, orig in enumerate(inst.original_agent_ids, start=1)}
        try:
            return [{to_sorted[orig] for orig in group} for group in self.groups]
        except KeyError as exc:
            raise ParseError(f"group mentions unknown agent {exc}") from exc


def load_instance_file(path) -> InstanceFile:
    return InstanceFile.from_json(_json_load(path))


def load_allocation_file(path, inst: Instance) -> Allocation:
    """{"coalitions": [[original ids...], ...]} -> allocation in sorted ids."""
    data = _json_load(path)
    if not isinstance(data, dict) or "coalitions" not in data:
        raise ParseError("allocation file needs a 'coalitions' list")
    to_sorted = {orig: a for a, orig in enumerate(inst.original_agent_ids, start=1)}
    coalitions = []
    for raw in data["coalitions"]:
        members = set()
        for orig in raw:
            if int(orig) not in to_sorted:
                raise ParseError(f"unknown agent id {orig}")
            members.add(to_sorted[int(orig)])
        coalitions.append(frozenset(members))
    return tuple(coalitions)


def allocation_to_original_ids(inst: Instance, alloc: Allocation) -> list:
    return [
        sorted(inst.original_agent_ids[a - 1] for a in coalition)
        for coalition in alloc
    ]


def _witness_to_json(inst: Instance, witness) -> dict:
    orig = lambda a: inst.original_agent_ids[a - 1]
    taxi = lambda i: inst.original_taxi_ids[i - 1] if i <= inst.k else i
    if isinstance(witness, EnvyWitness):
        return {
            "kind": "envy",
            "envier": orig(witness.envier),
            "envied": orig(witness.envied),
            "envier_cost": cost_string(witness.envier_cost),
            "replaced_cost": cost_string(witness.replaced_cost),
        }
    if isinstance(witness, DeviationWitness):
        return {
            "kind": "deviation",
            "agent": orig(witness.agent),
            "from_taxi": taxi(witness.from_taxi),
            "to_taxi": taxi(witness.to_taxi),
            "old_cost": cost_string(witness.old_cost),
            "new_cost": cost_string(witness.new_cost),
        }
    if isinstance(witness, SwapWitness):
        return {
            "kind": "swap",
            "agent_a": orig(witness.agent_a),
            "agent_b": orig(witness.agent_b),
            "a_cost": cost_string(witness.a_cost),
            "a_replaced_cost": cost_string(witness.a_replaced_cost),
            "b_cost": cost_string(witness.b_cost),
            "b_replaced_cost": cost_string(witness.b_replaced_cost),
        }
    raise TypeError(f"unknown witness {witness!r}")


@dataclass
class ResultFile:
    """Everything a solver or checker run reports."""

    solver: str
    status: str  # "allocation", "none-exists", or "unknown"
    allocation: Optional[list] = None  # original agent ids
    agent_costs: Optional[dict] = None  # original id -> exact cost string
    total_cost: Optional[str] = None
    concepts: dict = field(default_factory=dict)
    witnesses: dict = field(default_factory=dict)
    wall_time_ms: float = 0.0

    def to_json(self) -> dict:
        data = {
            "solver": self.solver,
            "status": self.status,
            "allocation": self.allocation,
            "agent_costs": self.agent_costs,
            "total_cost": self.total_cost,
            "concepts": self.concepts,
            "witnesses": self.witnesses,
            "wall_time_ms": self.wall_time_ms,
        }
        return data

    @classmethod
    def from_json(cls, data) -> "ResultFile":
        if not isinstance(data, dict):
            raise ParseError("result file must be a JSON object")
        try:
            return cls(
                solver=data["solver"],
                status=data["status"],
                allocation=data.get("allocation"),
                agent_costs=data.get("agent_costs"),
                total_cost=data.get("total_cost"),
                concepts=data.get("concepts", {}),
                witnesses=data.get("witnesses", {}),
                wall_time_ms=data.get("wall_time_ms", 0.0),
            )
        except KeyError as exc:
            raise ParseError(f"result file missing {exc}") from exc


def build_result(
    inst: Instance,
    solver: str,
    alloc: Optional[Allocation],
    report: Optional[ConceptReport] = None,
    status: Optional[str] = None,
    wall_time_ms: float = 0.0,
) -> ResultFile:
    from .core import allocation_costs, total_cost as _total

    result = ResultFile(
        solver=solver,
        status=status or ("allocation" if alloc is not None else "none-exists"),
        wall_time_ms=wall_time_ms,
    )
    if alloc is not None:
        result.allocation = allocation_to_original_ids(inst, alloc)
        costs = allocation_costs(inst, alloc)
        result.agent_costs = {
            str(inst.original_agent_ids[a - 1]): cost_string(c)
            for a, c in costs.items()
        }
        result.total_cost = cost_string(_total(inst, alloc))
    if report is not None:
        result.concepts = {
            name: flag for name, flag in vars(report).items()
            if name != "witnesses" and flag is not None
        }
        result.witnesses = {
            name: _witness_to_json(inst, w) for name, w in report.witnesses.items()
        }
    return result


def verify_result(inst: Instance, result: ResultFile) -> bool:
    """Re-derive the reported costs from the allocation through the cost
    engine; True when everything matches exactly."""
    from .core import allocation_costs, total_cost as _total

    if result.allocation is None:
        return result.agent_costs is None
    to_sorted = {orig: a for a, orig in enumerate(inst.original_agent_ids, start=1)}
    alloc = tuple(
        frozenset(to_sorted[orig] for orig in coalition)
        for coalition in result.allocation
    )
    costs = allocation_costs(inst, alloc)
    expected = {
        str(inst.original_agent_ids[a - 1]): cost_string(c)
        for a, c in costs.items()
    }
    if expected != result.agent_costs:
        return False
    return result.total_cost == cost_string(_total(inst, alloc))


def write_json(path, payload: dict) -> None:
    with open(path, "w") as handle:
        json.dump(payload, handle, indent=2, sort_keys=True)
        handle.write("\n")
