"""Gate libraries, per-gate information reports, and geometry capacity.

The capacity of a k x k geometry is modelled as M(k) times the library's
strongest per-gate measure rounded to two decimals; M(2) = 3 and
M(3) = 5.25 are the built-in multipliers and other sides must be supplied
explicitly.  The rounding step is part of the model, so both the rounded
and raw products are exposed.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Mapping, Sequence

from .errors import ConfigError, ParseError
from .metrics import Bits, InputDistribution, conditional_entropy, function_entropy, \
    input_entropy, mutual_information
from .truthtable import TruthTable

GATE_MAX_INPUTS = 4

DEFAULT_GEOMETRY_MULTIPLIERS: dict[int, float] = {2: 3.0, 3: 5.25}


@dataclass(frozen=True)
class Gate:
    """A named single-output primitive."""

    name: str
    table: TruthTable

    def __post_init__(self):
        if self.table.m != 1:
            raise ValueError(f"gate {self.name} must have exactly one output")
        if not 1 <= self.table.n <= GATE_MAX_INPUTS:
            raise ValueError(f"gate {self.name} arity outside 1..{GATE_MAX_INPUTS}")

    @property
    def pins(self) -> tuple[str, ...]:
        return self.table.input_names


@dataclass(frozen=True)
class GateLibrary:
    gates: tuple[Gate, ...]

    def __post_init__(self):
        if not self.gates:
            raise ValueError("gate library is empty")
        names = [g.name for g in self.gates]
        if len(set(names)) != len(names):
            raise ValueError("duplicate gate name in library")

    def get(self, name: str) -> Gate:
        for g in self.gates:
            if g.name == name:
                return g
        raise KeyError(name)

    def __contains__(self, name: str) -> bool:
        return any(g.name == name for g in self.gates)

    def subset(self, names: Sequence[str]) -> "GateLibrary":
        return GateLibrary(tuple(self.get(n) for n in names))


def _gate(name: str, inputs: Sequence[str], bits: str) -> Gate:
    return Gate(name, TruthTable.from_bitstrings(inputs, (f"{name}_out",), (bits,)))


def default_library() -> GateLibrary:
    """NOT/AND/OR/XOR with pins A, B; columns in assignment-index order."""
    return GateLibrary((
        _gate("NOT", ("A",), "10"),
        _gate("AND", ("A", "B"), "0001"),
        _gate("OR", ("A", "B"), "0111"),
        _gate("XOR", ("A", "B"), "0110"),
    ))


@dataclass(frozen=True)
class InputTransmission:
    """Both readings of per-input transmission: H(f|x) and I(f;x)."""

    input: str
    h_given: Bits
    mutual_info: Bits


@dataclass(frozen=True)
class GateReport:
    gate: str
    h_inputs: Bits
    h_output: Bits
    i_gate: Bits
    transmission: tuple[InputTransmission, ...]


def gate_report(gate: Gate, dist: InputDistribution) -> GateReport:
    """Entropy bookkeeping for one gate under the given input model."""
    h_x = input_entropy(dist, gate.table.n)
    h_f = function_entropy(gate.table, dist)
    per_input = tuple(
        InputTransmission(
            input=name,
            h_given=conditional_entropy(gate.table, [name], dist),
            mutual_info=mutual_information(gate.table, [name], dist),
        )
        for name in gate.pins
    )
    return GateReport(gate.name, h_x, h_f, h_x - h_f, per_input)


def library_max_measure(lib: GateLibrary) -> Bits:
    """Largest per-gate measure H(X) - H(f) in the library, uniform inputs."""
    uniform = InputDistribution.uniform()
    return max(gate_report(g, uniform).i_gate for g in lib.gates)


def round2(x: float) -> float:
    return round(x, 2)


@dataclass(frozen=True)
class GeometrySpec:
    library: GateLibrary
    side: int
    multiplier: float

    def __post_init__(self):
        if self.side < 2:
            raise ValueError("geometry side must be at least 2")
        if not self.multiplier > 0:
            raise ValueError("geometry multiplier must be positive")

    @classmethod
    def for_side(cls, library: GateLibrary, side: int,
                 multipliers: Mapping[int, float] | None = None) -> "GeometrySpec":
        table = dict(DEFAULT_GEOMETRY_MULTIPLIERS)
        if multipliers:
            table.update(multipliers)
        if side not in table:
            raise ConfigError(f"unsupported geometry size {side}x{side}: no multiplier configured")
        return cls(library, side, table[side])


def geometry_capacity(spec: GeometrySpec) -> Bits:
    """Capacity M(k) * round2(max measure); two-decimal rounding is part of the model."""
    return spec.multiplier * round2(library_max_measure(spec.library))


def load_library_json(text: str) -> GateLibrary:
    """Library JSON: [{"name", "inputs", "bits"}, ...], bits in row-index order."""
    try:
        records = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid library JSON: {exc}") from None
    if not isinstance(records, list):
        raise ParseError("library JSON must be a list of gate records")
    gates = []
    for i, rec in enumerate(records):
        try:
            name = rec["name"]
            inputs = rec["inputs"]
            bits = rec["bits"]
        except (TypeError, KeyError) as exc:
            raise ParseError(f"gate record {i}: missing field {exc}") from None
        if len(bits) != 1 << len(inputs):
            raise ParseError(f"gate record {i} ({name}): bits length must be 2^inputs")
        try:
            gates.append(_gate(name, inputs, bits))
        except ValueError as exc:
            raise ParseError(f"gate record {i} ({name}): {exc}") from None
    try:
        return GateLibrary(tuple(gates))
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def library_to_json(lib: GateLibrary) -> str:
    records = [
        {
            "name": g.name,
            "inputs": list(g.pins),
            "bits": "".join(str(int(b)) for b in g.table.columns[0]),
        }
        for g in lib.gates
    ]
    return json.dumps(records, indent=2) + "\n"
