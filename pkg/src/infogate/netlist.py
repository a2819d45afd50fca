"""Combinational netlists and their exact information flow.

A netlist is simulated over every primary-input assignment, which makes all
per-net statistics exact: net entropies, per-instance losses (joint input
entropy minus output entropy), the network loss H(X) - H(outputs), the
logical work (sum of per-instance losses), and the information potential
(minimum logical work over candidate netlists computing the same function).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import ConfigError, ParseError, SemanticError, VitalityUndefinedError
from .gates import Gate, GateLibrary
from .metrics import Bits, InputDistribution, entropy, function_entropy, input_entropy
from .truthtable import N_MAX, TruthTable

ISENTROPIC_TOL = 1e-9

MAX_ENUM_INPUTS = 3
MAX_ENUM_GATES = 4


@dataclass(frozen=True)
class GateInstance:
    gate: str
    inputs: tuple[str, ...]
    output: str


@dataclass(frozen=True)
class Netlist:
    """Acyclic single-driver gate network.

    Net names are shared between primary inputs and instance outputs; primary
    outputs may reference any net, including an input directly (a wire).
    """

    name: str
    primary_inputs: tuple[str, ...]
    instances: tuple[GateInstance, ...]
    primary_outputs: tuple[str, ...]

    def __post_init__(self):
        if not self.primary_inputs:
            raise SemanticError(f"model {self.name}: no primary inputs")
        if not self.primary_outputs:
            raise SemanticError(f"model {self.name}: no primary outputs")
        drivers = set(self.primary_inputs)
        if len(drivers) != len(self.primary_inputs):
            raise SemanticError(f"model {self.name}: duplicate primary input")
        for inst in self.instances:
            if inst.output in drivers:
                raise SemanticError(f"model {self.name}: net {inst.output} multiply driven")
            drivers.add(inst.output)
        known = drivers
        for inst in self.instances:
            for net in inst.inputs:
                if net not in known:
                    raise SemanticError(
                        f"model {self.name}: instance input {net} is not driven by anything"
                    )
        for net in self.primary_outputs:
            if net not in known:
                raise SemanticError(f"model {self.name}: primary output {net} does not exist")
        self.topo_order()  # raises on a combinational cycle

    @property
    def nets(self) -> tuple[str, ...]:
        return self.primary_inputs + tuple(inst.output for inst in self.instances)

    def topo_order(self) -> tuple[GateInstance, ...]:
        """Instances ordered so every input is driven earlier; cycle -> error."""
        ready = set(self.primary_inputs)
        order: list[GateInstance] = []
        pending = list(self.instances)
        while pending:
            progress = [inst for inst in pending if all(net in ready for net in inst.inputs)]
            if not progress:
                raise SemanticError(f"model {self.name}: combinational cycle")
            for inst in progress:
                order.append(inst)
                ready.add(inst.output)
            placed = set(id(inst) for inst in progress)
            pending = [inst for inst in pending if id(inst) not in placed]
        return tuple(order)


def parse_blif(text: str, lib: GateLibrary) -> Netlist:
    """Parse the BLIF subset: .model/.inputs/.outputs/.gate/.end, '#' comments.

    Each .gate line is LIBNAME pin=net ... O=net with the input pins named by
    the library gate's own input ordering and the output pin fixed as O.
    """
    name = None
    inputs: list[str] = []
    outputs: list[str] = []
    instances: list[GateInstance] = []
    saw_end = False
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if saw_end:
            raise ParseError(f"content after .end: {line!r}", line=line_no)
        fields = line.split()
        if fields[0] == ".model":
            if name is not None:
                raise ParseError("duplicate .model", line=line_no)
            if len(fields) != 2:
                raise ParseError(".model needs a name", line=line_no)
            name = fields[1]
        elif fields[0] == ".inputs":
            inputs.extend(fields[1:])
        elif fields[0] == ".outputs":
            outputs.extend(fields[1:])
        elif fields[0] == ".gate":
            if len(fields) < 3:
                raise ParseError(".gate needs a library name and pin bindings", line=line_no)
            gate_name = fields[1]
            if gate_name not in lib:
                raise SemanticError(f"line {line_no}: unknown gate {gate_name}")
            gate = lib.get(gate_name)
            bindings = {}
            for token in fields[2:]:
                pin, eq, net = token.partition("=")
                if not eq or not pin or not net:
                    raise ParseError(f"malformed pin binding {token!r}", line=line_no)
                if pin in bindings:
                    raise ParseError(f"pin {pin} bound twice", line=line_no)
                bindings[pin] = net
            expected = set(gate.pins) | {"O"}
            if set(bindings) != expected:
                raise ParseError(
                    f"gate {gate_name} needs pins {sorted(expected)}, got {sorted(bindings)}",
                    line=line_no,
                )
            instances.append(GateInstance(
                gate=gate_name,
                inputs=tuple(bindings[p] for p in gate.pins),
                output=bindings["O"],
            ))
        elif fields[0] == ".end":
            saw_end = True
        else:
            raise ParseError(f"unsupported directive {fields[0]}", line=line_no)
    if name is None:
        raise ParseError("missing .model")
    if not saw_end:
        raise ParseError("missing .end")
    return Netlist(name, tuple(inputs), tuple(instances), tuple(outputs))


def to_blif(nw: Netlist, lib: GateLibrary) -> str:
    lines = [f".model {nw.name}",
             ".inputs " + " ".join(nw.primary_inputs),
             ".outputs " + " ".join(nw.primary_outputs)]
    for inst in nw.instances:
        pins = lib.get(inst.gate).pins
        bound = " ".join(f"{p}={net}" for p, net in zip(pins, inst.inputs))
        lines.append(f".gate {inst.gate} {bound} O={inst.output}".replace("  ", " "))
    lines.append(".end")
    return "\n".join(lines) + "\n"


def simulate_exact(nw: Netlist, lib: GateLibrary,
                   dist: InputDistribution | None = None) -> dict[str, np.ndarray]:
    """Every net's bit value on all 2^n primary-input assignments."""
    n = len(nw.primary_inputs)
    if n > N_MAX:
        raise ConfigError(f"netlist has {n} primary inputs, above the {N_MAX} enumeration cap")
    if dist is not None:
        dist.assignment_probs(n)  # arity check only
    rows = 1 << n
    idx = np.arange(rows)
    tables: dict[str, np.ndarray] = {}
    for pos, net in enumerate(nw.primary_inputs):
        tables[net] = ((idx >> (n - 1 - pos)) & 1).astype(np.uint8)
    for inst in nw.topo_order():
        gate = lib.get(inst.gate)
        k = gate.table.n
        gidx = np.zeros(rows, dtype=np.int64)
        for j, net in enumerate(inst.inputs):
            gidx |= tables[net].astype(np.int64) << (k - 1 - j)
        tables[inst.output] = gate.table.columns[0][gidx]
    return tables


def function_of(nw: Netlist, lib: GateLibrary) -> TruthTable:
    """The Boolean function the netlist computes, outputs renamed f1..fm."""
    tables = simulate_exact(nw, lib)
    cols = tuple(tables[net] for net in nw.primary_outputs)
    out_names = tuple(f"f{j}" for j in range(1, len(cols) + 1))
    return TruthTable(nw.primary_inputs, out_names, cols)


def _joint_entropy(columns: Sequence[np.ndarray], probs: np.ndarray) -> Bits:
    k = len(columns)
    ids = np.zeros(probs.shape[0], dtype=np.int64)
    for j, col in enumerate(columns):
        ids |= col.astype(np.int64) << (k - 1 - j)
    return entropy(np.bincount(ids, weights=probs, minlength=1 << k))


def network_loss(nw: Netlist, lib: GateLibrary, dist: InputDistribution) -> Bits:
    """H(X) minus the joint entropy of the primary-output pattern."""
    n = len(nw.primary_inputs)
    probs = dist.assignment_probs(n)
    tables = simulate_exact(nw, lib)
    h_out = _joint_entropy([tables[net] for net in nw.primary_outputs], probs)
    return input_entropy(dist, n) - h_out


def logical_work(nw: Netlist, lib: GateLibrary, dist: InputDistribution) -> Bits:
    """Sum over instances of joint input entropy minus output entropy."""
    n = len(nw.primary_inputs)
    probs = dist.assignment_probs(n)
    tables = simulate_exact(nw, lib)
    total = 0.0
    for inst in nw.instances:
        h_in = _joint_entropy([tables[net] for net in inst.inputs], probs)
        h_out = _joint_entropy([tables[inst.output]], probs)
        total += h_in - h_out
    return total


@dataclass(frozen=True)
class NetStats:
    net: str
    entropy: Bits
    table: np.ndarray


@dataclass(frozen=True)
class InstanceStats:
    index: int
    gate: str
    output: str
    input_entropy: Bits
    output_entropy: Bits
    i_gate: Bits


@dataclass(frozen=True)
class FlowReport:
    nets: tuple[NetStats, ...]
    instances: tuple[InstanceStats, ...]
    h_inputs: Bits
    i_nw: Bits
    logical_work: Bits
    isentropic: bool
    vitality: float | None = None


def flow_report(nw: Netlist, lib: GateLibrary, dist: InputDistribution,
                vitality_value: float | None = None) -> FlowReport:
    n = len(nw.primary_inputs)
    probs = dist.assignment_probs(n)
    tables = simulate_exact(nw, lib)
    net_stats = tuple(
        NetStats(net, _joint_entropy([tables[net]], probs), tables[net]) for net in nw.nets
    )
    inst_stats = []
    work = 0.0
    for i, inst in enumerate(nw.instances):
        h_in = _joint_entropy([tables[net] for net in inst.inputs], probs)
        h_out = _joint_entropy([tables[inst.output]], probs)
        inst_stats.append(InstanceStats(i, inst.gate, inst.output, h_in, h_out, h_in - h_out))
        work += h_in - h_out
    h_x = input_entropy(dist, n)
    h_out_joint = _joint_entropy([tables[net] for net in nw.primary_outputs], probs)
    i_nw = h_x - h_out_joint
    return FlowReport(
        nets=net_stats,
        instances=tuple(inst_stats),
        h_inputs=h_x,
        i_nw=i_nw,
        logical_work=work,
        isentropic=abs(i_nw) <= ISENTROPIC_TOL,
        vitality=vitality_value,
    )


@dataclass(frozen=True)
class PotentialResult:
    """Best logical work found over a finite candidate set.

    exhaustive is True only when the candidate set provably covered every
    netlist within the enumeration bounds; otherwise min_work is just an
    upper bound on the true infimum.
    """

    min_work: Bits
    witness: Netlist
    candidates_examined: int
    exhaustive: bool


def information_potential(f: TruthTable, candidates: Iterable[Netlist], lib: GateLibrary,
                          dist: InputDistribution, *, exhaustive: bool = False) -> PotentialResult:
    """Minimum logical work over candidates that implement f (checked exactly).

    Candidates are matched to f positionally: candidate input i corresponds to
    f input i.  Ties keep the earliest candidate.
    """
    best: tuple[Bits, Netlist] | None = None
    examined = 0
    for nw in candidates:
        examined += 1
        got = function_of(nw, lib)
        if len(nw.primary_inputs) != f.n or got.m != f.m or any(
            not np.array_equal(a, b) for a, b in zip(got.columns, f.columns)
        ):
            raise SemanticError(f"candidate {nw.name} does not implement the target function")
        work = logical_work(nw, lib, dist)
        if best is None or work < best[0]:
            best = (work, nw)
    if best is None:
        raise ValueError("empty candidate set")
    return PotentialResult(best[0], best[1], examined, exhaustive)


def vitality(f: TruthTable, potential: PotentialResult, dist: InputDistribution) -> float:
    """Information potential per output bit, min_work / H(f)."""
    h_f = function_entropy(f, dist)
    if h_f <= 0.0:
        raise VitalityUndefinedError("vitality undefined for zero-entropy function")
    return potential.min_work / h_f


def _input_choices(gate: Gate, nets: Sequence[str]) -> Iterable[tuple[str, ...]]:
    # Symmetric gates accept any input permutation without changing either the
    # computed net or the instance loss, so unordered choices suffice.
    k = gate.table.n
    if k > 1 and _is_symmetric(gate):
        return itertools.combinations_with_replacement(nets, k)
    return itertools.product(nets, repeat=k)


def _is_symmetric(gate: Gate) -> bool:
    col = gate.table.columns[0]
    n = gate.table.n
    for perm in itertools.permutations(range(n)):
        if perm == tuple(range(n)):
            continue
        if not np.array_equal(col, _permute_inputs(col, n, perm)):
            return False
    return True


def _permute_inputs(col: np.ndarray, n: int, perm: Sequence[int]) -> np.ndarray:
    rows = 1 << n
    idx = np.arange(rows)
    src = np.zeros(rows, dtype=np.int64)
    for new_pos in range(n):
        bit = (idx >> (n - 1 - new_pos)) & 1
        src |= bit << (n - 1 - perm[new_pos])
    return col[src]


def enumerate_implementations(f: TruthTable, lib: GateLibrary, max_gates: int = MAX_ENUM_GATES
                              ) -> list[Netlist]:
    """All netlists of at most max_gates library instances that compute f.

    Exhaustive up to net naming and input order on symmetric gates; intended
    for small searches only (f.n <= 3, max_gates <= 4).
    """
    if f.m != 1:
        raise ConfigError("enumeration supports single-output functions only")
    if f.n > MAX_ENUM_INPUTS:
        raise ConfigError(f"enumeration capped at {MAX_ENUM_INPUTS} inputs")
    if not 0 <= max_gates <= MAX_ENUM_GATES:
        raise ConfigError(f"enumeration capped at {MAX_ENUM_GATES} gates")

    target = f.columns[0]
    found: list[Netlist] = []
    prefix = "g"
    while any(name.startswith(prefix) for name in f.input_names):
        prefix += "_"

    def emit(instances: tuple[GateInstance, ...]):
        nets = f.input_names + tuple(inst.output for inst in instances)
        nw = Netlist(f"cand{len(found)}", f.input_names, instances, (nets[0],))
        tables = simulate_exact(nw, lib)
        for net in nets:
            if np.array_equal(tables[net], target):
                found.append(Netlist(
                    f"cand{len(found)}", f.input_names, instances, (net,)
                ))

    def extend(instances: tuple[GateInstance, ...]):
        emit(instances)
        if len(instances) == max_gates:
            return
        nets = f.input_names + tuple(inst.output for inst in instances)
        out = f"{prefix}{len(instances) + 1}"
        for gate in lib.gates:
            for chosen in _input_choices(gate, nets):
                extend(instances + (GateInstance(gate.name, tuple(chosen), out),))

    extend(())
    return found
