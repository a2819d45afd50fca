"""Complete Boolean functions as explicit truth tables.

A function of n inputs and m outputs is stored as m bit columns of length
2^n.  Rows are indexed by the input assignment read as an unsigned integer
with the *first* input as the most significant bit, so for inputs (x1, x2)
row 0 is x1=0,x2=0 and row 3 is x1=1,x2=1.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import ParseError

# Exact enumeration over 2^n rows stops being desk-scale beyond this.
N_MAX = 20

AssignmentPrefix = Sequence[tuple[str, int]]


def _as_bit_column(values, rows: int) -> np.ndarray:
    col = np.asarray(values, dtype=np.uint8)
    if col.ndim != 1 or col.shape[0] != rows:
        raise ValueError(f"column must hold exactly {rows} entries, got shape {col.shape}")
    if col.max(initial=0) > 1:
        raise ValueError("column entries must be 0 or 1")
    col = col.copy()
    col.flags.writeable = False
    return col


@dataclass(frozen=True, eq=False)
class TruthTable:
    """Immutable n-input, m-output Boolean function.

    columns[j][r] is output j on the assignment with row index r.
    """

    input_names: tuple[str, ...]
    output_names: tuple[str, ...]
    columns: tuple[np.ndarray, ...]

    def __post_init__(self):
        inputs = tuple(self.input_names)
        outputs = tuple(self.output_names)
        n = len(inputs)
        if not 1 <= n <= N_MAX:
            raise ValueError(f"input count {n} outside 1..{N_MAX}")
        if len(outputs) < 1:
            raise ValueError("need at least one output")
        names = inputs + outputs
        if len(set(names)) != len(names):
            raise ValueError("input and output names must be unique and disjoint")
        rows = 1 << n
        cols = tuple(_as_bit_column(c, rows) for c in self.columns)
        if len(cols) != len(outputs):
            raise ValueError("one column required per output")
        object.__setattr__(self, "input_names", inputs)
        object.__setattr__(self, "output_names", outputs)
        object.__setattr__(self, "columns", cols)

    @property
    def n(self) -> int:
        return len(self.input_names)

    @property
    def m(self) -> int:
        return len(self.output_names)

    @property
    def rows(self) -> int:
        return 1 << self.n

    def __eq__(self, other):
        if not isinstance(other, TruthTable):
            return NotImplemented
        return (
            self.input_names == other.input_names
            and self.output_names == other.output_names
            and all(np.array_equal(a, b) for a, b in zip(self.columns, other.columns))
        )

    __hash__ = None

    def __repr__(self):
        bits = ",".join("".join(str(int(b)) for b in c) for c in self.columns)
        return f"TruthTable({list(self.input_names)} -> {list(self.output_names)}: {bits})"

    @classmethod
    def from_bitstrings(cls, input_names: Sequence[str], output_names: Sequence[str],
                        bitstrings: Sequence[str]) -> "TruthTable":
        """Build from one '0'/'1' string per output, in row-index order."""
        cols = []
        for bits in bitstrings:
            if set(bits) - {"0", "1"}:
                raise ValueError(f"bitstring may only contain 0/1: {bits!r}")
            cols.append(np.frombuffer(bits.encode("ascii"), dtype=np.uint8) - ord("0"))
        return cls(tuple(input_names), tuple(output_names), tuple(cols))

    def evaluate(self, assignment: Sequence[int]) -> list[int]:
        """Output bits for one full input assignment (first input = MSB)."""
        if len(assignment) != self.n:
            raise ValueError(f"assignment length {len(assignment)} != input count {self.n}")
        idx = 0
        for bit in assignment:
            if bit not in (0, 1):
                raise ValueError("assignment bits must be 0 or 1")
            idx = (idx << 1) | bit
        return [int(col[idx]) for col in self.columns]

    def _prefix_items(self, prefix: AssignmentPrefix | Mapping[str, int]) -> list[tuple[str, int]]:
        items = list(prefix.items()) if isinstance(prefix, Mapping) else list(prefix)
        seen = set()
        for name, bit in items:
            if name in seen:
                raise ValueError(f"variable bound twice in prefix: {name}")
            if name not in self.input_names:
                raise ValueError(f"unknown variable in prefix: {name}")
            if bit not in (0, 1):
                raise ValueError(f"prefix value for {name} must be 0 or 1")
            seen.add(name)
        return items

    def cofactor(self, prefix: AssignmentPrefix | Mapping[str, int]) -> "TruthTable":
        """Restriction with the bound variables removed from the input list."""
        items = self._prefix_items(prefix)
        bound = dict(items)
        index = tuple(bound[name] if name in bound else slice(None) for name in self.input_names)
        remaining = tuple(name for name in self.input_names if name not in bound)
        if not remaining:
            raise ValueError("cofactor may not bind every input")
        shape = (2,) * self.n
        cols = tuple(col.reshape(shape)[index].reshape(-1) for col in self.columns)
        return TruthTable(remaining, self.output_names, cols)

    def is_constant(self) -> tuple[int, ...] | None:
        """The constant output pattern if all rows agree, else None."""
        pattern = []
        for col in self.columns:
            if not (col == col[0]).all():
                return None
            pattern.append(int(col[0]))
        return tuple(pattern)

    def select_output(self, name: str) -> "TruthTable":
        if name not in self.output_names:
            raise ValueError(f"unknown output: {name}")
        j = self.output_names.index(name)
        return TruthTable(self.input_names, (name,), (self.columns[j],))


def parse_pla(text: str, *, n_max: int = N_MAX) -> TruthTable:
    """Parse the PLA subset into a complete truth table.

    '-' in an input field covers both values of that position; assignments not
    covered by any row map every output to 0.  Rows covering the same
    assignment with different output bits are an error, as are output
    don't-cares (the measures here are defined only for completely specified
    functions).
    """
    n = m = None
    declared_rows = None
    assigned = None      # bool per row
    outputs = None       # (rows, m) uint8
    saw_end = False
    data_rows = 0

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if saw_end:
            raise ParseError(f"content after .e: {line!r}", line=line_no)
        fields = line.split()
        if fields[0] == ".i":
            if n is not None:
                raise ParseError("duplicate .i", line=line_no)
            try:
                n = int(fields[1])
            except (IndexError, ValueError):
                raise ParseError(".i needs an integer argument", line=line_no) from None
            if not 1 <= n <= n_max:
                raise ParseError(f"input count {n} outside 1..{n_max}", line=line_no)
        elif fields[0] == ".o":
            if m is not None:
                raise ParseError("duplicate .o", line=line_no)
            try:
                m = int(fields[1])
            except (IndexError, ValueError):
                raise ParseError(".o needs an integer argument", line=line_no) from None
            if m < 1:
                raise ParseError("output count must be at least 1", line=line_no)
        elif fields[0] == ".p":
            try:
                declared_rows = int(fields[1])
            except (IndexError, ValueError):
                raise ParseError(".p needs an integer argument", line=line_no) from None
        elif fields[0] == ".e":
            saw_end = True
        elif fields[0].startswith("."):
            raise ParseError(f"unsupported directive {fields[0]}", line=line_no)
        else:
            if n is None or m is None:
                raise ParseError("data row before .i/.o declarations", line=line_no)
            if assigned is None:
                assigned = np.zeros(1 << n, dtype=bool)
                outputs = np.zeros((1 << n, m), dtype=np.uint8)
            if len(fields) != 2:
                raise ParseError("data row must be <inputs> <outputs>", line=line_no)
            in_field, out_field = fields
            if len(in_field) != n or set(in_field) - {"0", "1", "-"}:
                raise ParseError(f"input field must be {n} chars of 0/1/-", line=line_no)
            if len(out_field) != m:
                raise ParseError(f"output field must be {m} chars", line=line_no)
            if set(out_field) - {"0", "1"}:
                raise ParseError("output don't-cares are not supported", line=line_no)
            data_rows += 1

            out_bits = np.frombuffer(out_field.encode("ascii"), dtype=np.uint8) - ord("0")
            base = 0
            dash_shifts = []
            for pos, ch in enumerate(in_field):
                shift = n - 1 - pos
                if ch == "1":
                    base |= 1 << shift
                elif ch == "-":
                    dash_shifts.append(shift)
            combos = np.arange(1 << len(dash_shifts), dtype=np.int64)
            idx = np.full(combos.shape, base, dtype=np.int64)
            for j, shift in enumerate(dash_shifts):
                idx |= ((combos >> j) & 1) << shift

            clash = assigned[idx] & (outputs[idx] != out_bits).any(axis=1)
            if clash.any():
                row = int(idx[np.argmax(clash)])
                raise ParseError(
                    f"conflicting rows: assignment {row:0{n}b} already set with different outputs",
                    line=line_no,
                )
            assigned[idx] = True
            outputs[idx] = out_bits

    if n is None or m is None:
        raise ParseError("missing .i/.o declarations")
    if not saw_end:
        raise ParseError("missing .e terminator")
    if declared_rows is not None and declared_rows != data_rows:
        raise ParseError(f".p declares {declared_rows} rows but {data_rows} given")
    if outputs is None:
        outputs = np.zeros((1 << n, m), dtype=np.uint8)
    input_names = tuple(f"x{i}" for i in range(1, n + 1))
    output_names = tuple(f"f{j}" for j in range(1, m + 1))
    cols = tuple(outputs[:, j].copy() for j in range(m))
    return TruthTable(input_names, output_names, cols)


def to_pla(table: TruthTable) -> str:
    """Serialize as one PLA row per assignment with a nonzero output pattern."""
    stacked = np.stack(table.columns, axis=1)
    live = np.flatnonzero(stacked.any(axis=1))
    lines = [f".i {table.n}", f".o {table.m}", f".p {len(live)}"]
    for idx in live:
        in_field = format(int(idx), f"0{table.n}b")
        out_field = "".join(str(int(b)) for b in stacked[idx])
        lines.append(f"{in_field} {out_field}")
    lines.append(".e")
    return "\n".join(lines) + "\n"


def all_single_output_tables(n: int, input_names: Sequence[str] | None = None) -> Iterable[TruthTable]:
    """Every single-output function of n inputs, in column-value order."""
    names = tuple(input_names) if input_names else tuple(f"x{i}" for i in range(1, n + 1))
    rows = 1 << n
    for value in range(1 << rows):
        bits = [(value >> (rows - 1 - r)) & 1 for r in range(rows)]
        yield TruthTable(names, ("f1",), (np.array(bits, dtype=np.uint8),))


def random_table(rng, n: int, m: int = 1, input_names: Sequence[str] | None = None) -> TruthTable:
    """Uniformly random complete function from a seeded random.Random."""
    names = tuple(input_names) if input_names else tuple(f"x{i}" for i in range(1, n + 1))
    rows = 1 << n
    cols = tuple(
        np.array([rng.randrange(2) for _ in range(rows)], dtype=np.uint8) for _ in range(m)
    )
    outs = tuple(f"f{j}" for j in range(1, m + 1))
    return TruthTable(names, outs, cols)
