"""Decision diagrams built by greedy conditional-entropy minimization.

Construction expands one partial-assignment path at a time, always choosing
the test variable that minimizes the residual conditional entropy, and logs
the whole trajectory: after every expansion the remaining uncertainty
H(f|DD) and the accumulated information I(f;DD) = H(f) - H(f|DD) are
recorded.  The finished diagram is reduced (no duplicate nodes, no nodes
with equal children) and always reproduces the input function exactly.

Refs: 0 and 1 are the terminals, internal node ids start at 2.
"""
from __future__ import annotations

import itertools
import math
from collections import deque
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ConfigError
from .metrics import Bits, InputDistribution, function_entropy
from .truthtable import TruthTable

TERM0 = 0
TERM1 = 1

ORDERING_CEILING_DEFAULT = 8
ORDERING_CEILING_HARD = 10


def is_terminal(ref: int) -> bool:
    return ref in (TERM0, TERM1)


@dataclass(frozen=True)
class Node:
    var: str
    low: int
    high: int


@dataclass(frozen=True)
class DecisionDiagram:
    nodes: dict[int, Node]
    root: int
    mode: str

    def size(self) -> int:
        """Internal nodes reachable from the root."""
        seen = set()
        stack = [self.root]
        while stack:
            ref = stack.pop()
            if is_terminal(ref) or ref in seen:
                continue
            seen.add(ref)
            stack.extend((self.nodes[ref].low, self.nodes[ref].high))
        return len(seen)

    def evaluate(self, assignment: dict[str, int]) -> int:
        ref = self.root
        while not is_terminal(ref):
            node = self.nodes[ref]
            ref = node.high if assignment[node.var] else node.low
        return ref


@dataclass(frozen=True)
class TraceStep:
    step: int
    path_prob: float
    variable: str          # empty for the pre-build record
    h_f_given_dd: Bits
    i_f_dd: Bits


@dataclass(frozen=True)
class BuildTrace:
    h_f: Bits
    steps: tuple[TraceStep, ...]


@dataclass(frozen=True)
class FrontierEntry:
    prefix: tuple[tuple[str, int], ...]
    prob: float
    residual: TruthTable

    def __post_init__(self):
        if self.residual.is_constant() is not None:
            raise ValueError("frontier residuals must be non-constant")


@dataclass(frozen=True)
class Frontier:
    """Unexpanded paths of a diagram under construction."""

    input_names: tuple[str, ...]
    entries: tuple[FrontierEntry, ...]


def partial_conditional_entropy(frontier: Frontier, dist: InputDistribution) -> Bits:
    """Sum of path probability times residual entropy; resolved paths add 0."""
    total = 0.0
    for entry in frontier.entries:
        if entry.prob <= 0.0:
            continue
        _, _, sub = dist.condition(frontier.input_names, entry.prefix)
        total += entry.prob * function_entropy(entry.residual, sub)
    return total


# ---------------------------------------------------------------------------
# construction


class _Entry:
    """One unexpanded path: residual column + unnormalized row weights."""

    __slots__ = ("names", "col", "weights", "path_prob", "h", "contrib", "parent")

    def __init__(self, names, col, weights, parent):
        self.names = names
        self.col = col
        self.weights = weights
        self.path_prob = float(weights.sum())
        self.h = _entropy01(col, weights)
        self.contrib = self.path_prob * self.h
        self.parent = parent          # (node_id, branch) or None for the root


def _entropy01(col: np.ndarray, weights: np.ndarray) -> float:
    w1 = float(weights[col == 1].sum())
    w0 = float(weights[col == 0].sum())
    tot = w0 + w1
    if tot <= 0.0:
        return 0.0
    h = 0.0
    for w in (w0, w1):
        if w > 0.0:
            p = w / tot
            h -= p * math.log2(p)
    return h


def _cond_entropy(col: np.ndarray, weights: np.ndarray, vbit: np.ndarray) -> float:
    """H(residual | one variable) from its bit column over the entry's rows."""
    j = np.bincount(vbit * 2 + col, weights=weights, minlength=4)
    tot = float(j.sum())
    if tot <= 0.0:
        return 0.0
    h = 0.0
    for b in (0, 1):
        w0, w1 = float(j[2 * b]), float(j[2 * b + 1])
        sub = w0 + w1
        if sub > 0.0:
            hb = 0.0
            for w in (w0, w1):
                if w > 0.0:
                    p = w / sub
                    hb -= p * math.log2(p)
            h += (sub / tot) * hb
    return h


def _var_bit(k: int, pos: int) -> np.ndarray:
    return ((np.arange(1 << k) >> (k - 1 - pos)) & 1).astype(np.int64)


def build_entropy_dd(f: TruthTable, dist: InputDistribution, mode: str = "ordered"
                     ) -> tuple[DecisionDiagram, BuildTrace]:
    """Greedy entropy-minimizing construction with full trajectory recording.

    ordered: one variable is chosen per level, minimizing the probability
    weighted residual conditional entropy over the whole frontier; free: each
    path picks its own variable.  Ties break to the lowest input index.
    """
    if f.m != 1:
        raise ValueError("diagram construction needs a single-output function")
    if mode not in ("ordered", "free"):
        raise ValueError(f"unknown mode: {mode}")
    weights = dist.assignment_probs(f.n)
    col = f.columns[0].astype(np.int64)

    if f.is_constant() is not None:
        trace = BuildTrace(h_f=0.0, steps=(TraceStep(0, 1.0, "", 0.0, 0.0),))
        return DecisionDiagram({}, int(col[0]), mode), trace

    nodes: dict[int, list] = {}
    next_id = 2

    root_entry = _Entry(f.input_names, col, weights, None)
    # one float serves as both the build constant H(f) and the running
    # frontier sum, so the step-0 identity holds exactly
    h_f = root_entry.contrib
    running = h_f
    steps: list[TraceStep] = [TraceStep(0, 1.0, "", h_f, 0.0)]

    def best_var(entries: list[_Entry]) -> str:
        # entry names keep the original input order, so scanning in order and
        # updating only on strict improvement breaks ties to the lowest index
        names = entries[0].names
        k = len(names)
        best_name = None
        best_score = None
        for pos, name in enumerate(names):
            vbit = _var_bit(k, pos)
            score = 0.0
            for e in entries:
                score += e.path_prob * _cond_entropy(e.col, e.weights, vbit)
            if best_score is None or score < best_score - 1e-12:
                best_name, best_score = name, score
        return best_name

    def expand(entry: _Entry, var: str) -> tuple[int, list[_Entry]]:
        nonlocal next_id, running
        names = entry.names
        k = len(names)
        pos = names.index(var)
        vbit = _var_bit(k, pos)
        node_id = next_id
        next_id += 1
        nodes[node_id] = [var, None, None]
        if entry.parent is not None:
            pid, branch = entry.parent
            nodes[pid][branch] = node_id
        child_names = names[:pos] + names[pos + 1:]
        children = []
        for b, slot in ((0, 1), (1, 2)):
            mask = vbit == b
            ccol = entry.col[mask]
            cweights = entry.weights[mask]
            if (ccol == ccol[0]).all():
                nodes[node_id][slot] = int(ccol[0])
            else:
                children.append(_Entry(child_names, ccol, cweights, (node_id, slot)))
        running = running - entry.contrib + sum(c.contrib for c in children)
        steps.append(TraceStep(len(steps), entry.path_prob, var, running, h_f - running))
        return node_id, children

    root_ref = None
    if mode == "ordered":
        frontier = [root_entry]
        while frontier:
            var = best_var(frontier)
            nxt: list[_Entry] = []
            for entry in frontier:
                node_id, children = expand(entry, var)
                if entry.parent is None:
                    root_ref = node_id
                nxt.extend(children)
            frontier = nxt
    else:
        queue = deque([root_entry])
        while queue:
            entry = queue.popleft()
            var = best_var([entry])
            node_id, children = expand(entry, var)
            if entry.parent is None:
                root_ref = node_id
            queue.extend(children)

    raw = DecisionDiagram(
        {nid: Node(var, low, high) for nid, (var, low, high) in nodes.items()},
        root_ref,
        mode,
    )
    return reduce(raw), BuildTrace(h_f=h_f, steps=tuple(steps))


# ---------------------------------------------------------------------------
# reduction and evaluation


def reduce(dd: DecisionDiagram) -> DecisionDiagram:
    """Merge duplicate (var, low, high) triples and drop redundant tests."""
    if is_terminal(dd.root):
        return DecisionDiagram({}, dd.root, dd.mode)

    resolved: dict[int, int] = {}
    unique: dict[tuple, int] = {}
    canon_nodes: dict[int, Node] = {}
    counter = itertools.count(2)

    def resolve(ref: int) -> int:
        if is_terminal(ref):
            return ref
        if ref in resolved:
            return resolved[ref]
        node = dd.nodes[ref]
        low = resolve(node.low)
        high = resolve(node.high)
        if low == high:
            out = low
        else:
            key = (node.var, low, high)
            if key not in unique:
                nid = next(counter)
                unique[key] = nid
                canon_nodes[nid] = Node(node.var, low, high)
            out = unique[key]
        resolved[ref] = out
        return out

    root = resolve(dd.root)
    if is_terminal(root):
        return DecisionDiagram({}, root, dd.mode)

    # renumber in root-first, low-before-high traversal order so equal
    # diagrams serialize identically
    order: dict[int, int] = {}
    fresh = itertools.count(2)

    def visit(ref: int):
        if is_terminal(ref) or ref in order:
            return
        order[ref] = next(fresh)
        visit(canon_nodes[ref].low)
        visit(canon_nodes[ref].high)

    visit(root)
    remap = lambda r: r if is_terminal(r) else order[r]
    final = {
        order[ref]: Node(node.var, remap(node.low), remap(node.high))
        for ref, node in canon_nodes.items()
        if ref in order
    }
    return DecisionDiagram(final, remap(root), dd.mode)


def dd_to_truth_table(dd: DecisionDiagram, inputs: Sequence[str]) -> TruthTable:
    """Evaluate the diagram on all assignments over the given input list."""
    names = tuple(inputs)
    for node in dd.nodes.values():
        if node.var not in names:
            raise ValueError(f"diagram variable {node.var} not in inputs")
    n = len(names)
    rows = 1 << n
    idx = np.arange(rows)
    bit = {name: ((idx >> (n - 1 - pos)) & 1).astype(bool) for pos, name in enumerate(names)}

    memo: dict[int, np.ndarray] = {
        TERM0: np.zeros(rows, dtype=np.uint8),
        TERM1: np.ones(rows, dtype=np.uint8),
    }

    def column(ref: int) -> np.ndarray:
        if ref not in memo:
            node = dd.nodes[ref]
            memo[ref] = np.where(bit[node.var], column(node.high), column(node.low)).astype(np.uint8)
        return memo[ref]

    return TruthTable(names, ("f1",), (column(dd.root),))


# ---------------------------------------------------------------------------
# exhaustive ordering oracle


@dataclass(frozen=True)
class OrderingSweep:
    best_order: tuple[str, ...]
    best_size: int
    sizes: tuple[tuple[tuple[str, ...], int], ...]


def _permuted_column(col: np.ndarray, n: int, perm: Sequence[int]) -> np.ndarray:
    """Row-reindexed column where permuted variable j supplies bit j."""
    idx = np.arange(1 << n)
    src = np.zeros(1 << n, dtype=np.int64)
    for j, orig in enumerate(perm):
        src |= ((idx >> (n - 1 - j)) & 1) << (n - 1 - orig)
    return col[src]


def _reduced_size_for_order(col: np.ndarray) -> int:
    """Internal node count of the reduced ordered diagram, MSB tested first."""
    memo: dict[bytes, object] = {}
    unique: dict[tuple, int] = {}
    ids = itertools.count(2)

    def build(part: np.ndarray):
        if (part == part[0]).all():
            return int(part[0])
        key = part.tobytes()
        if key in memo:
            return memo[key]
        half = len(part) // 2
        low = build(part[:half])
        high = build(part[half:])
        if low == high:
            ref = low
        else:
            nk = (len(part), low, high)
            if nk not in unique:
                unique[nk] = next(ids)
            ref = unique[nk]
        memo[key] = ref
        return ref

    build(col)
    return len(unique)


def exhaustive_best_ordering(f: TruthTable, *, ceiling: int = ORDERING_CEILING_DEFAULT
                             ) -> OrderingSweep:
    """Reduced-diagram size for every variable order; n! builds, so capped."""
    if f.m != 1:
        raise ValueError("ordering sweep needs a single-output function")
    if ceiling > ORDERING_CEILING_HARD:
        raise ConfigError(f"ordering ceiling {ceiling} above hard limit {ORDERING_CEILING_HARD}")
    if f.n > ceiling:
        raise ConfigError(f"{f.n} inputs exceeds the ordering ceiling {ceiling}")
    col = f.columns[0]
    results = []
    best = None
    for perm in itertools.permutations(range(f.n)):
        size = _reduced_size_for_order(_permuted_column(col, f.n, perm))
        names = tuple(f.input_names[i] for i in perm)
        results.append((names, size))
        if best is None or size < best[1]:
            best = (names, size)
    return OrderingSweep(best_order=best[0], best_size=best[1], sizes=tuple(results))


# ---------------------------------------------------------------------------
# export


def to_dot(dd: DecisionDiagram, name: str = "dd") -> str:
    """Graphviz text: boxes for terminals, dashed low edges, solid high edges."""
    lines = [f"digraph {name} {{"]
    used_terms = set()
    if is_terminal(dd.root):
        used_terms.add(dd.root)
    for node in dd.nodes.values():
        for ref in (node.low, node.high):
            if is_terminal(ref):
                used_terms.add(ref)
    for t in sorted(used_terms):
        lines.append(f'  t{t} [shape=box, label="{t}"];')
    for nid in sorted(dd.nodes):
        lines.append(f'  n{nid} [label="{dd.nodes[nid].var}"];')
    for nid in sorted(dd.nodes):
        node = dd.nodes[nid]
        low = f"t{node.low}" if is_terminal(node.low) else f"n{node.low}"
        high = f"t{node.high}" if is_terminal(node.high) else f"n{node.high}"
        lines.append(f"  n{nid} -> {low} [style=dashed];")
        lines.append(f"  n{nid} -> {high} [style=solid];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def trace_to_csv(trace: BuildTrace) -> str:
    lines = ["step,path_prob,variable,h_f_given_dd,i_f_dd"]
    for s in trace.steps:
        lines.append(f"{s.step},{s.path_prob:.6f},{s.variable},{s.h_f_given_dd:.6f},{s.i_f_dd:.6f}")
    return "\n".join(lines) + "\n"
