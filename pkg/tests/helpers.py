"""Independent reference implementations and random-case generators.

The oracles here deliberately use plain-Python enumeration (dict
accumulation, explicit restriction) so they share no code path with the
vectorized library implementations they check.
"""
import itertools
import math

import numpy as np

from infogate.diagram import is_terminal
from infogate.metrics import InputDistribution
from infogate.netlist import GateInstance, Netlist


def entropy_ref(probs):
    return -sum(p * math.log2(p) for p in probs if p > 0)


def joint_entropy_ref(columns, probs):
    """Entropy of the joint value of several bit columns, dict-accumulated."""
    acc = {}
    for r, p in enumerate(probs):
        key = tuple(int(c[r]) for c in columns)
        acc[key] = acc.get(key, 0.0) + p
    return entropy_ref(acc.values())


def conditional_entropy_ref(f, given, dist):
    """H(f|given) as sum over given-assignments of p * H(restriction)."""
    probs = dist.assignment_probs(f.n)
    positions = [f.input_names.index(g) for g in given]
    total = 0.0
    for bits in itertools.product((0, 1), repeat=len(given)):
        rows = [
            r for r in range(f.rows)
            if all((r >> (f.n - 1 - pos)) & 1 == b for pos, b in zip(positions, bits))
        ]
        p_group = sum(float(probs[r]) for r in rows)
        if p_group == 0:
            continue
        acc = {}
        for r in rows:
            key = tuple(int(c[r]) for c in f.columns)
            acc[key] = acc.get(key, 0.0) + float(probs[r]) / p_group
        total += p_group * entropy_ref(acc.values())
    return total


def marginal_entropy_ref(f, subset, dist):
    """Entropy of the marginal over a set of input variables."""
    probs = dist.assignment_probs(f.n)
    positions = [f.input_names.index(g) for g in subset]
    acc = {}
    for r in range(f.rows):
        key = tuple((r >> (f.n - 1 - pos)) & 1 for pos in positions)
        acc[key] = acc.get(key, 0.0) + float(probs[r])
    return entropy_ref(acc.values())


def output_with_vars_entropy_ref(f, subset, dist):
    """Joint entropy of (output pattern, chosen input variables)."""
    probs = dist.assignment_probs(f.n)
    positions = [f.input_names.index(g) for g in subset]
    acc = {}
    for r in range(f.rows):
        key = (
            tuple(int(c[r]) for c in f.columns),
            tuple((r >> (f.n - 1 - pos)) & 1 for pos in positions),
        )
        acc[key] = acc.get(key, 0.0) + float(probs[r])
    return entropy_ref(acc.values())


def random_dist(rng, n, kinds=("uniform", "independent", "explicit")):
    kind = rng.choice(kinds)
    if kind == "uniform":
        return InputDistribution.uniform()
    if kind == "independent":
        return InputDistribution.independent([rng.uniform(0.05, 0.95) for _ in range(n)])
    w = np.array([rng.random() + 1e-3 for _ in range(1 << n)])
    return InputDistribution.explicit(w / w.sum())


def random_tree_netlist(rng, lib, n, name="tree"):
    """Fanout-free tree over all n inputs, each used exactly once, depth <= 4."""
    two_in = [g.name for g in lib.gates if g.table.n == 2]
    has_not = any(g.name == "NOT" for g in lib.gates)
    inputs = tuple(f"x{i}" for i in range(1, n + 1))
    instances = []
    counter = itertools.count(1)

    def build(nets):
        if len(nets) == 1:
            return nets[0]
        half = len(nets) // 2
        left = build(nets[:half])
        right = build(nets[half:])
        out = f"g{next(counter)}"
        instances.append(GateInstance(rng.choice(two_in), (left, right), out))
        return out

    root = build(list(inputs))
    if has_not and root not in inputs and rng.random() < 0.3:
        out = f"g{next(counter)}"
        instances.append(GateInstance("NOT", (root,), out))
        root = out
    return Netlist(name, inputs, tuple(instances), (root,))


def random_dag_netlist(rng, lib, n, n_gates, name="dag", n_outputs=1):
    """Random netlist where nets may fan out and reconverge."""
    inputs = tuple(f"x{i}" for i in range(1, n + 1))
    nets = list(inputs)
    instances = []
    for i in range(n_gates):
        gate = lib.gates[rng.randrange(len(lib.gates))]
        chosen = tuple(nets[rng.randrange(len(nets))] for _ in range(gate.table.n))
        out = f"g{i + 1}"
        instances.append(GateInstance(gate.name, chosen, out))
        nets.append(out)
    outs = tuple(nets[-n_outputs:]) if instances else (nets[0],)
    return Netlist(name, inputs, tuple(instances), outs)


def diagram_is_read_once(dd):
    def walk(ref, seen):
        if is_terminal(ref):
            return True
        node = dd.nodes[ref]
        if node.var in seen:
            return False
        seen = seen | {node.var}
        return walk(node.low, seen) and walk(node.high, seen)

    return walk(dd.root, frozenset())


def diagram_respects_global_order(dd):
    """True iff one total variable order is consistent with every edge."""
    edges = set()
    for node in dd.nodes.values():
        for child in (node.low, node.high):
            if not is_terminal(child):
                edges.add((node.var, dd.nodes[child].var))
    succ = {}
    for a, b in edges:
        succ.setdefault(a, set()).add(b)

    visiting, done = set(), set()

    def dfs(v):
        if v in done:
            return True
        if v in visiting:
            return False
        visiting.add(v)
        for w in succ.get(v, ()):
            if not dfs(w):
                return False
        visiting.discard(v)
        done.add(v)
        return True

    return all(dfs(v) for v in succ)
