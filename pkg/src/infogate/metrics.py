"""Exact Shannon measures of Boolean functions under a chosen input model.

Everything here enumerates all 2^n input assignments; nothing is sampled.
Entropies are in bits (base-2 logs) with the 0*log(0) = 0 convention, and
every reduction runs in a fixed index order so repeated runs round
identically.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .errors import ConfigError
from .truthtable import AssignmentPrefix, TruthTable

Bits = float

ENTROPY_SUM_TOL = 1e-9
EXPLICIT_SUM_TOL = 1e-12

# Pattern-indexed grouping allocates 2^m bins; beyond this we refuse rather
# than silently blow up.
_MAX_PACKED_OUTPUTS = 20


@dataclass(frozen=True)
class InputDistribution:
    """Probability model over the 2^n input assignments.

    kind 'uniform' needs no parameters and fits any arity; 'independent'
    carries one probability-of-1 per input; 'explicit' carries a weight for
    every assignment (row-index order).
    """

    kind: str
    biases: tuple[float, ...] | None = None
    weights: np.ndarray | None = None

    def __post_init__(self):
        if self.kind == "uniform":
            if self.biases is not None or self.weights is not None:
                raise ValueError("uniform distribution carries no parameters")
        elif self.kind == "independent":
            if self.biases is None:
                raise ValueError("independent distribution needs biases")
            biases = tuple(float(b) for b in self.biases)
            if any(not 0.0 <= b <= 1.0 for b in biases):
                raise ValueError("biases must lie in [0, 1]")
            object.__setattr__(self, "biases", biases)
        elif self.kind == "explicit":
            w = np.asarray(self.weights, dtype=np.float64)
            if w.ndim != 1 or w.size < 2 or w.size & (w.size - 1):
                raise ValueError("explicit weights length must be a power of two >= 2")
            if (w < 0).any():
                raise ValueError("explicit weights must be non-negative")
            if abs(float(w.sum()) - 1.0) > EXPLICIT_SUM_TOL:
                raise ValueError("explicit weights must sum to 1 within 1e-12")
            w = w.copy()
            w.flags.writeable = False
            object.__setattr__(self, "weights", w)
        else:
            raise ValueError(f"unknown distribution kind: {self.kind}")

    @classmethod
    def uniform(cls) -> "InputDistribution":
        return cls("uniform")

    @classmethod
    def independent(cls, biases: Sequence[float]) -> "InputDistribution":
        return cls("independent", biases=tuple(biases))

    @classmethod
    def explicit(cls, weights: Sequence[float]) -> "InputDistribution":
        return cls("explicit", weights=np.asarray(weights, dtype=np.float64))

    def assignment_probs(self, n: int) -> np.ndarray:
        """Probability of each of the 2^n assignments, row-index order."""
        if self.kind == "uniform":
            return np.full(1 << n, 2.0 ** -n)
        if self.kind == "independent":
            if len(self.biases) != n:
                raise ConfigError(
                    f"distribution has {len(self.biases)} biases but the function takes {n} inputs"
                )
            probs = np.ones(1)
            for b in self.biases:
                probs = np.outer(probs, np.array([1.0 - b, b])).ravel()
            return probs
        if self.weights.size != 1 << n:
            raise ConfigError(
                f"distribution has {self.weights.size} weights but the function takes {n} inputs"
            )
        return self.weights.copy()

    def condition(self, input_names: Sequence[str], bindings: AssignmentPrefix | Mapping[str, int]
                  ) -> tuple[float, tuple[str, ...], "InputDistribution"]:
        """Condition on a partial assignment.

        Returns (probability of the bound prefix, remaining input names, the
        conditional distribution over them).  A zero-probability prefix yields
        a uniform conditional so downstream entropies stay defined.
        """
        items = list(bindings.items()) if isinstance(bindings, Mapping) else list(bindings)
        names = tuple(input_names)
        bound = {}
        for name, bit in items:
            if name not in names:
                raise ValueError(f"unknown variable: {name}")
            if name in bound:
                raise ValueError(f"variable bound twice: {name}")
            bound[name] = bit
        remaining = tuple(name for name in names if name not in bound)
        if not remaining:
            raise ValueError("conditioning may not bind every input")

        if self.kind == "uniform":
            return 0.5 ** len(bound), remaining, InputDistribution.uniform()
        if self.kind == "independent":
            if len(self.biases) != len(names):
                raise ConfigError("distribution arity does not match the variable list")
            prob = 1.0
            rest = []
            for name, b in zip(names, self.biases):
                if name in bound:
                    prob *= b if bound[name] else 1.0 - b
                else:
                    rest.append(b)
            return prob, remaining, InputDistribution.independent(rest)

        n = len(names)
        probs = self.assignment_probs(n)
        idx = np.arange(1 << n)
        mask = np.ones(1 << n, dtype=bool)
        for pos, name in enumerate(names):
            if name in bound:
                mask &= ((idx >> (n - 1 - pos)) & 1) == bound[name]
        selected = probs[mask]
        prefix_prob = float(selected.sum())
        if prefix_prob <= 0.0:
            return 0.0, remaining, InputDistribution.uniform()
        return prefix_prob, remaining, InputDistribution.explicit(selected / prefix_prob)


def entropy(probs: Sequence[float]) -> Bits:
    """Shannon entropy in bits of a probability vector, summed in index order."""
    p = np.asarray(probs, dtype=np.float64)
    if p.ndim != 1:
        raise ValueError("probability vector must be one-dimensional")
    if not np.isfinite(p).all():
        raise ValueError("probabilities must be finite")
    if (p < 0).any():
        raise ValueError("negative probability")
    if abs(float(p.sum()) - 1.0) > ENTROPY_SUM_TOL:
        raise ValueError("probabilities must sum to 1 within 1e-9")
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(p > 0.0, -p * np.log2(np.where(p > 0.0, p, 1.0)), 0.0)
    total = 0.0
    for t in terms.tolist():
        total += t
    return total


def _pattern_ids(table: TruthTable) -> tuple[np.ndarray, int]:
    """Pack each row's m output bits into an integer id (output 0 as MSB)."""
    m = table.m
    if m > _MAX_PACKED_OUTPUTS:
        raise ValueError(f"more than {_MAX_PACKED_OUTPUTS} outputs not supported")
    ids = np.zeros(table.rows, dtype=np.int64)
    for j, col in enumerate(table.columns):
        ids |= col.astype(np.int64) << (m - 1 - j)
    return ids, 1 << m


def function_entropy(f: TruthTable, dist: InputDistribution) -> Bits:
    """H of the joint m-bit output pattern induced by the input model."""
    probs = dist.assignment_probs(f.n)
    ids, span = _pattern_ids(f)
    pattern_probs = np.bincount(ids, weights=probs, minlength=span)
    return entropy(pattern_probs)


def input_entropy(dist: InputDistribution, n: int) -> Bits:
    """H of the joint input assignment; equals n for the uniform model."""
    return entropy(dist.assignment_probs(n))


def _given_positions(f: TruthTable, given: Sequence[str]) -> list[int]:
    positions = []
    for name in given:
        if name not in f.input_names:
            raise ValueError(f"unknown variable: {name}")
        positions.append(f.input_names.index(name))
    if len(set(positions)) != len(positions):
        raise ValueError("duplicate variable in condition set")
    return positions


def conditional_entropy(f: TruthTable, given: Sequence[str], dist: InputDistribution) -> Bits:
    """H(f | given) by exact enumeration over assignments of the given set."""
    positions = _given_positions(f, given)
    k = len(positions)
    probs = dist.assignment_probs(f.n)
    ids, span = _pattern_ids(f)
    if k == 0:
        return entropy(np.bincount(ids, weights=probs, minlength=span))

    idx = np.arange(f.rows)
    gbits = np.zeros(f.rows, dtype=np.int64)
    for j, pos in enumerate(positions):
        gbits |= ((idx >> (f.n - 1 - pos)) & 1) << (k - 1 - j)

    joint = np.bincount(gbits * span + ids, weights=probs, minlength=(1 << k) * span)
    joint = joint.reshape(1 << k, span)
    group = joint.sum(axis=1)
    ratio = np.divide(joint, group[:, None], out=np.ones_like(joint), where=joint > 0.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(joint > 0.0, -joint * np.log2(ratio), 0.0)
    total = 0.0
    for t in terms.ravel().tolist():
        total += t
    return total


def mutual_information(f: TruthTable, given: Sequence[str], dist: InputDistribution) -> Bits:
    """I(f; given) = H(f) - H(f|given), with negative rounding noise clamped."""
    value = function_entropy(f, dist) - conditional_entropy(f, given, dist)
    return max(value, 0.0)
