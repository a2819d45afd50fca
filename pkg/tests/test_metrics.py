import math
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import (
    conditional_entropy_ref,
    marginal_entropy_ref,
    output_with_vars_entropy_ref,
    random_dist,
)
from infogate.errors import ConfigError
from infogate.metrics import (
    InputDistribution,
    conditional_entropy,
    entropy,
    function_entropy,
    input_entropy,
    mutual_information,
)
from infogate.truthtable import TruthTable, random_table

H_QUARTER = 0.8112781244591328  # H(1/4, 3/4)


class TestEntropy:
    def test_four_equal_outcomes(self):
        assert entropy([0.25, 0.25, 0.25, 0.25]) == 2.0

    def test_quarter_split(self):
        assert entropy([0.25, 0.75]) == pytest.approx(H_QUARTER, abs=1e-12)

    def test_certain_event(self):
        assert entropy([1.0]) == 0.0

    def test_zero_terms_dropped(self):
        assert entropy([0.0, 1.0, 0.0]) == 0.0

    def test_negative_probability_rejected(self):
        with pytest.raises(ValueError, match="negative"):
            entropy([-0.1, 1.1])

    def test_sum_out_of_tolerance_rejected(self):
        with pytest.raises(ValueError, match="sum"):
            entropy([0.5, 0.4])

    @settings(max_examples=100, deadline=None)
    @given(st.lists(st.floats(0.001, 1.0), min_size=1, max_size=32))
    def test_bounds(self, raw):
        probs = np.array(raw) / sum(raw)
        h = entropy(probs)
        assert -1e-12 <= h <= math.log2(len(probs)) + 1e-9


class TestDistributions:
    def test_uniform_probs(self):
        assert list(InputDistribution.uniform().assignment_probs(2)) == [0.25] * 4

    def test_independent_probs_msb_first(self):
        d = InputDistribution.independent([0.25, 0.5])
        # x1 is the MSB: rows 00,01,10,11
        assert list(d.assignment_probs(2)) == pytest.approx([0.375, 0.375, 0.125, 0.125])

    def test_independent_arity_checked(self):
        with pytest.raises(ConfigError):
            InputDistribution.independent([0.5]).assignment_probs(2)

    def test_explicit_must_sum_to_one(self):
        with pytest.raises(ValueError, match="sum"):
            InputDistribution.explicit([0.5, 0.4])

    def test_explicit_arity_checked(self):
        with pytest.raises(ConfigError):
            InputDistribution.explicit([0.5, 0.5]).assignment_probs(2)

    def test_bias_range_checked(self):
        with pytest.raises(ValueError, match="biases"):
            InputDistribution.independent([1.5])

    def test_condition_uniform(self):
        p, rest, sub = InputDistribution.uniform().condition(("x1", "x2"), {"x1": 1})
        assert p == 0.5 and rest == ("x2",) and sub.kind == "uniform"

    def test_condition_independent(self):
        d = InputDistribution.independent([0.25, 0.5])
        p, rest, sub = d.condition(("x1", "x2"), {"x1": 1})
        assert p == 0.25 and rest == ("x2",) and sub.biases == (0.5,)

    def test_condition_explicit(self):
        d = InputDistribution.explicit([0.1, 0.2, 0.3, 0.4])
        p, rest, sub = d.condition(("x1", "x2"), {"x2": 0})
        assert p == pytest.approx(0.4)
        assert list(sub.weights) == pytest.approx([0.25, 0.75])

    def test_condition_zero_probability_prefix(self):
        d = InputDistribution.independent([1.0, 0.5])
        p, _, sub = d.condition(("x1", "x2"), {"x1": 0})
        assert p == 0.0 and sub.kind == "independent"


class TestFunctionEntropy:
    def test_and_uniform(self, and2, uniform):
        assert function_entropy(and2, uniform) == pytest.approx(H_QUARTER, abs=1e-12)

    def test_xor_uniform(self, xor2, uniform):
        assert function_entropy(xor2, uniform) == 1.0

    def test_constant_function(self, uniform):
        f = TruthTable.from_bitstrings(("x1", "x2"), ("f1",), ("1111",))
        assert function_entropy(f, uniform) == 0.0

    def test_outputs_treated_jointly(self, uniform):
        # two identical outputs carry the same information as one
        f = TruthTable.from_bitstrings(("x1", "x2"), ("f1", "f2"), ("0001", "0001"))
        assert function_entropy(f, uniform) == pytest.approx(H_QUARTER, abs=1e-12)


class TestInputEntropy:
    def test_uniform_two(self, uniform):
        assert input_entropy(uniform, 2) == 2.0

    def test_uniform_one(self, uniform):
        assert input_entropy(uniform, 1) == 1.0

    def test_constant_input_contributes_nothing(self):
        d = InputDistribution.independent([0.5, 1.0])
        assert input_entropy(d, 2) == 1.0


class TestConditionalEntropy:
    def test_and_given_either_input(self, and2, uniform):
        assert conditional_entropy(and2, ["x1"], uniform) == 0.5
        assert conditional_entropy(and2, ["x2"], uniform) == 0.5

    def test_xor_given_one_input(self, xor2, uniform):
        assert conditional_entropy(xor2, ["x1"], uniform) == 1.0

    def test_given_all_inputs_is_zero(self, uniform):
        rng = random.Random(3)
        f = random_table(rng, 4)
        assert conditional_entropy(f, list(f.input_names), uniform) == 0.0

    def test_unknown_variable(self, and2, uniform):
        with pytest.raises(ValueError, match="unknown"):
            conditional_entropy(and2, ["zz"], uniform)

    def test_matches_restriction_oracle(self):
        rng = random.Random(21)
        for _ in range(25):
            n = rng.randint(2, 6)
            f = random_table(rng, n, m=rng.randint(1, 2))
            dist = random_dist(rng, n)
            k = rng.randint(1, n - 1)
            given = rng.sample(f.input_names, k)
            assert conditional_entropy(f, given, dist) == pytest.approx(
                conditional_entropy_ref(f, given, dist), abs=1e-9
            )


class TestMutualInformation:
    def test_not_given_input(self, not1, uniform):
        # H(f)=1 and H(f|x)=0 by enumeration
        assert mutual_information(not1, ["x1"], uniform) == 1.0

    def test_xor_given_one_input(self, xor2, uniform):
        assert mutual_information(xor2, ["x1"], uniform) == 0.0

    def test_and_given_one_input(self, and2, uniform):
        assert mutual_information(and2, ["x1"], uniform) == pytest.approx(
            H_QUARTER - 0.5, abs=1e-12
        )

    def test_never_negative(self):
        rng = random.Random(5)
        for _ in range(50):
            n = rng.randint(2, 6)
            f = random_table(rng, n)
            dist = random_dist(rng, n)
            given = rng.sample(f.input_names, rng.randint(1, n))
            assert mutual_information(f, given, dist) >= 0.0


class TestPropertySuite:
    def test_chain_rule(self):
        # H(f, S) = H(S) + H(f|S), all three from independent enumerations
        rng = random.Random(42)
        for _ in range(40):
            n = rng.randint(2, 8)
            f = random_table(rng, n)
            dist = random_dist(rng, n)
            subset = rng.sample(f.input_names, rng.randint(1, n))
            joint = output_with_vars_entropy_ref(f, subset, dist)
            h_s = marginal_entropy_ref(f, subset, dist)
            assert joint == pytest.approx(
                h_s + conditional_entropy(f, subset, dist), abs=1e-9
            )

    def test_conditioning_never_increases(self):
        rng = random.Random(43)
        for _ in range(40):
            n = rng.randint(2, 8)
            f = random_table(rng, n)
            dist = random_dist(rng, n)
            k = rng.randint(0, n - 1)
            base = rng.sample(f.input_names, k)
            extra = rng.choice([v for v in f.input_names if v not in base])
            assert conditional_entropy(f, base + [extra], dist) <= (
                conditional_entropy(f, base, dist) + 1e-12
            )

    def test_function_entropy_bounded_by_input_entropy(self):
        rng = random.Random(44)
        for _ in range(40):
            n = rng.randint(2, 8)
            f = random_table(rng, n, m=rng.randint(1, 3))
            dist = random_dist(rng, n)
            assert function_entropy(f, dist) <= input_entropy(dist, n) + 1e-12
