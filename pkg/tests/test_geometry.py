"""Feasibility, windows, burstiness, and the random-walk probe.

The battery recursion and the all-window energy test are two independent
implementations of the same constraint; most checks here play them against
each other or against brute-force / exact-rational oracles.
"""

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from sigmarho import (
    SigmaRhoParams,
    burstiness,
    burstiness_walk_probability,
    feasible_rows,
    is_feasible,
    pad_and_concat,
    state_trace,
    window_check,
)

UP_ONE = np.nextafter(1.0, 2.0)  # smallest float above 1


class TestParams:
    def test_validation(self):
        with pytest.raises(ValueError):
            SigmaRhoParams(-0.1, 1.0)
        with pytest.raises(ValueError):
            SigmaRhoParams(1.0, 0.0)
        with pytest.raises(ValueError):
            SigmaRhoParams(math.nan, 1.0)
        with pytest.raises(ValueError):
            SigmaRhoParams(1.0, math.inf)

    def test_zero_sigma_allowed(self):
        p = SigmaRhoParams(0.0, 2.0)
        assert p.sigma == 0.0 and p.rho == 2.0


class TestStateTrace:
    def test_saturating_sequence(self):
        p = SigmaRhoParams(0.0, 1.0)
        trace = state_trace(p, np.array([1.0, 1.0, 1.0]))
        assert trace.tolist() == [0.0, 0.0, 0.0, 0.0]
        assert is_feasible(p, np.array([1.0, 1.0, 1.0]))

    def test_boundary_is_exact_not_fuzzy(self):
        p = SigmaRhoParams(0.0, 1.0)
        assert is_feasible(p, np.full(4, 1.0))
        # one ulp of extra energy in any slot must flip the verdict
        assert not is_feasible(p, np.array([1.0, UP_ONE, 1.0, 1.0]))

    def test_near_full_drain_then_recover(self):
        # sqrt(2)**2 rounds up to 2.0000000000000004, so use the float just
        # below sqrt(2); its square stays within the sigma + rho budget
        p = SigmaRhoParams(1.0, 1.0)
        x = np.array([np.nextafter(math.sqrt(2.0), 0.0), 1.0])
        trace = state_trace(p, x)
        assert trace.shape == (3,)
        assert trace[0] == 1.0
        assert trace[1] >= 0.0 and trace[1] < 1e-15
        assert is_feasible(p, x)

    def test_float_square_of_sqrt2_overdraws(self):
        # IEEE754 fact: sqrt(2)**2 > 2, so the nominal boundary point fails
        p = SigmaRhoParams(1.0, 1.0)
        assert math.sqrt(2.0) ** 2 > 2.0
        assert not is_feasible(p, np.array([math.sqrt(2.0), 1.0]))

    def test_cap_never_exceeded(self):
        rng = np.random.default_rng(3)
        p = SigmaRhoParams(2.0, 0.5)
        for _ in range(50):
            x = rng.normal(0.0, 0.4, size=30)
            trace = state_trace(p, x)
            assert np.all(trace <= p.sigma)
            assert trace[0] == p.sigma

    def test_exact_rational_oracle(self):
        # all quantities are dyadic rationals, so float arithmetic is exact
        # and the trace must match a Fraction-based recursion bit for bit
        rng = np.random.default_rng(11)
        x = rng.integers(-4, 5, size=400) * 0.5
        p = SigmaRhoParams(2.25, 0.75)
        sig, rho = Fraction(9, 4), Fraction(3, 4)
        state = sig
        expected = [float(state)]
        for xi in x:
            state = min(sig, state + rho - Fraction(xi) ** 2)
            expected.append(float(state))
        assert state_trace(p, x).tolist() == expected

    def test_rejects_bad_codewords(self):
        p = SigmaRhoParams(1.0, 1.0)
        with pytest.raises(ValueError):
            state_trace(p, np.array([]))
        with pytest.raises(ValueError):
            state_trace(p, np.array([[1.0], [2.0]]))
        with pytest.raises(ValueError):
            state_trace(p, np.array([1.0, math.nan]))


class TestWindowEquivalence:
    @given(
        st.floats(min_value=0.0, max_value=5.0),
        st.floats(min_value=0.1, max_value=4.0),
        st.lists(st.floats(min_value=-3.0, max_value=3.0), min_size=1, max_size=8),
    )
    def test_window_check_equals_recursion(self, sigma, rho, xs):
        p = SigmaRhoParams(sigma, rho)
        x = np.asarray(xs)
        assert window_check(p, x) == is_feasible(p, x)

    def test_bulk_random_agreement(self):
        rng = np.random.default_rng(2026)
        for _ in range(2000):
            n = int(rng.integers(1, 40))
            p = SigmaRhoParams(float(abs(rng.normal(0, 2))), float(rng.uniform(0.05, 3)))
            x = rng.normal(0.0, float(rng.uniform(0.3, 1.5)), size=n)
            assert window_check(p, x) == is_feasible(p, x)

    def test_long_codeword_agreement(self):
        rng = np.random.default_rng(5)
        p = SigmaRhoParams(3.0, 1.0)
        for _ in range(30):
            x = rng.normal(0.0, 1.0, size=1500)
            assert window_check(p, x) == is_feasible(p, x)

    def test_energy_scaling_relation(self):
        # quadrupling the budget and doubling the amplitudes is an exact
        # rescaling in binary floating point, so feasibility is preserved
        rng = np.random.default_rng(9)
        for _ in range(200):
            n = int(rng.integers(1, 20))
            p = SigmaRhoParams(float(abs(rng.normal(0, 1))), float(rng.uniform(0.2, 2)))
            x = rng.normal(0.0, 0.8, size=n)
            scaled = SigmaRhoParams(4.0 * p.sigma, 4.0 * p.rho)
            assert is_feasible(p, x) == is_feasible(scaled, 2.0 * x)


class TestBurstiness:
    @staticmethod
    def _brute(x):
        best = -math.inf
        for j in range(1, len(x) + 1):
            for i in range(j):
                best = max(best, sum(v * v - 1.0 for v in x[i:j]))
        return best

    def test_spike_example(self):
        x = np.array([np.nextafter(math.sqrt(2.0), 0.0), 0.0, np.nextafter(math.sqrt(2.0), 0.0)])
        assert burstiness(x) == pytest.approx(1.0, abs=1e-12)

    def test_all_zero_input(self):
        assert burstiness(np.zeros(3)) == pytest.approx(-1.0, abs=0.0)

    @given(st.lists(st.floats(min_value=-2.5, max_value=2.5), min_size=1, max_size=9))
    def test_matches_brute_force_window_max(self, xs):
        x = np.asarray(xs)
        assert burstiness(x) == pytest.approx(self._brute(xs), abs=1e-9)

    def test_is_minimal_feasible_budget_at_unit_rate(self):
        rng = np.random.default_rng(17)
        for _ in range(300):
            x = rng.normal(0.0, 1.0, size=int(rng.integers(1, 25)))
            b = burstiness(x)
            assert is_feasible(SigmaRhoParams(max(0.0, b) + 1e-9, 1.0), x)
            if b > 1e-9:
                assert not is_feasible(SigmaRhoParams(b - 1e-9, 1.0), x)

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            burstiness(np.array([]))


class TestPadAndConcat:
    def test_single_zero_separator(self):
        p = SigmaRhoParams(1.0, 1.0)
        out = pad_and_concat(p, [np.array([1.0]), np.array([1.0])])
        assert out.tolist() == [1.0, 0.0, 1.0, 0.0]

    def test_pad_length_is_budget_over_rate_rounded_up(self):
        p = SigmaRhoParams(2.5, 1.0)
        out = pad_and_concat(p, [np.array([1.0]), np.array([1.0])])
        assert out.tolist() == [1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0]

    def test_zero_sigma_needs_no_padding(self):
        p = SigmaRhoParams(0.0, 1.0)
        out = pad_and_concat(p, [np.array([1.0, 1.0]), np.array([1.0])])
        assert out.tolist() == [1.0, 1.0, 1.0]

    def test_infeasible_block_rejected(self):
        p = SigmaRhoParams(0.0, 1.0)
        with pytest.raises(ValueError):
            pad_and_concat(p, [np.array([2.0])])

    def test_concatenation_always_feasible(self):
        rng = np.random.default_rng(23)
        for _ in range(60):
            p = SigmaRhoParams(float(abs(rng.normal(0, 2))), float(rng.uniform(0.1, 3)))
            blocks = []
            for _b in range(int(rng.integers(1, 5))):
                x = rng.normal(0.0, math.sqrt(p.rho), size=int(rng.integers(1, 12)))
                while not is_feasible(p, x):
                    x = 0.5 * x
                blocks.append(x)
            assert is_feasible(p, pad_and_concat(p, blocks))


class TestFeasibleRows:
    def test_matches_scalar_checker(self):
        rng = np.random.default_rng(31)
        p = SigmaRhoParams(1.5, 0.8)
        rows = rng.normal(0.0, 1.0, size=(300, 17))
        mask = feasible_rows(p, rows)
        assert mask.shape == (300,)
        assert mask.dtype == bool
        for k in range(300):
            assert mask[k] == is_feasible(p, rows[k])

    def test_rejects_non_matrix(self):
        p = SigmaRhoParams(1.0, 1.0)
        with pytest.raises(ValueError):
            feasible_rows(p, np.ones(4))


class TestWalkProbability:
    def test_single_step_matches_gaussian_tail(self):
        # n=1: the event is x^2 <= min(1, 1 + alpha), hit rate erf(1/sqrt(2))
        n_samples = 400_000
        exact = math.erf(1.0 / math.sqrt(2.0))
        se = math.sqrt(exact * (1.0 - exact) / n_samples)
        pr = burstiness_walk_probability(1, 0.5, n_samples, seed=7)
        assert abs(pr - exact) < 5.0 * se

    def test_single_step_negative_threshold(self):
        n_samples = 400_000
        exact = math.erf(math.sqrt(0.64) / math.sqrt(2.0))
        se = math.sqrt(exact * (1.0 - exact) / n_samples)
        pr = burstiness_walk_probability(1, -0.36, n_samples, seed=7)
        assert abs(pr - exact) < 5.0 * se

    def test_impossible_threshold_returns_zero(self):
        assert burstiness_walk_probability(4, -1.5, 10, seed=0) == 0.0

    def test_deterministic_for_fixed_seed(self):
        a = burstiness_walk_probability(8, 0.3, 50_000, seed=3)
        b = burstiness_walk_probability(8, 0.3, 50_000, seed=3)
        assert a == b

    def test_monotone_in_threshold(self):
        lo = burstiness_walk_probability(6, 0.1, 80_000, seed=4)
        hi = burstiness_walk_probability(6, 1.5, 80_000, seed=4)
        assert lo <= hi

    def test_validation(self):
        with pytest.raises(ValueError):
            burstiness_walk_probability(0, 0.5, 10)
        with pytest.raises(ValueError):
            burstiness_walk_probability(2, 0.5, 0)
        with pytest.raises(ValueError):
            burstiness_walk_probability(2, 0.5, 10, seed=-1)
