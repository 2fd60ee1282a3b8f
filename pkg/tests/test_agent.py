import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qardns.agent import (
    AgentParams,
    AgentWeights,
    RewardWindow,
    circuit_angles,
    cooperative_bonus,
    decay_epsilon,
    greedy_distribution,
    intrinsic_reward,
    plasticity_delta,
    plasticity_update,
    select_action,
)
from qardns.quantum_sim import build_action_state, exact_probabilities


def zero_weights(n_qubits=3):
    return AgentWeights(
        W_s=np.zeros((8, 3)),
        W_l=np.zeros((16, 3)),
        W_a=np.zeros((n_qubits, 32)),
        W_att_s=np.zeros(8),
        W_att_l=np.zeros(16),
    )


def rngs(seed):
    a, b = np.random.SeedSequence(seed).spawn(2)
    return np.random.default_rng(a), np.random.default_rng(b)


class TestInitialWeights:
    def test_shapes_and_range(self):
        w = AgentWeights.initial(np.random.default_rng(0))
        assert w.W_s.shape == (8, 3) and w.W_l.shape == (16, 3)
        assert w.W_a.shape == (3, 32)
        assert w.W_att_s.shape == (8,) and w.W_att_l.shape == (16,)
        assert w.max_abs() <= 0.1


class TestRewardWindow:
    def test_empty(self):
        w = RewardWindow()
        assert (w.mean(), w.std(), w.variance()) == (0.0, 0.0, 0.0)

    def test_keeps_last_hundred(self):
        w = RewardWindow()
        for v in range(250):
            w.push(v)
        assert len(w) == 100
        assert w.mean() == pytest.approx(np.mean(np.arange(150, 250)))
        assert w.variance() == pytest.approx(np.var(np.arange(150, 250)))


class TestSelectAction:
    def test_full_exploration_uniform(self):
        p = AgentParams(epsilon=1.0)
        e, q = rngs(1)
        w = zero_weights()
        m = np.zeros(32)
        counts = np.bincount([select_action(w, m, p, e, q) for _ in range(60_000)], minlength=6)
        chi2 = float(np.sum((counts - 10_000) ** 2 / 10_000))
        # 5 d.o.f., alpha = 0.001 critical value
        assert chi2 < 20.515

    def test_zero_memory_greedy(self):
        p = AgentParams(epsilon=0.0)
        e, q = rngs(2)
        w = AgentWeights.initial(np.random.default_rng(3))
        assert all(select_action(w, np.zeros(32), p, e, q) == 0 for _ in range(200))

    def test_biased_circuit(self):
        # outcome 5 = |101>: qubits 0 and 2 rotated by pi, qubit 1 left alone
        thetas = np.array([np.pi, 0.0, np.pi]) * 0.9
        probs = exact_probabilities(build_action_state(circuit_angles(self._rig(thetas), self._m())))
        assert probs[5] >= 0.9
        p = AgentParams(epsilon=0.0)
        e, q = rngs(4)
        hits = sum(select_action(self._rig(thetas), self._m(), p, e, q) == 5 for _ in range(1000))
        assert hits >= 850

    @staticmethod
    def _m():
        m = np.zeros(32)
        m[0] = 1.0
        return m

    @staticmethod
    def _rig(thetas):
        w = zero_weights()
        w.W_a[:, 0] = thetas
        return w

    def test_greedy_distribution_folds_invalid(self):
        d = greedy_distribution(np.array([2, 0, 0, 0, 0, 2, 10, 2]), 6)
        np.testing.assert_allclose(d, [0.5, 0, 0, 0, 0, 0.5])
        assert greedy_distribution(np.array([0, 0, 0, 0, 0, 0, 9, 7]), 6) is None

    def test_all_invalid_shots_fall_back_to_random(self):
        # theta = pi on qubits 0,1 gives outcome 6 or 7 with certainty
        w = zero_weights()
        w.W_a[:, 0] = [np.pi, np.pi, 0.0]
        p = AgentParams(epsilon=0.0)
        e, q = rngs(5)
        m = np.zeros(32)
        m[0] = 1.0
        picks = {select_action(w, m, p, e, q) for _ in range(300)}
        assert picks == set(range(6))

    def test_two_qubit_mode_has_four_actions(self):
        p = AgentParams(epsilon=1.0, n_qubits=2)
        e, q = rngs(6)
        w = zero_weights(2)
        picks = {select_action(w, np.zeros(32), p, e, q) for _ in range(500)}
        assert picks == {0, 1, 2, 3}

    def test_epsilon_mixture(self):
        """Empirical frequencies equal eps/6 + (1 - eps) q(a) with q from a Monte-Carlo oracle."""
        w = zero_weights()
        w.W_a[:, 0] = [1.1, 2.0, 0.7]
        m = np.zeros(32)
        m[0] = 1.0
        probs = exact_probabilities(build_action_state(circuit_angles(w, m)))
        # oracle: argmax over independent multinomial 16-shot draws, restricted to outcomes 0-5
        oracle_rng = np.random.default_rng(99)
        n_oracle = 200_000
        draws = oracle_rng.multinomial(16, probs, size=n_oracle)[:, :6]
        valid = draws.sum(1) > 0
        greedy = np.argmax(draws[valid], axis=1)
        q = np.bincount(greedy, minlength=6) / n_oracle
        q += (~valid).sum() / n_oracle / 6  # fallback is uniform
        eps = 0.3
        p = AgentParams(epsilon=eps)
        e, qr = rngs(7)
        n = 60_000
        freq = np.bincount([select_action(w, m, p, e, qr) for _ in range(n)], minlength=6) / n
        expected = eps / 6 + (1 - eps) * q
        tol = 4 * np.sqrt(expected * (1 - expected) / n) + 1e-3
        assert np.all(np.abs(freq - expected) <= tol)

    def test_argmax_invariant_to_count_scaling(self):
        counts = np.array([3, 5, 1, 5, 0, 2, 0, 0])
        a = np.argmax(greedy_distribution(counts, 6))
        b = np.argmax(greedy_distribution(counts * 7, 6))
        assert a == b == 1


class TestIntrinsicReward:
    def test_equal_rates_no_penalty(self):
        p = AgentParams(curiosity_factor=0.0)
        assert intrinsic_reward((4, 4, 1), 0.3, 0.3, p) == 0.0

    def test_origin(self):
        p = AgentParams(curiosity_factor=1.0)
        assert intrinsic_reward((0, 0, 0), 0.5, 0.5, p) == pytest.approx(0.5 * 8 / 21, abs=1e-12)
        assert 0.5 * 8 / 21 == pytest.approx(0.19048, abs=1e-5)

    def test_goal_distance_factor(self):
        p = AgentParams(curiosity_factor=1.0)
        nov = 1 / (1 + math.exp(-math.sqrt(81 + 81 + 4)))
        assert intrinsic_reward((9, 9, 2), 0, 0, p) == pytest.approx(nov * 8.0, abs=1e-12)

    def test_balance_penalty(self):
        p = AgentParams(curiosity_factor=0.0)
        assert intrinsic_reward((1, 2, 0), 0.9, 0.4, p) == pytest.approx(-1.0)


class TestCooperativeBonus:
    def test_cases(self):
        assert cooperative_bonus((10, 12), (9, 11)) == 20.0
        assert cooperative_bonus((10, 12), (10, 12)) == 0.0
        assert cooperative_bonus((10, 12), (9, 13)) == 0.0
        assert cooperative_bonus((5, 5), (6, 6)) == -20.0


class TestPlasticity:
    def test_neutral_modulators(self):
        p = AgentParams(eta=1.0)
        w = zero_weights()
        m = np.zeros(32)
        m[7] = 1.0
        out = plasticity_update(w, 1.0, 0.0, 0.0, m, p)
        expected = np.zeros((3, 32))
        expected[:, 7] = 1.0
        np.testing.assert_array_equal(out.W_a, expected)

    def test_clip_boundary(self):
        p = AgentParams(eta=1.0)
        w = zero_weights()
        w.W_a[:, 0] = 4.9
        m = np.zeros(32)
        m[0] = 0.5
        assert np.all(plasticity_update(w, 1.0, 0.0, 0.0, m, p).W_a[:, 0] == 5.0)

    def test_variance_divisor(self):
        p = AgentParams(eta=1.0)
        m = np.ones(32)
        base = plasticity_delta(1.0, 0.0, 0.0, m, p)
        damped = plasticity_delta(1.0, 90.0, 0.0, m, p)
        np.testing.assert_allclose(damped, base / 10.0)

    def test_does_not_mutate_input(self):
        w = zero_weights()
        plasticity_update(w, 3.0, 0.0, 0.0, np.ones(32), AgentParams())
        assert not w.W_a.any()

    @settings(max_examples=100, deadline=None)
    @given(
        drive=st.floats(-1e4, 1e4),
        var=st.floats(0, 1e4),
        ds=st.floats(0, 100),
        seed=st.integers(0, 2**31),
    )
    def test_clip_invariant(self, drive, var, ds, seed):
        rng = np.random.default_rng(seed)
        w = AgentWeights.initial(rng)
        w.W_a = rng.uniform(-5, 5, size=(3, 32))
        out = plasticity_update(w, drive, var, ds, rng.normal(scale=50, size=32), AgentParams(eta=1.5))
        assert np.max(np.abs(out.W_a)) <= 5.0

    def test_monotone_in_variance_and_state_change(self):
        p = AgentParams(eta=0.9)
        m = np.linspace(-1, 1, 32)
        mags = [np.abs(plasticity_delta(2.0, v, 1.0, m, p)).sum() for v in np.linspace(0, 500, 60)]
        assert all(b <= a for a, b in zip(mags, mags[1:]))
        mags = [np.abs(plasticity_delta(2.0, 3.0, s, m, p)).sum() for s in np.linspace(0, 50, 60)]
        assert all(b < a for a, b in zip(mags, mags[1:]))

    def test_rejects_negative_inputs(self):
        with pytest.raises(ValueError):
            plasticity_update(zero_weights(), 1.0, -1.0, 0.0, np.ones(32), AgentParams())


class TestEpsilon:
    def test_first_decay(self):
        assert decay_epsilon(1.0, 0.2) == pytest.approx(0.995)

    def test_floor(self):
        assert decay_epsilon(0.2, 0.2) == 0.2

    def test_closed_form(self):
        eps = 1.0
        for n in range(1, 400):
            eps = decay_epsilon(eps, 0.2)
            assert eps == pytest.approx(max(0.2, 0.995**n), abs=1e-12)
        # the floor first binds at n = 322 (0.995**321 is about 0.20011)
        assert 0.995**321 > 0.2 > 0.995**322
