import numpy as np
import pytest

from qardns.memory import (
    SharedMemory,
    attention_gates,
    combine,
    update_long,
    update_shared,
    update_short,
)


def test_short_fixed_point():
    m = np.arange(8.0)
    np.testing.assert_array_equal(update_short(m, [3, 4, 1], np.ones((8, 3)), 1.0), m)


def test_short_pure_injection():
    rng = np.random.default_rng(0)
    W = rng.normal(size=(8, 3))
    s = np.array([2.0, 5.0, 1.0])
    np.testing.assert_allclose(update_short(np.zeros(8), s, W, 0.0), W @ s)


def test_short_hand_value():
    out = update_short(np.ones(8), [1, 0, 0], np.full((8, 3), 0.1), 0.7)
    np.testing.assert_allclose(out, 0.73, atol=1e-15)


def test_short_rejects_bad_alpha():
    with pytest.raises(ValueError):
        update_short(np.zeros(8), [0, 0, 0], np.zeros((8, 3)), 1.2)


def test_long_cases():
    m = np.linspace(-1, 1, 16)
    W = np.full((16, 3), 0.2)
    np.testing.assert_array_equal(update_long(m, [1, 2, 3], W, 1.0), m)
    np.testing.assert_allclose(update_long(m, [0, 0, 0], W, 0.8), 0.8 * m)
    # 0.8*1 + 0.2*(0.2*(1+1+1)) = 0.92
    np.testing.assert_allclose(update_long(np.ones(16), [1, 1, 1], W, 0.8), 0.92)


def test_shared_cases():
    m = SharedMemory(np.arange(8.0))
    out = update_shared(m, [0, 0, 0], [0, 0, 0], np.ones((8, 6)))
    np.testing.assert_allclose(out.values, 0.9 * np.arange(8.0))

    W = np.zeros((8, 6))
    for k in range(6):
        W[k, k] = 1.0
    s1, s2 = [1.0, 2.0, 3.0], [4.0, 5.0, 6.0]
    out = update_shared(SharedMemory(), s1, s2, W)
    np.testing.assert_allclose(out.values[:6], 0.1 * np.array(s1 + s2))
    np.testing.assert_allclose(out.values[6:], 0.0)

    out = update_shared(SharedMemory(np.ones(8)), [1, 1, 1], [1, 1, 1], np.full((8, 6), 0.05))
    np.testing.assert_allclose(out.values, 0.93)


def test_attention_gates():
    assert attention_gates(np.zeros(8), np.ones(16), np.ones(8), np.ones(16))[0] == 0.0
    assert attention_gates(np.ones(8), np.zeros(16), np.ones(8), np.ones(16))[1] == 0.0
    W = np.zeros(8)
    W[0] = 1.0
    w_s, _ = attention_gates(np.full(8, 0.5), np.zeros(16), W, np.zeros(16))
    assert w_s == pytest.approx(0.46211715726, abs=1e-10)


def test_combine_cases():
    z = combine(np.zeros(8), np.zeros(16), SharedMemory(), (0.3, 2.0))
    assert z.shape == (32,) and not z.any()
    M_s, M_l = np.arange(1.0, 9.0), np.arange(1.0, 17.0)
    out = combine(M_s, M_l, SharedMemory(np.full(8, 7.0)), (1.0, 0.0))
    np.testing.assert_array_equal(out[:8], M_s)
    np.testing.assert_array_equal(out[8:24], 0.0)
    out = combine(M_s, M_l, SharedMemory(np.full(8, 7.0)), (-0.5, 0.25))
    expected = [-0.5 * v for v in range(1, 9)] + [0.25 * v for v in range(1, 17)] + [7.0] * 8
    np.testing.assert_allclose(out, expected)


def test_combine_linear_in_banks():
    rng = np.random.default_rng(4)
    gates = (0.4, -1.3)
    a = [rng.normal(size=8), rng.normal(size=16), SharedMemory(rng.normal(size=8))]
    b = [rng.normal(size=8), rng.normal(size=16), SharedMemory(rng.normal(size=8))]
    ab = [a[0] + 2 * b[0], a[1] + 2 * b[1], SharedMemory(a[2].values + 2 * b[2].values)]
    np.testing.assert_allclose(
        combine(*ab, gates), combine(*a, gates) + 2 * combine(*b, gates), atol=1e-12
    )


def test_contraction_with_zero_state():
    rng = np.random.default_rng(5)
    m = rng.normal(size=8)
    out = update_short(m, [0, 0, 0], rng.normal(size=(8, 3)), 0.7)
    assert np.linalg.norm(out) == pytest.approx(0.7 * np.linalg.norm(m), rel=1e-14)


def test_order_independence():
    rng = np.random.default_rng(6)
    ms, ml = rng.normal(size=8), rng.normal(size=16)
    Ws, Wl = rng.normal(size=(8, 3)), rng.normal(size=(16, 3))
    s = [3, 1, 2]
    a = (update_short(ms, s, Ws, 0.7), update_long(ml, s, Wl, 0.8))
    b_l = update_long(ml, s, Wl, 0.8)
    b_s = update_short(ms, s, Ws, 0.7)
    np.testing.assert_array_equal(a[0], b_s)
    np.testing.assert_array_equal(a[1], b_l)


def test_boundedness_random_trajectory():
    rng = np.random.default_rng(7)
    Ws = rng.uniform(-5, 5, size=(8, 3))
    Wl = rng.uniform(-5, 5, size=(16, 3))
    Wsh = rng.uniform(-5, 5, size=(8, 6))
    ms, ml, sh = np.zeros(8), np.zeros(16), SharedMemory()
    for _ in range(10_000):
        s1 = rng.integers([0, 0, 0], [10, 10, 3])
        s2 = rng.integers([0, 0, 0], [10, 10, 3])
        ms = update_short(ms, s1, Ws, rng.uniform(0, 1))
        ml = update_long(ml, s1, Wl, rng.uniform(0, 1))
        sh = update_shared(sh, s1, s2, Wsh)
        for v in (ms, ml, sh.values):
            assert np.all(np.abs(v) <= 150)
