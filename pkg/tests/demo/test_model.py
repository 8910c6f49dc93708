import math
import struct

import pytest

from recipetree.demo.data import generate_data
from recipetree.demo.model import (DivergenceError, decode_weights, encode_weights, gradient, magnitude_prune,
                                   mse_loss, train)
from recipetree.demo.prng import SplitMix64

DATA = generate_data(42, 100, 10)


def _random_weights(seed: int) -> list[float]:
    prng = SplitMix64(seed)
    return [2.0 * prng.uniform() - 1.0 for _ in range(DATA.d)]


@pytest.mark.parametrize("seed", range(5))
def test_gradient_matches_finite_differences(seed):
    weights = _random_weights(seed)
    analytic = gradient(DATA, weights)
    h = 1e-5
    numeric = []
    for j in range(DATA.d):
        up, down = list(weights), list(weights)
        up[j] += h
        down[j] -= h
        numeric.append((mse_loss(DATA, up) - mse_loss(DATA, down)) / (2 * h))
    error = math.sqrt(sum((a - b) ** 2 for a, b in zip(analytic, numeric)))
    assert error / math.sqrt(sum(a * a for a in analytic)) < 1e-6


def test_true_weights_have_zero_loss():
    assert mse_loss(DATA, [1.0] * DATA.d) == 0.0


def test_training_converges_faster_with_the_larger_rate():
    zeros = [0.0] * DATA.d
    fast, fast_history = train(DATA, zeros, 0.1, 200)
    slow, slow_history = train(DATA, zeros, 0.01, 200)
    assert len(fast_history) == len(slow_history) == 200
    assert fast_history[0] == slow_history[0] == mse_loss(DATA, zeros)
    assert mse_loss(DATA, fast) < 1e-3
    assert mse_loss(DATA, fast) < mse_loss(DATA, slow)
    assert all(later <= earlier for earlier, later in zip(slow_history, slow_history[1:]))


def test_zero_epochs_leave_weights_alone():
    weights = _random_weights(9)
    trained, history = train(DATA, weights, 0.1, 0)
    assert trained == weights
    assert history == []


def test_training_matches_a_straight_line_computation():
    n, d, lr = DATA.n, DATA.d, 0.1
    w = [0.0] * d
    for _ in range(3):
        r = []
        for i in range(n):
            p = 0.0
            for j in range(d):
                p += DATA.X[i][j] * w[j]
            r.append(p - DATA.y[i])
        g = []
        for j in range(d):
            s = 0.0
            for i in range(n):
                s += r[i] * DATA.X[i][j]
            g.append((2.0 / n) * s)
        w = [w[j] - lr * g[j] for j in range(d)]
    trained, _ = train(DATA, [0.0] * d, lr, 3)
    assert encode_weights(trained) == encode_weights(w)


def test_divergence_is_reported():
    with pytest.raises(DivergenceError):
        train(DATA, [0.0] * DATA.d, 100.0, 500)


@pytest.mark.parametrize("lr, epochs", [(0.0, 10), (-0.1, 10), (0.1, -1)])
def test_bad_training_arguments(lr, epochs):
    with pytest.raises(ValueError):
        train(DATA, [0.0] * DATA.d, lr, epochs)


def test_weight_count_must_match_features():
    with pytest.raises(ValueError):
        train(DATA, [0.0], 0.1, 1)


@pytest.mark.parametrize(
    "weights, fraction, expected",
    [
        ([3.0, -0.5, 2.0, 0.1], 0.5, [3.0, 0.0, 2.0, 0.0]),
        ([1.0, -1.0, 1.0, 2.0], 0.5, [0.0, 0.0, 1.0, 2.0]),
        ([1.0, 2.0, 3.0], 0.5, [0.0, 2.0, 3.0]),
        ([1.0, 2.0, 3.0], 0.0, [1.0, 2.0, 3.0]),
        ([1.0, 2.0, 3.0], 1.0, [0.0, 0.0, 0.0]),
        ([], 0.5, []),
    ],
)
def test_magnitude_prune(weights, fraction, expected):
    assert magnitude_prune(weights, fraction) == expected


def test_prune_leaves_its_input_alone():
    weights = [1.0, 2.0]
    magnitude_prune(weights, 1.0)
    assert weights == [1.0, 2.0]


@pytest.mark.parametrize("fraction", [-0.1, 1.5])
def test_prune_fraction_range(fraction):
    with pytest.raises(ValueError):
        magnitude_prune([1.0], fraction)


def test_weights_layout():
    blob = encode_weights([1.5, -2.0])
    assert blob == struct.pack("<Q", 2) + struct.pack("<d", 1.5) + struct.pack("<d", -2.0)
    assert decode_weights(blob) == [1.5, -2.0]


@pytest.mark.parametrize("blob", [b"", b"\x01", struct.pack("<Q", 2) + struct.pack("<d", 1.0)])
def test_truncated_weights(blob):
    with pytest.raises(ValueError):
        decode_weights(blob)


def test_prune_keeps_the_largest_trained_weights():
    trained, _ = train(DATA, [0.0] * DATA.d, 0.01, 50)
    pruned = magnitude_prune(trained, 0.5)
    largest = sorted(range(DATA.d), key=lambda j: abs(trained[j]), reverse=True)[:5]
    assert sum(1 for w in pruned if w == 0.0) == 5
    assert {j for j, w in enumerate(pruned) if w != 0.0} == set(largest)
    assert all(pruned[j] == trained[j] for j in largest)
