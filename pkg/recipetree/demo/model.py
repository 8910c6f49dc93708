import math
import struct

from recipetree.demo.data import Dataset
from recipetree.errors import RecipeTreeError


class DivergenceError(RecipeTreeError, ArithmeticError):
    """Training produced a non-finite loss."""


# Sums below run in ascending index order. Stored weights depend on it bit for bit.


def residuals(data: Dataset, weights: list[float]) -> list[float]:
    result = []
    for row, target in zip(data.X, data.y):
        prediction = 0.0
        for value, weight in zip(row, weights):
            prediction += value * weight
        result.append(prediction - target)
    return result


def _loss_from_residuals(r: list[float]) -> float:
    total = 0.0
    for value in r:
        total += value * value
    return total / len(r)


def _gradient_from_residuals(data: Dataset, r: list[float]) -> list[float]:
    result = []
    for j in range(data.d):
        g = 0.0
        for i in range(data.n):
            g += r[i] * data.X[i][j]
        result.append((2.0 / data.n) * g)
    return result


def mse_loss(data: Dataset, weights: list[float]) -> float:
    """L(w) = (1/n) * sum_i r_i^2 with r = Xw - y."""
    return _loss_from_residuals(residuals(data, weights))


def gradient(data: Dataset, weights: list[float]) -> list[float]:
    """Analytic gradient of `mse_loss`: (2/n) * X^T (Xw - y)."""
    return _gradient_from_residuals(data, residuals(data, weights))


def train(data: Dataset, weights: list[float], lr: float, epochs: int) -> tuple[list[float], list[float]]:
    """
    Full-batch gradient descent on `mse_loss`.

    :return: final weights and the loss before each update (one entry per epoch)
    :raises DivergenceError: the loss became infinite or NaN
    """
    if len(weights) != data.d:
        raise ValueError(f"{len(weights)} weights for {data.d} features")
    if lr <= 0 or epochs < 0:
        raise ValueError(f"lr={lr} must be positive and epochs={epochs} non-negative")
    weights = list(weights)
    history = []
    for epoch in range(epochs):
        r = residuals(data, weights)
        loss = _loss_from_residuals(r)
        if not math.isfinite(loss):
            raise DivergenceError(f"loss is {loss} at epoch {epoch} with lr={lr}")
        history.append(loss)
        weights = [w - lr * g for w, g in zip(weights, _gradient_from_residuals(data, r))]
    return weights, history


def magnitude_prune(weights: list[float], fraction: float) -> list[float]:
    """Zero the floor(fraction * d) weights of smallest magnitude. On equal magnitude the lower index goes first."""
    if not 0 <= fraction <= 1:
        raise ValueError(f"fraction {fraction} should be between 0 and 1")
    k = math.floor(fraction * len(weights))
    smallest = sorted(range(len(weights)), key=lambda index: (abs(weights[index]), index))[:k]
    pruned = list(weights)
    for index in smallest:
        pruned[index] = 0.0
    return pruned


def encode_weights(weights: list[float]) -> bytes:
    """8-byte little-endian count, then little-endian IEEE-754 doubles."""
    return struct.pack(f"<Q{len(weights)}d", len(weights), *weights)


def decode_weights(blob: bytes) -> list[float]:
    if len(blob) < 8:
        raise ValueError("weights blob is shorter than its count")
    (count,) = struct.unpack_from("<Q", blob)
    if len(blob) != 8 + 8 * count:
        raise ValueError(f"weights blob holds {len(blob) - 8} bytes for {count} doubles")
    return list(struct.unpack_from(f"<{count}d", blob, 8))
