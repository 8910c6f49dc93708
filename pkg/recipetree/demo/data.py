from pydantic import BaseModel, ConfigDict

from recipetree.demo.prng import SplitMix64


class Dataset(BaseModel):
    """Regression data with y = X · (1, ..., 1)."""

    model_config = ConfigDict(frozen=True)

    X: list[list[float]]
    y: list[float]

    @property
    def n(self) -> int:
        return len(self.X)

    @property
    def d(self) -> int:
        return len(self.X[0]) if self.X else 0


def generate_data(seed: int = 42, n: int = 100, d: int = 10) -> Dataset:
    """
    Fill X row-major with 2u - 1 for successive uniform doubles u, then y[i] = sum_j X[i][j] * 1.0.

    :param seed: SplitMix64 seed, defaults to 42
    :type seed: int
    :param n: number of samples, defaults to 100
    :type n: int
    :param d: number of features, defaults to 10
    :type d: int
    """
    if n < 1 or d < 1:
        raise ValueError(f"n={n} and d={d} should both be at least 1")
    prng = SplitMix64(seed)
    X = [[2.0 * prng.uniform() - 1.0 for _ in range(d)] for _ in range(n)]
    y = []
    for row in X:
        total = 0.0
        for value in row:
            total += value * 1.0
        y.append(total)
    return Dataset(X=X, y=y)
