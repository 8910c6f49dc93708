from typing import Any, Optional

from recipetree.config.base_config import BaseConfig


class DemoConfig(BaseConfig):
    """
    Hyperparameters of the train-then-prune demo.

    :param seed: dataset seed, defaults to 42
    :param n: number of samples, defaults to 100
    :param d: number of features, defaults to 10
    :param epochs: gradient descent epochs per training recipe, defaults to 200
    :param learning_rates: one train+prune branch per learning rate, defaults to [0.1, 0.01]
    :param fraction: fraction of weights zeroed by pruning, defaults to 0.5
    """

    def __init__(
        self,
        seed: int = 42,
        n: int = 100,
        d: int = 10,
        epochs: int = 200,
        learning_rates: Optional[list[float]] = None,
        fraction: float = 0.5,
    ):
        if n < 1 or d < 1:
            raise ValueError(f"n={n} and d={d} should both be at least 1")
        if not 0 <= fraction <= 1:
            raise ValueError(f"fraction {fraction} should be between 0 and 1")
        if epochs < 0:
            raise ValueError(f"epochs {epochs} should not be negative")
        self.seed = seed
        self.n = n
        self.d = d
        self.epochs = epochs
        self.learning_rates = list(learning_rates) if learning_rates is not None else [0.1, 0.01]
        if any(lr <= 0 for lr in self.learning_rates):
            raise ValueError(f"learning rates {self.learning_rates} should be positive")
        self.fraction = fraction

    @staticmethod
    def from_config(config: Optional[dict[str, Any]]):
        if config is None:
            return DemoConfig()
        return DemoConfig(
            seed=config.get("seed", 42),
            n=config.get("n", 100),
            d=config.get("d", 10),
            epochs=config.get("epochs", 200),
            learning_rates=config.get("learning_rates"),
            fraction=config.get("fraction", 0.5),
        )
