import logging
from typing import Any

from recipetree.demo.data import generate_data
from recipetree.demo.model import decode_weights, encode_weights, magnitude_prune, mse_loss, train
from recipetree.recipes.contents import StateContents, StateView
from recipetree.recipes.function import Function
from recipetree.recipes.initializer import StateInitializer
from recipetree.recipes.recipe import Recipe

logger = logging.getLogger(__name__)

WEIGHTS = "weights"


def _dataset_of(state: StateView):
    # the dataset is rebuilt from the root properties every state inherits
    properties = state.properties
    return generate_data(properties["seed"], properties["n"], properties["d"])


class LinearModelInitializer(StateInitializer):
    """Root state of the demo: dataset parameters as properties, zero weights as payload."""

    NONHASHED_ATTRIBUTES = (WEIGHTS,)

    def initialize_state(self, properties: dict[str, Any]) -> StateContents:
        return StateContents(payloads={WEIGHTS: encode_weights([0.0] * properties["d"])})


class TrainRecipe(Recipe):
    PROPERTIES = ("lr", "epochs")

    def __init__(self, lr: float, epochs: int = 200):
        self.lr = float(lr)
        self.epochs = int(epochs)

    def run(self, parent: StateView) -> StateContents:
        weights, history = train(_dataset_of(parent), decode_weights(parent.payload(WEIGHTS)), self.lr, self.epochs)
        if history:
            logger.debug(f"{self!r}: loss {history[0]!r} -> {history[-1]!r}")
        return StateContents(properties=self.properties, payloads={WEIGHTS: encode_weights(weights)})


class PruneRecipe(Recipe):
    PROPERTIES = ("fraction",)

    def __init__(self, fraction: float = 0.5):
        if not 0 <= fraction <= 1:
            raise ValueError(f"fraction {fraction} should be between 0 and 1")
        self.fraction = float(fraction)

    def run(self, parent: StateView) -> StateContents:
        pruned = magnitude_prune(decode_weights(parent.payload(WEIGHTS)), self.fraction)
        return StateContents(properties=self.properties, payloads={WEIGHTS: encode_weights(pruned)})


class EvaluateFunction(Function):
    """Training MSE of a state's weights, logged as `EVAL <hash8> loss=<repr>`."""

    def run(self, state: StateView) -> float:
        loss = mse_loss(_dataset_of(state), decode_weights(state.payload(WEIGHTS)))
        logger.info(f"EVAL {state.hash.short} loss={loss!r}")
        return loss
