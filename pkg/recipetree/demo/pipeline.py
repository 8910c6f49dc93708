import logging
from pathlib import Path
from typing import Optional, Union

from recipetree.config.demo_config import DemoConfig
from recipetree.config.experiment_config import ExperimentConfig
from recipetree.demo.recipes import EvaluateFunction, LinearModelInitializer, PruneRecipe, TrainRecipe
from recipetree.experiment import Experiment

EVALUATION_LOGGER = "recipetree.demo.recipes"


def lr_tag(lr: float) -> str:
    return f"lr:{float(lr)}"


def build_demo_experiment(
    path: Union[str, Path],
    config: Optional[DemoConfig] = None,
    learning_rates: Optional[list[float]] = None,
    experiment_config: Optional[ExperimentConfig] = None,
) -> Experiment:
    """
    Define the train-then-prune experiment: a zero-initialized root, one TrainRecipe per learning rate and a
    PruneRecipe under each, with evaluation attached to every pruned state. Nothing is executed.

    Tags: the root gets `root`, each trained state `lr:<lr>`, each pruned state `pruned` and its `lr:<lr>`.

    :param path: experiment directory
    :type path: Union[str, Path]
    :param config: demo hyperparameters, defaults to `DemoConfig()`
    :type config: Optional[DemoConfig]
    :param learning_rates: overrides `config.learning_rates`
    :type learning_rates: Optional[list[float]]
    :param experiment_config: config passed to the `Experiment`
    :type experiment_config: Optional[ExperimentConfig]
    :return: the defined experiment, 1 + 2 * len(learning_rates) promises
    :rtype: Experiment
    """
    config = config or DemoConfig()
    learning_rates = config.learning_rates if learning_rates is None else learning_rates

    experiment = Experiment(path, config=experiment_config)
    # EVAL lines are the demo's output, whatever the package log level
    logging.getLogger(EVALUATION_LOGGER).setLevel(logging.INFO)
    root = experiment.spawn_new_tree(LinearModelInitializer({"seed": config.seed, "n": config.n, "d": config.d}))
    root.add_tag("root")
    evaluate = EvaluateFunction()
    for lr in learning_rates:
        tag = lr_tag(lr)
        trained = root.derive(TrainRecipe(lr=lr, epochs=config.epochs)).add_tag(tag)
        trained.derive(PruneRecipe(fraction=config.fraction)).add_tag("pruned", tag).attach_function(evaluate)
    return experiment
