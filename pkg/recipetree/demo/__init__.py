from recipetree.demo.pipeline import build_demo_experiment  # noqa: F401
from recipetree.demo.recipes import EvaluateFunction, LinearModelInitializer, PruneRecipe, TrainRecipe  # noqa: F401
