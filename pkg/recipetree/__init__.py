import importlib.metadata

try:
    __version__ = importlib.metadata.version(__package__ or __name__)
except importlib.metadata.PackageNotFoundError:
    __version__ = "0.0.0"

from recipetree.config import ExecutorConfig, ExperimentConfig  # noqa: F401
from recipetree.core import RecipeDescriptor, StateDescriptor, StateHash  # noqa: F401
from recipetree.experiment import Experiment, RestoredExperiment  # noqa: F401
from recipetree.promise import StatePromise  # noqa: F401
from recipetree.recipes import Function, Recipe, StateContents, StateInitializer, StateView  # noqa: F401
