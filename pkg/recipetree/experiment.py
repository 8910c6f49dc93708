import logging
from pathlib import Path
from typing import Any, Optional, Union

from recipetree.config.executor_config import ExecutorConfig
from recipetree.config.experiment_config import ExperimentConfig
from recipetree.constants import SCHEMA_VERSION
from recipetree.core.descriptors import StateDescriptor
from recipetree.core.hashing import StateHash, hash_child, hash_root
from recipetree.errors import ForeignPromiseError, FrozenExperimentError, MultiRootError, NoRootError
from recipetree.executor.plan import ExecutionPlan
from recipetree.executor.report import RunReport
from recipetree.factory import ExecutorFactory
from recipetree.graph.experiment_graph import ExperimentGraph
from recipetree.promise import StatePromise
from recipetree.recipes.contents import StateView
from recipetree.recipes.initializer import StateInitializer
from recipetree.recipes.recipe import Recipe
from recipetree.store.experiment_store import ExperimentStore, LoadReport, Payloads
from recipetree.utils.logging import setup_logging
from recipetree.utils.misc import load_config_file, resolve_hash_prefix, validate_config

logger = logging.getLogger(__name__)


class Experiment:
    """
    Lazily defined experiment tree, stored in one directory.

    Definition (`spawn_new_tree`, `derive`, tagging, attaching functions) executes nothing. `build_plan`
    freezes the definition and `run` executes the plan, reusing every state already in the directory.

    Example:
        exp = Experiment("runs/prune")
        root = exp.spawn_new_tree(LinearModelInitializer({"seed": 42, "n": 100, "d": 10}))
        trained = root.derive(TrainRecipe(lr=0.1)).add_tag("lr:0.1")
        trained.derive(PruneRecipe(fraction=0.5)).add_tag("pruned", "lr:0.1")
        exp.run()
    """

    def __init__(self, directory: Union[str, Path], config: Optional[ExperimentConfig] = None):
        """
        :param directory: experiment directory, created on the first run
        :type directory: Union[str, Path]
        :param config: experiment config, defaults to `ExperimentConfig()`
        :type config: Optional[ExperimentConfig]
        """
        self.directory = Path(directory)
        self.config = config or ExperimentConfig()
        self.schema_version = SCHEMA_VERSION
        self.root_promise: Optional[StatePromise] = None
        self._promises: list[StatePromise] = []
        self._frozen = False
        setup_logging(self.config.log_level)

    @classmethod
    def from_config(
        cls,
        directory: Union[str, Path],
        config_path: Optional[str] = None,
        config: Optional[dict[str, Any]] = None,
    ) -> "Experiment":
        """
        Instantiate an Experiment from a YAML/JSON file or a config dictionary.

        :param directory: experiment directory
        :type directory: Union[str, Path]
        :param config_path: path to the YAML or JSON configuration file
        :type config_path: Optional[str]
        :param config: a dictionary containing the configuration
        :type config: Optional[dict[str, Any]]
        """
        if config_path and config:
            raise ValueError("Please provide only one of config_path or config.")
        if config_path:
            config_data = load_config_file(config_path)
        else:
            config_data = validate_config(config or {})
        return cls(directory, config=ExperimentConfig.from_config(config_data))

    @property
    def promises(self) -> tuple[StatePromise, ...]:
        """Every promise in definition order."""
        return tuple(self._promises)

    @property
    def is_frozen(self) -> bool:
        return self._frozen

    def check_not_frozen(self):
        if self._frozen:
            raise FrozenExperimentError("The experiment was already planned and can no longer be modified")

    def spawn_new_tree(self, initializer: StateInitializer) -> StatePromise:
        """
        Register the root state. Nothing is executed.

        :raises MultiRootError: the experiment already has a root
        """
        self.check_not_frozen()
        if self.root_promise is not None:
            raise MultiRootError(f"The experiment already has root {self.root_promise.hash.short}")
        if not isinstance(initializer, StateInitializer):
            raise TypeError(f"Expected a StateInitializer, got {type(initializer).__name__}")
        promise = StatePromise(self, hash_root(initializer.properties), initializer=initializer)
        self.root_promise = promise
        self._promises.append(promise)
        logger.debug(f"Spawned root {promise.hash.short} from {type(initializer).__name__}")
        return promise

    def derive(self, parent: StatePromise, recipe: Recipe) -> StatePromise:
        """
        Register the state `recipe` produces from `parent`. Nothing is executed.

        :raises ForeignPromiseError: `parent` belongs to another experiment
        """
        self.check_not_frozen()
        if not isinstance(parent, StatePromise) or parent.experiment is not self:
            raise ForeignPromiseError("The parent promise belongs to another experiment")
        if not isinstance(recipe, Recipe):
            raise TypeError(f"Expected a Recipe, got {type(recipe).__name__}")
        descriptor = recipe.descriptor
        promise = StatePromise(
            self, hash_child(parent.hash, descriptor), parent=parent, recipe=recipe, recipe_descriptor=descriptor
        )
        self._promises.append(promise)
        logger.debug(f"Derived {promise.hash.short} from {parent.hash.short} with {descriptor.name}")
        return promise

    def build_plan(self) -> ExecutionPlan:
        """
        Freeze the definition into a topologically ordered plan. Promises with the same hash become one node.

        :raises NoRootError: no root was spawned
        """
        if self.root_promise is None:
            raise NoRootError("Call spawn_new_tree before planning the experiment")
        self._frozen = True
        return ExecutionPlan.build(self.directory, (promise.to_spec() for promise in self._promises))

    def run(self, config: Optional[ExecutorConfig] = None) -> RunReport:
        """
        Plan and execute the experiment into its directory.

        :param config: executor settings, defaults to the experiment config's executor
        :type config: Optional[ExecutorConfig]
        :raises IncompatibleStoreError: the directory holds another experiment
        :return: the run report
        :rtype: RunReport
        """
        plan = self.build_plan()
        store = ExperimentStore.init_experiment_dir(self.directory, plan.root_hash)
        executor = ExecutorFactory.from_config(config or self.config.executor)
        return executor.run(plan, store)

    @property
    def graph(self) -> ExperimentGraph:
        """Slim graph of what the directory holds now."""
        return ExperimentStore.open(self.directory).load_graph_slim()[0]

    @classmethod
    def restore(cls, path: Union[str, Path], slim: bool = True) -> "RestoredExperiment":
        """
        Load a stored experiment for analysis.

        :param path: experiment directory
        :type path: Union[str, Path]
        :param slim: only read state metadata; payloads are read on demand. With False every state is restored.
        :type slim: bool
        :raises NotAnExperimentError: the directory holds no experiment
        """
        store = ExperimentStore.open(path)
        graph, load_report = store.load_graph_slim()
        restored = RestoredExperiment(store, graph, load_report)
        if not slim:
            restored.views = {state_hash: store.load_view(state_hash) for state_hash in graph.nodes}
        return restored


class RestoredExperiment:
    """A stored experiment opened for analysis: the graph, what was left out of it, and state restore."""

    def __init__(self, store: ExperimentStore, graph: ExperimentGraph, load_report: LoadReport):
        self.store = store
        self.graph = graph
        self.load_report = load_report
        self.views: dict[StateHash, StateView] = {}

    @property
    def directory(self) -> Path:
        return self.store.path

    def resolve(self, state: Union[StateHash, str]) -> StateHash:
        if isinstance(state, StateHash):
            return state
        return resolve_hash_prefix(state, self.graph.nodes)

    def restore_state(self, state: Union[StateHash, str]) -> tuple[StateDescriptor, Payloads]:
        """Full restore of one state, by hash or unique prefix."""
        return self.graph.restore_state(self.resolve(state))

    def view(self, state: Union[StateHash, str]) -> StateView:
        state_hash = self.resolve(state)
        if state_hash in self.views:
            return self.views[state_hash]
        self.graph.get(state_hash)
        return self.store.load_view(state_hash)
