from typing import TYPE_CHECKING, Optional

from recipetree.core.descriptors import RecipeDescriptor
from recipetree.core.hashing import StateHash
from recipetree.executor.plan import NodeSpec
from recipetree.recipes.function import Function
from recipetree.recipes.initializer import StateInitializer
from recipetree.recipes.recipe import Recipe

if TYPE_CHECKING:
    from recipetree.experiment import Experiment


class StatePromise:
    """
    A lazy handle on a state that does not exist yet. Its hash is known up front, computed from the root
    properties or from the parent hash and recipe.

    Tags and functions may be added until the experiment is planned; neither changes the hash.
    """

    def __init__(
        self,
        experiment: "Experiment",
        state_hash: StateHash,
        parent: Optional["StatePromise"] = None,
        recipe: Optional[Recipe] = None,
        recipe_descriptor: Optional[RecipeDescriptor] = None,
        initializer: Optional[StateInitializer] = None,
    ):
        self._experiment = experiment
        self.hash = state_hash
        self.parent = parent
        self.recipe = recipe
        self.recipe_descriptor = recipe_descriptor
        self.initializer = initializer
        self._tags: set[str] = set()
        self._functions: list[Function] = []

    @property
    def experiment(self) -> "Experiment":
        return self._experiment

    @property
    def is_root(self) -> bool:
        return self.parent is None

    @property
    def tags(self) -> frozenset[str]:
        return frozenset(self._tags)

    @property
    def functions(self) -> tuple[Function, ...]:
        return tuple(self._functions)

    def derive(self, recipe: Recipe) -> "StatePromise":
        """Promise of the state produced by applying `recipe` to this one."""
        return self._experiment.derive(self, recipe)

    def add_tag(self, *tags: str) -> "StatePromise":
        """
        :raises FrozenExperimentError: the experiment was already planned
        :raises ValueError: a tag is not a non-empty string
        """
        self._experiment.check_not_frozen()
        for tag in tags:
            if not isinstance(tag, str) or not tag:
                raise ValueError(f"Tags must be non-empty strings, got {tag!r}")
            self._tags.add(tag)
        return self

    def attach_function(self, function: Function) -> "StatePromise":
        """
        Run `function` against this state on every run, after it is executed or restored from the cache.
        Functions of one state run in attachment order.

        :raises FrozenExperimentError: the experiment was already planned
        """
        self._experiment.check_not_frozen()
        if not isinstance(function, Function):
            raise TypeError(f"Expected a Function, got {type(function).__name__}")
        self._functions.append(function)
        return self

    def to_spec(self) -> NodeSpec:
        return NodeSpec(
            hash=self.hash,
            parent_hash=self.parent.hash if self.parent is not None else None,
            recipe=self.recipe,
            recipe_descriptor=self.recipe_descriptor,
            initializer=self.initializer,
            tags=self.tags,
            functions=self.functions,
        )

    def __repr__(self) -> str:
        name = self.recipe_descriptor.name if self.recipe_descriptor is not None else "ROOT"
        return f"StatePromise({self.hash.short}, {name}, tags={sorted(self._tags)})"
