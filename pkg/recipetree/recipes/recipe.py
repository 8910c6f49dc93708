from abc import ABC, abstractmethod
from typing import Any, Optional

from recipetree.core.descriptors import RecipeDescriptor
from recipetree.recipes.contents import StateContents, StateView


class Recipe(ABC):
    """
    A state-mutating action: turns a parent state into a child state.

    Subclasses list the instance attributes that identify the action in `PROPERTIES`; together with the
    recipe name (the class name unless `NAME` is set) they form the hashed `RecipeDescriptor`.
    `run` must be a deterministic function of the parent state and those properties. It must not read
    external mutable inputs: a cached child is reused without running the recipe again.

    Example:
        class TrainRecipe(Recipe):
            PROPERTIES = ("lr", "epochs")

            def __init__(self, lr, epochs=200):
                self.lr = lr
                self.epochs = epochs

            def run(self, parent):
                ...
    """

    PROPERTIES: tuple[str, ...] = ()
    NAME: Optional[str] = None

    @property
    def name(self) -> str:
        return self.NAME or type(self).__name__

    @property
    def properties(self) -> dict[str, Any]:
        return {key: getattr(self, key) for key in self.PROPERTIES}

    @property
    def descriptor(self) -> RecipeDescriptor:
        return RecipeDescriptor(name=self.name, properties=self.properties)

    @abstractmethod
    def run(self, parent: StateView) -> StateContents:
        """
        Produce the child's property and payload deltas from an isolated view of the parent.

        :param parent: read-only view of the materialized parent state
        :type parent: StateView
        :return: properties and payloads to overlay on the parent's
        :rtype: StateContents
        """
        raise NotImplementedError()

    def __repr__(self) -> str:
        return f"{self.name}({self.properties})"
