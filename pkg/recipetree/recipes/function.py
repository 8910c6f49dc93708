from abc import ABC, abstractmethod
from typing import Any, Optional

from recipetree.recipes.contents import StateView


class Function(ABC):
    """
    A non-mutating action run against a materialized state, such as model evaluation.

    Functions add no node to the graph and are not hashed. They run on every execution of the plan,
    including when the state they are attached to is restored from the cache.
    """

    NAME: Optional[str] = None

    @property
    def name(self) -> str:
        return self.NAME or type(self).__name__

    @abstractmethod
    def run(self, state: StateView) -> Any:
        raise NotImplementedError()

    def __call__(self, state: StateView) -> Any:
        return self.run(state)
