from abc import ABC, abstractmethod
from typing import Any, Optional

from recipetree.core.encoding import check_properties
from recipetree.recipes.contents import StateContents


class StateInitializer(ABC):
    """
    Describes the root state of an experiment.

    Subclasses list the payloads they produce in `NONHASHED_ATTRIBUTES` and override `initialize_state`,
    which builds everything beyond the hashed properties (models, data, seeds). `initialize_state` must be
    a deterministic function of the properties.

    Example:
        class LinearModelInitializer(StateInitializer):
            NONHASHED_ATTRIBUTES = ("weights",)

            def initialize_state(self, properties):
                return StateContents(payloads={"weights": zeros(properties["d"])})
    """

    NONHASHED_ATTRIBUTES: tuple[str, ...] = ()

    def __init__(self, properties: Optional[dict[str, Any]] = None):
        self.properties = check_properties(properties or {})

    @abstractmethod
    def initialize_state(self, properties: dict[str, Any]) -> StateContents:
        raise NotImplementedError()

    def __call__(self) -> StateContents:
        contents = self.initialize_state(dict(self.properties))
        missing = set(self.NONHASHED_ATTRIBUTES) - set(contents.payloads)
        if missing:
            raise ValueError(f"{type(self).__name__} did not produce payloads {sorted(missing)}")
        return contents
