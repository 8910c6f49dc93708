import copy
import unicodedata
from types import MappingProxyType
from typing import Any, Mapping, Optional

from pydantic import BaseModel, ConfigDict, field_validator

from recipetree.core.descriptors import RecipeDescriptor, StateDescriptor
from recipetree.core.encoding import check_properties
from recipetree.core.hashing import StateHash


def check_payload_name(name: str) -> str:
    if not isinstance(name, str) or not name or name.startswith("."):
        raise ValueError(f"Invalid payload name {name!r}")
    if "/" in name or "\\" in name or any(unicodedata.category(char) == "Cc" for char in name):
        raise ValueError(f"Payload name {name!r} must not contain path separators or control characters")
    return name


class StateContents(BaseModel):
    """
    What an initializer or recipe produces: hashed properties plus named opaque payload blobs
    (the non-hashed attributes, e.g. model weights).

    For a recipe both are deltas, overlaid on the parent's properties and payloads.
    """

    model_config = ConfigDict(frozen=True)

    properties: dict[str, Any] = {}
    payloads: dict[str, bytes] = {}

    @field_validator("properties")
    @classmethod
    def _check_properties(cls, value: dict[str, Any]) -> dict[str, Any]:
        return check_properties(value)

    @field_validator("payloads")
    @classmethod
    def _check_payloads(cls, value: dict[str, bytes]) -> dict[str, bytes]:
        for name in value:
            check_payload_name(name)
        return value


class StateView:
    """
    Read-only view of a materialized state, handed to recipes (as the parent) and to functions.

    Each view is built from a fresh read of the store, so views never share mutable objects.
    """

    def __init__(self, descriptor: StateDescriptor, payloads: Mapping[str, bytes]):
        self._descriptor = descriptor
        self._properties = MappingProxyType(copy.deepcopy(descriptor.properties))
        self._payloads = MappingProxyType(dict(payloads))

    @property
    def descriptor(self) -> StateDescriptor:
        return self._descriptor

    @property
    def hash(self) -> StateHash:
        return self._descriptor.hash

    @property
    def parent_hash(self) -> Optional[StateHash]:
        return self._descriptor.parent_hash

    @property
    def recipe(self) -> Optional[RecipeDescriptor]:
        return self._descriptor.recipe

    @property
    def properties(self) -> Mapping[str, Any]:
        return self._properties

    @property
    def tags(self) -> frozenset[str]:
        return self._descriptor.tags

    @property
    def payloads(self) -> Mapping[str, bytes]:
        return self._payloads

    def payload(self, name: str) -> bytes:
        try:
            return self._payloads[name]
        except KeyError:
            raise KeyError(f"State {self.hash.short} has no payload `{name}`") from None

    def __repr__(self) -> str:
        return f"StateView({self.hash.short}, payloads={sorted(self._payloads)})"
