import unicodedata
from typing import Any, Optional

from pydantic import BaseModel, ConfigDict, field_validator

from recipetree.core.encoding import check_properties
from recipetree.core.hashing import StateHash


def check_recipe_name(name: str) -> str:
    if not isinstance(name, str) or not name:
        raise ValueError("Recipe name must be a non-empty string")
    if "/" in name or "\\" in name:
        raise ValueError(f"Recipe name {name!r} must not contain path separators")
    if any(unicodedata.category(char) == "Cc" for char in name):
        raise ValueError(f"Recipe name {name!r} must not contain control characters")
    return name


class RecipeDescriptor(BaseModel):
    """The value on an edge of the experiment tree: which recipe ran, with which hashed properties."""

    model_config = ConfigDict(frozen=True)

    name: str
    properties: dict[str, Any] = {}

    @field_validator("name")
    @classmethod
    def _check_name(cls, value: str) -> str:
        return check_recipe_name(value)

    @field_validator("properties")
    @classmethod
    def _check_properties(cls, value: dict[str, Any]) -> dict[str, Any]:
        return check_properties(value)


class StateDescriptor(BaseModel):
    """
    Metadata of one node of the experiment tree.

    Construction only checks field types. Cross-field invariants (root iff no parent, hash recomputation,
    attribute names) are checked by `validate_state`, which reports violations instead of raising.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    hash: StateHash
    parent_hash: Optional[StateHash] = None
    recipe: Optional[RecipeDescriptor] = None
    properties: dict[str, Any] = {}
    nonhashed_attribute_names: tuple[str, ...] = ()
    tags: frozenset[str] = frozenset()

    @property
    def is_root(self) -> bool:
        return self.parent_hash is None and self.recipe is None

    @property
    def recipe_name(self) -> Optional[str]:
        return self.recipe.name if self.recipe is not None else None

    def with_tags(self, tags: frozenset[str]) -> "StateDescriptor":
        return self.model_copy(update={"tags": frozenset(tags)})
