import json
from typing import Any

from recipetree.core.descriptors import RecipeDescriptor, StateDescriptor
from recipetree.core.hashing import StateHash


def state_to_dict(descriptor: StateDescriptor) -> dict[str, Any]:
    recipe = None
    if descriptor.recipe is not None:
        recipe = {"name": descriptor.recipe.name, "properties": descriptor.recipe.properties}
    return {
        "hash": descriptor.hash.hex,
        "parent_hash": descriptor.parent_hash.hex if descriptor.parent_hash is not None else None,
        "recipe": recipe,
        "properties": descriptor.properties,
        "nonhashed_attribute_names": sorted(descriptor.nonhashed_attribute_names),
        "tags": sorted(descriptor.tags),
    }


def state_to_json(descriptor: StateDescriptor) -> str:
    """
    Canonical text form of a descriptor, as written to `state.json`.

    Keys are sorted and floats use Python's shortest round-trip repr, so equal descriptors give equal bytes.
    """
    return json.dumps(state_to_dict(descriptor), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def state_from_dict(data: dict[str, Any]) -> StateDescriptor:
    recipe = data.get("recipe")
    parent_hash = data.get("parent_hash")
    return StateDescriptor(
        hash=StateHash.from_hex(data["hash"]),
        parent_hash=StateHash.from_hex(parent_hash) if parent_hash is not None else None,
        recipe=RecipeDescriptor(name=recipe["name"], properties=recipe["properties"]) if recipe is not None else None,
        properties=data.get("properties", {}),
        nonhashed_attribute_names=tuple(data.get("nonhashed_attribute_names", ())),
        tags=frozenset(data.get("tags", ())),
    )


def state_from_json(text: str) -> StateDescriptor:
    return state_from_dict(json.loads(text))
