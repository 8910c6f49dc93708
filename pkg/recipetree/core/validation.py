from typing import Any, Mapping, Optional

from recipetree.core.descriptors import RecipeDescriptor, StateDescriptor, check_recipe_name
from recipetree.core.encoding import canonical_encode, check_properties
from recipetree.core.hashing import hash_child, hash_root
from recipetree.errors import EncodingError
from recipetree.models.violation import Violation, ViolationCode


def validate_state(descriptor: StateDescriptor) -> list[Violation]:
    """
    Check every StateDescriptor invariant and return the full list of violations.
    An empty list means the descriptor is valid.

    :param descriptor: the descriptor to check
    :type descriptor: StateDescriptor
    :return: violations, in check order
    :rtype: list[Violation]
    """
    violations = []
    subject = descriptor.hash.hex

    def report(code: ViolationCode, message: str):
        violations.append(Violation(code=code, hash=subject, message=message))

    if descriptor.recipe is not None and descriptor.parent_hash is None:
        report(ViolationCode.ORPHAN_RECIPE, "recipe present but parent_hash absent")
    if descriptor.recipe is None and descriptor.parent_hash is not None:
        report(ViolationCode.ORPHAN_PARENT, "parent_hash present but recipe absent")

    if descriptor.recipe is not None:
        try:
            check_recipe_name(descriptor.recipe.name)
        except ValueError as e:
            report(ViolationCode.INVALID_RECIPE, str(e))

    names = descriptor.nonhashed_attribute_names
    if len(set(names)) != len(names):
        report(ViolationCode.DUPLICATE_ATTRIBUTE, "non-hashed attribute names are not unique")
    overlap = sorted(set(names) & set(descriptor.properties))
    if overlap:
        report(ViolationCode.ATTRIBUTE_PROPERTY_OVERLAP, f"also hashed properties: {', '.join(overlap)}")

    try:
        check_properties(descriptor.properties)
    except EncodingError as e:
        report(ViolationCode.INVALID_PROPERTY, str(e))
        return violations

    try:
        if descriptor.parent_hash is None and descriptor.recipe is None:
            expected = hash_root(descriptor.properties)
        elif descriptor.parent_hash is not None and descriptor.recipe is not None:
            expected = hash_child(descriptor.parent_hash, descriptor.recipe)
        else:
            expected = None
    except EncodingError as e:
        report(ViolationCode.INVALID_PROPERTY, str(e))
        expected = None

    if expected is not None and expected != descriptor.hash:
        report(ViolationCode.HASH_MISMATCH, f"stored {descriptor.hash.short}, recomputed {expected.short}")

    return violations


def inherited_property_violations(
    parent_properties: Mapping[str, Any],
    recipe: RecipeDescriptor,
    properties: Mapping[str, Any],
    subject: Optional[str] = None,
) -> list[Violation]:
    """
    Check a child's properties against its parent and the recipe that produced it. Only the recipe's hashed
    properties may differ from the parent's; any of them the child records must carry the recipe's value.

    Non-root properties are not covered by the child's hash.

    :param parent_properties: properties of the parent state
    :param recipe: descriptor of the recipe on the edge
    :param properties: properties of the child state
    :param subject: child hash reported in the violations
    :return: one violation per inconsistent name, sorted by name
    :rtype: list[Violation]
    """
    violations = []
    for name in sorted(set(parent_properties) | set(recipe.properties)):
        if name in recipe.properties:
            if name not in properties:
                continue
            expected, source = recipe.properties[name], f"recipe {recipe.name}"
        else:
            expected, source = parent_properties[name], "parent"
            if name not in properties:
                violations.append(
                    Violation(code=ViolationCode.INCONSISTENT_PROPERTY, hash=subject, message=f"`{name}` not inherited")
                )
                continue
        if canonical_encode(properties[name]) != canonical_encode(expected):
            violations.append(
                Violation(
                    code=ViolationCode.INCONSISTENT_PROPERTY,
                    hash=subject,
                    message=f"`{name}` is {properties[name]!r}, {source} has {expected!r}",
                )
            )
    return violations


def validate_inheritance(parent: StateDescriptor, child: StateDescriptor) -> list[Violation]:
    """Violations of `inherited_property_violations` for a stored parent/child pair. Roots have none."""
    if child.recipe is None or child.parent_hash != parent.hash:
        return []
    return inherited_property_violations(parent.properties, child.recipe, child.properties, child.hash.hex)
