import math

import pytest
from pydantic import ValidationError

from recipetree.core.descriptors import RecipeDescriptor, StateDescriptor
from recipetree.core.hashing import hash_root
from recipetree.core.validation import inherited_property_violations, validate_inheritance, validate_state
from recipetree.models.violation import ViolationCode
from tests.toy_recipes import make_child, make_root


def codes(descriptor):
    return [violation.code for violation in validate_state(descriptor)]


def test_valid_root_and_child():
    root = make_root({"seed": 1}, attributes=["weights"])
    assert validate_state(root) == []
    assert validate_state(make_child(root, "Train", {"lr": 0.1})) == []


def test_hash_mismatch():
    root = make_root({"seed": 1})
    tampered = root.model_copy(update={"properties": {"seed": 2}})
    assert codes(tampered) == [ViolationCode.HASH_MISMATCH]


def test_orphan_recipe():
    root = make_root()
    child = make_child(root)
    assert codes(child.model_copy(update={"parent_hash": None})) == [ViolationCode.ORPHAN_RECIPE]


def test_orphan_parent():
    root = make_root()
    child = make_child(root)
    assert codes(child.model_copy(update={"recipe": None})) == [ViolationCode.ORPHAN_PARENT]


def test_invalid_recipe_name():
    root = make_root()
    child = make_child(root)
    bad_recipe = RecipeDescriptor.model_construct(name="a/b", properties={})
    assert ViolationCode.INVALID_RECIPE in codes(child.model_copy(update={"recipe": bad_recipe}))


def test_attribute_names_unique_and_disjoint_from_properties():
    root = make_root({"weights": 1}, attributes=["weights", "weights"])
    assert codes(root) == [ViolationCode.DUPLICATE_ATTRIBUTE, ViolationCode.ATTRIBUTE_PROPERTY_OVERLAP]


def test_invalid_property_is_reported_not_raised():
    descriptor = StateDescriptor(hash=hash_root({}), properties={"x": math.nan})
    assert codes(descriptor) == [ViolationCode.INVALID_PROPERTY]


def test_violation_text():
    root = make_root({"seed": 1})
    (violation,) = validate_state(root.model_copy(update={"properties": {"seed": 2}}))
    assert str(violation).startswith(f"hash-mismatch {root.hash.short} ")


class TestRecipeDescriptor:
    @pytest.mark.parametrize("name", ["", "a/b", "a\\b", "tab\there", "nl\n"])
    def test_rejects_bad_names(self, name):
        with pytest.raises(ValidationError):
            RecipeDescriptor(name=name, properties={})

    def test_rejects_unencodable_properties(self):
        with pytest.raises(ValidationError):
            RecipeDescriptor(name="Train", properties={"lr": math.nan})

    def test_is_frozen(self):
        recipe = RecipeDescriptor(name="Train", properties={"lr": 0.1})
        with pytest.raises(ValidationError):
            recipe.name = "Prune"

    def test_with_tags_keeps_hash(self):
        root = make_root()
        tagged = root.with_tags(frozenset({"a"}))
        assert tagged.hash == root.hash
        assert tagged.tags == {"a"}
        assert validate_state(tagged) == []


class TestInheritance:
    def test_consistent_child(self):
        root = make_root({"seed": 1})
        child = make_child(root, "Train", {"lr": 0.1})
        assert validate_inheritance(root, child) == []
        assert validate_inheritance(child, make_child(child, "Train", {"lr": 0.01})) == []

    def test_root_has_no_inheritance(self):
        root = make_root({"seed": 1})
        assert validate_inheritance(root, root) == []

    def test_rewritten_inherited_property(self):
        root = make_root({"seed": 1})
        child = make_child(root, "Train", {"lr": 0.1})
        tampered = child.model_copy(update={"properties": {"seed": 2, "lr": 0.1}})
        assert validate_state(tampered) == []
        (violation,) = validate_inheritance(root, tampered)
        assert violation.code is ViolationCode.INCONSISTENT_PROPERTY
        assert violation.hash == child.hash.hex
        assert "`seed` is 2, parent has 1" in violation.message

    def test_property_disagreeing_with_the_recipe(self):
        root = make_root({"seed": 1})
        recipe = RecipeDescriptor(name="Train", properties={"lr": 0.1})
        (violation,) = inherited_property_violations(root.properties, recipe, {"seed": 1, "lr": 0.5})
        assert "recipe Train has 0.1" in violation.message

    def test_dropped_property(self):
        recipe = RecipeDescriptor(name="Train", properties={"lr": 0.1})
        (violation,) = inherited_property_violations({"seed": 1}, recipe, {"lr": 0.1})
        assert violation.message == "`seed` not inherited"

    def test_recipe_properties_need_not_be_recorded(self):
        recipe = RecipeDescriptor(name="Train", properties={"lr": 0.1})
        assert inherited_property_violations({"seed": 1}, recipe, {"seed": 1}) == []

    def test_types_are_compared_canonically(self):
        recipe = RecipeDescriptor(name="Step", properties={})
        assert len(inherited_property_violations({"flag": True}, recipe, {"flag": 1})) == 1
