from recipetree.core.descriptors import RecipeDescriptor, StateDescriptor  # noqa: F401
from recipetree.core.encoding import canonical_encode  # noqa: F401
from recipetree.core.hashing import StateHash, hash_child, hash_root  # noqa: F401
from recipetree.core.validation import validate_state  # noqa: F401
