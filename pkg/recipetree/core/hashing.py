import hashlib
from functools import total_ordering
from typing import TYPE_CHECKING, Any, Mapping

from recipetree.constants import CHILD_HASH_PREFIX, ROOT_HASH_PREFIX
from recipetree.core.encoding import canonical_encode, check_properties

if TYPE_CHECKING:
    from recipetree.core.descriptors import RecipeDescriptor

DIGEST_SIZE = 32
_HEX_DIGITS = frozenset("0123456789abcdef")


@total_ordering
class StateHash:
    """
    Content hash of a state: a 32-byte SHA-256 digest, written as 64 lowercase hex characters.
    Hashes order by their text form.
    """

    __slots__ = ("_digest",)

    def __init__(self, digest: bytes):
        if not isinstance(digest, (bytes, bytearray)) or len(digest) != DIGEST_SIZE:
            raise ValueError(f"A state hash is {DIGEST_SIZE} bytes, got {digest!r}")
        object.__setattr__(self, "_digest", bytes(digest))

    def __setattr__(self, name: str, value: Any):
        raise AttributeError("StateHash is immutable")

    @classmethod
    def from_hex(cls, text: str) -> "StateHash":
        if not isinstance(text, str) or len(text) != 2 * DIGEST_SIZE or not set(text) <= _HEX_DIGITS:
            raise ValueError(f"Not a state hash: {text!r}")
        return cls(bytes.fromhex(text))

    @property
    def digest(self) -> bytes:
        return self._digest

    @property
    def hex(self) -> str:
        return self._digest.hex()

    @property
    def short(self) -> str:
        return self.hex[:8]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, StateHash):
            return NotImplemented
        return self._digest == other._digest

    def __lt__(self, other: "StateHash") -> bool:
        if not isinstance(other, StateHash):
            return NotImplemented
        return self.hex < other.hex

    def __hash__(self) -> int:
        return hash(self._digest)

    def __reduce__(self):
        return (StateHash, (self._digest,))

    def __str__(self) -> str:
        return self.hex

    def __repr__(self) -> str:
        return f"StateHash({self.short})"


def hash_root(properties: Mapping[str, Any]) -> StateHash:
    """
    Hash of a root state: SHA-256 over `sg-root:` followed by the canonical encoding of its properties.

    :param properties: the root's hashed properties
    :type properties: Mapping[str, Any]
    :raises EncodingError: if the properties cannot be encoded
    :return: the root hash
    :rtype: StateHash
    """
    check_properties(properties)
    return StateHash(hashlib.sha256(ROOT_HASH_PREFIX + canonical_encode(properties)).digest())


def hash_child(parent: StateHash, recipe: "RecipeDescriptor") -> StateHash:
    """
    Hash of a child state, computed from its parent's hash and the recipe that produces it.

    The child's own contents never enter the hash, so the hash is known before the recipe runs and can be
    used to look the state up in the cache.

    :param parent: hash of the parent state
    :type parent: StateHash
    :param recipe: descriptor of the recipe applied to the parent
    :type recipe: RecipeDescriptor
    :return: the child hash
    :rtype: StateHash
    """
    data = CHILD_HASH_PREFIX + parent.digest + canonical_encode(recipe.name) + canonical_encode(recipe.properties)
    return StateHash(hashlib.sha256(data).digest())
