from enum import Enum
from typing import Optional

from pydantic import BaseModel, ConfigDict


class ViolationCode(Enum):
    HASH_MISMATCH = "hash-mismatch"
    ORPHAN_RECIPE = "orphan-recipe"
    ORPHAN_PARENT = "orphan-parent"
    INVALID_RECIPE = "invalid-recipe"
    DUPLICATE_ATTRIBUTE = "duplicate-attribute"
    ATTRIBUTE_PROPERTY_OVERLAP = "attribute-property-overlap"
    INVALID_PROPERTY = "invalid-property"
    NO_ROOT = "no-root"
    MULTI_ROOT = "multi-root"
    DANGLING_EDGE = "dangling-edge"
    CYCLE = "cycle"
    UNREACHABLE = "unreachable"
    EDGE_COUNT = "edge-count"
    INCOMPLETE = "incomplete"
    UNREADABLE = "unreadable"
    DIRECTORY_MISMATCH = "directory-mismatch"
    INCONSISTENT_PROPERTY = "inconsistent-property"


class Violation(BaseModel):
    """A single invariant violation. Checks return these as data instead of raising."""

    model_config = ConfigDict(frozen=True)

    code: ViolationCode
    hash: Optional[str] = None
    message: str = ""

    def __str__(self) -> str:
        subject = self.hash[:8] if self.hash else "-"
        return f"{self.code.value} {subject} {self.message}".rstrip()
