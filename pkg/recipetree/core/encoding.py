"""
Canonical byte encoding of property values (encoding v1).

Every value starts with a one-byte type tag. Lengths and counts are 8-byte big-endian unsigned integers, ints are
8-byte big-endian two's complement and floats are their 8-byte big-endian IEEE-754 bit pattern. Map entries are
sorted by the raw UTF-8 bytes of their keys, so the encoding does not depend on insertion order.
"""

import math
import struct
from collections.abc import Mapping
from typing import Any, Union

from recipetree.errors import EncodingError

NULL_TAG = b"N"
BOOL_TAG = b"B"
INT_TAG = b"I"
FLOAT_TAG = b"F"
STR_TAG = b"S"
LIST_TAG = b"L"
MAP_TAG = b"M"

INT64_MIN = -(2**63)
INT64_MAX = 2**63 - 1

PropertyValue = Union[None, bool, int, float, str, list, tuple, dict]


def _length(count: int) -> bytes:
    return struct.pack(">Q", count)


def _encode_key(key: Any) -> bytes:
    if not isinstance(key, str):
        raise EncodingError(f"Map keys must be strings, got {type(key).__name__}")
    try:
        return key.encode("utf-8")
    except UnicodeEncodeError as e:
        raise EncodingError(f"Map key {key!r} is not valid UTF-8") from e


def _encode_str(value: str) -> bytes:
    try:
        raw = value.encode("utf-8")
    except UnicodeEncodeError as e:
        raise EncodingError(f"String {value!r} is not valid UTF-8") from e
    return STR_TAG + _length(len(raw)) + raw


def _encode_into(value: Any, out: bytearray) -> None:
    # bool before int: bool is an int subclass
    if value is None:
        out += NULL_TAG
    elif isinstance(value, bool):
        out += BOOL_TAG + (b"\x01" if value else b"\x00")
    elif isinstance(value, int):
        if not INT64_MIN <= value <= INT64_MAX:
            raise EncodingError(f"Int {value} does not fit in 64 bits")
        out += INT_TAG + struct.pack(">q", value)
    elif isinstance(value, float):
        if math.isnan(value):
            raise EncodingError("NaN cannot be used as a property value")
        out += FLOAT_TAG + struct.pack(">d", value)
    elif isinstance(value, str):
        out += _encode_str(value)
    elif isinstance(value, (list, tuple)):
        out += LIST_TAG + _length(len(value))
        for item in value:
            _encode_into(item, out)
    elif isinstance(value, Mapping):
        entries = sorted(((_encode_key(key), item) for key, item in value.items()), key=lambda entry: entry[0])
        out += MAP_TAG + _length(len(entries))
        for raw_key, item in entries:
            out += STR_TAG + _length(len(raw_key)) + raw_key
            _encode_into(item, out)
    else:
        raise EncodingError(f"Unsupported property value type: {type(value).__name__}")


def canonical_encode(value: PropertyValue) -> bytes:
    """
    Encode a property value into its canonical byte form.

    :param value: None, bool, int, float, str, list/tuple or str-keyed dict, nested arbitrarily
    :type value: PropertyValue
    :raises EncodingError: NaN floats, out-of-range ints, non-string or non-UTF-8 keys, unsupported types
    :return: the canonical encoding
    :rtype: bytes
    """
    out = bytearray()
    _encode_into(value, out)
    return bytes(out)


def check_property_value(value: Any) -> Any:
    """Raise `EncodingError` if `value` is not encodable, return it unchanged otherwise."""
    canonical_encode(value)
    return value


def check_properties(properties: Any) -> dict[str, Any]:
    """Properties are always a map at the top level."""
    if not isinstance(properties, Mapping):
        raise EncodingError(f"Properties must be a map, got {type(properties).__name__}")
    check_property_value(properties)
    return dict(properties)
