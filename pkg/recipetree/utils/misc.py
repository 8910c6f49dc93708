import json
import logging
import os
from typing import Any, Iterable

import yaml
from schema import And, Optional, Or, Schema

from recipetree.constants import MIN_HASH_PREFIX
from recipetree.core.hashing import StateHash
from recipetree.errors import HashPrefixError

logger = logging.getLogger(__name__)

_positive_int = And(int, lambda value: value >= 1)


def validate_config(config_data):
    schema = Schema(
        {
            Optional("experiment"): {
                Optional("log_level"): Or("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"),
            },
            Optional("executor"): {
                Optional("mode"): Or("single_threaded", "multi_threaded"),
                Optional("worker_count"): _positive_int,
                Optional("show_progress"): bool,
                Optional("verify_cache_hits"): bool,
            },
            Optional("demo"): {
                Optional("seed"): And(int, lambda value: 0 <= value < 2**63),
                Optional("n"): _positive_int,
                Optional("d"): _positive_int,
                Optional("epochs"): And(int, lambda value: value >= 0),
                Optional("learning_rates"): [Or(float, int)],
                Optional("fraction"): Or(float, int),
            },
        }
    )

    return schema.validate(config_data)


def load_config_file(config_path: str) -> dict[str, Any]:
    """
    Read and validate a YAML or JSON config file.

    :param config_path: path to a `.yaml`, `.yml` or `.json` file
    :type config_path: str
    :raises ValueError: unsupported file extension
    :raises schema.SchemaError: the file does not match the config schema
    :return: the validated config
    :rtype: dict[str, Any]
    """
    file_extension = os.path.splitext(config_path)[1]
    with open(config_path, "r", encoding="UTF-8") as file:
        if file_extension in [".yaml", ".yml"]:
            config_data = yaml.safe_load(file) or {}
        elif file_extension == ".json":
            config_data = json.load(file)
        else:
            raise ValueError("config_path must be a path to a YAML or JSON file.")
    logger.debug(f"Loaded config from {config_path}")
    return validate_config(config_data)


def resolve_hash_prefix(prefix: str, hashes: Iterable[StateHash]) -> StateHash:
    """
    Resolve a git-style hash prefix against known hashes.

    :param prefix: full hash or a prefix of at least `MIN_HASH_PREFIX` hex characters
    :type prefix: str
    :param hashes: the hashes to match against
    :type hashes: Iterable[StateHash]
    :raises HashPrefixError: too short, unknown, or ambiguous. `candidates` lists the matching hashes.
    :return: the single matching hash
    :rtype: StateHash
    """
    prefix = prefix.strip().lower()
    matches = sorted(h for h in hashes if h.hex.startswith(prefix))
    if len(prefix) < MIN_HASH_PREFIX:
        raise HashPrefixError(
            f"Hash prefix {prefix!r} is shorter than {MIN_HASH_PREFIX} characters ({len(matches)} candidates)",
            matches,
        )
    if not matches:
        raise HashPrefixError(f"No state matches {prefix!r}")
    if len(matches) > 1:
        raise HashPrefixError(f"Hash prefix {prefix!r} is ambiguous ({len(matches)} candidates)", matches)
    return matches[0]
