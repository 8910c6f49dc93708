import json

import pytest
from schema import SchemaError

from recipetree.core.hashing import hash_root
from recipetree.errors import HashPrefixError
from recipetree.utils.misc import load_config_file, resolve_hash_prefix, validate_config

HASHES = sorted(hash_root({"i": i}) for i in range(200))


def test_full_hash_resolves():
    assert resolve_hash_prefix(HASHES[3].hex, HASHES) == HASHES[3]


def test_unique_prefix_resolves():
    target = HASHES[0]
    length = next(n for n in range(4, 65) if sum(h.hex.startswith(target.hex[:n]) for h in HASHES) == 1)
    assert resolve_hash_prefix(target.hex[:length].upper(), HASHES) == target


def test_short_prefix_lists_candidates():
    with pytest.raises(HashPrefixError) as error:
        resolve_hash_prefix(HASHES[0].hex[:1], HASHES)
    assert error.value.candidates == [h for h in HASHES if h.hex.startswith(HASHES[0].hex[:1])]
    assert len(error.value.candidates) > 1


def test_unknown_prefix():
    unknown = next(f"{i:04x}" for i in range(2**16) if not any(h.hex.startswith(f"{i:04x}") for h in HASHES))
    with pytest.raises(HashPrefixError) as error:
        resolve_hash_prefix(unknown, HASHES)
    assert error.value.candidates == []


def test_ambiguous_prefix():
    hashes = [hash_root({"i": i}) for i in range(5000)]
    prefixes = [h.hex[:4] for h in hashes]
    shared = next(prefix for prefix in prefixes if prefixes.count(prefix) > 1)
    with pytest.raises(HashPrefixError, match="ambiguous") as error:
        resolve_hash_prefix(shared, hashes)
    assert len(error.value.candidates) == prefixes.count(shared)


@pytest.mark.parametrize(
    "config",
    [
        {},
        {"executor": {"mode": "multi_threaded", "worker_count": 8}},
        {"demo": {"seed": 0, "learning_rates": [0.1, 1], "fraction": 0}},
        {"experiment": {"log_level": "DEBUG"}},
    ],
)
def test_valid_configs(config):
    assert validate_config(config) == config


@pytest.mark.parametrize(
    "config",
    [
        {"executor": {"worker_count": 0}},
        {"executor": {"mode": "distributed"}},
        {"demo": {"seed": -1}},
        {"demo": {"seed": 2**63}},
        {"experiment": {"log_level": "LOUD"}},
        {"vectordb": {}},
    ],
)
def test_invalid_configs(config):
    with pytest.raises(SchemaError):
        validate_config(config)


def test_load_yaml(tmp_path):
    path = tmp_path / "config.yaml"
    path.write_text("executor:\n  worker_count: 2\ndemo:\n  epochs: 10\n")
    assert load_config_file(str(path)) == {"executor": {"worker_count": 2}, "demo": {"epochs": 10}}


def test_load_empty_yaml(tmp_path):
    path = tmp_path / "config.yml"
    path.write_text("")
    assert load_config_file(str(path)) == {}


def test_load_json(tmp_path):
    path = tmp_path / "config.json"
    path.write_text(json.dumps({"demo": {"n": 5}}))
    assert load_config_file(str(path)) == {"demo": {"n": 5}}


def test_load_unknown_extension(tmp_path):
    path = tmp_path / "config.toml"
    path.write_text("")
    with pytest.raises(ValueError):
        load_config_file(str(path))
