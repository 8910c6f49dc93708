from pathlib import Path

import yaml

from recipetree.utils.misc import validate_config

CONFIG_DIR = Path(__file__).resolve().parent.parent / "configs"
CONFIG_YAMLS = ["demo.yaml", "multi_threaded.yaml", "verify.yaml"]


def test_all_config_yamls():
    """Test that all config yamls are valid."""
    for config_yaml in CONFIG_YAMLS:
        with open(CONFIG_DIR / config_yaml, "r") as f:
            config = yaml.safe_load(f)
        assert config is not None

        try:
            validate_config(config)
        except Exception as e:
            print(f"Error in {config_yaml}: {e}")
            raise e
