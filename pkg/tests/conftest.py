import pytest

from recipetree.core.hashing import hash_root
from recipetree.demo.pipeline import build_demo_experiment
from recipetree.store import ExperimentStore


def _run_demo(path, **kwargs):
    build_demo_experiment(path, **kwargs).run()
    return path


@pytest.fixture
def store(tmp_path):
    return ExperimentStore.init_experiment_dir(tmp_path / "exp", hash_root({"name": "root"}))


@pytest.fixture
def demo_dir(tmp_path):
    """A freshly run demo store the test may modify."""
    return _run_demo(tmp_path / "demo")


@pytest.fixture(scope="session")
def shared_demo_dir(tmp_path_factory):
    """A demo store shared by read-only tests."""
    return _run_demo(tmp_path_factory.mktemp("shared") / "demo")
