import pytest

from recipetree import Experiment, ExperimentConfig
from recipetree.core.hashing import hash_child, hash_root
from recipetree.demo.pipeline import build_demo_experiment
from recipetree.demo.recipes import WEIGHTS, TrainRecipe
from recipetree.errors import (ForeignPromiseError, FrozenExperimentError, HashPrefixError, IncompatibleStoreError,
                               MultiRootError, NoRootError, NotAnExperimentError)
from recipetree.models import ExecutionMode
from tests.toy_recipes import AppendRecipe, ConstantInitializer, RecordingFunction


@pytest.fixture
def experiment(tmp_path):
    return Experiment(tmp_path / "exp")


@pytest.fixture
def root(experiment):
    return experiment.spawn_new_tree(ConstantInitializer({"name": "root"}))


class TestDefinition:
    def test_hashes_are_known_up_front(self, experiment, root):
        child = root.derive(AppendRecipe("-a"))
        assert root.hash == hash_root({"name": "root"})
        assert child.hash == hash_child(root.hash, AppendRecipe("-a").descriptor)
        assert child.parent is root
        assert experiment.promises == (root, child)

    def test_empty_root_properties(self, tmp_path):
        root = Experiment(tmp_path / "exp").spawn_new_tree(ConstantInitializer())
        assert root.hash.hex == "0e4b5b0efbcd722547b8d4e46c1d985b7e1fac83790a886a009e81a87045c0fd"
        trained = root.derive(TrainRecipe(lr=0.1, epochs=200))
        assert trained.recipe_descriptor.properties == {"lr": 0.1, "epochs": 200}

    def test_tags_do_not_change_the_hash(self, root):
        plain = root.derive(AppendRecipe("-a"))
        tagged = root.derive(AppendRecipe("-a")).add_tag("x", "y")
        assert plain.hash == tagged.hash
        assert tagged.tags == {"x", "y"}

    def test_recipe_properties_change_the_hash(self, root):
        assert root.derive(AppendRecipe("-a")).hash != root.derive(AppendRecipe("-b")).hash

    def test_second_root(self, experiment, root):
        with pytest.raises(MultiRootError):
            experiment.spawn_new_tree(ConstantInitializer({"name": "other"}))

    def test_foreign_parent(self, tmp_path, root):
        other = Experiment(tmp_path / "other")
        other.spawn_new_tree(ConstantInitializer({"name": "root"}))
        with pytest.raises(ForeignPromiseError):
            other.derive(root, AppendRecipe("-a"))

    @pytest.mark.parametrize("tag", ["", 3, None])
    def test_invalid_tags(self, root, tag):
        with pytest.raises(ValueError):
            root.add_tag(tag)

    def test_wrong_types(self, experiment, root):
        with pytest.raises(TypeError):
            root.derive("TrainRecipe")
        with pytest.raises(TypeError):
            root.attach_function(print)
        with pytest.raises(TypeError):
            Experiment(experiment.directory).spawn_new_tree({"name": "root"})

    def test_planning_freezes(self, experiment, root):
        experiment.build_plan()
        assert experiment.is_frozen
        with pytest.raises(FrozenExperimentError):
            root.derive(AppendRecipe("-a"))
        with pytest.raises(FrozenExperimentError):
            root.add_tag("late")
        with pytest.raises(FrozenExperimentError):
            root.attach_function(RecordingFunction("late", []))

    def test_plan_without_root(self, experiment):
        with pytest.raises(NoRootError):
            experiment.build_plan()

    def test_plan_order_is_deterministic(self, tmp_path):
        def define():
            experiment = Experiment(tmp_path / "exp")
            root = experiment.spawn_new_tree(ConstantInitializer({"name": "root"}))
            left = root.derive(AppendRecipe("-l"))
            left.derive(AppendRecipe("-ll"))
            root.derive(AppendRecipe("-r")).derive(AppendRecipe("-rr"))
            return experiment

        plans = [define().build_plan().hashes for _ in range(3)]
        assert plans[0] == plans[1] == plans[2]
        promises = define().promises
        assert plans[0][0] == promises[0].hash
        assert plans[0] == [promise.hash for promise in promises]

    def test_repr(self, root):
        assert repr(root) == f"StatePromise({root.hash.short}, ROOT, tags=[])"


class TestRunAndRestore:
    def test_run_into_a_foreign_directory(self, tmp_path):
        build_demo_experiment(tmp_path / "exp").run()
        other = Experiment(tmp_path / "exp")
        other.spawn_new_tree(ConstantInitializer({"name": "root"}))
        with pytest.raises(IncompatibleStoreError):
            other.run()

    def test_graph_matches_the_promises(self, shared_demo_dir):
        experiment = build_demo_experiment(shared_demo_dir)
        graph = experiment.graph
        assert set(graph.nodes) == {promise.hash for promise in experiment.promises}
        assert graph.root == experiment.promises[0].hash
        assert graph.check_invariants() == []
        assert graph.edge_count == 4

    def test_restore_is_slim(self, shared_demo_dir):
        restored = Experiment.restore(shared_demo_dir)
        assert restored.views == {}
        assert restored.load_report.ok
        assert restored.directory == shared_demo_dir

    def test_restore_filters(self, shared_demo_dir):
        graph = Experiment.restore(shared_demo_dir).graph
        pruned = graph.filter("pruned")
        assert len(pruned) == 2
        assert len(pruned & graph.filter("lr:0.1")) == 1
        assert len(graph.filter("lr:0.1")) == 2
        assert len(graph.nodes - pruned) == 3

    def test_restore_root_state(self, shared_demo_dir):
        restored = Experiment.restore(shared_demo_dir)
        descriptor, payloads = restored.graph.filter("root").restore(0)
        assert descriptor.properties == {"seed": 42, "n": 100, "d": 10}
        assert payloads[WEIGHTS] == (10).to_bytes(8, "little") + bytes(80)

    def test_restore_by_prefix(self, shared_demo_dir):
        restored = Experiment.restore(shared_demo_dir)
        target = restored.graph.filter("pruned")[0]
        descriptor, _ = restored.restore_state(target.hex[:12])
        assert descriptor.hash == target
        assert restored.view(target.hex).hash == target
        with pytest.raises(HashPrefixError):
            restored.restore_state("ab")

    def test_full_restore(self, shared_demo_dir):
        restored = Experiment.restore(shared_demo_dir, slim=False)
        assert set(restored.views) == set(restored.graph.nodes)
        target = restored.graph.filter("pruned")[0]
        assert restored.view(target) is restored.views[target]

    def test_restore_plain_directory(self, tmp_path):
        with pytest.raises(NotAnExperimentError):
            Experiment.restore(tmp_path)


class TestFromConfig:
    def test_from_dict(self, tmp_path):
        config = {"executor": {"mode": "multi_threaded", "worker_count": 3}}
        experiment = Experiment.from_config(tmp_path, config=config)
        assert isinstance(experiment.config, ExperimentConfig)
        assert experiment.config.executor.mode is ExecutionMode.MULTI_THREADED
        assert experiment.config.executor.worker_count == 3

    def test_from_yaml(self, tmp_path):
        path = tmp_path / "config.yaml"
        path.write_text("experiment:\n  log_level: ERROR\n")
        assert Experiment.from_config(tmp_path, config_path=str(path)).config.log_level == "ERROR"

    def test_both_sources(self, tmp_path):
        with pytest.raises(ValueError):
            Experiment.from_config(tmp_path, config_path="config.yaml", config={"demo": {}})
