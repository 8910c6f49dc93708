import logging

from recipetree.config import DemoConfig
from recipetree.demo.data import generate_data
from recipetree.demo.model import decode_weights, magnitude_prune, mse_loss, train
from recipetree.demo.pipeline import build_demo_experiment, lr_tag
from recipetree.demo.recipes import WEIGHTS, EvaluateFunction
from recipetree.experiment import Experiment
from recipetree.store import directory_digest


def test_lr_tag():
    assert lr_tag(0.1) == "lr:0.1"
    assert lr_tag(1) == "lr:1.0"


def test_definition(tmp_path):
    experiment = build_demo_experiment(tmp_path / "demo")
    root, t1, p1, t2, p2 = experiment.promises
    assert root.tags == {"root"}
    assert (t1.tags, p1.tags) == ({"lr:0.1"}, {"pruned", "lr:0.1"})
    assert (t2.tags, p2.tags) == ({"lr:0.01"}, {"pruned", "lr:0.01"})
    assert [p.recipe_descriptor.name for p in (t1, p1, t2, p2)] == ["TrainRecipe", "PruneRecipe"] * 2
    assert t1.recipe_descriptor.properties == {"lr": 0.1, "epochs": 200}
    assert p1.recipe_descriptor.properties == {"fraction": 0.5}
    assert [f.name for f in p1.functions] == ["EvaluateFunction"]
    assert root.initializer.properties == {"seed": 42, "n": 100, "d": 10}
    assert experiment.build_plan().hashes == [p.hash for p in experiment.promises]


def test_learning_rates_override(tmp_path):
    experiment = build_demo_experiment(tmp_path / "demo", DemoConfig(learning_rates=[0.5]), learning_rates=[0.2, 0.3])
    assert len(experiment.promises) == 5
    assert experiment.promises[1].recipe.lr == 0.2


def test_stored_weights_match_a_direct_computation(shared_demo_dir, caplog):
    data = generate_data(42, 100, 10)
    trained, _ = train(data, [0.0] * 10, 0.1, 200)
    pruned = magnitude_prune(trained, 0.5)

    restored = Experiment.restore(shared_demo_dir)
    node = (restored.graph.filter("pruned") & restored.graph.filter("lr:0.1"))[0]
    assert decode_weights(restored.view(node).payload(WEIGHTS)) == pruned
    assert sum(1 for w in pruned if w == 0.0) == 5

    caplog.set_level(logging.INFO, logger="recipetree.demo.recipes")
    build_demo_experiment(shared_demo_dir).run()
    assert f"EVAL {node.short} loss={mse_loss(data, pruned)!r}" in caplog.messages


def test_pruned_states_keep_the_training_properties(shared_demo_dir):
    restored = Experiment.restore(shared_demo_dir)
    for node in restored.graph.filter("pruned"):
        properties = restored.graph.get(node).properties
        assert properties["fraction"] == 0.5
        assert properties["epochs"] == 200
        assert properties["seed"] == 42
        assert properties["lr"] in (0.1, 0.01)


def test_fresh_directories_are_identical(tmp_path, shared_demo_dir):
    build_demo_experiment(tmp_path / "again").run()
    assert directory_digest(tmp_path / "again") == directory_digest(shared_demo_dir)


def test_divergent_branch_fails_alone(tmp_path):
    experiment = build_demo_experiment(tmp_path / "demo", learning_rates=[0.1, 100.0])
    _, t1, p1, t2, p2 = experiment.promises
    report = experiment.run()
    assert report.executed == [experiment.promises[0].hash, t1.hash, p1.hash]
    assert report.failed == [t2.hash]
    assert report.blocked == [p2.hash]


def test_evaluation_is_pure(shared_demo_dir, caplog):
    caplog.set_level(logging.INFO, logger="recipetree.demo.recipes")
    restored = Experiment.restore(shared_demo_dir)
    node = restored.graph.filter("pruned")[0]
    view = restored.view(node)
    evaluate = EvaluateFunction()
    assert evaluate(view) == evaluate(view)
    assert caplog.messages[-1] == caplog.messages[-2]
    assert len(Experiment.restore(shared_demo_dir).graph) == 5


def test_evaluation_lines_reach_stderr_without_cli(tmp_path, capsys):
    experiment = build_demo_experiment(tmp_path / "demo", config=DemoConfig(epochs=5))
    assert logging.getLogger("recipetree.demo.recipes").getEffectiveLevel() == logging.INFO
    experiment.run()
    assert capsys.readouterr().err.count("] EVAL ") == 2
