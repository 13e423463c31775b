import pytest

from pottslab.exc import ConfigError
from pottslab.experiments import (
    ExperimentConfig,
    load_config,
    parse_config,
    render_config,
)

CONFIG = """
# a two-dimensional slab
model.d = 2
model.n = 6
model.q = 3
model.beta = 1.1

boundary.name = top-bottom
boundary.top = 3
run.sweeps = 40
anneal.volumes = {"2": 0.25}
ensemble.thresholds = [0.2, 0.1]
"""


def test_parse_applies_fields_over_defaults():
    config = parse_config(CONFIG)

    assert config.model.d == 2
    assert config.model.beta == 1.1
    assert config.boundary.name == "top-bottom"
    assert config.boundary.top == 3
    assert config.run.sweeps == 40
    assert config.run.replicas == 1
    assert config.anneal.volumes == {2: 0.25}
    assert config.ensemble.thresholds == (0.2, 0.1)


def test_empty_text_gives_defaults():
    assert parse_config("") == ExperimentConfig()


def test_render_lists_every_field_and_parses_back():
    config = parse_config(CONFIG)

    text = render_config(config)

    assert "model.beta = 1.1\n" in text
    assert 'boundary.name = "top-bottom"\n' in text
    assert "run.burn_in = null\n" in text
    assert parse_config(text) == config
    assert render_config(parse_config(text)) == text


def test_boundary_section_builds_the_spec():
    config = parse_config(CONFIG)

    spec = config.boundary.spec(config.model.d, config.model.q)

    assert spec.name == "top-bottom"
    assert spec.part_of_face(1, 1) == 3
    assert spec.part_of_face(1, 0) == 2


def test_tau_section_builds_the_model():
    config = parse_config('tau.kind = axis\ntau.axis_values = [1.0, 2.0]\ntau.rule = "l1"')

    tau = config.tau.model(2)

    assert tau.axis_value(1) == pytest.approx(2.0)


def test_overrides_are_layered():
    config = parse_config(CONFIG).with_overrides(["model.beta=0.5", "run.seed = 7"])

    assert config.model.beta == 0.5
    assert config.run.seed == 7
    assert config.model.n == 6


@pytest.mark.parametrize(
    ("text", "message"),
    [
        ("model.beta", "expected 'section.field = value'"),
        ("beta = 1.0", "must have the form section.field"),
        ("model.beta.x = 1.0", "must have the form section.field"),
        ("lattice.n = 4", "no section 'lattice'"),
        ("model.size = 4", "unknown config key 'model.size'"),
        ("model.q = 0", "invalid config key 'model.q'"),
        ("run.sweeps = many", "invalid config key 'run.sweeps'"),
        ("anneal.initial = spiral", "invalid config key 'anneal.initial'"),
    ],
)
def test_bad_config_text(text, message):
    with pytest.raises(ConfigError, match=message):
        parse_config(text)


def test_load_config(tmp_path):
    path = tmp_path / "lab.cfg"
    path.write_text(CONFIG, encoding="utf-8")

    assert load_config(path) == parse_config(CONFIG)


def test_missing_config_file(tmp_path):
    with pytest.raises(ConfigError, match="cannot read config file"):
        load_config(tmp_path / "missing.cfg")
