import pytest
import yaml

from modeiso.config import ConfigError, RunConfig, load_config

MINIMAL = {
    "mesh": {"generator": "rectangle",
             "params": {"lx": 1.0, "ly": 1.0, "nx": 4, "ny": 4}},
    "isolation": {"target_index": 1},
}


def test_minimal_config_defaults():
    config = RunConfig.parse(MINIMAL)
    assert config.kinetics.model == "schnakenberg"
    assert config.eigensolver["count"] == 12
    assert config.simulation["tau"] == 1e-3
    assert config.simulation["stop_tol"] == 1e-4
    assert config.match["threshold"] == 0.8
    assert config.output_dir == "out"


def test_mesh_build_from_generator():
    mesh = RunConfig.parse(MINIMAL).mesh.build()
    assert mesh.n_vertices == 25


def test_unknown_key_rejected_with_path():
    bad = dict(MINIMAL, simulation={"tua": 1e-3})
    with pytest.raises(ConfigError, match="simulation"):
        RunConfig.parse(bad)


def test_unknown_generator_rejected():
    bad = dict(MINIMAL, mesh={"generator": "torus"})
    with pytest.raises(ConfigError, match="generator"):
        RunConfig.parse(bad)


def test_generator_and_off_path_mutually_exclusive():
    bad = dict(MINIMAL, mesh={"generator": "disk", "off_path": "x.off"})
    with pytest.raises(ConfigError, match="exactly one"):
        RunConfig.parse(bad)


def test_negative_tau_rejected():
    bad = dict(MINIMAL, simulation={"tau": -1e-3})
    with pytest.raises(ConfigError, match="tau"):
        RunConfig.parse(bad)


def test_isolation_needs_target_or_pair():
    bad = dict(MINIMAL, isolation={})
    with pytest.raises(ConfigError, match="target_index"):
        RunConfig.parse(bad)
    ok = dict(MINIMAL, isolation={"d": 10.0, "gamma": 15.0})
    assert RunConfig.parse(ok).isolation["d"] == 10.0


def test_unknown_deformation_rejected():
    bad = dict(MINIMAL, mesh={"generator": "icosphere",
                              "params": {"refinement": 1},
                              "deformation": "banana"})
    with pytest.raises(ConfigError, match="deformation"):
        RunConfig.parse(bad)


def test_digest_stable_and_sensitive():
    a = RunConfig.parse(MINIMAL).digest()
    b = RunConfig.parse(MINIMAL).digest()
    assert a == b and len(a) == 16
    changed = dict(MINIMAL, simulation={"seed": 9})
    assert RunConfig.parse(changed).digest() != a


def test_load_config_yaml(tmp_path):
    path = tmp_path / "run.yaml"
    path.write_text(yaml.safe_dump(MINIMAL))
    config = load_config(path)
    assert config.mesh.generator == "rectangle"


def test_load_config_missing_file(tmp_path):
    with pytest.raises(ConfigError):
        load_config(tmp_path / "nope.yaml")


def test_load_config_bad_yaml(tmp_path):
    path = tmp_path / "bad.yaml"
    path.write_text("mesh: [unclosed")
    with pytest.raises(ConfigError, match="YAML"):
        load_config(path)


def test_kinetics_params_forwarded():
    cfg = dict(MINIMAL, kinetics={"model": "gierer_meinhardt",
                                  "params": {"a": 0.2}})
    model = RunConfig.parse(cfg).kinetics.build()
    assert model.params["a"] == 0.2
    bad = dict(MINIMAL, kinetics={"model": "schnakenberg",
                                  "params": {"q": 1.0}})
    with pytest.raises(ConfigError):
        RunConfig.parse(bad).kinetics.build()
