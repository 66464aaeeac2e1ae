import json
import os

import pytest
import yaml

from modeiso.cli import main


def write_config(tmp_path, **overrides):
    config = {
        "mesh": {"generator": "rectangle",
                 "params": {"lx": 1.0, "ly": 1.0, "nx": 8, "ny": 8}},
        "eigensolver": {"count": 6},
        "isolation": {"target_index": 1},
        "output_dir": str(tmp_path / "out"),
    }
    config.update(overrides)
    path = tmp_path / "run.yaml"
    path.write_text(yaml.safe_dump(config))
    return path


def test_mesh_subcommand(tmp_path, capsys):
    path = write_config(tmp_path)
    assert main(["mesh", "--config", str(path)]) == 0
    assert (tmp_path / "out" / "mesh.vtk").exists()
    assert "81 vertices" in capsys.readouterr().out


def test_eigs_subcommand_outputs(tmp_path):
    path = write_config(tmp_path)
    assert main(["eigs", "--config", str(path)]) == 0
    csv = (tmp_path / "out" / "eigenvalues.csv").read_text().splitlines()
    assert csv[0].startswith("# config_sha256=")
    assert csv[1] == "index,lambda,residual"
    assert len(csv) == 2 + 6
    assert (tmp_path / "out" / "eigenvectors.vtk").exists()


def test_eigs_deterministic_bytes(tmp_path):
    path = write_config(tmp_path)
    main(["eigs", "--config", str(path)])
    first = (tmp_path / "out" / "eigenvalues.csv").read_bytes()
    main(["eigs", "--config", str(path)])
    assert (tmp_path / "out" / "eigenvalues.csv").read_bytes() == first


def test_isolate_subcommand(tmp_path):
    path = write_config(tmp_path)
    assert main(["isolate", "--config", str(path)]) == 0
    report = json.loads((tmp_path / "out" / "isolation.json").read_text())
    assert report["status"] in ("unique", "clustered")
    assert 1 in report["excited"]
    assert report["d"] > report["d_c"]


def test_config_error_exit_code_and_no_outputs(tmp_path):
    bad = tmp_path / "bad.yaml"
    bad.write_text(yaml.safe_dump({
        "mesh": {"generator": "rectangle",
                 "params": {"lx": 1.0, "ly": 1.0, "nx": 8, "ny": 8}},
        "isolation": {"target_index": 1},
        "simulation": {"tau": -1e-3},
        "output_dir": str(tmp_path / "never"),
    }))
    assert main(["simulate", "--config", str(bad)]) == 2
    assert not (tmp_path / "never").exists()


def test_match_before_simulate_fails(tmp_path):
    path = write_config(tmp_path)
    assert main(["match", "--config", str(path)]) == 1


def test_pipeline_end_to_end(tmp_path, capsys):
    path = write_config(tmp_path)
    code = main(["pipeline", "--config", str(path)])
    out_dir = tmp_path / "out"
    assert code == 0, capsys.readouterr()
    match = json.loads((out_dir / "match.json").read_text())
    assert match["correlation"] >= 0.8
    assert set(match["eigenspace"]) == {1, 2}
    history = (out_dir / "derivative_history.csv").read_text().splitlines()
    assert history[1] == "t,derivative_norm"
    assert len(history) > 3
    assert (out_dir / "final_state.vtk").exists()
    assert any(name.startswith("run_") for name in os.listdir(out_dir))
    # match subcommand reuses the saved state
    assert main(["match", "--config", str(path)]) == 0


def test_seed_override_changes_outputs(tmp_path):
    path = write_config(tmp_path)
    out_a = tmp_path / "a"
    out_b = tmp_path / "b"
    main(["pipeline", "--config", str(path), "--out", str(out_a)])
    main(["pipeline", "--config", str(path), "--out", str(out_b),
          "--seed", "99"])
    a = (out_a / "final_state.vtk").read_bytes()
    b = (out_b / "final_state.vtk").read_bytes()
    assert a != b


def test_unknown_command_rejected(tmp_path):
    path = write_config(tmp_path)
    with pytest.raises(SystemExit):
        main(["transmogrify", "--config", str(path)])
