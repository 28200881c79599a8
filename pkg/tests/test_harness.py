import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from purifier import Dataset, ScorerConfig
from purifier._parallel import resolve_threads
from purifier.errors import ConfigError
from purifier.harness.cli import main
from purifier.harness.config import RunConfig, config_from_dict, load_config
from purifier.harness.io import read_dataset, read_json, write_dataset, write_json
from purifier.harness.sweep import COLUMNS, run_sweep


@settings(max_examples=50, deadline=None)
@given(
    arrays(np.float64, st.tuples(st.integers(1, 6), st.integers(1, 4)),
           elements=st.floats(allow_nan=False, allow_infinity=False, width=64)),
    st.data(),
)
def test_dataset_round_trip(tmp_path_factory, X, data):
    labels = data.draw(st.lists(st.sampled_from([0, 1, -1]), min_size=X.shape[0], max_size=X.shape[0]))
    ds = Dataset(np.arange(X.shape[0]) * 3, X, labels)
    path = tmp_path_factory.mktemp("rt") / "d.csv"
    write_dataset(ds, path)
    back = read_dataset(path)
    assert np.array_equal(back.features, ds.features)
    assert np.array_equal(back.ids, ds.ids) and np.array_equal(back.labels, ds.labels)
    assert b"\r" not in path.read_bytes()


def test_dataset_header(tmp_path):
    write_dataset(Dataset([0], [[0.1, 2.0]], [1]), tmp_path / "d.csv")
    assert (tmp_path / "d.csv").read_text().splitlines() == ["id,label,f0,f1", "0,1,0.10000000000000001,2"]


def test_bad_dataset_reports_line(tmp_path):
    p = tmp_path / "d.csv"
    p.write_text("id,label,f0\n0,0,1.0\n1,0,abc\n")
    with pytest.raises(ConfigError, match=r"d.csv:3"):
        read_dataset(p)
    p.write_text("id,lbl,f0\n")
    with pytest.raises(ConfigError, match=r":1: header"):
        read_dataset(p)


def test_json_is_versioned_and_stable(tmp_path):
    write_json({"a": np.float64(0.1), "b": np.arange(3)}, tmp_path / "x.json")
    doc = read_json(tmp_path / "x.json")
    assert doc == {"schema_version": 1, "a": 0.1, "b": [0, 1, 2]}


def test_invalid_json_reports_position(tmp_path):
    p = tmp_path / "c.json"
    p.write_text('{\n  "k": 5,\n  oops\n}')
    with pytest.raises(ConfigError, match=r"c.json:3:"):
        load_config(p)


@pytest.mark.parametrize(
    "doc, field",
    [
        ({"k": 0}, "k"),
        ({"t": 1.5}, "t"),
        ({"stage1_scorer": {"kind": "tree"}}, "stage1_scorer"),
        ({"dataset": {"synthetic": {"alpha": 2}}}, "dataset.synthetic"),
        ({"sweep": {"alpha_list": [1.0]}}, "sweep.alpha_list"),
        ({"nonsense": 1}, "unknown top-level"),
        ({"dataset": {}}, "dataset"),
    ],
)
def test_config_field_diagnostics(doc, field):
    with pytest.raises(ConfigError, match=field):
        config_from_dict(doc)


def test_config_defaults_materialised():
    cfg = config_from_dict({})
    d = cfg.to_dict()
    assert d["k"] == 5 and d["t"] == 0.4
    assert d["sweep"]["k_list"] == [1, 3, 5, 7]
    assert d["sweep"]["alpha_list"] == [0.0, 0.1, 0.2, 0.4]
    assert d["stage2_scorer"] == d["stage1_scorer"] == ScorerConfig().to_dict()
    assert config_from_dict(d).to_dict() == d


def test_threads_resolution(monkeypatch):
    monkeypatch.delenv("PURIFIER_THREADS", raising=False)
    assert resolve_threads(None) == 1
    monkeypatch.setenv("PURIFIER_THREADS", "3")
    assert resolve_threads(None) == 3
    assert resolve_threads(2) == 2
    assert resolve_threads(0) >= 1


def _write_cfg(tmp_path, doc):
    p = tmp_path / "cfg.json"
    p.write_text(json.dumps(doc))
    return str(p)


def test_cli_pipeline(tmp_path, capsys):
    cfg = _write_cfg(tmp_path, {"dataset": {"synthetic": {"n_train": 120, "n_test_normal": 40, "n_test_anomalous": 40}}})
    out = tmp_path / "o"
    for cmd in ("generate", "screen", "detect"):
        assert main([cmd, "--config", cfg, "--out", str(out)]) == 0
    assert main(["evaluate", "--config", cfg, "--out", str(out), str(out / "stage1.json"), str(out / "detection.json")]) == 0
    metrics = read_json(out / "metrics.json")
    screen, detect = metrics["results"]
    assert screen["breakdown"]["retained_normal"] + screen["breakdown"]["retained_anomalous"] == 48
    assert len(screen["per_model_breakdown"]) == 5
    assert 0.5 <= detect["auroc"] <= 1.0 and detect["fitted_size"] == 48
    stage1 = read_json(out / "stage1.json")
    assert stage1["schema_version"] == 1 and len(stage1["score_matrix"]) == 120
    assert read_dataset(out / "purified.csv").ids.tolist() == stage1["retained_ids"]


def test_cli_file_dataset_and_pure_path(tmp_path):
    gen = _write_cfg(tmp_path, {"dataset": {"synthetic": {"n_train": 60, "n_test_normal": 10, "n_test_anomalous": 10}}})
    assert main(["generate", "--config", gen, "--out", str(tmp_path / "data")]) == 0
    files = tmp_path / "files.json"
    files.write_text(json.dumps({
        "dataset": {"train_path": "data/train.csv", "test_path": "data/test.csv"},
        "k": 3, "pure_path": "run/stage1.json", "output_dir": "run",
    }))
    assert main(["screen", "--config", str(files)]) == 0
    assert main(["detect", "--config", str(files)]) == 0
    det = read_json(tmp_path / "run" / "detection.json")
    assert det["trainset_id_list"] == read_json(tmp_path / "run" / "stage1.json")["retained_ids"]


def test_cli_errors_are_machine_readable(tmp_path, capsys):
    code = main(["screen", "--config", str(tmp_path / "missing.json")])
    assert code == 2
    err = json.loads(capsys.readouterr().err.strip())
    assert err["error"] == "config"
    bad = _write_cfg(tmp_path, {"k": 600})
    code = main(["screen", "--config", bad, "--out", str(tmp_path / "o")])
    assert code != 0
    assert json.loads(capsys.readouterr().err.strip())["error"] == "invalid_partition"


def test_ablate_single_triple(tmp_path):
    cfg = _write_cfg(tmp_path, {"sweep": {"k_list": [5], "alpha_list": [0.1], "seed_list": [0]}})
    assert main(["ablate", "--config", cfg, "--out", str(tmp_path / "o"), "--emit-svg"]) == 0
    lines = (tmp_path / "o" / "sweep.csv").read_text().splitlines()
    assert lines[0].split(",") == list(COLUMNS)
    assert len(lines) == 2
    assert (tmp_path / "o" / "retained_alpha_0.1.svg").read_text().startswith("<svg")


def test_ablate_failure_names_triple(tmp_path, capsys):
    cfg = _write_cfg(tmp_path, {"dataset": {"synthetic": {"n_train": 10}}, "sweep": {"k_list": [5], "alpha_list": [0.1], "seed_list": [3]}})
    assert main(["ablate", "--config", cfg, "--out", str(tmp_path / "o")]) == 6
    err = json.loads(capsys.readouterr().err.strip())
    assert err["error"] == "sweep" and "alpha=0.1, k=5, seed=3" in err["message"]


def test_sweep_row_count_and_order():
    cfg = RunConfig(seed_list=(2, 1), k_list=(3, 1))
    report = run_sweep(cfg, threads=4)
    assert len(report) == 4 * 2 * 2
    keys = [(r["alpha"], r["k"], r["seed"]) for r in report.rows]
    assert keys == sorted(keys)


def test_seed_override(tmp_path):
    cfg = _write_cfg(tmp_path, {"dataset": {"synthetic": {"n_train": 50}}})
    main(["generate", "--config", cfg, "--out", str(tmp_path / "a"), "--seed", "5"])
    main(["generate", "--config", cfg, "--out", str(tmp_path / "b"), "--seed", "6"])
    doc = read_json(tmp_path / "a" / "generate.json")
    assert doc["config"]["master_seed"] == 5 and doc["config"]["dataset"]["synthetic"]["seed"] == 5
    assert (tmp_path / "a" / "train.csv").read_bytes() != (tmp_path / "b" / "train.csv").read_bytes()
