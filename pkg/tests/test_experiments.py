import json

import numpy as np
import pytest

import ppmlearn.experiments as exp
from ppmlearn.data import GeneratorSpec, generate
from ppmlearn.experiments import (
    SweepConfig,
    format_summary,
    read_records_csv,
    run_sweep,
    run_trial,
    summarize,
    write_records_csv,
)
from ppmlearn.geometry import Halfspace
from ppmlearn.learner import learn_half


def small_config(out_dir=None, n_grid=(40,), trials=1, seed=9):
    gen = GeneratorSpec(dim=1, target=Halfspace([1.0], 0.0), seed=3)
    return SweepConfig(generator=gen, n_grid=n_grid, epsilon_grid=(1.0,),
                       trials=trials, holdout=1000, seed=seed,
                       out_dir=None if out_dir is None else str(out_dir))


def test_config_validation():
    gen = GeneratorSpec(dim=1, target=Halfspace([1.0], 0.0))
    with pytest.raises(ValueError):
        SweepConfig(generator=gen, n_grid=(), epsilon_grid=(1.0,), holdout=1000)
    with pytest.raises(ValueError):
        SweepConfig(generator=gen, n_grid=(10,), epsilon_grid=(1.0,), trials=0,
                    holdout=1000)
    with pytest.raises(ValueError):
        SweepConfig(generator=gen, n_grid=(10,), epsilon_grid=(1.0,), holdout=10)


def test_pool_cap_resolution():
    cfg = small_config()
    assert cfg.resolved_pool_cap is None  # d=1 default: uncapped
    gen2 = GeneratorSpec(dim=2, target=Halfspace([1.0, 0.0], 0.0))
    cfg2 = SweepConfig(generator=gen2, n_grid=(10,), epsilon_grid=(1.0,),
                       holdout=1000)
    assert cfg2.resolved_pool_cap == 40
    cfg3 = SweepConfig(generator=gen2, n_grid=(10,), epsilon_grid=(1.0,),
                       holdout=1000, pool_cap=0)
    assert cfg3.resolved_pool_cap is None  # 0 forces uncapped


def test_single_cell_byte_identical_reruns(tmp_path):
    cfg_a = small_config(tmp_path / "a")
    records_a = run_sweep(cfg_a)
    assert len(records_a) == 1
    cfg_b = small_config(tmp_path / "b")
    run_sweep(cfg_b)
    csv_a = (tmp_path / "a" / "records.csv").read_bytes()
    csv_b = (tmp_path / "b" / "records.csv").read_bytes()
    assert csv_a == csv_b


def test_records_reproducible_from_persisted_seeds(tmp_path):
    cfg = small_config(tmp_path, n_grid=(30, 50), trials=2)
    records = run_sweep(cfg)
    for r in records:
        spec = cfg.generator.with_seed(r.data_seed)
        ds = generate(spec, r.n)
        res = learn_half(ds, r.epsilon, pool_cap=r.pool_cap, seed=r.mech_seed)
        assert res.diagnostics.selected_mistakes == r.g_mistakes
        assert res.diagnostics.class_size == r.class_size


def test_sweep_resume_reproduces_straight_run(tmp_path, monkeypatch):
    cfg_a = small_config(tmp_path / "a", n_grid=(30, 50))
    run_sweep(cfg_a)

    cfg_b = small_config(tmp_path / "b", n_grid=(30, 50))
    real = exp.run_trial
    state = {"failed": False}

    def flaky(config, cell_idx, n, eps, trial):
        if cell_idx == 1 and not state["failed"]:
            state["failed"] = True
            raise RuntimeError("interrupted")
        return real(config, cell_idx, n, eps, trial)

    monkeypatch.setattr(exp, "run_trial", flaky)
    with pytest.raises(RuntimeError):
        run_sweep(cfg_b)
    journal = (tmp_path / "b" / "journal.jsonl").read_text()
    assert '"cell": 0' in journal and '"cell": 1' not in journal
    records = run_sweep(cfg_b)  # resumes from the journal
    assert len(records) == 2
    assert (tmp_path / "a" / "records.csv").read_bytes() == \
        (tmp_path / "b" / "records.csv").read_bytes()


def test_journal_config_mismatch_rejected(tmp_path):
    cfg = small_config(tmp_path)
    (tmp_path / "journal.jsonl").write_text('{"config_hash": "deadbeef"}\n')
    with pytest.raises(ValueError, match="different config"):
        run_sweep(cfg)


def test_failed_cell_names_parameters(tmp_path, monkeypatch):
    cfg = small_config(tmp_path)

    def boom(config, cell_idx, n, eps, trial):
        raise ValueError("inner")

    monkeypatch.setattr(exp, "run_trial", boom)
    with pytest.raises(RuntimeError, match=r"n=40, epsilon=1.0"):
        run_sweep(cfg)


def test_records_csv_round_trip(tmp_path):
    cfg = small_config(tmp_path / "x", n_grid=(30,), trials=2)
    records = run_sweep(cfg)
    path = tmp_path / "records.csv"
    write_records_csv(records, path)
    back = read_records_csv(path)
    assert len(back) == len(records)
    for a, b in zip(records, back):
        assert (a.n, a.epsilon, a.trial, a.g_mistakes, a.class_size) == \
            (b.n, b.epsilon, b.trial, b.g_mistakes, b.class_size)
        assert a.holdout_error == b.holdout_error


def test_records_json_carries_config_and_wall_time(tmp_path):
    cfg = small_config(tmp_path)
    run_sweep(cfg)
    payload = json.loads((tmp_path / "records.json").read_text())
    assert payload["config_hash"] == cfg.config_hash()
    assert payload["config"]["n_grid"] == [40]
    assert payload["records"][0]["wall_time"] > 0


def test_summarize_empty_and_single_cell(tmp_path):
    empty = summarize([])
    assert empty.cells == ()
    assert format_summary(empty) == "no records\n"

    cfg = small_config(tmp_path, trials=3)
    records = run_sweep(cfg)
    summary = summarize(records)
    assert len(summary.cells) == 1
    cell = summary.cells[0]
    assert cell.trials == 3
    assert cell.median_holdout == pytest.approx(
        float(np.median([r.holdout_error for r in records])))
    assert cell.optimum == 0.0
    table = format_summary(summary)
    assert "med_hold" in table and str(cell.n) in table


def test_summarize_bound_overlay_fields(tmp_path):
    cfg = small_config(tmp_path, trials=2)
    records = run_sweep(cfg)
    cell = summarize(records).cells[0]
    assert cell.utility_bound > 0
    assert cell.compression_dev > 0
    assert cell.excess_bound == pytest.approx(cell.utility_bound + cell.compression_dev)
    assert cell.realizable_n > 0 and cell.agnostic_n > 0
