import csv
import io
import json
from pathlib import Path

import numpy as np
import pytest

from asws import (
    AswsConfig,
    ConstraintInfeasible,
    InvalidConfig,
    MetricSeries,
    NotFound,
    ParseError,
    ValidationError,
    avg_diff_stopping,
    performance_stopping,
)
from asws.harness import (
    ASWS_GAMMA_GRID,
    ASWS_N_GRID,
    ASWS_SLACK_PROP_GRID,
    DEFAULT_CRITERIA,
    MODEL_TUNED_PARAMS,
    ReportRow,
    SweepSpec,
    TrainingSession,
    evaluate_criteria,
    grid_search,
    heuristic_grid_search,
    load_sessions,
    render_report_table,
    save_sessions,
    synth_curve,
    synth_sessions,
    tuned_config,
    write_decision_trace,
    write_report_csv,
)

FIXTURES = Path(__file__).parent / "fixtures"


def write_csv_session(path: Path, rows):
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["epoch", "train_acc", "test_acc"])
        writer.writerows(rows)


class TestIngestion:
    def test_three_epoch_fixture(self, tmp_path):
        write_csv_session(tmp_path / "toy_run0.csv", [[0, 0.5, 0.4], [1, 0.6, 0.5], [2, 0.7, 0.6]])
        sessions = load_sessions(tmp_path, "csv")
        assert len(sessions) == 1
        s = sessions[0]
        assert s.model_name == "toy"
        assert s.run_id == 0
        assert len(s.test_acc) == 3
        assert list(s.test_acc) == [0.4, 0.5, 0.6]

    def test_empty_directory(self, tmp_path):
        assert load_sessions(tmp_path, "csv") == []

    def test_missing_path(self, tmp_path):
        with pytest.raises(NotFound):
            load_sessions(tmp_path / "nope", "csv")

    def test_bad_filename(self, tmp_path):
        write_csv_session(tmp_path / "toy.csv", [[0, 0.5, 0.4]])
        with pytest.raises(ParseError):
            load_sessions(tmp_path, "csv")

    def test_bad_header(self, tmp_path):
        (tmp_path / "toy_run0.csv").write_text("epoch,train,test\n0,0.5,0.4\n")
        with pytest.raises(ParseError) as err:
            load_sessions(tmp_path, "csv")
        assert err.value.line == 1

    def test_non_contiguous_epochs(self, tmp_path):
        write_csv_session(tmp_path / "toy_run0.csv", [[0, 0.5, 0.4], [2, 0.6, 0.5]])
        with pytest.raises(ParseError) as err:
            load_sessions(tmp_path, "csv")
        assert err.value.line == 3

    def test_out_of_range_accuracy(self, tmp_path):
        write_csv_session(tmp_path / "toy_run0.csv", [[0, 0.5, 1.4]])
        with pytest.raises(ValidationError) as err:
            load_sessions(tmp_path, "csv")
        assert err.value.line == 2

    def test_non_numeric_accuracy(self, tmp_path):
        write_csv_session(tmp_path / "toy_run0.csv", [[0, 0.5, "high"]])
        with pytest.raises(ValidationError):
            load_sessions(tmp_path, "csv")

    def test_json_session(self, tmp_path):
        payload = {"model": "toy", "run": 3, "train_acc": [0.5, 0.6], "test_acc": [0.4, 0.5]}
        (tmp_path / "toy_run3.json").write_text(json.dumps(payload))
        sessions = load_sessions(tmp_path, "json")
        assert sessions[0].run_id == 3
        assert list(sessions[0].test_acc) == [0.4, 0.5]

    def test_json_missing_field(self, tmp_path):
        (tmp_path / "bad.json").write_text(json.dumps({"model": "toy", "run": 0}))
        with pytest.raises(ParseError):
            load_sessions(tmp_path, "json")

    @pytest.mark.parametrize("fmt", ["csv", "json"])
    def test_round_trip(self, tmp_path, fmt):
        sessions = synth_sessions(3, length=50, noise_sd=5e-3, model_name="rt")
        save_sessions(sessions, tmp_path / "out", fmt)
        back = load_sessions(tmp_path / "out", fmt)
        assert back == sessions

    def test_session_validation(self):
        with pytest.raises(ValidationError):
            TrainingSession("m", 0, MetricSeries([0.5]), MetricSeries([0.5, 0.6]))
        with pytest.raises(ValidationError):
            TrainingSession("m", 0, MetricSeries([1.5]), MetricSeries([0.5]))


class TestSynthCurve:
    def test_noiseless_formula(self):
        curve = synth_curve(0.8, 10.0, 0.0, 20, 123)
        expected = 0.8 * (1.0 - np.exp(-np.arange(20) / 10.0))
        assert np.array_equal(curve.values, np.clip(expected, 0.0, 1.0))

    def test_length_one(self):
        assert list(synth_curve(0.9, 20.0, 0.0, 1, 0)) == [0.0]

    def test_noiseless_monotone(self):
        curve = synth_curve(1.0, 5.0, 0.0, 100, 0).values
        assert np.all(np.diff(curve) >= 0)

    def test_determinism(self):
        a = synth_curve(0.9, 20.0, 0.002, 100, 7)
        b = synth_curve(0.9, 20.0, 0.002, 100, 7)
        assert a == b
        assert a != synth_curve(0.9, 20.0, 0.002, 100, 8)

    def test_golden_fixture(self):
        golden = {}
        with (FIXTURES / "golden_synth_curve.csv").open() as fh:
            next(fh)
            for line in fh:
                epoch, value = line.strip().split(",")
                golden[int(epoch)] = float(value)
        curve = synth_curve(0.9, 20.0, 0.002, 400, 7)
        assert len(curve) == len(golden) == 400
        for i in range(400):
            assert curve[i] == golden[i]

    def test_validation(self):
        with pytest.raises(InvalidConfig):
            synth_curve(0.0, 20.0, 0.0, 10, 0)
        with pytest.raises(InvalidConfig):
            synth_curve(0.9, 0.0, 0.0, 10, 0)
        with pytest.raises(InvalidConfig):
            synth_curve(0.9, 20.0, -0.1, 10, 0)
        with pytest.raises(InvalidConfig):
            synth_curve(0.9, 20.0, 0.0, 0, 0)


class TestEvaluateCriteria:
    def test_constant_curve_avg_diff(self):
        flat = MetricSeries(np.full(400, 0.7))
        session = TrainingSession("const", 0, flat, flat)
        rows = evaluate_criteria([session], {"avg_diff": avg_diff_stopping(150, 0.001)})
        assert rows[0].mean_stop_epoch == 150.0
        assert rows[0].never_fired == 0

    def test_duplicate_sessions_do_not_move_means(self):
        one = synth_sessions(1, length=120, noise_sd=1e-3, model_name="dup")
        two = one + [TrainingSession("dup", 1, one[0].train_acc, one[0].test_acc)]
        criteria = {"performance": performance_stopping(30)}
        r1 = evaluate_criteria(one, criteria)[0]
        r2 = evaluate_criteria(two, criteria)[0]
        assert r2.mean_stop_epoch == r1.mean_stop_epoch
        assert r2.mean_best_accuracy == r1.mean_best_accuracy
        assert r2.runs == 2

    def test_permutation_invariance(self):
        sessions = synth_sessions(4, length=80, noise_sd=2e-3, model_name="perm")
        criteria = DEFAULT_CRITERIA()
        rows = evaluate_criteria(sessions, criteria)
        shuffled = list(reversed(sessions))
        reordered = {k: criteria[k] for k in reversed(list(criteria))}
        assert evaluate_criteria(shuffled, reordered) == rows

    def test_never_fired_uses_full_length(self):
        rising = MetricSeries(np.linspace(0.0, 0.9, 100))
        session = TrainingSession("rise", 0, rising, rising)
        rows = evaluate_criteria([session], {"performance": performance_stopping(200)})
        assert rows[0].mean_stop_epoch == 100.0
        assert rows[0].never_fired == 1
        assert rows[0].mean_best_accuracy == pytest.approx(0.9)

    def test_empty_sessions_rejected(self):
        with pytest.raises(InvalidConfig):
            evaluate_criteria([], DEFAULT_CRITERIA())


class TestGridSearch:
    def test_published_grid_shape(self):
        assert len(ASWS_GAMMA_GRID) == 8
        assert len(ASWS_N_GRID) == 8
        assert len(ASWS_SLACK_PROP_GRID) == 12
        assert ASWS_GAMMA_GRID[-1] == 0.8875
        assert ASWS_SLACK_PROP_GRID[0] == 0.05
        assert ASWS_SLACK_PROP_GRID[-1] == 0.95
        assert SweepSpec().size == 768

    def test_single_point_lattice(self):
        sessions = synth_sessions(2, length=90, noise_sd=1e-3)
        spec = SweepSpec(gamma_grid=(0.2,), n_grid=(19,), slack_prop_grid=(0.5,), accuracy_slack=1.0)
        best, lattice = grid_search(sessions, spec)
        assert len(lattice) == 1
        assert best == lattice[0].config
        assert best.gamma == 0.2 and best.n == 19 and best.slack_prop == 0.5

    def test_small_sweep_serial_equals_parallel(self):
        sessions = synth_sessions(4, length=120, noise_sd=1e-3)
        spec = SweepSpec(gamma_grid=(0.1, 0.55), n_grid=(5, 11), slack_prop_grid=(0.05, 0.5, 0.95))
        serial = grid_search(sessions, spec, workers=1)
        parallel = grid_search(sessions, spec, workers=3)
        assert serial == parallel

    def test_constructed_optimum(self):
        # with a generous accuracy budget the earliest-stopping config wins;
        # small n and slack_prop fire soonest on a clean plateau
        sessions = synth_sessions(3, length=100, time_constant=5.0, noise_sd=1e-3)
        spec = SweepSpec(gamma_grid=(0.2,), n_grid=(5, 19), slack_prop_grid=(0.2,), accuracy_slack=1.0)
        best, lattice = grid_search(sessions, spec)
        by_cfg = {p.config.n: p.mean_stop_epoch for p in lattice}
        assert by_cfg[5] < by_cfg[19]
        assert best.n == 5

    def test_deterministic_tie_break(self):
        # both points never fire, tying on epoch and accuracy: smaller n wins
        rising = MetricSeries(np.linspace(0.0, 0.9, 60))
        sessions = [TrainingSession("rise", 0, rising, rising)]
        spec = SweepSpec(gamma_grid=(0.1,), n_grid=(5, 7), slack_prop_grid=(0.5,), accuracy_slack=1.0)
        best, lattice = grid_search(sessions, spec)
        assert best.n == 5
        assert all(p.never_fired == 1 for p in lattice)

    def test_constraint_infeasible_carries_unconstrained(self):
        # noisy staircase: a new maximum every 50 epochs keeps the
        # performance reference from firing, while the swept config stops
        # on the first tread far below the final accuracy
        rng = np.random.default_rng(5)
        i = np.arange(300)
        stairs = 0.5 + 0.067 * (i // 50) + rng.normal(0, 3e-3, 300)
        s = MetricSeries(np.clip(stairs, 0, 1))
        sessions = [TrainingSession("stairs", 0, s, s)]
        spec = SweepSpec(gamma_grid=(0.1,), n_grid=(5,), slack_prop_grid=(0.05,), accuracy_slack=0.0)
        with pytest.raises(ConstraintInfeasible) as err:
            grid_search(sessions, spec)
        assert isinstance(err.value.unconstrained_best, AswsConfig)

    def test_heuristic_sweep(self):
        sessions = synth_sessions(3, length=120, noise_sd=2e-3)
        best, lattice = heuristic_grid_search(
            sessions, "avg_diff", window_grid=(25, 50), min_delta_grid=(0.001, 0.005)
        )
        assert len(lattice) == 4
        assert best.variant == "avg_diff"
        top = max(p.mean_best_accuracy for p in lattice)
        assert any(p.config == best and p.mean_best_accuracy == top for p in lattice)

    def test_tuned_config_lookup(self):
        cfg = tuned_config("ResNet50")
        assert cfg.gamma == 0.213 and cfg.n == 19 and cfg.slack_prop == 0.459
        assert len(MODEL_TUNED_PARAMS) == 10
        with pytest.raises(NotFound):
            tuned_config("LeNet")


class TestReports:
    def test_csv_and_table(self, tmp_path):
        rows = [ReportRow("m", "asws", 120.25, 0.91234, 10, 1)]
        buf = io.StringIO()
        write_report_csv(rows, buf)
        lines = buf.getvalue().strip().splitlines()
        assert lines[0] == "model,criterion,mean_stop_epoch,mean_best_accuracy,runs,never_fired"
        assert lines[1].startswith("m,asws,120.2500,0.912340")
        table = render_report_table(rows)
        assert "mean_stop_epoch" in table and "120.2" in table
        write_report_csv(rows, tmp_path / "report.csv")
        assert (tmp_path / "report.csv").read_text().splitlines()[0] == lines[0]

    def test_decision_trace(self, tmp_path):
        curve = synth_curve(0.9, 10.0, 1e-3, 60, 1)
        target = tmp_path / "trace.csv"
        write_decision_trace(curve, AswsConfig(), target)
        with target.open() as fh:
            reader = csv.reader(fh)
            header = next(reader)
            rows = list(reader)
        assert header == ["epoch", "shapiro_p", "ttest_p", "votes"]
        assert len(rows) == 60
        assert rows[0][1] == ""  # too early to evaluate
        filled = [r for r in rows if r[1] != ""]
        assert filled
        for r in filled:
            assert 0.0 <= float(r[1]) <= 1.0
            assert r[3].isdigit()
