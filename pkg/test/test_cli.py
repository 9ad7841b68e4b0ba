import re
import sys

import pandas as pd
import pytest

from hardlabel_attack.cli import build_parser, parse_int_list, run
from hardlabel_attack.reporting.writer import read_report
from hardlabel_attack.victims.naive_bayes import NaiveBayesVictim


def _lines(capsys):
    return capsys.readouterr().out.splitlines()


def _without_timestamp(path):
    with open(path, "rb") as f:
        return re.sub(rb"\s*\"created_at\": \"[^\"]*\",?", b"", f.read())


@pytest.fixture
def separable_dataset(tmp_path):
    """Fixture providing a small two-class file the classifier can fit exactly."""
    positive = ["good film", "great plot", "fine acting", "good story", "great cast"]
    negative = ["bad film", "awful plot", "dull acting", "bad story", "awful cast"]
    lines = ["label\ttext"]
    lines += [f"1\t{text}" for text in positive]
    lines += [f"0\t{text}" for text in negative]
    path = tmp_path / "train.tsv"
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return str(path)


class TestParsing:
    """Test suite for argument parsing helpers."""

    def test_int_list(self):
        """Test the comma-separated list format."""
        assert parse_int_list("25,50, 100") == [25, 50, 100]

    @pytest.mark.parametrize("text", ["", "1,,2", "1,x", "1.5"])
    def test_malformed_int_list(self, text):
        """Test that malformed lists are rejected."""
        with pytest.raises(ValueError):
            parse_int_list(text)

    def test_defaults(self):
        """Test the documented attack defaults."""
        args = build_parser().parse_args(["attack"])

        assert args.budget == 100
        assert args.beam == 10
        assert args.k == 50
        assert args.pert_max == 0.10
        assert args.lime_cap == "auto"
        assert args.rule == "stratified"

    def test_bad_seed_list(self, tmp_path):
        """Test that argparse rejects a malformed seed list with exit code 2."""
        with pytest.raises(SystemExit) as e:
            run(["attack", "--seeds", "1,x", "--out", str(tmp_path / "r.json")])
        assert e.value.code == 2


class TestAttackCommand:
    """Test suite for the attack subcommand."""

    def test_default_run(self, tmp_path, capsys):
        """Test a bundled-data run whose printed summary matches the report file."""
        out = str(tmp_path / "report.json")

        assert run(["attack", "--sample", "5", "--out", out]) == 0

        report = read_report(out)
        assert len(report.outcomes) == 5
        assert report.summary_line() in _lines(capsys)

    def test_csv_format(self, tmp_path):
        """Test that --format csv writes outcomes and aggregates."""
        out = tmp_path / "report.csv"

        assert run(["attack", "--sample", "4", "--out", str(out), "--format", "csv"]) == 0
        assert len(pd.read_csv(out)) == 4
        assert (tmp_path / "report.aggregates.csv").exists()

    def test_zero_budget(self, tmp_path):
        """Test that an invalid budget exits with code 2."""
        assert run(["attack", "--budget", "0", "--out", str(tmp_path / "r.json")]) == 2

    def test_lime_cap_above_budget(self, tmp_path):
        """Test that a surrogate cap larger than the budget exits with code 2."""
        args = ["attack", "--budget", "10", "--lime-cap", "20", "--out", str(tmp_path / "r.json")]
        assert run(args) == 2

    def test_bad_victim_spec(self, tmp_path):
        """Test that an unknown victim kind exits with code 2."""
        assert run(["attack", "--victim", "svm:model.bin", "--out", str(tmp_path / "r.json")]) == 2

    def test_missing_dataset(self, tmp_path):
        """Test that an unreadable dataset exits with code 1."""
        args = ["attack", "--dataset", str(tmp_path / "missing.tsv"), "--out", str(tmp_path / "r.json")]
        assert run(args) == 1

    def test_seeds(self, tmp_path):
        """Test one report per seed plus the summary table."""
        out = tmp_path / "report.json"

        assert run(["attack", "--sample", "3", "--seeds", "1,2", "--out", str(out)]) == 0
        assert (tmp_path / "report.seed1.json").exists()
        assert (tmp_path / "report.seed2.json").exists()
        summary = pd.read_csv(tmp_path / "report.seeds.csv")
        assert summary["seed"].astype(str).tolist() == ["1", "2", "mean"]

    @pytest.mark.parametrize(
        "flags",
        [[], ["--ranking", "random"], ["--rule", "top", "--beam", "4"]],
    )
    def test_deterministic(self, tmp_path, flags):
        """Test that repeating a run writes the same bytes apart from its timestamp."""
        first, second = str(tmp_path / "a.json"), str(tmp_path / "b.json")
        for out in (first, second):
            assert run(["attack", "--sample", "6", "--seed", "7", "--out", out, *flags]) == 0

        a, b = (_without_timestamp(path) for path in (first, second))
        assert a == b
        assert b"created_at" not in a


class TestSweepCommand:
    """Test suite for the sweep subcommand."""

    def test_beam_sweep(self, tmp_path):
        """Test four beam widths give four rows."""
        out = tmp_path / "sweep.csv"

        assert run(["sweep", "--sweep", "beam", "1,5,10,20", "--sample", "4", "--out", str(out)]) == 0
        assert pd.read_csv(out)["beam"].tolist() == [1, 5, 10, 20]

    def test_malformed_values(self, tmp_path):
        """Test that a non-integer value exits with code 2."""
        assert run(["sweep", "--sweep", "budget", "10,x", "--out", str(tmp_path / "s.csv")]) == 2

    def test_unknown_kind(self, tmp_path):
        """Test that an unknown sweep kind exits with code 2."""
        assert run(["sweep", "--sweep", "width", "1,2", "--out", str(tmp_path / "s.csv")]) == 2

    def test_decreasing_budgets(self, tmp_path):
        """Test that budgets out of order exit with code 2."""
        assert run(["sweep", "--sweep", "budget", "100,50", "--sample", "2", "--out", str(tmp_path / "s.csv")]) == 2


class TestTrainVictimCommand:
    """Test suite for the train-victim subcommand."""

    def test_train_and_reload(self, separable_dataset, tmp_path, capsys):
        """Test that a separable corpus is fitted and the saved model reloads."""
        out = str(tmp_path / "nb.json")

        assert run(["train-victim", "--dataset", separable_dataset, "--out", out]) == 0

        line = next(l for l in _lines(capsys) if l.startswith("Training accuracy:"))
        accuracy = float(line.split(":")[1].split("%")[0])
        assert accuracy >= 90.0
        assert NaiveBayesVictim.load(out).num_classes == 2

    def test_trained_model_as_victim(self, separable_dataset, tmp_path):
        """Test that a trained model can be attacked through nb:PATH."""
        model = str(tmp_path / "nb.json")
        assert run(["train-victim", "--dataset", separable_dataset, "--out", model]) == 0

        out = str(tmp_path / "report.json")
        assert run(["attack", "--victim", f"nb:{model}", "--sample", "4", "--out", out]) == 0
        assert len(read_report(out).outcomes) == 4

    def test_single_class(self, tmp_path):
        """Test that a corpus without a second class exits with code 2."""
        path = tmp_path / "one.tsv"
        path.write_text("1\tgood film\n1\tgreat plot\n", encoding="utf-8")

        assert run(["train-victim", "--dataset", str(path), "--out", str(tmp_path / "m.json")]) == 2

    def test_main_entry_point(self, separable_dataset, tmp_path, monkeypatch):
        """Test the installed script entry point."""
        from main import main

        out = str(tmp_path / "nb.json")
        monkeypatch.setattr(sys, "argv", ["hardlabel-attack", "train-victim", "--dataset", separable_dataset, "--out", out])
        assert main() == 0
