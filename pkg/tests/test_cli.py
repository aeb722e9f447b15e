"""
Tests for the multiref-eval command line

Tests exit codes, error reporting and the JSON/CSV reports of every
subcommand on the fixture corpora.
"""

import json
import random
import time

import pytest
from typer.testing import CliRunner

from src import config
from src.cli import app, run


@pytest.fixture
def check_please(fixtures_dir):
    return [
        "--dataset", str(fixtures_dir / "check_please_dataset.jsonl"),
        "--hyps", str(fixtures_dir / "check_please_hypotheses.jsonl"),
    ]


@pytest.fixture
def small(fixtures_dir):
    return [
        "--dataset", str(fixtures_dir / "small_dataset.jsonl"),
        "--hyps", str(fixtures_dir / "small_hypotheses.jsonl"),
        "--ratings", str(fixtures_dir / "small_ratings.jsonl"),
    ]


def invoke(capsys, *args):
    code = run(list(args))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestScore:
    """Test the score subcommand"""

    def test_single_reference_bleu2(self, capsys, check_please):
        """Test the restaurant example scored against its original reference"""
        code, out, _ = invoke(capsys, "score", *check_please, "--metrics", "bleu2", "--mode", "single")
        assert code == 0
        report = json.loads(out)
        assert report["mode"] == "single"
        assert report["aggregates"][0]["mean"] == pytest.approx(0.0275, abs=5e-4)

    def test_multi_reference_bleu2(self, capsys, check_please):
        """Test the restaurant example scored against all references"""
        code, out, _ = invoke(capsys, "score", *check_please, "--metrics", "bleu2", "--mode", "multi")
        assert code == 0
        report = json.loads(out)
        assert report["aggregates"][0]["mean"] == pytest.approx(0.3257, abs=5e-4)
        row = report["per_utterance"][0]
        assert row["single"] == pytest.approx(0.0275, abs=5e-4)
        assert row["multi"] == row["score"]

    def test_unknown_metric(self, capsys, check_please):
        """Test that an unknown metric exits 2 and names the metric"""
        code, out, err = invoke(capsys, "score", *check_please, "--metrics", "bleu9")
        assert code == 2
        assert out == ""
        assert "bleu9" in err

    def test_embedding_metric_without_table(self, capsys, check_please):
        """Test that vector_extrema without --embeddings exits 2"""
        code, _, err = invoke(capsys, "score", *check_please, "--metrics", "vector_extrema")
        assert code == 2
        assert "--embeddings" in err or "embedding" in err

    def test_all_oov_score_is_null(self, capsys, check_please, fixtures_dir):
        """Test that an all-OOV hypothesis reports a missing score"""
        code, out, _ = invoke(capsys, "score", *check_please, "--metrics", "emb_average",
                              "--embeddings", str(fixtures_dir / "tiny_vectors.txt"))
        assert code == 0
        assert json.loads(out)["per_utterance"][0]["score"] is None

    def test_invalid_parameter(self, capsys, check_please):
        """Test that a non-positive BLEU epsilon is a configuration error"""
        code, _, err = invoke(capsys, "score", *check_please, "--metrics", "bleu2",
                              "--bleu-epsilon", "0")
        assert code == 2
        assert "epsilon" in err

    def test_missing_input_file(self, capsys, tmp_path, fixtures_dir):
        """Test that an unreadable dataset exits 2 with the path"""
        code, _, err = invoke(capsys, "score", "--dataset", str(tmp_path / "absent.jsonl"),
                              "--hyps", str(fixtures_dir / "check_please_hypotheses.jsonl"),
                              "--metrics", "bleu1")
        assert code == 2
        assert "absent.jsonl" in err

    def test_reruns_are_byte_identical(self, capsys, tmp_path, check_please):
        """Test that two runs with identical inputs write identical reports"""
        first, second = tmp_path / "a.json", tmp_path / "b.json"
        for out in (first, second):
            code, _, _ = invoke(capsys, "score", *check_please, "--metrics", "bleu2,meteor,rouge_l",
                                "--out", str(out), "--csv", str(out.with_suffix(".csv")))
            assert code == 0
        assert first.read_bytes() == second.read_bytes()
        assert first.with_suffix(".csv").read_bytes() == second.with_suffix(".csv").read_bytes()

    def test_run_manifest(self, capsys, check_please, fixtures_dir):
        """Test that the report records the command, flags and input digests"""
        _, out, _ = invoke(capsys, "score", *check_please, "--metrics", "bleu2")
        manifest = json.loads(out)["run_manifest"]
        assert manifest["tool"] == "multiref-eval"
        assert manifest["command"] == "score"
        assert manifest["flags"]["metrics"] == ["bleu2"]
        assert str(fixtures_dir / "check_please_dataset.jsonl") in manifest["inputs"]

    def test_csv_columns(self, capsys, tmp_path, check_please):
        """Test the per-utterance CSV header"""
        csv_path = tmp_path / "rows.csv"
        invoke(capsys, "score", *check_please, "--metrics", "bleu2", "--csv", str(csv_path))
        header = csv_path.read_text(encoding="utf-8").splitlines()[0]
        assert header == "context_id,model_id,hypothesis_index,metric,single,multi,score"


class TestOtherCommands:
    """Test the remaining subcommands"""

    def test_validate(self, capsys, small):
        """Test that valid inputs are summarized"""
        code, out, _ = invoke(capsys, "validate", *small)
        assert code == 0
        summary = json.loads(out)
        assert summary["dataset"]["records"] == 4
        assert summary["hypotheses"]["models"] == ["m1", "m2", "m3"]
        assert summary["ratings"]["raters"] == ["r1", "r2"]

    def test_diversity(self, capsys, small):
        """Test per-model diversity output"""
        code, out, _ = invoke(capsys, "diversity", *small[:4], "--metrics", "bleu1")
        assert code == 0
        report = json.loads(out)
        assert [model["model_id"] for model in report["models"]] == ["m1", "m2", "m3"]

    @pytest.mark.parametrize("extra", [[], ["--level", "system"], ["--mode", "both"]])
    def test_correlate(self, capsys, small, extra):
        """Test quality correlation at both levels and in comparison mode"""
        code, out, _ = invoke(capsys, "correlate", *small, "--metrics", "bleu1,rouge_l", *extra)
        assert code == 0
        report = json.loads(out)
        assert report["kappa"]["retained"] == ["r1", "r2"]
        assert "comparison" in report or "bleu1" in report["correlations"]

    def test_correlate_without_diversity_ratings(self, capsys, small):
        """Test that diversity correlation without diversity ratings exits 1"""
        code, _, err = invoke(capsys, "correlate", *small, "--metrics", "bleu1",
                              "--target", "diversity", "--no-kappa-filter")
        assert code == 1
        assert "multiref-eval: error:" in err

    def test_ablate(self, capsys, small, tmp_path):
        """Test the ablation report and plotting table"""
        csv_path = tmp_path / "curve.csv"
        code, out, _ = invoke(capsys, "ablate", *small, "--metrics", "bleu1",
                              "--k-values", "1,3", "--csv", str(csv_path))
        assert code == 0
        assert [point["k"] for point in json.loads(out)["points"]] == [1, 3]
        assert len(csv_path.read_text(encoding="utf-8").splitlines()) == 3

    def test_ablate_bad_k_values(self, capsys, small):
        """Test that a malformed k list exits 2"""
        code, _, _ = invoke(capsys, "ablate", *small, "--metrics", "bleu1", "--k-values", "1,x")
        assert code == 2

    def test_kappa(self, capsys, fixtures_dir):
        """Test the agreement report"""
        code, out, _ = invoke(capsys, "kappa", "--ratings", str(fixtures_dir / "small_ratings.jsonl"))
        assert code == 0
        assert json.loads(out)["retained"] == ["r1", "r2"]

    def test_stats(self, capsys, check_please):
        """Test dataset statistics and reference-set diversity"""
        code, out, _ = invoke(capsys, "stats", *check_please[:2])
        assert code == 0
        report = json.loads(out)
        assert set(report["gt_bleu"]) == {"1", "2", "3", "4"}
        assert report["reference_set_diversity"]["contexts"] == 1

    def test_unknown_option(self, capsys):
        """Test that click usage errors exit 2"""
        code, _, _ = invoke(capsys, "score", "--bogus")
        assert code == 2

    def test_bad_choice(self, capsys, check_please):
        """Test that an invalid enum value exits 2"""
        code, _, _ = invoke(capsys, "score", *check_please, "--metrics", "bleu1", "--mode", "both")
        assert code == 2


class TestCliRunner:
    """Test exit codes through the typer test runner"""

    def test_success(self, check_please):
        """Test a successful score run"""
        result = CliRunner().invoke(app, ["score", *check_please, "--metrics", "bleu1"])
        assert result.exit_code == 0

    def test_configuration_error(self, check_please):
        """Test that an unknown metric exits 2"""
        result = CliRunner().invoke(app, ["score", *check_please, "--metrics", "bleu9"])
        assert result.exit_code == 2


class TestStartup:
    """Test configuration checks and undecodable input through the CLI"""

    def test_bad_log_format(self, capsys, monkeypatch, check_please):
        """Test that an unknown LOG_FORMAT exits 2 before any command runs"""
        monkeypatch.setattr(config, "LOG_FORMAT", "xml")
        code, out, err = invoke(capsys, "score", *check_please, "--metrics", "bleu1")
        assert code == 2
        assert out == ""
        assert "LOG_FORMAT" in err

    def test_bad_log_level(self, monkeypatch, check_please):
        """Test that an unknown LOG_LEVEL exits 2 through the typer runner"""
        monkeypatch.setattr(config, "LOG_LEVEL", "LOUD")
        result = CliRunner().invoke(app, ["score", *check_please, "--metrics", "bleu1"])
        assert result.exit_code == 2

    def test_invalid_utf8_dataset(self, capsys, tmp_path, fixtures_dir):
        """Test that an undecodable dataset line exits 2 with path and line"""
        source = (fixtures_dir / "check_please_dataset.jsonl").read_bytes()
        path = tmp_path / "latin1.jsonl"
        path.write_bytes(source.rstrip(b"\n") + b'\n{"context_id": "caf\xe9"}\n')
        code, _, err = invoke(capsys, "validate", "--dataset", str(path))
        assert code == 2
        assert f"{path}:2: invalid UTF-8" in err


VOCABULARY = (
    "i you we it the a is are was to of and in that what how where when why "
    "good fine sure okay yes no thanks please check food table order wait "
    "right back now later here there some more nice great bad really very"
).split()


def random_sentence(rng, low=4, high=14):
    return " ".join(rng.choice(VOCABULARY) for _ in range(rng.randint(low, high)))


class TestRuntime:
    """Test the full pipeline on a 100-context corpus"""

    @pytest.fixture
    def corpus_paths(self, write_jsonl):
        rng = random.Random(2024)
        dataset, hyps, ratings = [], [], []
        for index in range(100):
            context_id = f"c{index:03d}"
            refs = [random_sentence(rng) for _ in range(5)]
            if index % 4 == 0:
                refs[1] = "i do n't know what you mean , i do n't know"
            dataset.append(
                {
                    "context_id": context_id,
                    "context": [random_sentence(rng)],
                    "reference": refs[0],
                    "multi_references": refs[1:],
                }
            )
            outputs = {
                "seq2seq": "i do n't know . " * 6,
                "laughing": " ".join(["ha"] * 25),
                "sampled": random_sentence(rng),
            }
            for model_id, text in outputs.items():
                hyps.append(
                    {
                        "context_id": context_id,
                        "model_id": model_id,
                        "hypotheses": [text.strip(), random_sentence(rng)],
                    }
                )
                value = rng.randint(1, 5)
                for rater_id in ("r1", "r2"):
                    ratings.append(
                        {
                            "context_id": context_id,
                            "model_id": model_id,
                            "rater_id": rater_id,
                            "kind": "appropriateness",
                            "value": value,
                        }
                    )
        return [
            "--dataset", str(write_jsonl("d.jsonl", dataset)),
            "--hyps", str(write_jsonl("h.jsonl", hyps)),
            "--ratings", str(write_jsonl("r.jsonl", ratings)),
        ]

    def test_score_and_ablate_within_a_minute(self, capsys, corpus_paths):
        """Test that scoring and ablation with METEOR finish in under 60 s"""
        started = time.perf_counter()
        code, out, _ = invoke(capsys, "score", *corpus_paths[:4],
                              "--metrics", "bleu2,meteor,rouge_l")
        assert code == 0
        assert len(json.loads(out)["aggregates"]) == 9

        code, out, _ = invoke(capsys, "ablate", *corpus_paths, "--metrics", "bleu2,meteor,rouge_l")
        assert code == 0
        assert [point["k"] for point in json.loads(out)["points"]] == [1, 2, 3, 4, 5]
        assert time.perf_counter() - started < 60.0
