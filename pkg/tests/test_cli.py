from __future__ import annotations

import json

import pytest

from winoscore import serialize_problem
from winoscore.cli import main

from conftest import GOLDEN_SOURCE_1, GOLDEN_SOURCE_2, WORKED_RECORD, make_problems


@pytest.fixture
def worked_file(tmp_path):
    path = tmp_path / "worked.jsonl"
    path.write_text(WORKED_RECORD + "\n", encoding="utf-8")
    return path


@pytest.fixture
def synthetic_file(tmp_path):
    path = tmp_path / "synthetic.jsonl"
    problems = make_problems(30, seed=21)
    path.write_text(
        "".join(serialize_problem(p) + "\n" for p in problems), encoding="utf-8"
    )
    return path, problems


def test_decompose_golden(worked_file, capsys):
    assert main(["decompose", "--input", str(worked_file)]) == 0
    out = capsys.readouterr().out
    assert out == f"{GOLDEN_SOURCE_1}\n{GOLDEN_SOURCE_2}\n"


def test_decompose_missing_file_exits_2(tmp_path, capsys):
    code = main(["decompose", "--input", str(tmp_path / "nope.jsonl")])
    assert code == 2
    assert "error" in capsys.readouterr().err


def test_decompose_multi_blank_exits_1_naming_qid(tmp_path, capsys):
    path = tmp_path / "bad.jsonl"
    record = {"qID": "bad7", "sentence": "a _ b _ c", "option1": "x", "option2": "y"}
    path.write_text(json.dumps(record) + "\n", encoding="utf-8")
    assert main(["decompose", "--input", str(path)]) == 1
    assert "bad7" in capsys.readouterr().err


def test_decompose_qid_filter(worked_file, synthetic_file, capsys):
    path, problems = synthetic_file
    target = problems[3].qid
    assert main(["decompose", "--input", str(path), "--qid", target]) == 0
    out = capsys.readouterr().out
    assert len(out.splitlines()) == 2
    assert problems[3].option1 in out


def test_decompose_is_deterministic(worked_file, capsys):
    main(["decompose", "--input", str(worked_file)])
    first = capsys.readouterr().out
    main(["decompose", "--input", str(worked_file)])
    assert capsys.readouterr().out == first


def test_emit_train_writes_tsv_and_manifest(worked_file, tmp_path, capsys):
    out = tmp_path / "train.tsv"
    assert main(["emit-train", "--input", str(worked_file), "--out", str(out)]) == 0
    lines = out.read_text(encoding="utf-8").splitlines()
    assert lines == [
        f"{GOLDEN_SOURCE_1}\tentailment",
        f"{GOLDEN_SOURCE_2}\tcontradiction",
    ]
    manifest = json.loads((tmp_path / "train.tsv.manifest.json").read_text())
    hypers = manifest["trainer_hyperparameters"]
    assert hypers["batch_size"] == 16
    assert hypers["learning_rate"] == 2e-4
    assert hypers["checkpoint_every_steps"] == 5000
    assert manifest["pairs_written"] == 2


def test_emit_train_requires_answers(tmp_path, capsys):
    path = tmp_path / "unlabeled.jsonl"
    record = {"qID": "q", "sentence": "a _ b", "option1": "x", "option2": "y"}
    path.write_text(json.dumps(record) + "\n", encoding="utf-8")
    code = main(["emit-train", "--input", str(path), "--out", str(tmp_path / "t.tsv")])
    assert code == 1


def test_eval_oracle_prints_accuracy_one(synthetic_file, capsys):
    path, _ = synthetic_file
    assert main(["eval", "--input", str(path), "--backend", "oracle"]) == 0
    out = capsys.readouterr().out
    assert "accuracy=1.000" in out
    assert "1=30" in out


def test_eval_inverted_prints_accuracy_zero(synthetic_file, capsys):
    path, _ = synthetic_file
    assert main(["eval", "--input", str(path), "--backend", "inverted"]) == 0
    assert "accuracy=0.000" in capsys.readouterr().out


def test_eval_writes_report(synthetic_file, tmp_path, capsys):
    path, _ = synthetic_file
    report_path = tmp_path / "report.json"
    code = main(
        ["eval", "--input", str(path), "--backend", "oracle", "--out", str(report_path)]
    )
    assert code == 0
    report = json.loads(report_path.read_text(encoding="utf-8"))
    assert report["accuracy"] == 1.0
    assert report["use_logit"] is True


def test_eval_true_false_no_logit_condition(synthetic_file, tmp_path, capsys):
    path, _ = synthetic_file
    report_path = tmp_path / "report.json"
    code = main(
        [
            "eval",
            "--input", str(path),
            "--backend", "oracle",
            "--tokens", "true,false",
            "--no-logit",
            "--out", str(report_path),
        ]
    )
    assert code == 0
    report = json.loads(report_path.read_text(encoding="utf-8"))
    assert report["tokens"] == {"positive": "true", "negative": "false"}
    assert report["use_logit"] is False
    assert "logit=off" in capsys.readouterr().out


def test_eval_unregistered_tokens_rejected(synthetic_file, capsys):
    path, _ = synthetic_file
    code = main(["eval", "--input", str(path), "--tokens", "yes,no"])
    assert code == 2
    assert "not registered" in capsys.readouterr().err


def test_eval_manifest_and_split(tmp_path, synthetic_file, capsys):
    path, problems = synthetic_file
    manifest = tmp_path / "manifest.json"
    manifest.write_text(
        json.dumps({"splits": {"dev": {"path": path.name, "size": len(problems)}}}),
        encoding="utf-8",
    )
    code = main(
        ["eval", "--manifest", str(manifest), "--split", "dev", "--backend", "oracle"]
    )
    assert code == 0
    assert "split=dev" in capsys.readouterr().out


def test_eval_unknown_split_is_usage_error(tmp_path, synthetic_file, capsys):
    path, problems = synthetic_file
    manifest = tmp_path / "manifest.json"
    manifest.write_text(
        json.dumps({"splits": {"dev": {"path": path.name}}}), encoding="utf-8"
    )
    code = main(["eval", "--manifest", str(manifest), "--split", "XL"])
    assert code == 2


def test_eval_unreachable_endpoint_exits_3(synthetic_file, capsys):
    path, _ = synthetic_file
    code = main(
        [
            "eval",
            "--input", str(path),
            "--backend", "remote",
            "--endpoint", "http://127.0.0.1:9",  # discard port; nothing listens
        ]
    )
    assert code == 3
    err = capsys.readouterr().err
    assert "backend error" in err
    assert "attempt" in err


def test_eval_zero_shot_labels_report(synthetic_file, capsys):
    path, _ = synthetic_file
    code = main(["eval", "--input", str(path), "--backend", "oracle", "--zero-shot"])
    assert code == 0
    assert "zero-shot" in capsys.readouterr().out


def test_eval_seeded_random_is_repeatable(synthetic_file, capsys):
    path, _ = synthetic_file
    main(["eval", "--input", str(path), "--backend", "random", "--seed", "42"])
    first = capsys.readouterr().out
    main(["eval", "--input", str(path), "--backend", "random", "--seed", "42"])
    assert capsys.readouterr().out == first


def test_predict_writes_leaderboard_csv(synthetic_file, tmp_path, capsys):
    path, problems = synthetic_file
    out = tmp_path / "preds.csv"
    code = main(
        ["predict", "--input", str(path), "--backend", "oracle", "--out", str(out)]
    )
    assert code == 0
    lines = out.read_text(encoding="utf-8").splitlines()
    assert len(lines) == len(problems)
    for line, problem in zip(lines, problems):
        qid, choice = line.split(",")
        assert qid == problem.qid
        assert choice == problem.answer.value


def test_predict_constant_backend_all_option1(tmp_path, capsys):
    path = tmp_path / "unlabeled.jsonl"
    records = [
        {"qID": f"t{i}", "sentence": f"slot {i} has a _ inside.", "option1": "coin",
         "option2": "token"}
        for i in range(4)
    ]
    path.write_text("".join(json.dumps(r) + "\n" for r in records), encoding="utf-8")
    assert main(["predict", "--input", str(path), "--backend", "constant"]) == 0
    out = capsys.readouterr().out
    assert out.splitlines() == [f"t{i},1" for i in range(4)]


def test_auc_paper_values(capsys):
    assert main(["auc", "0.683", "0.705", "0.776", "0.824", "0.846"]) == 0
    assert capsys.readouterr().out.strip() == "0.767375"


def test_auc_two_constant_values(capsys):
    assert main(["auc", "0.5", "0.5"]) == 0
    assert capsys.readouterr().out.strip() == "0.500000"


def test_auc_single_value_is_usage_error(capsys):
    assert main(["auc", "0.5"]) == 2


def test_auc_from_report_paths(synthetic_file, tmp_path, capsys):
    path, _ = synthetic_file
    report_path = tmp_path / "r1.json"
    main(["eval", "--input", str(path), "--backend", "oracle", "--out", str(report_path)])
    capsys.readouterr()
    assert main(["auc", str(report_path), "0.5"]) == 0
    assert capsys.readouterr().out.strip() == "0.750000"


def test_auc_log_spacing_with_sizes(capsys):
    code = main(
        ["auc", "0.683", "0.705", "0.776", "0.824", "0.846",
         "--spacing", "log", "--sizes", "160,640,2558,10234,40398"]
    )
    assert code == 0
    value = float(capsys.readouterr().out)
    assert abs(value - 0.767375) < 0.01


def test_config_file_with_flag_override(synthetic_file, tmp_path, capsys):
    path, _ = synthetic_file
    config = tmp_path / "run.cfg"
    config.write_text(
        "backend = inverted\ntokens = entailment,contradiction\nlogit = true\n",
        encoding="utf-8",
    )
    # config alone: inverted backend
    main(["eval", "--input", str(path), "--config", str(config)])
    assert "accuracy=0.000" in capsys.readouterr().out
    # flag wins over config
    main(["eval", "--input", str(path), "--config", str(config), "--backend", "oracle"])
    assert "accuracy=1.000" in capsys.readouterr().out


def test_config_file_extra_token_pairs(synthetic_file, tmp_path, capsys):
    path, _ = synthetic_file
    config = tmp_path / "run.cfg"
    config.write_text("extra_token_pairs = yes,no\n", encoding="utf-8")
    code = main(
        ["eval", "--input", str(path), "--config", str(config), "--tokens", "yes,no"]
    )
    assert code == 0


def test_config_file_unknown_key_is_usage_error(synthetic_file, tmp_path, capsys):
    path, _ = synthetic_file
    config = tmp_path / "run.cfg"
    config.write_text("no_such_key = 1\n", encoding="utf-8")
    assert main(["eval", "--input", str(path), "--config", str(config)]) == 2


def test_environment_endpoint_override(synthetic_file, monkeypatch, capsys):
    path, _ = synthetic_file
    monkeypatch.setenv("WINOSCORE_ENDPOINT", "http://127.0.0.1:9")
    monkeypatch.setenv("WINOSCORE_TIMEOUT", "0.3")
    code = main(["eval", "--input", str(path), "--backend", "remote"])
    assert code == 3
    assert "127.0.0.1:9" in capsys.readouterr().err


def test_unknown_backend_is_usage_error(synthetic_file, capsys):
    path, _ = synthetic_file
    code = main(["eval", "--input", str(path), "--backend", "warp"])
    # argparse rejects values outside choices
    assert code == 2
