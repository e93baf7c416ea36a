"""CLI wiring: subcommands, exit codes, manifests."""

import json

import pytest

from byolkit import cli
from byolkit.tensorfile import load_checkpoint, save_checkpoint
from conftest import make_checkpoint


def run_cli(*argv):
    return cli.main(list(argv))


@pytest.fixture
def scalar_files(tmp_path, scalar_checkpoints):
    g_pt, g_it, expert = scalar_checkpoints
    paths = {}
    for name, ckpt in zip(("g_pt", "g_it", "expert"), (g_pt, g_it, expert)):
        path = tmp_path / f"{name}.tns"
        save_checkpoint(ckpt, path)
        paths[name] = str(path)
    return paths


def test_unknown_subcommand_is_usage_error(capsys):
    assert run_cli("frobnicate") == cli.EXIT_USAGE


def test_unknown_flag_is_usage_error():
    assert run_cli("classify", "--no-such-flag") == cli.EXIT_USAGE


def test_classify_tsv(tmp_path, capsys):
    profiles = tmp_path / "langs.tsv"
    profiles.write_text(
        "aaa\tAlpha\t1000000\t500000\nbbb\tBeta\t6000000\t-\nccc\tGamma\t3000000000\t10\n",
        encoding="utf-8",
    )
    rows_path = tmp_path / "rows.jsonl"
    code = run_cli(
        "--manifest", str(tmp_path / "m.json"),
        "classify", "--profiles", str(profiles), "--out-rows", str(rows_path),
    )
    assert code == cli.EXIT_OK
    out = capsys.readouterr().out
    assert "extreme-low" in out and "translate_test" in out
    rows = [json.loads(line) for line in rows_path.read_text().splitlines()]
    assert [r["code"] for r in rows] == ["ccc", "bbb", "aaa"]  # sorted by word count
    manifest = json.loads((tmp_path / "m.json").read_text())
    assert manifest["subcommand"] == "classify"
    assert "byolkit" in manifest["versions"]


def test_classify_missing_file_is_io_error(tmp_path):
    code = run_cli("classify", "--profiles", str(tmp_path / "absent.tsv"))
    assert code == cli.EXIT_IO


def test_classify_bad_code_is_contract_error(tmp_path):
    profiles = tmp_path / "langs.tsv"
    profiles.write_text("TOOLONG\tX\t100\n", encoding="utf-8")
    assert run_cli("classify", "--profiles", str(profiles)) == cli.EXIT_CONTRACT


def test_merge_lambda_cli_matches_oracle(tmp_path, scalar_files, capsys):
    out = tmp_path / "merged.tns"
    code = run_cli(
        "--manifest", str(tmp_path / "m.json"),
        "merge",
        "--g-pt", scalar_files["g_pt"],
        "--g-it", scalar_files["g_it"],
        "--expert", scalar_files["expert"],
        "--lambda", "0.6",
        "--out", str(out),
    )
    assert code == cli.EXIT_OK
    merged = load_checkpoint(out)
    assert merged.tensors["w"].data[0] == pytest.approx(0.6, abs=1e-6)


def test_merge_requires_coefficients(tmp_path, scalar_files):
    code = run_cli(
        "merge",
        "--g-pt", scalar_files["g_pt"],
        "--g-it", scalar_files["g_it"],
        "--expert", scalar_files["expert"],
        "--out", str(tmp_path / "x.tns"),
    )
    assert code == cli.EXIT_USAGE


def test_merge_name_mismatch_is_contract_error(tmp_path, scalar_files):
    other = tmp_path / "other.tns"
    save_checkpoint(make_checkpoint({"different": 1.0}), other)
    code = run_cli(
        "merge",
        "--g-pt", scalar_files["g_pt"],
        "--g-it", str(other),
        "--expert", scalar_files["expert"],
        "--lambda", "0.5",
        "--out", str(tmp_path / "x.tns"),
    )
    assert code == cli.EXIT_CONTRACT


def test_sweep_cli_grid(tmp_path, scalar_files):
    out_dir = tmp_path / "sweep"
    code = run_cli(
        "--manifest", str(tmp_path / "m.json"),
        "sweep",
        "--g-pt", scalar_files["g_pt"],
        "--g-it", scalar_files["g_it"],
        "--expert", scalar_files["expert"],
        "--sweep", "0:1:0.1",
        "--out-dir", str(out_dir),
    )
    assert code == cli.EXIT_OK
    manifest = json.loads((out_dir / "sweep_manifest.json").read_text())
    assert len(manifest) == 11
    assert [entry["lambda"] for entry in manifest] == [round(0.1 * k, 10) for k in range(11)]


def test_average_cli(tmp_path, scalar_files):
    out = tmp_path / "avg.tns"
    code = run_cli(
        "--manifest", str(tmp_path / "m.json"),
        "average",
        "--inputs", scalar_files["g_pt"], scalar_files["g_it"],
        "--out", str(out),
    )
    assert code == cli.EXIT_OK
    assert load_checkpoint(out).tensors["w"].data[0] == 2.0


def test_rtt_eval_identity_cli(tmp_path, capsys):
    bench = tmp_path / "bench.jsonl"
    rows = [
        {"domain": "news", "id": "n1", "text": "alpha beta gamma delta"},
        {"domain": "news", "id": "n2", "text": "epsilon zeta eta theta"},
        {"domain": "sport", "id": "s1", "text": "iota kappa lambda mu"},
    ]
    bench.write_text("\n".join(json.dumps(r) for r in rows) + "\n", encoding="utf-8")
    out = tmp_path / "report.json"
    code = run_cli(
        "--manifest", str(tmp_path / "m.json"),
        "rtt-eval",
        "--benchmark", str(bench),
        "--forward", "identity",
        "--backward", "identity",
        "--retry-backoff", "0",
        "--out", str(out),
    )
    assert code == cli.EXIT_OK
    report = json.loads(out.read_text())
    assert report["macro"]["bleu"] == pytest.approx(100.0)
    assert "macro average" in capsys.readouterr().out


def test_rtt_eval_unknown_backend_is_contract_error(tmp_path):
    bench = tmp_path / "bench.jsonl"
    bench.write_text(json.dumps({"domain": "d", "id": "1", "text": "x y z"}) + "\n")
    code = run_cli(
        "rtt-eval",
        "--benchmark", str(bench),
        "--forward", "nonexistent",
        "--backward", "identity",
        "--out", str(tmp_path / "r.json"),
    )
    assert code == cli.EXIT_CONTRACT


def test_filter_cli(tmp_path):
    pairs = tmp_path / "pairs.tsv"
    pairs.write_text(
        "good source here\tgood target here\n"
        "good source here\tgood target here\n"
        "a b\ttoo short pair\n",
        encoding="utf-8",
    )
    kept = tmp_path / "kept.tsv"
    rejected = tmp_path / "rejected.jsonl"
    code = run_cli(
        "--manifest", str(tmp_path / "m.json"),
        "filter", "--pairs", str(pairs), "--out-kept", str(kept), "--out-rejected", str(rejected),
    )
    assert code == cli.EXIT_OK
    assert kept.read_text().splitlines() == ["good source here\tgood target here"]
    reasons = [json.loads(line)["reason"] for line in rejected.read_text().splitlines()]
    assert reasons == ["duplicate", "length"]


def test_augment_cli_is_seed_reproducible(tmp_path):
    pairs = tmp_path / "pairs.tsv"
    pairs.write_text("Hello, world!\tBonjour, monde!\n", encoding="utf-8")
    out_one, out_two = tmp_path / "a.tsv", tmp_path / "b.tsv"
    for out in (out_one, out_two):
        code = run_cli(
            "--seed", "11",
            "--manifest", str(tmp_path / "m.json"),
            "augment", "--pairs", str(pairs), "--p-punct-removal", "1.0", "--out", str(out),
        )
        assert code == cli.EXIT_OK
    assert out_one.read_bytes() == out_two.read_bytes()
    assert out_one.read_text() == "Hello world\tBonjour monde\n"


def test_transliterate_cli(tmp_path):
    table = tmp_path / "table.tsv"
    table.write_text("ab\tX\na\tY\n", encoding="utf-8")
    infile = tmp_path / "in.txt"
    infile.write_text("abba\n", encoding="utf-8")
    out = tmp_path / "out.txt"
    code = run_cli(
        "--manifest", str(tmp_path / "m.json"),
        "transliterate", "--table", str(table), "--in", str(infile), "--out", str(out),
    )
    assert code == cli.EXIT_OK
    assert out.read_text() == "XbY\n"


def test_mix_cli(tmp_path):
    for name in ("left", "right"):
        (tmp_path / f"{name}.txt").write_text(
            "\n".join(f"{name} line {i} pad" for i in range(40)) + "\n", encoding="utf-8"
        )
    out = tmp_path / "mixed.jsonl"
    manifest = tmp_path / "mix.json"
    code = run_cli(
        "--seed", "3",
        "--manifest", str(tmp_path / "m.json"),
        "mix",
        "--component", f"left={tmp_path / 'left.txt'}",
        "--component", f"right={tmp_path / 'right.txt'}:1",
        "--unit", "pairs",
        "--out", str(out),
        "--mix-manifest", str(manifest),
    )
    assert code == cli.EXIT_OK
    payload = json.loads(manifest.read_text())
    shares = {c["name"]: c["realized_share"] for c in payload["components"]}
    assert shares == {"left": 0.5, "right": 0.5}


def test_align_check_cli(tmp_path, data_dir, capsys):
    out = tmp_path / "align.json"
    code = run_cli(
        "--manifest", str(tmp_path / "m.json"),
        "align-check",
        "--records", str(data_dir / "align_valid.jsonl"),
        "--source-doc", str(data_dir / "align_source_doc.txt"),
        "--target-doc", str(data_dir / "align_target_doc.txt"),
        "--out", str(out),
    )
    assert code == cli.EXIT_OK
    payload = json.loads(out.read_text())
    assert payload["accepted"] == 3
    assert payload["histogram"]["M-1"] == 1
    assert "accepted 3/3" in capsys.readouterr().out


def test_score_cli(tmp_path, data_dir, capsys):
    out = tmp_path / "scores.json"
    code = run_cli(
        "--manifest", str(tmp_path / "m.json"),
        "score",
        "--results", str(data_dir / "benchmark_row.jsonl"),
        "--tasks", str(data_dir / "benchmark_tasks.jsonl"),
        "--out", str(out),
    )
    assert code == cli.EXIT_OK
    payload = json.loads(out.read_text())
    assert payload["average_scores"]["adapted-12b"] == pytest.approx(57.26, abs=0.05)
    assert "average score" in capsys.readouterr().out


def test_judge_aggregate_cli(tmp_path, capsys):
    judgments = tmp_path / "judgments.jsonl"
    rows = [
        {
            "question_id": f"q{i}",
            "model_a": "focus",
            "model_b": "rival",
            "position_of_a": "first",
            "preferred": "a" if i < 7 else "b",
            "ratings": [4, 2],
        }
        for i in range(10)
    ]
    judgments.write_text("\n".join(json.dumps(r) for r in rows) + "\n", encoding="utf-8")
    out = tmp_path / "winrate.json"
    code = run_cli(
        "--manifest", str(tmp_path / "m.json"),
        "judge-aggregate", "--judgments", str(judgments), "--focus", "focus", "--out", str(out),
    )
    assert code == cli.EXIT_OK
    payload = json.loads(out.read_text())
    assert payload["per_opponent"]["rival"]["wins"] == 7
    assert payload["overall_win_rate"] == pytest.approx(0.7)


def test_report_cli_renders_sweep_rows(tmp_path, data_dir, capsys):
    out_rows = tmp_path / "rows.jsonl"
    code = run_cli(
        "--manifest", str(tmp_path / "m.json"),
        "report",
        "--sweep-scores", str(data_dir / "lambda_sweep_scores.json"),
        "--out-rows", str(out_rows),
    )
    assert code == cli.EXIT_OK
    rows = [json.loads(line) for line in out_rows.read_text().splitlines()]
    assert [row["lambda"] for row in rows] == [round(0.1 * k, 10) for k in range(11)]
    assert "36.91" in capsys.readouterr().out


def test_report_requires_an_input(tmp_path):
    assert run_cli("report", "--out-rows", str(tmp_path / "rows.jsonl")) == cli.EXIT_USAGE


def test_config_file_backends_and_validation(tmp_path):
    mapping = tmp_path / "map.tsv"
    mapping.write_text("x y z\tx y z\n", encoding="utf-8")
    config_path = tmp_path / "pipeline.json"
    config_path.write_text(
        json.dumps(
            {
                "seed": 5,
                "backends": {"replay": {"kind": "file", "mapping_path": str(mapping)}},
            }
        ),
        encoding="utf-8",
    )
    bench = tmp_path / "bench.jsonl"
    bench.write_text(json.dumps({"domain": "d", "id": "1", "text": "x y z"}) + "\n")
    out = tmp_path / "report.json"
    code = run_cli(
        "--config", str(config_path),
        "--manifest", str(tmp_path / "m.json"),
        "rtt-eval",
        "--benchmark", str(bench),
        "--forward", "replay",
        "--backward", "replay",
        "--retry-backoff", "0",
        "--out", str(out),
    )
    assert code == cli.EXIT_OK
    assert json.loads(out.read_text())["macro"]["bleu"] == pytest.approx(100.0)


def test_config_with_dangling_path_fails_validation(tmp_path):
    config_path = tmp_path / "pipeline.json"
    config_path.write_text(json.dumps({"paths": {"corpus": "missing.txt"}}), encoding="utf-8")
    profiles = tmp_path / "langs.tsv"
    profiles.write_text("aaa\tA\t10\n", encoding="utf-8")
    code = run_cli("--config", str(config_path), "classify", "--profiles", str(profiles))
    assert code == cli.EXIT_CONTRACT
