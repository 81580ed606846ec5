from __future__ import annotations

import json
import random

import pytest

from conftest import FIXTURES
from qasrl_kit.cli import main

GOLD = str(FIXTURES / "gold_cut.jsonl")
GOLD_REPORTS = str(FIXTURES / "gold_reports.jsonl")
PARSER_REPORTS = str(FIXTURES / "parser_reports.jsonl")
WORKER_A = str(FIXTURES / "worker_a.jsonl")
WORKER_B = str(FIXTURES / "worker_b.jsonl")


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestValidate:
    def test_clean_file(self, capsys):
        code, out, _ = run(capsys, "validate", GOLD)
        assert code == 0
        assert out.startswith("OK")

    def test_violations_exit_one(self, capsys, tmp_path):
        record = json.loads(open(GOLD).readline())
        record["qas"].append(dict(record["qas"][1]))  # duplicate role question
        path = tmp_path / "bad.jsonl"
        path.write_text(json.dumps(record) + "\n")
        code, out, _ = run(capsys, "validate", str(path))
        assert code == 1
        assert "DUPLICATE_ROLE" in out

    def test_load_error_exit_two(self, capsys, tmp_path):
        path = tmp_path / "broken.jsonl"
        path.write_text("not json\n")
        code, _, err = run(capsys, "validate", str(path))
        assert code == 2
        assert "broken.jsonl:1" in err

    def test_missing_file_exit_two(self, capsys):
        code, _, err = run(capsys, "validate", "/nonexistent.jsonl")
        assert code == 2

    def test_usage_error_exit_two(self, capsys):
        assert main(["no-such-command"]) == 2


class TestEval:
    def test_identity_table(self, capsys):
        code, out, _ = run(capsys, "eval", "--gold", GOLD, "--pred", GOLD)
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[1].split() == ["UA", "100.0", "100.0", "100.0"]
        assert lines[2].split() == ["LA", "100.0", "100.0", "100.0"]

    def test_identity_machine_single_mode(self, capsys):
        code, out, _ = run(capsys, "eval", "--gold", GOLD, "--pred", GOLD,
                           "--mode", "ua", "--report", "machine")
        assert code == 0
        report = json.loads(out)
        assert report["totals"] == {"precision": 1.0, "recall": 1.0, "f1": 1.0}
        assert report["config"]["mode"] == "ua"
        assert len(report["per_predicate"]) == 2

    def test_machine_report_is_byte_stable(self, capsys):
        args = ("eval", "--gold", GOLD_REPORTS, "--pred", PARSER_REPORTS,
                "--redundant", "--report", "machine")
        _, first, _ = run(capsys, *args)
        _, second, _ = run(capsys, *args)
        assert first == second

    def test_input_order_does_not_change_report(self, capsys, tmp_path):
        lines = open(GOLD).read().splitlines()
        rng = random.Random(1)
        shuffled = tmp_path / "shuffled.jsonl"
        for _ in range(3):
            rng.shuffle(lines)
            shuffled.write_text("\n".join(lines) + "\n")
            _, base, _ = run(capsys, "eval", "--gold", GOLD, "--pred", GOLD,
                             "--report", "machine")
            _, moved, _ = run(capsys, "eval", "--gold", str(shuffled),
                              "--pred", GOLD, "--report", "machine")
            assert base == moved

    def test_redundant_fixture_counts(self, capsys):
        code, out, _ = run(capsys, "eval", "--gold", GOLD_REPORTS,
                           "--pred", PARSER_REPORTS, "--redundant",
                           "--report", "machine")
        assert code == 0
        report = json.loads(out)
        ua = {e["id"]: e for e in report["ua"]["per_predicate"]}
        la = {e["id"]: e for e in report["la"]["per_predicate"]}
        assert ua["wiki.reports.1:3"] == {"id": "wiki.reports.1:3", "tp": 1, "fp": 1, "fn": 0}
        assert ua["wiki.carried.1:2"] == {"id": "wiki.carried.1:2", "tp": 1, "fp": 0, "fn": 0}
        assert la["wiki.carried.1:2"] == {"id": "wiki.carried.1:2", "tp": 1, "fp": 1, "fn": 0}
        assert report["ua"]["totals"]["precision"] == pytest.approx(2 / 3)
        assert report["la"]["totals"]["precision"] == pytest.approx(0.5)

    def test_workers_flag_keeps_output(self, capsys):
        args = ("eval", "--gold", GOLD_REPORTS, "--pred", PARSER_REPORTS,
                "--redundant", "--report", "machine")
        _, serial, _ = run(capsys, *args, "--workers", "1")
        _, parallel, _ = run(capsys, *args, "--workers", "2")
        assert serial == parallel

    def test_table_and_machine_agree_at_one_decimal(self, capsys):
        _, table, _ = run(capsys, "eval", "--gold", GOLD_REPORTS,
                          "--pred", PARSER_REPORTS, "--redundant")
        _, machine, _ = run(capsys, "eval", "--gold", GOLD_REPORTS,
                            "--pred", PARSER_REPORTS, "--redundant",
                            "--report", "machine")
        report = json.loads(machine)
        rows = {line.split()[0]: line.split()[1:]
                for line in table.strip().splitlines()[1:]}
        for mode in ("ua", "la"):
            totals = report[mode]["totals"]
            expected = [f"{100 * totals[k]:.1f}" for k in ("precision", "recall", "f1")]
            assert rows[mode.upper()] == expected

    def test_macro_flag(self, capsys):
        code, out, _ = run(capsys, "eval", "--gold", GOLD_REPORTS,
                           "--pred", PARSER_REPORTS, "--redundant", "--macro",
                           "--mode", "ua", "--report", "machine")
        assert code == 0
        report = json.loads(out)
        assert report["config"]["aggregation"] == "macro"
        # per-verb UA precisions: 1/2 and 1 -> 0.75 macro
        assert report["totals"]["precision"] == pytest.approx(0.75)


class TestIaa:
    def test_symmetric_output(self, capsys):
        _, forward, _ = run(capsys, "iaa", "--a", WORKER_A, "--b", WORKER_B,
                            "--report", "machine")
        _, backward, _ = run(capsys, "iaa", "--a", WORKER_B, "--b", WORKER_A,
                             "--report", "machine")
        assert forward == backward
        assert json.loads(forward)["f1"] == 1.0

    def test_la_table(self, capsys):
        code, out, _ = run(capsys, "iaa", "--a", WORKER_A, "--b", WORKER_B,
                           "--mode", "la")
        assert code == 0
        assert "LA agreement F1: 50.0" in out


class TestStats:
    def test_machine(self, capsys):
        code, out, _ = run(capsys, "stats", GOLD, "--report", "machine")
        assert code == 0
        stats = json.loads(out)
        assert stats["verbs"] == 2
        assert stats["roles_total"] == 4
        assert stats["questions_per_verb"] == 2.0

    def test_table(self, capsys):
        code, out, _ = run(capsys, "stats", GOLD)
        assert code == 0
        assert "questions per verb" in out


class TestCost:
    def test_machine(self, capsys):
        code, out, _ = run(capsys, "cost", str(FIXTURES / "dense_combined.jsonl"),
                           "--report", "machine")
        assert code == 0
        report = json.loads(out)
        assert report["average"] == 19.5
        assert {entry["id"]: entry["total"] for entry in report["per_verb"]} == \
            {"wiki.usgs.1:7": 21.0, "wiki.basin.1:5": 18.0}

    def test_custom_schedule(self, capsys):
        code, out, _ = run(capsys, "cost", str(FIXTURES / "dense_combined.jsonl"),
                           "--consolidation-per-question", "0", "--report", "machine")
        assert code == 0
        assert json.loads(out)["average"] == pytest.approx((15 + 15) / 2)


class TestConsolidate:
    def test_proposals_and_summary(self, capsys, tmp_path):
        out_path = tmp_path / "proposals.jsonl"
        code, out, _ = run(capsys, "consolidate", "--a", WORKER_A, "--b", WORKER_B,
                           "--out", str(out_path))
        assert code == 0
        assert "[ANSWER_OVERLAP]" in out
        assert "[QUESTION_VARIANT]" in out
        records = [json.loads(line) for line in open(out_path)]
        assert len(records) == 2
        usgs = next(r for r in records if r["sentence_id"] == "wiki.usgs.1")
        assert usgs["conflicts"][0]["kind"] == "ANSWER_OVERLAP"
        assert usgs["conflicts"][0]["split_suggestion"] == [
            {"start": 0, "end": 4}, {"start": 5, "end": 6},
        ]

    def test_check_clean_consolidation(self, capsys):
        code, out, _ = run(capsys, "consolidate", "--a", WORKER_A, "--b", WORKER_B,
                           "--check", str(FIXTURES / "gold_identify.jsonl"))
        assert code == 0
        assert "0 violations" in out
        # The second usgs question is new relative to the sources.
        assert "NOVEL_ROLE" in out

    def test_check_flags_duplicate_role(self, capsys, tmp_path):
        record = json.loads(open(FIXTURES / "gold_identify.jsonl").readline())
        record["qas"].append(dict(record["qas"][0]))
        path = tmp_path / "bad.jsonl"
        path.write_text(json.dumps(record) + "\n")
        code, out, _ = run(capsys, "consolidate", "--a", WORKER_A, "--b", WORKER_B,
                           "--check", str(path))
        assert code == 1
        assert "DUPLICATE_ROLE" in out


class TestPropbank:
    def test_table(self, capsys):
        code, out, _ = run(capsys, "propbank", "--gold", GOLD,
                           "--propbank", str(FIXTURES / "propbank_cut.tsv"))
        assert code == 0
        rows = {line.split()[0]: line.split()[1:]
                for line in out.strip().splitlines()[1:]}
        assert rows["All"] == ["75.0", "100.0", "85.7"]
        assert rows["Core"] == ["75.0", "100.0", "85.7"]
        assert rows["Adj."] == ["100.0", "100.0", "100.0"]

    def test_machine(self, capsys):
        code, out, _ = run(capsys, "propbank", "--gold", GOLD,
                           "--propbank", str(FIXTURES / "propbank_cut.tsv"),
                           "--report", "machine")
        assert code == 0
        report = json.loads(out)
        assert report["all"]["recall"] == 1.0
