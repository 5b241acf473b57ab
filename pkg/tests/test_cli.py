import json
import subprocess
import sys
from pathlib import Path

import pytest

from tableguard.cli import main

DATA = Path(__file__).parent / "data"
DEMO_POLICY = Path(__file__).parents[1] / "src" / "tableguard" / "data" / "demo_policy.json"


def run_cli(*args):
    return subprocess.run(
        [sys.executable, "-m", "tableguard", *args],
        capture_output=True,
        text=True,
    )


class TestObfuscateCommand:
    def test_fnol_golden_byte_for_byte(self, tmp_path):
        out = tmp_path / "out.txt"
        proc = run_cli(
            "obfuscate",
            "--input", str(DATA / "fnol.txt"),
            "--policy", str(DEMO_POLICY),
            "--seed", "42",
            "--output", str(out),
        )
        assert proc.returncode == 0
        golden = (DATA / "fnol_golden_seed42.txt").read_bytes()
        assert out.read_bytes() == golden
        summary = json.loads(proc.stderr.strip().splitlines()[-1])
        assert summary["replaced"] == 11
        assert summary["residual"] == 0

    def test_missing_policy_is_usage_error(self):
        proc = run_cli("obfuscate", "--input", str(DATA / "fnol.txt"))
        assert proc.returncode == 2
        assert "usage" in proc.stderr.lower()

    def test_seed_changes_surrogates_not_masks(self, tmp_path):
        out = tmp_path / "out43.txt"
        proc = run_cli(
            "obfuscate",
            "--input", str(DATA / "fnol.txt"),
            "--policy", str(DEMO_POLICY),
            "--seed", "43",
            "--output", str(out),
        )
        assert proc.returncode == 0
        text = out.read_text(encoding="utf-8")
        assert text != (DATA / "fnol_golden_seed42.txt").read_text(encoding="utf-8")
        for mask in ("(555) XXX-XXXX", "AB19XXXXX1", "WXXXXXXX56", "xxxxx@xxxxxx.com"):
            assert mask in text

    def test_table_route_with_ledger_export(self, tmp_path):
        out = tmp_path / "table.csv"
        ledger_path = tmp_path / "ledger.jsonl"
        proc = run_cli(
            "obfuscate",
            "--input", str(DATA / "service_table.csv"),
            "--policy", str(DATA / "service_policy.json"),
            "--dictionary", str(DATA / "service_dictionary.json"),
            "--output", str(out),
            "--export-ledger", str(ledger_path),
        )
        assert proc.returncode == 0
        summary = json.loads(proc.stderr.strip().splitlines()[-1])
        assert summary["mode"] == "table"
        assert summary["rows"] == 8
        assert summary["cells_replaced"] > 0
        assert ledger_path.exists()
        assert len(ledger_path.read_text().splitlines()) == summary["ledger_entries"]
        assert "Homer Simpson" not in out.read_text()

    def test_unknown_suffix_is_usage_error(self, tmp_path):
        weird = tmp_path / "input.parquet"
        weird.write_text("x", encoding="utf-8")
        proc = run_cli("obfuscate", "--input", str(weird), "--policy", str(DEMO_POLICY))
        assert proc.returncode == 2

    def test_missing_input_is_io_error(self, tmp_path):
        proc = run_cli(
            "obfuscate", "--input", str(tmp_path / "nope.txt"), "--policy", str(DEMO_POLICY)
        )
        assert proc.returncode == 4

    def test_policy_gap_exit_code(self, tmp_path):
        policy = tmp_path / "reject.json"
        policy.write_text(
            json.dumps({"seed": 1, "default_action": "reject", "rules": []}),
            encoding="utf-8",
        )
        proc = run_cli("obfuscate", "--input", str(DATA / "fnol.txt"), "--policy", str(policy))
        assert proc.returncode == 3


class TestMetricsCommand:
    def test_identical_files_zero_loss(self, tmp_path):
        proc = run_cli(
            "metrics",
            "--original", str(DATA / "service_table.csv"),
            "--obfuscated", str(DATA / "service_table.csv"),
            "--dictionary", str(DATA / "service_dictionary.json"),
        )
        assert proc.returncode == 0
        report = json.loads(proc.stdout)
        assert report["utility"]["information_loss_pct"] == 0.0
        assert report["k_anonymity_original"] == report["k_anonymity_obfuscated"]

    def test_masked_collapse_raises_k(self, tmp_path):
        original = tmp_path / "orig.csv"
        original.write_text(
            "claim,name\nc1,Carol Hughes\nc2,Paula Wilson\nc3,Homer Watson\n",
            encoding="utf-8",
        )
        masked = tmp_path / "masked.csv"
        masked.write_text(
            "claim,name\nc1,XXXXX XXXXXX\nc2,XXXXX XXXXXX\nc3,XXXXX XXXXXX\n",
            encoding="utf-8",
        )
        dictionary = tmp_path / "dict.json"
        dictionary.write_text(
            json.dumps(
                {
                    "columns": [
                        {"name": "claim", "kind": "free_text"},
                        {"name": "name", "kind": "person_name", "quasi_identifier": True},
                    ]
                }
            ),
            encoding="utf-8",
        )
        proc = run_cli(
            "metrics",
            "--original", str(original),
            "--obfuscated", str(masked),
            "--dictionary", str(dictionary),
        )
        assert proc.returncode == 0
        report = json.loads(proc.stdout)
        assert report["k_anonymity_obfuscated"] > report["k_anonymity_original"]

    def test_missing_dictionary_usage_error(self):
        proc = run_cli(
            "metrics",
            "--original", str(DATA / "service_table.csv"),
            "--obfuscated", str(DATA / "service_table.csv"),
        )
        assert proc.returncode == 2


class TestBenchCommand:
    def test_generator_deterministic_per_seed(self, tmp_path, gazetteer):
        from tableguard.bench import generate_table

        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        generate_table(a, 100, 42, gazetteer)
        generate_table(b, 100, 42, gazetteer)
        assert a.read_bytes() == b.read_bytes()
        c = tmp_path / "c.csv"
        generate_table(c, 100, 43, gazetteer)
        assert c.read_bytes() != a.read_bytes()

    def test_bench_text_and_csv_outputs(self, tmp_path):
        csv_out = tmp_path / "bench.csv"
        proc = run_cli(
            "bench", "--rows", "50,200", "--trials", "1", "--csv", str(csv_out)
        )
        assert proc.returncode == 0
        assert "gazetteer load" in proc.stdout
        assert "ratio" in proc.stdout
        lines = csv_out.read_text().splitlines()
        assert lines[0].startswith("rows,")
        assert len(lines) == 3

    def test_bench_json_is_machine_parseable(self):
        proc = run_cli("bench", "--rows", "50", "--trials", "1", "--json")
        assert proc.returncode == 0
        report = json.loads(proc.stdout)
        assert report["rows"][0]["rows"] == 50

    def test_descending_rows_rejected(self):
        proc = run_cli("bench", "--rows", "1000,100", "--trials", "1")
        assert proc.returncode == 2


def test_main_entry_point_in_process(tmp_path, capsys):
    out = tmp_path / "o.txt"
    code = main(
        [
            "obfuscate",
            "--input", str(DATA / "fnol.txt"),
            "--policy", str(DEMO_POLICY),
            "--seed", "42",
            "--output", str(out),
        ]
    )
    assert code == 0
    assert out.read_bytes() == (DATA / "fnol_golden_seed42.txt").read_bytes()
