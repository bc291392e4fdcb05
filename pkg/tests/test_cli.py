"""End-to-end tests for the command-line surface.

Each test drives ``main`` with an argv list and captures the emitted
envelope; a single subprocess test covers the ``python -m`` entry point.
"""

import io
import json
import subprocess
import sys
from fractions import Fraction as Q

import pytest

from corelab import cli
from corelab.cli import EXIT_BUDGET, EXIT_MISMATCH, EXIT_OK, EXIT_USAGE, main


def run(argv):
    out = io.StringIO()
    code = main(argv, out=out)
    return code, out.getvalue()


def run_json(argv):
    code, text = run(argv)
    return code, json.loads(text)


def rat(s):
    num, den = s.split("/")
    assert int(den) > 0
    return Q(int(num), int(den))


class TestEnvelope:
    def test_schema_fields_and_rational_rendering(self):
        code, doc = run_json(["verify", "mean", "--type", "A", "--rank", "2", "--b", "4"])
        assert code == EXIT_OK
        assert doc["schema_version"] == 1
        assert doc["grade"] == "theorem"
        assert doc["verdict"] == "pass"
        assert doc["config"]["command"] == "verify"
        assert doc["config"]["lattice"] == "coroot"
        (entry,) = doc["results"]
        assert entry["value"] == "2/1"
        assert rat(entry["value"]) == 2

    def test_deterministic_bytes_across_runs_and_jobs(self):
        argv = ["enum", "--type", "D", "--rank", "4", "--b", "5", "--stat", "size"]
        _, first = run(argv)
        _, second = run(argv)
        assert first == second
        _, parallel = run_json(argv + ["--jobs", "3"])
        assert parallel["results"] == json.loads(first)["results"]

    def test_csv_is_sorted_union_of_fields(self):
        code, text = run(
            ["verify", "mean", "--type", "A", "--rank", "2", "--b-range", "4..7",
             "--format", "csv"]
        )
        assert code == EXIT_OK
        lines = text.strip().splitlines()
        header = lines[0].split(",")
        assert header == sorted(header)
        assert len(lines) == 5
        assert any("skipped(b not coprime)" in line for line in lines)

    def test_table_renders_aligned_header(self):
        code, text = run(
            ["stat", "--type", "A", "--rank", "2", "--b", "4", "--format", "table"]
        )
        assert code == EXIT_OK
        header, row = text.splitlines()
        assert "mean" in header and "2/1" in row


class TestEnum:
    def test_size_lists_the_five_cores(self):
        code, doc = run_json(
            ["enum", "--type", "A", "--rank", "2", "--b", "4",
             "--lattice", "coroot", "--stat", "size"]
        )
        assert code == EXIT_OK
        cores = sorted(tuple(r["core"]) for r in doc["results"])
        assert cores == [(), (1,), (1, 1), (2,), (3, 1, 1)]
        sizes = sorted(rat(r["size"]) for r in doc["results"])
        assert sizes == [0, 1, 2, 2, 5]

    def test_unit_dilation_is_a_single_zero_record(self):
        for family, rank in (("A", 2), ("E", 6), ("C", 3)):
            code, doc = run_json(["enum", "--type", family, "--rank", str(rank), "--b", "1"])
            assert code == EXIT_OK
            (entry,) = doc["results"]
            assert rat(entry["zise"]) == 0

    def test_coweight_count_outside_coprime_range(self):
        code, doc = run_json(
            ["enum", "--type", "D", "--rank", "4", "--b", "3", "--lattice", "coweight"]
        )
        assert code == EXIT_OK
        assert len(doc["results"]) == 24
        total = sum(rat(r["zise"]) for r in doc["results"])
        assert total == 80

    def test_size_requires_coprime_dilation(self):
        code, _ = run(["enum", "--type", "D", "--rank", "4", "--b", "3",
                       "--lattice", "coweight", "--stat", "size"])
        assert code == EXIT_USAGE

    def test_zise_values_match_size_multiset(self):
        code, doc = run_json(["enum", "--type", "A", "--rank", "2", "--b", "4"])
        assert code == EXIT_OK
        assert sorted(rat(r["zise"]) for r in doc["results"]) == [0, 1, 2, 2, 5]


class TestVerify:
    def test_count_e8_at_seven(self):
        code, doc = run_json(["verify", "count", "--type", "E", "--rank", "8", "--b", "7"])
        assert code == EXIT_OK
        assert doc["results"][0]["value"] == "39/1"

    def test_variance_d4_at_five(self):
        code, doc = run_json(["verify", "variance", "--type", "D", "--rank", "4", "--b", "5"])
        assert code == EXIT_OK
        assert rat(doc["results"][0]["value"]) == 44

    def test_selector_batch_without_dilation(self):
        code, doc = run_json(
            ["verify", "strange", "macdonald", "genfun-A", "--type", "A", "--rank", "3",
             "--trunc", "15"]
        )
        assert code == EXIT_OK
        assert [r["verdict"] for r in doc["results"]] == ["match"] * 3

    def test_anderson_floor_and_max(self):
        code, doc = run_json(
            ["verify", "anderson", "floor", "max", "m3",
             "--type", "A", "--rank", "2", "--b", "5"]
        )
        assert code == EXIT_OK
        assert all(r["verdict"] == "match" for r in doc["results"])

    def test_mismatch_exits_one(self, monkeypatch):
        monkeypatch.setattr(cli, "haiman_count", lambda rs, b: Q(999))
        code, doc = run_json(["verify", "count", "--type", "A", "--rank", "2", "--b", "4"])
        assert code == EXIT_MISMATCH
        assert doc["verdict"] == "fail"
        assert doc["results"][0]["verdict"].startswith("mismatch")

    def test_unknown_selector_is_usage(self):
        code, _ = run(["verify", "bogus", "--type", "A", "--rank", "2", "--b", "4"])
        assert code == EXIT_USAGE

    def test_single_noncoprime_dilation_is_usage(self):
        code, _ = run(["verify", "count", "--type", "A", "--rank", "2", "--b", "3"])
        assert code == EXIT_USAGE


class TestFit:
    def test_type_a_count_polynomial(self):
        code, doc = run_json(["fit", "--type", "A", "--rank", "2", "--k", "0"])
        assert code == EXIT_OK
        summary = doc["results"][0]
        assert summary["reciprocity"] == "pass"
        qp = summary["quasipolynomial"]
        assert qp["period"] == 1
        assert qp["components"][0] == [[1, 1], [3, 2], [1, 2]]

    def test_coroot_fit_covers_coprime_classes(self):
        code, doc = run_json(
            ["fit", "--type", "A", "--rank", "2", "--k", "1", "--lattice", "coroot"]
        )
        assert code == EXIT_OK
        summary = doc["results"][0]
        assert summary["classes"] == [1, 2]
        assert summary["quasipolynomial"]["components"][0] is None

    def test_noncoprime_residue_refused(self):
        code, _ = run(["fit", "--type", "A", "--rank", "2", "--k", "1",
                       "--lattice", "coroot", "--residue", "0"])
        assert code == EXIT_USAGE

    def test_budget_guard_trips(self):
        code, _ = run(["fit", "--type", "E", "--rank", "7", "--k", "1"])
        assert code == EXIT_BUDGET


class TestSeries:
    def test_type_a_product_and_char_poly(self):
        code, doc = run_json(["series", "--type", "A", "--rank", "2", "--trunc", "18"])
        assert code == EXIT_OK
        entry = doc["results"][0]
        assert entry["char_poly"] == [1, 1, 1]
        assert entry["char_poly_at_one"] == entry["index"] == 3
        assert entry["core_product_matches"] is True
        assert entry["coefficients"][:6] == [1, 1, 2, 0, 2, 1]

    def test_non_simply_laced_has_char_poly_only(self):
        code, doc = run_json(["series", "--type", "B", "--rank", "3"])
        assert code == EXIT_OK
        entry = doc["results"][0]
        assert entry["coefficients"] is None
        assert entry["char_poly_at_one"] == 2


class TestStat:
    def test_moment_sweep_with_skips(self):
        code, doc = run_json(["stat", "--type", "A", "--rank", "2", "--b-range", "2..4"])
        assert code == EXIT_OK
        by_b = {r["b"]: r for r in doc["results"]}
        assert by_b[3]["verdict"] == "skipped(b not coprime)"
        assert by_b[4]["mean"] == "2/1" and by_b[4]["variance"] == "14/5"
        assert by_b[4]["grade"] == "match"


class TestExperiment:
    def test_weak_order_containment(self):
        code, doc = run_json(
            ["experiment", "weak-order", "--type", "A", "--rank", "2", "--b", "4"]
        )
        assert code == EXIT_OK
        assert doc["grade"] == "conjecture" and doc["verdict"] == "report"
        entry = doc["results"][0]
        assert entry["contained"] == entry["total"] == 5
        assert entry["verdict"] == "consistent"

    def test_fuss_mean_value(self):
        code, doc = run_json(["experiment", "cn-fuss", "--rank", "2", "--m", "1"])
        assert code == EXIT_OK
        entry = doc["results"][0]
        assert entry["conjecture"] == "11/3"
        assert entry["verdict"] == "consistent"

    def test_top_coefficient_table_entry(self):
        code, doc = run_json(
            ["experiment", "top-coeff", "--type", "A", "--rank", "2", "--k", "4"]
        )
        assert code == EXIT_OK
        entry = doc["results"][0]
        assert entry["verdict"] == "consistent"
        assert rat(entry["ratio"]) == rat(entry["expected"])

    def test_weighting_trials_respect_seed(self):
        argv = ["experiment", "cn-weighting", "--rank", "2", "--trials", "20",
                "--seed", "7"]
        _, first = run(argv)
        _, second = run(argv)
        assert first == second
        doc = json.loads(first)
        assert doc["results"][0]["verdict"] == "consistent"


class TestPlumbing:
    def test_missing_type_is_usage(self):
        code, _ = run(["enum", "--b", "4"])
        assert code == EXIT_USAGE

    def test_malformed_range_is_usage(self):
        code, _ = run(["verify", "mean", "--type", "A", "--rank", "2",
                       "--b-range", "4-7"])
        assert code == EXIT_USAGE

    def test_budget_exit_on_tiny_cap(self):
        code, _ = run(["enum", "--type", "A", "--rank", "2", "--b", "4",
                       "--max-points", "3"])
        assert code == EXIT_BUDGET

    def test_jobs_env_default(self, monkeypatch):
        monkeypatch.setenv("CORELAB_JOBS", "2")
        code, doc = run_json(["enum", "--type", "A", "--rank", "2", "--b", "4"])
        assert code == EXIT_OK
        assert doc["config"]["jobs"] == 2

    def test_module_entry_point(self):
        proc = subprocess.run(
            [sys.executable, "-m", "corelab.cli", "series", "--type", "G",
             "--rank", "2"],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == EXIT_OK
        doc = json.loads(proc.stdout)
        assert doc["results"][0]["char_poly_at_one"] == 1
