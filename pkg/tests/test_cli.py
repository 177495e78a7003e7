"""Command-line surface: output formats, exit codes, determinism."""

import io
import json
import subprocess
import sys

import pytest

from zetaforge import cli


def run_cli(*argv):
    """Invoke the CLI in-process, capturing stdout."""
    buf = io.StringIO()
    old = sys.stdout
    sys.stdout = buf
    try:
        code = cli.run(list(argv))
    finally:
        sys.stdout = old
    return code, buf.getvalue()


class TestBasicCommands:
    def test_bernoulli_plain(self):
        code, out = run_cli("--format", "plain", "--no-meta", "bernoulli", "--k", "12")
        assert code == 0
        assert out.strip() == "-691/2730"

    def test_bernoulli_poly(self):
        code, out = run_cli("--no-meta", "bernoulli", "--k", "2", "--poly-x", "1/2")
        assert code == 0
        assert json.loads(out)["value"] == "-1/12"

    def test_apery_with_closed_check(self):
        code, out = run_cli("--no-meta", "apery", "--kind", "A2", "--n", "7", "--closed")
        rep = json.loads(out)
        assert code == 0 and rep["routes_agree"]

    def test_aperylike(self):
        code, out = run_cli("--no-meta", "aperylike", "--family", "TJ", "--k", "2", "--n", "2")
        assert code == 0
        assert json.loads(out)["value"] == "41/64"
        code, out = run_cli("--no-meta", "aperylike", "--family", "J", "--k", "3", "--n", "0")
        assert json.loads(out)["value"] == {"HZ3": "2/1"}

    def test_hurwitz(self):
        code, out = run_cli("--no-meta", "hurwitz", "--s", "2", "--tau", "0.5")
        import math

        assert abs(json.loads(out)["value"] - math.pi**2 / 2) < 1e-12


class TestCongruenceCommand:
    def test_supercongruence_ok(self):
        code, out = run_cli(
            "--no-meta", "congruence", "--check", "super",
            "--kind", "A3", "--p", "5", "--m", "1", "--r", "1",
        )
        rep = json.loads(out)
        assert code == 0 and rep["ok"] and rep["modulus"] == 125

    def test_los(self):
        code, out = run_cli("--no-meta", "congruence", "--check", "los", "--p", "7")
        assert code == 0 and json.loads(out)["ok"]

    def test_schema_fields(self):
        _, out = run_cli(
            "--no-meta", "congruence", "--check", "pary",
            "--kind", "A2", "--p", "5", "--n", "7",
        )
        rep = json.loads(out)
        assert set(rep) >= {"kind", "params", "lhs_residue", "rhs_residue", "modulus", "ok"}


class TestQSeriesCommand:
    def test_w2_verification(self):
        code, out = run_cli("--no-meta", "qseries-verify", "--max-q", "6")
        rep = json.loads(out)
        assert code == 0
        assert rep["matched"] and rep["convention_used"] == "eta-times-16"
        assert rep["jacobi_identity_ok"]


class TestTraceOutputs:
    def test_divergence_csv(self):
        code, out = run_cli(
            "--no-meta", "--format", "csv", "divergence", "--n", "2", "--tau", "10", "--K", "4"
        )
        lines = out.strip().splitlines()
        assert code == 0
        assert lines[0] == "k,term,partial_sum"
        assert len(lines) == 6

    def test_padic_divergence(self):
        code, out = run_cli(
            "--no-meta", "divergence", "--n", "2", "--tau", "1/5", "--K", "14",
            "--padic-p", "5",
        )
        rep = json.loads(out)
        assert code == 0 and rep["sum_matches_normalized_zeta"]

    def test_padic_zeta_expansion(self):
        code, out = run_cli("--no-meta", "padic-zeta", "--p", "5", "--s", "2", "--tau", "1/5")
        rep = json.loads(out)
        assert code == 0
        assert rep["p"] == 5 and len(rep["digits"]) == rep["precision"]


class TestStochasticDeterminism:
    def test_same_seed_identical(self):
        args = (
            "--no-meta", "--seed", "5", "special-values", "--op", "rkj",
            "--k", "2", "--j", "1", "--kappa", "0.3", "--samples", "20000",
        )
        _, a = run_cli(*args)
        _, b = run_cli(*args)
        assert a == b

    def test_different_seed_differs(self):
        base = (
            "special-values", "--op", "rkj", "--k", "2", "--j", "1",
            "--kappa", "0.3", "--samples", "20000",
        )
        _, a = run_cli("--no-meta", "--seed", "1", *base)
        _, b = run_cli("--no-meta", "--seed", "2", *base)
        assert json.loads(a)["value"] != json.loads(b)["value"]


class TestExitCodes:
    def test_usage_error(self):
        assert cli.run(["congruence", "--check", "bogus", "--p", "5"]) == 2

    def test_input_error(self):
        code, _ = run_cli("--no-meta", "padic-zeta", "--p", "5", "--s", "1", "--tau", "1/5")
        assert code == 2

    def test_missing_subcommand(self):
        assert cli.run([]) == 2

    def test_help_exits_zero(self):
        assert cli.run(["--help"]) == 0


class TestFlagsAfterSubcommand:
    def test_format_after(self):
        code, out = run_cli("bernoulli", "--k", "2", "--format", "plain", "--no-meta")
        assert code == 0 and out.strip() == "1/6"


class TestSpectrumCommands:
    def test_ncho_spectrum(self):
        code, out = run_cli(
            "--no-meta", "ncho-spectrum", "--alpha", "2.0", "--beta", "1.0",
            "--n-basis", "128", "--count", "10", "--threshold", "1e-5",
        )
        rep = json.loads(out)
        assert code == 0 and rep["bounds_ok"]
        assert len(rep["eigenvalues"]) == 10 == len(rep["convergence"])

    def test_partition_qho(self):
        import math

        code, out = run_cli("--no-meta", "partition", "--model", "qho", "--t", "1.0")
        rep = json.loads(out)
        assert abs(rep["value"] - math.exp(-0.5) / (1 - math.exp(-1))) < 1e-12


class TestMeta:
    def test_meta_block_present_by_default(self):
        code, out = run_cli("bernoulli", "--k", "2")
        rep = json.loads(out)
        assert "meta" in rep and "version" in rep["meta"]

    def test_no_meta_strips(self):
        _, out = run_cli("--no-meta", "bernoulli", "--k", "2")
        assert "meta" not in json.loads(out)


@pytest.mark.slow
class TestVerifyAllQuick:
    def test_quick_suite_passes(self):
        code, out = run_cli("--no-meta", "verify-all", "--budget", "quick")
        rep = json.loads(out)
        assert code == 0
        assert rep["all_ok"] and rep["failures"] == []

    def test_entry_point_subprocess(self):
        res = subprocess.run(
            [sys.executable, "-m", "zetaforge.cli", "--no-meta", "--format", "plain",
             "bernoulli", "--k", "4"],
            capture_output=True, text=True,
        )
        assert res.returncode == 0
        assert res.stdout.strip() == "-1/30"
