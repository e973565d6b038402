import subprocess
import sys
from fractions import Fraction

import pytest

from lrpc_rings import (ExperimentConfig, TrialRecord, emit_csv, errors,
                        parse_ring_spec, product_theoretical_bound, read_csv,
                        run_trials, theoretical_bound)
from lrpc_rings.cli import main as cli_main
from lrpc_rings.simulate import CSV_HEADER


class TestParseRingSpec:
    def test_reference_setup(self):
        ring, ext = parse_ring_spec("Z4 ext m=20")
        assert ring.rho == 1 and ring.factors[0].char == 4
        assert ext.m == 20

    def test_quotient_ring_spec(self):
        ring, ext = parse_ring_spec("Z4[x]/(x^2) ext m=3")
        assert ring.factors[0].gamma == 2 and ext.m == 3

    def test_not_local_quotient(self):
        with pytest.raises(errors.NotLocal):
            parse_ring_spec("Z5[x]/(x^2+1) ext m=2")

    def test_composite_and_products(self):
        ring, ext = parse_ring_spec("Z6 ext m=2")
        assert [r.char for r in ring.factors] == [2, 3]
        assert ring.modulus == 6
        ring2, _ = parse_ring_spec("Z4 x GR(9,2) ext m=2")
        assert [r.char for r in ring2.factors] == [4, 9]
        assert ring2.factors[1].mu == 2

    def test_explicit_modulus(self):
        ring, ext = parse_ring_spec("Z4 ext m=5 f=x^5+x^2+1")
        f = ext.factors[0].f[:, 0].tolist()
        assert f == [1, 0, 1, 0, 0, 1]

    def test_parse_error_positions(self):
        with pytest.raises(errors.ParseError) as ei:
            parse_ring_spec("Z4 ext m=")
        assert ei.value.position == len("Z4 ext m=")
        with pytest.raises(errors.ParseError) as ei:
            parse_ring_spec("Q4 ext m=2")
        assert ei.value.position == 0
        with pytest.raises(errors.ParseError):
            parse_ring_spec("Z4 ext m=2 junk")


class TestTheoreticalBound:
    def test_t_zero(self):
        assert theoretical_bound(2, 2, 0, 20, 20, 8) == 1

    def test_spot_value_independent_evaluation(self):
        got = theoretical_bound(2, 2, 4, 20, 20, 8)
        # independent exact evaluation of (1 - 2^-6) prod_{i=0}^{7} (1 - 2^(i-12))
        head = Fraction(1) - Fraction(1, 2 ** 6)
        tail = Fraction(1)
        for i in range(8):
            tail *= Fraction(1) - Fraction(1, 2 ** (12 - i))
        assert got == head * tail

    def test_negative_head_clamped(self):
        assert theoretical_bound(2, 2, 6, 20, 20, 8) == 0

    def test_hypotheses(self):
        with pytest.raises(errors.HypothesisViolated):
            theoretical_bound(2, 2, 7, 20, 20, 8)
        with pytest.raises(errors.HypothesisViolated):
            theoretical_bound(2, 2, 5, 40, 20, 12)

    def test_product_bound_multiplicative(self):
        b2 = theoretical_bound(2, 2, 1, 10, 10, 4)
        b3 = theoretical_bound(3, 2, 1, 10, 10, 4)
        assert product_theoretical_bound([2, 3], 2, 1, 10, 10, 4) == b2 * b3


class TestRunTrials:
    def test_zero_trials_rejected(self):
        with pytest.raises(errors.HypothesisViolated):
            ExperimentConfig(ring_spec="Z4", m=8, n=8, k=3, lam=2,
                             t_values=(1,), trials=0, seed=1)

    def test_histogram_sums_to_failures(self, tmp_path):
        config = ExperimentConfig(ring_spec="Z4", m=8, n=8, k=3, lam=2,
                                  t_values=(2,), trials=150, seed=9)
        (rec,) = run_trials(config)
        assert rec.failures == sum(rec.failure_reason_histogram.values())
        assert rec.failures > 0  # t=2 is at the edge for these parameters

    def test_determinism_and_csv_roundtrip(self, tmp_path):
        config = ExperimentConfig(ring_spec="Z4", m=6, n=6, k=2, lam=2,
                                  t_values=(1,), trials=60, seed=4)
        recs1 = run_trials(config)
        recs2 = run_trials(config)
        assert recs1 == recs2
        p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
        emit_csv(recs1, p1)
        emit_csv(recs2, p2)
        assert p1.read_bytes() == p2.read_bytes()
        back = read_csv(p1)
        assert len(back) == 1
        assert back[0].failures == recs1[0].failures
        assert back[0].failure_reason_histogram == recs1[0].failure_reason_histogram

    def test_product_ring_trials(self):
        config = ExperimentConfig(ring_spec="Z6", m=6, n=6, k=2, lam=2,
                                  t_values=(1,), trials=40, seed=3)
        (rec,) = run_trials(config)
        assert rec.trials == 40
        assert 0.0 <= rec.empirical_failure_rate <= 1.0

    def test_fresh_code_per_trial(self):
        config = ExperimentConfig(ring_spec="Z4", m=6, n=6, k=2, lam=2,
                                  t_values=(1,), trials=10, seed=4,
                                  fresh_code_per_trial=True)
        (rec,) = run_trials(config)
        assert rec.trials == 10


class TestEmitCsv:
    def test_header_only(self, tmp_path):
        path = tmp_path / "empty.csv"
        emit_csv([], path)
        assert path.read_text() == CSV_HEADER + "\n"

    def test_row_count_and_format(self, tmp_path):
        recs = [TrialRecord(t, 10, 1, 0.1, 0.25, {5: 1, 8: 0, 14: 0, 16: 0, 18: 0})
                for t in (1, 2, 3)]
        path = tmp_path / "r.csv"
        emit_csv(recs, path, precision=3)
        lines = path.read_text().split("\n")
        assert lines[0] == CSV_HEADER
        assert len([ln for ln in lines[1:] if ln]) == 3
        assert lines[1] == "1,10,1,0.100,0.250,1,0,0,0,0,0"

    def test_io_error(self, tmp_path):
        with pytest.raises(errors.LrpcError):
            emit_csv([], tmp_path / "nodir" / "x.csv")

    def test_record_validation(self):
        with pytest.raises(errors.HypothesisViolated):
            TrialRecord(1, 10, 11, 1.1, 0.0, {})


class TestCli:
    def test_bound_subcommand(self, capsys):
        rc = cli_main(["bound", "--ring", "Z4", "--ext", "m=20", "--n", "20",
                       "--k", "8", "--lambda", "2", "--t", "1..3"])
        assert rc == 0
        out = capsys.readouterr().out
        assert out.count("t=") == 3

    def test_simulate_deterministic_bytes(self, tmp_path, capsys):
        args = ["simulate", "--ring", "Z4", "--ext", "m=6", "--n", "6",
                "--k", "2", "--lambda", "2", "--t", "1", "--trials", "40",
                "--seed", "7"]
        p1, p2 = tmp_path / "x.csv", tmp_path / "y.csv"
        assert cli_main(args + ["--out", str(p1)]) == 0
        assert cli_main(args + ["--out", str(p2)]) == 0
        assert p1.read_bytes() == p2.read_bytes()

    def test_selftest(self, capsys):
        assert cli_main(["selftest"]) == 0
        out = capsys.readouterr().out
        assert "FAIL" not in out

    def test_module_entrypoint(self):
        proc = subprocess.run([sys.executable, "-m", "lrpc_rings", "bound",
                               "--ring", "Z6", "--ext", "m=10", "--n", "10",
                               "--k", "4", "--lambda", "2", "--t", "2"],
                              capture_output=True, text=True)
        assert proc.returncode == 0
        assert "t=2" in proc.stdout
