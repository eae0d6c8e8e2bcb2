import io
import json
from fractions import Fraction
from importlib import resources

import numpy as np
import pytest

from olt import boolean_testers as bt
from olt.f2core import distance_to_degree_d, distance_to_linearity
from olt.harness import generators as gen
from olt.harness import runner
from olt.harness.cli import main
from olt.harness.stats import at_most_plus_sigmas, wilson, within_sigmas
from olt.harness.suites import resolve
from olt.oracle import AdversarialOracle
from olt.seq_testers import distance_to_sortedness

DATA = resources.files("olt") / "data"


def cfg(**kw):
    base = dict(tester="online_linearity", generator="planted_far_linear", trials=20, seed=5,
                tester_params={"eps": Fraction(1, 4)}, generator_params={"n": 10, "eps": Fraction(1, 4)},
                t=Fraction(2))
    base.update(kw)
    return runner.ExperimentConfig(**base)


def cli(*argv):
    buf = io.StringIO()
    code = main(list(argv), buf)
    return code, buf.getvalue()


class TestGenerators:
    def test_random_linear(self):
        g = gen.random_linear(8, 0)
        assert g.member and distance_to_linearity(g.input) == 0

    def test_planted_far_linear_certified(self):
        g = gen.planted_far_linear(14, Fraction(1, 4), 1)
        assert g.distance >= Fraction(1, 4)
        assert distance_to_linearity(g.input) == g.distance

    def test_planted_far_sorted_certified(self):
        g = gen.planted_far_sorted(4096, Fraction(1, 4), 2)
        assert g.distance >= Fraction(1, 4)
        assert distance_to_sortedness(g.input) == g.distance

    def test_planted_far_degree_lift_keeps_distance(self):
        g = gen.planted_far_degree(12, 2, Fraction(1, 4), 3)
        assert g.input.n == 12 and g.distance >= Fraction(1, 4)

    def test_planted_far_degree_direct(self):
        g = gen.planted_far_degree(6, 2, Fraction(1, 8), 3)
        assert distance_to_degree_d(g.input, 2) == g.distance

    def test_random_degree_member(self):
        from olt.f2core import anf_degree
        assert anf_degree(gen.random_degree_d(7, 2, 4).input) <= 2

    def test_deterministic(self):
        a = gen.generate("planted_far_sorted", 9, n=256, eps=Fraction(1, 4))
        b = gen.generate("planted_far_sorted", 9, n=256, eps=Fraction(1, 4))
        assert a.input.values == b.input.values

    def test_unknown(self):
        with pytest.raises(KeyError):
            gen.generate("nope", 0)


class TestStats:
    def test_wilson(self):
        lo, hi = wilson(50, 100)
        assert 0.39 < lo < 0.41 and 0.59 < hi < 0.61
        assert wilson(0, 10)[0] == 0.0 and wilson(10, 10)[1] == 1.0
        with pytest.raises(ValueError):
            wilson(0, 0)

    def test_sigma_checks(self):
        assert within_sigmas(50, 100, 0.5)
        assert not within_sigmas(80, 100, 0.5)
        assert at_most_plus_sigmas(40, 100, 1 / 3)
        assert not at_most_plus_sigmas(60, 100, 1 / 3)


class TestConfig:
    def test_zero_trials(self):
        with pytest.raises(runner.ConfigError):
            cfg(trials=0)

    def test_unknown_names(self):
        for key in ("tester", "adversary", "generator"):
            with pytest.raises(runner.ConfigError):
                cfg(**{key: "nope"})

    def test_mapping_layout(self):
        c = runner.config_from_mapping({
            "experiment": {"seed": 3, "trials": 4},
            "oracle": {"t": "5/2", "b": 2},
            "tester": {"name": "pair_tester", "eps": "1/4"},
            "generator": {"name": "sorted_sequence", "n": 64},
        })
        assert c.t == Fraction(5, 2) and c.b == 2 and c.tester_params["eps"] == Fraction(1, 4)
        assert c.adversary == "identity"

    def test_seed_required(self, monkeypatch):
        monkeypatch.delenv("OLT_SEED", raising=False)
        with pytest.raises(runner.ConfigError):
            runner.config_from_mapping({"experiment": {"trials": 1}, "tester": {"name": "blr_k"},
                                        "generator": {"name": "random_linear"}})
        monkeypatch.setenv("OLT_SEED", "11")
        c = runner.config_from_mapping({"experiment": {"trials": 1}, "tester": {"name": "blr_k"},
                                        "generator": {"name": "random_linear"}})
        assert c.seed == 11

    def test_shipped_configs_load(self):
        for name in ("example_linearity.toml", "example_sortedness.toml"):
            with resources.as_file(DATA / name) as p:
                c = runner.load_config(str(p), trials=3)
            assert c.trials == 3


class TestRunner:
    def test_identity_equals_direct_loop(self):
        c = cfg(fresh_input=True, trials=15, t=Fraction(0))
        rep = runner.run_experiment(c)
        rejects = 0
        for i in range(c.trials):
            in_ss, test_ss, _ = runner.trial_seeds(c.seed, i)
            f = gen.generate(c.generator, np.random.default_rng(in_ss), **c.generator_params).input
            import warnings
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                v = bt.online_linearity_test(AdversarialOracle(f), Fraction(1, 4), 0,
                                             np.random.default_rng(test_ss))
            rejects += v.rejected
        assert rep.rejects == rejects

    def test_deterministic_reports(self):
        c = cfg(adversary="span_eraser", adversary_params={"d": 1}, audit_rate=0.2)
        a = runner.run_experiment(c).to_jsonl()
        b = runner.run_experiment(c).to_jsonl()
        assert a == b

    def test_workers_do_not_change_results(self):
        c = cfg(adversary="uniform_eraser", trials=12)
        assert runner.run_experiment(c).to_jsonl() == runner.run_experiment(c, workers=2).to_jsonl()

    def test_report_invariants(self):
        rep = runner.run_experiment(cfg(adversary="uniform_eraser", audit_rate=1.0))
        assert rep.accepts + rep.rejects == rep.trials
        for lo, hi in (rep.reject_ci, rep.accept_ci, rep.saw_manipulation_ci):
            assert 0 <= lo <= hi <= 1
        assert rep.audited == rep.trials and rep.audit_failures == 0
        assert rep.witness_violations == 0

    def test_csv(self):
        rep = runner.run_experiment(cfg(trials=3))
        text = runner.reports_to_csv([rep])
        header, row = text.strip().split("\n")
        assert header.split(",") == list(runner.ExperimentReport.CSV_FIELDS)
        assert row.startswith("online_linearity,identity,planted_far_linear,5,3")

    def test_jsonl_canonical(self):
        rep = runner.run_experiment(cfg(trials=3))
        line = rep.to_jsonl()
        assert line.endswith("\n") and "wall_clock" not in line
        assert json.loads(line)["trials"] == 3

    def test_witness_check(self):
        f = gen.random_linear(4, 0).input
        assert runner.witness_consistent(f, [(1, f(1))])
        assert not runner.witness_consistent(f, [(1, 1 - f(1))])
        assert not runner.witness_consistent(f, [(1, None)])


class TestCLI:
    def test_check_pattern(self):
        assert cli("check-pattern", "--d", "3", "--chain", "3") == (0, "GOOD for P_3\n")
        code, out = cli("check-pattern", "--d", "2", "--cube")
        assert code == 0
        code, out = cli("check-pattern", "--d", "2", "--chain", "1")
        assert code == 1 and out.startswith("NOT GOOD")
        assert cli("check-pattern", "--d", "2", "--chain", "2")[0] == 2

    def test_check_pattern_file(self, tmp_path):
        p = tmp_path / "x.txt"
        p.write_text("01\n10\n11\n")
        code, out = cli("check-pattern", "--d", "1", "--file", str(p))
        assert code == 1 and "subset ()" in out
        p.write_text("00\n01\n10\n11\n")
        assert cli("check-pattern", "--d", "1", "--file", str(p))[0] == 0

    def test_distance(self, tmp_path):
        assert cli("distance", "--kind", "sortedness", "(3,1,2,5,4)") == (0, "2/5\n")
        assert cli("distance", "--kind", "linearity", "n=2:8") == (0, "1/4\n")
        assert cli("distance", "--kind", "degree", "--d", "2", "n=3:80") == (0, "1/8\n")
        p = tmp_path / "s.csv"
        p.write_text("0\n0\n0\n0\n10\n")
        assert cli("distance", "--kind", "lipschitz", str(p)) == (0, "1/5\n")
        assert cli("distance", "--kind", "linearity", "1,2,3")[0] == 2
        assert cli("distance", "--kind", "degree", "n=3:80")[0] == 2

    def test_replay(self):
        with resources.as_file(DATA / "good_transcript.txt") as p:
            code, out = cli("replay", str(p))
        assert code == 0 and out.startswith("consistent")
        with resources.as_file(DATA / "bad_transcript.txt") as p:
            code, out = cli("replay", str(p))
        assert code == 1 and "violation" in out

    def test_run(self, tmp_path):
        with resources.as_file(DATA / "example_sortedness.toml") as p:
            code, out = cli("run", str(p), "--trials", "4")
            assert code == 0 and json.loads(out)["trials"] == 4
            code, out = cli("--out", "csv", "run", str(p), "--trials", "2", "--seed", "3")
        assert code == 0 and out.startswith("tester,")
        dest = tmp_path / "r.jsonl"
        with resources.as_file(DATA / "example_sortedness.toml") as p:
            assert cli("run", str(p), "--trials", "2", "--output", str(dest))[0] == 0
        assert json.loads(dest.read_text())["config"]["seed"] == 7

    def test_run_bad_config(self, tmp_path):
        p = tmp_path / "bad.toml"
        p.write_text("[experiment]\ntrials = 0\nseed = 1\n[tester]\nname='blr_k'\n[generator]\nname='random_linear'\n")
        assert cli("run", str(p))[0] == 2
        assert cli("run", str(tmp_path / "missing.toml"))[0] == 2

    def test_suite_small(self):
        code, out = cli("suite", "11")
        assert code == 0 and out.startswith("criterion 11 [PASS]")
        code, out = cli("--out", "jsonl", "suite", "7")
        assert code == 1 and json.loads(out)["passed"] is False

    def test_usage(self):
        assert cli()[0] == 2
        assert cli("bogus")[0] == 2

    def test_resolve(self):
        assert resolve("all") == list(range(1, 19))
        assert resolve("4,c5") == [4, 5]
        with pytest.raises(ValueError):
            resolve("19")
