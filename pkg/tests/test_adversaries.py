import math
import warnings
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from olt import adversaries as adv
from olt.f2core import BooleanFunctionTable, ext_bits, f2_rank, monomials
from olt.harness.stats import within_sigmas
from olt.oracle import BUDGET_MANAGING, AdversarialOracle, OracleConfig
from olt.seq_testers import distance_to_sortedness


def zero_table(n):
    return BooleanFunctionTable(n, np.zeros(1 << n, dtype=np.uint8))


def brute_Z(queries, n, d):
    """Points whose ext-vector lies in the span of the queries' ext-vectors."""
    ms = monomials(n, d)
    exts = [ext_bits(y, ms) for y in queries]
    k = f2_rank(exts)
    return {z for z in range(1 << n) if f2_rank(exts + [ext_bits(z, ms)]) == k}


class TestBaselines:
    def test_identity_matches_offline(self):
        from olt.boolean_testers import online_linearity_test
        from olt.harness.generators import planted_far_linear

        f = planted_far_linear(10, Fraction(1, 4), 0).input
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            a = online_linearity_test(AdversarialOracle(f), Fraction(1, 4), 4, np.random.default_rng(3))
            o = AdversarialOracle(f, OracleConfig(t=4), adv.make_adversary("identity"))
            b = online_linearity_test(o, Fraction(1, 4), 4, np.random.default_rng(3))
        assert a == b

    def test_uniform_eraser_sighting_rate(self):
        from olt.boolean_testers import online_linearity_test
        from olt.harness.generators import random_linear

        games, saw = 300, 0
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            for s in range(games):
                f = random_linear(20, s).input
                o = AdversarialOracle(f, OracleConfig(t=4),
                                      adv.make_adversary("uniform_eraser", np.random.default_rng(s)))
                v = online_linearity_test(o, Fraction(1, 4), 4, np.random.default_rng(s + 10 ** 6))
                assert not v.rejected
                saw += v.saw_manipulation
        assert saw / games <= 1 / 3

    def test_greedy_xor_erases_reserve_combinations(self):
        a = adv.make_adversary("greedy_xor", np.random.default_rng(0))
        o = AdversarialOracle(zero_table(8), OracleConfig(t=3), a)
        for x in (3, 5, 9):
            o.query(x)
        span = {0, 3, 5, 9, 3 ^ 5, 3 ^ 9, 5 ^ 9, 3 ^ 5 ^ 9}
        assert o.erased and o.erased <= span

    def test_corruptor_only_corrupts(self):
        a = adv.make_adversary("uniform_corruptor", np.random.default_rng(0))
        o = AdversarialOracle(zero_table(6), OracleConfig(t=2, kind="corruption"), a)
        for x in range(10):
            o.query(x)
        assert not o.erased and o.corrupted

    def test_unknown_name(self):
        with pytest.raises(KeyError):
            adv.make_adversary("nope")

    def test_domain_guard(self):
        with pytest.raises(ValueError):
            AdversarialOracle(zero_table(4), OracleConfig(t=1), adv.make_adversary("partner_eraser"))


class TestSpanEraser:
    def test_first_query(self):
        a = adv.SpanEraser(d=2)
        o = AdversarialOracle(zero_table(4), OracleConfig(t=4), a)
        o.query(0b0001)
        assert a.Z == {0b0001} and a.k == 1

    def test_two_unit_vectors(self):
        # ext(0) and ext(e1 + e2) are not in span(ext(e1), ext(e2)) once the constant
        # and x1x2 coordinates are present, so nothing beyond the queries is erased
        a = adv.SpanEraser(d=2)
        o = AdversarialOracle(zero_table(4), OracleConfig(t=4), a)
        o.query(0b01)
        o.query(0b10)
        assert a.Z == {0b01, 0b10} and not o.erased

    def test_affine_closure_at_degree_one(self):
        a = adv.SpanEraser(d=1)
        o = AdversarialOracle(zero_table(4), OracleConfig(t=4), a)
        for y in (1, 2, 4):
            o.query(y)
        # affine combinations of an odd number of queries
        assert a.Z == {1, 2, 4, 7} and o.erased == {7}

    @settings(max_examples=60, deadline=None)
    @given(st.integers(3, 7), st.integers(1, 3), st.lists(st.integers(0, 127), min_size=1, max_size=12))
    def test_matches_brute_force(self, n, d, qs):
        d = min(d, n)
        qs = [q % (1 << n) for q in qs]
        a = adv.SpanEraser(d=d)
        o = AdversarialOracle(zero_table(n), OracleConfig(t=1 << n), a)
        answered = []
        for y in qs:
            if o.query(y) is not None:
                answered.append(y)
        assert a.Z == brute_Z(answered, n, d)
        assert a.claim_violations == 0
        for k, r in a.history:
            assert math.comb(r.bit_length() - 1, d) <= k

    def test_enumeration_route_agrees(self):
        rng = np.random.default_rng(5)
        for _ in range(20):
            qs = rng.integers(0, 256, size=10).tolist()
            fast = adv.SpanEraser(d=2)
            slow = adv.SpanEraser(d=2, table_bits=0)
            for a in (fast, slow):
                o = AdversarialOracle(zero_table(8), OracleConfig(t=2), a)
                for y in qs:
                    o.query(y)
            assert fast.Z == slow.Z

    def test_input_oblivious(self):
        qs = [3, 5, 6, 9, 12, 15, 1, 2]
        erased = []
        for v in (0, 1):
            a = adv.SpanEraser(d=1)
            f = BooleanFunctionTable(4, np.random.default_rng(v).integers(0, 2, 16))
            o = AdversarialOracle(f, OracleConfig(t=1), a)
            for y in qs:
                o.query(y)
            erased.append(o.erased)
        assert erased[0] == erased[1]

    def test_claim_bound(self):
        assert adv.claim_bound_holds(1, 1, 2)
        assert adv.claim_bound_holds(3, 16, 2) is False  # C(4,2) = 6 > 3
        assert adv.claim_bound_holds(6, 16, 2)


class TestPairedInstances:
    def test_zero_eps_is_identity(self):
        rng = np.random.default_rng(0)
        ident = list(range(1, 21))
        assert adv.sample_d_plus(20, 0, rng).values == ident
        assert adv.sample_d_minus(20, 0, rng).values == ident

    def test_pair_values(self):
        f = adv.PairedSequenceInstance(["low", "high", "increasing", "violating"])
        assert f.values == [1, 1, 4, 4, 5, 6, 8, 7]
        assert f.family == adv.MINUS

    def test_d_plus_sorted(self):
        rng = np.random.default_rng(1)
        for _ in range(10_000):
            assert distance_to_sortedness(adv.sample_d_plus(20, Fraction(1, 4), rng)) == 0

    def test_d_minus_mean_distance(self):
        # n/2 pairs, each violating with probability eps and costing one change
        rng = np.random.default_rng(2)
        eps, n, draws = Fraction(1, 4), 40, 10_000
        changes = [n * distance_to_sortedness(adv.sample_d_minus(n, eps, rng)) for _ in range(draws)]
        assert within_sigmas(int(sum(changes)), draws * n // 2, float(eps))
        assert abs(float(sum(changes)) / (draws * n) - float(eps) / 2) < 0.01

    def test_partner(self):
        assert adv.partner(1) == 2 and adv.partner(2) == 1 and adv.partner(7) == 8


class TestSortednessAdversary:
    def _play(self, inst, eps, rng, t, queries):
        a = adv.SortednessImpossibility(rng, eps)
        o = AdversarialOracle(inst, OracleConfig(t=t, scheduling=BUDGET_MANAGING), a)
        for x in queries:
            o.query(x)
        return a, o

    def test_shift_always_erases_partner(self):
        rng = np.random.default_rng(0)
        for fam in (adv.sample_d_plus, adv.sample_d_minus):
            for _ in range(200):
                inst = fam(40, Fraction(1, 4), rng)
                a, o = self._play(inst, Fraction(1, 4), rng, 10, range(1, 41, 2))
                m = a.metrics()
                assert m["shift_erased"] == m["shift"]

    def test_conditional_frequency_equal(self):
        eps = Fraction(1, 4)
        p = float(eps / (1 - eps))
        rng = np.random.default_rng(3)
        for fam in (adv.sample_d_plus, adv.sample_d_minus):
            same = erased = 0
            for _ in range(300):
                inst = fam(200, eps, rng)
                a, _ = self._play(inst, eps, rng, 200, range(1, 201, 2))
                m = a.metrics()
                same += m["same"]
                erased += m["same_erased"]
            assert within_sigmas(erased, same, p)

    def test_needs_paired_input(self):
        from olt.seq_testers import RealSequence
        with pytest.raises(TypeError):
            AdversarialOracle(RealSequence(list(range(8))), OracleConfig(t=1),
                              adv.SortednessImpossibility(None, Fraction(1, 4)))

    def test_backlog_breaks_sustain(self):
        rng = np.random.default_rng(4)
        inst = adv.PairedSequenceInstance(["low"] * 10)
        a, _ = self._play(inst, Fraction(1, 4), rng, Fraction(1, 2), range(1, 21, 2))
        assert not a.sustained and a.settled()


class TestIndistinguishability:
    def test_g_test_identical(self):
        assert adv.g_test({"a": 50, "b": 50}, {"a": 50, "b": 50})[1] == pytest.approx(1.0)

    def test_g_test_different(self):
        assert adv.g_test({"a": 900, "b": 100}, {"a": 100, "b": 900})[1] < 1e-10

    def test_single_query_is_fair(self):
        rep = adv.yao_indistinguishability_experiment(1, 2, 10, 64, 20_000, np.random.default_rng(0))
        assert rep.bound_ok and not rep.distinguished
        for label in (adv.PLUS, adv.MINUS):
            assert within_sigmas(rep.first_answer_ones[label], rep.first_answer_present[label], 0.5)

    def test_outside_bound_distinguishes(self):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            rep = adv.yao_indistinguishability_experiment(12, 2, 10, 1, 20_000, np.random.default_rng(1),
                                                          strategy="lower_set")
        assert not rep.bound_ok and rep.distinguished

    def test_sortedness_experiment_runs(self):
        rep = adv.sortedness_indistinguishability_experiment(6, 200, Fraction(1, 100), 500,
                                                             np.random.default_rng(2))
        assert len(rep.prefix_pvalues) == 6 and not rep.distinguished
