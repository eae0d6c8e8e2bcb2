import math
import warnings
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from olt import boolean_testers as bt
from olt.adversaries import make_adversary
from olt.f2core import BooleanFunctionTable, anf_degree, distance_to_degree_d, distance_to_linearity
from olt.harness import generators as gen
from olt.harness.stats import within_sigmas
from olt.oracle import AdversarialOracle, OracleConfig


def oracle(f, t=0, b=1, adversary="identity", seed=0, **kw):
    adv = make_adversary(adversary, np.random.default_rng(seed + 1), **kw)
    return AdversarialOracle(f, OracleConfig(t=t, b=b), adv, record=False)


def AND2():
    return BooleanFunctionTable(2, [0, 0, 0, 1])


class TestBLR:
    def test_linear_always_accepts(self):
        f = gen.random_linear(6, 3).input
        rng = np.random.default_rng(0)
        assert not any(bt.blr_k_test(oracle(f, b=5), 4, rng).rejected for _ in range(10_000))

    def test_constant_one_always_rejects(self):
        f = BooleanFunctionTable(1, [1, 1])
        rng = np.random.default_rng(0)
        assert all(bt.blr_k_test(oracle(f, b=3), 2, rng).rejected for _ in range(500))

    def test_and_matches_exact(self):
        f = AND2()
        p = bt.exact_blr_k_rejection(f, 2, exact=True)
        assert p == Fraction(3, 8)
        assert bt.exact_blr_k_rejection(f, 2) == pytest.approx(float(p))
        rng = np.random.default_rng(11)
        trials = 100_000
        hits = sum(bt.blr_k_test(oracle(f, b=3), 2, rng).rejected for _ in range(trials))
        assert within_sigmas(hits, trials, float(p))

    def test_odd_k_rejected(self):
        with pytest.raises(ValueError):
            bt.blr_k_test(oracle(AND2(), b=4), 3, np.random.default_rng(0))

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_lower_bound_exhaustive(self, n):
        for v in range(1 << (1 << n)):
            f = BooleanFunctionTable.from_int(n, v)
            eps = distance_to_linearity(f)
            for k in range(2, 13, 2):
                val = bt.exact_blr_k_rejection(f, k, exact=True)
                if eps == 0:
                    assert val == 0
                else:
                    assert val >= min(Fraction(1, 4), k * eps / 2)

    def test_reject_witness_is_clean(self):
        rng = np.random.default_rng(2)
        for _ in range(200):
            v = bt.blr_k_test(oracle(AND2(), b=3), 2, rng)
            if v.rejected:
                assert None not in [a for _, a in v.rejecting_witness]
                assert sum(a for _, a in v.rejecting_witness) % 2 == 1


class TestLinearityParams:
    def test_example(self):
        p = bt.linearity_params(Fraction(1, 2), 2)
        assert (p.m, p.alpha, p.r) == (20, Fraction(1, 4), 5)

    def test_clamped_below_two(self):
        assert bt.linearity_params(Fraction(1, 2), 1) == bt.linearity_params(Fraction(1, 2), 2)

    @settings(max_examples=1000)
    @given(st.fractions(min_value=Fraction(1, 1000), max_value=Fraction(1, 2)), st.integers(0, 10 ** 6))
    def test_reserve_divisible_by_four(self, eps, t):
        p = bt.linearity_params(eps, t)
        assert p.m % 4 == 0 and p.r >= 1 and p.alpha <= Fraction(1, 4)

    def test_bad_eps(self):
        with pytest.raises(ValueError):
            bt.linearity_params(0, 2)


class TestOnlineLinearity:
    @pytest.mark.parametrize("adversary", ["identity", "uniform_eraser", "greedy_xor", "span_eraser"])
    def test_one_sided(self, adversary):
        rng = np.random.default_rng(5)
        kw = {"d": 1} if adversary == "span_eraser" else {}
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", bt.RegimeWarning)
            for s in range(30):
                f = gen.random_linear(8, s).input
                v = bt.online_linearity_test(oracle(f, t=2, adversary=adversary, seed=s, **kw),
                                             Fraction(1, 2), 2, rng)
                assert not v.rejected

    def test_far_function_rejected_offline(self):
        rng = np.random.default_rng(3)
        f = gen.planted_far_linear(12, Fraction(1, 4), 4).input
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", bt.RegimeWarning)
            hits = sum(bt.online_linearity_test(oracle(f), Fraction(1, 4), 4, rng).rejected
                       for _ in range(100))
        assert hits >= 67

    def test_regime_warning(self):
        f = gen.random_linear(6, 0).input
        with pytest.warns(bt.RegimeWarning):
            bt.online_linearity_test(oracle(f, t=64), Fraction(1, 2), 64, np.random.default_rng(0))

    def test_reserve_guard(self):
        p = bt.linearity_params(Fraction(1, 2), 2).override(m=6)
        with pytest.raises(ValueError):
            bt.online_linearity_test(oracle(AND2()), Fraction(1, 2), 2, np.random.default_rng(0), p)


class TestPatterns:
    def test_construction_errors(self):
        with pytest.raises(ValueError):
            bt.PatternMatrix([1, 1], 1)
        with pytest.raises(ValueError):
            bt.PatternMatrix([0b01, 0b01, 0b10], 2)
        with pytest.raises(ValueError):
            bt.PatternMatrix([0b11], 2)  # rank 1 < m

    def test_blr_square_instance(self):
        X = bt.blr_square()
        assert bt.pattern_instance(X, [0b01, 0b10]) == [0b01, 0b10, 0b11]
        assert bt.pattern_instance(X, [0, 0]) == [0, 0, 0]

    def test_zero_parameters(self):
        assert set(bt.pattern_instance(bt.chain_of_cubes(2, 3), [0] * 5)) == {0}

    def test_goodness_examples(self):
        # three rows: phi of the empty set is 1, so constant 1 (degree 0) is rejected;
        # adding the zero row gives the affine square, which is good for P_1
        rep = bt.goodness_report(bt.blr_square(), 1)
        assert not rep["good"] and rep["violating_subset"] == () and rep["sound"]
        assert bt.is_good_pattern(bt.PatternMatrix([0b00, 0b01, 0b10, 0b11], 2), 1)
        for d in range(5):
            assert bt.is_good_pattern(bt.affine_cube(d), d)
        rep = bt.goodness_report(bt.PatternMatrix([1], 1), 1)
        assert not rep["good"] and rep["violating_subset"] == ()

    def test_phi_empty_set_counts_rows(self):
        X = bt.chain_of_cubes(1, 3)
        assert bt.pattern_phi(X, ()) == X.ell % 2

    @pytest.mark.parametrize("d", [1, 2, 3])
    @pytest.mark.parametrize("s", [3, 5])
    def test_chain_of_cubes_good(self, d, s):
        X = bt.chain_of_cubes(d, s)
        assert (X.ell, X.m) == ((s + 1) << d, d + s)
        assert bt.is_good_pattern(X, d + 1)

    def test_chain_with_one_column_repeats_rows(self):
        # the indicator row and the all-ones row coincide when s = 1
        with pytest.raises(ValueError, match="distinct"):
            bt.chain_of_cubes(1, 1)

    def test_chain_sizes(self):
        X = bt.chain_of_cubes(2, 3)
        assert (X.m, X.ell) == (5, 16)
        assert bt.chain_of_cubes(0, 3).ell == 4

    def test_chain_needs_odd(self):
        with pytest.raises(ValueError):
            bt.chain_of_cubes(1, 2)

    def test_blr_square_exhaustive_n4(self):
        X = bt.blr_square()
        masks = bt.instance_masks(X, 4)
        fw_all = []
        for v in range(1 << 16):
            f = BooleanFunctionTable.from_int(4, v)
            fw_all.append(f.words())
        fw = np.stack(fw_all)[:, None, :]  # (functions, 1, words)
        par = np.bitwise_count(masks[None, :, :] & fw).sum(axis=2) & 1
        never = ~par.any(axis=1)
        linear = np.array([distance_to_linearity(BooleanFunctionTable.from_int(4, v)) == 0
                           for v in range(1 << 16)])
        assert np.array_equal(never, linear)
        assert never.sum() == 16

    def test_x_tester_complete(self):
        X = bt.affine_cube(2)
        rng = np.random.default_rng(1)
        f = gen.random_degree_d(6, 2, 0).input
        o = oracle(f, b=X.ell)
        assert not any(bt.x_tester(X, o, rng).rejected for _ in range(10_000))

    def test_x_tester_soundness_rate(self):
        X = bt.affine_cube(1)
        rng = np.random.default_rng(9)
        for s in range(3):
            f = gen.random_function(5, s).input
            eps = float(distance_to_degree_d(f, 1))
            bound = min(X.ell * eps / 2, 1 / (2 * X.ell ** 2))
            trials = 4000
            hits = sum(bt.x_tester(X, oracle(f, b=X.ell), rng).rejected for _ in range(trials))
            assert hits / trials >= bound - 3 * math.sqrt(bound * (1 - bound) / trials)

    def test_exact_rejection_matches_empirical(self):
        X = bt.chain_of_cubes(0, 3)
        f = gen.random_function(4, 2).input
        p = float(bt.exact_rejection_probability(X, f))
        rng = np.random.default_rng(4)
        trials = 20_000
        hits = sum(bt.x_tester(X, oracle(f, b=X.ell), rng).rejected for _ in range(trials))
        assert within_sigmas(hits, trials, p)

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 2 ** 16 - 1), st.sampled_from([(1, 1), (2, 1)]))
    def test_violating_parameters(self, v, case):
        d, pattern = case
        f = BooleanFunctionTable.from_int(4, v)
        X = bt.affine_cube(d) if pattern == 1 else bt.chain_of_cubes(d - 1, 3)
        if anf_degree(f) <= d:
            with pytest.raises(ValueError):
                bt.violating_parameters(X, f, d)
            return
        M = bt.violating_parameters(X, f, d)
        pts = bt.pattern_instance(X, M)
        assert sum(f(p) for p in pts) % 2 == 1


class TestDegreeParams:
    def test_shape(self):
        p = bt.degree_params(Fraction(1, 4), 2, 2)
        assert p.m % 2 == 1 and p.ell == (p.m + 1) * 2
        assert p.alpha == min(Fraction(1, 4) * p.ell / 2, Fraction(1, 2 * p.ell ** 2))
        assert p.r == math.ceil(2 / p.alpha)

    def test_needs_positive_degree(self):
        with pytest.raises(ValueError):
            bt.degree_params(Fraction(1, 4), 0, 2)


class TestOnlineDegree:
    def small(self):
        return bt.degree_params(Fraction(1, 4), 2, 2).override(m=5, r=20)

    @pytest.mark.parametrize("adversary", ["identity", "uniform_eraser", "greedy_xor", "span_eraser"])
    def test_one_sided(self, adversary):
        rng = np.random.default_rng(6)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", bt.RegimeWarning)
            for s in range(20):
                f = gen.random_degree_d(8, 2, s).input
                v = bt.online_degree_test(oracle(f, t=2, b=2, adversary=adversary, seed=s),
                                          Fraction(1, 4), 2, 2, rng, self.small())
                assert not v.rejected

    def test_batch_size_guard(self):
        with pytest.raises(ValueError):
            bt.online_degree_test(oracle(AND2(), b=1), Fraction(1, 4), 2, 2,
                                  np.random.default_rng(0), self.small())

    def test_far_function_rejected(self):
        f = gen.planted_far_degree(10, 2, Fraction(1, 4), 1).input
        rng = np.random.default_rng(8)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", bt.RegimeWarning)
            hits = sum(bt.online_degree_test(oracle(f, b=2), Fraction(1, 4), 2, 2, rng,
                                             self.small()).rejected for _ in range(60))
        assert hits >= 40

    @pytest.mark.filterwarnings("ignore::olt.boolean_testers.RegimeWarning")
    def test_degree_one_query_law_matches_linearity(self):
        # with d = 1 the cosets are single points: 2m uniform reserve points, then the
        # XOR of a random m of them, the same shape as the linearity tester's iteration
        f = BooleanFunctionTable(3, [0] * 8)
        rng = np.random.default_rng(12)
        m = 3
        deg = np.zeros(8)
        lin = np.zeros(8)
        for _ in range(20_000):
            o = AdversarialOracle(f, record=True)
            bt.online_degree_test(o, Fraction(1, 4), 1, 2, rng,
                                  bt.TesterParams(m=m, alpha=Fraction(1, 4), r=1))
            pts = [ev[1] for ev in o.transcript if ev[0] == "Q"]
            assert len(pts) == 2 * m + 1
            xor = 0
            for j in range(2 * m):
                xor ^= pts[j]
            np.add.at(deg, pts, 1)
            o = AdversarialOracle(f, record=True)
            bt.online_linearity_test(o, Fraction(1, 4), 2, rng,
                                     bt.TesterParams(m=4, alpha=Fraction(1, 4), r=1))
            np.add.at(lin, [ev[1] for ev in o.transcript if ev[0] == "Q"], 1)
        from scipy.stats import chi2_contingency
        assert chi2_contingency(np.stack([deg, lin]))[1] > 1e-3


class TestBatchSubspace:
    def test_params(self):
        s, r = bt.batch_subspace_params(Fraction(1, 4), 2)
        assert s == Fraction(1, 10) and r == 100

    def test_members_accepted(self):
        rng = np.random.default_rng(1)
        for s in range(10):
            f = gen.random_degree_d(8, 2, s).input
            assert not bt.batch_subspace_degree_test(
                oracle(f, t=2, b=8, adversary="span_eraser", seed=s), Fraction(1, 4), 2, 2,
                Fraction(1, 10), rng, iterations=20).rejected

    def test_far_rejected(self):
        f = gen.planted_far_degree(12, 2, Fraction(1, 4), 0).input
        rng = np.random.default_rng(2)
        hits = sum(bt.batch_subspace_degree_test(oracle(f, b=8), Fraction(1, 4), 2, 0,
                                                 Fraction(1, 10), rng).rejected for _ in range(60))
        assert hits >= 40

    def test_directions_independent(self):
        rng = np.random.default_rng(0)
        for _ in range(500):
            V = bt.random_independent(rng, 8, 3)
            assert len({a ^ b for a in [0, V[0]] for b in [0, V[1]]} | {V[2]}) == 5

    def test_flat_is_uniform_over_points(self):
        f = BooleanFunctionTable(3, [0] * 8)
        seen = np.zeros(8)
        rng = np.random.default_rng(3)
        for _ in range(2000):
            o = AdversarialOracle(f, OracleConfig(b=4), record=True)
            bt.batch_subspace_degree_test(o, Fraction(1, 4), 1, 0, Fraction(1, 10), rng, iterations=1)
            assert len({ev[1] for ev in o.transcript if ev[0] == "Q"}) == 4
            for ev in o.transcript:
                if ev[0] == "Q":
                    seen[ev[1]] += 1
        assert np.all(np.abs(seen / seen.sum() - 1 / 8) < 0.02)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2 ** 32 - 1), st.sampled_from(["blr_k", "x_tester", "subspace"]))
def test_rejections_carry_clean_witness(seed, which):
    rng = np.random.default_rng(seed)
    f = gen.random_function(5, seed).input
    o = oracle(f, t=1, b=8, adversary="uniform_eraser", seed=seed)
    if which == "blr_k":
        v = bt.blr_k_test(o, 4, rng)
    elif which == "x_tester":
        v = bt.x_tester(bt.affine_cube(1), o, rng)
    else:
        v = bt.batch_subspace_degree_test(o, Fraction(1, 4), 2, 1, Fraction(1, 10), rng, iterations=5)
    if v.rejected:
        vals = f.values.tolist()
        assert all(a is not None and a == vals[x] for x, a in v.rejecting_witness)
    else:
        assert v.rejecting_witness is None

