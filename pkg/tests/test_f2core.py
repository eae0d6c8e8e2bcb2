from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from olt.f2core import (
    BooleanFunctionTable,
    DimensionTooLarge,
    SpanTooLarge,
    anf,
    anf_degree,
    distance_to_affine,
    distance_to_degree_d,
    distance_to_linearity,
    ext,
    ext_bits,
    ext_table,
    f2_rank,
    f2_span_basis,
    from_anf,
    in_span,
    inverse_wht,
    monomials,
    project,
    rm_dimension,
    span_enumerate,
    wht,
)


def table(n, fn):
    return BooleanFunctionTable.from_callable(n, fn)


def x1(x):
    return x & 1


def x2(x):
    return (x >> 1) & 1


def brute_linearity(f):
    n = f.n
    best = 1 << n
    for S in range(1 << n):
        lin = [bin(x & S).count("1") & 1 for x in range(1 << n)]
        best = min(best, sum(a != b for a, b in zip(f.values.tolist(), lin)))
    return Fraction(best, 1 << n)


def brute_degree(f, d):
    """Minimum distance to every polynomial of degree <= d, one codeword at a time."""
    n = f.n
    monos = [m for m in range(1 << n) if bin(m).count("1") <= d]
    best = 1 << n
    for coeffs in range(1 << len(monos)):
        word = [0] * (1 << n)
        for j, m in enumerate(monos):
            if (coeffs >> j) & 1:
                for x in range(1 << n):
                    if x & m == m:
                        word[x] ^= 1
        best = min(best, sum(a != b for a, b in zip(f.values.tolist(), word)))
    return Fraction(best, 1 << n)


tables = st.integers(1, 8).flatmap(
    lambda n: st.lists(st.integers(0, 1), min_size=1 << n, max_size=1 << n).map(
        lambda v: BooleanFunctionTable(len(v).bit_length() - 1, v)))


class TestTable:
    def test_hex_round_trip(self):
        f = table(3, lambda x: (x * 5) % 3 == 1)
        assert BooleanFunctionTable.from_hex(f.to_hex()) == f
        assert f.to_hex().startswith("n=3:")

    def test_hex_most_significant_index_first(self):
        # only index 7 set -> top bit of the payload
        assert table(3, lambda x: x == 7).to_hex() == "n=3:80"

    def test_rejects_bad_shapes(self):
        with pytest.raises(ValueError):
            BooleanFunctionTable(2, [0, 1, 0])
        with pytest.raises(ValueError):
            BooleanFunctionTable(0, [0])
        with pytest.raises(ValueError):
            BooleanFunctionTable.from_hex("3:ff")

    def test_values_read_only(self):
        f = BooleanFunctionTable(2, [0, 1, 1, 0])
        with pytest.raises(ValueError):
            f.values[0] = 1

    @given(tables)
    def test_int_round_trip(self, f):
        assert BooleanFunctionTable.from_int(f.n, f.to_int()) == f


class TestSpectrum:
    def test_constant_zero(self):
        s = wht(BooleanFunctionTable(2, [0, 0, 0, 0]))
        assert [s.exact(S) for S in range(4)] == [1, 0, 0, 0]

    def test_character(self):
        s = wht(table(2, lambda x: x1(x) ^ x2(x)))
        assert [s.exact(S) for S in range(4)] == [0, 0, 0, 1]

    def test_and(self):
        s = wht(table(2, lambda x: x1(x) & x2(x)))
        assert [s.exact(S) for S in range(4)] == [Fraction(1, 2)] * 3 + [Fraction(-1, 2)]

    @settings(max_examples=200)
    @given(tables)
    def test_self_inverse(self, f):
        assert np.array_equal(inverse_wht(wht(f)), f.pm())

    @settings(max_examples=300)
    @given(tables)
    def test_parseval(self, f):
        assert abs(float(np.sum(wht(f).coefficients ** 2)) - 1.0) < 1e-9


class TestLinearityDistance:
    def test_examples(self):
        assert distance_to_linearity(table(2, lambda x: x1(x) ^ x2(x))) == 0
        assert distance_to_linearity(BooleanFunctionTable(1, [1, 1])) == Fraction(1, 2)
        assert distance_to_linearity(table(2, lambda x: x1(x) & x2(x))) == Fraction(1, 4)

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_exhaustive_small(self, n):
        for v in range(1 << (1 << n)):
            f = BooleanFunctionTable.from_int(n, v)
            assert distance_to_linearity(f) == brute_linearity(f)

    @settings(max_examples=60, deadline=None)
    @given(tables)
    def test_matches_brute_force(self, f):
        assert distance_to_linearity(f) == brute_linearity(f)

    @given(tables)
    def test_affine_at_most_linear(self, f):
        assert distance_to_affine(f) <= distance_to_linearity(f) <= Fraction(1, 2)


class TestDegree:
    def test_anf_degree_examples(self):
        assert anf_degree(table(2, lambda x: x1(x) ^ x2(x))) == 1
        assert anf_degree(table(2, lambda x: x1(x) & x2(x))) == 2
        assert anf_degree(BooleanFunctionTable(3, [0] * 8)) == 0

    def test_distance_examples(self):
        f = table(2, lambda x: x1(x) & x2(x))
        assert distance_to_degree_d(f, 2) == 0
        assert distance_to_degree_d(f, 1) == Fraction(1, 4)

    def test_cubic_monomial_baseline(self):
        # frozen from the exhaustive RM(2,3) oracle below
        f = table(3, lambda x: int(x == 7))
        assert brute_degree(f, 2) == Fraction(1, 8)
        assert distance_to_degree_d(f, 2) == Fraction(1, 8)

    def test_dimension_guard(self):
        f = BooleanFunctionTable(10, np.zeros(1024, dtype=np.uint8))
        with pytest.raises(DimensionTooLarge):
            distance_to_degree_d(f, 3)

    @pytest.mark.parametrize("d", [0, 1, 2, 3])
    def test_membership_iff_zero_distance_n3(self, d):
        for v in range(256):
            f = BooleanFunctionTable.from_int(3, v)
            assert (anf_degree(f) <= d) == (distance_to_degree_d(f, d) == 0)

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 2 ** 16 - 1), st.integers(0, 2))
    def test_matches_brute_force_n4(self, v, d):
        f = BooleanFunctionTable.from_int(4, v)
        assert distance_to_degree_d(f, d) == brute_degree(f, d)

    @settings(max_examples=50, deadline=None)
    @given(st.integers(2, 6).flatmap(lambda n: st.tuples(
        st.just(n), st.integers(0, 2 ** (1 << n) - 1), st.integers(1, 2))))
    def test_membership_iff_zero_distance_random(self, case):
        n, v, d = case
        if rm_dimension(n, d) > 24:
            return
        f = BooleanFunctionTable.from_int(n, v)
        assert (anf_degree(f) <= d) == (distance_to_degree_d(f, d) == 0)

    @given(tables)
    def test_anf_round_trip(self, f):
        assert from_anf(f.n, anf(f)) == f

    def test_routes_agree(self):
        rng = np.random.default_rng(4)
        for _ in range(20):
            f = BooleanFunctionTable(5, rng.integers(0, 2, 32))
            for d in (0, 1):
                assert distance_to_degree_d(f, d, route="gray") == distance_to_degree_d(f, d)


class TestExt:
    def test_definition(self):
        # x = (1, 0): coordinates for the empty set, {1}, {2}, {1,2}
        assert ext(0b01, 2, 2).coords == (1, 1, 0, 0)
        assert ext(0, 4, 2).coords == (1,) + (0,) * 10

    def test_canonical_order(self):
        ms = monomials(4, 2)
        assert ms[0] == 0
        assert [bin(m).count("1") for m in ms] == sorted(bin(m).count("1") for m in ms)
        assert len(ms) == rm_dimension(4, 2) == 11

    def test_projection_inverse(self):
        for x in range(8):
            assert project(ext(x, 3, 2)) == x

    def test_table_agrees_with_pointwise(self):
        n, d = 5, 3
        tab = ext_table(n, d)
        ms = monomials(n, d)
        for x in range(1 << n):
            v = sum(int(w) << (64 * k) for k, w in enumerate(tab[x]))
            assert v == ext_bits(x, ms)


class TestLinearAlgebra:
    def test_rank_examples(self):
        assert f2_rank([0b01, 0b10]) == 2
        assert f2_rank([0b11, 0b11]) == 1
        assert sorted(span_enumerate(f2_span_basis([0b01, 0b10]))) == [0, 1, 2, 3]

    def test_span_cap(self):
        basis = [1 << i for i in range(5)]
        with pytest.raises(SpanTooLarge):
            span_enumerate(basis, cap_bits=4)

    @given(st.lists(st.integers(0, 2 ** 12 - 1), max_size=10))
    def test_span_enumeration_exact(self, vecs):
        basis = f2_span_basis(vecs)
        span = span_enumerate(basis)
        assert len(span) == len(set(span)) == 1 << len(basis)
        for v in vecs:
            assert in_span(v, basis) and v in set(span)

    @given(st.lists(st.integers(1, 2 ** 10 - 1), min_size=1, max_size=8))
    def test_rank_matches_subset_sums(self, vecs):
        sums = set()
        for r in range(len(vecs) + 1):
            for c in combinations(vecs, r):
                acc = 0
                for v in c:
                    acc ^= v
                sums.add(acc)
        assert len(sums) == 1 << f2_rank(vecs)

    def test_basis_reduced(self):
        basis = f2_span_basis([0b1110, 0b0111, 0b1001, 0b0011])
        pivots = [b.bit_length() - 1 for b in basis]
        assert pivots == sorted(pivots, reverse=True)
        for b in basis:
            for p in pivots:
                if p != b.bit_length() - 1:
                    assert not (b >> p) & 1
