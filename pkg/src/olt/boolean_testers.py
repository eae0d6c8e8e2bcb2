"""Testers over the Boolean cube: BLR_k, the online linearity tester, algebraic
testing patterns (chain of cubes, affine cube), the online degree-d tester and the
large-batch subspace tester."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace
from fractions import Fraction
from itertools import combinations
from typing import Sequence

import numpy as np

from .f2core import BooleanFunctionTable, anf, f2_rank, wht

ACCEPT = "accept"
REJECT = "reject"


class RegimeWarning(UserWarning):
    """Parameters fall outside the range where the tester's guarantee is proven."""


@dataclass(frozen=True)
class Verdict:
    decision: str
    saw_manipulation: bool = False
    rejecting_witness: tuple | None = None
    queries: int = 0
    iterations: int = 0

    @property
    def rejected(self) -> bool:
        return self.decision == REJECT


def _finish(oracle, witness=None, iterations=0) -> Verdict:
    return Verdict(
        REJECT if witness is not None else ACCEPT,
        oracle.manipulation_seen,
        tuple(witness) if witness is not None else None,
        oracle.queries,
        iterations,
    )


def _ceil(x: float) -> int:
    k = round(x)
    return k if abs(x - k) < 1e-9 else math.ceil(x)


def _query_all(oracle, points: Sequence[int]) -> list:
    b = oracle.config.b
    if len(points) <= b:
        return oracle.batch_query(points)
    out = []
    for i in range(0, len(points), b):
        out.extend(oracle.batch_query(points[i:i + b]))
    return out


def choose_subset(rng: np.random.Generator, m: int, k: int) -> list[int]:
    """Uniform size-k subset of range(m) by a partial Fisher-Yates shuffle."""
    idx = list(range(m))
    picks = rng.integers(np.arange(k), m).tolist()
    for i, j in enumerate(picks):
        idx[i], idx[j] = idx[j], idx[i]
    return idx[:k]


def _odd_and_clean(answers) -> bool:
    if None in answers:
        return False
    return sum(answers) & 1 == 1


# ---- BLR_k -----------------------------------------------------------------------------

def blr_k_test(oracle, k: int, rng: np.random.Generator) -> Verdict:
    """Query k uniform points and their XOR; reject on odd parity with no erasure."""
    if k < 2 or k % 2:
        raise ValueError("k must be even and at least 2")
    xs = rng.integers(0, oracle.size, size=k).tolist()
    y = 0
    for x in xs:
        y ^= x
    pts = xs + [y]
    ans = _query_all(oracle, pts)
    if _odd_and_clean(ans):
        return _finish(oracle, list(zip(pts, ans)), 1)
    return _finish(oracle, None, 1)


def exact_blr_k_rejection(f: BooleanFunctionTable, k: int, exact: bool = False):
    """1/2 - 1/2 sum_S f^(S)^(k+1), from the spectrum."""
    if k % 2:
        raise ValueError("k must be even")
    raw = wht(f).raw
    if exact:
        size = 1 << f.n
        total = sum(int(w) ** (k + 1) for w in raw.tolist())
        return Fraction(1, 2) - Fraction(total, 2 * size ** (k + 1))
    c = raw / float(1 << f.n)
    return 0.5 - 0.5 * float(np.sum(c ** (k + 1)))


def blr_k_lower_bound(eps, k: int):
    """(1 - (1 - 2 eps)^(k-1)) / 2, exact for rational eps."""
    return (1 - (1 - 2 * eps) ** (k - 1)) / 2


# ---- online linearity ------------------------------------------------------------------

@dataclass(frozen=True)
class TesterParams:
    m: int
    alpha: Fraction
    r: int
    ell: int | None = None

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("m must be positive")
        if self.r < 1:
            raise ValueError("r must be at least 1")

    def override(self, **kw) -> "TesterParams":
        return replace(self, **kw)


def linearity_params(eps, t) -> TesterParams:
    eps = Fraction(eps)
    if not 0 < eps <= Fraction(1, 2):
        raise ValueError("eps must lie in (0, 1/2]")
    t = max(float(t), 2.0)
    lt = math.log2(t)
    inner = 14 + lt + math.log2(lt * lt) + math.log2(1 / float(eps) ** 2)
    m = 4 * _ceil(inner / 4)
    alpha = min(Fraction(1, 4), m * eps / 4)
    r = math.ceil(Fraction(5) / (4 * alpha))
    return TesterParams(m, alpha, r)


def _linearity_regime(n: int, eps, t) -> None:
    t = max(float(t), 2.0)
    if t * math.log2(t) ** 2 > float(eps) ** 2.5 * 2 ** (n / 2):
        warnings.warn(f"t={t} is beyond the proven range for n={n}, eps={eps}",
                      RegimeWarning, stacklevel=3)


def online_linearity_test(oracle, eps, t, rng: np.random.Generator,
                          params: TesterParams | None = None) -> Verdict:
    """Erasure-resilient linearity tester with single-point batches."""
    p = params or linearity_params(eps, t)
    if p.m % 4:
        raise ValueError("reserve size must be divisible by 4")
    _linearity_regime(oracle.n, eps, t)
    m, k, size = p.m, p.m // 2, oracle.size
    query = oracle.query
    for it in range(p.r):
        xs = rng.integers(0, size, size=m).tolist()
        ans = [query(x) for x in xs]
        S = choose_subset(rng, m, k)
        y = 0
        for j in S:
            y ^= xs[j]
        ay = query(y)
        used = [ans[j] for j in S]
        used.append(ay)
        if _odd_and_clean(used):
            return _finish(oracle, [(xs[j], ans[j]) for j in S] + [(y, ay)], it + 1)
    return _finish(oracle, None, p.r)


# ---- testing patterns ------------------------------------------------------------------

class PatternMatrix:
    """An l x m binary matrix with distinct rows and full column rank.

    Rows are stored as ints; bit j of a row is the entry in column j.
    """

    __slots__ = ("rows", "m")

    def __init__(self, rows: Sequence, m: int | None = None):
        rows = [self._row_int(r) for r in rows]
        if m is None:
            m = max((r.bit_length() for r in rows), default=0)
        if any(r >> m for r in rows):
            raise ValueError("row wider than m columns")
        if len(set(rows)) != len(rows):
            raise ValueError("pattern rows must be distinct")
        if len(rows) < m:
            raise ValueError("pattern needs at least m rows")
        if f2_rank(rows) != m:
            raise ValueError("pattern must have full column rank")
        self.rows = tuple(rows)
        self.m = m

    @staticmethod
    def _row_int(r) -> int:
        if isinstance(r, (int, np.integer)):
            return int(r)
        v = 0
        for j, bit in enumerate(r):
            if bit:
                v |= 1 << j
        return v

    @classmethod
    def from_bits(cls, bits: Sequence[Sequence[int]]) -> "PatternMatrix":
        m = len(bits[0]) if bits else 0
        if any(len(r) != m for r in bits):
            raise ValueError("ragged matrix")
        return cls([cls._row_int(r) for r in bits], m)

    @property
    def ell(self) -> int:
        return len(self.rows)

    def bits(self) -> list[list[int]]:
        return [[(r >> j) & 1 for j in range(self.m)] for r in self.rows]

    def columns(self) -> list[int]:
        """Column j as an int over rows (bit i set iff X[i, j] = 1)."""
        cols = [0] * self.m
        for i, r in enumerate(self.rows):
            for j in range(self.m):
                if (r >> j) & 1:
                    cols[j] |= 1 << i
        return cols

    def __eq__(self, other) -> bool:
        return isinstance(other, PatternMatrix) and (self.rows, self.m) == (other.rows, other.m)

    def __hash__(self) -> int:
        return hash((self.rows, self.m))

    def __repr__(self) -> str:
        return f"PatternMatrix(l={self.ell}, m={self.m})"


def pattern_instance(X: PatternMatrix, M: Sequence[int]) -> list[int]:
    """Rows of XM over F2; M is given as its m rows, each an n-bit int."""
    if len(M) != X.m:
        raise ValueError(f"parameter matrix has {len(M)} rows, pattern needs {X.m}")
    out = []
    for r in X.rows:
        p = 0
        j = 0
        while r:
            if r & 1:
                p ^= M[j]
            r >>= 1
            j += 1
        out.append(p)
    return out


def pattern_phi(X: PatternMatrix, S) -> int:
    """sum_i prod_{j in S} X_ij over F2; S is an iterable of column indices."""
    acc = (1 << X.ell) - 1
    cols = X.columns()
    for j in S:
        acc &= cols[j]
    return acc.bit_count() & 1


def _phi_scan(X: PatternMatrix, max_size: int):
    """Yield (S, phi_S) for every column subset of size <= max_size."""
    cols = X.columns()
    full = (1 << X.ell) - 1

    def walk(start, acc, chosen):
        yield tuple(chosen), acc.bit_count() & 1
        if len(chosen) == max_size:
            return
        for j in range(start, X.m):
            chosen.append(j)
            yield from walk(j + 1, acc & cols[j], chosen)
            chosen.pop()

    yield from walk(0, full, [])


def goodness_report(X: PatternMatrix, d: int) -> dict:
    """Conditions of the phi_S characterization: completeness (phi_S = 0 for |S| <= d)
    and minimal soundness (phi_S = 1 for some |S| = d+1)."""
    violation = None
    witness = None
    for S, phi in _phi_scan(X, min(d + 1, X.m)):
        if len(S) <= d and phi and violation is None:
            violation = S
        if len(S) == d + 1 and phi and witness is None:
            witness = S
    return {"complete": violation is None, "violating_subset": violation,
            "sound": witness is not None, "witness_subset": witness,
            "good": violation is None and witness is not None}


def is_good_pattern(X: PatternMatrix, d: int) -> bool:
    return goodness_report(X, d)["good"]


def chain_of_cubes(d: int, s: int) -> PatternMatrix:
    """chi_{d,s}: cube columns 0..d-1, chain columns d..d+s-1, (s+1) 2^d rows.

    Row (i, j) carries j on the cube columns; its chain part is the indicator of
    chain column i for i < s and all ones for i = s. For s = 1 the last two chain
    rows coincide, so construction fails on the distinct-rows requirement.
    """
    if d < 0:
        raise ValueError("d must be non-negative")
    if s < 1 or s % 2 == 0:
        raise ValueError("s must be a positive odd integer")
    rows = []
    all_chain = ((1 << s) - 1) << d
    for i in range(s + 1):
        chain = (1 << (d + i)) if i < s else all_chain
        for j in range(1 << d):
            rows.append(j | chain)
    return PatternMatrix(rows, d + s)


def affine_cube(d: int) -> PatternMatrix:
    """All (d+2)-bit rows whose last bit is 1: the affine (d+1)-cube, good for P_d."""
    top = 1 << (d + 1)
    return PatternMatrix([j | top for j in range(top)], d + 2)


def blr_square() -> PatternMatrix:
    """Rows 10, 01, 11: the three points x, y, x+y."""
    return PatternMatrix([0b01, 0b10, 0b11], 2)


def x_tester(X: PatternMatrix, oracle, rng: np.random.Generator) -> Verdict:
    """One pattern instance with a uniform parameter matrix; reject iff T = 1 with no erasure."""
    if oracle.n < X.m:
        raise ValueError("pattern needs n >= m")
    M = rng.integers(0, oracle.size, size=X.m).tolist()
    pts = pattern_instance(X, M)
    ans = _query_all(oracle, pts)
    if _odd_and_clean(ans):
        return _finish(oracle, list(zip(pts, ans)), 1)
    return _finish(oracle, None, 1)


def instance_masks(X: PatternMatrix, n: int) -> np.ndarray:
    """For every parameter matrix M (index enumerates its m rows of n bits), the
    parity mask over {0,1}^n of the instance points, packed into uint64 words.
    Requires m*n <= 24."""
    if X.m * n > 24:
        raise ValueError("instance enumeration too large")
    count = 1 << (X.m * n)
    idx = np.arange(count, dtype=np.int64)
    low = (1 << n) - 1
    Mrows = [(idx >> (k * n)) & low for k in range(X.m)]
    words = max(1, (1 << n) // 64)
    masks = np.zeros((count, words), dtype=np.uint64)
    for r in X.rows:
        p = np.zeros(count, dtype=np.int64)
        for j in range(X.m):
            if (r >> j) & 1:
                p ^= Mrows[j]
        w = p // 64
        bit = (p % 64).astype(np.uint64)
        one = np.left_shift(np.uint64(1), bit)
        for k in range(words):
            sel = w == k
            masks[sel, k] ^= one[sel]
    return masks


def exact_rejection_probability(X: PatternMatrix, f: BooleanFunctionTable,
                                masks: np.ndarray | None = None) -> Fraction:
    """Pr_M[T_{X,f}(M) = 1] by enumerating every parameter matrix."""
    if masks is None:
        masks = instance_masks(X, f.n)
    fw = f.words()
    par = np.bitwise_count(masks & fw).sum(axis=1) & 1
    return Fraction(int(par.sum()), masks.shape[0])


def violating_parameters(X: PatternMatrix, f: BooleanFunctionTable, d: int) -> list[int]:
    """Explicit M with T_{X,f}(M) = 1 for f outside P_d, X good for P_d.

    Pick S* with |S*| = d+1 and phi_{S*} = 1, and a minimum-size monomial J* of
    f above degree d. Map the first d+1 variables of J* to distinct columns of S*
    and the remaining ones to the last column of S*.
    """
    rep = goodness_report(X, d)
    if not rep["good"]:
        raise ValueError("pattern is not good for P_d")
    coeffs = np.flatnonzero(anf(f))
    high = [int(J) for J in coeffs if int(J).bit_count() > d]
    if not high:
        raise ValueError("f has degree <= d")
    J = min(high, key=lambda v: (v.bit_count(), v))
    S = rep["witness_subset"]
    M = [0] * X.m
    var = [i for i in range(f.n) if (J >> i) & 1]
    for pos, i in enumerate(var):
        col = S[pos] if pos <= d else S[d]
        M[col] |= 1 << i
    return M


# ---- online degree-d -------------------------------------------------------------------

def degree_params(eps, d: int, t) -> TesterParams:
    if d < 1:
        raise ValueError("d must be at least 1")
    eps = Fraction(eps)
    if not 0 < eps <= 1:
        raise ValueError("eps must lie in (0, 1]")
    t = max(float(t), 2.0)
    lt = math.log2(t)
    inner = 20 + d + lt / 4 + 1.5 * math.log2(d * lt) - 0.5 * math.log2(float(eps))
    m = 2 * _ceil(inner) + 1
    ell = (m + 1) * 2 ** (d - 1)
    alpha = min(eps * ell / 2, Fraction(1, 2 * ell * ell))
    r = math.ceil(2 / alpha)
    return TesterParams(m, alpha, r, ell)


def _degree_regime(n: int, eps, d: int, t) -> None:
    t = max(float(t), 2.0)
    if t * math.log2(t) ** 7 > float(eps) ** 2.5 * d ** -7 * 2 ** ((n - 11 * d) / 2):
        warnings.warn(f"t={t} is beyond the proven range for n={n}, d={d}",
                      RegimeWarning, stacklevel=3)


def coset_offsets(V: Sequence[int]) -> list[int]:
    """XOR of every subset of V, indexed by subset mask."""
    offs = [0]
    for v in V:
        offs += [o ^ v for o in offs]
    return offs


def online_degree_test(oracle, eps, d: int, t, rng: np.random.Generator,
                       params: TesterParams | None = None) -> Verdict:
    """Erasure-resilient degree-d tester with batches of 2^(d-1) points.

    Each iteration batch-queries the cosets x_i + span(V) of 2m reserve points,
    then the coset of y = XOR of a random m of them, and evaluates the chain of
    cubes chi_{d-1,m} on the chosen cosets.
    """
    if d < 1:
        raise ValueError("d must be at least 1")
    p = params or degree_params(eps, d, t)
    if p.m % 2 == 0:
        raise ValueError("chain length m must be odd")
    if oracle.config.b < 1 << (d - 1):
        raise ValueError(f"degree-{d} tester needs batch size {1 << (d - 1)}")
    _degree_regime(oracle.n, eps, d, t)
    m, size = p.m, oracle.size
    bq = oracle.batch_query
    for it in range(p.r):
        V = rng.integers(0, size, size=d - 1).tolist()
        offs = coset_offsets(V)
        xs = rng.integers(0, size, size=2 * m).tolist()
        cosets = []
        answers = []
        for x in xs:
            pts = [x ^ o for o in offs]
            cosets.append(pts)
            answers.append(bq(pts))
        S = choose_subset(rng, 2 * m, m)
        y = 0
        for j in S:
            y ^= xs[j]
        ypts = [y ^ o for o in offs]
        yans = bq(ypts)
        used = []
        for j in S:
            used.extend(answers[j])
        used.extend(yans)
        if _odd_and_clean(used):
            wit = []
            for j in S:
                wit.extend(zip(cosets[j], answers[j]))
            wit.extend(zip(ypts, yans))
            return _finish(oracle, wit, it + 1)
    return _finish(oracle, None, p.r)


# ---- large-batch subspace tester -------------------------------------------------------

def batch_subspace_params(eps, d: int, zeta=Fraction(1, 10)) -> tuple[Fraction, int]:
    eps = Fraction(eps)
    zeta = Fraction(zeta)
    if not 0 < zeta < 1:
        raise ValueError("zeta must lie in (0, 1)")
    s = min(2 ** (d + 1) * eps, zeta)
    return s, math.ceil(10 / s)


def random_independent(rng: np.random.Generator, size: int, k: int) -> list[int]:
    """k uniformly random linearly independent points of {0,1}^n (rejection sampling)."""
    while True:
        V = rng.integers(1, size, size=k).tolist()
        if f2_rank(V) == k:
            return V


def batch_subspace_degree_test(oracle, eps, d: int, t, zeta, rng: np.random.Generator,
                               iterations: int | None = None) -> Verdict:
    """Each iteration batch-queries a uniform affine (d+1)-flat and rejects iff the
    XOR of its values is 1 with no erasure. Linearly dependent direction samples
    are redrawn so the flat is uniform over (d+1)-dimensional ones."""
    if oracle.n < d + 1:
        raise ValueError("need n >= d+1")
    if oracle.config.b < 1 << (d + 1):
        raise ValueError(f"subspace tester needs batch size {1 << (d + 1)}")
    _, r = batch_subspace_params(eps, d, zeta)
    if iterations is not None:
        r = iterations
    size = oracle.size
    for it in range(r):
        V = random_independent(rng, size, d + 1)
        a = int(rng.integers(0, size))
        pts = [a ^ o for o in coset_offsets(V)]
        ans = oracle.batch_query(pts)
        if _odd_and_clean(ans):
            return _finish(oracle, list(zip(pts, ans)), it + 1)
    return _finish(oracle, None, r)


TESTERS = {
    "blr_k": blr_k_test,
    "online_linearity": online_linearity_test,
    "x_tester": x_tester,
    "online_degree": online_degree_test,
    "batch_subspace": batch_subspace_degree_test,
}


__all__ = [
    "ACCEPT",
    "REJECT",
    "Verdict",
    "TesterParams",
    "RegimeWarning",
    "blr_k_test",
    "exact_blr_k_rejection",
    "blr_k_lower_bound",
    "linearity_params",
    "online_linearity_test",
    "PatternMatrix",
    "pattern_instance",
    "pattern_phi",
    "goodness_report",
    "is_good_pattern",
    "chain_of_cubes",
    "affine_cube",
    "blr_square",
    "x_tester",
    "instance_masks",
    "exact_rejection_probability",
    "violating_parameters",
    "degree_params",
    "online_degree_test",
    "coset_offsets",
    "batch_subspace_params",
    "batch_subspace_degree_test",
    "choose_subset",
    "TESTERS",
]
