"""Testers for 2-local properties of sequences f: [n] -> R (positions are 1-based):
the pair tester, the shifted hierarchical tester with its witness-interval
machinery, exact distance oracles, and the fixed-rate scheduling wrapper."""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from numbers import Real
from typing import Callable, Sequence

import numpy as np

from . import kernels
from .boolean_testers import RegimeWarning, Verdict, _finish
from .oracle import FIXED_RATE, AdversarialOracle, allotment, as_rational


class RealSequence:
    """A finite sequence of comparable reals, exposed to oracles on positions 1..n."""

    __slots__ = ("n", "values", "_arr")

    def __init__(self, values: Sequence):
        vals = list(values)
        if len(vals) < 2:
            raise ValueError("sequence needs at least two entries")
        for v in vals:
            if not isinstance(v, Real) or v != v or v in (math.inf, -math.inf):
                raise ValueError(f"not a finite real: {v!r}")
        self.values = vals
        self.n = len(vals)
        self._arr = None

    def at(self, i: int):
        return self.values[i - 1]

    def oracle_domain(self) -> tuple:
        return "sequence", 1, self.n

    def oracle_values(self) -> list:
        return self.values

    def float_array(self) -> np.ndarray | None:
        """Values as float64 when that conversion is exact, else None."""
        if self._arr is None:
            if all(isinstance(v, (int, np.integer)) and abs(v) < 2 ** 53 for v in self.values) \
                    or all(isinstance(v, float) for v in self.values):
                self._arr = np.array(self.values, dtype=np.float64)
            else:
                self._arr = False
        return self._arr if self._arr is not False else None

    @classmethod
    def from_text(cls, text: str) -> "RealSequence":
        """JSON array, one comma-separated line such as ``(3,1,2)``, or CSV with
        the value in the first column of each line."""
        text = text.strip()
        lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
        if text.startswith("["):
            raw = json.loads(text)
        elif len(lines) == 1:
            raw = [v.strip() for v in lines[0].strip("()").split(",") if v.strip()]
        else:
            raw = [ln.split(",")[0].strip() for ln in lines]
        return cls([_parse_real(v) for v in raw])

    def __len__(self) -> int:
        return self.n

    def __eq__(self, other) -> bool:
        return isinstance(other, RealSequence) and self.values == other.values

    def __repr__(self) -> str:
        head = ", ".join(map(str, self.values[:8]))
        return f"RealSequence([{head}{', ...' if self.n > 8 else ''}])"


def _parse_real(v):
    if isinstance(v, (int, float)):
        return v
    s = str(v)
    if "/" in s:
        return Fraction(s)
    try:
        return int(s)
    except ValueError:
        return float(s)


# ---- local properties --------------------------------------------------------------------

@dataclass(frozen=True)
class LocalPropertySpec:
    """A 2-local property: a forbidden predicate on consecutive values plus
    fillability predicates for gaps, prefixes and suffixes."""

    name: str
    forbidden: Callable
    gap_fillable: Callable
    prefix_fillable: Callable = lambda p, vp: True
    suffix_fillable: Callable = lambda q, vq: True
    exact_distance: Callable | None = None
    gap_fillable_array: Callable | None = None

    def gap_array(self, p, q, vp, vq) -> np.ndarray:
        if self.gap_fillable_array is not None:
            return self.gap_fillable_array(p, q, vp, vq)
        return np.array([bool(self.gap_fillable(int(a), int(b), x, y))
                         for a, b, x, y in zip(p, q, vp, vq)], dtype=bool)

    def holds(self, f: RealSequence) -> bool:
        v = f.values
        return not any(self.forbidden(v[i], v[i + 1]) for i in range(f.n - 1))


def distance_to_sortedness(f: RealSequence) -> Fraction:
    """(n - longest non-decreasing subsequence) / n."""
    arr = f.float_array()
    if arr is not None:
        keep = kernels.lnds_length(arr)
    else:
        keep = _fallback_lnds(f.values)
    return Fraction(f.n - keep, f.n)


def _fallback_lnds(values) -> int:
    from bisect import bisect_right
    tails: list = []
    for x in values:
        i = bisect_right(tails, x)
        if i == len(tails):
            tails.append(x)
        else:
            tails[i] = x
    return len(tails)


def distance_to_lipschitz(f: RealSequence) -> Fraction:
    """(n - largest keepable set) / n, where consecutive kept positions i < j need
    |f(j) - f(i)| <= j - i; O(n^2)."""
    arr = f.float_array()
    if arr is not None:
        keep = kernels.lipschitz_keep(arr)
    else:
        v = f.values
        best = [1] * f.n
        for j in range(f.n):
            for i in range(j):
                if abs(v[j] - v[i]) <= j - i and best[i] + 1 > best[j]:
                    best[j] = best[i] + 1
        keep = max(best)
    return Fraction(f.n - keep, f.n)


SORTEDNESS = LocalPropertySpec(
    name="sortedness",
    forbidden=lambda a, b: a > b,
    gap_fillable=lambda p, q, vp, vq: vp <= vq,
    exact_distance=distance_to_sortedness,
    gap_fillable_array=lambda p, q, vp, vq: vp <= vq,
)

LIPSCHITZ = LocalPropertySpec(
    name="lipschitz",
    forbidden=lambda a, b: abs(b - a) > 1,
    gap_fillable=lambda p, q, vp, vq: abs(vq - vp) <= q - p,
    exact_distance=distance_to_lipschitz,
    gap_fillable_array=lambda p, q, vp, vq: np.abs(vq - vp) <= (q - p),
)

PROPERTIES = {"sortedness": SORTEDNESS, "lipschitz": LIPSCHITZ}


def unrepairable_values(P: LocalPropertySpec, p: int, q: int, vp, vq) -> bool:
    """Whether no completion of {p: vp, q: vq} (p < q) satisfies P."""
    return not (P.prefix_fillable(p, vp) and P.gap_fillable(p, q, vp, vq)
                and P.suffix_fillable(q, vq))


def pair_unrepairable(P: LocalPropertySpec, f: RealSequence, x: int, y: int) -> bool:
    if x == y:
        raise ValueError("positions must differ")
    if not (1 <= x <= f.n and 1 <= y <= f.n):
        raise ValueError("position out of range")
    p, q = min(x, y), max(x, y)
    return unrepairable_values(P, p, q, f.at(p), f.at(q))


def _check_pair(P, x, ax, y, ay) -> bool:
    if ax is None or ay is None:
        return False
    if x < y:
        return unrepairable_values(P, x, y, ax, ay)
    return unrepairable_values(P, y, x, ay, ax)


# ---- pair tester ---------------------------------------------------------------------------

def floor_log2(q) -> int:
    """floor(log2 q) for a positive rational q."""
    q = Fraction(q)
    if q <= 0:
        raise ValueError("log of non-positive number")
    k = q.numerator.bit_length() - q.denominator.bit_length()
    if Fraction(2) ** k > q:
        k -= 1
    elif Fraction(2) ** (k + 1) <= q:
        k += 1
    return k


def pair_layers(eps, n: int) -> int:
    """l = floor(log(eps n / 4))."""
    en = Fraction(eps) * n
    if en < 4:
        raise ValueError("eps*n must be at least 4")
    return floor_log2(en / 4)


def pair_tester_iterations(eps, n: int) -> int:
    eps = Fraction(eps)
    return math.ceil(200 * math.log2(float(eps * n)) / float(eps) - 1e-9)


def cyclic_pairs(n: int, gap: int) -> list[tuple[int, int]]:
    """D_gap(n): the n ordered pairs (x, y) with y - x = gap mod n, positions 1..n."""
    return [(x, (x - 1 + gap) % n + 1) for x in range(1, n + 1)]


def sample_pair(n: int, ell: int, rng: np.random.Generator) -> tuple[int, tuple[int, int]]:
    if ell < 0:
        raise ValueError("l must be non-negative")
    i = int(rng.integers(0, ell + 1))
    x = int(rng.integers(1, n + 1))
    return i, (x, (x - 1 + (1 << i)) % n + 1)


def pair_tester(oracle, P: LocalPropertySpec, eps, rng: np.random.Generator,
                iterations: int | None = None) -> Verdict:
    """Sample a gap 2^i and a cyclic pair at that gap; reject when both answers
    are present and no completion satisfies P. Queries go out as one batch of
    two when the oracle allows it, else one at a time."""
    n = oracle.n
    if Fraction(eps) * n < 8:
        raise ValueError("pair tester needs eps*n >= 8")
    ell = pair_layers(eps, n)
    r = iterations if iterations is not None else pair_tester_iterations(eps, n)
    pairwise = oracle.config.b >= 2
    bq, q = oracle.batch_query, oracle.query
    gaps = [1 << i for i in range(ell + 1)]
    for it in range(r):
        i, x = rng.integers(0, ell + 1), rng.integers(1, n + 1)
        x = int(x)
        y = (x - 1 + gaps[int(i)]) % n + 1
        if pairwise:
            ax, ay = bq((x, y))
        else:
            ax = q(x)
            ay = q(y)
        if _check_pair(P, x, ax, y, ay):
            return _finish(oracle, [(x, ax), (y, ay)], it + 1)
    return _finish(oracle, None, r)


# ---- shifted hierarchical partition ------------------------------------------------------

@dataclass(frozen=True)
class ShiftedPartition:
    a: int
    w: int
    ell: int
    n: int

    def __post_init__(self):
        if self.ell < 0 or self.w <= 0 or self.w % (1 << self.ell):
            raise ValueError("w must be a positive multiple of 2^l")
        if self.a < 1 or self.a + self.w > self.n:
            raise ValueError("need 1 <= a and a + w <= n")
        if self.w >> self.ell < 2:
            raise ValueError("w must be at least 2 * 2^l")

    def count(self, i: int) -> int:
        """|T_i| = w / 2^i."""
        return self.w >> i

    def interval(self, i: int, j: int) -> tuple[int, int]:
        """Interval j of layer i: j = 0 is left-extremal, j = count-1 right-extremal."""
        K = self.w >> i
        step = 1 << i
        if j == 0:
            return 1, self.a + step
        if j == K - 1:
            return self.a + self.w - step, self.n
        return self.a + j * step, self.a + (j + 1) * step

    def layer(self, i: int) -> list[tuple[int, int]]:
        return [self.interval(i, j) for j in range(self.count(i))]

    @property
    def layers(self) -> list[list[tuple[int, int]]]:
        return [self.layer(i) for i in range(self.ell + 1)]

    def query_pair_index(self, i: int, j: int) -> tuple[int, int]:
        K = self.w >> i
        step = 1 << i
        if j == 0:
            return self.a, self.a + step
        if j == K - 1:
            return self.a + self.w - step, self.a + self.w
        return self.a + j * step, self.a + (j + 1) * step


def shifted_partition(a: int, w: int, ell: int, n: int) -> ShiftedPartition:
    return ShiftedPartition(a, w, ell, n)


def query_pair(T: ShiftedPartition, i: int, I: tuple[int, int]) -> tuple[int, int]:
    x, y = I
    step = 1 << i
    if x == 1:
        if y != T.a + step:
            raise ValueError("not an interval of this layer")
        return T.a, T.a + step
    if y == T.n:
        if x != T.a + T.w - step:
            raise ValueError("not an interval of this layer")
        return T.a + T.w - step, T.a + T.w
    if y - x != step or (x - T.a) % step:
        raise ValueError("not an interval of this layer")
    return x, y


def hierarchical_params(eps, n: int) -> tuple[int, int, int, int]:
    """(l, shift range A, width w, iterations) for the hierarchical tester."""
    eps = Fraction(eps)
    if n < 16 / eps:
        raise ValueError("hierarchical tester needs n >= 16/eps")
    ell = floor_log2(eps * n / 4)
    A = math.ceil(eps * n / 4)
    w = math.floor((n - eps * n / 4) / (1 << ell)) * (1 << ell)
    iters = math.ceil(20 * math.log2(float(eps * n)) / float(eps) - 1e-9)
    return ell, A, w, iters


def hierarchical_tester(f, P: LocalPropertySpec, eps, rng: np.random.Generator,
                        iterations: int | None = None) -> Verdict:
    """Offline tester on a random shifted hierarchical partition; f is a
    RealSequence or an adversary-free oracle over one."""
    oracle = f if hasattr(f, "batch_query") else AdversarialOracle(f)
    n = oracle.n
    ell, A, w0, iters = hierarchical_params(eps, n)
    r = iterations if iterations is not None else iters
    q = oracle.query
    for it in range(r):
        a = int(rng.integers(1, A + 1))
        w = w0 if a + w0 <= n else w0 - (1 << ell)
        T = ShiftedPartition(a, w, ell, n)
        i = int(rng.integers(0, ell + 1))
        j = int(rng.integers(0, w >> i))
        x, y = T.query_pair_index(i, j)
        ax = q(x)
        ay = q(y)
        if _check_pair(P, x, ax, y, ay):
            return _finish(oracle, [(x, ax), (y, ay)], it + 1)
    return _finish(oracle, None, r)


# ---- witness intervals ---------------------------------------------------------------------

def is_witness(P: LocalPropertySpec, f: RealSequence, I: tuple[int, int]) -> bool:
    """Whether every completion of f's values at the endpoints of I (given the
    sequence boundary on extremal sides) contains a forbidden pair."""
    x, y = I
    if x == 1 and y == f.n:
        return False
    if x == 1:
        return not P.prefix_fillable(y, f.at(y))
    if y == f.n:
        return not P.suffix_fillable(x, f.at(x))
    return not P.gap_fillable(x, y, f.at(x), f.at(y))


def _witness_flags(f: RealSequence, P: LocalPropertySpec, T: ShiftedPartition,
                   vals: np.ndarray | None) -> list[np.ndarray]:
    flags = []
    for i in range(T.ell + 1):
        K = T.count(i)
        step = 1 << i
        wit = np.zeros(K, dtype=bool)
        if K > 2:
            x = T.a + np.arange(1, K - 1) * step
            y = x + step
            if vals is not None:
                wit[1:K - 1] = ~P.gap_array(x, y, vals[x - 1], vals[y - 1])
            else:
                wit[1:K - 1] = [not P.gap_fillable(int(p), int(q), f.at(int(p)), f.at(int(q)))
                                for p, q in zip(x, y)]
        wit[0] = is_witness(P, f, T.interval(i, 0))
        wit[K - 1] = is_witness(P, f, T.interval(i, K - 1))
        flags.append(wit)
    return flags


def maximal_witness_flags(f: RealSequence, P: LocalPropertySpec,
                          T: ShiftedPartition) -> list[np.ndarray]:
    """Per layer, which intervals are witnesses with no witness ancestor."""
    flags = _witness_flags(f, P, T, f.float_array())
    out = [None] * (T.ell + 1)
    covered = np.zeros(T.count(T.ell), dtype=bool)  # has a witness ancestor
    for i in range(T.ell, -1, -1):
        if i < T.ell:
            parent = np.arange(T.count(i)) >> 1
            above = flags[i + 1] | covered
            covered = above[parent]
        out[i] = flags[i] & ~covered
    return out


def enumerate_maximal_witnesses(f: RealSequence, P: LocalPropertySpec,
                                T: ShiftedPartition) -> set[tuple[int, int]]:
    out = set()
    for i, mask in enumerate(maximal_witness_flags(f, P, T)):
        for j in np.flatnonzero(mask).tolist():
            out.add(T.interval(i, j))
    return out


def witness_mass(f: RealSequence, P: LocalPropertySpec, T: ShiftedPartition) -> float:
    """sum_i |T_i cap U| / |T_i| over the maximal witnesses U."""
    return sum(float(mask.sum()) / mask.shape[0]
               for mask in maximal_witness_flags(f, P, T))


# ---- fixed-rate wrapper ----------------------------------------------------------------------

def quiet_slots(t, count: int, start: int = 1) -> list[int]:
    """The first `count` batch indices i >= start with allotment(i, t) = 0."""
    t = as_rational(t)
    if t >= 1:
        raise ValueError("quiet slots exist only for t < 1")
    out = []
    i = start
    while len(out) < count:
        if allotment(i, t) == 0:
            out.append(i)
        i += 1
    return out


def fixed_rate_pair_tester(oracle, P: LocalPropertySpec, eps, t, rng: np.random.Generator,
                           iterations: int | None = None) -> Verdict:
    """Pair tester for a fixed-rate eraser with t < 1: each pair is queried at
    batches i and i+1 where the window after batch i allows no erasure, so both
    answers come from the same oracle snapshot. Idle slots carry dummy queries."""
    t = as_rational(t)
    if t >= 1:
        raise ValueError("fixed-rate pair tester needs t < 1")
    if oracle.config.scheduling != FIXED_RATE:
        raise ValueError("oracle must be fixed-rate")
    n = oracle.n
    if Fraction(eps) * n < 8:
        raise ValueError("pair tester needs eps*n >= 8")
    eps_f = float(eps)
    bound = (math.log2(1 / eps_f) + math.log2(1 / (1 - float(t)))) ** 2 / (eps_f ** 2 * (1 - float(t)))
    if n < bound:
        warnings.warn(f"n={n} is below the proven range for eps={eps}, t={t}",
                      RegimeWarning, stacklevel=2)
    ell = pair_layers(eps, n)
    r = iterations if iterations is not None else pair_tester_iterations(eps, n)
    q = oracle.query
    for it in range(r):
        i, (x, y) = sample_pair(n, ell, rng)
        while allotment(oracle.clock + 1, t) != 0:
            q(int(rng.integers(1, n + 1)))
        ax = q(x)
        ay = q(y)
        if _check_pair(P, x, ax, y, ay):
            return _finish(oracle, [(x, ax), (y, ay)], it + 1)
    return _finish(oracle, None, r)


SEQ_TESTERS = {
    "pair_tester": pair_tester,
    "hierarchical": hierarchical_tester,
    "fixed_rate_pair": fixed_rate_pair_tester,
}


__all__ = [
    "RealSequence",
    "LocalPropertySpec",
    "SORTEDNESS",
    "LIPSCHITZ",
    "PROPERTIES",
    "distance_to_sortedness",
    "distance_to_lipschitz",
    "pair_unrepairable",
    "unrepairable_values",
    "floor_log2",
    "pair_layers",
    "pair_tester_iterations",
    "cyclic_pairs",
    "sample_pair",
    "pair_tester",
    "ShiftedPartition",
    "shifted_partition",
    "query_pair",
    "hierarchical_params",
    "hierarchical_tester",
    "is_witness",
    "maximal_witness_flags",
    "enumerate_maximal_witnesses",
    "witness_mass",
    "quiet_slots",
    "fixed_rate_pair_tester",
    "SEQ_TESTERS",
]
