"""Adversary strategies for the online oracle, the paired sortedness instances
they are built around, and the indistinguishability experiments."""

from __future__ import annotations

import logging
import math
import warnings
from bisect import insort
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from . import kernels
from .f2core import (
    BooleanFunctionTable,
    SpanTooLarge,
    ext_bits,
    ext_table,
    int_to_words,
    monomials,
    rm_dimension,
    span_enumerate,
)
from .oracle import (
    BUDGET_MANAGING,
    CORRUPTION,
    ERASURE,
    AdversarialOracle,
    OracleConfig,
    corrupt,
    erase,
)
from .seq_testers import RealSequence

log = logging.getLogger(__name__)


class Adversary:
    """Base strategy: sees queries and answers, returns manipulation requests
    after each batch. Subclasses override ``after_batch``."""

    name = "base"
    kinds: tuple = (ERASURE,)
    domains: tuple = ("boolean", "sequence")
    input_aware = False

    def __init__(self, rng: np.random.Generator | None = None):
        self.rng = rng if rng is not None else np.random.default_rng(0)
        self.view = None

    def bind(self, view) -> None:
        if view.domain_kind not in self.domains:
            raise ValueError(f"{self.name} does not act on {view.domain_kind} inputs")
        self.view = view

    def before_game(self, budget: int) -> list:
        return []

    def after_batch(self, points, answers, budget: int) -> list:
        return []

    def _fresh(self, x: int) -> bool:
        v = self.view
        return not v.was_queried(x) and not v.is_erased(x)


class Identity(Adversary):
    name = "identity"
    kinds = (ERASURE, CORRUPTION)


class UniformEraser(Adversary):
    """Spends each window's whole budget erasing uniform unqueried points."""

    name = "uniform_eraser"

    def after_batch(self, points, answers, budget):
        if budget <= 0:
            return []
        v = self.view
        lo, size = v.lo, v.size
        out, picked = [], set()
        left = 20 * budget + 50
        while left > 0 and len(out) < budget:
            chunk = min(left, 2 * budget + 2)
            left -= chunk
            for x in self.rng.integers(lo, lo + size, size=chunk).tolist():
                if x in picked or not self._fresh(x):
                    continue
                picked.add(x)
                out.append(erase(x))
                if len(out) == budget:
                    break
        return out


class UniformCorruptor(Adversary):
    """Corrupts uniform unqueried points: Boolean values are flipped, sequence
    values are pushed above everything else."""

    name = "uniform_corruptor"
    kinds = (CORRUPTION,)
    input_aware = True

    def after_batch(self, points, answers, budget):
        if budget <= 0:
            return []
        v = self.view
        base = v.base
        lo, size = v.lo, v.size
        vals = base.oracle_values()
        out, picked = [], set()
        tries = 0
        while len(out) < budget and tries < 20 * budget + 50:
            tries += 1
            x = lo + int(self.rng.integers(0, size))
            if x in picked or v.was_queried(x):
                continue
            picked.add(x)
            orig = vals[x - lo]
            new = 1 - orig if v.domain_kind == "boolean" else orig + size + 1
            out.append(corrupt(x, new))
        return out


class GreedyXorEraser(Adversary):
    """Erases XORs of random subsets of the most recent queries."""

    name = "greedy_xor"
    domains = ("boolean",)

    def __init__(self, rng=None, window: int = 20):
        super().__init__(rng)
        self.window = window
        self.recent: deque = deque(maxlen=window)

    def after_batch(self, points, answers, budget):
        self.recent.extend(points)
        if budget <= 0 or len(self.recent) < 2:
            return []
        pool = np.array(self.recent, dtype=np.int64)
        # all attempts drawn at once: row j is the subset tried j-th
        masks = self.rng.integers(0, 2, size=(8 * budget + 16, pool.size), dtype=np.int8)
        cands = np.bitwise_xor.reduce(np.where(masks == 1, pool, 0), axis=1).tolist()
        out, picked = [], set()
        for y in cands:
            if y in picked or not self._fresh(y):
                continue
            picked.add(y)
            out.append(erase(y))
            if len(out) == budget:
                break
        return out


class SpanEraser(Adversary):
    """Erases every point z whose ext-vector lies in the span of the ext-vectors
    of the points queried so far. Input-oblivious: the erasure stream depends
    only on the query sequence. Points are erased lazily in ascending order;
    whatever the window's budget cannot cover waits for later windows."""

    name = "span_eraser"
    domains = ("boolean",)

    def __init__(self, rng=None, d: int = 2, cap_bits: int = 20, table_bits: int = 20):
        super().__init__(rng)
        if d < 1:
            raise ValueError("span eraser needs d >= 1")
        self.d = d
        self.cap_bits = cap_bits
        self.table_bits = table_bits
        self.basis: dict[int, int] = {}  # pivot -> reduced vector
        self.Z: set = set()
        self.pending: list = []
        self.degraded = False
        self.history: list = []  # (k, |Z|) after each inserted query
        self.claim_violations = 0

    def bind(self, view):
        super().bind(view)
        n = view.n
        if self.d > n:
            raise ValueError("d exceeds the dimension")
        self.monos = monomials(n, self.d)
        self.dim = len(self.monos)
        self.words = (self.dim + 63) // 64
        self.R = _ext_table_copy(n, self.d) if n <= self.table_bits else None

    @property
    def k(self) -> int:
        return len(self.basis)

    def _insert(self, y: int) -> list[int]:
        """Add ext(y) to the basis; return points newly found in Z."""
        v = ext_bits(y, self.monos)
        for p in sorted(self.basis, reverse=True):
            if (v >> p) & 1:
                v ^= self.basis[p]
        if v == 0:
            return []
        p = v.bit_length() - 1
        for q in self.basis:
            if (self.basis[q] >> p) & 1:
                self.basis[q] ^= v
        self.basis[p] = v
        if self.R is not None:
            return kernels.residual_update(self.R, int_to_words(v, self.words),
                                           p // 64, 1 << (p % 64))
        return self._members_by_enumeration()

    def metrics(self) -> dict:
        return {"claim_checks": len(self.history), "claim_violations": self.claim_violations}

    def _members_by_enumeration(self) -> list[int]:
        sing = [1 << (1 + i) for i in range(self.view.n)]
        basis = [self.basis[p] for p in sorted(self.basis, reverse=True)]
        try:
            span = span_enumerate(basis, self.cap_bits)
        except SpanTooLarge:
            if not self.degraded:
                log.warning("span rank %d exceeds 2^%d; sampling Z instead", len(basis), self.cap_bits)
                self.degraded = True
            span = []
            for _ in range(4096):
                mask = self.rng.integers(0, 2, size=len(basis)).tolist()
                v = 0
                for b, keep in zip(basis, mask):
                    if keep:
                        v ^= b
                span.append(v)
        out = []
        for v in span:
            if not v & 1:
                continue
            z = 0
            for i, s in enumerate(sing):
                if v & s:
                    z |= 1 << i
            if z not in self.Z and ext_bits(z, self.monos) == v:
                out.append(z)
        return out

    def after_batch(self, points, answers, budget):
        for y in points:
            for z in self._insert(y):
                if z not in self.Z:
                    self.Z.add(z)
                    insort(self.pending, z)
            self.history.append((self.k, len(self.Z)))
            if not claim_bound_holds(self.k, len(self.Z), self.d):
                self.claim_violations += 1
        if budget <= 0 or not self.pending:
            return []
        out, keep = [], []
        for z in self.pending:
            if not self._fresh(z):
                continue
            if len(out) < budget:
                out.append(erase(z))
            else:
                keep.append(z)
        self.pending = keep
        return out


_EXT_CACHE: dict = {}


def _ext_table_copy(n: int, d: int) -> np.ndarray:
    key = (n, d)
    tab = _EXT_CACHE.get(key)
    if tab is None:
        if len(_EXT_CACHE) > 8:
            _EXT_CACHE.clear()
        tab = _EXT_CACHE[key] = ext_table(n, d)
    return tab.copy()


def claim_bound_holds(k: int, r: int, d: int) -> bool:
    """C(floor(log2 r), d) <= k for a span of k ext-vectors covering r points."""
    if r == 0:
        return True
    return math.comb(r.bit_length() - 1, d) <= k


class PartnerEraser(Adversary):
    """Sequence adversary that erases the dyadic partners x +- 2^i (cyclic) of the
    points just queried, the positions a pair tester is most likely to pair with them."""

    name = "partner_eraser"
    domains = ("sequence",)

    def __init__(self, rng=None, max_gap_log: int | None = None):
        super().__init__(rng)
        self.max_gap_log = max_gap_log

    def after_batch(self, points, answers, budget):
        if budget <= 0:
            return []
        n = self.view.n
        top = self.max_gap_log if self.max_gap_log is not None else max(0, n.bit_length() - 2)
        cands = []
        for x in points:
            for i in range(top + 1):
                for y in ((x - 1 + (1 << i)) % n + 1, (x - 1 - (1 << i)) % n + 1):
                    cands.append(y)
        order = self.rng.permutation(len(cands)).tolist()
        out, picked = [], set()
        for j in order:
            y = cands[j]
            if y in picked or not self._fresh(y):
                continue
            picked.add(y)
            out.append(erase(y))
            if len(out) == budget:
                break
        return out


# ---- paired sortedness instances ----------------------------------------------------------

LOW, HIGH, INCREASING, VIOLATING = "low", "high", "increasing", "violating"
PLUS, MINUS = "+", "-"


class PairedSequenceInstance(RealSequence):
    """A sequence over [n] built pair by pair from tags on (2i-1, 2i)."""

    __slots__ = ("pair_types",)

    def __init__(self, pair_types: Sequence[str]):
        vals = []
        for i, tag in enumerate(pair_types, start=1):
            lo, hi = 2 * i - 1, 2 * i
            if tag == LOW:
                vals += [lo, lo]
            elif tag == HIGH:
                vals += [hi, hi]
            elif tag == INCREASING:
                vals += [lo, hi]
            elif tag == VIOLATING:
                vals += [hi, lo]
            else:
                raise ValueError(f"unknown pair type {tag!r}")
        super().__init__(vals)
        self.pair_types = tuple(pair_types)

    @property
    def family(self) -> str:
        """MINUS if any violating pair, else PLUS (the all-increasing identity
        sequence belongs to both and is treated as PLUS)."""
        return MINUS if VIOLATING in self.pair_types else PLUS


def _check_eps(n: int, eps) -> Fraction:
    eps = Fraction(eps)
    if n % 2 or n < 2:
        raise ValueError("n must be even and positive")
    if not 0 <= eps <= Fraction(1, 3):
        raise ValueError("eps must lie in [0, 1/3]")
    return eps


def sample_d_plus(n: int, eps, rng: np.random.Generator) -> PairedSequenceInstance:
    eps = float(_check_eps(n, eps))
    u = rng.random(n // 2)
    tags = np.where(u < eps, 0, np.where(u < 2 * eps, 1, 2))
    names = (LOW, HIGH, INCREASING)
    return PairedSequenceInstance([names[t] for t in tags.tolist()])


def sample_d_minus(n: int, eps, rng: np.random.Generator) -> PairedSequenceInstance:
    eps = float(_check_eps(n, eps))
    u = rng.random(n // 2)
    return PairedSequenceInstance([VIOLATING if x < eps else INCREASING for x in u.tolist()])


def partner(x: int) -> int:
    return x + 1 if x % 2 else x - 1


class SortednessImpossibility(Adversary):
    """Input-aware eraser that hides the difference between the two paired
    families. On the first touch of a pair it decides whether to erase the
    partner: always for low, high and violating pairs; for increasing pairs
    with probability eps/(1-eps) in the violating family and never otherwise.
    Decisions the budget cannot serve at once wait in a queue."""

    name = "sortedness_impossibility"
    domains = ("sequence",)
    input_aware = True

    def __init__(self, rng=None, eps=Fraction(1, 100)):
        super().__init__(rng)
        self.eps = Fraction(eps)
        self.p_inc = float(self.eps / (1 - self.eps)) if self.eps < 1 else 1.0
        self.queue: deque = deque()
        self.decided: set = set()
        self.required = 0
        self.windows_with_backlog = 0
        self.max_backlog = 0
        self.exposed = 0  # partners queried while their erasure was still queued
        self.decisions: list = []  # (queried point, value seen, erased?)

    def bind(self, view):
        super().bind(view)
        base = view.base
        if not isinstance(base, PairedSequenceInstance):
            raise TypeError("sortedness adversary needs a paired instance")
        self.types = base.pair_types
        self.family = base.family

    def _wants_erasure(self, x: int) -> bool:
        tag = self.types[(x - 1) // 2]
        if tag in (LOW, HIGH, VIOLATING):
            return True
        if self.family == MINUS:
            return bool(self.rng.random() < self.p_inc)
        return False

    def after_batch(self, points, answers, budget):
        v = self.view
        for x, a in zip(points, answers):
            if x in self.queue:
                self.exposed += 1
                self.queue.remove(x)
            pair = (x - 1) // 2
            if pair in self.decided:
                continue
            self.decided.add(pair)
            y = partner(x)
            if v.was_queried(y) or v.is_erased(y):
                continue
            want = self._wants_erasure(x)
            self.decisions.append((x, a, want))
            if want:
                self.required += 1
                self.queue.append(y)
        out = []
        while self.queue and len(out) < budget:
            out.append(erase(self.queue.popleft()))
        if self.queue:
            self.windows_with_backlog += 1
            self.max_backlog = max(self.max_backlog, len(self.queue))
        return out

    @property
    def sustained(self) -> bool:
        """Every required erasure was served in the window right after its query."""
        return self.windows_with_backlog == 0

    def settled(self) -> bool:
        """Whether the outcome of the game for this strategy is already fixed:
        it failed, or its spare budget covers every pair not yet touched."""
        if not self.sustained:
            return True
        untouched = self.view.n // 2 - len(self.decided)
        return not self.queue and self.view.budget() >= untouched

    def metrics(self) -> dict:
        """Counts for the conditional erasure frequencies: a first touch at x
        that reads f(x) = x ("same") or f(x) = partner(x) ("shift"), and whether
        the partner ended up erased."""
        out = {"sustained": int(self.sustained), "required": self.required,
               "exposed": self.exposed, "same": 0, "same_erased": 0,
               "shift": 0, "shift_erased": 0}
        v = self.view
        for x, a, _ in self.decisions:
            key = "same" if a == x else "shift" if a == partner(x) else None
            if key:
                out[key] += 1
                out[key + "_erased"] += int(v.is_erased(partner(x)))
        return out


# ---- indistinguishability experiments ---------------------------------------------------------

class LazyUniformFunction:
    """A uniformly random Boolean function sampled point by point."""

    def __init__(self, rng):
        self.rng = rng
        self.vals: dict = {}

    def __call__(self, x: int) -> int:
        v = self.vals.get(x)
        if v is None:
            v = self.vals[x] = int(self.rng.integers(0, 2))
        return v


class LazyPolynomial:
    """A uniformly random polynomial of degree <= d, evaluated as <coefs, ext(x)>."""

    def __init__(self, rng, ext_of: list[int], dim: int):
        self.coef = int.from_bytes(rng.bytes((dim + 7) // 8), "little") & ((1 << dim) - 1)
        self.ext_of = ext_of

    def __call__(self, x: int) -> int:
        return (self.coef & self.ext_of[x]).bit_count() & 1


def _ext_list(n: int, d: int) -> list[int]:
    monos = monomials(n, d)
    return [ext_bits(x, monos) for x in range(1 << n)]


# Deterministic Boolean strategies: history (tuple of answers, None for erased) -> next point.

def lex_strategy(n: int) -> Callable:
    """Queries 1, 2, 3, ... regardless of answers."""
    return lambda hist: len(hist) + 1


def cube_strategy(n: int) -> Callable:
    """Walks the vertices of the subcube on the low coordinates in Gray order."""
    def nxt(hist):
        j = len(hist)
        return j ^ (j >> 1)
    return nxt


def adaptive_walk_strategy(n: int) -> Callable:
    """Each answer picks the next coordinate to toggle: a 1 moves to the next
    unused high coordinate, a 0 or erasure to the next unused low one."""
    def nxt(hist):
        x = 0
        lo_c, hi_c = 0, n - 1
        for a in hist:
            if a == 1:
                x ^= 1 << hi_c
                hi_c -= 1
            else:
                x ^= 1 << lo_c
                lo_c += 1
            if lo_c > hi_c:
                lo_c, hi_c = 0, n - 1
        return x if hist else (1 << n) - 1
    return nxt


def lower_set_strategy(n: int, k: int = 4) -> Callable:
    """Probes span(e1..ek): weight <= 2 points first, then the rest from the top down.
    Against a slow eraser the late answers are determined under a degree-2 input."""
    low = sorted((x for x in range(1 << k) if bin(x).count("1") <= 2),
                 key=lambda x: (bin(x).count("1"), x))
    high = sorted((x for x in range(1 << k) if bin(x).count("1") > 2), reverse=True)
    order = low + high

    def nxt(hist):
        return order[len(hist) % len(order)]
    return nxt


BOOLEAN_ZOO = {
    "lex": lex_strategy,
    "cube": cube_strategy,
    "adaptive_walk": adaptive_walk_strategy,
}


def g_test(counts_a: dict, counts_b: dict, min_expected: float = 5.0) -> tuple[float, float, int]:
    """Two-sample G-test of equal category distributions; categories whose expected
    count falls below ``min_expected`` in either sample are pooled into one cell.
    Returns (statistic, p-value, degrees of freedom)."""
    from scipy.stats import chi2_contingency

    keys = sorted(set(counts_a) | set(counts_b), key=repr)
    na, nb = sum(counts_a.values()), sum(counts_b.values())
    tot = na + nb
    big, pooled_a, pooled_b = [], 0, 0
    for k in keys:
        a, b = counts_a.get(k, 0), counts_b.get(k, 0)
        col = a + b
        if min(na, nb) * col / tot < min_expected:
            pooled_a += a
            pooled_b += b
        else:
            big.append((a, b))
    if pooled_a + pooled_b:
        big.append((pooled_a, pooled_b))
    if len(big) < 2:
        return 0.0, 1.0, 0
    table = np.array(big, dtype=np.int64).T
    stat, p, dof, _ = chi2_contingency(table, correction=False, lambda_="log-likelihood")
    return float(stat), float(p), int(dof)


@dataclass
class IndistinguishabilityReport:
    strategy: str
    q: int
    trials: int
    bound_ok: bool
    prefix_pvalues: list
    alpha: float
    first_answer_ones: dict = field(default_factory=dict)
    first_answer_present: dict = field(default_factory=dict)
    distinguished: bool = False

    def summary(self) -> str:
        verdict = "distinguished" if self.distinguished else "indistinguishable"
        return f"{self.strategy}: q={self.q} min p={min(self.prefix_pvalues):.3g} -> {verdict}"


def _erasure_schedule(strategy_queries: tuple, n: int, d: int, t, cache: dict):
    """Erased sets seen by each query of a fixed query sequence, from a real
    oracle driven by the span eraser. Input-obliviousness makes the schedule
    a function of the query sequence alone, so it is cached on the prefix."""
    key = strategy_queries
    hit = cache.get(key)
    if hit is not None:
        return hit
    base = BooleanFunctionTable(n, np.zeros(1 << n, dtype=np.uint8))
    oracle = AdversarialOracle(base, OracleConfig(t=t), SpanEraser(d=d), record=False)
    before = []
    for y in strategy_queries:
        before.append(y in oracle.erased)
        oracle.query(y)
    cache[key] = before
    return before


def yao_indistinguishability_experiment(q: int, d: int, n: int, t, trials: int,
                                        rng: np.random.Generator,
                                        strategy: str | Callable = "lex",
                                        alpha: float = 0.01) -> IndistinguishabilityReport:
    """Play a deterministic q-query strategy against the span eraser on a uniform
    degree-d polynomial and on a uniform function; compare the distributions of
    answer histories prefix by prefix with Bonferroni-corrected G-tests."""
    t = Fraction(t)
    lg = math.floor(math.log2(float(t))) if t >= 1 else 0
    bound_ok = lg >= 1 and q <= math.comb(lg - 1, d)
    if not bound_ok:
        warnings.warn(f"q={q} exceeds the indistinguishable regime for t={t}, d={d}", stacklevel=2)
    name = strategy if isinstance(strategy, str) else getattr(strategy, "__name__", "custom")
    if isinstance(strategy, str):
        factory = {**BOOLEAN_ZOO, "lower_set": lower_set_strategy}[strategy]
        nxt = factory(n)
    else:
        nxt = strategy(n)
    ext_of = _ext_list(n, d)
    dim = rm_dimension(n, d)
    cache: dict = {}
    # histories are tuples of answers; next point depends on history only
    point_cache: dict = {}

    def play(f) -> tuple:
        hist: tuple = ()
        pts: tuple = ()
        for _ in range(q):
            y = point_cache.get(hist)
            if y is None:
                y = point_cache[hist] = nxt(hist)
            pts = pts + (y,)
            erased = _erasure_schedule(pts, n, d, t, cache)[-1]
            hist = hist + (None if erased else f(y),)
        return hist

    plus_rng, minus_rng = rng.spawn(2)
    hist_plus = [play(LazyPolynomial(plus_rng, ext_of, dim)) for _ in range(trials)]
    hist_minus = [play(LazyUniformFunction(minus_rng)) for _ in range(trials)]
    pvals = []
    for j in range(1, q + 1):
        ca: dict = {}
        cb: dict = {}
        for h in hist_plus:
            ca[h[:j]] = ca.get(h[:j], 0) + 1
        for h in hist_minus:
            cb[h[:j]] = cb.get(h[:j], 0) + 1
        pvals.append(g_test(ca, cb)[1])
    rep = IndistinguishabilityReport(name, q, trials, bound_ok, pvals, alpha)
    for label, hs in ((PLUS, hist_plus), (MINUS, hist_minus)):
        present = [h[0] for h in hs if h[0] is not None]
        rep.first_answer_present[label] = len(present)
        rep.first_answer_ones[label] = sum(present)
    rep.distinguished = min(pvals) < alpha / q
    return rep


# Deterministic sequence strategies: (n, history of (point, answer)) -> next position.

def left_to_right_prober(n: int) -> Callable:
    return lambda hist: len(hist) % n + 1


def pair_prober(n: int) -> Callable:
    """Queries both members of pairs spread evenly across the sequence."""
    def nxt(hist):
        j = len(hist)
        i = (j // 2 * 7919) % (n // 2)
        return 2 * i + 1 + (j % 2)
    return nxt


def binary_search_prober(n: int) -> Callable:
    """Bisects the positions, steering by whether the last answer was above its position."""
    def nxt(hist):
        lo, hi = 1, n
        for x, a in hist:
            mid = (lo + hi) // 2
            if a is not None and a > x:
                hi = mid
            else:
                lo = mid + 1
            if lo >= hi:
                lo, hi = 1, n
        return (lo + hi) // 2
    return nxt


SEQUENCE_ZOO = {
    "left_to_right": left_to_right_prober,
    "pair": pair_prober,
    "binary_search": binary_search_prober,
}


def sortedness_indistinguishability_experiment(q: int, n: int, eps, trials: int,
                                               rng: np.random.Generator,
                                               strategy: str = "left_to_right",
                                               C: int = 60,
                                               alpha: float = 0.01) -> IndistinguishabilityReport:
    """The paired-family analogue of the Boolean experiment, played through real
    budget-managing oracles with rate C*eps."""
    eps = Fraction(eps)
    nxt = SEQUENCE_ZOO[strategy](n)
    cfg = OracleConfig(t=C * eps, scheduling=BUDGET_MANAGING)

    def play(inst, adv_rng) -> tuple:
        oracle = AdversarialOracle(inst, cfg, SortednessImpossibility(adv_rng, eps), record=False)
        hist: tuple = ()
        for _ in range(q):
            x = nxt(hist)
            hist = hist + ((x, oracle.query(x)),)
        return tuple(a for _, a in hist)

    a_rng, b_rng = rng.spawn(2)
    hist_plus = [play(sample_d_plus(n, eps, a_rng), a_rng) for _ in range(trials)]
    hist_minus = [play(sample_d_minus(n, eps, b_rng), b_rng) for _ in range(trials)]
    pvals = []
    for j in range(1, q + 1):
        ca: dict = {}
        cb: dict = {}
        for h in hist_plus:
            ca[h[:j]] = ca.get(h[:j], 0) + 1
        for h in hist_minus:
            cb[h[:j]] = cb.get(h[:j], 0) + 1
        pvals.append(g_test(ca, cb)[1])
    rep = IndistinguishabilityReport(strategy, q, trials, True, pvals, alpha)
    rep.distinguished = min(pvals) < alpha / q
    return rep


ADVERSARIES = {
    "identity": Identity,
    "uniform_eraser": UniformEraser,
    "uniform_corruptor": UniformCorruptor,
    "greedy_xor": GreedyXorEraser,
    "span_eraser": SpanEraser,
    "partner_eraser": PartnerEraser,
    "sortedness_impossibility": SortednessImpossibility,
}

ERASURE_ADVERSARIES = ("identity", "uniform_eraser", "greedy_xor", "span_eraser",
                       "partner_eraser", "sortedness_impossibility")


def make_adversary(name: str, rng: np.random.Generator | None = None, **opts) -> Adversary:
    try:
        cls = ADVERSARIES[name]
    except KeyError:
        raise KeyError(f"unknown adversary {name!r}") from None
    return cls(rng, **opts)


__all__ = [
    "Adversary",
    "Identity",
    "UniformEraser",
    "UniformCorruptor",
    "GreedyXorEraser",
    "SpanEraser",
    "PartnerEraser",
    "SortednessImpossibility",
    "PairedSequenceInstance",
    "sample_d_plus",
    "sample_d_minus",
    "partner",
    "claim_bound_holds",
    "g_test",
    "yao_indistinguishability_experiment",
    "sortedness_indistinguishability_experiment",
    "IndistinguishabilityReport",
    "BOOLEAN_ZOO",
    "SEQUENCE_ZOO",
    "ADVERSARIES",
    "ERASURE_ADVERSARIES",
    "make_adversary",
]
