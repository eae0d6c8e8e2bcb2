"""Input generators. Each returns a ``Generated`` carrying the input together with
its exact distance to the target property, certified by an exact oracle."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Callable, NamedTuple

import numpy as np

from ..adversaries import sample_d_minus, sample_d_plus
from ..f2core import (
    BooleanFunctionTable,
    distance_to_degree_d,
    distance_to_linearity,
    from_anf,
    monomials,
    rm_dimension,
)
from ..seq_testers import RealSequence, distance_to_lipschitz, distance_to_sortedness

MAX_ATTEMPTS = 50


class CertificationFailed(RuntimeError):
    pass


class Generated(NamedTuple):
    input: object
    distance: Fraction | None
    property: str

    @property
    def member(self) -> bool:
        return self.distance == 0


def _rng(rng) -> np.random.Generator:
    return rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)


def _random_bits(rng, size: int) -> np.ndarray:
    return rng.integers(0, 2, size=size, dtype=np.uint8)


def _linear_table(n: int, S: int) -> np.ndarray:
    x = np.arange(1 << n, dtype=np.int64)
    return (np.bitwise_count(x & S) & 1).astype(np.uint8)


# ---- Boolean inputs ----------------------------------------------------------------------

def random_linear(n: int, rng=None) -> Generated:
    rng = _rng(rng)
    S = int(rng.integers(0, 1 << n))
    return Generated(BooleanFunctionTable(n, _linear_table(n, S)), Fraction(0), "linearity")


def random_degree_d(n: int, d: int, rng=None) -> Generated:
    """Uniform polynomial of degree <= d: independent fair coefficients on every
    monomial of size <= d."""
    rng = _rng(rng)
    coeffs = np.zeros(1 << n, dtype=np.uint8)
    monos = monomials(n, d)
    coeffs[monos] = _random_bits(rng, len(monos))
    return Generated(from_anf(n, coeffs), Fraction(0), f"degree<={d}")


def random_function(n: int, rng=None) -> Generated:
    rng = _rng(rng)
    f = BooleanFunctionTable(n, _random_bits(rng, 1 << n))
    return Generated(f, distance_to_linearity(f), "linearity")


def planted_far_linear(n: int, eps, rng=None) -> Generated:
    """A random linear function with ceil(eps 2^n) points flipped; the distance to
    the nearest linear function is recomputed from the spectrum."""
    rng = _rng(rng)
    eps = Fraction(eps)
    if not 0 < eps < Fraction(1, 2):
        raise ValueError("eps must lie in (0, 1/2)")
    size = 1 << n
    k = math.ceil(eps * size)
    for _ in range(MAX_ATTEMPTS):
        S = int(rng.integers(0, size))
        vals = _linear_table(n, S)
        flip = rng.choice(size, size=k, replace=False)
        vals[flip] ^= 1
        f = BooleanFunctionTable(n, vals)
        dist = distance_to_linearity(f)
        if dist >= eps:
            return Generated(f, dist, "linearity")
    raise CertificationFailed(f"no {eps}-far function found for n={n}")


def _junta_width(n: int, d: int) -> int:
    k = n
    while k > d and rm_dimension(k, d) > 24:
        k -= 1
    return k


def planted_far_degree(n: int, d: int, eps, rng=None) -> Generated:
    """A function far from degree <= d. When the exact oracle cannot handle n
    directly, a certified-far function on k < n variables is composed with a
    random invertible affine change of coordinates; both steps preserve the
    distance to degree <= d, so the certificate carries over exactly."""
    rng = _rng(rng)
    eps = Fraction(eps)
    k = _junta_width(n, d)
    top = [m for m in monomials(k, d + 1) if m.bit_count() == d + 1]
    for attempt in range(MAX_ATTEMPTS):
        # alternate uniform candidates with homogeneous degree d+1 ones, which
        # sit far from degree <= d much more often on few variables
        if attempt % 2 and top:
            coeffs = np.zeros(1 << k, dtype=np.uint8)
            coeffs[top] = _random_bits(rng, len(top))
            g = from_anf(k, coeffs)
        else:
            g = BooleanFunctionTable(k, _random_bits(rng, 1 << k))
        dist = distance_to_degree_d(g, d)
        if dist < eps:
            continue
        if k == n:
            return Generated(g, dist, f"degree<={d}")
        return Generated(_affine_lift(g, n, rng), dist, f"degree<={d}")
    raise CertificationFailed(f"no {eps}-far function from degree {d} found on {k} variables")


def _random_invertible(n: int, rng) -> list[int]:
    """Rows of a uniformly random invertible n x n matrix over F2."""
    while True:
        rows = [int(r) for r in rng.integers(0, 1 << n, size=n)]
        basis: dict = {}
        ok = True
        for r in rows:
            v = r
            while v:
                p = v.bit_length() - 1
                if p not in basis:
                    basis[p] = v
                    break
                v ^= basis[p]
            if v == 0:
                ok = False
                break
        if ok:
            return rows


def _affine_lift(g: BooleanFunctionTable, n: int, rng) -> BooleanFunctionTable:
    k = g.n
    rows = _random_invertible(n, rng)
    shift = int(rng.integers(0, 1 << n))
    x = np.arange(1 << n, dtype=np.int64) ^ shift
    # coordinate i of A x is <row_i, x>; only the first k coordinates feed g
    idx = np.zeros(1 << n, dtype=np.int64)
    for i in range(k):
        idx |= (np.bitwise_count(x & rows[i]) & 1).astype(np.int64) << i
    return BooleanFunctionTable(n, g.values[idx])


# ---- sequences -------------------------------------------------------------------------

def sorted_sequence(n: int, rng=None) -> Generated:
    rng = _rng(rng)
    vals = np.sort(rng.integers(0, 4 * n, size=n)).tolist()
    return Generated(RealSequence(vals), Fraction(0), "sortedness")


def lipschitz_sequence(n: int, rng=None) -> Generated:
    rng = _rng(rng)
    steps = rng.integers(-1, 2, size=n - 1)
    vals = np.concatenate([[0], np.cumsum(steps)]).tolist()
    return Generated(RealSequence(vals), Fraction(0), "lipschitz")


def planted_far_sorted(n: int, eps, rng=None) -> Generated:
    """Increasing sequence with ceil(eps n) entries displaced up or down by random
    offsets; each displaced entry costs at most one deletion, and the exact
    distance is taken from the longest non-decreasing subsequence."""
    rng = _rng(rng)
    eps = Fraction(eps)
    if eps > Fraction(1, 2):
        raise ValueError("eps must be at most 1/2")
    k = math.ceil(eps * n)
    for _ in range(MAX_ATTEMPTS):
        vals = 2 * np.arange(1, n + 1, dtype=np.int64)
        pos = rng.choice(n, size=min(n, k), replace=False)
        off = 2 * rng.integers(2, 65, size=pos.size) + 1
        sign = np.where(rng.integers(0, 2, size=pos.size) == 1, 1, -1)
        vals[pos] += sign * off
        f = RealSequence(vals.tolist())
        dist = distance_to_sortedness(f)
        if dist >= eps:
            return Generated(f, dist, "sortedness")
        k += max(1, k // 20)
    raise CertificationFailed(f"no {eps}-far sequence found for n={n}")


def planted_far_lipschitz(n: int, eps, rng=None) -> Generated:
    """A +-1 walk with spikes of mutually distinct large heights at random positions."""
    rng = _rng(rng)
    eps = Fraction(eps)
    k = math.ceil(eps * n)
    for _ in range(MAX_ATTEMPTS):
        base = lipschitz_sequence(n, rng).input.values
        vals = list(base)
        pos = rng.choice(n, size=min(n - 1, k), replace=False)
        heights = rng.permutation(np.arange(1, len(pos) + 1)) * (3 * n)
        for p, h in zip(pos.tolist(), heights.tolist()):
            vals[p] += h
        f = RealSequence(vals)
        dist = distance_to_lipschitz(f)
        if dist >= eps:
            return Generated(f, dist, "lipschitz")
        k += max(1, k // 20)
    raise CertificationFailed(f"no {eps}-far Lipschitz instance for n={n}")


def d_plus(n: int, eps, rng=None) -> Generated:
    inst = sample_d_plus(n, eps, _rng(rng))
    return Generated(inst, distance_to_sortedness(inst), "sortedness")


def d_minus(n: int, eps, rng=None) -> Generated:
    inst = sample_d_minus(n, eps, _rng(rng))
    return Generated(inst, distance_to_sortedness(inst), "sortedness")


GENERATORS: dict[str, Callable[..., Generated]] = {
    "random_linear": random_linear,
    "random_degree_d": random_degree_d,
    "random_function": random_function,
    "planted_far_linear": planted_far_linear,
    "planted_far_degree": planted_far_degree,
    "sorted_sequence": sorted_sequence,
    "lipschitz_sequence": lipschitz_sequence,
    "planted_far_sorted": planted_far_sorted,
    "planted_far_lipschitz": planted_far_lipschitz,
    "d_plus": d_plus,
    "d_minus": d_minus,
}


def generate(name: str, rng, **params) -> Generated:
    try:
        fn = GENERATORS[name]
    except KeyError:
        raise KeyError(f"unknown generator {name!r}") from None
    return fn(rng=rng, **params)
