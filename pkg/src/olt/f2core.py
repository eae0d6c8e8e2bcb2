"""Boolean functions over F2: truth tables, Fourier and ANF transforms, exact distances,
monomial extension vectors and bitset linear algebra."""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Iterable, Sequence

import numpy as np

from . import kernels

MAX_N = 24
MAX_RM_DIMENSION = 24
SPAN_CAP_BITS = 20


class DimensionTooLarge(ValueError):
    """Raised when an exhaustive oracle would exceed its enumeration bound."""


class SpanTooLarge(ValueError):
    """Raised when a span enumeration would exceed 2^20 elements."""


class BooleanFunctionTable:
    """Full truth table of f: {0,1}^n -> {0,1}.

    Bit i of an index x is coordinate x[i]. The table is immutable.
    """

    __slots__ = ("n", "values", "_bytes")

    def __init__(self, n: int, values):
        if not 1 <= n <= MAX_N:
            raise ValueError(f"n must be in [1, {MAX_N}], got {n}")
        arr = np.array(values, dtype=np.uint8).reshape(-1)
        if arr.shape[0] != 1 << n:
            raise ValueError(f"expected {1 << n} values, got {arr.shape[0]}")
        if arr.size and arr.max() > 1:
            raise ValueError("values must be bits")
        arr.setflags(write=False)
        self.n = n
        self.values = arr
        self._bytes = None

    @classmethod
    def from_callable(cls, n: int, fn) -> "BooleanFunctionTable":
        return cls(n, [fn(x) & 1 for x in range(1 << n)])

    @classmethod
    def from_int(cls, n: int, bits: int) -> "BooleanFunctionTable":
        raw = bits.to_bytes(max(1, (1 << n) // 8 + 1), "little")
        vals = np.unpackbits(np.frombuffer(raw, dtype=np.uint8), bitorder="little")
        return cls(n, vals[: 1 << n])

    @classmethod
    def from_hex(cls, text: str) -> "BooleanFunctionTable":
        head, _, body = text.strip().partition(":")
        if not head.startswith("n=") or not body:
            raise ValueError(f"malformed truth table: {text[:40]!r}")
        n = int(head[2:])
        bits = int(body, 16)
        if bits >> (1 << n):
            raise ValueError("hex payload longer than 2^n bits")
        return cls.from_int(n, bits)

    def to_int(self) -> int:
        return int.from_bytes(np.packbits(self.values, bitorder="little").tobytes(), "little")

    def to_hex(self) -> str:
        width = max(1, (1 << self.n) // 4)
        return f"n={self.n}:{self.to_int():0{width}x}"

    def as_bytes(self) -> bytes:
        """Values as a bytes object; fastest scalar indexing from Python."""
        if self._bytes is None:
            self._bytes = self.values.tobytes()
        return self._bytes

    def words(self) -> np.ndarray:
        """Values packed little-endian into uint64 words."""
        return pack_words(self.values)

    def pm(self) -> np.ndarray:
        """The +-1 view (-1)^f(x) as int64."""
        return 1 - 2 * self.values.astype(np.int64)

    def __call__(self, x: int) -> int:
        return int(self.values[x])

    def oracle_domain(self) -> tuple:
        return "boolean", 0, 1 << self.n

    def oracle_values(self) -> bytes:
        return self.as_bytes()

    def __len__(self) -> int:
        return 1 << self.n

    def __eq__(self, other) -> bool:
        return (isinstance(other, BooleanFunctionTable) and self.n == other.n
                and np.array_equal(self.values, other.values))

    def __hash__(self) -> int:
        return hash((self.n, self.as_bytes()))

    def __repr__(self) -> str:
        if self.n <= 6:
            return f"BooleanFunctionTable({self.to_hex()})"
        return f"BooleanFunctionTable(n={self.n}, weight={int(self.values.sum())})"


def pack_words(bits: np.ndarray) -> np.ndarray:
    packed = np.packbits(np.asarray(bits, dtype=np.uint8), bitorder="little")
    pad = (-packed.shape[0]) % 8
    if pad:
        packed = np.concatenate([packed, np.zeros(pad, dtype=np.uint8)])
    return packed.view(np.uint64).copy()


class FourierSpectrum:
    """Fourier coefficients f^(S) = raw[S] / 2^n, with raw kept as exact integers."""

    __slots__ = ("n", "raw")

    def __init__(self, n: int, raw: np.ndarray):
        self.n = n
        self.raw = raw

    @property
    def coefficients(self) -> np.ndarray:
        return self.raw / float(1 << self.n)

    def exact(self, S: int) -> Fraction:
        return Fraction(int(self.raw[S]), 1 << self.n)

    def __getitem__(self, S: int) -> float:
        return float(self.raw[S]) / (1 << self.n)


def wht(f: BooleanFunctionTable) -> FourierSpectrum:
    a = np.ascontiguousarray(f.pm())
    kernels.fwht_int64(a)
    return FourierSpectrum(f.n, a)


def inverse_wht(spec: FourierSpectrum) -> np.ndarray:
    """Recover the +-1 table from a spectrum (the transform is its own inverse up to 2^n)."""
    a = np.ascontiguousarray(spec.raw.copy())
    kernels.fwht_int64(a)
    return a // (1 << spec.n)


def distance_to_linearity(f: BooleanFunctionTable) -> Fraction:
    """(1 - max_S f^(S)) / 2 as an exact rational with denominator 2^n."""
    top = int(wht(f).raw.max())
    return Fraction(((1 << f.n) - top) // 2, 1 << f.n)


def distance_to_affine(f: BooleanFunctionTable) -> Fraction:
    top = int(np.abs(wht(f).raw).max())
    return Fraction(((1 << f.n) - top) // 2, 1 << f.n)


def anf(f: BooleanFunctionTable) -> np.ndarray:
    """ANF coefficients: entry S is the coefficient of prod_{i in S} x_i."""
    a = np.array(f.values, dtype=np.uint8)
    kernels.mobius_u8(a)
    return a


def from_anf(n: int, coeffs) -> BooleanFunctionTable:
    a = np.array(coeffs, dtype=np.uint8)
    kernels.mobius_u8(a)
    return BooleanFunctionTable(n, a)


def popcounts(size: int) -> np.ndarray:
    return np.bitwise_count(np.arange(size, dtype=np.uint64)).astype(np.int64)


def anf_degree(f: BooleanFunctionTable) -> int:
    """Algebraic degree; the zero function has degree 0."""
    nz = np.flatnonzero(anf(f))
    if nz.size == 0:
        return 0
    return int(np.bitwise_count(nz.astype(np.uint64)).max())


def rm_dimension(n: int, d: int) -> int:
    return sum(comb(n, i) for i in range(min(d, n) + 1))


def monomials(n: int, d: int) -> list[int]:
    """Subsets of [n] with |S| <= d as bitmasks, ordered by size then lexicographically."""
    out = []
    for size in range(min(d, n) + 1):
        for S in combinations(range(n), size):
            mask = 0
            for i in S:
                mask |= 1 << i
            out.append(mask)
    return out


def monomial_table(n: int, mask: int) -> np.ndarray:
    x = np.arange(1 << n, dtype=np.int64)
    return ((x & mask) == mask).astype(np.uint8)


def distance_to_degree_d(f: BooleanFunctionTable, d: int, route: str = "auto") -> Fraction:
    """Exact distance from f to RM(d, n), as a rational with denominator 2^n.

    Routes: "gray" enumerates every codeword by Gray-code XOR of monomial tables;
    "auto" also uses weight (d=0) and the Walsh spectrum (d=1), which give the
    same minimum without enumeration.
    """
    n = f.n
    if d < 0:
        raise ValueError("d must be non-negative")
    dim = rm_dimension(n, d)
    if dim > MAX_RM_DIMENSION:
        raise DimensionTooLarge(f"RM({d},{n}) has dimension {dim} > {MAX_RM_DIMENSION}")
    size = 1 << n
    if d >= n:
        return Fraction(0, size)
    if route == "auto" and d == 0:
        w = int(f.values.sum())
        return Fraction(min(w, size - w), size)
    if route == "auto" and d == 1:
        return distance_to_affine(f)
    if route not in ("auto", "gray"):
        raise ValueError(f"unknown route {route!r}")
    gens = np.stack([pack_words(monomial_table(n, m)) for m in monomials(n, d)])
    best, _ = kernels.gray_min_distance(f.words(), np.ascontiguousarray(gens))
    return Fraction(best, size)


class ExtendedVector:
    """ext(x): one bit per monomial of degree <= d, in canonical order; bit j of `bits` is coordinate j."""

    __slots__ = ("n", "d", "bits")

    def __init__(self, n: int, d: int, bits: int):
        self.n, self.d, self.bits = n, d, bits

    @property
    def coords(self) -> tuple:
        return tuple((self.bits >> j) & 1 for j in range(rm_dimension(self.n, self.d)))

    def __eq__(self, other) -> bool:
        return (isinstance(other, ExtendedVector)
                and (self.n, self.d, self.bits) == (other.n, other.d, other.bits))

    def __hash__(self) -> int:
        return hash((self.n, self.d, self.bits))

    def __repr__(self) -> str:
        return f"ExtendedVector(n={self.n}, d={self.d}, coords={self.coords})"


def ext_bits(x: int, monos: Sequence[int]) -> int:
    bits = 0
    for j, m in enumerate(monos):
        if x & m == m:
            bits |= 1 << j
    return bits


def ext(x: int, n: int, d: int) -> ExtendedVector:
    if not 0 <= x < 1 << n:
        raise ValueError("point outside {0,1}^n")
    return ExtendedVector(n, d, ext_bits(x, monomials(n, d)))


def singleton_positions(n: int, d: int) -> list[int]:
    """Coordinate index of each singleton {i} in canonical order."""
    return [1 + i for i in range(n)] if d >= 1 else []


def project(v: ExtendedVector) -> int:
    """pi: read the point back from the singleton coordinates."""
    if v.d < 1:
        raise ValueError("projection needs d >= 1")
    x = 0
    for i, j in enumerate(singleton_positions(v.n, v.d)):
        if (v.bits >> j) & 1:
            x |= 1 << i
    return x


def ext_table(n: int, d: int) -> np.ndarray:
    """ext of every point of {0,1}^n, packed as a (2^n, words) uint64 array."""
    monos = monomials(n, d)
    words = (len(monos) + 63) // 64
    x = np.arange(1 << n, dtype=np.int64)
    out = np.zeros((1 << n, words), dtype=np.uint64)
    for j, m in enumerate(monos):
        col = ((x & m) == m).astype(np.uint64)
        out[:, j // 64] |= col << np.uint64(j % 64)
    return out


def int_to_words(v: int, words: int) -> np.ndarray:
    return np.array([(v >> (64 * k)) & 0xFFFFFFFFFFFFFFFF for k in range(words)], dtype=np.uint64)


# ---- bitset linear algebra -------------------------------------------------------------

def f2_rank(rows: Iterable[int]) -> int:
    return len(f2_span_basis(rows))


def f2_span_basis(vectors: Iterable[int]) -> list[int]:
    """Reduced row-echelon basis; each vector's pivot is its highest set bit,
    and no other basis vector has that bit set. Sorted by decreasing pivot."""
    basis: dict[int, int] = {}
    for v in vectors:
        for p in sorted(basis, reverse=True):
            if (v >> p) & 1:
                v ^= basis[p]
        if v == 0:
            continue
        p = v.bit_length() - 1
        for q in basis:
            if (basis[q] >> p) & 1:
                basis[q] ^= v
        basis[p] = v
    return [basis[p] for p in sorted(basis, reverse=True)]


def in_span(v: int, basis: Sequence[int]) -> bool:
    for b in basis:
        if (v >> (b.bit_length() - 1)) & 1:
            v ^= b
    return v == 0


def span_enumerate(basis: Sequence[int], cap_bits: int = SPAN_CAP_BITS) -> list[int]:
    """Every F2 combination of the basis, each exactly once, in Gray-code order."""
    k = len(basis)
    if k > cap_bits:
        raise SpanTooLarge(f"span of rank {k} exceeds 2^{cap_bits}")
    out = [0]
    cur = 0
    for j in range(1, 1 << k):
        cur ^= basis[(j & -j).bit_length() - 1]
        out.append(cur)
    return out


__all__ = [
    "BooleanFunctionTable",
    "FourierSpectrum",
    "ExtendedVector",
    "DimensionTooLarge",
    "SpanTooLarge",
    "wht",
    "inverse_wht",
    "distance_to_linearity",
    "distance_to_affine",
    "anf",
    "from_anf",
    "anf_degree",
    "distance_to_degree_d",
    "rm_dimension",
    "monomials",
    "monomial_table",
    "ext",
    "ext_bits",
    "ext_table",
    "project",
    "f2_rank",
    "f2_span_basis",
    "in_span",
    "span_enumerate",
    "pack_words",
    "int_to_words",
]
