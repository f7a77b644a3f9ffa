"""Compact spectral matrices and exact spectra of integral circulant graphs.

For N = p1^n1 * ... * pr^nr, the indexing set I(N) is the lexicographic
product {0..n1} x ... x {0..nr}.  An index serves three roles:

* column label (m1,...,mr)  <->  divisor d = prod p_i^(n_i - m_i), so the
  all-zero label is d = N (never part of a symbol);
* row label (g1,...,gr)     <->  the residues t in 0..N-1 whose p_i-adic
  valuation, capped at n_i, equals g_i (t = 0 maps to (n1,...,nr));
* totient label             <->  phi(prod p_i^(m_i)).

The compact matrix stores one integer row per row label together with the
number of residues sharing it; the full N-row form is never materialized.
Two independent eigenvalue routes are provided: the exact totient/Moebius
formula and a floating-point root-of-unity summation used as an oracle.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

import numpy as np

from .numtheory import PrimeFactorization, divisors, factorize, mu, phi

__all__ = [
    "ExponentIndex",
    "SymbolSet",
    "CompactMatrix",
    "CanonicalSpectrum",
    "index_set",
    "column_for_divisor",
    "divisor_for_column",
    "row_for_residue",
    "proper_columns",
    "symbol_from_divisors",
    "symbol_divisors",
    "eigenvalue_basic",
    "compact_prime_power",
    "compact_matrix",
    "spectrum",
    "spectrum_numeric_oracle",
]

ExponentIndex = tuple[int, ...]
SymbolSet = frozenset  # frozenset[ExponentIndex]

ORACLE_MAX_ORDER = 4096
ORACLE_TOLERANCE = 1e-6


@dataclass(frozen=True)
class CanonicalSpectrum:
    """Eigenvalue multiset as ascending (value, multiplicity) pairs.

    Equality of two instances is exactly cospectrality of the graphs.
    """

    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        prev = None
        for value, mult in self.pairs:
            if prev is not None and value <= prev:
                raise ValueError("eigenvalues must be strictly ascending")
            if mult < 1:
                raise ValueError("multiplicities must be positive")
            prev = value

    @property
    def order(self) -> int:
        """Total multiplicity (the number of vertices)."""
        return sum(m for _, m in self.pairs)


@dataclass(frozen=True)
class CompactMatrix:
    """Integer matrix over I(N) x I(N) plus per-row residue counts."""

    factorization: PrimeFactorization
    index: tuple[ExponentIndex, ...]
    entries: tuple[tuple[int, ...], ...]
    row_mult: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.index)

    def position(self, label: ExponentIndex) -> int:
        """Offset of a label in the lexicographic index."""
        exps = self.factorization.exponents
        if len(label) != len(exps):
            raise ValueError(f"label {label} has wrong length for {self.factorization}")
        pos = 0
        for m, n in zip(label, exps):
            if not 0 <= m <= n:
                raise ValueError(f"label {label} out of bounds for {self.factorization}")
            pos = pos * (n + 1) + m
        return pos

    def entry(self, row: ExponentIndex, col: ExponentIndex) -> int:
        return self.entries[self.position(row)][self.position(col)]


def index_set(f: PrimeFactorization) -> tuple[ExponentIndex, ...]:
    """I(N) in lexicographic order."""
    return tuple(itertools.product(*(range(e + 1) for e in f.exponents)))


def column_for_divisor(f: PrimeFactorization, d: int) -> ExponentIndex:
    """Column label of divisor d (d = N maps to the all-zero label)."""
    label = []
    for p, n in f.factors:
        m = 0
        while d % p == 0:
            d //= p
            m += 1
        if m > n:
            raise ValueError(f"{d} does not divide {f.n}")
        label.append(n - m)
    if d != 1:
        raise ValueError(f"not a divisor of {f.n}")
    return tuple(label)


def divisor_for_column(f: PrimeFactorization, label: ExponentIndex) -> int:
    """Divisor encoded by a column label."""
    return math.prod(p ** (n - m) for (p, n), m in zip(f.factors, label, strict=True))


def row_for_residue(f: PrimeFactorization, t: int) -> ExponentIndex:
    """Row label of residue t (0 <= t < N): capped p-adic valuations."""
    n_ = f.n
    if not 0 <= t < n_:
        raise ValueError(f"residue {t} out of range for N={n_}")
    label = []
    for p, n in f.factors:
        if t == 0:
            label.append(n)
            continue
        v, rest = 0, t
        while rest % p == 0 and v < n:
            rest //= p
            v += 1
        label.append(v)
    return tuple(label)


def proper_columns(f: PrimeFactorization) -> tuple[tuple[int, ExponentIndex], ...]:
    """(divisor, column label) for every proper divisor, ascending by divisor."""
    return tuple((d, column_for_divisor(f, d)) for d in divisors(f) if d < f.n)


def symbol_from_divisors(f: PrimeFactorization, ds: Iterable[int]) -> SymbolSet:
    """Validate a divisor set and return it as a set of column labels."""
    cols = set()
    for d in ds:
        if d < 1 or f.n % d:
            raise ValueError(f"{d} is not a divisor of {f.n}")
        if d == f.n:
            raise ValueError(f"divisor {d} equals N; symbols use proper divisors only")
        cols.add(column_for_divisor(f, d))
    return frozenset(cols)


def symbol_divisors(f: PrimeFactorization, sym: SymbolSet) -> tuple[int, ...]:
    """Ascending divisors of a symbol set."""
    return tuple(sorted(divisor_for_column(f, c) for c in sym))


def _validate_symbol(f: PrimeFactorization, sym: SymbolSet) -> None:
    exps = f.exponents
    for label in sym:
        if len(label) != len(exps) or any(not 0 <= m <= n for m, n in zip(label, exps)):
            raise ValueError(f"column {label} out of bounds for {f}")
        if not any(label):
            raise ValueError("the all-zero column (divisor N) cannot appear in a symbol")


def eigenvalue_basic(f: PrimeFactorization, d: int, t: int) -> int:
    """Exact eigenvalue of the basic symbol of divisor d at residue t.

    Uses the totient/Moebius closed form with g = gcd(t, N/d); gcd(0, m)
    is m, so t = 0 gives the degree phi(N/d).
    """
    n_ = f.n
    if d < 1 or n_ % d:
        raise ValueError(f"{d} is not a divisor of {n_}")
    if d == n_:
        raise ValueError("d = N does not define a basic symbol")
    m = n_ // d
    k = m // math.gcd(t, m)
    fk = factorize(k)
    return phi(factorize(m)) // phi(fk) * mu(fk)


def compact_prime_power(p: int, n: int) -> CompactMatrix:
    """Compact matrix of a prime power p^n.

    Row g, column b holds: 1 if b = 0; (p-1)p^(b-1) if g >= b >= 1;
    -p^(b-1) if g = b - 1; 0 if b > g + 1.  Row g is shared by
    phi(p^(n-g)) residues.
    """
    f = factorize(p**n)
    if len(f.factors) != 1:
        raise ValueError(f"{p} is not prime")
    rows = []
    for g in range(n + 1):
        row = []
        for b in range(n + 1):
            if b == 0:
                row.append(1)
            elif b <= g:
                row.append((p - 1) * p ** (b - 1))
            elif b == g + 1:
                row.append(-(p ** (b - 1)))
            else:
                row.append(0)
        rows.append(tuple(row))
    mult = tuple(phi(factorize(p ** (n - g))) for g in range(n + 1))
    return CompactMatrix(f, index_set(f), tuple(rows), mult)


@lru_cache(maxsize=1024)
def compact_matrix(f: PrimeFactorization) -> CompactMatrix:
    """Compact matrix of N >= 2: the tensor product of its prime-power blocks."""
    if not f.factors:
        raise ValueError("N = 1 has no compact matrix")
    blocks = [compact_prime_power(p, e) for p, e in f.factors]
    idx = index_set(f)
    entries = tuple(
        tuple(
            math.prod(blk.entries[m][k] for blk, m, k in zip(blocks, row, col))
            for col in idx
        )
        for row in idx
    )
    mult = tuple(
        math.prod(blk.row_mult[m] for blk, m in zip(blocks, row)) for row in idx
    )
    return CompactMatrix(f, idx, entries, mult)


def _merge_rows(values: Iterable[int], mults: Iterable[int]) -> CanonicalSpectrum:
    acc: dict[int, int] = {}
    for v, m in zip(values, mults):
        acc[v] = acc.get(v, 0) + m
    return CanonicalSpectrum(tuple(sorted(acc.items())))


def spectrum(f: PrimeFactorization, sym: SymbolSet) -> CanonicalSpectrum:
    """Exact spectrum of the symbol set: compact row sums expanded by
    row multiplicity and merged by value.  The empty symbol gives {0^N}."""
    _validate_symbol(f, sym)
    if not sym:
        return CanonicalSpectrum(((0, f.n),))
    mat = compact_matrix(f)
    cols = [mat.position(c) for c in sym]
    values = (sum(row[c] for c in cols) for row in mat.entries)
    return _merge_rows(values, mat.row_mult)


@lru_cache(maxsize=2)
def _cosine_table(n: int) -> np.ndarray:
    # t*j stays below 2^53 for n <= 4096, so the angle is exact before cos.
    k = np.arange(n, dtype=np.float64)
    return np.cos(np.outer(k, k) * (2.0 * np.pi / n))


def spectrum_numeric_oracle(f: PrimeFactorization, sym: SymbolSet) -> CanonicalSpectrum:
    """Independent spectrum via root-of-unity summation.

    Builds the explicit symbol (union of gcd classes), sums cosines per
    residue, and rounds.  A rounding residue of 1e-6 * N or more raises,
    signalling numeric failure.  Guarded to N <= 4096.
    """
    n_ = f.n
    if n_ > ORACLE_MAX_ORDER:
        raise ValueError(f"numeric oracle guarded to N <= {ORACLE_MAX_ORDER}, got {n_}")
    _validate_symbol(f, sym)
    ds = {divisor_for_column(f, c) for c in sym}
    members = [k for k in range(1, n_) if math.gcd(k, n_) in ds]
    if not members:
        return CanonicalSpectrum(((0, n_),))
    raw = _cosine_table(n_)[:, members].sum(axis=1)
    rounded = np.rint(raw)
    residue = float(np.abs(raw - rounded).max())
    if residue >= ORACLE_TOLERANCE * n_:
        raise ArithmeticError(f"rounding residue {residue:.3e} exceeds tolerance for N={n_}")
    acc: dict[int, int] = {}
    for v in rounded.astype(np.int64):
        acc[int(v)] = acc.get(int(v), 0) + 1
    return CanonicalSpectrum(tuple(sorted(acc.items())))
