"""Exact spectral analysis of integral circulant graphs.

An integral circulant graph of order N is determined by a set of proper
divisors of N (its integral symbol).  This package builds the compact
spectral matrix of such graphs with exact integer arithmetic, detects
nontrivial additive relations on totient vectors, checks a family of
sufficient conditions for N to have the integral spectral Adam property
(ISAP: equal spectra force equal symbols), and exhaustively searches for
cospectral symbol pairs at small orders.
"""

__version__ = "0.1.0"

from .numtheory import PrimeFactorization, divisors, factorize, is_prime, mu, phi, primes_in
from .spectra import (
    CanonicalSpectrum,
    CompactMatrix,
    compact_matrix,
    compact_prime_power,
    eigenvalue_basic,
    spectrum,
    spectrum_numeric_oracle,
    symbol_from_divisors,
)
from .nar import (
    AdditiveRelation,
    has_nar,
    has_nar_mod,
    is_super_sequence,
    reduce_relation,
    super_sequence_orderable,
    tensor_multiset,
)
from .isap import (
    CospectralPair,
    IsapVerdict,
    RowMatching,
    brute_force_search,
    classify,
    extract_row_nars,
    phi_vector,
)

__all__ = [
    "__version__",
    "PrimeFactorization",
    "factorize",
    "is_prime",
    "phi",
    "mu",
    "divisors",
    "primes_in",
    "CompactMatrix",
    "CanonicalSpectrum",
    "compact_prime_power",
    "compact_matrix",
    "eigenvalue_basic",
    "spectrum",
    "spectrum_numeric_oracle",
    "symbol_from_divisors",
    "AdditiveRelation",
    "has_nar",
    "has_nar_mod",
    "reduce_relation",
    "is_super_sequence",
    "super_sequence_orderable",
    "tensor_multiset",
    "IsapVerdict",
    "CospectralPair",
    "RowMatching",
    "phi_vector",
    "brute_force_search",
    "classify",
    "extract_row_nars",
]
