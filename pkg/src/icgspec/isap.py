"""ISAP verdicts: sufficient-condition checkers and exhaustive search.

An order N has the integral spectral Adam property (ISAP) when distinct
divisor symbols always produce distinct spectra.  This module decides
desk-scale cases three ways:

* literature shapes (prime powers, p*q^k with p < q, and p*q*r) are
  accepted as established results;
* sufficient conditions on the totient vector of N -- absence of certain
  plain or modular additive relations -- prove the property outright;
* otherwise all 2^(tau(N)-1) symbol sets are enumerated and grouped by
  canonical spectrum, which either certifies the count or produces an
  explicit cospectral pair.

A hypothetical cospectral pair can also be decomposed into the row
relations it would force on the totient weights (extract_row_nars).
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Sequence

from .nar import (
    AdditiveRelation,
    has_nar,
    has_nar_mod,
    is_super_sequence,
    tensor_multiset,
)
from .numtheory import PrimeFactorization, phi, factorize
from .spectra import (
    CanonicalSpectrum,
    ExponentIndex,
    SymbolSet,
    compact_matrix,
    index_set,
    proper_columns,
    spectrum,
)

__all__ = [
    "DEFAULT_CAP",
    "STATUS_PROVEN",
    "STATUS_BRUTE",
    "STATUS_COUNTEREXAMPLE",
    "STATUS_UNKNOWN",
    "CheckerReport",
    "CospectralPair",
    "IsapVerdict",
    "RowRelation",
    "RowMatching",
    "phi_vector",
    "brute_force_search",
    "check_general_nar",
    "check_general_cos",
    "check_pkqk",
    "check_p2qn",
    "check_p2q2",
    "check_far_apart",
    "classify",
    "extract_row_nars",
    "match_rows",
    "row_combination",
    "verify_fixed_row",
]

DEFAULT_CAP = 24

STATUS_PROVEN = "ISAP-proven"
STATUS_BRUTE = "ISAP-brute-verified"
STATUS_COUNTEREXAMPLE = "counterexample"
STATUS_UNKNOWN = "unknown"


@dataclass(frozen=True)
class CheckerReport:
    """Outcome of one sufficient-condition checker."""

    method: str
    applies: bool
    trace: tuple[str, ...]


@dataclass(frozen=True)
class CospectralPair:
    """Two distinct symbol sets sharing a spectrum."""

    a: SymbolSet
    b: SymbolSet
    shared_spectrum: CanonicalSpectrum


@dataclass(frozen=True)
class IsapVerdict:
    n: int
    status: str
    method: str
    evidence: str
    distinct_spectra: int | None = None
    counterexample: CospectralPair | None = None

    @property
    def established(self) -> bool:
        return self.status in (STATUS_PROVEN, STATUS_BRUTE)


def phi_vector(f: PrimeFactorization) -> tuple[int, ...]:
    """Totient of prod p_i^(m_i) for every index of I(N), lexicographic.

    Entries sum to N; the all-zero index carries 1.  Reversing every index
    coordinate turns this into the row-multiplicity vector.
    """
    if not f.factors:
        raise ValueError("totient vector needs N >= 2")
    return tuple(
        math.prod(p ** (m - 1) * (p - 1) if m else 1 for (p, _), m in zip(f.factors, label))
        for label in index_set(f)
    )


def _totient_list(p: int, n: int) -> list[int]:
    # phi over the divisor tower of p^n: 1, p-1, (p-1)p, ..., (p-1)p^(n-1)
    return [1] + [(p - 1) * p**k for k in range(n)]


def _power_list(p: int, n: int) -> list[int]:
    return [p**k for k in range(n)]


def _relation_note(values: Sequence[int], rel: AdditiveRelation | None) -> str:
    return "none" if rel is None else rel.render(values)


def check_general_nar(f: PrimeFactorization) -> CheckerReport:
    """No relation on the whole totient vector, via two modular conditions.

    (1) For every prime p_i: the tensor of the other primes' totient
        towers admits no relation mod (p_i - 1).
    (2) For some prime p_i: the tensor of the other primes' power towers
        admits no relation mod p_i.
    Together these rule out any relation on the totient vector, which
    proves the ISAP.
    """
    if len(f.factors) < 2:
        raise ValueError("needs at least two prime factors")
    trace: list[str] = []
    cond1 = True
    for i, (pi, _) in enumerate(f.factors):
        lists = [_totient_list(p, n) for j, (p, n) in enumerate(f.factors) if j != i]
        try:
            values = tensor_multiset(lists)
            rel = has_nar_mod(values, pi - 1)
        except ValueError as exc:
            trace.append(f"cond1 p={pi}: undecided ({exc})")
            cond1 = False
            continue
        trace.append(f"cond1 p={pi}: mod {pi - 1} on {values}: {_relation_note(values, rel)}")
        if rel is not None:
            cond1 = False
    cond2 = False
    for i, (pi, _) in enumerate(f.factors):
        lists = [_power_list(p, n) for j, (p, n) in enumerate(f.factors) if j != i]
        try:
            values = tensor_multiset(lists)
            rel = has_nar_mod(values, pi)
        except ValueError as exc:
            trace.append(f"cond2 p={pi}: undecided ({exc})")
            continue
        trace.append(f"cond2 p={pi}: mod {pi} on {values}: {_relation_note(values, rel)}")
        if rel is None:
            cond2 = True
            break
    return CheckerReport("theorem:general-nar", cond1 and cond2, tuple(trace))


def check_general_cos(f: PrimeFactorization) -> CheckerReport:
    """Fix one prime's rows, then rule out the induced column relations.

    Applies when for some prime p_i both hold: the totient tower of p_i
    has no relation mod gcd(p_j - 1, j != i), and the tensor of the other
    primes' totient towers has no plain relation.  Proves the ISAP even
    when the full totient vector does admit relations.
    """
    if len(f.factors) < 2:
        raise ValueError("needs at least two prime factors")
    trace: list[str] = []
    applies = False
    for i, (pi, ni) in enumerate(f.factors):
        g = math.gcd(*(p - 1 for j, (p, _) in enumerate(f.factors) if j != i))
        tower = _totient_list(pi, ni)
        try:
            rel1 = has_nar_mod(tower, g)
        except ValueError as exc:
            trace.append(f"i p={pi}: undecided ({exc})")
            continue
        trace.append(f"i p={pi}: mod {g} on {tower}: {_relation_note(tower, rel1)}")
        if rel1 is not None:
            continue
        lists = [_totient_list(p, n) for j, (p, n) in enumerate(f.factors) if j != i]
        try:
            values = tensor_multiset(lists)
            rel2 = has_nar(values)
        except ValueError as exc:
            trace.append(f"i p={pi}: undecided ({exc})")
            continue
        trace.append(f"i p={pi}: plain on {values}: {_relation_note(values, rel2)}")
        if rel2 is None:
            applies = True
            break
    return CheckerReport("theorem:general-cos", applies, tuple(trace))


def check_pkqk(f: PrimeFactorization) -> CheckerReport:
    """Two-prime shortcut: totient tower of the smaller prime mod (q - 1)."""
    if len(f.factors) != 2:
        raise ValueError("shape p^k q^k needs exactly two prime factors")
    (p, n1), (q, _) = f.factors
    tower = _totient_list(p, n1)
    rel = has_nar_mod(tower, q - 1)
    trace = (f"mod {q - 1} on {tower}: {_relation_note(tower, rel)}",)
    return CheckerReport("theorem:pkqk", rel is None, trace)


def check_p2qn(f: PrimeFactorization) -> CheckerReport:
    """Shape p^2 q^n with p, q odd: applies when (q-1) does not divide
    (p-1)^2 (p+1)."""
    if len(f.factors) != 2 or 2 not in f.exponents:
        raise ValueError("shape p^2 q^n needs two primes, one with exponent 2")
    orientations = []
    (p1, n1), (p2, n2) = f.factors
    if n1 == 2:
        orientations.append((p1, p2, n2))
    if n2 == 2 and (p2, p1, n1) not in orientations:
        orientations.append((p2, p1, n1))
    trace: list[str] = []
    applies = False
    for p, q, _ in orientations:
        if p % 2 == 0 or q % 2 == 0:
            trace.append(f"p={p} q={q}: needs both primes odd")
            continue
        bound = (p - 1) ** 2 * (p + 1)
        divides = bound % (q - 1) == 0
        trace.append(
            f"p={p} q={q}: (q-1)={q - 1} {'divides' if divides else 'does not divide'} "
            f"(p-1)^2(p+1)={bound}"
        )
        if not divides:
            applies = True
            break
    return CheckerReport("theorem:p2qn", applies, tuple(trace))


def check_p2q2(f: PrimeFactorization) -> CheckerReport:
    """Shape p^2 q^2: unconditional."""
    if len(f.factors) != 2 or f.exponents != (2, 2):
        raise ValueError("shape p^2 q^2 needs two primes, both with exponent 2")
    return CheckerReport("theorem:p2q2", True, ("unconditional for shape p^2 q^2",))


def check_far_apart(f: PrimeFactorization) -> CheckerReport:
    """Direct certificate: the sorted totient vector is a super sequence."""
    if not f.factors:
        raise ValueError("needs N >= 2")
    vals = sorted(phi_vector(f))
    ok = is_super_sequence(vals)
    note = "is" if ok else "is not"
    return CheckerReport(
        "certificate:far-apart", ok, (f"sorted totient vector {tuple(vals)} {note} a super sequence",)
    )


def _spectrum_key(
    colvecs: Sequence[Sequence[int]], mults: Sequence[int], mask: int
) -> tuple[tuple[int, int], ...]:
    nrows = len(mults)
    sums = [0] * nrows
    m, j = mask, 0
    while m:
        if m & 1:
            col = colvecs[j]
            for r in range(nrows):
                sums[r] += col[r]
        m >>= 1
        j += 1
    acc: dict[int, int] = {}
    for v, w in zip(sums, mults):
        acc[v] = acc.get(v, 0) + w
    return tuple(sorted(acc.items()))


def _scan_mask_range(
    colvecs: tuple[tuple[int, ...], ...],
    mults: tuple[int, ...],
    start: int,
    stop: int,
) -> dict[tuple[tuple[int, int], ...], tuple[int, int, int]]:
    # Per spectrum key: (count, smallest mask, second-smallest mask or -1).
    # Masks are enumerated ascending, so the first two hits are smallest.
    groups: dict[tuple[tuple[int, int], ...], tuple[int, int, int]] = {}
    for mask in range(start, stop):
        key = _spectrum_key(colvecs, mults, mask)
        rec = groups.get(key)
        if rec is None:
            groups[key] = (1, mask, -1)
        elif rec[0] == 1:
            groups[key] = (2, rec[1], mask)
        else:
            groups[key] = (rec[0] + 1, rec[1], rec[2])
    return groups


def _merge_groups(parts):
    out: dict = {}
    for part in parts:
        for key, (c, m0, m1) in part.items():
            rec = out.get(key)
            if rec is None:
                out[key] = (c, m0, m1)
            else:
                masks = sorted(x for x in (rec[1], rec[2], m0, m1) if x >= 0)[:2]
                masks += [-1] * (2 - len(masks))
                out[key] = (rec[0] + c, masks[0], masks[1])
    return out


def brute_force_search(
    f: PrimeFactorization, cap: int | None = None, jobs: int = 1
) -> IsapVerdict:
    """Enumerate all 2^(tau-1) symbol sets and group them by spectrum.

    Returns the distinct-spectra count, or the colliding pair with the
    lexicographically smallest bitmasks (bit j of a mask selects the
    j-th smallest proper divisor).  Work is split into contiguous mask
    ranges across processes; merging preserves the deterministic pair.
    """
    n_ = f.n
    if n_ < 2:
        raise ValueError("search needs N >= 2")
    cap = DEFAULT_CAP if cap is None else cap
    k = f.tau - 1
    if k > cap:
        return IsapVerdict(
            n_, STATUS_UNKNOWN, "brute-force", f"2^{k} symbol sets exceed cap 2^{cap}"
        )
    mat = compact_matrix(f)
    cols = proper_columns(f)
    colvecs = tuple(
        tuple(mat.entries[r][mat.position(label)] for r in range(mat.size))
        for _, label in cols
    )
    total = 1 << k
    jobs = max(1, jobs)
    if jobs > 1 and total >= 4096:
        bounds = [i * total // jobs for i in range(jobs + 1)]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(
                pool.map(
                    _scan_mask_range,
                    [colvecs] * jobs,
                    [mat.row_mult] * jobs,
                    bounds[:-1],
                    bounds[1:],
                )
            )
        groups = _merge_groups(parts)
    else:
        groups = _scan_mask_range(colvecs, mat.row_mult, 0, total)

    distinct = len(groups)
    colliding = [(m0, m1) for c, m0, m1 in groups.values() if c >= 2]
    if not colliding:
        return IsapVerdict(
            n_,
            STATUS_BRUTE,
            "brute-force",
            f"{distinct} distinct spectra over 2^{k} symbol sets",
            distinct_spectra=distinct,
        )
    m0, m1 = min(colliding)
    sym_a = frozenset(cols[j][1] for j in range(k) if m0 >> j & 1)
    sym_b = frozenset(cols[j][1] for j in range(k) if m1 >> j & 1)
    spec_a = spectrum(f, sym_a)
    if spec_a != spectrum(f, sym_b):  # full confirmation, never trust the key alone
        raise AssertionError("grouping produced a false collision")
    pair = CospectralPair(sym_a, sym_b, spec_a)
    div_a = tuple(sorted(cols[j][0] for j in range(k) if m0 >> j & 1))
    div_b = tuple(sorted(cols[j][0] for j in range(k) if m1 >> j & 1))
    return IsapVerdict(
        n_,
        STATUS_COUNTEREXAMPLE,
        "brute-force",
        f"divisor sets {div_a} and {div_b} share a spectrum",
        distinct_spectra=distinct,
        counterexample=pair,
    )


def _literature_method(f: PrimeFactorization) -> str | None:
    exps = f.exponents
    if len(exps) == 1:
        return "literature:p^k"
    if len(exps) == 2 and exps[0] == 1:
        return "literature:pq^k"
    if len(exps) == 3 and exps == (1, 1, 1):
        return "literature:pqr"
    return None


def classify(f: PrimeFactorization, cap: int | None = None, jobs: int = 1) -> IsapVerdict:
    """Dispatch: literature shapes, then sufficient conditions in fixed
    order, then brute force under the cap, else unknown."""
    n_ = f.n
    if n_ < 2:
        raise ValueError("classification needs N >= 2")
    method = _literature_method(f)
    if method is not None:
        return IsapVerdict(
            n_, STATUS_PROVEN, method, "established shape from the literature"
        )
    checkers = [check_far_apart, check_general_nar, check_general_cos]
    if len(f.factors) == 2:
        checkers.append(check_pkqk)
        if 2 in f.exponents:
            checkers.append(check_p2qn)
        if f.exponents == (2, 2):
            checkers.append(check_p2q2)
    for checker in checkers:
        report = checker(f)
        if report.applies:
            return IsapVerdict(n_, STATUS_PROVEN, report.method, "; ".join(report.trace))
    return brute_force_search(f, cap=cap, jobs=jobs)


@dataclass(frozen=True)
class RowRelation:
    """One induced relation on row weights; all matched rows share `value`."""

    relation: AdditiveRelation  # positions into the row ordering
    value: int


@dataclass(frozen=True)
class RowMatching:
    """Decomposition of a (possibly synthetic) cospectral pair by rows."""

    index: tuple[ExponentIndex, ...]
    weights: tuple[int, ...]
    values_a: tuple[int, ...]
    values_b: tuple[int, ...]
    fixed_rows: frozenset[int]
    relations: tuple[RowRelation, ...]

    @property
    def fixed_labels(self) -> tuple[ExponentIndex, ...]:
        return tuple(self.index[i] for i in sorted(self.fixed_rows))


def match_rows(
    index: Sequence[ExponentIndex],
    weights: Sequence[int],
    values_a: Sequence[int],
    values_b: Sequence[int],
) -> RowMatching:
    """Fix rows with equal values on both sides, then transport the
    remaining weight within each value class in position order.

    The two value vectors must agree as weight-multisets (that is exactly
    spectral equality in compact form).  Each connected component of the
    transport graph becomes one disjoint relation on the row weights.
    """
    if not len(index) == len(weights) == len(values_a) == len(values_b):
        raise ValueError("index, weights and value vectors must have equal length")
    totals_a: dict[int, int] = {}
    totals_b: dict[int, int] = {}
    for w, va, vb in zip(weights, values_a, values_b):
        totals_a[va] = totals_a.get(va, 0) + w
        totals_b[vb] = totals_b.get(vb, 0) + w
    if totals_a != totals_b:
        raise ValueError("vectors are not cospectral: weight multisets differ")

    fixed = frozenset(i for i, (va, vb) in enumerate(zip(values_a, values_b)) if va == vb)
    classes: dict[int, tuple[list[int], list[int]]] = {}
    for i in range(len(index)):
        if i in fixed:
            continue
        classes.setdefault(values_a[i], ([], []))[0].append(i)
        classes.setdefault(values_b[i], ([], []))[1].append(i)

    relations: list[RowRelation] = []
    for value in sorted(classes):
        lefts, rights = classes[value]
        edges: list[tuple[int, int]] = []
        li = ri = 0
        need_l = weights[lefts[0]] if lefts else 0
        need_r = weights[rights[0]] if rights else 0
        while li < len(lefts) and ri < len(rights):
            edges.append((lefts[li], rights[ri]))
            take = min(need_l, need_r)
            need_l -= take
            need_r -= take
            if need_l == 0:
                li += 1
                need_l = weights[lefts[li]] if li < len(lefts) else 0
            if need_r == 0:
                ri += 1
                need_r = weights[rights[ri]] if ri < len(rights) else 0
        # components of the bipartite transport graph
        adj: dict[tuple[str, int], set[tuple[str, int]]] = {}
        for l, r in edges:
            adj.setdefault(("L", l), set()).add(("R", r))
            adj.setdefault(("R", r), set()).add(("L", l))
        seen: set[tuple[str, int]] = set()
        for start in sorted(adj):
            if start in seen:
                continue
            stack, comp = [start], set()
            while stack:
                node = stack.pop()
                if node in comp:
                    continue
                comp.add(node)
                stack.extend(adj[node] - comp)
            seen |= comp
            s1 = frozenset(i for side, i in comp if side == "L")
            s2 = frozenset(i for side, i in comp if side == "R")
            relations.append(RowRelation(AdditiveRelation(s1, s2), value))

    return RowMatching(
        tuple(index),
        tuple(weights),
        tuple(values_a),
        tuple(values_b),
        fixed,
        tuple(relations),
    )


def extract_row_nars(f: PrimeFactorization, a: SymbolSet, b: SymbolSet) -> RowMatching:
    """Row relations a genuine cospectral pair (a, b) would induce.

    Rejects symbol pairs whose spectra differ.  match_rows accepts
    synthetic compact value vectors directly.
    """
    mat = compact_matrix(f)
    va = _column_sums(mat, a)
    vb = _column_sums(mat, b)
    return match_rows(mat.index, mat.row_mult, va, vb)


def _column_sums(mat, sym: SymbolSet) -> tuple[int, ...]:
    cols = [mat.position(c) for c in sym]
    return tuple(sum(row[c] for c in cols) for row in mat.entries)


def row_combination(
    f: PrimeFactorization, rows: Sequence[tuple[ExponentIndex, int]]
) -> dict[ExponentIndex, int]:
    """Integer linear combination of compact rows, per column label."""
    mat = compact_matrix(f)
    positions = [(mat.position(label), coeff) for label, coeff in rows]
    return {
        col: sum(coeff * mat.entries[r][mat.position(col)] for r, coeff in positions)
        for col in mat.index
    }


def verify_fixed_row(
    f: PrimeFactorization,
    a: SymbolSet,
    b: SymbolSet,
    rows: Sequence[tuple[ExponentIndex, int]],
) -> bool:
    """Whether the row combination sums equally over the two symbol sets.

    For rows that stay fixed under a connecting permutation this must
    hold; it is the balance the induced column relations assert.
    """
    delta = row_combination(f, rows)
    return sum(delta[c] for c in a) == sum(delta[c] for c in b)
