"""Nontrivial additive relations (NARs) on small vectors of nonnegative integers.

A NAR on a vector v is a pair of distinct index sets with equal sums
(equal values at different indices still count).  Decisions are exact:
reachable subset sums are tracked as a big-integer bitmask, and when a
collision exists a witness is reconstructed by a dictionary DP that keeps
the first subset achieving each sum.  The modular variants track sums in
Z/m, where m = 1 makes every nonempty subset collide with the empty one.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

__all__ = [
    "AdditiveRelation",
    "MAX_VECTOR",
    "MAX_PLAIN_SUM",
    "has_nar",
    "has_nar_mod",
    "reduce_relation",
    "is_super_sequence",
    "super_sequence_orderable",
    "tensor_multiset",
]

MAX_VECTOR = 30
MAX_PLAIN_SUM = 1 << 24
MAX_TENSOR_FACTORS = 4
MAX_TENSOR_SIZE = 10_000


@dataclass(frozen=True)
class AdditiveRelation:
    """Two index sets over a value vector with equal (possibly modular) sums."""

    s1: frozenset[int]
    s2: frozenset[int]

    @property
    def nontrivial(self) -> bool:
        return self.s1 != self.s2

    @property
    def disjoint(self) -> bool:
        """Disjoint NAR: both sides nonempty and sharing no index."""
        return bool(self.s1) and bool(self.s2) and not (self.s1 & self.s2)

    def balanced(self, values: Sequence[int], modulus: int | None = None) -> bool:
        left = sum(values[i] for i in self.s1)
        right = sum(values[i] for i in self.s2)
        if modulus is None:
            return left == right
        return (left - right) % modulus == 0

    def render(self, values: Sequence[int]) -> str:
        def side(s: frozenset[int]) -> str:
            if not s:
                return "0"
            return " + ".join(str(values[i]) for i in sorted(s))

        return f"{side(self.s1)} = {side(self.s2)}"


def _validated(values: Sequence[int]) -> list[int]:
    vals = list(values)
    if len(vals) > MAX_VECTOR:
        raise ValueError(f"vector length {len(vals)} exceeds guard {MAX_VECTOR}")
    for v in vals:
        if not isinstance(v, int) or v < 0:
            raise ValueError(f"values must be nonnegative integers, got {v!r}")
    return vals


def _collision_exists(vals: list[int], modulus: int | None) -> bool:
    # Reachable sums as a bitmask; a step collides iff the shifted (or
    # rotated, in the modular case) mask intersects the current one.
    if modulus is None:
        mask = 1
        for v in vals:
            shifted = mask << v
            if shifted & mask:
                return True
            mask |= shifted
        return False
    full = (1 << modulus) - 1
    mask = 1
    for v in vals:
        r = v % modulus
        rotated = ((mask << r) | (mask >> (modulus - r))) & full if r else mask
        if rotated & mask:
            return True
        mask |= rotated
    return False


def _first_collision(vals: list[int], modulus: int | None) -> AdditiveRelation:
    # Dictionary DP retaining the first subset per sum; the collision is
    # always between a subset containing the current index and an earlier
    # one that does not, so the two sides differ as index sets.
    seen: dict[int, tuple[int, ...]] = {0: ()}
    for i, v in enumerate(vals):
        for s, witness in list(seen.items()):
            ns = s + v if modulus is None else (s + v) % modulus
            prior = seen.get(ns)
            if prior is not None:
                return AdditiveRelation(frozenset(prior), frozenset(witness) | {i})
            seen[ns] = witness + (i,)
    raise AssertionError("no collision found; caller must check existence first")


def has_nar(values: Sequence[int]) -> AdditiveRelation | None:
    """First NAR on the vector in DP order, or None if subset sums are distinct.

    Exact for vectors of length <= 30 with total sum <= 2^24.
    """
    vals = _validated(values)
    if sum(vals) >= MAX_PLAIN_SUM:
        raise ValueError(f"vector sum exceeds guard {MAX_PLAIN_SUM}")
    if not _collision_exists(vals, None):
        return None
    return _first_collision(vals, None)


def has_nar_mod(values: Sequence[int], modulus: int) -> AdditiveRelation | None:
    """Like has_nar but with sums compared modulo the given modulus (>= 1)."""
    if modulus < 1:
        raise ValueError(f"modulus must be >= 1, got {modulus}")
    vals = _validated(values)
    if not _collision_exists(vals, modulus):
        return None
    return _first_collision(vals, modulus)


def reduce_relation(rel: AdditiveRelation) -> AdditiveRelation:
    """Strip the shared indices, turning a NAR into its disjoint form."""
    if not rel.nontrivial:
        raise ValueError("trivial relation cannot be reduced")
    return AdditiveRelation(rel.s1 - rel.s2, rel.s2 - rel.s1)


def is_super_sequence(values: Sequence[int]) -> bool:
    """True iff each term exceeds the sum of all the preceding ones.

    Such sequences are strictly increasing and positive, and admit no NAR.
    Duplicates (or any non-positive entry) fail.
    """
    total = 0
    for v in values:
        if v <= total:
            return False
        total += v
    return True


def super_sequence_orderable(values: Iterable[int]) -> bool:
    """True iff the multiset arranged ascending is a super sequence."""
    return is_super_sequence(sorted(values))


def tensor_multiset(lists: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """All k-wise products, one element per list, multiplicity-aware.

    Ordered by list position (itertools.product order); guards: at most
    4 factors, at most 10^4 products.
    """
    if len(lists) > MAX_TENSOR_FACTORS:
        raise ValueError(f"at most {MAX_TENSOR_FACTORS} factors, got {len(lists)}")
    size = 1
    for lst in lists:
        size *= len(lst)
    if size > MAX_TENSOR_SIZE:
        raise ValueError(f"tensor size {size} exceeds guard {MAX_TENSOR_SIZE}")
    out = [1]
    for lst in lists:
        out = [a * b for a in out for b in lst]
    return tuple(out)
