"""Sign-configuration coverage counting over a finite ground set.

The objects: a ground set {1..n}, an ordered collection of *arcs* (subsets
of the ground set, repeats and empties allowed), and a *configuration*
assigning each arc a sign.  A configuration turns the collection into a
signed set: the union of +V_k for kept arcs and -V_k for flipped ones.
A configuration *covers the reflection of* A when every element of A
appears positively and every element of the complement appears
negatively.

``cover_count`` enumerates the configurations achieving this.  The key
inequality, verified here by brute force, is that no reflection target A
admits more covering configurations than A = ground set itself.  These
counts are the combinatorial shadow of path-reflection classes: arcs play
the role of which target points an arc of a walk visits, signs the role
of reflecting that arc.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

MAX_ENUM_ARCS = 30


class LengthMismatchError(ValueError):
    """Configuration length differs from arc count."""


class TooLargeError(ValueError):
    """Instance exceeds the exhaustive-enumeration guard."""


def _mask_of(elements: Iterable[int], n: int) -> int:
    m = 0
    for e in elements:
        if not 1 <= e <= n:
            raise ValueError(f"element {e} outside ground set 1..{n}")
        m |= 1 << (e - 1)
    return m


@dataclass(frozen=True)
class ArcCollection:
    """Ordered arcs over the ground set {1..n}."""

    n: int
    arcs: tuple[frozenset[int], ...]

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("ground set must be nonempty")
        for a in self.arcs:
            _mask_of(a, self.n)

    @property
    def m(self) -> int:
        return len(self.arcs)

    def masks(self) -> tuple[int, ...]:
        return tuple(_mask_of(a, self.n) for a in self.arcs)

    @classmethod
    def of(cls, n: int, *arcs: Iterable[int]) -> "ArcCollection":
        return cls(n, tuple(frozenset(a) for a in arcs))


@dataclass(frozen=True)
class SignedSet:
    """Positive and negative parts of a configuration's signed union."""

    positive: frozenset[int]
    negative: frozenset[int]


def _check_config(V: ArcCollection, signs: Sequence[int]) -> None:
    if len(signs) != V.m:
        raise LengthMismatchError(f"{len(signs)} signs for {V.m} arcs")
    if any(s not in (-1, 1) for s in signs):
        raise ValueError("signs must be +/-1")


def inner_product(V: ArcCollection, signs: Sequence[int]) -> SignedSet:
    """Union of the signed arcs."""
    _check_config(V, signs)
    pos: frozenset[int] = frozenset()
    neg: frozenset[int] = frozenset()
    for a, s in zip(V.arcs, signs):
        if s == 1:
            pos |= a
        else:
            neg |= a
    return SignedSet(pos, neg)


def covers(V: ArcCollection, signs: Sequence[int], A: Iterable[int]) -> bool:
    """True iff A lands in the positive part and its complement in the
    negative part."""
    _check_config(V, signs)
    a_mask = _mask_of(A, V.n)
    pos = neg = 0
    for mask, s in zip(V.masks(), signs):
        if s == 1:
            pos |= mask
        else:
            neg |= mask
    full = (1 << V.n) - 1
    return (a_mask & ~pos) == 0 and ((full ^ a_mask) & ~neg) == 0


def _signed_unions(masks: Sequence[int]) -> list[tuple[int, int]]:
    m = len(masks)
    out = []
    for bits in range(1 << m):
        pos = neg = 0
        for k in range(m):
            if bits >> k & 1:
                neg |= masks[k]
            else:
                pos |= masks[k]
        out.append((pos, neg))
    return out


def cover_count(V: ArcCollection, A: Iterable[int]) -> int:
    """Number of configurations covering the reflection of A, by
    exhaustive enumeration over all 2^m sign choices."""
    if V.m > MAX_ENUM_ARCS:
        raise TooLargeError(f"{V.m} arcs exceeds the enumeration guard {MAX_ENUM_ARCS}")
    a_mask = _mask_of(A, V.n)
    full = (1 << V.n) - 1
    comp = full ^ a_mask
    return sum(1 for pos, neg in _signed_unions(V.masks())
               if (a_mask & ~pos) == 0 and (comp & ~neg) == 0)


def cover_count_split(V: ArcCollection, A: Iterable[int]) -> int:
    """Independent route to the same count: split on the last arc.

    Configurations either already cover using the first m-1 arcs (each
    extends both ways), or the last arc must mop up exactly the uncovered
    remainder with one specific sign.
    """
    if V.m > MAX_ENUM_ARCS:
        raise TooLargeError(f"{V.m} arcs exceeds the enumeration guard {MAX_ENUM_ARCS}")
    a_mask = _mask_of(A, V.n)
    full = (1 << V.n) - 1
    comp = full ^ a_mask

    def rec(masks: tuple[int, ...]) -> int:
        if not masks:
            return 1 if a_mask == 0 and comp == 0 else 0
        head, last = masks[:-1], masks[-1]
        count = 2 * rec(head)
        for pos, neg in _signed_unions(head):
            miss_pos = a_mask & ~pos
            miss_neg = comp & ~neg
            if miss_pos == 0 and miss_neg == 0:
                continue  # already counted, both extensions
            if (miss_pos & ~last) == 0 and miss_neg == 0:
                count += 1  # last arc kept positive finishes the job
            if (miss_neg & ~last) == 0 and miss_pos == 0:
                count += 1  # last arc flipped negative finishes the job
        return count

    return rec(V.masks())


def check_cover_inequality(V: ArcCollection) -> tuple[bool, frozenset[int] | None]:
    """Verify that A = full ground set maximizes ``cover_count`` over all
    A; returns (True, None) or (False, witness) with a violating A.

    No witness should ever be produced: one is a bug detector.
    """
    n = V.n
    if V.m > MAX_ENUM_ARCS or n > MAX_ENUM_ARCS:
        raise TooLargeError("instance exceeds the enumeration guard")
    unions = _signed_unions(V.masks())
    full = (1 << n) - 1
    top = sum(1 for pos, _ in unions if (full & ~pos) == 0)
    for a_mask in range(1 << n):
        comp = full ^ a_mask
        c = sum(1 for pos, neg in unions
                if (a_mask & ~pos) == 0 and (comp & ~neg) == 0)
        if c > top:
            witness = frozenset(e + 1 for e in range(n) if a_mask >> e & 1)
            return False, witness
    return True, None


def all_collections(n: int, m: int):
    """Every arc collection with the given shape (2^(n*m) of them)."""
    subsets = [frozenset(e + 1 for e in range(n) if bits >> e & 1)
               for bits in range(1 << n)]
    import itertools
    for combo in itertools.product(subsets, repeat=m):
        yield ArcCollection(n, combo)
