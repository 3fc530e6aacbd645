"""Counting relations, orders and equivalences, labeled and up to isomorphism.

Brute force runs over numpy stacks of candidate matrices.  For every class
except ``relation`` the diagonal is fixed by the class (all loops for
reflexive classes, none for strict orders), so only the n(n-1) off-diagonal
cells are enumerated.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from modalcount.errors import ConsistencyError, InputError, LimitError
from modalcount.partitions import IntegerPartition, a_exact, bell, integer_partitions
from modalcount.prng import SplitMix64
from modalcount.relations import (
    CANONICAL_CAP,
    COMPOUND,
    Frame,
    RelationClass,
    canonical_code,
    canonical_codes,
    frame_from_edges,
    has_property,
)

#: Default cap on the number of candidate matrices a brute-force count may scan.
ENUMERATION_BUDGET = 1 << 20

_CHUNK = 1 << 16


class StructureClass(str, enum.Enum):
    RELATION = "relation"
    STRICT_ORDER = "strict-order"
    PARTIAL_ORDER = "partial-order"
    EQUIVALENCE = "equivalence"


_AS_RELATION_CLASS = {
    StructureClass.STRICT_ORDER: RelationClass.STRICT_PARTIAL_ORDER,
    StructureClass.PARTIAL_ORDER: RelationClass.PARTIAL_ORDER,
    StructureClass.EQUIVALENCE: RelationClass.EQUIVALENCE,
}


def matches(f: Frame, c: StructureClass | str) -> bool:
    c = StructureClass(c)
    return c is StructureClass.RELATION or has_property(f, _AS_RELATION_CLASS[c])


@dataclass(frozen=True)
class CensusReport:
    n: int
    cls: StructureClass
    labeled: int | None
    unlabeled: int | None
    method: str


# -- vectorized relation properties -------------------------------------------


def batch_property(mats: np.ndarray, c: RelationClass | str) -> np.ndarray:
    """:func:`has_property` over a stack of (N, n, n) boolean matrices."""
    c = RelationClass(c)
    mats = np.asarray(mats, dtype=bool)
    N, n, _ = mats.shape
    diag = np.diagonal(mats, axis1=1, axis2=2)
    off = ~np.eye(n, dtype=bool)
    t = np.swapaxes(mats, 1, 2)
    if c is RelationClass.REFLEXIVE:
        return diag.all(axis=1)
    if c is RelationClass.ANTIREFLEXIVE:
        return ~diag.any(axis=1)
    if c is RelationClass.SYMMETRIC:
        return (mats == t).all(axis=(1, 2))
    if c is RelationClass.ANTISYMMETRIC:
        return ~(mats & t & off).any(axis=(1, 2))
    if c is RelationClass.TRANSITIVE:
        m8 = mats.astype(np.uint8)
        two_step = np.matmul(m8, m8) > 0
        return ~(two_step & ~mats).any(axis=(1, 2))
    if c is RelationClass.EUCLIDEAN:
        # w R u and w R v force u R v: R^T R must lie inside R
        m8 = mats.astype(np.uint8)
        joined = np.matmul(np.swapaxes(m8, 1, 2), m8) > 0
        return ~(joined & ~mats).any(axis=(1, 2))
    out = np.ones(N, dtype=bool)
    for part in COMPOUND[c]:
        out &= batch_property(mats, part)
    return out


def _free_cells(n: int, c: StructureClass) -> tuple[list[int], bool | None]:
    cells = [u * n + v for u in range(n) for v in range(n)]
    if c is StructureClass.RELATION:
        return cells, None
    loops = c in (StructureClass.PARTIAL_ORDER, StructureClass.EQUIVALENCE)
    return [x for x in cells if x // n != x % n], loops


def candidate_count(n: int, c: StructureClass | str) -> int:
    free, _ = _free_cells(n, StructureClass(c))
    return 1 << len(free)


def labeled_structures(n: int, c: StructureClass | str, budget: int = ENUMERATION_BUDGET) -> np.ndarray:
    """Flattened row-major matrices of every labeled structure of class ``c``.

    Returned in increasing order of the enumeration code; shape (M, n*n).
    """
    c = StructureClass(c)
    if n < 0:
        raise InputError(f"n must be non-negative, got {n}")
    free, loops = _free_cells(n, c)
    total = 1 << len(free)
    if total > budget:
        raise LimitError(f"brute force over {c.value} on n={n} scans {total} candidates, budget is {budget}")
    shifts = np.array([len(free) - 1 - b for b in range(len(free))], dtype=np.uint64)
    keep = []
    for start in range(0, total, _CHUNK):
        codes = np.arange(start, min(start + _CHUNK, total), dtype=np.uint64)
        bits = ((codes[:, None] >> shifts[None, :]) & np.uint64(1)).astype(bool)
        cells = np.zeros((len(codes), n * n), dtype=bool)
        cells[:, free] = bits
        if loops:
            cells[:, [u * n + u for u in range(n)]] = True
        if c is not StructureClass.RELATION:
            ok = batch_property(cells.reshape(-1, n, n), _AS_RELATION_CLASS[c])
            cells = cells[ok]
        keep.append(cells)
    if not keep:
        return np.zeros((0, n * n), dtype=bool)
    return np.concatenate(keep)


def count_labeled(n: int, c: StructureClass | str, budget: int = ENUMERATION_BUDGET) -> int:
    """Labeled structures of class ``c`` on n worlds.

    ``relation`` uses the closed form 2^(n^2); every other class is brute force.
    """
    c = StructureClass(c)
    if c is StructureClass.RELATION:
        return 2 ** (n * n)
    return len(labeled_structures(n, c, budget))


def count_unlabeled(
    n: int,
    c: StructureClass | str,
    budget: int = ENUMERATION_BUDGET,
    cap: int = CANONICAL_CAP,
) -> int:
    """Isomorphism classes of structures of class ``c`` on n worlds.

    Equivalences go through integer partitions (block sizes), checked
    against canonical forms of all labeled equivalences when n <= 5.
    Every other class is brute force plus canonical keys.
    """
    c = StructureClass(c)
    if c is StructureClass.EQUIVALENCE:
        count = len(integer_partitions(n))
        if 1 <= n <= 5:
            brute = unlabeled_codes(n, c, budget, cap)
            via_blocks = {canonical_code(partition_to_frame(lam), cap) for lam in integer_partitions(n)}
            if brute != via_blocks or len(brute) != count:
                raise ConsistencyError(
                    f"equivalences on n={n}: {count} partitions but {len(brute)} canonical classes"
                )
        return count
    return len(unlabeled_codes(n, c, budget, cap))


def unlabeled_codes(
    n: int,
    c: StructureClass | str,
    budget: int = ENUMERATION_BUDGET,
    cap: int = CANONICAL_CAP,
) -> set[int]:
    """Canonical codes of every isomorphism class, by brute force."""
    if n > cap:
        raise LimitError(f"canonical forms need n <= {cap}, got n = {n}")
    cells = labeled_structures(n, c, budget)
    if n == 0:
        return {0} if len(cells) else set()
    return {int(x) for x in np.unique(canonical_codes(n, cells, cap))}


# -- the S5 / partition bijection --------------------------------------------


def partition_to_frame(lam: IntegerPartition | tuple[int, ...] | list[int]) -> Frame:
    """Equivalence frame whose blocks are consecutive index ranges of the part sizes."""
    if not isinstance(lam, IntegerPartition):
        lam = IntegerPartition(tuple(lam))
    if not lam.parts:
        raise InputError("partition must be non-empty")
    edges = []
    start = 0
    for size in lam.parts:
        block = range(start, start + size)
        edges.extend((u, v) for u in block for v in block)
        start += size
    return frame_from_edges(start, edges)


def frame_to_partition(f: Frame) -> IntegerPartition:
    if not has_property(f, RelationClass.EQUIVALENCE):
        raise InputError("frame is not an equivalence relation")
    sizes = sorted({f.rows[u] for u in range(f.n)}, key=lambda row: -row.bit_count())
    return IntegerPartition(tuple(row.bit_count() for row in sizes))


# -- censuses with cross-checks ----------------------------------------------

_PARTNER = {
    StructureClass.STRICT_ORDER: StructureClass.PARTIAL_ORDER,
    StructureClass.PARTIAL_ORDER: StructureClass.STRICT_ORDER,
}


def census(
    n: int,
    c: StructureClass | str,
    labeled: bool = True,
    unlabeled: bool = True,
    both: bool = False,
    budget: int = ENUMERATION_BUDGET,
) -> CensusReport:
    """Count class ``c`` on n worlds, optionally by two independent routes.

    Default routes: relations use the closed form 2^(n^2) and the cycle-index
    formula; equivalences use Bell numbers and integer partitions; orders are
    brute force.  With ``both`` the second route also runs (brute force for
    relations and equivalences, the reflexive closure bijection for orders)
    and any disagreement raises :class:`ConsistencyError`.
    """
    c = StructureClass(c)
    if n < 1:
        raise InputError(f"n must be at least 1, got {n}")
    routes: list[str] = []
    lab = unl = None

    def agree(what, first, second):
        if first != second:
            raise ConsistencyError(f"{what} count of {c.value} on n={n}: {first} != {second}")
        return first

    if c is StructureClass.RELATION:
        routes.append("formula")
        if labeled:
            lab = 2 ** (n * n)
            if both:
                agree("labeled", lab, len(labeled_structures(n, c, budget)))
        if unlabeled:
            unl = a_exact(n)
            if both:
                agree("unlabeled", unl, len(unlabeled_codes(n, c, budget)))
    elif c is StructureClass.EQUIVALENCE:
        routes.append("bijection")
        if labeled:
            lab = bell(n)
            if both:
                agree("labeled", lab, count_labeled(n, c, budget))
        if unlabeled:
            unl = len(integer_partitions(n))
            if both:
                agree("unlabeled", unl, len(unlabeled_codes(n, c, budget)))
    else:
        routes.append("brute-force")
        if labeled:
            lab = count_labeled(n, c, budget)
            if both:
                agree("labeled", lab, count_labeled(n, _PARTNER[c], budget))
        if unlabeled:
            unl = count_unlabeled(n, c, budget)
            if both:
                agree("unlabeled", unl, count_unlabeled(n, _PARTNER[c], budget))
    if both:
        routes.append("bijection" if c in _PARTNER else "brute-force")
    return CensusReport(n, c, lab, unl, "+".join(routes))


# -- sampling ----------------------------------------------------------------


@dataclass(frozen=True)
class SampleEstimate:
    hits: int
    trials: int

    @property
    def ratio(self) -> float:
        return self.hits / self.trials


def exact_s5_probability(n: int) -> Fraction:
    """Share of labeled relations on n worlds that are equivalences."""
    return Fraction(bell(n), 2 ** (n * n))


def draws_per_relation(n: int) -> int:
    return max(1, math.ceil(n * n / 64))


def sample_relation(rng: SplitMix64, n: int) -> Frame:
    """One uniform relation: cell c = u*n + v is bit 63 - (c mod 64) of draw c // 64."""
    words = [rng.next() for _ in range(draws_per_relation(n))]
    edges = [
        (c // n, c % n) for c in range(n * n) if words[c // 64] >> (63 - c % 64) & 1
    ]
    return frame_from_edges(n, edges)


def sample_s5_probability(n: int, trials: int, seed: int, chunk: int = _CHUNK) -> SampleEstimate:
    """Count equivalences among ``trials`` uniform relations drawn with SplitMix64(seed).

    Draws are consumed in trial order exactly as :func:`sample_relation`
    would, so the result depends only on (n, trials, seed).
    """
    if trials < 1:
        raise InputError(f"trials must be at least 1, got {trials}")
    if n < 1:
        raise InputError(f"n must be at least 1, got {n}")
    rng = SplitMix64(seed)
    w = draws_per_relation(n)
    cell_word = np.array([c // 64 for c in range(n * n)])
    cell_shift = np.array([63 - c % 64 for c in range(n * n)], dtype=np.uint64)
    hits = 0
    done = 0
    while done < trials:
        m = min(chunk, trials - done)
        words = rng.block(m * w).reshape(m, w)
        cells = ((words[:, cell_word] >> cell_shift) & np.uint64(1)).astype(bool)
        hits += int(batch_property(cells.reshape(m, n, n), RelationClass.EQUIVALENCE).sum())
        done += m
    return SampleEstimate(hits, trials)
