"""Finite binary relations (Kripke frames) on worlds ``0..n-1``.

A :class:`Frame` stores its relation as one bitmask per world: bit ``v`` of
``rows[u]`` is set iff ``u R v``.  That is the same n x n boolean matrix the
rest of the package talks about, just packed.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

import numpy as np

from modalcount.errors import InputError, LimitError

#: Largest world count :func:`canonical_key` accepts by default (cost n! * n^2).
CANONICAL_CAP = 8


class RelationClass(str, enum.Enum):
    REFLEXIVE = "reflexive"
    ANTIREFLEXIVE = "antireflexive"
    SYMMETRIC = "symmetric"
    ANTISYMMETRIC = "antisymmetric"
    TRANSITIVE = "transitive"
    EUCLIDEAN = "euclidean"
    EQUIVALENCE = "equivalence"
    STRICT_PARTIAL_ORDER = "strict-partial-order"
    PARTIAL_ORDER = "partial-order"


COMPOUND = {
    RelationClass.EQUIVALENCE: (
        RelationClass.REFLEXIVE,
        RelationClass.SYMMETRIC,
        RelationClass.TRANSITIVE,
    ),
    RelationClass.STRICT_PARTIAL_ORDER: (
        RelationClass.ANTIREFLEXIVE,
        RelationClass.ANTISYMMETRIC,
        RelationClass.TRANSITIVE,
    ),
    RelationClass.PARTIAL_ORDER: (
        RelationClass.REFLEXIVE,
        RelationClass.ANTISYMMETRIC,
        RelationClass.TRANSITIVE,
    ),
}


@dataclass(frozen=True)
class Frame:
    n: int
    rows: tuple[int, ...]

    def __post_init__(self):
        if self.n < 0:
            raise InputError(f"world count must be non-negative, got {self.n}")
        if len(self.rows) != self.n:
            raise InputError(f"expected {self.n} rows, got {len(self.rows)}")
        full = (1 << self.n) - 1
        for u, row in enumerate(self.rows):
            if row < 0 or row & ~full:
                raise InputError(f"row {u} references a world outside [0, {self.n})")

    def holds(self, u: int, v: int) -> bool:
        return bool(self.rows[u] >> v & 1)

    @property
    def rel(self) -> tuple[tuple[bool, ...], ...]:
        return tuple(tuple(self.holds(u, v) for v in range(self.n)) for u in range(self.n))

    def successors(self, u: int) -> list[int]:
        row = self.rows[u]
        return [v for v in range(self.n) if row >> v & 1]

    def edges(self) -> list[tuple[int, int]]:
        """All pairs ``(u, v)`` with ``u R v`` in lexicographic order."""
        return [(u, v) for u in range(self.n) for v in self.successors(u)]

    def predecessors_mask(self, v: int) -> int:
        return sum(1 << u for u in range(self.n) if self.rows[u] >> v & 1)

    @property
    def code(self) -> int:
        """Row-major matrix bits read as a binary numeral, cell (0, 0) most significant."""
        n2 = self.n * self.n
        out = 0
        for u, v in self.edges():
            out |= 1 << (n2 - 1 - (u * self.n + v))
        return out

    @classmethod
    def from_code(cls, n: int, code: int) -> Frame:
        n2 = n * n
        if code < 0 or code >> n2:
            raise InputError(f"code {code} does not fit an {n}x{n} matrix")
        rows = []
        for u in range(n):
            row = 0
            for v in range(n):
                if code >> (n2 - 1 - (u * n + v)) & 1:
                    row |= 1 << v
            rows.append(row)
        return cls(n, tuple(rows))

    def to_json(self) -> dict:
        return {"worlds": self.n, "edges": [[u, v] for u, v in self.edges()]}

    @classmethod
    def from_json(cls, doc) -> Frame:
        if not isinstance(doc, dict) or "worlds" not in doc:
            raise InputError('frame JSON needs a "worlds" field')
        n = doc["worlds"]
        edges = doc.get("edges", [])
        if not isinstance(n, int) or isinstance(n, bool):
            raise InputError('"worlds" must be an integer')
        try:
            pairs = [(int(u), int(v)) for u, v in edges]
        except (TypeError, ValueError):
            raise InputError('"edges" must be a list of [u, v] pairs') from None
        return frame_from_edges(n, pairs)


def frame_from_edges(n: int, edges: Iterable[tuple[int, int]]) -> Frame:
    if n < 0:
        raise InputError(f"world count must be non-negative, got {n}")
    rows = [0] * n
    for u, v in edges:
        if not (0 <= u < n and 0 <= v < n):
            raise InputError(f"edge ({u}, {v}) out of range for {n} worlds")
        rows[u] |= 1 << v
    return Frame(n, tuple(rows))


def identity(n: int) -> Frame:
    return Frame(n, tuple(1 << u for u in range(n)))


def complete(n: int) -> Frame:
    return Frame(n, ((1 << n) - 1,) * n)


def all_frames(n: int) -> Iterable[Frame]:
    """Every relation on n worlds, in increasing :attr:`Frame.code` order."""
    for code in range(1 << (n * n)):
        yield Frame.from_code(n, code)


def has_property(f: Frame, c: RelationClass | str) -> bool:
    c = RelationClass(c)
    if c in COMPOUND:
        return all(has_property(f, part) for part in COMPOUND[c])
    worlds = range(f.n)
    R = f.holds
    if c is RelationClass.REFLEXIVE:
        return all(R(u, u) for u in worlds)
    if c is RelationClass.ANTIREFLEXIVE:
        return not any(R(u, u) for u in worlds)
    if c is RelationClass.SYMMETRIC:
        return all(R(u, v) == R(v, u) for u in worlds for v in worlds)
    if c is RelationClass.ANTISYMMETRIC:
        return not any(R(u, v) and R(v, u) for u in worlds for v in worlds if u != v)
    if c is RelationClass.TRANSITIVE:
        for u in worlds:
            for v in worlds:
                for w in worlds:
                    if R(u, v) and R(v, w) and not R(u, w):
                        return False
        return True
    if c is RelationClass.EUCLIDEAN:
        for w in worlds:
            for u in worlds:
                for v in worlds:
                    if R(w, u) and R(w, v) and not R(u, v):
                        return False
        return True
    raise AssertionError(c)


def compose(f: Frame, g: Frame) -> Frame:
    """``u (f;g) w`` iff some v has ``u f v`` and ``v g w``."""
    if f.n != g.n:
        raise InputError("cannot compose frames of different sizes")
    rows = []
    for u in range(f.n):
        row = 0
        for v in f.successors(u):
            row |= g.rows[v]
        rows.append(row)
    return Frame(f.n, tuple(rows))


def relation_power(f: Frame, m: int) -> Frame:
    if m < 0:
        raise InputError(f"relation power must be non-negative, got {m}")
    out = identity(f.n)
    for _ in range(m):
        out = compose(out, f)
    return out


def transitive_closure(f: Frame) -> Frame:
    rows = list(f.rows)
    for k in range(f.n):
        bit = 1 << k
        krow = rows[k]
        for u in range(f.n):
            if rows[u] & bit:
                rows[u] |= krow
    return Frame(f.n, tuple(rows))


# -- canonical forms ---------------------------------------------------------


def _perm_gather(n: int) -> np.ndarray:
    # row p, column c: flat index of the cell that lands on cell c under permutation p
    return _cached_gather(n) if n <= 8 else _build_gather(n)


@lru_cache(maxsize=None)
def _cached_gather(n: int) -> np.ndarray:
    return _build_gather(n)


def _build_gather(n: int) -> np.ndarray:
    perms = np.array(list(itertools.permutations(range(n))), dtype=np.int32).reshape(-1, n)
    a = np.repeat(np.arange(n), n)
    b = np.tile(np.arange(n), n)
    return perms[:, a] * n + perms[:, b]


@lru_cache(maxsize=None)
def _weights(n: int) -> np.ndarray:
    n2 = n * n
    return np.array([1 << (n2 - 1 - c) for c in range(n2)], dtype=np.uint64)


def _check_cap(n: int, cap: int) -> None:
    if n > cap:
        raise LimitError(f"canonical form needs n <= {cap} (n! relabelings), got n = {n}")


def canonical_key(f: Frame, cap: int = CANONICAL_CAP) -> bytes:
    """Byte key equal for two frames exactly when they are isomorphic.

    The first byte is the world count; the rest is the lexicographically
    least row-major bit matrix over all n! relabelings, packed MSB first and
    zero-padded to a whole byte.
    """
    _check_cap(f.n, cap)
    if f.n == 0:
        return bytes([0])
    flat = np.array([cell for row in f.rel for cell in row], dtype=bool)
    packed = np.packbits(flat[_perm_gather(f.n)], axis=1)
    best = packed[np.lexsort(packed.T[::-1])[0]]
    return bytes([f.n]) + best.tobytes()


def canonical_code(f: Frame, cap: int = CANONICAL_CAP) -> int:
    """Minimum of :attr:`Frame.code` over all relabelings of the worlds."""
    key = canonical_key(f, cap)
    pad = (len(key) - 1) * 8 - f.n * f.n
    return int.from_bytes(key[1:], "big") >> pad


def canonical_codes(n: int, cells: np.ndarray, cap: int = CANONICAL_CAP) -> np.ndarray:
    """Vectorized :func:`canonical_code` for a stack of flattened matrices.

    ``cells`` has shape (N, n*n), dtype bool, row-major.  Codes are uint64,
    so n is limited to 8 here whatever the cap.
    """
    _check_cap(n, min(cap, 8))
    cells = np.asarray(cells, dtype=bool).reshape(-1, n * n)
    w = _weights(n)
    best = None
    for gather in _perm_gather(n):
        codes = cells[:, gather].astype(np.uint64) @ w
        best = codes if best is None else np.minimum(best, codes)
    if best is None:
        return np.zeros(len(cells), dtype=np.uint64)
    return best


def codes_to_cells(n: int, codes: np.ndarray) -> np.ndarray:
    """Inverse of the row-major code encoding, for a vector of codes."""
    codes = np.asarray(codes, dtype=np.uint64)
    n2 = n * n
    shifts = np.array([n2 - 1 - c for c in range(n2)], dtype=np.uint64)
    return ((codes[:, None] >> shifts[None, :]) & np.uint64(1)).astype(bool)
