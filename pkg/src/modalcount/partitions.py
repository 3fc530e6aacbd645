"""Partition numbers, exact and asymptotic.

Exact counts are Python ints and exact ratios are :class:`fractions.Fraction`.
``p_exact`` (Euler's pentagonal recurrence) is kept independent of
``rademacher_p`` so each can check the other.
"""

from __future__ import annotations

import cmath
import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache

from modalcount.errors import ConsistencyError, InputError, LimitError

#: Largest n :func:`rademacher_p` accepts; doubles cannot round p(n) exactly far beyond this.
RADEMACHER_MAX_N = 200


@dataclass(frozen=True)
class IntegerPartition:
    parts: tuple[int, ...]

    def __post_init__(self):
        if any(a < b for a, b in zip(self.parts, self.parts[1:])):
            raise InputError(f"parts must be non-increasing: {self.parts}")
        if any(x <= 0 for x in self.parts):
            raise InputError(f"parts must be positive: {self.parts}")

    @property
    def n(self) -> int:
        return sum(self.parts)

    @cached_property
    def multiplicities(self) -> dict[int, int]:
        """``{k: s_k}`` where s_k counts the parts equal to k (only k with s_k > 0)."""
        out: dict[int, int] = {}
        for x in self.parts:
            out[x] = out.get(x, 0) + 1
        return out

    def __iter__(self):
        return iter(self.parts)

    def __len__(self):
        return len(self.parts)


def integer_partitions(n: int) -> list[IntegerPartition]:
    """All partitions of n, largest first part first (reverse lexicographic)."""
    if n < 0:
        raise InputError(f"n must be non-negative, got {n}")
    out = []

    def gen(remaining, cap, prefix):
        if remaining == 0:
            out.append(IntegerPartition(tuple(prefix)))
            return
        for part in range(min(cap, remaining), 0, -1):
            prefix.append(part)
            gen(remaining - part, part, prefix)
            prefix.pop()

    gen(n, n, [])
    return out


_p_memo = [1]
_p_lock = threading.Lock()


def p_exact(n: int) -> int:
    """p(n) by the pentagonal number recurrence, memoized across calls."""
    if n < 0:
        return 0
    with _p_lock:
        memo = _p_memo
        for m in range(len(memo), n + 1):
            total = 0
            k = 1
            while True:
                g1 = k * (3 * k - 1) // 2
                if g1 > m:
                    break
                g2 = g1 + k
                term = memo[m - g1] + (memo[m - g2] if g2 <= m else 0)
                total += term if k % 2 else -term
                k += 1
            memo.append(total)
        return memo[n]


def bell(n: int) -> int:
    """n-th Bell number via the Bell triangle."""
    if n < 0:
        raise InputError(f"n must be non-negative, got {n}")
    row = [1]
    for _ in range(n):
        nxt = [row[-1]]
        for x in row:
            nxt.append(nxt[-1] + x)
        row = nxt
    return row[0]


@lru_cache(maxsize=4096)
def dedekind_sum(h: int, k: int) -> Fraction:
    """sum_{j=1}^{k-1} (j/k) * (hj/k - floor(hj/k) - 1/2), exactly.

    Any integer h is accepted (the reciprocity law needs h > k as well).
    """
    if k < 1:
        raise InputError(f"k must be at least 1, got {k}")
    total = Fraction(0)
    for j in range(1, k):
        frac = Fraction((h * j) % k, k)
        total += Fraction(j, k) * (frac - Fraction(1, 2))
    return total


def sinh_term_derivative(n: float, k: int) -> float:
    # d/dn [sinh(c*sqrt(x)) / sqrt(x)] with x = n - 1/24, c = (pi/k) sqrt(2/3)
    x = n - 1 / 24
    c = (math.pi / k) * math.sqrt(2 / 3)
    r = math.sqrt(x)
    return c * math.cosh(c * r) / (2 * x) - math.sinh(c * r) / (2 * x * r)


def sinh_term(n: float, k: int) -> float:
    x = n - 1 / 24
    c = (math.pi / k) * math.sqrt(2 / 3)
    return math.sinh(c * math.sqrt(x)) / math.sqrt(x)


def rademacher_terms(n: int, K: int) -> list[complex]:
    """The k = 1..K summands of the Rademacher series, before the 1/(pi sqrt 2) factor."""
    terms = []
    for k in range(1, K + 1):
        a_k = 0j
        for h in range(1, k + 1):
            if math.gcd(h, k) != 1:
                continue
            phase = math.pi * float(dedekind_sum(h, k)) - 2 * math.pi * ((h * n) % k) / k
            a_k += cmath.exp(1j * phase)
        terms.append(a_k * math.sqrt(k) * sinh_term_derivative(n, k))
    return terms


def rademacher_p(n: int, K: int | None = None) -> float:
    """Partial sum of Rademacher's convergent series for p(n), k = 1..K.

    K defaults to ceil(3 sqrt(n)) + 5.  The series is real term by term;
    an imaginary residue above 1e-6 of the magnitude raises
    :class:`ConsistencyError`.
    """
    if n < 1:
        raise InputError(f"n must be at least 1, got {n}")
    if n > RADEMACHER_MAX_N:
        raise LimitError(f"double-precision Rademacher sum is limited to n <= {RADEMACHER_MAX_N}, got {n}")
    if K is None:
        K = default_truncation(n)
    if K < 1:
        raise InputError(f"K must be at least 1, got {K}")
    total = sum(rademacher_terms(n, K), 0j) / (math.pi * math.sqrt(2))
    if abs(total.imag) > 1e-6 * max(1.0, abs(total.real)):
        raise ConsistencyError(f"Rademacher sum has imaginary residue {total.imag:.3e} at n={n}")
    return total.real


def default_truncation(n: int) -> int:
    return math.ceil(3 * math.sqrt(n)) + 5


def hardy_ramanujan(n: int) -> float:
    if n < 1:
        raise InputError(f"n must be at least 1, got {n}")
    return math.exp(math.pi * math.sqrt(2 * n / 3)) / (4 * math.sqrt(3) * n)


def poset_asymptotic(n: int) -> int:
    """Exact value of sum_i sum_j C(n,i) C(n-i,j) (2^i - 1)^j (2^j - 1)^(n-i-j).

    The inner sum is empty at n = 1, so the value there is 0.
    """
    if n < 1:
        raise InputError(f"n must be at least 1, got {n}")
    total = 0
    for i in range(1, n + 1):
        for j in range(1, n - i + 1):
            total += math.comb(n, i) * math.comb(n - i, j) * (2**i - 1) ** j * (2**j - 1) ** (n - i - j)
    return total


def relation_cycle_terms(n: int):
    """Yield ``(partition, Fraction)`` terms of the cycle-index sum for a(n)."""
    for lam in integer_partitions(n):
        s = lam.multiplicities
        exponent = sum(math.gcd(i, j) * si * sj for i, si in s.items() for j, sj in s.items())
        denom = 1
        for k, sk in s.items():
            denom *= k**sk * math.factorial(sk)
        yield lam, Fraction(2**exponent, denom)


def a_exact(n: int) -> int:
    """Number of binary relations on n points up to relabeling."""
    if n < 1:
        raise InputError(f"n must be at least 1, got {n}")
    total = sum((term for _, term in relation_cycle_terms(n)), Fraction(0))
    if total.denominator != 1:
        raise ConsistencyError(f"cycle-index sum for n={n} is not an integer: {total}")
    return total.numerator


def orbit_lower_bound(n: int) -> Fraction:
    """2^(n^2) / n!: each relabeling class holds at most n! labeled relations."""
    if n < 1:
        raise InputError(f"n must be at least 1, got {n}")
    return Fraction(2 ** (n * n), math.factorial(n))


def log2_int(x: int) -> float:
    """log2 of a positive int, from its bit length and top 64 bits."""
    if x <= 0:
        raise InputError("log2 needs a positive integer")
    shift = max(x.bit_length() - 64, 0)
    return math.log2(x >> shift) + shift


def s5_ratio(n: int) -> float:
    """p(n) / a(n), evaluated in log space."""
    if n < 1:
        raise InputError(f"n must be at least 1, got {n}")
    return 2.0 ** (log2_int(p_exact(n)) - log2_int(a_exact(n)))
