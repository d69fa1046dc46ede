"""Counting N_s and testing the two Diophantine conjectures.

N_s is the number of ordered positive odd solutions of
xi^2 + 2 eta^2 + zeta^2 = 4 s^2.  Conjecture 1: N_s - s - 1 = +-1 for every
odd prime s.  Conjecture 2: for prime s = 1 mod 4, a^2 + b^2 = s(a - b)
has exactly one solution with 1 < a <= (s-1)/2, and a - b is a square or
twice a square.
"""

from __future__ import annotations

import csv
import io
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from math import isqrt
from typing import Iterable, Sequence

import numpy as np

from propus.errors import DomainError


def primes_below(n: int) -> list[int]:
    if n <= 2:
        return []
    sieve = np.ones(n, dtype=bool)
    sieve[:2] = False
    for p in range(2, isqrt(n - 1) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return [int(p) for p in np.flatnonzero(sieve)]


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    return all(n % p for p in range(3, isqrt(n) + 1, 2))


def _sqrt_mod(a: int, p: int) -> int | None:
    """Square root of a modulo an odd prime p (Tonelli-Shanks)."""
    a %= p
    if a == 0:
        return 0
    if pow(a, (p - 1) // 2, p) != 1:
        return None
    q, e = p - 1, 0
    while q % 2 == 0:
        q //= 2
        e += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = e, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c, t, r = i, b * b % p, t * b * b % p, r * b % p
    return r


@lru_cache(maxsize=None)
def _sieve_primes(limit: int) -> tuple[tuple[int, int | None], ...]:
    """Odd primes up to ``limit`` with a square root of 2 mod p (or None)."""
    return tuple((p, _sqrt_mod(2, p)) for p in primes_below(limit + 1) if p > 2)


def count_Ns_naive(s: int) -> int:
    """Direct O(s^2) count with a perfect-square probe."""
    if s < 1 or s % 2 == 0:
        raise DomainError(f"s must be odd and positive, got {s}")
    target = 4 * s * s
    count = 0
    for eta in range(1, isqrt(target // 2) + 1, 2):
        rest = target - 2 * eta * eta
        for xi in range(1, isqrt(rest) + 1, 2):
            z2 = rest - xi * xi
            z = isqrt(z2)
            if z > 0 and z * z == z2 and z % 2:
                count += 1
    return count


def count_Ns(s: int) -> int:
    """N_s via sums of two squares.

    For odd eta, m = 2s^2 - eta^2 is odd and 2m = xi^2 + zeta^2 forces both
    parts odd, so the ordered positive representations number
    sum_{d | m} chi_4(d).  The multiplicative factors of m are collected by
    sieving eta over the residue classes where each prime p divides m.
    """
    if s < 3 or s % 2 == 0:
        raise DomainError(f"s must be odd and at least 3, got {s}")
    eta = np.arange(1, isqrt(2 * s * s - 1) + 1, 2, dtype=np.int64)
    rem = 2 * s * s - eta * eta
    weight = np.ones(len(eta), dtype=np.int64)
    limit = isqrt(int(rem.max()))
    for p, t in _sieve_primes(limit):
        if s % p == 0:
            roots = {0}
        elif t is None:
            continue
        else:
            r = s * t % p
            roots = {r, p - r}
        for r in roots:
            first = r if r % 2 else r + p  # smallest odd eta = r mod p
            idx = slice((first - 1) // 2, None, p)
            sub = rem[idx]
            if not len(sub):
                continue
            exp = np.zeros(len(sub), dtype=np.int64)
            mask = sub % p == 0
            while mask.any():
                sub[mask] //= p
                exp[mask] += 1
                mask = sub % p == 0
            rem[idx] = sub
            if p % 4 == 1:
                weight[idx] *= exp + 1
            else:
                weight[idx] *= (exp % 2 == 0).astype(np.int64)
    # leftover cofactor is 1 or a single prime above the sieve limit
    weight *= np.where(rem == 1, 1, np.where(rem % 4 == 1, 2, 0))
    return int(weight.sum())


@dataclass(frozen=True)
class ConjectureOneRecord:
    s: int
    n_s: int

    @property
    def deviation(self) -> int:
        return self.n_s - self.s - 1


@dataclass(frozen=True)
class ConjectureOneSummary:
    primes: int
    n_equals_s: int
    n_equals_s_plus_2: int
    violations: tuple[int, ...]


def _map_ordered(fn, items: Sequence[int], workers: int) -> list:
    if workers <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items, chunksize=max(1, len(items) // (8 * workers))))


def _odd_primes(max_prime: int) -> list[int]:
    """Odd primes strictly below ``max_prime``."""
    return [p for p in primes_below(max_prime) if p > 2]


def check_conjecture1(
    primes: Iterable[int] | int, workers: int = 1
) -> tuple[list[ConjectureOneRecord], ConjectureOneSummary]:
    """N_s for each odd prime (an int argument means all odd primes below it)."""
    ps = _odd_primes(primes) if isinstance(primes, int) else sorted(primes)
    counts = _map_ordered(count_Ns, ps, workers)
    records = [ConjectureOneRecord(s, n) for s, n in zip(ps, counts)]
    summary = ConjectureOneSummary(
        primes=len(records),
        n_equals_s=sum(r.deviation == -1 for r in records),
        n_equals_s_plus_2=sum(r.deviation == 1 for r in records),
        violations=tuple(r.s for r in records if r.deviation not in (-1, 1)),
    )
    return records, summary


def partial_sum_series(records: Sequence[ConjectureOneRecord]) -> list[tuple[int, int]]:
    out = []
    acc = 0
    for r in sorted(records, key=lambda r: r.s):
        acc += r.deviation
        out.append((r.s, acc))
    return out


def conjecture1_csv(records: Sequence[ConjectureOneRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["s", "N_s", "deviation", "partial_sum"])
    by_s = {r.s: r for r in records}
    for s, acc in partial_sum_series(records):
        w.writerow([s, by_s[s].n_s, by_s[s].deviation, acc])
    return buf.getvalue()


def classify_difference(n: int) -> str:
    if n > 0 and isqrt(n) ** 2 == n:
        return "square"
    if n > 0 and n % 2 == 0 and isqrt(n // 2) ** 2 == n // 2:
        return "twice-square"
    return "neither"


@dataclass(frozen=True)
class ConjectureTwoRecord:
    s: int
    solutions: tuple[tuple[int, int], ...]
    mirrors_ok: bool
    classifiers: tuple[str, ...] = field(default=())

    @property
    def ok(self) -> bool:
        return len(self.solutions) == 1 and self.mirrors_ok and self.classifiers[0] != "neither"


def _holds(s: int, a: int, b: int) -> bool:
    return a > 0 and b > 0 and a * a + b * b == s * (a - b)


def solve_conjecture2(s: int) -> ConjectureTwoRecord:
    """All (a, b) with a^2 + b^2 = s(a - b), b > 0 and 1 < a <= (s-1)/2.

    For each a, b is the positive root of b^2 + s b + (a^2 - s a) = 0, so the
    discriminant s^2 + 4sa - 4a^2 must be a perfect square.
    """
    if s < 3 or s % 2 == 0:
        raise DomainError(f"s must be an odd integer at least 3, got {s}")
    a = np.arange(2, (s - 1) // 2 + 1, dtype=np.int64)
    disc = s * s + 4 * s * a - 4 * a * a
    root = np.floor(np.sqrt(disc.astype(np.float64))).astype(np.int64)
    # float sqrt can be off by one near perfect squares
    root += (root + 1) ** 2 <= disc
    root -= root**2 > disc
    hit = (root * root == disc) & ((root - s) % 2 == 0) & (root > s)
    sols = []
    for ai, ri in zip(a[hit].tolist(), root[hit].tolist()):
        bi = (ri - s) // 2
        if _holds(s, ai, bi):
            sols.append((ai, bi))
    mirrors_ok = all(_holds(s, s - ai, bi) for ai, bi in sols)
    return ConjectureTwoRecord(
        s=s,
        solutions=tuple(sols),
        mirrors_ok=mirrors_ok,
        classifiers=tuple(classify_difference(ai - bi) for ai, bi in sols),
    )


@dataclass(frozen=True)
class ConjectureTwoSummary:
    primes: int
    unique: int
    square: int
    twice_square: int
    violations: tuple[int, ...]


def check_conjecture2(
    primes: Iterable[int] | int, workers: int = 1
) -> tuple[list[ConjectureTwoRecord], ConjectureTwoSummary]:
    """Conjecture 2 over primes = 1 mod 4 (an int argument means all such primes below it)."""
    if isinstance(primes, int):
        ps = [p for p in primes_below(primes) if p % 4 == 1]
    else:
        ps = sorted(primes)
    records = _map_ordered(solve_conjecture2, ps, workers)
    summary = ConjectureTwoSummary(
        primes=len(records),
        unique=sum(len(r.solutions) == 1 for r in records),
        square=sum(r.classifiers[:1] == ("square",) for r in records),
        twice_square=sum(r.classifiers[:1] == ("twice-square",) for r in records),
        violations=tuple(r.s for r in records if not r.ok),
    )
    return records, summary


def conjecture2_csv(records: Sequence[ConjectureTwoRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["s", "a", "b", "a_minus_b", "classifier"])
    for r in records:
        for (a, b), cls in zip(r.solutions, r.classifiers):
            w.writerow([r.s, a, b, a - b, cls])
    return buf.getvalue()
