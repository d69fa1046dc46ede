"""Propus parameter sets (v; k1, k2, k3, k4; lambda).

A parameter set is normalized when k1, k2 <= v/2 and k1 >= k4.  For odd v
the normalized sets correspond one to one with positive odd triples
(xi, eta, zeta) = (v - 2k1, v - 2k2, v - 2k4) satisfying
xi^2 + 2 eta^2 + zeta^2 = 4v with xi <= zeta.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from math import comb, isqrt

from propus.errors import ConjectureViolation, DomainError


@dataclass(frozen=True, order=True)
class ParameterSet:
    v: int
    k1: int
    k2: int
    k3: int
    k4: int
    lam: int

    @classmethod
    def from_triple(cls, v: int, k1: int, k2: int, k4: int) -> ParameterSet:
        return cls(v, k1, k2, k2, k4, k1 + 2 * k2 + k4 - v)

    @classmethod
    def parse(cls, text: str) -> ParameterSet:
        """Parse ``(47;20,22,22,18;35)`` (spaces and ':' separators tolerated)."""
        nums = [int(t) for t in re.findall(r"-?\d+", text)]
        if len(nums) != 6:
            raise DomainError(f"cannot parse parameter set from {text!r}")
        return cls(*nums)

    @property
    def sizes(self) -> tuple[int, int, int, int]:
        return (self.k1, self.k2, self.k3, self.k4)

    def swapped(self) -> ParameterSet:
        """Exchange the roles of the first and last block."""
        return ParameterSet(self.v, self.k4, self.k2, self.k3, self.k1, self.lam)

    def __str__(self) -> str:
        return f"({self.v};{self.k1},{self.k2},{self.k3},{self.k4};{self.lam})"


@dataclass(frozen=True)
class ValidityReport:
    balance: bool  # sum k_i(k_i - 1) = lam (v - 1)
    size_sum: bool  # sum k_i = lam + v
    equal_middle: bool  # k2 = k3
    normalized: bool

    @property
    def ok(self) -> bool:
        return self.balance and self.size_sum and self.equal_middle


def validate_parameter_set(p: ParameterSet) -> ValidityReport:
    ks = p.sizes
    balance = sum(k * (k - 1) for k in ks) == p.lam * (p.v - 1)
    size_sum = sum(ks) == p.lam + p.v
    equal_middle = p.k2 == p.k3
    normalized = 2 * p.k1 <= p.v and 2 * p.k2 <= p.v and p.k1 >= p.k4
    return ValidityReport(balance, size_sum, equal_middle, normalized)


def _check_odd(v: int) -> None:
    if v < 3 or v % 2 == 0:
        raise DomainError(f"v must be odd and at least 3, got {v}")


def _odd_triples(v: int):
    """Positive odd (xi, eta, zeta) with xi^2 + 2 eta^2 + zeta^2 = 4v."""
    target = 4 * v
    for eta in range(1, isqrt(target // 2) + 1, 2):
        rest = target - 2 * eta * eta
        for xi in range(1, isqrt(rest) + 1, 2):
            z2 = rest - xi * xi
            zeta = isqrt(z2)
            if zeta > 0 and zeta * zeta == z2 and zeta % 2 == 1:
                yield xi, eta, zeta


def enumerate_parameter_sets(v: int) -> list[ParameterSet]:
    """All normalized propus parameter sets for odd v, sorted by (k1, k2, k4)."""
    _check_odd(v)
    out = [
        ParameterSet.from_triple(v, (v - xi) // 2, (v - eta) // 2, (v - zeta) // 2)
        for xi, eta, zeta in _odd_triples(v)
        if xi <= zeta
    ]
    return sorted(out, key=lambda p: (p.k1, p.k2, p.k4))


def count_unnormalized(v: int) -> int:
    """Number of ordered positive odd solutions of xi^2 + 2 eta^2 + zeta^2 = 4v."""
    _check_odd(v)
    return sum(1 for _ in _odd_triples(v))


def exceptional_set(s: int) -> ParameterSet:
    """The all-equal set (s^2; C(s,2) x 4; s(s-2))."""
    if s < 2:
        raise DomainError(f"s must be at least 2, got {s}")
    k = comb(s, 2)
    return ParameterSet(s * s, k, k, k, k, s * (s - 2))


def exceptional_companion(s: int) -> ParameterSet:
    """(s^2; C(s,2)+a, C(s,2), C(s,2), C(s,2)-b; s(s-2)+a-b) for prime s = 1 mod 4.

    (a, b) is the window solution of a^2 + b^2 = s(a - b) with 1 < a <= (s-1)/2.
    """
    from propus.conjecture import is_prime, solve_conjecture2

    if not is_prime(s) or s % 4 != 1:
        raise DomainError(f"s must be a prime congruent to 1 mod 4, got {s}")
    rec = solve_conjecture2(s)
    if len(rec.solutions) != 1:
        raise ConjectureViolation(f"expected one window solution for s={s}, found {rec.solutions}")
    a, b = rec.solutions[0]
    k = comb(s, 2)
    return ParameterSet(s * s, k + a, k, k, k - b, s * (s - 2) + a - b)
