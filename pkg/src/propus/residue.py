"""Finite abelian groups Z_n1 x ... x Z_nr, blocks, +-1 sequences and PAF.

Group elements are stored encoded as integers in ``range(order)`` using
row-major mixed radix over the factors, so a cyclic group Z_v uses the
residues themselves.  ``GroupSpec.decode`` gives the tuple form.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Sequence

import numpy as np

from propus.errors import (
    DomainError,
    InvalidSubgroupError,
    UnknownOrbitError,
    UnsupportedGroupError,
)

Element = int | tuple[int, ...]


@dataclass(frozen=True)
class GroupSpec:
    factors: tuple[int, ...]

    def __post_init__(self) -> None:
        factors = tuple(int(n) for n in self.factors)
        if not factors or any(n < 1 for n in factors):
            raise DomainError(f"group factors must be a nonempty list of positive integers, got {self.factors!r}")
        object.__setattr__(self, "factors", factors)

    @classmethod
    def cyclic(cls, v: int) -> GroupSpec:
        return cls((v,))

    @property
    def order(self) -> int:
        return int(np.prod(self.factors))

    @property
    def is_cyclic(self) -> bool:
        return len(self.factors) == 1

    @cached_property
    def _strides(self) -> tuple[int, ...]:
        strides = []
        acc = 1
        for n in reversed(self.factors):
            strides.append(acc)
            acc *= n
        return tuple(reversed(strides))

    def encode(self, x: Element) -> int:
        """Map an element (int for cyclic groups, tuple otherwise) to its index."""
        if isinstance(x, (int, np.integer)):
            if not self.is_cyclic:
                raise DomainError(f"product group {self} needs tuple elements, got {x!r}")
            x = (int(x),)
        x = tuple(x)
        if len(x) != len(self.factors):
            raise DomainError(f"element {x!r} has wrong arity for {self}")
        for r, n in zip(x, self.factors):
            if not 0 <= r < n:
                raise DomainError(f"element {x!r} out of range for {self}")
        return sum(r * s for r, s in zip(x, self._strides))

    def decode(self, i: int) -> Element:
        if self.is_cyclic:
            return int(i)
        return tuple((int(i) // s) % n for s, n in zip(self._strides, self.factors))

    @cached_property
    def _neg_table(self) -> np.ndarray:
        idx = np.arange(self.order)
        out = np.zeros(self.order, dtype=np.int64)
        for s, n in zip(self._strides, self.factors):
            r = (idx // s) % n
            out += ((-r) % n) * s
        return out

    @cached_property
    def _sub_table(self) -> np.ndarray:
        """``table[x, y]`` is the encoding of ``x - y``."""
        idx = np.arange(self.order)
        out = np.zeros((self.order, self.order), dtype=np.int64)
        for s, n in zip(self._strides, self.factors):
            r = (idx // s) % n
            out += ((r[:, None] - r[None, :]) % n) * s
        return out

    def neg(self, i: int) -> int:
        return int(self._neg_table[i])

    def sub(self, i: int, j: int) -> int:
        return int(self._sub_table[i, j])

    def add(self, i: int, j: int) -> int:
        return int(self._sub_table[i, self._neg_table[j]])

    def __str__(self) -> str:
        return " x ".join(f"Z_{n}" for n in self.factors)


@dataclass(frozen=True)
class Block:
    """A subset of a group, elements kept encoded and strictly increasing."""

    group: GroupSpec
    elements: tuple[int, ...] = field(default=())

    def __post_init__(self) -> None:
        elems = tuple(int(x) for x in self.elements)
        if any(b <= a for a, b in zip(elems, elems[1:])):
            raise DomainError("block elements must be strictly increasing")
        if elems and not (0 <= elems[0] and elems[-1] < self.group.order):
            raise DomainError(f"block element out of range for {self.group}")
        object.__setattr__(self, "elements", elems)

    @classmethod
    def of(cls, group: GroupSpec | int, items: Iterable[Element]) -> Block:
        """Build a block from raw elements; rejects duplicates and bad residues."""
        if isinstance(group, int):
            group = GroupSpec.cyclic(group)
        enc = [group.encode(x) for x in items]
        if len(set(enc)) != len(enc):
            raise DomainError("duplicate element in block")
        return cls(group, tuple(sorted(enc)))

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[int]:
        return iter(self.elements)

    def __contains__(self, x: object) -> bool:
        return x in self._set

    @cached_property
    def _set(self) -> frozenset[int]:
        return frozenset(self.elements)

    def decoded(self) -> list[Element]:
        return [self.group.decode(x) for x in self.elements]

    def indicator(self) -> np.ndarray:
        out = np.zeros(self.group.order, dtype=np.int8)
        out[list(self.elements)] = 1
        return out

    def translate(self, t: int) -> Block:
        g = self.group
        return Block(g, tuple(sorted(g.add(x, t) for x in self.elements)))

    def scale(self, m: int) -> Block:
        """Multiply every element by ``m`` (cyclic groups only)."""
        v = _cyclic_order(self)
        return Block(self.group, tuple(sorted({(x * m) % v for x in self.elements})))


def _cyclic_order(b: Block) -> int:
    if not b.group.is_cyclic:
        raise UnsupportedGroupError(f"operation requires a cyclic group, got {b.group}")
    return b.group.order


def negate_block(b: Block) -> Block:
    neg = b.group._neg_table
    return Block(b.group, tuple(sorted(int(neg[x]) for x in b.elements)))


def block_to_sequence(b: Block) -> np.ndarray:
    """+-1 sequence of a block: -1 exactly at the members."""
    v = _cyclic_order(b)
    seq = np.ones(v, dtype=np.int8)
    seq[list(b.elements)] = -1
    return seq


def sequence_to_block(seq: Sequence[int] | np.ndarray) -> Block:
    arr = np.asarray(seq)
    if not np.all((arr == 1) | (arr == -1)):
        raise DomainError("sign sequence entries must be +1 or -1")
    return Block(GroupSpec.cyclic(len(arr)), tuple(int(i) for i in np.flatnonzero(arr == -1)))


def paf(seq: Sequence[int] | np.ndarray) -> np.ndarray:
    """Periodic autocorrelation ``PAF(s) = sum_j x[j] * x[(j+s) % v]`` for s = 0..v-1."""
    x = np.asarray(seq, dtype=np.int64)
    v = len(x)
    if v == 0:
        raise DomainError("PAF of an empty sequence is undefined")
    idx = (np.arange(v)[:, None] + np.arange(v)[None, :]) % v
    return x[idx] @ x


def paf_rows(seqs: np.ndarray) -> np.ndarray:
    """Folded PAF (shifts 1..(v-1)/2) of every row of a +-1 or 0/1 matrix.

    0/1 rows are read as block indicators.
    """
    m = np.asarray(seqs)
    if m.ndim != 2:
        raise DomainError("expected a 2-d array of sequences")
    if m.size and m.min() >= 0:
        m = 1 - 2 * m.astype(np.int32)
    else:
        m = m.astype(np.int32)
    v = m.shape[1]
    h = (v - 1) // 2
    out = np.empty((m.shape[0], h), dtype=np.int32)
    for s in range(1, h + 1):
        out[:, s - 1] = np.einsum("ij,ij->i", m, np.roll(m, -s, axis=1))
    return out


def coincidence_paf_identity(b: Block, s: int) -> int:
    """PAF at shift ``s`` computed from ``|b & (b+s)|``."""
    v = _cyclic_order(b)
    shifted = {(x + s) % v for x in b.elements}
    return v - 4 * (len(b) - len(b._set & shifted))


def is_symmetric(b: Block) -> bool:
    return negate_block(b) == b


def is_skew(b: Block) -> bool:
    """True when b and -b partition the nonzero elements."""
    g = b.group
    neg = {g.neg(x) for x in b.elements}
    if 0 in b or b._set & neg:
        return False
    return len(b) * 2 == g.order - 1


def _unit_closure_check(v: int, h: Iterable[int]) -> frozenset[int]:
    from math import gcd

    hs = frozenset(int(x) % v for x in h)
    if not hs:
        raise InvalidSubgroupError("subgroup must be nonempty")
    for x in hs:
        if gcd(x, v) != 1:
            raise InvalidSubgroupError(f"{x} is not a unit mod {v}")
    for x in hs:
        for y in hs:
            if (x * y) % v not in hs:
                raise InvalidSubgroupError(f"{sorted(hs)} is not closed under multiplication mod {v}: {x}*{y}")
    return hs


def orbits(v: int, h: Iterable[int]) -> list[Block]:
    """Orbits of a multiplicative subgroup H of Z_v^* on Z_v minus {0}.

    Returned sorted by their minimum element, which also serves as the
    orbit representative.
    """
    hs = _unit_closure_check(v, h)
    g = GroupSpec.cyclic(v)
    seen: set[int] = set()
    out = []
    for x in range(1, v):
        if x in seen:
            continue
        orb = tuple(sorted({(x * u) % v for u in hs}))
        seen.update(orb)
        out.append(Block(g, orb))
    return out


def cyclic_subgroups(v: int) -> list[tuple[int, ...]]:
    """The cyclic subgroups <g> of Z_v^*, ordered by size and then elements."""
    from math import gcd

    if v < 2:
        raise DomainError(f"v must be at least 2, got {v}")
    found = set()
    for g in range(1, v):
        if gcd(g, v) != 1:
            continue
        h = [1]
        x = g % v
        while x != 1 % v:
            h.append(x)
            x = x * g % v
        found.add(tuple(sorted(h)))
    return sorted(found, key=lambda h: (len(h), h))


def orbit_union(orbs: Sequence[Block], indices: Iterable[int], include_zero: bool = False) -> Block:
    """Union of the orbits whose representatives (minima) are listed."""
    if not orbs and not include_zero:
        raise DomainError("need at least one orbit or the zero element")
    by_rep = {o.elements[0]: o for o in orbs}
    group = orbs[0].group if orbs else None
    elems: set[int] = set()
    for i in indices:
        if i not in by_rep:
            raise UnknownOrbitError(f"{i} is not an orbit representative")
        elems.update(by_rep[i].elements)
    if include_zero:
        elems.add(0)
    if group is None:
        raise DomainError("cannot infer the group without orbits")
    return Block(group, tuple(sorted(elems)))


def orbit_representative(orbs: Sequence[Block], x: int) -> int:
    """Minimum element of the orbit containing ``x`` (0 maps to 0)."""
    if x == 0:
        return 0
    for o in orbs:
        if x in o:
            return o.elements[0]
    raise UnknownOrbitError(f"{x} is in no orbit")
