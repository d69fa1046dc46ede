"""Deciding whether (A, B, B, D) is a propus difference family."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from propus.errors import MixedGroupError
from propus.params import ParameterSet
from propus.residue import Block, GroupSpec, block_to_sequence, is_skew, is_symmetric, paf


@dataclass(frozen=True)
class PropusFamily:
    """Blocks A, B (= C) and D of one group; ``claimed`` is the advertised set."""

    group: GroupSpec
    a: Block
    b: Block
    d: Block
    claimed: ParameterSet | None = None
    subgroup: tuple[int, ...] | None = None
    orbit_indices: dict[str, tuple[int, ...]] | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        for blk in (self.a, self.b, self.d):
            if blk.group != self.group:
                raise MixedGroupError(f"block in {blk.group} but family group is {self.group}")

    @property
    def v(self) -> int:
        return self.group.order

    @property
    def sizes(self) -> tuple[int, int, int, int]:
        return (len(self.a), len(self.b), len(self.b), len(self.d))

    def swapped(self) -> PropusFamily:
        claimed = self.claimed.swapped() if self.claimed else None
        return PropusFamily(self.group, self.d, self.b, self.a, claimed, self.subgroup)


def _block_differences(b: Block) -> np.ndarray:
    g = b.group
    out = np.zeros(g.order, dtype=np.int64)
    if len(b) < 2:
        return out
    idx = np.asarray(b.elements)
    diffs = g._sub_table[np.ix_(idx, idx)]
    np.add.at(out, diffs.ravel(), 1)
    out[0] = 0
    return out


def difference_vector(f: PropusFamily) -> np.ndarray:
    """``out[g]`` = number of (x, y) in a common block with x - y = g, over A, B, C, D."""
    out = _block_differences(f.a) + 2 * _block_differences(f.b) + _block_differences(f.d)
    out[0] = 0
    return out


def difference_counts(f: PropusFamily):
    """Nonzero group element -> difference count (decoded elements as keys)."""
    vec = difference_vector(f)
    return {f.group.decode(g): int(vec[g]) for g in range(1, f.group.order)}


def paf_defect(f: PropusFamily) -> np.ndarray:
    """PAF_a + 2 PAF_b + PAF_d over shifts 0..v-1; zero off shift 0 for a valid family."""
    return paf(block_to_sequence(f.a)) + 2 * paf(block_to_sequence(f.b)) + paf(block_to_sequence(f.d))


@dataclass(frozen=True)
class VerificationReport:
    sizes_ok: bool
    coverage_ok: bool
    paf_ok: bool | None  # None when the group is not cyclic
    a_symmetric: bool
    d_symmetric: bool
    b_symmetric: bool
    a_skew: bool
    d_skew: bool
    inferred: ParameterSet | None
    defect: tuple[int, ...]

    @property
    def valid(self) -> bool:
        return self.sizes_ok and self.coverage_ok and self.paf_ok is not False

    @property
    def has_symmetric_block(self) -> bool:
        return self.a_symmetric or self.d_symmetric


def verify_family(f: PropusFamily) -> VerificationReport:
    """Check coverage (uniform difference counts) and, for Z_v, the PAF criterion.

    ``defect[g]`` is count(g) - lam with lam = sum k_i - v, for g = 1..v-1.
    """
    v = f.group.order
    k1, k2, _, k4 = f.sizes
    lam = k1 + 2 * k2 + k4 - v
    counts = difference_vector(f)[1:]
    coverage_ok = bool(np.all(counts == lam)) if v > 1 else True
    defect = tuple(int(c - lam) for c in counts)

    paf_ok: bool | None = None
    if f.group.is_cyclic:
        paf_ok = bool(np.all(paf_defect(f)[1:] == 0))
        if paf_ok != coverage_ok:
            raise AssertionError("PAF and coverage criteria disagree")

    sizes_ok = True
    if f.claimed is not None:
        c = f.claimed
        sizes_ok = (
            c.v == v and c.k2 == c.k3 and (c.k1, c.k2, c.k4) == (k1, k2, k4) and c.lam == lam
        )

    inferred = ParameterSet(v, k1, k2, k2, k4, lam) if coverage_ok else None
    return VerificationReport(
        sizes_ok=sizes_ok,
        coverage_ok=coverage_ok,
        paf_ok=paf_ok,
        a_symmetric=is_symmetric(f.a),
        d_symmetric=is_symmetric(f.d),
        b_symmetric=is_symmetric(f.b),
        a_skew=is_skew(f.a),
        d_skew=is_skew(f.d),
        inferred=inferred,
        defect=defect,
    )
