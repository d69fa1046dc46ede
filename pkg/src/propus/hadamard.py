"""Propus array assembly, Hadamard certification and bitmap/text export.

                [ -C1   C2 R   C3 R   C4 R ]
                [ C3 R  R C4   C1    -R C2 ]
            H = [ C2 R  C1    -R C4   R C3 ]
                [ C4 R -R C3   R C2   C1   ]

R is the back-circulant identity.  Circulants are taken with row j equal
to the first row cyclically shifted right by j.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Literal

import numpy as np

from propus.errors import DomainError, UnsupportedGroupError
from propus.residue import block_to_sequence
from propus.verify import PropusFamily, verify_family


def circulant(first_row) -> np.ndarray:
    row = np.asarray(first_row, dtype=np.int64)
    v = len(row)
    idx = (np.arange(v)[None, :] - np.arange(v)[:, None]) % v
    return row[idx]


def back_identity(v: int) -> np.ndarray:
    if v < 1:
        raise DomainError("order must be positive")
    i = np.arange(v)
    return ((i[:, None] + i[None, :]) % v == v - 1).astype(np.int64)


def is_hadamard(h: np.ndarray) -> bool:
    """Exact integer test of H H^T = m I with +-1 entries."""
    h = np.asarray(h, dtype=np.int64)
    m = h.shape[0]
    if h.shape != (m, m) or not np.all(np.abs(h) == 1):
        return False
    return bool(np.array_equal(h @ h.T, m * np.eye(m, dtype=np.int64)))


@dataclass(frozen=True)
class PropusMatrix:
    entries: np.ndarray
    is_hadamard: bool
    is_symmetric: bool

    @property
    def order(self) -> int:
        return self.entries.shape[0]

    @classmethod
    def certify(cls, entries: np.ndarray) -> PropusMatrix:
        entries = np.asarray(entries, dtype=np.int64)
        return cls(entries, is_hadamard(entries), bool(np.array_equal(entries, entries.T)))


def assemble_propus(c1: np.ndarray, c2: np.ndarray, c3: np.ndarray, c4: np.ndarray) -> PropusMatrix:
    mats = [np.asarray(c, dtype=np.int64) for c in (c1, c2, c3, c4)]
    v = mats[0].shape[0]
    if any(m.shape != (v, v) for m in mats):
        raise DomainError("circulants must all be square of the same order")
    c1, c2, c3, c4 = mats
    r = back_identity(v)
    h = np.block(
        [
            [-c1, c2 @ r, c3 @ r, c4 @ r],
            [c3 @ r, r @ c4, c1, -r @ c2],
            [c2 @ r, c1, -r @ c4, r @ c3],
            [c4 @ r, -r @ c3, r @ c2, c1],
        ]
    )
    return PropusMatrix.certify(h)


def family_to_matrix(f: PropusFamily, prefer: Literal["auto", "A", "D"] = "auto") -> PropusMatrix:
    """Plug a cyclic family into the propus array.

    C1 comes from A, or from D after exchanging A and D when only D is
    symmetric (``auto``) or when ``prefer="D"``.
    """
    if not f.group.is_cyclic:
        raise UnsupportedGroupError("matrix assembly needs a cyclic group")
    if prefer not in ("auto", "A", "D"):
        raise DomainError(f"prefer must be auto, A or D, got {prefer!r}")
    rep = verify_family(f)
    first, last = f.a, f.d
    if prefer == "D" or (prefer == "auto" and not rep.a_symmetric and rep.d_symmetric):
        first, last = f.d, f.a
    c1 = circulant(block_to_sequence(first))
    c2 = circulant(block_to_sequence(f.b))
    c4 = circulant(block_to_sequence(last))
    return assemble_propus(c1, c2, c2, c4)


def export_matrix(m: PropusMatrix | np.ndarray, fmt: Literal["pbm", "text"] = "pbm") -> bytes:
    """PBM P1 (1 = black = -1) or text rows of '+'/'-'."""
    h = m.entries if isinstance(m, PropusMatrix) else np.asarray(m)
    rows, cols = h.shape
    if fmt == "text":
        return "".join("".join("+" if x == 1 else "-" for x in row) + "\n" for row in h).encode("ascii")
    if fmt != "pbm":
        raise DomainError(f"unknown matrix format {fmt!r}")
    lines = ["P1", f"{cols} {rows}"]
    for row in h:
        bits = "".join("1" if x == -1 else "0" for x in row)
        # netpbm asks for lines of at most 70 characters
        lines.extend(bits[i : i + 70] for i in range(0, len(bits), 70))
    return ("\n".join(lines) + "\n").encode("ascii")


def import_matrix(data: bytes) -> np.ndarray:
    text = data.decode("ascii")
    if text.startswith("P1"):
        body = re.sub(r"#[^\n]*", "", text[2:])
        tokens = body.split()
        cols, rows = int(tokens[0]), int(tokens[1])
        bits = "".join(tokens[2:])
        if len(bits) != rows * cols or set(bits) - {"0", "1"}:
            raise DomainError("malformed PBM raster")
        arr = np.frombuffer(bits.encode(), dtype=np.uint8) - ord("0")
        return (1 - 2 * arr.astype(np.int64)).reshape(rows, cols)
    rows = [line for line in text.splitlines() if line]
    if not rows or any(set(r) - {"+", "-"} for r in rows):
        raise DomainError("text matrix rows must contain only '+' and '-'")
    return np.array([[1 if ch == "+" else -1 for ch in r] for r in rows], dtype=np.int64)
