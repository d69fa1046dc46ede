"""Line-oriented family files.

    # comment
    group 47                 (``group 3 3`` for Z_3 x Z_3)
    params 20 22 22 18 35    (k1 k2 k3 k4 lambda, optional)
    A 1 2 6 7 ...
    B 0 1 2 3 ...            (C = B is implied)
    D 0 1 2 10 ...

Product-group elements are comma-joined tuples (``0,1``).  Orbit form
replaces the element lists with ``subgroup h1 h2 ...`` and
``A orbits i1 i2 ...`` lines; representative 0 stands for the orbit {0}.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from propus.errors import DomainError, InvalidSubgroupError, ParseError
from propus.params import ParameterSet
from propus.residue import Block, GroupSpec, orbit_representative, orbit_union, orbits
from propus.verify import PropusFamily

_ROLES = ("A", "B", "D")


@dataclass(frozen=True)
class FamilyFile:
    family: PropusFamily
    comments: tuple[str, ...] = field(default=())


def _tokens(line: str):
    """(column, token) pairs, columns 1-based."""
    col = 0
    for part in line.split(" "):
        if part:
            yield col + 1, part
        col += len(part) + 1


def _int(tok: str, lineno: int, col: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(f"expected an integer, got {tok!r}", lineno, col) from None


def read_family_file(data: bytes | str) -> FamilyFile:
    text = data.decode("ascii") if isinstance(data, bytes) else data
    comments: list[str] = []
    group: GroupSpec | None = None
    params: ParameterSet | None = None
    subgroup: tuple[int, ...] | None = None
    explicit: dict[str, Block] = {}
    by_orbit: dict[str, tuple[int, tuple[int, ...]]] = {}

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.replace("\t", " ").rstrip()
        if not line.strip():
            continue
        if line.lstrip().startswith("#"):
            comments.append(line.lstrip()[1:].strip())
            continue
        toks = list(_tokens(line))
        col0, key = toks[0]
        rest = toks[1:]
        if key == "group":
            if not rest:
                raise ParseError("group needs at least one factor", lineno, col0)
            factors = tuple(_int(t, lineno, c) for c, t in rest)
            try:
                group = GroupSpec(factors)
            except DomainError as e:
                raise ParseError(str(e), lineno, rest[0][0]) from None
        elif key == "params":
            if len(rest) != 5:
                raise ParseError("params needs k1 k2 k3 k4 lambda", lineno, col0)
            if group is None:
                raise ParseError("params before group", lineno, col0)
            ks = [_int(t, lineno, c) for c, t in rest]
            params = ParameterSet(group.order, *ks)
        elif key == "subgroup":
            subgroup = tuple(_int(t, lineno, c) for c, t in rest)
        elif key in _ROLES:
            if group is None:
                raise ParseError(f"block {key} before group", lineno, col0)
            if key in explicit or key in by_orbit:
                raise ParseError(f"block {key} given twice", lineno, col0)
            if rest and rest[0][1] == "orbits":
                by_orbit[key] = (lineno, tuple(_int(t, lineno, c) for c, t in rest[1:]))
                continue
            explicit[key] = _parse_block(group, rest, lineno)
        else:
            raise ParseError(f"unknown keyword {key!r}", lineno, col0)

    nlines = max(1, len(text.splitlines()))
    if group is None:
        raise ParseError("missing group line", nlines)
    if by_orbit:
        explicit.update(_expand_orbits(group, subgroup, by_orbit))
    for role in _ROLES:
        if role not in explicit:
            raise ParseError(f"missing block {role}", nlines)
    orbit_indices = {r: idx for r, (_, idx) in sorted(by_orbit.items())} or None
    fam = PropusFamily(
        group,
        explicit["A"],
        explicit["B"],
        explicit["D"],
        claimed=params,
        subgroup=tuple(sorted(set(subgroup))) if subgroup and by_orbit else None,
        orbit_indices=orbit_indices,
    )
    return FamilyFile(fam, tuple(comments))


def _parse_block(group: GroupSpec, toks, lineno: int) -> Block:
    seen: dict[int, int] = {}
    prev = -1
    for col, tok in toks:
        parts = tok.split(",")
        vals = tuple(_int(p, lineno, col) for p in parts)
        if len(vals) != len(group.factors):
            raise ParseError(f"element {tok!r} has wrong arity for {group}", lineno, col)
        if any(not 0 <= r < n for r, n in zip(vals, group.factors)):
            raise ParseError(f"element {tok} out of range for {group}", lineno, col)
        enc = group.encode(vals if len(vals) > 1 else vals[0])
        if enc in seen:
            raise ParseError(f"duplicate element {tok}", lineno, col)
        if enc < prev:
            raise ParseError(f"elements must be strictly increasing at {tok}", lineno, col)
        seen[enc] = col
        prev = enc
    return Block(group, tuple(seen))


def _expand_orbits(group: GroupSpec, subgroup, by_orbit) -> dict[str, Block]:
    first_line = min(ln for ln, _ in by_orbit.values())
    if not group.is_cyclic:
        raise ParseError("orbit form needs a cyclic group", first_line)
    if not subgroup:
        raise ParseError("orbit form needs a subgroup line", first_line)
    try:
        orbs = orbits(group.order, subgroup)
    except InvalidSubgroupError as e:
        raise ParseError(str(e), first_line) from None
    out = {}
    for role, (lineno, idx) in by_orbit.items():
        for i in idx:
            if not 0 <= i < group.order:
                raise ParseError(f"orbit index {i} out of range", lineno)
        reps = [orbit_representative(orbs, i % group.order) for i in idx]
        if len(set(reps)) != len(reps):
            raise ParseError(f"block {role} names the same orbit twice", lineno)
        nonzero = sorted(r for r in reps if r)
        out[role] = orbit_union(orbs, nonzero, include_zero=0 in reps)
    return out


def parse_family_file(data: bytes | str) -> PropusFamily:
    return read_family_file(data).family


def _format_element(group: GroupSpec, x: int) -> str:
    dec = group.decode(x)
    return str(dec) if isinstance(dec, int) else ",".join(map(str, dec))


def serialize_family(f: PropusFamily | FamilyFile) -> bytes:
    ff = f if isinstance(f, FamilyFile) else FamilyFile(f)
    fam = ff.family
    lines = [f"# {c}" if c else "#" for c in ff.comments]
    lines.append("group " + " ".join(map(str, fam.group.factors)))
    if fam.claimed is not None:
        c = fam.claimed
        lines.append(f"params {c.k1} {c.k2} {c.k3} {c.k4} {c.lam}")
    if fam.subgroup and fam.orbit_indices:
        orbs = orbits(fam.v, fam.subgroup)
        lines.append("subgroup " + " ".join(map(str, fam.subgroup)))
        for role, blk in zip(_ROLES, (fam.a, fam.b, fam.d)):
            reps = sorted({orbit_representative(orbs, x) for x in blk})
            lines.append(f"{role} orbits " + " ".join(map(str, reps)))
    else:
        for role, blk in zip(_ROLES, (fam.a, fam.b, fam.d)):
            lines.append(" ".join([role] + [_format_element(fam.group, x) for x in blk]))
    return ("\n".join(lines) + "\n").encode("ascii")
