"""Searching for cyclic propus difference families.

Every search fixes the symmetric block as A.  A request for a symmetric D
runs the same machinery on the swapped parameter set (k4, k2, k2, k1) and
exchanges A and D in the results.

* exhaustive: every symmetric A against every B and D.  PAF is invariant
  under translation, so B and D pools hold only the subsets containing 0,
  grouped by folded PAF profile; a meet-in-the-middle join then looks up
  the D profile each (A, B) pair needs.
* randomized: tabu steepest descent on sum_s (PAF_a + 2 PAF_b + PAF_d)(s)^2
  over size-preserving swaps, with seeded restarts.  With a subgroup the
  moves exchange whole orbits, which confines the walk to H-invariant
  blocks.  Without one, restarts rotate through lanes: the plain walk and,
  unless switched off, orbit walks for each cyclic subgroup of Z_v^* whose
  orbits can tile the block sizes.
* orbit: the exhaustive join over unions of orbits of a subgroup H.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import chain, combinations
from math import comb
from typing import Iterator, Literal, Sequence

import numpy as np
from numba import njit

from propus.errors import DomainError, InfeasibleTaskError
from propus.params import ParameterSet, validate_parameter_set
from propus.residue import Block, GroupSpec, cyclic_subgroups, orbit_union, orbits
from propus.verify import PropusFamily, verify_family

Target = Literal["A", "D", "either"]
Mode = Literal["randomized", "exhaustive", "orbit"]

# fixed odd weights for hashing folded PAF profiles; collisions are
# harmless because every probe hit is compared exactly
_WEIGHTS = np.random.default_rng(0x5EED).integers(1, 2**62, 64, dtype=np.int64) | 1


@dataclass(frozen=True)
class Budget:
    max_restarts: int = 10**6
    max_steps: int | None = None  # per restart; None picks a size-based default
    time_limit: float | None = None  # seconds, checked between restarts


@dataclass(frozen=True)
class SearchTask:
    params: ParameterSet
    symmetric_target: Target = "A"
    mode: Mode = "randomized"
    subgroup: tuple[int, ...] | None = None
    seed: int = 0
    budget: Budget = field(default_factory=Budget)
    # orbit mode: role -> candidate orbit-representative sets (0 marks {0})
    pools: dict[str, Sequence[Sequence[int]]] | None = None
    max_families: int | None = None  # randomized default 1, otherwise unlimited
    workers: int = 1
    multipliers: bool = True  # randomized: also walk H-invariant blocks


@dataclass(frozen=True)
class SearchOutcome:
    families: tuple[PropusFamily, ...]
    nodes: int  # (A, B) probes in a join, tabu steps in randomized mode
    candidates: int  # size of the (A, B, D) space covered
    exhausted: bool
    restarts: int = 0
    elapsed: float = 0.0


# ---------------------------------------------------------------- candidates


def symmetric_candidates(v: int, k: int) -> Iterator[Block]:
    """All blocks b = -b of size k in Z_v, in lexicographic order of pair choices."""
    if v < 1 or v % 2 == 0:
        raise DomainError(f"v must be odd and positive, got {v}")
    g = GroupSpec.cyclic(v)
    if not 0 <= k <= v:
        return
    h = (v - 1) // 2
    zero = (0,) if k % 2 else ()
    for pairs in combinations(range(1, h + 1), k // 2):
        yield Block(g, tuple(sorted(zero + pairs + tuple(v - p for p in pairs))))


def count_symmetric_candidates(v: int, k: int) -> int:
    if not 0 <= k <= v:
        return 0
    return comb((v - 1) // 2, k // 2)


def _symmetric_matrix(v: int, k: int) -> np.ndarray:
    rows = [b.indicator() for b in symmetric_candidates(v, k)]
    return np.array(rows, dtype=np.int8).reshape(len(rows), v)


def _zero_subsets(v: int, k: int) -> np.ndarray:
    """Indicator rows of all k-subsets of Z_v that contain 0 (one row for k = 0)."""
    if k == 0:
        return np.zeros((1, v), dtype=np.int8)
    n = comb(v - 1, k - 1)
    flat = np.fromiter(chain.from_iterable(combinations(range(1, v), k - 1)), dtype=np.int32, count=n * (k - 1))
    pos = flat.reshape(n, k - 1)
    m = np.zeros((n, v), dtype=np.int8)
    m[:, 0] = 1
    m[np.repeat(np.arange(n), k - 1), pos.ravel()] = 1
    return m


@njit(cache=True)
def _folded_profiles(m):
    """Folded PAF of 0/1 indicator rows: v - 4 (k - |b & (b + s)|), s = 1..h."""
    n, v = m.shape
    h = (v - 1) // 2
    out = np.empty((n, h), np.int16)
    for r in range(n):
        k = 0
        for t in range(v):
            k += m[r, t]
        for s in range(1, h + 1):
            c = 0
            for t in range(v):
                t2 = t + s
                if t2 >= v:
                    t2 -= v
                c += m[r, t] & m[r, t2]
            out[r, s - 1] = v - 4 * (k - c)
    return out


def _keys(profiles: np.ndarray) -> np.ndarray:
    h = profiles.shape[1]
    with np.errstate(over="ignore"):
        return profiles.astype(np.int64) @ _WEIGHTS[:h]


@dataclass
class _Pool:
    """Indicator rows grouped by folded PAF profile."""

    rows: np.ndarray
    profiles: np.ndarray  # unique profiles
    inverse: np.ndarray  # row -> profile index

    @classmethod
    def build(cls, rows: np.ndarray) -> _Pool:
        prof = _folded_profiles(rows)
        if prof.shape[1] == 0:
            uniq = np.zeros((1, 0), dtype=np.int16)
            inv = np.zeros(len(rows), dtype=np.int64)
        else:
            uniq, inv = np.unique(prof, axis=0, return_inverse=True)
        return cls(rows, uniq, inv.ravel())

    def members(self, p: int) -> np.ndarray:
        return self.rows[self.inverse == p]


# ---------------------------------------------------------------- join


@njit(cache=True)
def _join_kernel(pa, pb, pd, ka, kb, kd_sorted, d_order):
    """Profile index triples (i, j, l) with pa[i] + 2 pb[j] + pd[l] = 0."""
    h = pa.shape[1]
    out = np.empty((16, 3), np.int64)
    n = 0
    nd = len(kd_sorted)
    for i in range(pa.shape[0]):
        for j in range(pb.shape[0]):
            want = -(ka[i] + 2 * kb[j])
            lo = np.searchsorted(kd_sorted, want)
            while lo < nd and kd_sorted[lo] == want:
                l = d_order[lo]
                ok = True
                for s in range(h):
                    if pa[i, s] + 2 * pb[j, s] + pd[l, s] != 0:
                        ok = False
                        break
                if ok:
                    if n == out.shape[0]:
                        grown = np.empty((2 * n, 3), np.int64)
                        grown[:n] = out
                        out = grown
                    out[n, 0] = i
                    out[n, 1] = j
                    out[n, 2] = l
                    n += 1
                lo += 1
    return out[:n]


def _join_profiles(pa: np.ndarray, pb: np.ndarray, pd: np.ndarray) -> np.ndarray:
    pa, pb, pd = (np.ascontiguousarray(p, dtype=np.int64) for p in (pa, pb, pd))
    if not len(pa) or not len(pb) or not len(pd):
        return np.zeros((0, 3), dtype=np.int64)
    ka, kb, kd = _keys(pa), _keys(pb), _keys(pd)
    order = np.argsort(kd, kind="stable")
    return _join_kernel(pa, pb, pd, ka, kb, kd[order], order)


def _as_rows(pool, v: int | None = None) -> np.ndarray:
    if isinstance(pool, np.ndarray):
        return pool.astype(np.int8)
    blocks = list(pool)
    if not blocks:
        return np.zeros((0, v or 1), dtype=np.int8)
    return np.array([b.indicator() for b in blocks], dtype=np.int8)


def paf_join(a_candidates, b_candidates, d_candidates) -> list[tuple[int, int, int]]:
    """Index triples (i, j, l) whose blocks satisfy PAF_a + 2 PAF_b + PAF_d = 0 off shift 0.

    Candidates are sequences of Blocks of one Z_v (or 0/1 indicator arrays).
    """
    ma, mb, md = _as_rows(a_candidates), _as_rows(b_candidates), _as_rows(d_candidates)
    widths = {m.shape[1] for m in (ma, mb, md) if len(m)}
    if len(widths) > 1:
        raise DomainError("candidates come from different groups")
    if not len(ma) or not len(mb) or not len(md):
        return []
    pa = _folded_profiles(ma)
    pool_b, pool_d = _Pool.build(mb), _Pool.build(md)
    hits = _join_profiles(pa, pool_b.profiles, pool_d.profiles)
    out = []
    for i, pj, pl in hits.tolist():
        for j in np.flatnonzero(pool_b.inverse == pj).tolist():
            for l in np.flatnonzero(pool_d.inverse == pl).tolist():
                out.append((i, j, l))
    return sorted(out)


# ---------------------------------------------------------------- helpers


def _oriented(p: ParameterSet, target: str) -> list[tuple[str, ParameterSet]]:
    """(symmetric side, parameters with the symmetric block first)."""
    if target not in ("A", "D", "either"):
        raise DomainError(f"symmetric target must be A, D or either, got {target!r}")
    sides = ["A", "D"] if target == "either" else [target]
    return [(s, p if s == "A" else p.swapped()) for s in sides]


def _check_task(task: SearchTask) -> None:
    rep = validate_parameter_set(task.params)
    if not rep.ok:
        raise DomainError(f"{task.params} is not a propus parameter set")
    if task.params.v % 2 == 0:
        raise DomainError("search needs odd v")


def _emit(group: GroupSpec, rows_a, rows_b, rows_d, side: str, claimed: ParameterSet) -> PropusFamily:
    def blk(r):
        return Block(group, tuple(np.flatnonzero(r).tolist()))

    f = PropusFamily(group, blk(rows_a), blk(rows_b), blk(rows_d))
    if side == "D":
        f = f.swapped()
    f = PropusFamily(f.group, f.a, f.b, f.d, claimed=claimed)
    rep = verify_family(f)
    if not rep.valid:
        raise AssertionError(f"search produced an invalid family for {claimed}")
    return f


def _translates(rows: np.ndarray) -> np.ndarray:
    v = rows.shape[1]
    allr = np.concatenate([np.roll(rows, t, axis=1) for t in range(v)])
    return np.unique(allr, axis=0)


# ---------------------------------------------------------------- exhaustive


def _exhaustive_chunk(args):
    pa, pb, pd = args
    return _join_profiles(pa, pb, pd)


def _search_exhaustive(task: SearchTask) -> SearchOutcome:
    p = task.params
    v = p.v
    g = GroupSpec.cyclic(v)
    t0 = time.perf_counter()
    fams: list[PropusFamily] = []
    nodes = cands = 0
    cap = task.max_families
    for side, q in _oriented(p, task.symmetric_target):
        ma = _symmetric_matrix(v, q.k1)
        pa = _folded_profiles(ma) if len(ma) else np.zeros((0, (v - 1) // 2), np.int16)
        pool_b = _Pool.build(_zero_subsets(v, q.k2))
        pool_d = pool_b if q.k4 == q.k2 else _Pool.build(_zero_subsets(v, q.k4))
        nodes += len(pa) * len(pool_b.profiles)
        cands += len(pa) * comb(v, q.k2) * comb(v, q.k4)
        chunks = np.array_split(np.arange(len(pa)), max(1, task.workers * 4)) if len(pa) else []
        jobs = [(pa[c], pool_b.profiles, pool_d.profiles) for c in chunks if len(c)]
        if task.workers > 1 and len(jobs) > 1:
            with ProcessPoolExecutor(max_workers=task.workers) as ex:
                parts = list(ex.map(_exhaustive_chunk, jobs))
        else:
            parts = [_exhaustive_chunk(j) for j in jobs]
        offsets = np.cumsum([0] + [len(c) for c in chunks if len(c)])
        hits = sorted(
            (int(i + off), int(j), int(l)) for part, off in zip(parts, offsets) for i, j, l in part.tolist()
        )
        # expand profile classes back to every block: all translates of the members
        cache_b: dict[int, np.ndarray] = {}
        cache_d: dict[int, np.ndarray] = {}
        for i, pj, pl in hits:
            if cap is not None and len(fams) >= cap:
                break
            if pj not in cache_b:
                cache_b[pj] = _translates(pool_b.members(pj))
            if pl not in cache_d:
                cache_d[pl] = _translates(pool_d.members(pl))
            for rb in cache_b[pj]:
                for rd in cache_d[pl]:
                    fams.append(_emit(g, ma[i], rb, rd, side, p))
    fams = sorted(set(fams), key=_family_key)
    if cap is not None:
        fams = fams[:cap]
    return SearchOutcome(tuple(fams), nodes, cands, exhausted=True, elapsed=time.perf_counter() - t0)


def _family_key(f: PropusFamily):
    return (f.a.elements, f.b.elements, f.d.elements)


# ---------------------------------------------------------------- randomized


@njit(cache=True)
def _tile(x, v, xt):
    for t in range(v):
        xt[t] = x[t]
        xt[t + v] = x[t]
        xt[t + 2 * v] = x[t]


@njit(cache=True)
def _paf_conv(xt, v, P2, C2):
    # P2[e] = PAF(e mod v) and C2[m] = periodic self-convolution at m mod v
    for e in range(v):
        acc = 0
        acc2 = 0
        for t in range(v):
            xv = xt[v + t]
            acc += xv * xt[v + t + e]
            acc2 += xv * xt[v + e - t]
        P2[e] = acc
        P2[e + v] = acc
        C2[e] = acc2
        C2[e + v] = acc2


@njit(cache=True)
def _grad(xt, v, F, G):
    for i in range(v):
        acc = 0
        base = v + i
        for e in range(1, v):
            acc += F[e] * xt[base + e]
        G[i] = -2 * xt[base] * acc


@njit(cache=True)
def _tabu_walk(v, k1, k2, k4, seed, maxsteps, tenure):
    """One restart of tabu descent with A symmetric.

    Returns (steps, a, b, d); steps is -1 when the walk ran out of steps.
    A moves exchange a negation pair inside A with one outside; B and D
    moves swap one member with one non-member.  Their cost deltas are
    exact and O(h) resp. O(1) using the tiled PAF and convolution arrays.
    Among equal best moves the first scanned wins (A before B before D,
    then by position).
    """
    np.random.seed(seed)
    h = (v - 1) // 2
    fold = np.empty(3 * v, np.int64)
    for e in range(3 * v):
        r = e % v
        fold[e] = r if r <= h else v - r
    a = np.ones(v, np.int64)
    b = np.ones(v, np.int64)
    d = np.ones(v, np.int64)
    perm = np.random.permutation(h) + 1
    if k1 % 2 == 1:
        a[0] = -1
    for i in range(k1 // 2):
        p = perm[i]
        a[p] = -1
        a[v - p] = -1
    perm = np.random.permutation(v)
    for i in range(k2):
        b[perm[i]] = -1
    perm = np.random.permutation(v)
    for i in range(k4):
        d[perm[i]] = -1
    at = np.empty(3 * v, np.int64)
    bt = np.empty(3 * v, np.int64)
    dt = np.empty(3 * v, np.int64)
    _tile(a, v, at)
    _tile(b, v, bt)
    _tile(d, v, dt)
    Pa = np.zeros(2 * v, np.int64)
    Ca = np.zeros(2 * v, np.int64)
    Pb = np.zeros(2 * v, np.int64)
    Cb = np.zeros(2 * v, np.int64)
    Pd = np.zeros(2 * v, np.int64)
    Cd = np.zeros(2 * v, np.int64)
    _paf_conv(at, v, Pa, Ca)
    _paf_conv(bt, v, Pb, Cb)
    _paf_conv(dt, v, Pd, Cd)
    F = np.zeros(v, np.int64)
    for e in range(v):
        F[e] = Pa[e] + 2 * Pb[e] + Pd[e]
    cost = 0
    for s in range(1, h + 1):
        cost += F[s] * F[s]
    if cost == 0:
        return 0, a, b, d
    Gb = np.zeros(v, np.int64)
    Gd = np.zeros(v, np.int64)
    tabuA = np.zeros(v, np.int64)
    tabuB = np.zeros(v, np.int64)
    tabuD = np.zeros(v, np.int64)
    out = np.zeros(h + 1, np.int64)
    best = cost
    inA = np.empty(h, np.int64)
    outA = np.empty(h, np.int64)
    inB = np.empty(v, np.int64)
    outB = np.empty(v, np.int64)
    for step in range(1, maxsteps + 1):
        _grad(bt, v, F, Gb)
        _grad(dt, v, F, Gd)
        bestc = 1 << 60
        bw = -1
        bi = -1
        bj = -1
        ni = 0
        no = 0
        for p in range(1, h + 1):
            if at[v + p] == -1:
                inA[ni] = p
                ni += 1
            else:
                outA[no] = p
                no += 1
        for x1 in range(ni):
            p = inA[x1]
            for x2 in range(no):
                q = outA[x2]
                ap = at[v + p]
                aq = at[v + q]
                for s in range(1, h + 1):
                    out[s] = -4 * ap * (at[v + p + s] + at[v + p - s]) - 4 * aq * (at[v + q + s] + at[v + q - s])
                out[fold[2 * p]] += 4
                out[fold[2 * q]] += 4
                out[fold[v + q - p]] += 8 * ap * aq
                out[fold[q + p]] += 8 * ap * aq
                dc = 0
                for s in range(1, h + 1):
                    dc += out[s] * (2 * F[s] + out[s])
                if (tabuA[p] > step or tabuA[q] > step) and cost + dc >= best:
                    continue
                if dc < bestc:
                    bestc = dc
                    bw = 0
                    bi = p
                    bj = q
        for which in range(1, 3):
            if which == 1:
                xt = bt
                G = Gb
                P = Pb
                C = Cb
                tb = tabuB
                w = 2
            else:
                xt = dt
                G = Gd
                P = Pd
                C = Cd
                tb = tabuD
                w = 1
            ni = 0
            no = 0
            for i in range(v):
                if xt[v + i] == -1:
                    inB[ni] = i
                    ni += 1
                else:
                    outB[no] = i
                    no += 1
            for x1 in range(ni):
                i = inB[x1]
                Qi = 8 * h + 4 * (C[2 * i] - 1)
                for x2 in range(no):
                    j = outB[x2]
                    dd = fold[v + j - i]
                    lin = 2 * w * (G[i] + G[j] - 4 * F[dd])
                    gid = 2 * (xt[v + i + dd] + xt[v + i - dd])
                    gjd = -2 * (xt[v + j + dd] + xt[v + j - dd])
                    X = -4 * ((P[v + j - i] + 1) + (C[i + j] + 1))
                    Qj = 8 * h + 4 * (C[2 * j] - 1)
                    dc = lin + w * w * (Qi + Qj + 2 * X + 16 - 8 * (gid + gjd))
                    if (tb[i] > step or tb[j] > step) and cost + dc >= best:
                        continue
                    if dc < bestc:
                        bestc = dc
                        bw = which
                        bi = i
                        bj = j
        if bw < 0:
            continue
        ten = tenure + np.random.randint(0, 3)
        if bw == 0:
            a[bi] = -a[bi]
            a[v - bi] = -a[v - bi]
            a[bj] = -a[bj]
            a[v - bj] = -a[v - bj]
            _tile(a, v, at)
            _paf_conv(at, v, Pa, Ca)
            tabuA[bi] = step + ten
            tabuA[bj] = step + ten
        elif bw == 1:
            b[bi] = -b[bi]
            b[bj] = -b[bj]
            _tile(b, v, bt)
            _paf_conv(bt, v, Pb, Cb)
            tabuB[bi] = step + ten
            tabuB[bj] = step + ten
        else:
            d[bi] = -d[bi]
            d[bj] = -d[bj]
            _tile(d, v, dt)
            _paf_conv(dt, v, Pd, Cd)
            tabuD[bi] = step + ten
            tabuD[bj] = step + ten
        for e in range(v):
            F[e] = Pa[e] + 2 * Pb[e] + Pd[e]
        cost = 0
        for s in range(1, h + 1):
            cost += F[s] * F[s]
        if cost < best:
            best = cost
        if cost == 0:
            return step, a, b, d
    return -1, a, b, d


@njit(cache=True)
def _flip_delta(x, v, h, pos, m, out):
    """out[s] = change of PAF(s), s = 1..h, when x is negated at pos[:m]."""
    for s in range(1, h + 1):
        acc = 0
        for r in range(m):
            t = pos[r]
            t1 = t + s
            if t1 >= v:
                t1 -= v
            t2 = t - s
            if t2 < 0:
                t2 += v
            acc += -2 * x[t] * (x[t1] + x[t2])
        out[s] = acc
    for r in range(m):
        for q in range(r + 1, m):
            t = pos[r]
            u = pos[q]
            e = u - t
            if e < 0:
                e += v
            if e > h:
                e = v - e
            if e != 0:
                out[e] += 4 * x[t] * x[u]


@njit(cache=True)
def _orbit_walk(v, units, usize, role, target, seed, maxsteps, tenure):
    """Tabu descent over unions of units (orbits, or negation-closed orbit pairs for A).

    units[u, :usize[u]] are the positions of unit u; role[u] in {0, 1, 2}
    says which block (A, B, D) the unit belongs to; target[r] is the
    number of elements block r must hold.  A move drops one chosen unit of
    a block and adds an unchosen unit of the same size.
    Returns (steps, chosen) with steps = -1 on failure.
    """
    np.random.seed(seed)
    h = (v - 1) // 2
    nu = len(usize)
    chosen = np.zeros(nu, np.int64)
    x = np.ones((3, v), np.int64)
    # random fill: shuffle units, take greedily while sizes fit, retry
    for r in range(3):
        for attempt in range(1000):
            perm = np.random.permutation(nu)
            tot = 0
            for u in range(nu):
                if role[u] == r:
                    chosen[u] = 0
            for idx in range(nu):
                u = perm[idx]
                if role[u] == r and tot + usize[u] <= target[r]:
                    chosen[u] = 1
                    tot += usize[u]
            if tot == target[r]:
                break
        if tot != target[r]:
            return -2, chosen
        for u in range(nu):
            if role[u] == r and chosen[u] == 1:
                for q in range(usize[u]):
                    x[r, units[u, q]] = -1
    F = np.zeros(h + 1, np.int64)
    for s in range(1, h + 1):
        acc = 0
        for t in range(v):
            t2 = (t + s) % v
            acc += x[0, t] * x[0, t2] + 2 * x[1, t] * x[1, t2] + x[2, t] * x[2, t2]
        F[s] = acc
    cost = 0
    for s in range(1, h + 1):
        cost += F[s] * F[s]
    if cost == 0:
        return 0, chosen
    best = cost
    tabu = np.zeros(nu, np.int64)
    maxu = units.shape[1]
    pos = np.empty(2 * maxu, np.int64)
    out = np.zeros(h + 1, np.int64)
    wts = np.array([1, 2, 1])
    for step in range(1, maxsteps + 1):
        bestc = 1 << 60
        bu = -1
        bw = -1
        for u in range(nu):
            if chosen[u] != 1:
                continue
            r = role[u]
            for w in range(nu):
                if chosen[w] != 0 or role[w] != r or usize[w] != usize[u]:
                    continue
                m = 0
                for q in range(usize[u]):
                    pos[m] = units[u, q]
                    m += 1
                for q in range(usize[w]):
                    pos[m] = units[w, q]
                    m += 1
                _flip_delta(x[r], v, h, pos, m, out)
                dc = 0
                for s in range(1, h + 1):
                    o = wts[r] * out[s]
                    dc += o * (2 * F[s] + o)
                if (tabu[u] > step or tabu[w] > step) and cost + dc >= best:
                    continue
                if dc < bestc:
                    bestc = dc
                    bu = u
                    bw = w
        if bu < 0:
            continue
        r = role[bu]
        m = 0
        for q in range(usize[bu]):
            pos[m] = units[bu, q]
            m += 1
        for q in range(usize[bw]):
            pos[m] = units[bw, q]
            m += 1
        _flip_delta(x[r], v, h, pos, m, out)
        for s in range(1, h + 1):
            F[s] += wts[r] * out[s]
        for q in range(m):
            x[r, pos[q]] = -x[r, pos[q]]
        chosen[bu] = 0
        chosen[bw] = 1
        ten = tenure + np.random.randint(0, 3)
        tabu[bu] = step + ten
        tabu[bw] = step + ten
        cost += bestc
        if cost < best:
            best = cost
        if cost == 0:
            return step, chosen
    return -1, chosen


# base tabu tenures (each move adds 0..2); 10 beat 5, 7 and 14 for v from 11 to 37
_TENURE = 10
_ORBIT_TENURE = 3


def _restart_seed(seed: int, restart: int) -> int:
    return int(np.random.SeedSequence([seed, restart]).generate_state(1)[0] & 0x7FFFFFFF)


def _default_steps(v: int) -> int:
    return max(20_000, 40 * v**3)


def _orbit_steps(v: int, subgroup) -> int:
    n = (v - 1) // len(subgroup)
    return max(5_000, 20 * n**3)


def _orbit_units(v: int, subgroup, q: ParameterSet):
    """Unit table for the orbit walk: zero, orbits and negation-closed orbit pairs."""
    orbs = [o.elements for o in orbits(v, subgroup)]
    g = GroupSpec.cyclic(v)
    neg = {o: tuple(sorted((-x) % v for x in o)) for o in orbs}
    sym_units: list[tuple[int, ...]] = [(0,)]
    seen: set = set()
    for o in orbs:
        if o in seen:
            continue
        seen.update({o, neg[o]})
        sym_units.append(tuple(sorted(set(o) | set(neg[o]))))
    plain = [(0,)] + orbs
    units, roles = [], []
    for r, pool in ((0, sym_units), (1, plain), (2, plain)):
        units += pool
        roles += [r] * len(pool)
    sizes = [len(u) for u in units]
    tab = np.zeros((len(units), max(sizes)), dtype=np.int64)
    for i, u in enumerate(units):
        tab[i, : len(u)] = u
    for r, k in enumerate((q.k1, q.k2, q.k4)):
        if not _tileable([s for s, rr in zip(sizes, roles) if rr == r], k):
            raise InfeasibleTaskError(f"block size {k} is not a union of orbits of {sorted(subgroup)} in Z_{v}")
    return tab, np.array(sizes, dtype=np.int64), np.array(roles, dtype=np.int64), g


def _tileable(sizes: list[int], k: int) -> bool:
    reach = 1
    for s in sizes:
        reach |= reach << s
    return bool(reach >> k & 1)


def _randomized_one(args):
    v, q, subgroup, seed, steps = args
    if subgroup is None:
        it, a, b, d = _tabu_walk(v, q.k1, q.k2, q.k4, seed, steps, _TENURE)
        if it < 0:
            return it, None
        rows = [(x == -1).astype(np.int8) for x in (a, b, d)]
        return it, rows
    tab, sizes, roles, _ = _orbit_units(v, subgroup, q)
    it, chosen = _orbit_walk(v, tab, sizes, roles, np.array([q.k1, q.k2, q.k4]), seed, steps, _ORBIT_TENURE)
    if it < 0:
        return it, None
    rows = np.zeros((3, v), dtype=np.int8)
    for u in np.flatnonzero(chosen):
        rows[roles[u], tab[u, : sizes[u]]] = 1
    return it, list(rows)


def _lanes(task: SearchTask, v: int) -> list[tuple[str, ParameterSet, tuple[int, ...] | None, int]]:
    """(side, oriented parameters, subgroup or None, steps) for each restart slot."""
    sides = _oriented(task.params, task.symmetric_target)
    fixed = task.budget.max_steps
    if task.subgroup is not None:
        for _, q in sides:
            _orbit_units(v, task.subgroup, q)  # validates subgroup and tiling up front
        return [(side, q, task.subgroup, fixed or _orbit_steps(v, task.subgroup)) for side, q in sides]
    lanes = [(side, q, None, fixed or _default_steps(v)) for side, q in sides]
    if task.multipliers:
        for h in cyclic_subgroups(v):
            if len(h) < 2:
                continue
            for side, q in sides:
                try:
                    _orbit_units(v, h, q)
                except InfeasibleTaskError:
                    continue
                lanes.append((side, q, h, fixed or _orbit_steps(v, h)))
    return lanes


def _search_randomized(task: SearchTask) -> SearchOutcome:
    p = task.params
    v = p.v
    g = GroupSpec.cyclic(v)
    b = task.budget
    cap = 1 if task.max_families is None else task.max_families
    t0 = time.perf_counter()
    lanes = _lanes(task, v)
    fams: list[PropusFamily] = []
    nodes = 0
    restart = 0
    pool = ProcessPoolExecutor(max_workers=task.workers) if task.workers > 1 else None
    try:
        while restart < b.max_restarts and len(fams) < cap:
            if b.time_limit is not None and time.perf_counter() - t0 > b.time_limit:
                break
            batch = range(restart, min(b.max_restarts, restart + max(1, task.workers)))
            jobs = []
            for r in batch:
                _, q, h, steps = lanes[r % len(lanes)]
                jobs.append((v, q, h, _restart_seed(task.seed, r), steps))
            results = list(pool.map(_randomized_one, jobs)) if pool else [_randomized_one(j) for j in jobs]
            for r, job, (it, rows) in zip(batch, jobs, results):
                restart = r + 1
                nodes += job[-1] if it < 0 else it
                if rows is not None:
                    fams.append(_emit(g, *rows, lanes[r % len(lanes)][0], p))
                    if len(fams) >= cap:
                        break
    finally:
        if pool:
            pool.shutdown()
    return SearchOutcome(
        tuple(fams), nodes, candidates=nodes, exhausted=False, restarts=restart, elapsed=time.perf_counter() - t0
    )


def search_cyclic(task: SearchTask) -> SearchOutcome:
    _check_task(task)
    if task.mode == "exhaustive":
        return _search_exhaustive(task)
    if task.mode == "randomized":
        return _search_randomized(task)
    raise DomainError(f"search_cyclic handles randomized and exhaustive modes, not {task.mode!r}")


# ---------------------------------------------------------------- orbit


def _orbit_pool_rows(v, orbs, k, symmetric, given):
    """Indicator rows of orbit unions of size k (0 marks the orbit {0})."""
    by_rep = {o.elements[0]: o for o in orbs}
    if given is not None:
        rows = []
        for reps in given:
            reps = list(reps)
            blk = orbit_union(orbs, [r for r in reps if r], include_zero=0 in reps)
            if len(blk) != k:
                raise InfeasibleTaskError(f"pool entry {sorted(reps)} has {len(blk)} elements, wanted {k}")
            rows.append(blk.indicator())
        return np.array(rows, dtype=np.int8).reshape(len(rows), v)
    units: list[tuple[int, ...]] = []
    if symmetric:
        seen: set[int] = set()
        for rep, o in by_rep.items():
            if rep in seen:
                continue
            mate = min((-x) % v for x in o.elements)
            seen.update({rep, mate})
            units.append(tuple(sorted(set(o.elements) | set(by_rep[mate].elements))))
    else:
        units = [o.elements for o in orbs]
    sizes = [len(u) for u in units]
    out = []
    for zero in (0, 1):
        if k - zero >= 0:
            _collect_unions(units, sizes, k - zero, zero, v, out)
    return np.array(out, dtype=np.int8).reshape(len(out), v)


def _collect_unions(units, sizes, k, zero, v, out):
    n = len(units)
    suffix = [0] * (n + 1)
    for i in range(n - 1, -1, -1):
        suffix[i] = suffix[i + 1] + sizes[i]
    row = np.zeros(v, dtype=np.int8)
    row[0] = zero

    def rec(i, rem):
        if rem == 0:
            out.append(row.copy())
            return
        if i == n or rem > suffix[i]:
            return
        if sizes[i] <= rem:
            row[list(units[i])] = 1
            rec(i + 1, rem - sizes[i])
            row[list(units[i])] = 0
        rec(i + 1, rem)

    rec(0, k)


def orbit_pool_size(v: int, subgroup, k: int, symmetric: bool = False) -> int:
    """Number of orbit unions (with or without 0) of size k: the search-space factor for one block."""
    orbs = orbits(v, subgroup)
    if symmetric:
        by_rep = {o.elements[0]: o for o in orbs}
        seen: set[int] = set()
        sizes = []
        for rep, o in by_rep.items():
            if rep in seen:
                continue
            mate = min((-x) % v for x in o.elements)
            seen.update({rep, mate})
            sizes.append(len(o) * (1 if mate == rep else 2))
    else:
        sizes = [len(o) for o in orbs]
    ways = [1] + [0] * k
    for s in sizes:
        for t in range(k, s - 1, -1):
            ways[t] += ways[t - s]
    return ways[k] + (ways[k - 1] if k >= 1 else 0)


def search_orbit(task: SearchTask) -> SearchOutcome:
    _check_task(task)
    if not task.subgroup:
        raise DomainError("orbit search needs a subgroup")
    p = task.params
    v = p.v
    g = GroupSpec.cyclic(v)
    orbs = orbits(v, task.subgroup)
    t0 = time.perf_counter()
    pools = task.pools or {}
    fams: list[PropusFamily] = []
    nodes = cands = 0
    for side, q in _oriented(p, task.symmetric_target):
        # caller pools are keyed by the roles of the requested parameter set
        role_a, role_d = ("A", "D") if side == "A" else ("D", "A")
        ma = _orbit_pool_rows(v, orbs, q.k1, True, pools.get(role_a))
        if pools.get(role_a) is not None:
            ma = ma[[bool(np.array_equal(r, r[(-np.arange(v)) % v])) for r in ma]] if len(ma) else ma
        mb = _orbit_pool_rows(v, orbs, q.k2, False, pools.get("B"))
        md = _orbit_pool_rows(v, orbs, q.k4, False, pools.get(role_d))
        if not (len(ma) and len(mb) and len(md)) and not pools:
            raise InfeasibleTaskError(f"block sizes {q.sizes} cannot be tiled by orbits of {sorted(task.subgroup)}")
        nodes += len(ma) * len(mb)
        cands += len(ma) * len(mb) * len(md)
        for i, j, l in paf_join(ma, mb, md):
            fams.append(_emit(g, ma[i], mb[j], md[l], side, p))
    fams = sorted(set(fams), key=_family_key)
    fams = [
        PropusFamily(f.group, f.a, f.b, f.d, f.claimed, tuple(sorted(set(task.subgroup))), _orbit_index_sets(f, orbs))
        for f in fams
    ]
    if task.max_families is not None:
        fams = fams[: task.max_families]
    return SearchOutcome(tuple(fams), nodes, cands, exhausted=not task.pools, elapsed=time.perf_counter() - t0)


def _orbit_index_sets(f: PropusFamily, orbs) -> dict[str, tuple[int, ...]]:
    out = {}
    for role, blk in (("A", f.a), ("B", f.b), ("D", f.d)):
        reps = {0} if 0 in blk else set()
        reps |= {o.elements[0] for o in orbs if o.elements[0] in blk}
        out[role] = tuple(sorted(reps))
    return out
