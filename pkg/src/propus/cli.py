"""Command-line driver.

Exit codes: 0 success, 1 a check failed (invalid family, nothing found,
conjecture violation), 2 family-file parse error, 64 usage error,
70 internal error.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from propus import conjecture, corpus, hadamard, params, search
from propus.errors import (
    ConjectureViolation,
    DomainError,
    InfeasibleTaskError,
    InvalidSubgroupError,
    ParseError,
    PropusError,
)
from propus.familyfile import parse_family_file, serialize_family
from propus.verify import verify_family

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 64, 70


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(t) for t in text.replace(",", " ").split())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _pick_set(v: int, index: int) -> params.ParameterSet:
    sets = params.enumerate_parameter_sets(v)
    if not 1 <= index <= len(sets):
        raise UsageError(f"--set must be between 1 and {len(sets)} for v={v}")
    return sets[index - 1]


def _threads(n: int | None) -> int:
    return n if n else (os.cpu_count() or 1)


def cmd_params(a) -> int:
    vs = range(3, a.all_odd_to + 1, 2) if a.all_odd_to else [a.v]
    if a.v is None and not a.all_odd_to:
        raise UsageError("params needs <v> or --all-odd-to N")
    for v in vs:
        for i, p in enumerate(params.enumerate_parameter_sets(v), start=1):
            print(f"{v}\t{i}\t{p}" if a.all_odd_to else f"{i}\t{p}")
    return EXIT_OK


def cmd_verify(a) -> int:
    status = EXIT_OK
    for name in a.files:
        try:
            fam = parse_family_file(Path(name).read_bytes())
        except ParseError as e:
            print(f"{name}: parse error: {e}", file=sys.stderr)
            return EXIT_PARSE
        rep = verify_family(fam)
        sym = ("A" if rep.a_symmetric else "") + ("D" if rep.d_symmetric else "")
        skew = ("A" if rep.a_skew else "") + ("D" if rep.d_skew else "")
        verdict = "valid" if rep.valid else "INVALID"
        print(f"{name}: {verdict} {rep.inferred or fam.claimed or ''} symmetric={sym or '-'} skew={skew or '-'}")
        if not rep.valid:
            bad = [i + 1 for i, x in enumerate(rep.defect) if x]
            if not rep.sizes_ok:
                print(f"  block sizes do not match {fam.claimed}")
            if bad:
                print(f"  {len(bad)} nonzero elements with the wrong count, first at {bad[0]}")
            status = EXIT_FAIL
    return status


def cmd_build(a) -> int:
    try:
        fam = parse_family_file(Path(a.file).read_bytes())
    except ParseError as e:
        print(f"{a.file}: parse error: {e}", file=sys.stderr)
        return EXIT_PARSE
    m = hadamard.family_to_matrix(fam, prefer=a.prefer)
    print(f"order {m.order} hadamard={'yes' if m.is_hadamard else 'no'} symmetric={'yes' if m.is_symmetric else 'no'}")
    if a.output:
        fmt = a.format or ("text" if a.output.endswith(".txt") else "pbm")
        Path(a.output).write_bytes(hadamard.export_matrix(m, fmt))
    return EXIT_OK if m.is_hadamard else EXIT_FAIL


def _write_families(fams, out: str | None) -> None:
    blobs = [serialize_family(f) for f in fams]
    if out is None:
        sys.stdout.write("\n".join(b.decode() for b in blobs))
        return
    path = Path(out)
    if len(blobs) == 1 and path.suffix:
        path.write_bytes(blobs[0])
        return
    path.mkdir(parents=True, exist_ok=True)
    for i, b in enumerate(blobs, start=1):
        (path / f"family-{i}.fam").write_bytes(b)


def _budget(a) -> search.Budget:
    return search.Budget(
        max_restarts=a.restarts if a.restarts is not None else 10**6,
        max_steps=a.steps,
        time_limit=a.budget,
    )


def cmd_search(a) -> int:
    p = _pick_set(a.v, a.set)
    task = search.SearchTask(
        params=p,
        symmetric_target=a.symmetric,
        mode=a.mode,
        subgroup=a.subgroup,
        seed=a.seed,
        budget=_budget(a),
        max_families=a.max_families,
        workers=_threads(a.threads),
        multipliers=not a.no_multipliers,
    )
    out = search.search_cyclic(task)
    _write_families(out.families, a.output)
    print(
        f"{p}: {len(out.families)} families, nodes={out.nodes} restarts={out.restarts} "
        f"exhausted={'yes' if out.exhausted else 'no'} time={out.elapsed:.1f}s",
        file=sys.stderr,
    )
    if out.families or out.exhausted:
        return EXIT_OK
    return EXIT_FAIL


def _parse_pools(specs) -> dict | None:
    if not specs:
        return None
    pools: dict[str, list] = {}
    for spec in specs:
        role, _, rest = spec.partition("=")
        if role not in ("A", "B", "D") or not rest:
            raise UsageError(f"--pool expects ROLE=i,j,k with ROLE in A, B, D; got {spec!r}")
        pools.setdefault(role, []).append(_int_list(rest))
    return pools


def cmd_orbit_search(a) -> int:
    p = _pick_set(a.v, a.set)
    task = search.SearchTask(
        params=p,
        symmetric_target=a.symmetric,
        mode="orbit",
        subgroup=a.subgroup,
        pools=_parse_pools(a.pool),
        max_families=a.max_families,
    )
    out = search.search_orbit(task)
    _write_families(out.families, a.output)
    print(f"{p}: {len(out.families)} families, candidates={out.candidates} time={out.elapsed:.1f}s", file=sys.stderr)
    return EXIT_OK if out.families or out.exhausted else EXIT_FAIL


def cmd_conjecture1(a) -> int:
    records, s = conjecture.check_conjecture1(a.max_prime, workers=_threads(a.threads))
    if a.csv:
        Path(a.csv).write_text(conjecture.conjecture1_csv(records))
    print(f"primes={s.primes} N_s=s: {s.n_equals_s} N_s=s+2: {s.n_equals_s_plus_2} violations={len(s.violations)}")
    for v in s.violations[:20]:
        print(f"  violation at s={v}")
    return EXIT_OK if not s.violations else EXIT_FAIL


def cmd_conjecture2(a) -> int:
    records, s = conjecture.check_conjecture2(a.max_prime, workers=_threads(a.threads))
    if a.csv:
        Path(a.csv).write_text(conjecture.conjecture2_csv(records))
    print(
        f"primes={s.primes} unique={s.unique} square={s.square} "
        f"twice-square={s.twice_square} violations={len(s.violations)}"
    )
    for v in s.violations[:20]:
        print(f"  violation at s={v}")
    return EXIT_OK if not s.violations else EXIT_FAIL


def cmd_exceptional(a) -> int:
    print(f"Pi_{a.s} = {params.exceptional_set(a.s)}")
    if a.s % 4 == 1 and conjecture.is_prime(a.s):
        print(f"Pi'_{a.s} = {params.exceptional_companion(a.s)}")
    return EXIT_OK


def cmd_corpus(a) -> int:
    if a.action == "log":
        sys.stdout.write(corpus.cleaning_log())
        return EXIT_OK
    checks = corpus.verify_corpus()
    bad = 0
    for c in checks:
        if a.verbose or not c.ok:
            print(f"{'ok  ' if c.ok else 'FAIL'} {c.entry.label}")
        bad += not c.ok
    print(f"{len(checks)} entries, {len(checks) - bad} verified with matching annotations")
    return EXIT_OK if not bad else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="propus", description="Propus difference families and symmetric Hadamard matrices.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("params", help="list normalized parameter sets")
    p.add_argument("v", type=int, nargs="?")
    p.add_argument("--all-odd-to", type=int, metavar="N")
    p.set_defaults(fn=cmd_params)

    p = sub.add_parser("verify", help="verify family files")
    p.add_argument("files", nargs="+")
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("build", help="assemble and certify the propus matrix")
    p.add_argument("file")
    p.add_argument("--prefer", choices=["auto", "A", "D"], default="auto")
    p.add_argument("-o", "--output")
    p.add_argument("--format", choices=["pbm", "text"])
    p.set_defaults(fn=cmd_build)

    p = sub.add_parser("search", help="randomized or exhaustive cyclic search")
    p.add_argument("v", type=int)
    p.add_argument("--set", type=int, required=True, metavar="INDEX", help="1-based index into `params v`")
    p.add_argument("--symmetric", choices=["A", "D", "either"], default="A")
    p.add_argument("--mode", choices=["randomized", "exhaustive"], default="randomized")
    p.add_argument("--subgroup", type=_int_list, help="restrict the randomized walk to H-invariant blocks")
    p.add_argument("--no-multipliers", action="store_true", help="only plain walks, no orbit-walk restarts")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int)
    p.add_argument("--budget", type=float, metavar="SECONDS", help="wall-clock limit")
    p.add_argument("--restarts", type=int)
    p.add_argument("--steps", type=int, help="steps per restart")
    p.add_argument("--max-families", type=int)
    p.add_argument("-o", "--output", help="family file, or directory for several")
    p.set_defaults(fn=cmd_search)

    p = sub.add_parser("orbit-search", help="search unions of subgroup orbits")
    p.add_argument("v", type=int)
    p.add_argument("--subgroup", type=_int_list, required=True)
    p.add_argument("--set", type=int, required=True, metavar="INDEX")
    p.add_argument("--symmetric", choices=["A", "D", "either"], default="A")
    p.add_argument("--pool", action="append", metavar="ROLE=i,j,...", help="candidate orbit set (repeatable)")
    p.add_argument("--max-families", type=int)
    p.add_argument("-o", "--output")
    p.set_defaults(fn=cmd_orbit_search)

    for name, fn in (("conjecture1", cmd_conjecture1), ("conjecture2", cmd_conjecture2)):
        p = sub.add_parser(name, help=f"test {name} over a prime range")
        p.add_argument("--max-prime", type=int, required=True)
        p.add_argument("--csv")
        p.add_argument("--threads", type=int)
        p.set_defaults(fn=fn)

    p = sub.add_parser("exceptional", help="exceptional parameter sets for s")
    p.add_argument("s", type=int)
    p.set_defaults(fn=cmd_exceptional)

    p = sub.add_parser("corpus", help="bundled published families")
    p.add_argument("action", choices=["verify", "log"])
    p.add_argument("-v", "--verbose", action="store_true")
    p.set_defaults(fn=cmd_corpus)
    return ap


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.fn(args)
    except UsageError as e:
        print(e, file=sys.stderr)
        return EXIT_USAGE
    except (DomainError, InvalidSubgroupError, InfeasibleTaskError) as e:
        print(f"propus: {e}", file=sys.stderr)
        return EXIT_USAGE
    except ConjectureViolation as e:
        print(f"propus: {e}", file=sys.stderr)
        return EXIT_FAIL
    except OSError as e:
        print(f"propus: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (PropusError, Exception) as e:  # noqa: BLE001
        print(f"propus: internal error: {e!r}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
