"""The bundled corpus of published families and its annotation checks."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from importlib import resources

from propus.errors import ChecksumError
from propus.familyfile import FamilyFile, read_family_file
from propus.params import ParameterSet
from propus.verify import VerificationReport, verify_family


@dataclass(frozen=True)
class CorpusEntry:
    source: str  # "orders", "appendix" or "exceptional"
    params: ParameterSet
    index: int
    file: str
    family_file: FamilyFile
    symmetric: str  # "", "A", "D" or "AD"
    skew: str
    markers: tuple[str, ...]
    repairs: tuple[str, ...]

    @property
    def family(self):
        return self.family_file.family

    @property
    def label(self) -> str:
        return f"{self.source} {self.params} #{self.index}"


@dataclass(frozen=True)
class EntryCheck:
    entry: CorpusEntry
    report: VerificationReport
    annotations_ok: bool

    @property
    def ok(self) -> bool:
        return self.report.valid and self.annotations_ok


def _data():
    return resources.files("propus") / "data"


def _manifest() -> dict:
    return json.loads((_data() / "manifest.json").read_text())


def cleaning_log() -> str:
    return (_data() / "cleaning_log.txt").read_text()


def parameter_table() -> list[tuple[ParameterSet, str]]:
    """Rows of the published normalized table with their annotation strings."""
    return [(ParameterSet.parse(r["params"]), r["annotation"]) for r in _manifest()["table"]]


def ingest_paper_corpus() -> list[CorpusEntry]:
    out = []
    root = _data() / "corpus"
    for e in _manifest()["entries"]:
        raw = (root / e["file"]).read_bytes()
        if hashlib.sha256(raw).hexdigest() != e["sha256"]:
            raise ChecksumError(f"{e['file']}: checksum mismatch")
        exp = e["expected"]
        out.append(
            CorpusEntry(
                source=e["source"],
                params=ParameterSet.parse(e["params"]),
                index=e["index"],
                file=e["file"],
                family_file=read_family_file(raw),
                symmetric=exp["symmetric"],
                skew=exp["skew"],
                markers=tuple(exp["markers"]),
                repairs=tuple(e["repairs"]),
            )
        )
    return out


def check_entry(entry: CorpusEntry) -> EntryCheck:
    rep = verify_family(entry.family)
    sym = ("A" if rep.a_symmetric else "") + ("D" if rep.d_symmetric else "")
    skew = ("A" if rep.a_skew else "") + ("D" if rep.d_skew else "")
    ok = sym == entry.symmetric and skew == entry.skew
    ok = ok and rep.inferred == entry.params
    if "T" in entry.markers:
        ok = ok and rep.a_symmetric and rep.b_symmetric and rep.d_symmetric
    if "X" in entry.markers:
        ok = ok and bool(skew) and bool(sym)
    return EntryCheck(entry, rep, ok)


def verify_corpus(entries: list[CorpusEntry] | None = None) -> list[EntryCheck]:
    return [check_entry(e) for e in (entries if entries is not None else ingest_paper_corpus())]
