"""Persistent count cache and resumable search checkpoints.

The cache is a line-oriented UTF-8 TSV, one record per line:

    kind <TAB> index <TAB> value <TAB> provenance <TAB> version <TAB> checksum

with comma-joined integer indices and decimal big-integer values. Records are
append-only; the checksum covers kind+index+value so corruption stays local to
a line. Checkpoints for long searches live next to it as JSON, one file per
query, keyed by a content hash of the query.
"""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable, Optional

from . import mpart

FORMAT_VERSION = "1"
CACHE_ENV_VAR = "HDPART_CACHE_DIR"
CACHE_FILENAME = "counts.tsv"


def _checksum(kind: str, index: tuple[int, ...], value: int) -> str:
    payload = f"{kind}|{','.join(map(str, index))}|{value}"
    return hashlib.sha256(payload.encode()).hexdigest()[:12]


@dataclass(frozen=True)
class CacheRecord:
    kind: str
    index: tuple[int, ...]
    value: int
    provenance: str
    version: str = FORMAT_VERSION

    def line(self) -> str:
        return "\t".join(
            (
                self.kind,
                ",".join(map(str, self.index)),
                str(self.value),
                self.provenance,
                self.version,
                _checksum(self.kind, self.index, self.value),
            )
        )

    @classmethod
    def parse(cls, line: str) -> "CacheRecord":
        kind, idx, value, prov, version, check = line.rstrip("\n").split("\t")
        index = tuple(int(x) for x in idx.split(",")) if idx else ()
        record = cls(kind, index, int(value), prov, version)
        if _checksum(kind, index, record.value) != check:
            raise ValueError(f"checksum mismatch on cache line: {line!r}")
        return record


def default_cache_dir() -> Optional[Path]:
    env = os.environ.get(CACHE_ENV_VAR)
    return Path(env) if env else None


class CacheStore:
    """Append-only store of exact count values."""

    def __init__(self, directory: Path):
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)
        self.path = self.directory / CACHE_FILENAME
        self._entries: dict[tuple[str, tuple[int, ...]], CacheRecord] = {}
        if self.path.exists():
            for line in self.path.read_text().splitlines():
                if not line.strip():
                    continue
                record = CacheRecord.parse(line)
                self._entries[(record.kind, record.index)] = record

    def get(self, kind: str, index: tuple[int, ...]) -> Optional[CacheRecord]:
        return self._entries.get((kind, tuple(index)))

    def put(self, kind: str, index: tuple[int, ...], value: int, provenance: str):
        index = tuple(index)
        existing = self._entries.get((kind, index))
        if existing is not None:
            if existing.value != value:
                raise ValueError(
                    f"cache conflict at {kind}{index}: {existing.value} vs {value}"
                )
            return existing
        record = CacheRecord(kind, index, value, provenance)
        with self.path.open("a", encoding="utf-8") as fh:
            fh.write(record.line() + "\n")
        self._entries[(kind, index)] = record
        return record

    def __len__(self) -> int:
        return len(self._entries)


def load_golden_records() -> list[CacheRecord]:
    """Reference values shipped with the package (large inputs that are not
    desk-scale recomputable; sources documented in golden/README)."""
    out = []
    data = resources.files("hdpart.golden").joinpath("seeded_counts.tsv").read_text()
    for line in data.splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        out.append(CacheRecord.parse(line))
    return out


def load_golden_c6() -> tuple[list[str], list[int]]:
    """The degree-9 numerator (grammar text, one coefficient per line is not
    used; single line) and the diagonal values it encodes."""
    files = resources.files("hdpart.golden")
    num_text = files.joinpath("c6_numerator.txt").read_text().strip()
    diag = []
    for line in files.joinpath("c6_diagonal.tsv").read_text().splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        z, value = line.split("\t")
        assert int(z) == len(diag)
        diag.append(int(value))
    return [num_text], diag


def load_golden_collisions() -> list[tuple[int, int, int, int, int]]:
    """Known collision pairs (d, n, e, m, value) with d < e."""
    out = []
    data = resources.files("hdpart.golden").joinpath("collisions.tsv").read_text()
    for line in data.splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        d, n, e, m, value = (int(x) for x in line.split("\t"))
        out.append((d, n, e, m, value))
    return out


# --- resumable alpha runs -----------------------------------------------------


def _query_id(k: int, q: int, m: int, length: Optional[int]) -> str:
    payload = json.dumps({"k": k, "q": q, "m": m, "length": length}, sort_keys=True)
    return hashlib.sha256(payload.encode()).hexdigest()[:16]


def _encode_table(table: mpart.BucketTable) -> dict[str, int]:
    return {
        f"{m}|{length}|{','.join(map(str, profile))}": v
        for (m, length, profile), v in sorted(table.items())
    }


def _decode_table(data: dict[str, int]) -> mpart.BucketTable:
    out: mpart.BucketTable = {}
    for key, v in data.items():
        m, length, profile = key.split("|")
        prof = tuple(int(x) for x in profile.split(",")) if profile else ()
        out[(int(m), int(length), prof)] = v
    return out


class CheckpointedAlphaRun:
    """Per-representative task runner whose partial results survive restarts.

    Each stable-orbit representative is one task; after a task finishes its
    bucket table is flushed to the checkpoint file. Resuming skips completed
    tasks, so the final aggregate is identical however often the run is
    interrupted.
    """

    def __init__(
        self,
        directory: Path,
        k: int,
        q: int,
        m: int,
        length: Optional[int] = None,
        node_ceiling: Optional[int] = mpart.DEFAULT_NODE_CEILING,
    ):
        self.k, self.q, self.m, self.length = k, q, m, length
        self.node_ceiling = node_ceiling
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)
        self.path = self.directory / f"alpha-{_query_id(k, q, m, length)}.json"
        self.reps = mpart.full_support_reps(k, q)
        self.completed: dict[int, mpart.BucketTable] = {}
        if self.path.exists():
            data = json.loads(self.path.read_text())
            for idx, table in data["tables"].items():
                self.completed[int(idx)] = _decode_table(table)

    @property
    def pending(self) -> list[int]:
        return [i for i in range(len(self.reps)) if i not in self.completed]

    def _flush(self):
        data = {
            "query": {"k": self.k, "q": self.q, "m": self.m, "length": self.length},
            "tables": {str(i): _encode_table(t) for i, t in sorted(self.completed.items())},
        }
        tmp = self.path.with_suffix(".tmp")
        tmp.write_text(json.dumps(data, sort_keys=True))
        tmp.replace(self.path)

    def run(self, task_limit: Optional[int] = None) -> Optional[int]:
        """Execute up to task_limit pending tasks; return the count once every
        task is complete, else None."""
        done = 0
        length_cap = self.length if self.length is not None else self.m + 2
        for idx in self.pending:
            if task_limit is not None and done >= task_limit:
                break
            table = mpart._rep_table(
                self.k, self.reps[idx].rep, self.m, length_cap, self.node_ceiling
            )
            self.completed[idx] = table
            self._flush()
            done += 1
        if self.pending:
            return None
        return self.total()

    def total(self) -> int:
        if self.pending:
            raise RuntimeError("run is not complete")
        total = 0
        for idx, orbit in enumerate(self.reps):
            for (size, maxdeg, _), v in self.completed[idx].items():
                if size != self.m:
                    continue
                if self.length is not None and maxdeg != self.length:
                    continue
                total += orbit.orbit_size * v
        return total
