"""Embedded graph store: write-ahead log, snapshots, and derived indexes.

On-disk layout inside the store directory:

    lock         advisory file lock; one writer process at a time
    wal.log      framed transactions appended since the last snapshot
    snapshot.db  framed full state, replaced atomically

Every frame is ``[4-byte big-endian length][4-byte big-endian CRC32][payload]``
with a JSON payload. Recovery replays the log in order and stops at the
first frame that fails its length or checksum, so a torn tail never
poisons earlier state. Snapshots carry a generation number and log frames
are tagged with the generation they belong to; frames left over from an
interrupted compaction are skipped instead of being replayed twice.
"""

from __future__ import annotations

import datetime as dt
import fcntl
import gzip
import hashlib
import json
import os
import struct
import threading
import zlib
from collections import OrderedDict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, BinaryIO, Iterator

from . import idnorm
from .concepts import tokenize
from .disambig import EmptyNameError, family_token, fingerprint_work, normalize_name
from .ids import EntityKind, IdAllocator, OpenAlexId
from .model import (
    Entity,
    from_record,
    kind_of,
    to_record,
    validate_entity,
)
from .query import FilterError, FilterExpr, SortSpec, sort_entities

_FRAME_HEADER = struct.Struct(">II")
_PART_SIZE = 10_000
_MAX_PAGE_DEPTH = 10_000
_MAX_PER_PAGE = 200
_CURSOR_LIMIT = 1000
_BATCH_FSYNC_EVERY = 128

_EPOCH = dt.date(1970, 1, 1)


class StoreError(Exception):
    """Base class for store failures."""


class StoreBusyError(StoreError):
    """Another process holds the writer lock."""


class StoreCorruptError(StoreError):
    """The snapshot file is unreadable; the log alone cannot recover it."""


class ValidationFailedError(StoreError):
    """A record violated its type invariants; the message lists them."""


class CeidConflictError(StoreError):
    """A canonical external id already points at a different entity."""


class CursorError(StoreError):
    """A paging cursor is unknown or has expired."""


class DumpError(StoreError):
    """A dump directory failed verification during import."""


# --- framing -----------------------------------------------------------


def write_frame(fh: BinaryIO, payload: bytes) -> None:
    fh.write(_FRAME_HEADER.pack(len(payload), zlib.crc32(payload)))
    fh.write(payload)


def read_frames(data: bytes) -> tuple[list[bytes], int]:
    """Decode consecutive frames; returns (payloads, bytes consumed).

    Stops silently at the first truncated or corrupt frame, reporting how
    far the valid prefix extends.
    """
    payloads: list[bytes] = []
    pos = 0
    total = len(data)
    while pos + _FRAME_HEADER.size <= total:
        length, crc = _FRAME_HEADER.unpack_from(data, pos)
        start = pos + _FRAME_HEADER.size
        end = start + length
        if end > total:
            break
        payload = data[start:end]
        if zlib.crc32(payload) != crc:
            break
        payloads.append(payload)
        pos = end
    return payloads, pos


def _frame_json(obj: Any) -> bytes:
    return json.dumps(obj, ensure_ascii=False, separators=(",", ":")).encode("utf-8")


# --- helpers -----------------------------------------------------------


def _copy_entity(entity: Entity) -> Entity:
    return from_record(kind_of(entity), to_record(entity))


def _content_key(record: dict) -> dict:
    return {k: v for k, v in record.items() if k not in ("created_date", "updated_date")}


def work_fingerprint(work) -> str | None:
    """Title-plus-first-author fingerprint, or None when either part is missing."""
    if not work.title or not work.title.strip():
        return None
    if not work.authorships:
        return None
    try:
        name = normalize_name(work.authorships[0].raw_author_name)
        return fingerprint_work(work.title, family_token(name))
    except EmptyNameError:
        return None


def venue_name_key(name: str) -> str:
    return " ".join(tokenize(name))


@dataclass
class ListPage:
    results: list[Entity]
    total: int
    next_cursor: str | None = None


@dataclass
class AggregateReport:
    changed: dict[str, int] = field(default_factory=dict)

    @property
    def total_changed(self) -> int:
        return sum(self.changed.values())


@dataclass
class ExportReport:
    created_date: str
    manifest: dict
    total_records: int
    file_count: int


@dataclass
class ImportReport:
    created_date: str
    counts: dict[str, int]


@dataclass
class _CursorState:
    kind: EntityKind
    serials: list[int]
    pos: int


class Transaction:
    """Staged batch of operations committed as a single log frame."""

    def __init__(self, handle: "StoreHandle"):
        self._handle = handle
        self._ops: list[dict] = []
        self._staged_ceid: dict[tuple[EntityKind, str], int] = {}
        self._staged_del: set[tuple[EntityKind, int]] = set()
        self._staged_put: dict[tuple[EntityKind, int], Entity] = {}

    # conflict checks see both committed state and earlier staged ops
    def _ceid_owner(self, kind: EntityKind, value: str) -> int | None:
        staged = self._staged_ceid.get((kind, value))
        if staged is not None:
            return staged
        committed = self._handle._ceid_lookup(kind, value)
        if committed is not None and (kind, committed) not in self._staged_del:
            return committed
        return None

    def _existing(self, kind: EntityKind, serial: int) -> Entity | None:
        staged = self._staged_put.get((kind, serial))
        if staged is not None:
            return staged
        if (kind, serial) in self._staged_del:
            return None
        return self._handle._tables[kind].get(serial)

    def put(self, entity: Entity) -> Entity:
        """Validate, stamp dates, and stage an upsert.

        Returns the canonical record that will be stored. A put whose
        content matches the stored record is dropped so repeated ingests
        do not churn updated dates.
        """
        kind = kind_of(entity)
        problems = validate_entity(entity)
        if problems:
            raise ValidationFailedError(
                f"{entity.id.short}: " + "; ".join(problems)
            )
        for value in self._handle._ceid_values(entity):
            owner = self._ceid_owner(kind, value)
            if owner is not None and owner != entity.id.serial:
                other = OpenAlexId(kind, owner)
                raise CeidConflictError(
                    f"{value} already identifies {other.short}, refusing to attach it to {entity.id.short}"
                )

        existing = self._existing(kind, entity.id.serial)
        today = self._handle.today().isoformat()
        record = to_record(entity)
        if existing is not None:
            old_record = to_record(existing)
            if _content_key(record) == _content_key(old_record):
                return existing
            record["created_date"] = old_record["created_date"]
        elif entity.created_date == _EPOCH:
            record["created_date"] = today
        record["updated_date"] = today

        canonical = from_record(kind, record)
        self._ops.append({"op": "put", "kind": kind.value, "record": record})
        self._staged_put[(kind, entity.id.serial)] = canonical
        self._staged_del.discard((kind, entity.id.serial))
        for value in self._handle._ceid_values(canonical):
            self._staged_ceid[(kind, value)] = entity.id.serial
        return canonical

    def delete(self, kind: EntityKind, serial: int) -> None:
        old = self._existing(kind, serial)
        if old is None:
            raise StoreError(f"{OpenAlexId(kind, serial).short} does not exist")
        self._ops.append({"op": "del", "kind": kind.value, "serial": serial})
        self._staged_del.add((kind, serial))
        self._staged_put.pop((kind, serial), None)
        for value in self._handle._ceid_values(old):
            if self._staged_ceid.get((kind, value)) == serial:
                del self._staged_ceid[(kind, value)]

    def set_source_key(self, source: str, record_id: str, serial: int) -> None:
        self._ops.append(
            {"op": "srckey", "source": source, "rid": record_id, "serial": serial}
        )

    def set_stamp(self, serial: int, retrieved_date: str, source: str) -> None:
        self._ops.append(
            {"op": "stamp", "serial": serial, "date": retrieved_date, "source": source}
        )

    def set_meta(self, key: str, value: str) -> None:
        self._ops.append({"op": "meta", "key": key, "value": value})

    @property
    def empty(self) -> bool:
        return not self._ops

    def __enter__(self) -> "Transaction":
        self._handle._lock.acquire()
        return self

    def __exit__(self, exc_type, exc, tb) -> None:
        try:
            if exc_type is None and self._ops:
                self._handle._commit(self._ops)
        finally:
            self._handle._lock.release()


class StoreHandle:
    """Single-writer handle over one store directory.

    All public methods are safe to call from multiple threads of the
    owning process; a re-entrant lock serializes them.
    """

    def __init__(self, data_dir: Path, today: dt.date | None, durability: str):
        if durability not in ("strict", "batch"):
            raise StoreError(f"unknown durability mode {durability!r}")
        self.data_dir = data_dir
        self._today_override = today
        self._durability = durability
        self._lock = threading.RLock()
        self._lock_fh: Any = None
        self._wal_fh: Any = None
        self._closed = False
        self._commits_since_sync = 0

        self._generation = 0
        self._tables: dict[EntityKind, dict[int, Entity]] = {k: {} for k in EntityKind}
        self._allocator = IdAllocator()
        self._ceid: dict[EntityKind, dict[str, int]] = {k: {} for k in EntityKind}
        self._issn_index: dict[str, int] = {}
        self._fingerprints: dict[str, set[int]] = {}
        self._author_family: dict[str, set[int]] = {}
        self._venue_names: dict[str, set[int]] = {}
        self._author_works: dict[int, set[int]] = {}
        self._cited_by: dict[int, set[int]] = {}
        self._unresolved: dict[str, set[int]] = {}
        self._source_keys: dict[tuple[str, str], int] = {}
        self._stamps: dict[int, tuple[str, str]] = {}
        self._meta: dict[str, str] = {}
        self._sig_rev: dict[int, int] = {}
        self._inst_rev = 0
        self._cursors: "OrderedDict[str, _CursorState]" = OrderedDict()
        self._cursor_counter = 0

        self.recovery_notes: list[str] = []

    # --- lifecycle -----------------------------------------------------

    @property
    def _wal_path(self) -> Path:
        return self.data_dir / "wal.log"

    @property
    def _snapshot_path(self) -> Path:
        return self.data_dir / "snapshot.db"

    def today(self) -> dt.date:
        return self._today_override or dt.date.today()

    def set_today(self, value: dt.date | None) -> None:
        self._today_override = value

    def close(self) -> None:
        with self._lock:
            if self._closed:
                return
            self._closed = True
            if self._wal_fh is not None:
                self._wal_fh.flush()
                os.fsync(self._wal_fh.fileno())
                self._wal_fh.close()
                self._wal_fh = None
            if self._lock_fh is not None:
                fcntl.flock(self._lock_fh.fileno(), fcntl.LOCK_UN)
                self._lock_fh.close()
                self._lock_fh = None

    def __enter__(self) -> "StoreHandle":
        return self

    def __exit__(self, exc_type, exc, tb) -> None:
        self.close()

    # --- loading -------------------------------------------------------

    def _acquire_lock(self) -> None:
        fh = open(self.data_dir / "lock", "a+")
        try:
            fcntl.flock(fh.fileno(), fcntl.LOCK_EX | fcntl.LOCK_NB)
        except OSError:
            fh.close()
            raise StoreBusyError(
                f"store at {self.data_dir} is already open in another process"
            ) from None
        self._lock_fh = fh

    def _load(self) -> None:
        self._load_snapshot()
        self._replay_wal()
        self._wal_fh = open(self._wal_path, "ab")

    def _load_snapshot(self) -> None:
        if not self._snapshot_path.exists():
            return
        data = self._snapshot_path.read_bytes()
        payloads, consumed = read_frames(data)
        if consumed != len(data) or not payloads:
            raise StoreCorruptError(f"snapshot {self._snapshot_path} is corrupt")
        header = json.loads(payloads[0])
        trailer = json.loads(payloads[-1])
        if "snap" not in header or not trailer.get("end"):
            raise StoreCorruptError(f"snapshot {self._snapshot_path} is incomplete")
        self._generation = header["g"]
        for payload in payloads[1:-1]:
            chunk = json.loads(payload)
            kind = EntityKind(chunk["kind"])
            for record in chunk["records"]:
                entity = from_record(kind, record)
                self._tables[kind][entity.id.serial] = entity
                self._index(entity)
                self._allocator.advance_past(kind, entity.id.serial)
        self._allocator.restore(trailer.get("alloc", {}))
        for source, rid, serial in trailer.get("source_keys", []):
            self._source_keys[(source, rid)] = serial
        for serial_str, (date_str, source) in trailer.get("stamps", {}).items():
            self._stamps[int(serial_str)] = (date_str, source)
        self._meta = dict(trailer.get("meta", {}))

    def _replay_wal(self) -> None:
        if not self._wal_path.exists():
            return
        data = self._wal_path.read_bytes()
        payloads, consumed = read_frames(data)
        skipped_gen = 0
        for payload in payloads:
            txn = json.loads(payload)
            if txn.get("g") != self._generation:
                skipped_gen += 1
                continue
            for op in txn["ops"]:
                self._apply(op)
        if skipped_gen:
            self.recovery_notes.append(
                f"skipped {skipped_gen} log frame(s) from a previous generation"
            )
        if consumed != len(data):
            dropped = len(data) - consumed
            self.recovery_notes.append(
                f"log truncated: dropped {dropped} trailing byte(s) after offset {consumed}"
            )
            with open(self._wal_path, "r+b") as fh:
                fh.truncate(consumed)
                fh.flush()
                os.fsync(fh.fileno())

    # --- indexing ------------------------------------------------------

    def _ceid_values(self, entity: Entity) -> list[str]:
        kind = kind_of(entity)
        if kind is EntityKind.WORK:
            return [entity.doi] if entity.doi else []
        if kind is EntityKind.AUTHOR:
            return [entity.orcid] if entity.orcid else []
        if kind is EntityKind.VENUE:
            return list(entity.issns)
        if kind is EntityKind.INSTITUTION:
            return [entity.ror] if entity.ror else []
        return [entity.wikidata] if entity.wikidata else []

    def _ceid_lookup(self, kind: EntityKind, value: str) -> int | None:
        if kind is EntityKind.VENUE:
            return self._issn_index.get(value)
        return self._ceid[kind].get(value)

    def _bump_sig(self, author_serial: int) -> None:
        self._sig_rev[author_serial] = self._sig_rev.get(author_serial, 0) + 1

    def _index(self, entity: Entity) -> None:
        kind = kind_of(entity)
        serial = entity.id.serial
        if kind is EntityKind.WORK:
            if entity.doi:
                self._ceid[kind][entity.doi] = serial
            fp = work_fingerprint(entity)
            if fp is not None:
                self._fingerprints.setdefault(fp, set()).add(serial)
            for authorship in entity.authorships:
                self._author_works.setdefault(authorship.author.serial, set()).add(serial)
                self._bump_sig(authorship.author.serial)
            for ref in entity.referenced_works:
                self._cited_by.setdefault(ref.serial, set()).add(serial)
            for doi in entity.unresolved_references:
                self._unresolved.setdefault(doi, set()).add(serial)
        elif kind is EntityKind.AUTHOR:
            if entity.orcid:
                self._ceid[kind][entity.orcid] = serial
            for name in [entity.display_name, *entity.alternate_names]:
                try:
                    token = family_token(normalize_name(name))
                except EmptyNameError:
                    continue
                self._author_family.setdefault(token, set()).add(serial)
            self._bump_sig(serial)
        elif kind is EntityKind.VENUE:
            if entity.issn_l:
                self._ceid[kind][entity.issn_l] = serial
            for issn in entity.issns:
                self._issn_index[issn] = serial
            key = venue_name_key(entity.display_name)
            if key:
                self._venue_names.setdefault(key, set()).add(serial)
        elif kind is EntityKind.INSTITUTION:
            if entity.ror:
                self._ceid[kind][entity.ror] = serial
            self._inst_rev += 1
        else:
            if entity.wikidata:
                self._ceid[kind][entity.wikidata] = serial

    def _unindex(self, entity: Entity) -> None:
        kind = kind_of(entity)
        serial = entity.id.serial

        def drop(mapping: dict[str, set[int]], key: str) -> None:
            bucket = mapping.get(key)
            if bucket is not None:
                bucket.discard(serial)
                if not bucket:
                    del mapping[key]

        if kind is EntityKind.WORK:
            if entity.doi and self._ceid[kind].get(entity.doi) == serial:
                del self._ceid[kind][entity.doi]
            fp = work_fingerprint(entity)
            if fp is not None:
                drop(self._fingerprints, fp)
            for authorship in entity.authorships:
                bucket = self._author_works.get(authorship.author.serial)
                if bucket is not None:
                    bucket.discard(serial)
                    if not bucket:
                        del self._author_works[authorship.author.serial]
                self._bump_sig(authorship.author.serial)
            for ref in entity.referenced_works:
                bucket = self._cited_by.get(ref.serial)
                if bucket is not None:
                    bucket.discard(serial)
                    if not bucket:
                        del self._cited_by[ref.serial]
            for doi in entity.unresolved_references:
                drop(self._unresolved, doi)
        elif kind is EntityKind.AUTHOR:
            if entity.orcid and self._ceid[kind].get(entity.orcid) == serial:
                del self._ceid[kind][entity.orcid]
            for name in [entity.display_name, *entity.alternate_names]:
                try:
                    token = family_token(normalize_name(name))
                except EmptyNameError:
                    continue
                drop(self._author_family, token)
            self._bump_sig(serial)
        elif kind is EntityKind.VENUE:
            if entity.issn_l and self._ceid[kind].get(entity.issn_l) == serial:
                del self._ceid[kind][entity.issn_l]
            for issn in entity.issns:
                if self._issn_index.get(issn) == serial:
                    del self._issn_index[issn]
            key = venue_name_key(entity.display_name)
            if key:
                drop(self._venue_names, key)
        elif kind is EntityKind.INSTITUTION:
            if entity.ror and self._ceid[kind].get(entity.ror) == serial:
                del self._ceid[kind][entity.ror]
            self._inst_rev += 1
        else:
            if entity.wikidata and self._ceid[kind].get(entity.wikidata) == serial:
                del self._ceid[kind][entity.wikidata]

    # --- applying operations ------------------------------------------

    def _apply(self, op: dict) -> None:
        name = op["op"]
        if name == "put":
            kind = EntityKind(op["kind"])
            entity = from_record(kind, op["record"])
            old = self._tables[kind].get(entity.id.serial)
            if old is not None:
                self._unindex(old)
            self._tables[kind][entity.id.serial] = entity
            self._index(entity)
            self._allocator.advance_past(kind, entity.id.serial)
        elif name == "del":
            kind = EntityKind(op["kind"])
            serial = op["serial"]
            old = self._tables[kind].pop(serial, None)
            if old is not None:
                self._unindex(old)
            if kind is EntityKind.WORK:
                self._stamps.pop(serial, None)
                stale = [k for k, v in self._source_keys.items() if v == serial]
                for k in stale:
                    del self._source_keys[k]
        elif name == "srckey":
            self._source_keys[(op["source"], op["rid"])] = op["serial"]
        elif name == "stamp":
            self._stamps[op["serial"]] = (op["date"], op["source"])
        elif name == "meta":
            self._meta[op["key"]] = op["value"]
        else:
            raise StoreCorruptError(f"unknown log operation {name!r}")

    def _commit(self, ops: list[dict]) -> None:
        if self._closed:
            raise StoreError("store handle is closed")
        payload = _frame_json({"g": self._generation, "ops": ops})
        write_frame(self._wal_fh, payload)
        self._wal_fh.flush()
        self._commits_since_sync += 1
        if self._durability == "strict" or self._commits_since_sync >= _BATCH_FSYNC_EVERY:
            os.fsync(self._wal_fh.fileno())
            self._commits_since_sync = 0
        for op in ops:
            self._apply(op)

    # --- public write API ---------------------------------------------

    def transaction(self) -> Transaction:
        return Transaction(self)

    def mint(self, kind: EntityKind) -> OpenAlexId:
        with self._lock:
            return self._allocator.mint(kind)

    def upsert(self, entity: Entity) -> Entity:
        with self.transaction() as txn:
            stored = txn.put(entity)
        return stored

    # --- public read API ----------------------------------------------

    def count(self, kind: EntityKind) -> int:
        with self._lock:
            return len(self._tables[kind])

    def get_by_id(self, entity_id: OpenAlexId) -> Entity | None:
        with self._lock:
            entity = self._tables[entity_id.kind].get(entity_id.serial)
            return _copy_entity(entity) if entity is not None else None

    def get_by_ceid(self, kind: EntityKind, value: str) -> Entity | None:
        """Look up by canonical external id; the value is normalized first
        with the kind's own rules and malformed input raises InvalidIdError."""
        normalizers = {
            EntityKind.WORK: idnorm.normalize_doi,
            EntityKind.AUTHOR: idnorm.validate_orcid,
            EntityKind.VENUE: idnorm.validate_issn,
            EntityKind.INSTITUTION: idnorm.validate_ror,
            EntityKind.CONCEPT: idnorm.validate_wikidata,
        }
        normalized = normalizers[kind](value)
        with self._lock:
            serial = self._ceid_lookup(kind, normalized)
            if serial is None:
                return None
            entity = self._tables[kind].get(serial)
            return _copy_entity(entity) if entity is not None else None

    def serials(self, kind: EntityKind) -> list[int]:
        with self._lock:
            return sorted(self._tables[kind])

    def signature_revision(self, author_serial: int) -> int:
        with self._lock:
            return self._sig_rev.get(author_serial, 0)

    # Shared-instance reads for the resolution pipeline; callers must treat
    # the returned entities as immutable.

    def peek(self, entity_id: OpenAlexId) -> Entity | None:
        with self._lock:
            return self._tables[entity_id.kind].get(entity_id.serial)

    def peek_all(self, kind: EntityKind) -> list[Entity]:
        with self._lock:
            return [self._tables[kind][s] for s in sorted(self._tables[kind])]

    def author_candidates(self, family: str) -> list[int]:
        with self._lock:
            return sorted(self._author_family.get(family, ()))

    def author_works(self, author_serial: int) -> list[int]:
        with self._lock:
            return sorted(self._author_works.get(author_serial, ()))

    def citing_works(self, work_serial: int) -> list[int]:
        with self._lock:
            return sorted(self._cited_by.get(work_serial, ()))

    def unresolved_referrers(self, doi: str) -> list[int]:
        with self._lock:
            return sorted(self._unresolved.get(doi, ()))

    def find_fingerprint(self, fingerprint: str) -> list[int]:
        with self._lock:
            return sorted(self._fingerprints.get(fingerprint, ()))

    def venues_by_name(self, name_key: str) -> list[int]:
        with self._lock:
            return sorted(self._venue_names.get(name_key, ()))

    def source_key(self, source: str, record_id: str) -> int | None:
        with self._lock:
            return self._source_keys.get((source, record_id))

    def source_keys_for(self, work_serial: int) -> list[tuple[str, str]]:
        with self._lock:
            return sorted(k for k, v in self._source_keys.items() if v == work_serial)

    def stamp(self, work_serial: int) -> tuple[str, str] | None:
        with self._lock:
            return self._stamps.get(work_serial)

    def institutions_revision(self) -> int:
        with self._lock:
            return self._inst_rev

    def meta(self, key: str) -> str | None:
        with self._lock:
            return self._meta.get(key)

    def stats(self) -> dict:
        with self._lock:
            counts = {kind.plural: len(self._tables[kind]) for kind in EntityKind}
            unresolved = sum(
                len(w.unresolved_references) for w in self._tables[EntityKind.WORK].values()
            )
            return {
                "counts": counts,
                "unresolved_references": unresolved,
                "last_dump_created": self._meta.get("last_dump"),
                "generation": self._generation,
            }

    # --- listing -------------------------------------------------------

    def _new_cursor(self, state: _CursorState) -> str:
        self._cursor_counter += 1
        token = f"c{self._cursor_counter}-{os.urandom(6).hex()}"
        self._cursors[token] = state
        while len(self._cursors) > _CURSOR_LIMIT:
            self._cursors.popitem(last=False)
        return token

    def list_entities(
        self,
        kind: EntityKind,
        *,
        filter_expr: FilterExpr | None = None,
        sort: SortSpec | None = None,
        page: int = 1,
        per_page: int = 25,
        cursor: str | None = None,
    ) -> ListPage:
        if not 1 <= per_page <= _MAX_PER_PAGE:
            raise FilterError(f"per_page must be between 1 and {_MAX_PER_PAGE}")
        with self._lock:
            if cursor is not None and cursor != "*":
                return self._cursor_page(cursor, per_page)

            expr = filter_expr or FilterExpr.empty(kind)
            spec = sort or SortSpec("id")
            table = self._tables[kind]
            matched = [e for _, e in sorted(table.items()) if expr.matches(e)]
            ordered = sort_entities(kind, matched, spec)
            total = len(ordered)

            if cursor == "*":
                state = _CursorState(kind, [e.id.serial for e in ordered], 0)
                token = self._new_cursor(state)
                return self._cursor_page(token, per_page, total=total)

            if page < 1:
                raise FilterError("page must be 1 or greater")
            if page * per_page > _MAX_PAGE_DEPTH:
                raise FilterError(
                    f"offset paging is limited to {_MAX_PAGE_DEPTH} records; use a cursor"
                )
            start = (page - 1) * per_page
            slice_ = ordered[start : start + per_page]
            return ListPage([_copy_entity(e) for e in slice_], total)

    def _cursor_page(self, token: str, per_page: int, total: int | None = None) -> ListPage:
        state = self._cursors.get(token)
        if state is None:
            raise CursorError("unknown or expired cursor")
        table = self._tables[state.kind]
        results: list[Entity] = []
        pos = state.pos
        while pos < len(state.serials) and len(results) < per_page:
            entity = table.get(state.serials[pos])
            pos += 1
            if entity is not None:
                results.append(_copy_entity(entity))
        state.pos = pos
        if pos >= len(state.serials):
            self._cursors.pop(token, None)
            next_token = None
        else:
            next_token = token
        return ListPage(results, len(state.serials) if total is None else total, next_token)

    # --- aggregates ----------------------------------------------------

    def recompute_aggregates(self) -> AggregateReport:
        """Recount every derived counter from the stored records and write
        back only the entities whose counters drifted."""
        report = AggregateReport(changed={kind.plural: 0 for kind in EntityKind})
        with self.transaction() as txn:
            works = self._tables[EntityKind.WORK]
            cited: dict[int, int] = {}
            venue_works: dict[int, set[int]] = {}
            inst_works: dict[int, set[int]] = {}
            concept_works: dict[int, set[int]] = {}
            for serial, work in works.items():
                for ref in work.referenced_works:
                    cited[ref.serial] = cited.get(ref.serial, 0) + 1
                for loc in work.locations:
                    if loc.venue is not None:
                        venue_works.setdefault(loc.venue.serial, set()).add(serial)
                for authorship in work.authorships:
                    for inst in authorship.institutions:
                        inst_works.setdefault(inst.serial, set()).add(serial)
                for assignment in work.concepts:
                    concept_works.setdefault(assignment.concept.serial, set()).add(serial)

            for serial, work in sorted(works.items()):
                expected = cited.get(serial, 0)
                if work.cited_by_count != expected:
                    updated = _copy_entity(work)
                    updated.cited_by_count = expected
                    txn.put(updated)
                    report.changed[EntityKind.WORK.plural] += 1

            for serial, author in sorted(self._tables[EntityKind.AUTHOR].items()):
                own = self._author_works.get(serial, set())
                expected_works = len(own)
                expected_cited = sum(cited.get(w, 0) for w in own)
                if (author.works_count, author.cited_by_count) != (
                    expected_works,
                    expected_cited,
                ):
                    updated = _copy_entity(author)
                    updated.works_count = expected_works
                    updated.cited_by_count = expected_cited
                    txn.put(updated)
                    report.changed[EntityKind.AUTHOR.plural] += 1

            for table_kind, counted in (
                (EntityKind.VENUE, venue_works),
                (EntityKind.INSTITUTION, inst_works),
                (EntityKind.CONCEPT, concept_works),
            ):
                for serial, entity in sorted(self._tables[table_kind].items()):
                    expected_works = len(counted.get(serial, set()))
                    if entity.works_count != expected_works:
                        updated = _copy_entity(entity)
                        updated.works_count = expected_works
                        txn.put(updated)
                        report.changed[table_kind.plural] += 1
        return report

    # --- integrity -----------------------------------------------------

    def integrity_check(self) -> list[str]:
        """Full-graph invariant sweep; returns human-readable violations."""
        violations: list[str] = []
        with self._lock:
            for kind in EntityKind:
                for serial, entity in sorted(self._tables[kind].items()):
                    for problem in validate_entity(entity):
                        violations.append(f"{entity.id.short}: {problem}")

            def exists(ref: OpenAlexId) -> bool:
                return ref.serial in self._tables[ref.kind]

            for serial, work in sorted(self._tables[EntityKind.WORK].items()):
                wid = work.id.short
                for authorship in work.authorships:
                    if not exists(authorship.author):
                        violations.append(
                            f"{wid}: authorship references missing {authorship.author.short}"
                        )
                    for inst in authorship.institutions:
                        if not exists(inst):
                            violations.append(
                                f"{wid}: authorship references missing {inst.short}"
                            )
                for loc in work.locations:
                    if loc.venue is not None and not exists(loc.venue):
                        violations.append(f"{wid}: location references missing {loc.venue.short}")
                for assignment in work.concepts:
                    if not exists(assignment.concept):
                        violations.append(
                            f"{wid}: concept assignment references missing {assignment.concept.short}"
                        )
                for ref in work.referenced_works:
                    if not exists(ref):
                        violations.append(f"{wid}: references missing {ref.short}")

            concepts = self._tables[EntityKind.CONCEPT]
            for serial, concept in sorted(concepts.items()):
                for parent in concept.parents:
                    other = concepts.get(parent.serial)
                    if other is None:
                        violations.append(
                            f"{concept.id.short}: parent {parent.short} is missing"
                        )
                    elif other.level >= concept.level:
                        violations.append(
                            f"{concept.id.short}: parent {parent.short} is at level "
                            f"{other.level}, expected below {concept.level}"
                        )
                if concept.parents and not any(
                    parent.serial in concepts
                    and concepts[parent.serial].level == concept.level - 1
                    for parent in concept.parents
                ):
                    violations.append(
                        f"{concept.id.short}: no parent at level {concept.level - 1}"
                    )

            for kind in EntityKind:
                seen: dict[str, int] = {}
                for serial, entity in sorted(self._tables[kind].items()):
                    for value in self._ceid_values(entity):
                        first = seen.get(value)
                        if first is None:
                            seen[value] = serial
                        else:
                            violations.append(
                                f"{entity.id.short}: external id {value} also on "
                                f"{OpenAlexId(kind, first).short}"
                            )

            for (source, rid), serial in sorted(self._source_keys.items()):
                if serial not in self._tables[EntityKind.WORK]:
                    violations.append(
                        f"source key {source}:{rid} points at missing W{serial}"
                    )
            for serial in sorted(self._stamps):
                if serial not in self._tables[EntityKind.WORK]:
                    violations.append(f"merge stamp exists for missing W{serial}")
        return violations

    # --- snapshots -----------------------------------------------------

    def _snapshot_trailer(self) -> dict:
        return {
            "end": True,
            "alloc": self._allocator.last_issued(),
            "source_keys": [[s, r, n] for (s, r), n in sorted(self._source_keys.items())],
            "stamps": {str(k): list(v) for k, v in sorted(self._stamps.items())},
            "meta": self._meta,
        }

    def _write_snapshot(self) -> None:
        tmp = self._snapshot_path.with_suffix(".tmp")
        with open(tmp, "wb") as fh:
            write_frame(fh, _frame_json({"snap": 1, "g": self._generation}))
            for kind in EntityKind:
                serials = sorted(self._tables[kind])
                for start in range(0, len(serials), _PART_SIZE):
                    chunk = serials[start : start + _PART_SIZE]
                    records = [to_record(self._tables[kind][s]) for s in chunk]
                    write_frame(fh, _frame_json({"kind": kind.value, "records": records}))
            write_frame(fh, _frame_json(self._snapshot_trailer()))
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp, self._snapshot_path)
        dir_fd = os.open(self.data_dir, os.O_RDONLY)
        try:
            os.fsync(dir_fd)
        finally:
            os.close(dir_fd)

    def _reset_wal(self) -> None:
        if self._wal_fh is not None:
            self._wal_fh.close()
        self._wal_fh = open(self._wal_path, "wb")
        self._wal_fh.flush()
        os.fsync(self._wal_fh.fileno())
        self._commits_since_sync = 0

    def compact(self) -> None:
        """Fold the log into a fresh snapshot; the log restarts empty."""
        with self._lock:
            self._generation += 1
            self._write_snapshot()
            self._reset_wal()

    # --- dumps ---------------------------------------------------------

    def dump_export(self, out_dir: str | Path) -> ExportReport:
        """Write the partitioned, compressed dump tree plus its manifest.

        Output is byte-deterministic for identical store content: records
        are ordered by serial, partitioned by updated date, and gzip
        members carry a zeroed timestamp.
        """
        out = Path(out_dir)
        created_dir = not out.exists()
        if out.exists() and any(out.iterdir()):
            raise StoreError(f"refusing to export into non-empty directory {out}")
        out.mkdir(parents=True, exist_ok=True)
        created = self.today().isoformat()
        try:
            with self._lock:
                manifest_entities: dict[str, Any] = {}
                total_records = 0
                file_count = 0
                for kind in EntityKind:
                    records = [
                        to_record(self._tables[kind][s]) for s in sorted(self._tables[kind])
                    ]
                    partitions: dict[str, list[dict]] = {}
                    for record in records:
                        partitions.setdefault(record["updated_date"], []).append(record)
                    files = []
                    for date_str in sorted(partitions):
                        part_records = partitions[date_str]
                        for index, start in enumerate(
                            range(0, len(part_records), _PART_SIZE)
                        ):
                            chunk = part_records[start : start + _PART_SIZE]
                            rel = (
                                f"data/{kind.plural}/updated_date={date_str}/"
                                f"part_{index:03d}.jsonl.gz"
                            )
                            raw = "".join(
                                json.dumps(r, ensure_ascii=False, separators=(",", ":"))
                                + "\n"
                                for r in chunk
                            ).encode("utf-8")
                            payload = gzip.compress(raw, compresslevel=9, mtime=0)
                            target = out / rel
                            target.parent.mkdir(parents=True, exist_ok=True)
                            target.write_bytes(payload)
                            files.append(
                                {
                                    "path": rel,
                                    "record_count": len(chunk),
                                    "sha256": hashlib.sha256(payload).hexdigest(),
                                }
                            )
                            file_count += 1
                    manifest_entities[kind.plural] = {
                        "record_count": len(records),
                        "files": files,
                    }
                    total_records += len(records)
                manifest = {"created_date": created, "entities": manifest_entities}
                (out / "manifest.json").write_text(
                    json.dumps(manifest, ensure_ascii=False, indent=2) + "\n",
                    encoding="utf-8",
                )
            with self.transaction() as txn:
                txn.set_meta("last_dump", created)
        except StoreError:
            raise
        except Exception as exc:
            for child in sorted(out.rglob("*"), reverse=True):
                if child.is_file():
                    child.unlink()
                else:
                    child.rmdir()
            if created_dir:
                out.rmdir()
            raise StoreError(f"export failed, partial output removed: {exc}") from exc
        return ExportReport(created, manifest, total_records, file_count)

    def dump_import(self, in_dir: str | Path) -> ImportReport:
        """Load a dump tree into an empty store, verifying every digest.

        The imported records keep their dates and serials exactly, so a
        fresh export reproduces the original bytes.
        """
        source = Path(in_dir)
        with self._lock:
            if any(self._tables[kind] for kind in EntityKind):
                raise StoreError("import requires an empty store")
            manifest_path = source / "manifest.json"
            if not manifest_path.exists():
                raise DumpError(f"missing manifest.json in {source}")
            try:
                manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
            except json.JSONDecodeError as exc:
                raise DumpError(f"manifest.json is not valid JSON: {exc}") from None

            staged: dict[EntityKind, dict[int, Entity]] = {k: {} for k in EntityKind}
            counts: dict[str, int] = {}
            entities_section = manifest.get("entities")
            if not isinstance(entities_section, dict):
                raise DumpError("manifest.json lacks an entities section")
            for plural, section in entities_section.items():
                kind = EntityKind.from_plural(plural)
                loaded = 0
                for file_info in section.get("files", []):
                    rel = file_info["path"]
                    payload_path = source / rel
                    if not payload_path.exists():
                        raise DumpError(f"dump file {rel} is missing")
                    payload = payload_path.read_bytes()
                    digest = hashlib.sha256(payload).hexdigest()
                    if digest != file_info["sha256"]:
                        raise DumpError(f"digest mismatch for {rel}")
                    try:
                        raw = gzip.decompress(payload)
                    except (OSError, EOFError) as exc:
                        raise DumpError(f"cannot decompress {rel}: {exc}") from None
                    lines = raw.decode("utf-8").splitlines()
                    if len(lines) != file_info["record_count"]:
                        raise DumpError(
                            f"{rel}: expected {file_info['record_count']} records, "
                            f"found {len(lines)}"
                        )
                    for line in lines:
                        try:
                            record = json.loads(line)
                            entity = from_record(kind, record)
                        except Exception as exc:
                            raise DumpError(f"bad record in {rel}: {exc}") from None
                        if entity.id.serial in staged[kind]:
                            raise DumpError(
                                f"duplicate id {entity.id.short} in dump"
                            )
                        problems = validate_entity(entity)
                        if problems:
                            raise DumpError(
                                f"{entity.id.short} in {rel}: " + "; ".join(problems)
                            )
                        staged[kind][entity.id.serial] = entity
                        loaded += 1
                expected = section.get("record_count", loaded)
                if loaded != expected:
                    raise DumpError(
                        f"{plural}: manifest claims {expected} records, found {loaded}"
                    )
                counts[plural] = loaded

            self._install_state(staged)
            created = manifest.get("created_date", self.today().isoformat())
            self._meta["last_dump"] = created
            problems = self.integrity_check()
            if problems:
                self._install_state({k: {} for k in EntityKind})
                self._meta.pop("last_dump", None)
                raise DumpError(
                    "dump fails integrity checks: " + "; ".join(problems[:5])
                )
            self._generation += 1
            self._write_snapshot()
            self._reset_wal()
            return ImportReport(created, counts)

    def _install_state(self, staged: dict[EntityKind, dict[int, Entity]]) -> None:
        self._tables = {k: dict(v) for k, v in staged.items()}
        self._ceid = {k: {} for k in EntityKind}
        self._issn_index = {}
        self._fingerprints = {}
        self._author_family = {}
        self._venue_names = {}
        self._author_works = {}
        self._cited_by = {}
        self._unresolved = {}
        self._source_keys = {}
        self._stamps = {}
        for kind in EntityKind:
            for serial, entity in self._tables[kind].items():
                self._index(entity)
                self._allocator.advance_past(kind, serial)


def open_store(
    data_dir: str | Path,
    *,
    create: bool = True,
    today: dt.date | None = None,
    durability: str = "strict",
) -> StoreHandle:
    """Open (and if needed create) a store directory, taking the writer lock."""
    path = Path(data_dir)
    if not path.exists():
        if not create:
            raise StoreError(f"store directory {path} does not exist")
        path.mkdir(parents=True, exist_ok=True)
    handle = StoreHandle(path, today, durability)
    handle._acquire_lock()
    try:
        handle._load()
    except Exception:
        if handle._lock_fh is not None:
            fcntl.flock(handle._lock_fh.fileno(), fcntl.LOCK_UN)
            handle._lock_fh.close()
        raise
    return handle
