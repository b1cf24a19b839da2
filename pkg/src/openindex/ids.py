"""Typed primary keys for the five entity kinds, plus the serial allocator."""

from __future__ import annotations

import re
import threading
from dataclasses import dataclass
from enum import Enum

CANONICAL_URL_BASE = "https://openalex.org/"

# Serials are allocated from 1; the cap guards against a runaway allocator.
SERIAL_MAX = 2**63 - 1


class IdParseError(ValueError):
    """Raised when a string is not a valid entity id in short or URL form."""


class AllocatorExhausted(RuntimeError):
    """Raised when a per-kind serial counter would exceed SERIAL_MAX."""


class EntityKind(str, Enum):
    WORK = "work"
    AUTHOR = "author"
    VENUE = "venue"
    INSTITUTION = "institution"
    CONCEPT = "concept"

    @property
    def letter(self) -> str:
        return _KIND_LETTER[self]

    @property
    def plural(self) -> str:
        return _KIND_PLURAL[self]

    @classmethod
    def from_letter(cls, letter: str) -> "EntityKind":
        try:
            return _LETTER_KIND[letter.upper()]
        except KeyError:
            raise IdParseError(f"unknown entity kind letter {letter!r}") from None

    @classmethod
    def from_plural(cls, plural: str) -> "EntityKind":
        try:
            return _PLURAL_KIND[plural]
        except KeyError:
            raise IdParseError(f"unknown entity kind {plural!r}") from None


_KIND_LETTER = {
    EntityKind.WORK: "W",
    EntityKind.AUTHOR: "A",
    EntityKind.VENUE: "V",
    EntityKind.INSTITUTION: "I",
    EntityKind.CONCEPT: "C",
}
_LETTER_KIND = {v: k for k, v in _KIND_LETTER.items()}
_KIND_PLURAL = {
    EntityKind.WORK: "works",
    EntityKind.AUTHOR: "authors",
    EntityKind.VENUE: "venues",
    EntityKind.INSTITUTION: "institutions",
    EntityKind.CONCEPT: "concepts",
}
_PLURAL_KIND = {v: k for k, v in _KIND_PLURAL.items()}

_SHORT_RE = re.compile(r"^([A-Za-z])([0-9]+)$")


@dataclass(frozen=True, order=True)
class OpenAlexId:
    """Primary key of one entity: a kind plus a positive serial."""

    kind: EntityKind
    serial: int

    def __post_init__(self) -> None:
        if self.serial < 1:
            raise IdParseError(f"serial must be >= 1, got {self.serial}")

    @property
    def short(self) -> str:
        return f"{self.kind.letter}{self.serial}"

    @property
    def url(self) -> str:
        return CANONICAL_URL_BASE + self.short

    def __str__(self) -> str:
        return self.short


def parse_id(text: str) -> OpenAlexId:
    """Parse either the short form (``W123``) or the URL form of an id.

    The kind letter is case-insensitive; a trailing slash on the URL form is
    tolerated. Raises :class:`IdParseError` naming the offending component.
    """
    if not isinstance(text, str):
        raise IdParseError(f"expected a string, got {type(text).__name__}")
    candidate = text.strip()
    lowered = candidate.lower()
    if lowered.startswith(("http://", "https://")):
        rest = candidate.split("://", 1)[1]
        host, _, path = rest.partition("/")
        if host.lower() != "openalex.org":
            raise IdParseError(f"unexpected id URL host {host!r}")
        candidate = path.rstrip("/")
    m = _SHORT_RE.match(candidate)
    if not m:
        raise IdParseError(f"malformed entity id {text!r}")
    kind = EntityKind.from_letter(m.group(1))
    serial = int(m.group(2))
    if serial < 1:
        raise IdParseError(f"serial must be >= 1 in {text!r}")
    if m.group(2).startswith("0"):
        raise IdParseError(f"serial has leading zeros in {text!r}")
    return OpenAlexId(kind, serial)


def canonical_forms(entity_id: OpenAlexId) -> tuple[str, str]:
    """Return the (short, url) canonical renderings; both parse back to the id."""
    return entity_id.short, entity_id.url


class IdAllocator:
    """Strictly monotonic per-kind serial counters.

    Thread-safe; increments are serialized through one lock. Persistence is
    the owner's job: the store records the last issued serial per kind and
    restores it via :meth:`advance_past`.
    """

    def __init__(self) -> None:
        self._last: dict[EntityKind, int] = {kind: 0 for kind in EntityKind}
        self._lock = threading.Lock()

    def mint(self, kind: EntityKind) -> OpenAlexId:
        with self._lock:
            nxt = self._last[kind] + 1
            if nxt > SERIAL_MAX:
                raise AllocatorExhausted(f"serial space exhausted for {kind.value}")
            self._last[kind] = nxt
        return OpenAlexId(kind, nxt)

    def advance_past(self, kind: EntityKind, serial: int) -> None:
        """Ensure the next mint for ``kind`` returns a serial > ``serial``."""
        with self._lock:
            if serial > self._last[kind]:
                self._last[kind] = serial

    def last_issued(self) -> dict[str, int]:
        with self._lock:
            return {kind.value: last for kind, last in self._last.items()}

    def restore(self, last_issued: dict[str, int]) -> None:
        with self._lock:
            for name, serial in last_issued.items():
                kind = EntityKind(name)
                if serial > self._last[kind]:
                    self._last[kind] = serial
