"""Normalization and checksum validation for the five external id systems.

Each entity kind carries one canonical external id: DOI (works), ORCID
(authors), ISSN-L (venues), ROR (institutions), Wikidata (concepts). All
normalizers are idempotent and pure; the normalized string is the exact
form stored and emitted everywhere else.
"""

from __future__ import annotations

import csv
import re
from dataclasses import dataclass, field
from pathlib import Path


class InvalidIdError(ValueError):
    """Base for external-id rejections; carries the raw input."""

    def __init__(self, message: str, raw: str):
        super().__init__(f"{message}: {raw!r}")
        self.raw = raw


class MalformedIdError(InvalidIdError):
    """The input does not have the scheme's shape."""


class ChecksumError(InvalidIdError):
    """The shape is right but the check digit does not verify."""


# --- DOI ---------------------------------------------------------------

_DOI_PREFIXES = ("https://doi.org/", "http://doi.org/", "doi:")
_DOI_RE = re.compile(r"^10\.\d{4,9}/\S+$")


def normalize_doi(raw: str) -> str:
    """Strip doi.org/doi: prefixes, lowercase, and check the DOI grammar.

    DOI matching is case-insensitive per the DOI system, so one lowercase
    form is the canonical uniqueness key.
    """
    value = raw.strip()
    lowered = value.lower()
    for prefix in _DOI_PREFIXES:
        if lowered.startswith(prefix):
            value = value[len(prefix):]
            lowered = value.lower()
            break
    value = value.strip().lower()
    if not _DOI_RE.match(value):
        raise MalformedIdError("invalid DOI", raw)
    return value


# --- ORCID -------------------------------------------------------------

_ORCID_URL_RE = re.compile(r"^https?://orcid\.org/", re.IGNORECASE)
_ORCID_BODY_RE = re.compile(r"^\d{15}[\dX]$")


def _orcid_check_digit(base15: str) -> str:
    # ISO 7064 MOD 11-2, generation form.
    total = 0
    for ch in base15:
        total = (total + int(ch)) * 2
    result = (12 - total % 11) % 11
    return "X" if result == 10 else str(result)


def validate_orcid(raw: str) -> str:
    """Normalize to ``XXXX-XXXX-XXXX-XXXX`` and verify the MOD 11-2 checksum."""
    value = _ORCID_URL_RE.sub("", raw.strip())
    compact = value.replace("-", "").upper()
    if not _ORCID_BODY_RE.match(compact):
        raise MalformedIdError("malformed ORCID", raw)
    if _orcid_check_digit(compact[:15]) != compact[15]:
        raise ChecksumError("ORCID checksum failure", raw)
    return "-".join(compact[i:i + 4] for i in range(0, 16, 4))


# --- ISSN --------------------------------------------------------------

_ISSN_COMPACT_RE = re.compile(r"^\d{7}[\dX]$")


def _issn_check_char(digits7: str) -> str:
    # Weighted sum of the first seven digits with weights 8..2.
    total = sum(int(d) * w for d, w in zip(digits7, range(8, 1, -1)))
    check = (11 - total % 11) % 11
    return "X" if check == 10 else str(check)


def validate_issn(raw: str) -> str:
    """Normalize to hyphenated uppercase ``NNNN-NNNC`` and verify the check char."""
    compact = raw.strip().replace("-", "").upper()
    if not _ISSN_COMPACT_RE.match(compact):
        raise MalformedIdError("malformed ISSN", raw)
    if _issn_check_char(compact[:7]) != compact[7]:
        raise ChecksumError("ISSN checksum failure", raw)
    return f"{compact[:4]}-{compact[4:]}"


@dataclass
class IssnLinkingTable:
    """Mapping from ISSN to its linking ISSN (ISSN-L).

    Every ISSN-L maps to itself, so lookups are idempotent. ISSNs absent
    from the table fall back to singleton groups.
    """

    entries: dict[str, str] = field(default_factory=dict)
    fallback_count: int = 0

    def __post_init__(self) -> None:
        normalized: dict[str, str] = {}
        for issn, issn_l in self.entries.items():
            normalized[validate_issn(issn)] = validate_issn(issn_l)
        for issn_l in set(normalized.values()):
            existing = normalized.get(issn_l)
            if existing is not None and existing != issn_l:
                raise ValueError(
                    f"linking table maps ISSN-L {issn_l} to a different group {existing}"
                )
            normalized[issn_l] = issn_l
        self.entries = normalized

    @classmethod
    def load(cls, path: str | Path) -> "IssnLinkingTable":
        """Load the two-column ``ISSN,ISSN-L`` CSV (header row required)."""
        entries: dict[str, str] = {}
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if header is None or len(header) < 2:
                raise ValueError(f"{path}: expected a two-column CSV with a header row")
            for row in reader:
                if not row or not row[0].strip():
                    continue
                if len(row) < 2:
                    raise ValueError(f"{path}: row {row!r} lacks an ISSN-L column")
                entries[row[0].strip()] = row[1].strip()
        return cls(entries)


def issn_l_of(issn: str, table: IssnLinkingTable) -> str:
    """Resolve an ISSN to its group's linking ISSN; absent entries group alone."""
    linked = table.entries.get(issn)
    if linked is None:
        table.fallback_count += 1
        return issn
    return linked


# --- ROR ---------------------------------------------------------------

# Crockford base-32: digits plus lowercase letters excluding i, l, o, u.
ROR_ALPHABET = "0123456789abcdefghjkmnpqrstvwxyz"
_ROR_DECODE = {ch: i for i, ch in enumerate(ROR_ALPHABET)}
_ROR_URL_RE = re.compile(r"^https?://ror\.org/", re.IGNORECASE)
_ROR_RE = re.compile(r"^0[0-9abcdefghjkmnpqrstvwxyz]{6}\d{2}$")


def _ror_checksum(body: str) -> str:
    # ISO 7064 MOD 97-10 over the base-32 value, generation form.
    n = 0
    for ch in body:
        n = n * 32 + _ROR_DECODE[ch]
    return f"{98 - (n * 100) % 97:02d}"


def validate_ror(raw: str) -> str:
    """Normalize to the bare 9-character lowercase id and verify MOD 97-10."""
    value = _ROR_URL_RE.sub("", raw.strip()).lower()
    if not _ROR_RE.match(value):
        raise MalformedIdError("malformed ROR id", raw)
    if _ror_checksum(value[:7]) != value[7:]:
        raise ChecksumError("ROR checksum failure", raw)
    return value


# --- Wikidata ----------------------------------------------------------

_WIKIDATA_URL_RE = re.compile(r"^https?://(www\.)?wikidata\.org/wiki/", re.IGNORECASE)
_WIKIDATA_RE = re.compile(r"^Q[1-9]\d*$")


def validate_wikidata(raw: str) -> str:
    """Normalize to bare ``Q<digits>`` with a positive, zero-free value."""
    value = _WIKIDATA_URL_RE.sub("", raw.strip())
    value = value.upper() if value[:1] in ("q", "Q") else value
    if not _WIKIDATA_RE.match(value):
        raise MalformedIdError("malformed Wikidata id", raw)
    return value
