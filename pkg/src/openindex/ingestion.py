"""Source-record parsing, harvesting, and the per-record resolution pipeline.

Parsers turn Crossref-shaped JSON and PubMed-shaped XML into source-neutral
work stubs. ``Ingestor.ingest_stub`` then runs the fixed pipeline: venue
resolution, author disambiguation, institution matching, work upsert,
duplicate-cluster recheck with version-of-record flagging, concept tagging,
and reference resolution, all inside one store transaction so a failed
record leaves nothing behind.
"""

from __future__ import annotations

import datetime as dt
import functools
import json
import re
import time
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Callable, Iterable, Iterator

import requests

from . import idnorm
from .concepts import ConceptTree, tag_work
from .disambig import (
    AuthorMatchWeights,
    AuthorSignature,
    DEFAULT_AUTHOR_THRESHOLD,
    DEFAULT_INSTITUTION_THRESHOLD,
    EmptyNameError,
    EmptyTitleError,
    InstitutionIndex,
    WorkContext,
    disambiguate_author,
    extract_affiliation_candidates,
    family_token,
    fingerprint_work,
    keys_compatible,
    match_institution,
    normalize_name,
    select_primary_location,
)
from .idnorm import InvalidIdError, IssnLinkingTable, issn_l_of
from .ids import EntityKind, OpenAlexId
from .model import (
    Author,
    Authorship,
    AuthorPosition,
    HostLocation,
    HostVersion,
    Venue,
    VenueType,
    Work,
    WorkType,
)
from .store import StoreHandle, Transaction, venue_name_key, work_fingerprint

SOURCES = ("crossref", "pubmed", "repository")

# Higher outranks lower when retrieved on the same date.
_SOURCE_RANK = {"crossref": 3, "pubmed": 2, "repository": 1}


class StubRejectedError(ValueError):
    """The source record cannot yield a usable stub; the message says why."""


class HarvestError(Exception):
    pass


class HarvestTransportError(HarvestError):
    """The endpoint stayed unreachable or kept failing after retries."""


class HarvestProtocolError(HarvestError):
    """The endpoint answered with a body the client cannot interpret."""


@dataclass
class StubAuthor:
    raw_name: str
    orcid: str | None = None
    raw_affiliations: list[str] = field(default_factory=list)


@dataclass
class WorkStub:
    source: str
    source_record_id: str
    retrieved_date: dt.date
    doi: str | None = None
    title: str | None = None
    abstract: str | None = None
    publication_year: int | None = None
    work_type: WorkType = WorkType.OTHER
    stub_authors: list[StubAuthor] = field(default_factory=list)
    venue_name: str | None = None
    issns: list[str] = field(default_factory=list)
    venue_type_hint: VenueType | None = None
    url: str | None = None
    version_hint: HostVersion = HostVersion.UNKNOWN
    license: str | None = None
    referenced_dois: list[str] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)


def validate_stub(stub: WorkStub) -> list[str]:
    problems: list[str] = []
    if stub.source not in SOURCES:
        problems.append(f"unknown source {stub.source!r}")
    if not stub.source_record_id:
        problems.append("missing source_record_id")
    if stub.doi is None and not (stub.title and stub.title.strip()):
        problems.append("stub has neither DOI nor title")
    if stub.doi is not None:
        try:
            if idnorm.normalize_doi(stub.doi) != stub.doi:
                problems.append(f"DOI {stub.doi!r} is not in normalized form")
        except InvalidIdError:
            problems.append(f"invalid DOI {stub.doi!r}")
    for issn in stub.issns:
        try:
            if idnorm.validate_issn(issn) != issn:
                problems.append(f"ISSN {issn!r} is not in normalized form")
        except InvalidIdError:
            problems.append(f"invalid ISSN {issn!r}")
    for doi in stub.referenced_dois:
        try:
            if idnorm.normalize_doi(doi) != doi:
                problems.append(f"referenced DOI {doi!r} is not in normalized form")
        except InvalidIdError:
            problems.append(f"invalid referenced DOI {doi!r}")
    for author in stub.stub_authors:
        if not author.raw_name or not author.raw_name.strip():
            problems.append("stub author with empty name")
        if author.orcid is not None:
            try:
                idnorm.validate_orcid(author.orcid)
            except InvalidIdError:
                problems.append(f"invalid ORCID {author.orcid!r}")
    return problems


# --- Crossref-shaped JSON ----------------------------------------------

_TAG_RE = re.compile(r"<[^>]+>")
_WS_RE = re.compile(r"\s+")

_WORK_TYPE_TABLE = {
    "journal-article": WorkType.JOURNAL_ARTICLE,
    "book": WorkType.BOOK,
    "monograph": WorkType.BOOK,
    "dataset": WorkType.DATASET,
    "dissertation": WorkType.THESIS,
}

_LICENSE_TABLE = [
    ("creativecommons.org/licenses/by-nc-nd", "cc-by-nc-nd"),
    ("creativecommons.org/licenses/by-nc-sa", "cc-by-nc-sa"),
    ("creativecommons.org/licenses/by-nc", "cc-by-nc"),
    ("creativecommons.org/licenses/by-nd", "cc-by-nd"),
    ("creativecommons.org/licenses/by-sa", "cc-by-sa"),
    ("creativecommons.org/licenses/by", "cc-by"),
    ("creativecommons.org/publicdomain/zero", "cc0"),
]

_VERSION_VALUES = {v.value: v for v in HostVersion}


def _clean_text(value: Any) -> str | None:
    if not isinstance(value, str):
        return None
    text = _WS_RE.sub(" ", _TAG_RE.sub(" ", value)).strip()
    return text or None


def _license_token(url: str) -> str | None:
    lowered = url.lower()
    for needle, token in _LICENSE_TABLE:
        if needle in lowered:
            return token
    return None


def _default_version(source: str) -> HostVersion:
    return HostVersion.SUBMITTED if source == "repository" else HostVersion.PUBLISHED


def parse_crossref(
    record: Any,
    *,
    source: str = "crossref",
    retrieved_date: dt.date | None = None,
) -> WorkStub:
    """Map one Crossref-style message item onto a stub.

    Records with neither DOI nor title are rejected; any other defect is
    skipped field by field and noted in the stub's warnings.
    """
    if not isinstance(record, dict):
        raise StubRejectedError("record is not a JSON object")
    warnings: list[str] = []

    doi = None
    raw_doi = record.get("DOI")
    if isinstance(raw_doi, str) and raw_doi.strip():
        try:
            doi = idnorm.normalize_doi(raw_doi)
        except InvalidIdError as exc:
            warnings.append(f"dropped DOI: {exc}")

    titles = record.get("title")
    if isinstance(titles, str):
        title = _clean_text(titles)
    elif isinstance(titles, list) and titles:
        title = _clean_text(titles[0])
    else:
        title = None

    if doi is None and title is None:
        raise StubRejectedError("record has neither a DOI nor a title")

    abstract = _clean_text(record.get("abstract"))

    year = None
    issued = record.get("issued")
    if isinstance(issued, dict):
        parts = issued.get("date-parts")
        if (
            isinstance(parts, list)
            and parts
            and isinstance(parts[0], list)
            and parts[0]
            and isinstance(parts[0][0], int)
        ):
            year = parts[0][0]
        elif parts:
            warnings.append("unusable issued date")

    raw_type = record.get("type")
    work_type = _WORK_TYPE_TABLE.get(raw_type, WorkType.OTHER)

    stub_authors: list[StubAuthor] = []
    raw_authors = record.get("author")
    if isinstance(raw_authors, list):
        for entry in raw_authors:
            if not isinstance(entry, dict):
                warnings.append("skipped non-object author entry")
                continue
            given = entry.get("given") or ""
            family = entry.get("family") or ""
            name = _clean_text(f"{given} {family}") or _clean_text(entry.get("name"))
            if name is None:
                warnings.append("skipped author without a name")
                continue
            orcid = None
            raw_orcid = entry.get("ORCID")
            if isinstance(raw_orcid, str) and raw_orcid.strip():
                try:
                    orcid = idnorm.validate_orcid(raw_orcid)
                except InvalidIdError as exc:
                    warnings.append(f"dropped ORCID for {name}: {exc}")
            affiliations: list[str] = []
            for aff in entry.get("affiliation") or []:
                if isinstance(aff, dict):
                    aff = aff.get("name")
                cleaned = _clean_text(aff)
                if cleaned:
                    affiliations.append(cleaned)
            stub_authors.append(StubAuthor(name, orcid, affiliations))

    venue_name = None
    container = record.get("container-title")
    if isinstance(container, str):
        venue_name = _clean_text(container)
    elif isinstance(container, list) and container:
        venue_name = _clean_text(container[0])

    issns: list[str] = []
    for raw_issn in record.get("ISSN") or []:
        if not isinstance(raw_issn, str):
            warnings.append("skipped non-string ISSN")
            continue
        try:
            normalized = idnorm.validate_issn(raw_issn)
        except InvalidIdError as exc:
            warnings.append(f"dropped ISSN {raw_issn!r}: {exc}")
            continue
        if normalized not in issns:
            issns.append(normalized)

    referenced: list[str] = []
    dropped_refs = 0
    for ref in record.get("reference") or []:
        ref_doi = ref.get("DOI") if isinstance(ref, dict) else None
        if not isinstance(ref_doi, str) or not ref_doi.strip():
            dropped_refs += 1
            continue
        try:
            normalized = idnorm.normalize_doi(ref_doi)
        except InvalidIdError:
            dropped_refs += 1
            continue
        if normalized not in referenced:
            referenced.append(normalized)
    if dropped_refs:
        warnings.append(f"{dropped_refs} reference(s) without a usable DOI")

    license_token = None
    for entry in record.get("license") or []:
        url_value = entry.get("URL") if isinstance(entry, dict) else None
        if isinstance(url_value, str):
            license_token = _license_token(url_value)
            if license_token is not None:
                break

    version = _default_version(source)
    raw_version = record.get("version")
    if isinstance(raw_version, str):
        if raw_version in _VERSION_VALUES:
            version = _VERSION_VALUES[raw_version]
        else:
            warnings.append(f"unknown version marker {raw_version!r}")

    hint: VenueType | None = None
    if source == "repository":
        hint = VenueType.REPOSITORY
    elif isinstance(raw_type, str) and raw_type.startswith("proceedings"):
        hint = VenueType.CONFERENCE
    elif venue_name or issns:
        hint = VenueType.JOURNAL

    url = record.get("URL") if isinstance(record.get("URL"), str) else None
    rid = doi or f"title:{_WS_RE.sub(' ', (title or '').lower())}"

    return WorkStub(
        source=source,
        source_record_id=rid,
        retrieved_date=retrieved_date or dt.date.today(),
        doi=doi,
        title=title,
        abstract=abstract,
        publication_year=year,
        work_type=work_type,
        stub_authors=stub_authors,
        venue_name=venue_name,
        issns=issns,
        venue_type_hint=hint,
        url=url,
        version_hint=version,
        license=license_token,
        referenced_dois=referenced,
        warnings=warnings,
    )


# --- PubMed-shaped XML -------------------------------------------------

_PUBMED_TYPE_TABLE = {
    "journal article": WorkType.JOURNAL_ARTICLE,
    "dataset": WorkType.DATASET,
    "book": WorkType.BOOK,
}

_YEAR_RE = re.compile(r"\b(1[5-9]\d{2}|20\d{2})\b")


def _element_text(element: ET.Element | None) -> str | None:
    if element is None:
        return None
    return _clean_text("".join(element.itertext()))


def parse_pubmed(
    record: str | ET.Element,
    *,
    retrieved_date: dt.date | None = None,
) -> WorkStub:
    """Map one PubmedArticle element onto a stub; PMID becomes the source
    record id and a missing DOI is allowed when the PMID is present."""
    if isinstance(record, str):
        try:
            element = ET.fromstring(record)
        except ET.ParseError as exc:
            raise StubRejectedError(f"XML does not parse: {exc}") from None
    else:
        element = record
    if element.tag != "PubmedArticle":
        found = element.find(".//PubmedArticle")
        if found is None:
            raise StubRejectedError(f"expected a PubmedArticle element, got {element.tag}")
        element = found
    warnings: list[str] = []

    pmid = _element_text(element.find("./MedlineCitation/PMID"))
    article = element.find("./MedlineCitation/Article")
    if article is None:
        raise StubRejectedError("PubmedArticle lacks an Article element")

    title = _element_text(article.find("./ArticleTitle"))
    abstract_parts = [
        _element_text(part) for part in article.findall("./Abstract/AbstractText")
    ]
    abstract = " ".join(p for p in abstract_parts if p) or None

    doi = None
    for eloc in article.findall("./ELocationID"):
        if eloc.get("EIdType") == "doi":
            raw = _element_text(eloc)
            if raw:
                try:
                    doi = idnorm.normalize_doi(raw)
                except InvalidIdError as exc:
                    warnings.append(f"dropped DOI: {exc}")
            break

    if pmid is None and doi is None:
        raise StubRejectedError("article has neither a PMID nor a DOI")
    if pmid is None:
        warnings.append("missing PMID, using DOI as the source record id")

    stub_authors: list[StubAuthor] = []
    for author_el in article.findall("./AuthorList/Author"):
        last = _element_text(author_el.find("./LastName"))
        fore = _element_text(author_el.find("./ForeName"))
        collective = _element_text(author_el.find("./CollectiveName"))
        if last:
            name = f"{fore} {last}".strip() if fore else last
        elif collective:
            name = collective
        else:
            warnings.append("skipped author without a name")
            continue
        orcid = None
        for ident in author_el.findall("./Identifier"):
            if ident.get("Source") == "ORCID":
                raw = _element_text(ident)
                if raw:
                    try:
                        orcid = idnorm.validate_orcid(raw)
                    except InvalidIdError as exc:
                        warnings.append(f"dropped ORCID for {name}: {exc}")
                break
        affiliations = []
        for aff in author_el.findall("./AffiliationInfo/Affiliation"):
            cleaned = _element_text(aff)
            if cleaned:
                affiliations.append(cleaned)
        stub_authors.append(StubAuthor(name, orcid, affiliations))

    journal = article.find("./Journal")
    venue_name = _element_text(journal.find("./Title")) if journal is not None else None
    issns = []
    if journal is not None:
        for issn_el in journal.findall("./ISSN"):
            raw = _element_text(issn_el)
            if raw is None:
                continue
            try:
                normalized = idnorm.validate_issn(raw)
            except InvalidIdError as exc:
                warnings.append(f"dropped ISSN {raw!r}: {exc}")
                continue
            if normalized not in issns:
                issns.append(normalized)

    year = None
    if journal is not None:
        year_text = _element_text(journal.find("./JournalIssue/PubDate/Year"))
        if year_text is None:
            medline = _element_text(journal.find("./JournalIssue/PubDate/MedlineDate"))
            if medline:
                found = _YEAR_RE.search(medline)
                year_text = found.group(0) if found else None
        if year_text is not None:
            try:
                year = int(year_text)
            except ValueError:
                warnings.append(f"unusable publication year {year_text!r}")

    work_type = WorkType.OTHER
    for type_el in article.findall("./PublicationTypeList/PublicationType"):
        text = (_element_text(type_el) or "").lower()
        if text in _PUBMED_TYPE_TABLE:
            work_type = _PUBMED_TYPE_TABLE[text]
            break

    referenced: list[str] = []
    dropped_refs = 0
    for ref in element.findall(".//ReferenceList/Reference"):
        ref_doi = None
        for article_id in ref.findall("./ArticleIdList/ArticleId"):
            if article_id.get("IdType") == "doi":
                ref_doi = _element_text(article_id)
                break
        if not ref_doi:
            dropped_refs += 1
            continue
        try:
            normalized = idnorm.normalize_doi(ref_doi)
        except InvalidIdError:
            dropped_refs += 1
            continue
        if normalized not in referenced:
            referenced.append(normalized)
    if dropped_refs:
        warnings.append(f"{dropped_refs} reference(s) without a usable DOI")

    if title is None and doi is None:
        raise StubRejectedError("record has neither a DOI nor a title")

    return WorkStub(
        source="pubmed",
        source_record_id=pmid or doi,  # type: ignore[arg-type]
        retrieved_date=retrieved_date or dt.date.today(),
        doi=doi,
        title=title,
        abstract=abstract,
        publication_year=year,
        work_type=work_type,
        stub_authors=stub_authors,
        venue_name=venue_name,
        issns=issns,
        venue_type_hint=VenueType.JOURNAL if (venue_name or issns) else None,
        version_hint=HostVersion.PUBLISHED,
        referenced_dois=referenced,
        warnings=warnings,
    )


def iter_pubmed_set(
    text: str, *, retrieved_date: dt.date | None = None
) -> Iterator[tuple[WorkStub | None, str | None]]:
    """Yield (stub, None) or (None, reason) per PubmedArticle in a set."""
    try:
        root = ET.fromstring(text)
    except ET.ParseError as exc:
        raise StubRejectedError(f"XML does not parse: {exc}") from None
    articles = root.findall(".//PubmedArticle") if root.tag != "PubmedArticle" else [root]
    for article in articles:
        try:
            yield parse_pubmed(article, retrieved_date=retrieved_date), None
        except StubRejectedError as exc:
            yield None, str(exc)


# --- harvest client ----------------------------------------------------


def harvest(
    endpoint: str,
    cursor: str | None = None,
    page_size: int = 100,
    *,
    session: Any = None,
    sleep: Callable[[float], None] = time.sleep,
    max_attempts: int = 5,
    base_delay: float = 1.0,
    factor: float = 2.0,
) -> tuple[list[dict], str | None]:
    """Fetch one page from ``GET {endpoint}/works?cursor=&rows=``.

    Transient failures (connection errors, HTTP 5xx and 429) are retried
    with exponential backoff before giving up; anything the client cannot
    interpret raises a protocol error.
    """
    if page_size < 1:
        raise ValueError("page_size must be positive")
    url = endpoint.rstrip("/") + "/works"
    params: dict[str, Any] = {"rows": page_size}
    if cursor is not None:
        params["cursor"] = cursor
    getter = session if session is not None else requests
    last_error: Exception | None = None
    for attempt in range(max_attempts):
        if attempt:
            sleep(base_delay * factor ** (attempt - 1))
        try:
            response = getter.get(url, params=params, timeout=30)
        except requests.RequestException as exc:
            last_error = exc
            continue
        status = response.status_code
        if status >= 500 or status == 429:
            last_error = HarvestTransportError(f"{url} answered HTTP {status}")
            continue
        if status != 200:
            raise HarvestTransportError(f"{url} answered HTTP {status}")
        try:
            body = response.json()
        except ValueError as exc:
            raise HarvestProtocolError(f"{url} returned a non-JSON body: {exc}") from None
        if not isinstance(body, dict) or not isinstance(body.get("items"), list):
            raise HarvestProtocolError(f"{url} returned a body without an items list")
        next_cursor = body.get("next_cursor")
        if next_cursor is not None and not isinstance(next_cursor, str):
            raise HarvestProtocolError(f"{url} returned a non-string cursor")
        return body["items"], next_cursor
    raise HarvestTransportError(
        f"giving up on {url} after {max_attempts} attempts: {last_error}"
    )


def iterate_harvest(
    endpoint: str,
    *,
    cursor: str | None = None,
    page_size: int = 100,
    **kwargs: Any,
) -> Iterator[tuple[list[dict], str | None]]:
    """Follow cursors until the server stops returning one."""
    while True:
        records, next_cursor = harvest(endpoint, cursor, page_size, **kwargs)
        yield records, next_cursor
        if next_cursor is None:
            return
        cursor = next_cursor


# --- resolution pipeline ----------------------------------------------


@dataclass
class IngestReport:
    source_record_id: str
    outcome: str  # created | updated | merged | rejected
    work_id: str | None
    warnings: list[str] = field(default_factory=list)

    def to_json(self) -> str:
        return json.dumps(
            {
                "source_record_id": self.source_record_id,
                "outcome": self.outcome,
                "work_id": self.work_id,
                "warnings": self.warnings,
            },
            ensure_ascii=False,
        )


def _stamp_key(date_str: str, source: str) -> tuple[str, int]:
    return (date_str, _SOURCE_RANK.get(source, 0))


@functools.lru_cache(maxsize=100_000)
def _name_key_or_none(raw: str) -> str | None:
    try:
        return normalize_name(raw)
    except EmptyNameError:
        return None


def _coauthor_keys(authorships: list[Authorship], serial: int) -> set[str]:
    keys: set[str] = set()
    for authorship in authorships:
        if authorship.author.serial == serial:
            continue
        key = _name_key_or_none(authorship.raw_author_name)
        if key is not None:
            keys.add(key)
    return keys


@dataclass
class _SigPlan:
    """Signature-cache patches derived from one transaction's staged writes."""

    evict: set[int] = field(default_factory=set)
    base_rev: dict[int, int] = field(default_factory=dict)
    add_cited: dict[int, set[OpenAlexId]] = field(default_factory=dict)
    add_venues: dict[int, set[OpenAlexId]] = field(default_factory=dict)
    add_coauthors: dict[int, set[str]] = field(default_factory=dict)
    deferred: dict[int, set[OpenAlexId]] = field(default_factory=dict)


class Ingestor:
    """Holds the per-run resources the pipeline needs: the store, the
    concept tree, the ISSN linking table, and warm caches for author
    signatures and affiliation matches."""

    def __init__(
        self,
        store: StoreHandle,
        *,
        concept_tree: ConceptTree | None = None,
        issn_table: IssnLinkingTable | None = None,
        author_threshold: float = DEFAULT_AUTHOR_THRESHOLD,
        institution_threshold: float = DEFAULT_INSTITUTION_THRESHOLD,
        author_weights: AuthorMatchWeights | None = None,
        tag_threshold: float = 0.3,
        tag_decay: float = 0.5,
    ):
        self.store = store
        self.tree = concept_tree
        self.issn_table = issn_table or IssnLinkingTable()
        self.author_threshold = author_threshold
        self.institution_threshold = institution_threshold
        self.author_weights = author_weights or AuthorMatchWeights()
        self.tag_threshold = tag_threshold
        self.tag_decay = tag_decay
        self._sig_cache: dict[int, tuple[int, AuthorSignature]] = {}
        self._pending_cites: dict[int, set[OpenAlexId]] = {}
        self._inst_index: InstitutionIndex | None = None
        self._inst_index_rev = -1
        self._affil_cache: dict[str, list[OpenAlexId]] = {}
        if self.tree is not None:
            self._sync_tree_concepts()

    def _sync_tree_concepts(self) -> None:
        """Materialize the tree in the store so tagged works never point
        at a concept the store does not hold."""
        assert self.tree is not None
        with self.store.transaction() as txn:
            for cid in sorted(self.tree.concepts, key=lambda c: c.serial):
                concept = self.tree.concepts[cid]
                stored = self.store.peek(cid)
                if stored is not None:
                    concept = replace(concept, works_count=stored.works_count)
                txn.put(concept)

    # -- cached resources ----------------------------------------------

    def _institution_index(self) -> InstitutionIndex:
        rev = self.store.institutions_revision()
        if self._inst_index is None or self._inst_index_rev != rev:
            self._inst_index = InstitutionIndex(
                self.store.peek_all(EntityKind.INSTITUTION)
            )
            self._inst_index_rev = rev
            self._affil_cache.clear()
        return self._inst_index

    def _match_affiliation(self, raw: str) -> list[OpenAlexId]:
        index = self._institution_index()
        cached = self._affil_cache.get(raw)
        if cached is None:
            candidates = extract_affiliation_candidates(raw)
            cached = match_institution(candidates, index, self.institution_threshold)
            self._affil_cache[raw] = cached
        return cached

    def _signature(self, serial: int) -> AuthorSignature:
        rev = self.store.signature_revision(serial)
        hit = self._sig_cache.get(serial)
        if hit is not None and hit[0] == rev:
            return hit[1]
        self._pending_cites.pop(serial, None)
        author = self.store.peek(OpenAlexId(EntityKind.AUTHOR, serial))
        assert author is not None
        name_key = _name_key_or_none(author.display_name) or ""
        venue_ids: set[OpenAlexId] = set()
        coauthors: set[str] = set()
        cited: set[OpenAlexId] = set()
        for work_serial in self.store.author_works(serial):
            work = self.store.peek(OpenAlexId(EntityKind.WORK, work_serial))
            if work is None:
                continue
            cited.add(work.id)
            cited.update(work.referenced_works)
            for citing_serial in self.store.citing_works(work_serial):
                cited.add(OpenAlexId(EntityKind.WORK, citing_serial))
            for loc in work.locations:
                if loc.venue is not None:
                    venue_ids.add(loc.venue)
            for authorship in work.authorships:
                if authorship.author.serial == serial:
                    continue
                coauthor = _name_key_or_none(authorship.raw_author_name)
                if coauthor is not None:
                    coauthors.add(coauthor)
        signature = AuthorSignature(
            OpenAlexId(EntityKind.AUTHOR, serial),
            name_key,
            author.orcid,
            coauthors,
            venue_ids,
            cited,
        )
        self._sig_cache[serial] = (rev, signature)
        return signature

    def _final_work(self, txn: Transaction, serial: int) -> Work | None:
        if (EntityKind.WORK, serial) in txn._staged_del:
            return None
        staged = txn._staged_put.get((EntityKind.WORK, serial))
        if staged is not None:
            return staged
        return self.store._tables[EntityKind.WORK].get(serial)

    def _plan_sig_updates(self, txn: Transaction) -> _SigPlan:
        """Work out, before commit, how the staged writes move each cached
        author signature, so the cache can be patched in place instead of
        rebuilt from the author's whole work list on the next lookup.

        A cached signature mirrors the store as of the author's last
        revision bump. Citing-side additions do not bump the cited author,
        so they are parked in ``deferred`` and folded in when that author's
        revision next moves; a patched entry then matches what a full
        rebuild at that moment would see. Any change that would remove
        something from a signature, and any rewrite of the author record
        itself, just evicts the entry."""
        store = self.store
        plan = _SigPlan()
        changed: list[tuple[Work | None, Work | None]] = []
        for kind, serial in txn._staged_del:
            if kind is EntityKind.AUTHOR:
                plan.evict.add(serial)
            elif kind is EntityKind.WORK:
                old = store._tables[EntityKind.WORK].get(serial)
                if old is not None:
                    changed.append((old, None))
        for (kind, serial), entity in txn._staged_put.items():
            if kind is EntityKind.AUTHOR:
                plan.evict.add(serial)
            elif kind is EntityKind.WORK:
                changed.append((store._tables[EntityKind.WORK].get(serial), entity))

        for old, new in changed:
            for work in (old, new):
                if work is None:
                    continue
                for authorship in work.authorships:
                    serial = authorship.author.serial
                    if serial not in plan.base_rev:
                        plan.base_rev[serial] = store.signature_revision(serial)

        for old, new in changed:
            old_serials = {a.author.serial for a in old.authorships} if old else set()
            old_refs = set(old.referenced_works) if old else set()
            if new is None:
                plan.evict |= old_serials
                removed_refs = old_refs
                added_refs: set[OpenAlexId] = set()
            else:
                new_refs = set(new.referenced_works)
                removed_refs = old_refs - new_refs
                added_refs = new_refs - old_refs
                plan.evict |= old_serials - {a.author.serial for a in new.authorships}
                self._plan_put_deltas(plan, old, new, old_serials, old_refs, new_refs)
            work_id = (new if new is not None else old).id
            for ref in removed_refs:
                # a lost citing edge is a removal for the cited side
                target = self._final_work(txn, ref.serial)
                if target is not None:
                    plan.evict |= {a.author.serial for a in target.authorships}
            for ref in added_refs:
                target = self._final_work(txn, ref.serial)
                if target is None:
                    continue
                for authorship in target.authorships:
                    plan.deferred.setdefault(authorship.author.serial, set()).add(work_id)
        return plan

    def _plan_put_deltas(
        self,
        plan: _SigPlan,
        old: Work | None,
        new: Work,
        old_serials: set[int],
        old_refs: set[OpenAlexId],
        new_refs: set[OpenAlexId],
    ) -> None:
        old_venues = (
            {loc.venue for loc in old.locations if loc.venue is not None}
            if old is not None
            else set()
        )
        new_venues = {loc.venue for loc in new.locations if loc.venue is not None}
        removed_refs = old_refs - new_refs
        removed_venues = old_venues - new_venues
        for serial in {a.author.serial for a in new.authorships}:
            if serial in plan.evict:
                continue
            if serial in old_serials:
                assert old is not None
                old_names = _coauthor_keys(old.authorships, serial)
                new_names = _coauthor_keys(new.authorships, serial)
                if removed_refs or removed_venues or old_names - new_names:
                    plan.evict.add(serial)
                    continue
                cited_add = new_refs - old_refs
                venue_add = new_venues - old_venues
                name_add = new_names - old_names
            else:
                # newly listed on this work: take its whole contribution
                cited_add = set(new_refs)
                cited_add.add(new.id)
                for citing_serial in self.store.citing_works(new.id.serial):
                    cited_add.add(OpenAlexId(EntityKind.WORK, citing_serial))
                venue_add = set(new_venues)
                name_add = _coauthor_keys(new.authorships, serial)
            if cited_add:
                plan.add_cited.setdefault(serial, set()).update(cited_add)
            if venue_add:
                plan.add_venues.setdefault(serial, set()).update(venue_add)
            if name_add:
                plan.add_coauthors.setdefault(serial, set()).update(name_add)

    def _apply_sig_plan(self, plan: _SigPlan) -> None:
        cache = self._sig_cache
        pending = self._pending_cites
        for serial in plan.evict:
            cache.pop(serial, None)
            pending.pop(serial, None)
        for serial, base_rev in plan.base_rev.items():
            if serial in plan.evict:
                continue
            hit = cache.get(serial)
            if hit is None:
                pending.pop(serial, None)
                continue
            if hit[0] != base_rev:
                # the entry was already stale when the transaction started
                cache.pop(serial, None)
                pending.pop(serial, None)
                continue
            signature = hit[1]
            stale = pending.pop(serial, None)
            if stale:
                signature.cited_work_ids |= stale
            for adds in (plan.deferred.get(serial), plan.add_cited.get(serial)):
                if adds:
                    signature.cited_work_ids |= adds
            venue_adds = plan.add_venues.get(serial)
            if venue_adds:
                signature.venue_ids |= venue_adds
            name_adds = plan.add_coauthors.get(serial)
            if name_adds:
                signature.coauthor_name_keys |= name_adds
            cache[serial] = (self.store.signature_revision(serial), signature)
        for serial, extra in plan.deferred.items():
            if serial in plan.base_rev or serial in plan.evict:
                continue
            hit = cache.get(serial)
            if hit is None:
                continue
            if hit[0] != self.store.signature_revision(serial):
                cache.pop(serial, None)
                pending.pop(serial, None)
                continue
            pending.setdefault(serial, set()).update(extra)

    # -- pipeline steps ------------------------------------------------

    def _resolve_venue(self, txn: Transaction, stub: WorkStub) -> OpenAlexId | None:
        """Step 1: find or create the hosting venue."""
        store = self.store
        if stub.issns:
            issn_l = issn_l_of(stub.issns[0], self.issn_table)
            members: list[str] = []
            for issn in [issn_l, *stub.issns]:
                if issn not in members:
                    members.append(issn)
            existing_serial = None
            for issn in members:
                hit = store._issn_index.get(issn)
                if hit is not None:
                    existing_serial = hit
                    break
            if existing_serial is not None:
                venue = store.peek(OpenAlexId(EntityKind.VENUE, existing_serial))
                assert venue is not None
                missing = [i for i in members if i not in venue.issns]
                addable = [
                    i
                    for i in missing
                    if store._issn_index.get(i) in (None, existing_serial)
                ]
                if addable:
                    updated = Venue(
                        id=venue.id,
                        issn_l=venue.issn_l,
                        issns=venue.issns + addable,
                        display_name=venue.display_name,
                        venue_type=venue.venue_type,
                        works_count=venue.works_count,
                        created_date=venue.created_date,
                        updated_date=venue.updated_date,
                    )
                    txn.put(updated)
                return venue.id
            venue_id = store.mint(EntityKind.VENUE)
            venue = Venue(
                id=venue_id,
                issn_l=issn_l,
                issns=members,
                display_name=stub.venue_name or issn_l,
                venue_type=stub.venue_type_hint or VenueType.JOURNAL,
            )
            txn.put(venue)
            return venue_id
        if stub.venue_name:
            key = venue_name_key(stub.venue_name)
            if key:
                serials = store.venues_by_name(key)
                if serials:
                    return OpenAlexId(EntityKind.VENUE, serials[0])
            venue_id = store.mint(EntityKind.VENUE)
            default_type = (
                VenueType.REPOSITORY if stub.source == "repository" else VenueType.JOURNAL
            )
            venue = Venue(
                id=venue_id,
                display_name=stub.venue_name,
                venue_type=stub.venue_type_hint or default_type,
            )
            txn.put(venue)
            return venue_id
        return None

    def _resolve_authors(
        self,
        txn: Transaction,
        stub: WorkStub,
        venue_id: OpenAlexId | None,
        context_refs: set[OpenAlexId],
        existing_work: Work | None,
        warnings: list[str],
    ) -> list[Authorship]:
        """Steps 2 and 3: one authorship per stub author, in source order."""
        store = self.store
        name_keys = [
            _name_key_or_none(stub_author.raw_name) for stub_author in stub.stub_authors
        ]

        known: dict[str, OpenAlexId] = {}
        if existing_work is not None:
            for authorship in existing_work.authorships:
                key = _name_key_or_none(authorship.raw_author_name)
                if key is not None:
                    known.setdefault(key, authorship.author)

        authorships: list[Authorship] = []
        resolved_in_stub: dict[str, OpenAlexId] = {}
        for position_index, stub_author in enumerate(stub.stub_authors):
            name_key = name_keys[position_index]
            if name_key is None:
                warnings.append(f"skipped author with unusable name {stub_author.raw_name!r}")
                continue
            coauthor_keys = {
                k for i, k in enumerate(name_keys) if k is not None and i != position_index
            }
            decision_author = known.get(name_key) or resolved_in_stub.get(name_key)
            if decision_author is None:
                candidate_serials = set(store.author_candidates(family_token(name_key)))
                orcid_owner = None
                if stub_author.orcid is not None:
                    orcid_owner = store._ceid[EntityKind.AUTHOR].get(stub_author.orcid)
                    if orcid_owner is not None:
                        candidate_serials.add(orcid_owner)
                candidates = [
                    sig
                    for sig in (self._signature(s) for s in sorted(candidate_serials))
                    if sig.author.serial == orcid_owner
                    or (sig.name_key and keys_compatible(name_key, sig.name_key))
                ]
                context = WorkContext(venue_id, set(context_refs), coauthor_keys)
                decision = disambiguate_author(
                    name_key,
                    stub_author.orcid,
                    context,
                    candidates,
                    self.author_threshold,
                    self.author_weights,
                )
                if decision.action == "match":
                    decision_author = decision.author
                else:
                    decision_author = store.mint(EntityKind.AUTHOR)
                    txn.put(
                        Author(
                            id=decision_author,
                            orcid=stub_author.orcid,
                            display_name=stub_author.raw_name.strip(),
                        )
                    )
            resolved_in_stub.setdefault(name_key, decision_author)

            stored = txn._existing(EntityKind.AUTHOR, decision_author.serial)
            if stored is not None:
                changed = False
                orcid = stored.orcid
                alternates = list(stored.alternate_names)
                if stub_author.orcid is not None and stored.orcid is None:
                    # Only claim the ORCID if no other author holds it; the
                    # name-keyed shortcut above can pair the stub with an
                    # author the ORCID index would contradict.
                    claimed_by = store._ceid[EntityKind.AUTHOR].get(stub_author.orcid)
                    if claimed_by in (None, stored.id.serial):
                        orcid = stub_author.orcid
                        changed = True
                    else:
                        warnings.append(
                            f"orcid {stub_author.orcid} already belongs to "
                            f"A{claimed_by}; kept raw name only"
                        )
                display = stub_author.raw_name.strip()
                if display != stored.display_name and display not in alternates:
                    alternates.append(display)
                    changed = True
                if changed:
                    txn.put(
                        Author(
                            id=stored.id,
                            orcid=orcid,
                            display_name=stored.display_name,
                            alternate_names=alternates,
                            works_count=stored.works_count,
                            cited_by_count=stored.cited_by_count,
                            created_date=stored.created_date,
                            updated_date=stored.updated_date,
                        )
                    )

            institutions: list[OpenAlexId] = []
            for raw in stub_author.raw_affiliations:
                for inst_id in self._match_affiliation(raw):
                    if inst_id not in institutions:
                        institutions.append(inst_id)

            authorships.append(
                Authorship(
                    author=decision_author,
                    institutions=institutions,
                    raw_author_name=stub_author.raw_name.strip(),
                    raw_affiliation_strings=list(stub_author.raw_affiliations),
                    position=AuthorPosition.MIDDLE,
                )
            )
        for i, authorship in enumerate(authorships):
            if i == 0:
                authorship.position = AuthorPosition.FIRST
            elif i == len(authorships) - 1:
                authorship.position = AuthorPosition.LAST
            else:
                authorship.position = AuthorPosition.MIDDLE
        return authorships

    def _stub_fingerprint(self, stub: WorkStub) -> str | None:
        if not stub.title or not stub.title.strip() or not stub.stub_authors:
            return None
        try:
            family = family_token(normalize_name(stub.stub_authors[0].raw_name))
            return fingerprint_work(stub.title, family)
        except (EmptyNameError, EmptyTitleError):
            return None

    def _find_target(
        self, stub: WorkStub, fingerprint: str | None
    ) -> tuple[Work | None, str]:
        """Step 4 identity lookup: DOI, then source key, then the duplicate
        cluster (only members the stub may legally merge with)."""
        store = self.store
        if stub.doi is not None:
            serial = store._ceid[EntityKind.WORK].get(stub.doi)
            if serial is not None:
                return store.peek(OpenAlexId(EntityKind.WORK, serial)), "updated"
        serial = store.source_key(stub.source, stub.source_record_id)
        if serial is not None:
            work = store.peek(OpenAlexId(EntityKind.WORK, serial))
            if work is not None:
                return work, "updated"
        if fingerprint is not None:
            for member_serial in store.find_fingerprint(fingerprint):
                member = store.peek(OpenAlexId(EntityKind.WORK, member_serial))
                if member is None:
                    continue
                if stub.doi is None or member.doi is None or member.doi == stub.doi:
                    return member, "merged"
        return None, "created"

    def _merge_locations(
        self,
        existing: list[HostLocation],
        incoming: HostLocation | None,
        incoming_wins: bool,
    ) -> list[HostLocation]:
        merged = [
            HostLocation(l.venue, l.url, l.version, l.license, l.primary)
            for l in existing
        ]
        if incoming is None:
            return merged
        for loc in merged:
            if loc.venue == incoming.venue and loc.version == incoming.version:
                if incoming_wins:
                    loc.url = incoming.url if incoming.url is not None else loc.url
                    loc.license = (
                        incoming.license if incoming.license is not None else loc.license
                    )
                else:
                    loc.url = loc.url if loc.url is not None else incoming.url
                    loc.license = (
                        loc.license if loc.license is not None else incoming.license
                    )
                return merged
        merged.append(incoming)
        return merged

    def _resolve_references(self, work: Work) -> None:
        """Step 7a: move any now-resolvable DOI onto the reference list."""
        store = self.store
        still_unresolved: list[str] = []
        referenced = list(work.referenced_works)
        for doi in work.unresolved_references:
            serial = store._ceid[EntityKind.WORK].get(doi)
            if serial is None:
                if doi not in still_unresolved:
                    still_unresolved.append(doi)
                continue
            target = OpenAlexId(EntityKind.WORK, serial)
            if target != work.id and target not in referenced:
                referenced.append(target)
        work.referenced_works = referenced
        work.unresolved_references = still_unresolved

    def _select_primary(self, work: Work) -> None:
        if not work.locations:
            return
        venue_types: dict[OpenAlexId, VenueType] = {}
        for loc in work.locations:
            if loc.venue is not None and loc.venue not in venue_types:
                venue = (
                    self.store.peek(loc.venue)
                    if loc.venue.serial in self.store._tables[EntityKind.VENUE]
                    else None
                )
                if venue is not None:
                    venue_types[loc.venue] = venue.venue_type
        select_primary_location(work.locations, venue_types)

    def ingest_stub(self, stub: WorkStub) -> IngestReport:
        """Run the full pipeline for one stub inside one transaction."""
        problems = validate_stub(stub)
        if problems:
            return IngestReport(stub.source_record_id, "rejected", None, problems)
        warnings = list(stub.warnings)
        store = self.store
        fingerprint = self._stub_fingerprint(stub)

        with store.transaction() as txn:
            target, outcome = self._find_target(stub, fingerprint)

            date_str = stub.retrieved_date.isoformat()
            incoming_key = _stamp_key(date_str, stub.source)
            if target is not None:
                stored_stamp = store.stamp(target.id.serial)
                stored_key = (
                    _stamp_key(*stored_stamp) if stored_stamp is not None else ("", 0)
                )
                incoming_wins = incoming_key > stored_key
            else:
                incoming_wins = True

            venue_id = self._resolve_venue(txn, stub)

            context_refs: set[OpenAlexId] = set()
            for doi in stub.referenced_dois:
                serial = store._ceid[EntityKind.WORK].get(doi)
                if serial is not None:
                    context_refs.add(OpenAlexId(EntityKind.WORK, serial))
            if target is not None:
                context_refs.add(target.id)

            replace_lists = incoming_wins or target is None
            if replace_lists and stub.stub_authors:
                authorships = self._resolve_authors(
                    txn, stub, venue_id, context_refs, target, warnings
                )
            else:
                authorships = None

            if target is not None:
                work = Work(
                    id=target.id,
                    doi=target.doi,
                    title=target.title,
                    abstract=target.abstract,
                    publication_year=target.publication_year,
                    work_type=target.work_type,
                    authorships=[
                        Authorship(
                            a.author,
                            list(a.institutions),
                            a.raw_author_name,
                            list(a.raw_affiliation_strings),
                            a.position,
                        )
                        for a in target.authorships
                    ],
                    locations=target.locations,
                    concepts=list(target.concepts),
                    referenced_works=list(target.referenced_works),
                    unresolved_references=list(target.unresolved_references),
                    cited_by_count=target.cited_by_count,
                    created_date=target.created_date,
                    updated_date=target.updated_date,
                )
            else:
                work = Work(id=store.mint(EntityKind.WORK))

            if stub.doi is not None:
                if work.doi is None:
                    work.doi = stub.doi
                elif work.doi != stub.doi:
                    warnings.append(
                        f"kept existing DOI {work.doi}, ignoring {stub.doi}"
                    )

            def take_scalar(current: Any, incoming: Any) -> Any:
                if incoming is None:
                    return current
                if current is None or incoming_wins:
                    return incoming
                return current

            work.title = take_scalar(work.title, stub.title)
            work.abstract = take_scalar(work.abstract, stub.abstract)
            work.publication_year = take_scalar(
                work.publication_year, stub.publication_year
            )
            if incoming_wins or target is None:
                work.work_type = stub.work_type

            if authorships is not None and (incoming_wins or not work.authorships):
                work.authorships = authorships

            incoming_location = None
            if venue_id is not None or stub.url is not None:
                incoming_location = HostLocation(
                    venue=venue_id,
                    url=stub.url,
                    version=stub.version_hint,
                    license=stub.license,
                )
            work.locations = self._merge_locations(
                work.locations, incoming_location, incoming_wins
            )

            if incoming_wins or not (work.referenced_works or work.unresolved_references):
                resolved: list[OpenAlexId] = []
                unresolved: list[str] = []
                for doi in stub.referenced_dois:
                    serial = store._ceid[EntityKind.WORK].get(doi)
                    if serial is not None and serial != work.id.serial:
                        ref = OpenAlexId(EntityKind.WORK, serial)
                        if ref not in resolved:
                            resolved.append(ref)
                    elif serial is None and doi != work.doi and doi not in unresolved:
                        unresolved.append(doi)
                work.referenced_works = resolved
                work.unresolved_references = unresolved

            # Step 5: the final content may collide with stored works that
            # were ingested under a different identity; absorb them.
            merged_serials: list[int] = []
            final_fp = work_fingerprint(work)
            if final_fp is not None:
                for member_serial in store.find_fingerprint(final_fp):
                    if member_serial == work.id.serial:
                        continue
                    member = store.peek(OpenAlexId(EntityKind.WORK, member_serial))
                    if member is None:
                        continue
                    if (
                        work.doi is not None
                        and member.doi is not None
                        and member.doi != work.doi
                    ):
                        continue
                    self._absorb(txn, work, member)
                    merged_serials.append(member_serial)
            if merged_serials:
                outcome = "merged"

            self._select_primary(work)

            if self.tree is not None:
                work.concepts = tag_work(
                    work.title,
                    work.abstract,
                    self.tree,
                    threshold=self.tag_threshold,
                    decay=self.tag_decay,
                )

            self._resolve_references(work)
            txn.put(work)

            if store.source_key(stub.source, stub.source_record_id) != work.id.serial:
                txn.set_source_key(stub.source, stub.source_record_id, work.id.serial)
            if incoming_wins and store.stamp(work.id.serial) != (date_str, stub.source):
                txn.set_stamp(work.id.serial, date_str, stub.source)

            # Step 7b: this work's DOI may settle other works' pending
            # references.
            if work.doi is not None:
                for citing_serial in store.unresolved_referrers(work.doi):
                    if citing_serial == work.id.serial or citing_serial in merged_serials:
                        continue
                    citing = txn._existing(EntityKind.WORK, citing_serial)
                    if citing is None:
                        continue
                    updated = Work(
                        id=citing.id,
                        doi=citing.doi,
                        title=citing.title,
                        abstract=citing.abstract,
                        publication_year=citing.publication_year,
                        work_type=citing.work_type,
                        authorships=citing.authorships,
                        locations=citing.locations,
                        concepts=list(citing.concepts),
                        referenced_works=list(citing.referenced_works),
                        unresolved_references=[
                            d for d in citing.unresolved_references if d != work.doi
                        ],
                        cited_by_count=citing.cited_by_count,
                        created_date=citing.created_date,
                        updated_date=citing.updated_date,
                    )
                    if work.id not in updated.referenced_works:
                        updated.referenced_works.append(work.id)
                    txn.put(updated)

            sig_plan = self._plan_sig_updates(txn)

        self._apply_sig_plan(sig_plan)
        return IngestReport(stub.source_record_id, outcome, work.id.short, warnings)

    def _absorb(self, txn: Transaction, survivor: Work, loser: Work) -> None:
        """Fold a duplicate work into the surviving record and delete it.

        The survivor keeps its scalars, fills absent ones from the loser,
        unions locations and references, inherits the loser's inbound
        citations and source keys, and takes the fresher merge stamp.
        """
        store = self.store
        if survivor.doi is None:
            survivor.doi = loser.doi
        survivor.title = survivor.title or loser.title
        survivor.abstract = survivor.abstract or loser.abstract
        if survivor.publication_year is None:
            survivor.publication_year = loser.publication_year
        if not survivor.authorships:
            survivor.authorships = loser.authorships
        for loc in loser.locations:
            survivor.locations = self._merge_locations(
                survivor.locations,
                HostLocation(loc.venue, loc.url, loc.version, loc.license),
                False,
            )
        for ref in loser.referenced_works:
            if ref != survivor.id and ref not in survivor.referenced_works:
                survivor.referenced_works.append(ref)
        for doi in loser.unresolved_references:
            if doi not in survivor.unresolved_references and doi != survivor.doi:
                survivor.unresolved_references.append(doi)

        for citing_serial in store.citing_works(loser.id.serial):
            if citing_serial == survivor.id.serial or citing_serial == loser.id.serial:
                continue
            citing = txn._existing(EntityKind.WORK, citing_serial)
            if citing is None:
                continue
            referenced = [
                r for r in citing.referenced_works if r != loser.id
            ]
            if survivor.id not in referenced and survivor.id != citing.id:
                referenced.append(survivor.id)
            updated = Work(
                id=citing.id,
                doi=citing.doi,
                title=citing.title,
                abstract=citing.abstract,
                publication_year=citing.publication_year,
                work_type=citing.work_type,
                authorships=citing.authorships,
                locations=citing.locations,
                concepts=list(citing.concepts),
                referenced_works=referenced,
                unresolved_references=list(citing.unresolved_references),
                cited_by_count=citing.cited_by_count,
                created_date=citing.created_date,
                updated_date=citing.updated_date,
            )
            txn.put(updated)
        survivor.referenced_works = [
            r for r in survivor.referenced_works if r != loser.id and r != survivor.id
        ]

        for source, rid in store.source_keys_for(loser.id.serial):
            txn.set_source_key(source, rid, survivor.id.serial)
        loser_stamp = store.stamp(loser.id.serial)
        survivor_stamp = store.stamp(survivor.id.serial)
        if loser_stamp is not None and (
            survivor_stamp is None
            or _stamp_key(*loser_stamp) > _stamp_key(*survivor_stamp)
        ):
            txn.set_stamp(survivor.id.serial, *loser_stamp)
        txn.delete(EntityKind.WORK, loser.id.serial)


def ingest_stub(
    stub: WorkStub, store: StoreHandle, ingestor: Ingestor | None = None
) -> IngestReport:
    """One-shot pipeline entry point; prefer a long-lived Ingestor for bulk
    runs so its caches survive across records."""
    return (ingestor or Ingestor(store)).ingest_stub(stub)
