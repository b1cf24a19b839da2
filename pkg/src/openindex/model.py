"""The five entity record types and their pure validation rules.

Record dicts produced by ``to_record`` use a fixed key order; that order is
the dump and API wire format, so it must never change silently.
"""

from __future__ import annotations

import datetime as dt
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Union

from .ids import EntityKind, OpenAlexId, parse_id


class WorkType(str, Enum):
    JOURNAL_ARTICLE = "journal-article"
    BOOK = "book"
    DATASET = "dataset"
    THESIS = "thesis"
    OTHER = "other"


class HostVersion(str, Enum):
    PUBLISHED = "publishedVersion"
    ACCEPTED = "acceptedVersion"
    SUBMITTED = "submittedVersion"
    UNKNOWN = "unknown"


class VenueType(str, Enum):
    JOURNAL = "journal"
    CONFERENCE = "conference"
    REPOSITORY = "repository"


class AuthorPosition(str, Enum):
    FIRST = "first"
    MIDDLE = "middle"
    LAST = "last"


@dataclass
class Authorship:
    """Three-way claim: author, their institutions, and the raw source strings."""

    author: OpenAlexId
    institutions: list[OpenAlexId] = field(default_factory=list)
    raw_author_name: str = ""
    raw_affiliation_strings: list[str] = field(default_factory=list)
    position: AuthorPosition = AuthorPosition.MIDDLE


@dataclass
class HostLocation:
    """One hosted copy of a work; at most one copy per work is primary."""

    venue: OpenAlexId | None = None
    url: str | None = None
    version: HostVersion = HostVersion.UNKNOWN
    license: str | None = None
    primary: bool = False


@dataclass
class ConceptAssignment:
    concept: OpenAlexId
    score: float
    inherited: bool


@dataclass
class Work:
    id: OpenAlexId
    doi: str | None = None
    title: str | None = None
    abstract: str | None = None
    publication_year: int | None = None
    work_type: WorkType = WorkType.OTHER
    authorships: list[Authorship] = field(default_factory=list)
    locations: list[HostLocation] = field(default_factory=list)
    concepts: list[ConceptAssignment] = field(default_factory=list)
    referenced_works: list[OpenAlexId] = field(default_factory=list)
    unresolved_references: list[str] = field(default_factory=list)
    cited_by_count: int = 0
    created_date: dt.date = dt.date(1970, 1, 1)
    updated_date: dt.date = dt.date(1970, 1, 1)


@dataclass
class Author:
    id: OpenAlexId
    orcid: str | None = None
    display_name: str = ""
    alternate_names: list[str] = field(default_factory=list)
    works_count: int = 0
    cited_by_count: int = 0
    created_date: dt.date = dt.date(1970, 1, 1)
    updated_date: dt.date = dt.date(1970, 1, 1)


@dataclass
class Venue:
    id: OpenAlexId
    issn_l: str | None = None
    issns: list[str] = field(default_factory=list)
    display_name: str = ""
    venue_type: VenueType = VenueType.JOURNAL
    works_count: int = 0
    created_date: dt.date = dt.date(1970, 1, 1)
    updated_date: dt.date = dt.date(1970, 1, 1)


@dataclass
class Institution:
    id: OpenAlexId
    ror: str | None = None
    display_name: str = ""
    aliases: list[str] = field(default_factory=list)
    country_code: str | None = None
    works_count: int = 0
    created_date: dt.date = dt.date(1970, 1, 1)
    updated_date: dt.date = dt.date(1970, 1, 1)


@dataclass
class Concept:
    id: OpenAlexId
    wikidata: str = ""
    display_name: str = ""
    level: int = 0
    parents: list[OpenAlexId] = field(default_factory=list)
    keywords: list[str] = field(default_factory=list)
    works_count: int = 0
    created_date: dt.date = dt.date(1970, 1, 1)
    updated_date: dt.date = dt.date(1970, 1, 1)


Entity = Union[Work, Author, Venue, Institution, Concept]

ENTITY_CLASS: dict[EntityKind, type] = {
    EntityKind.WORK: Work,
    EntityKind.AUTHOR: Author,
    EntityKind.VENUE: Venue,
    EntityKind.INSTITUTION: Institution,
    EntityKind.CONCEPT: Concept,
}

KIND_OF_CLASS = {cls: kind for kind, cls in ENTITY_CLASS.items()}


def kind_of(entity: Entity) -> EntityKind:
    return KIND_OF_CLASS[type(entity)]


def ceid_of(entity: Entity) -> str | None:
    """The entity's canonical external id, if it carries one."""
    if isinstance(entity, Work):
        return entity.doi
    if isinstance(entity, Author):
        return entity.orcid
    if isinstance(entity, Venue):
        return entity.issn_l
    if isinstance(entity, Institution):
        return entity.ror
    return entity.wikidata or None


# --- validation --------------------------------------------------------
#
# Pure record checks only: anything needing another record (CEID uniqueness,
# edge endpoints, concept parent levels) lives in the store's integrity
# check. Each violation is a human-readable string.


def validate_entity(entity: Entity) -> list[str]:
    if isinstance(entity, Work):
        return validate_work(entity)
    if isinstance(entity, Author):
        return validate_author(entity)
    if isinstance(entity, Venue):
        return validate_venue(entity)
    if isinstance(entity, Institution):
        return validate_institution(entity)
    return validate_concept(entity)


def _check_id(entity: Entity, kind: EntityKind, problems: list[str]) -> None:
    if entity.id.kind is not kind:
        problems.append(f"id {entity.id} has kind {entity.id.kind.value}, expected {kind.value}")


def validate_work(work: Work) -> list[str]:
    problems: list[str] = []
    _check_id(work, EntityKind.WORK, problems)
    primaries = [loc for loc in work.locations if loc.primary]
    if work.locations and len(primaries) != 1:
        problems.append(f"{work.id}: {len(primaries)} primary locations, expected exactly 1")
    for loc in work.locations:
        if loc.venue is None and loc.url is None:
            problems.append(f"{work.id}: location with neither venue nor url")
        if loc.venue is not None and loc.venue.kind is not EntityKind.VENUE:
            problems.append(f"{work.id}: location venue {loc.venue} is not a venue id")
    for assignment in work.concepts:
        if not 0.0 <= assignment.score <= 1.0:
            problems.append(f"{work.id}: concept {assignment.concept} score {assignment.score} outside [0,1]")
        if assignment.concept.kind is not EntityKind.CONCEPT:
            problems.append(f"{work.id}: concept id {assignment.concept} is not a concept id")
    if len(set(work.referenced_works)) != len(work.referenced_works):
        problems.append(f"{work.id}: duplicate referenced_works entries")
    if work.id in work.referenced_works:
        problems.append(f"{work.id}: work references itself")
    for ref in work.referenced_works:
        if ref.kind is not EntityKind.WORK:
            problems.append(f"{work.id}: referenced work {ref} is not a work id")
    if work.authorships:
        for i, a in enumerate(work.authorships):
            expected = (
                AuthorPosition.FIRST if i == 0
                else AuthorPosition.LAST if i == len(work.authorships) - 1
                else AuthorPosition.MIDDLE
            )
            if i == 0 and len(work.authorships) == 1:
                expected = AuthorPosition.FIRST
            if a.position is not expected:
                problems.append(f"{work.id}: authorship {i} position {a.position.value}, expected {expected.value}")
            if len(set(a.institutions)) != len(a.institutions):
                problems.append(f"{work.id}: authorship {i} lists duplicate institutions")
            if a.author.kind is not EntityKind.AUTHOR:
                problems.append(f"{work.id}: authorship {i} author {a.author} is not an author id")
    if work.cited_by_count < 0:
        problems.append(f"{work.id}: negative cited_by_count")
    return problems


def validate_author(author: Author) -> list[str]:
    problems: list[str] = []
    _check_id(author, EntityKind.AUTHOR, problems)
    if author.works_count < 0 or author.cited_by_count < 0:
        problems.append(f"{author.id}: negative count")
    if not author.display_name:
        problems.append(f"{author.id}: empty display_name")
    return problems


def validate_venue(venue: Venue) -> list[str]:
    problems: list[str] = []
    _check_id(venue, EntityKind.VENUE, problems)
    if venue.issn_l is not None and venue.issn_l not in venue.issns:
        problems.append(f"{venue.id}: issn_l {venue.issn_l} missing from issns")
    if venue.works_count < 0:
        problems.append(f"{venue.id}: negative works_count")
    if not venue.display_name:
        problems.append(f"{venue.id}: empty display_name")
    return problems


def validate_institution(inst: Institution) -> list[str]:
    problems: list[str] = []
    _check_id(inst, EntityKind.INSTITUTION, problems)
    if inst.country_code is not None and not (len(inst.country_code) == 2 and inst.country_code.isalpha()):
        problems.append(f"{inst.id}: country_code {inst.country_code!r} is not a 2-letter code")
    if inst.works_count < 0:
        problems.append(f"{inst.id}: negative works_count")
    if not inst.display_name:
        problems.append(f"{inst.id}: empty display_name")
    return problems


def validate_concept(concept: Concept) -> list[str]:
    problems: list[str] = []
    _check_id(concept, EntityKind.CONCEPT, problems)
    if not concept.wikidata:
        problems.append(f"{concept.id}: missing wikidata id")
    if not 0 <= concept.level <= 5:
        problems.append(f"{concept.id}: level {concept.level} outside [0,5]")
    if (concept.level == 0) != (not concept.parents):
        problems.append(f"{concept.id}: level {concept.level} inconsistent with {len(concept.parents)} parents")
    for parent in concept.parents:
        if parent.kind is not EntityKind.CONCEPT:
            problems.append(f"{concept.id}: parent {parent} is not a concept id")
    if concept.works_count < 0:
        problems.append(f"{concept.id}: negative works_count")
    return problems


# --- record codec -------------------------------------------------------


def _date_str(value: dt.date) -> str:
    return value.isoformat()


def to_record(entity: Entity) -> dict[str, Any]:
    """Render an entity as a plain dict in the fixed wire key order."""
    if isinstance(entity, Work):
        return {
            "id": entity.id.short,
            "doi": entity.doi,
            "title": entity.title,
            "abstract": entity.abstract,
            "publication_year": entity.publication_year,
            "work_type": entity.work_type.value,
            "authorships": [
                {
                    "author": a.author.short,
                    "institutions": [i.short for i in a.institutions],
                    "raw_author_name": a.raw_author_name,
                    "raw_affiliation_strings": list(a.raw_affiliation_strings),
                    "position": a.position.value,
                }
                for a in entity.authorships
            ],
            "locations": [
                {
                    "venue": loc.venue.short if loc.venue else None,
                    "url": loc.url,
                    "version": loc.version.value,
                    "license": loc.license,
                    "primary": loc.primary,
                }
                for loc in entity.locations
            ],
            "concepts": [
                {"id": c.concept.short, "score": c.score, "inherited": c.inherited}
                for c in entity.concepts
            ],
            "referenced_works": [r.short for r in entity.referenced_works],
            "unresolved_references": list(entity.unresolved_references),
            "cited_by_count": entity.cited_by_count,
            "created_date": _date_str(entity.created_date),
            "updated_date": _date_str(entity.updated_date),
        }
    if isinstance(entity, Author):
        return {
            "id": entity.id.short,
            "orcid": entity.orcid,
            "display_name": entity.display_name,
            "alternate_names": list(entity.alternate_names),
            "works_count": entity.works_count,
            "cited_by_count": entity.cited_by_count,
            "created_date": _date_str(entity.created_date),
            "updated_date": _date_str(entity.updated_date),
        }
    if isinstance(entity, Venue):
        return {
            "id": entity.id.short,
            "issn_l": entity.issn_l,
            "issns": list(entity.issns),
            "display_name": entity.display_name,
            "venue_type": entity.venue_type.value,
            "works_count": entity.works_count,
            "created_date": _date_str(entity.created_date),
            "updated_date": _date_str(entity.updated_date),
        }
    if isinstance(entity, Institution):
        return {
            "id": entity.id.short,
            "ror": entity.ror,
            "display_name": entity.display_name,
            "aliases": list(entity.aliases),
            "country_code": entity.country_code,
            "works_count": entity.works_count,
            "created_date": _date_str(entity.created_date),
            "updated_date": _date_str(entity.updated_date),
        }
    if isinstance(entity, Concept):
        return {
            "id": entity.id.short,
            "wikidata": entity.wikidata,
            "display_name": entity.display_name,
            "level": entity.level,
            "parents": [p.short for p in entity.parents],
            "keywords": list(entity.keywords),
            "works_count": entity.works_count,
            "created_date": _date_str(entity.created_date),
            "updated_date": _date_str(entity.updated_date),
        }
    raise TypeError(f"not an entity: {type(entity).__name__}")


def from_record(kind: EntityKind, record: dict[str, Any]) -> Entity:
    """Inverse of :func:`to_record`."""
    rid = parse_id(record["id"])
    created = dt.date.fromisoformat(record["created_date"])
    updated = dt.date.fromisoformat(record["updated_date"])
    if kind is EntityKind.WORK:
        return Work(
            id=rid,
            doi=record["doi"],
            title=record["title"],
            abstract=record["abstract"],
            publication_year=record["publication_year"],
            work_type=WorkType(record["work_type"]),
            authorships=[
                Authorship(
                    author=parse_id(a["author"]),
                    institutions=[parse_id(i) for i in a["institutions"]],
                    raw_author_name=a["raw_author_name"],
                    raw_affiliation_strings=list(a["raw_affiliation_strings"]),
                    position=AuthorPosition(a["position"]),
                )
                for a in record["authorships"]
            ],
            locations=[
                HostLocation(
                    venue=parse_id(loc["venue"]) if loc["venue"] else None,
                    url=loc["url"],
                    version=HostVersion(loc["version"]),
                    license=loc["license"],
                    primary=loc["primary"],
                )
                for loc in record["locations"]
            ],
            concepts=[
                ConceptAssignment(parse_id(c["id"]), c["score"], c["inherited"])
                for c in record["concepts"]
            ],
            referenced_works=[parse_id(r) for r in record["referenced_works"]],
            unresolved_references=list(record["unresolved_references"]),
            cited_by_count=record["cited_by_count"],
            created_date=created,
            updated_date=updated,
        )
    if kind is EntityKind.AUTHOR:
        return Author(
            id=rid,
            orcid=record["orcid"],
            display_name=record["display_name"],
            alternate_names=list(record["alternate_names"]),
            works_count=record["works_count"],
            cited_by_count=record["cited_by_count"],
            created_date=created,
            updated_date=updated,
        )
    if kind is EntityKind.VENUE:
        return Venue(
            id=rid,
            issn_l=record["issn_l"],
            issns=list(record["issns"]),
            display_name=record["display_name"],
            venue_type=VenueType(record["venue_type"]),
            works_count=record["works_count"],
            created_date=created,
            updated_date=updated,
        )
    if kind is EntityKind.INSTITUTION:
        return Institution(
            id=rid,
            ror=record["ror"],
            display_name=record["display_name"],
            aliases=list(record["aliases"]),
            country_code=record["country_code"],
            works_count=record["works_count"],
            created_date=created,
            updated_date=updated,
        )
    return Concept(
        id=rid,
        wikidata=record["wikidata"],
        display_name=record["display_name"],
        level=record["level"],
        parents=[parse_id(p) for p in record["parents"]],
        keywords=list(record["keywords"]),
        works_count=record["works_count"],
        created_date=created,
        updated_date=updated,
    )
