"""Filter expressions and sorting for entity listings.

Grammar (shared by the store API and the HTTP layer): a filter is a
comma-separated conjunction of ``attribute:value`` terms; ``|`` inside a
value means one-of. Attributes are whitelisted per entity kind and values
are normalized with the same routines used at ingest, so filters compare
against exactly what is stored.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable

from . import idnorm
from .concepts import tokenize
from .ids import EntityKind, IdParseError, OpenAlexId, parse_id
from .model import Entity


class FilterError(ValueError):
    """A filter or sort expression was rejected; the message names the token."""


def _parse_int(token: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise FilterError(f"expected an integer, got {token!r}") from None


def _parse_bool(token: str) -> bool:
    lowered = token.lower()
    if lowered in ("true", "1"):
        return True
    if lowered in ("false", "0"):
        return False
    raise FilterError(f"expected true or false, got {token!r}")


def _parse_entity_id(token: str, kind: EntityKind) -> OpenAlexId:
    try:
        parsed = parse_id(token)
    except IdParseError as exc:
        raise FilterError(str(exc)) from None
    if parsed.kind is not kind:
        raise FilterError(f"{token!r} is not a {kind.value} id")
    return parsed


def _normalize(token: str, fn: Callable[[str], str], label: str) -> str:
    try:
        return fn(token)
    except idnorm.InvalidIdError:
        raise FilterError(f"{token!r} is not a valid {label}") from None


def _search_match(text: str | None, query: str) -> bool:
    # Every token of the query value must occur in the field.
    if text is None:
        return False
    field_tokens = set(tokenize(text))
    wanted = tokenize(query)
    return bool(wanted) and all(t in field_tokens for t in wanted)


# attribute -> (value parser, predicate(entity, parsed_value))
_Spec = tuple[Callable[[str], Any], Callable[[Entity, Any], bool]]

FILTER_ATTRIBUTES: dict[EntityKind, dict[str, _Spec]] = {
    EntityKind.WORK: {
        "publication_year": (_parse_int, lambda w, v: w.publication_year == v),
        "work_type": (str, lambda w, v: w.work_type.value == v),
        "doi": (
            lambda t: _normalize(t, idnorm.normalize_doi, "DOI"),
            lambda w, v: w.doi == v,
        ),
        "has_doi": (_parse_bool, lambda w, v: (w.doi is not None) == v),
        "authorships.author": (
            lambda t: _parse_entity_id(t, EntityKind.AUTHOR),
            lambda w, v: any(a.author == v for a in w.authorships),
        ),
        "authorships.institutions": (
            lambda t: _parse_entity_id(t, EntityKind.INSTITUTION),
            lambda w, v: any(v in a.institutions for a in w.authorships),
        ),
        "locations.venue": (
            lambda t: _parse_entity_id(t, EntityKind.VENUE),
            lambda w, v: any(loc.venue == v for loc in w.locations),
        ),
        "concepts.id": (
            lambda t: _parse_entity_id(t, EntityKind.CONCEPT),
            lambda w, v: any(c.concept == v for c in w.concepts),
        ),
        "title.search": (str, lambda w, v: _search_match(w.title, v)),
    },
    EntityKind.AUTHOR: {
        "orcid": (
            lambda t: _normalize(t, idnorm.validate_orcid, "ORCID"),
            lambda a, v: a.orcid == v,
        ),
        "has_orcid": (_parse_bool, lambda a, v: (a.orcid is not None) == v),
        "display_name": (str, lambda a, v: a.display_name == v),
        "display_name.search": (str, lambda a, v: _search_match(a.display_name, v)),
    },
    EntityKind.VENUE: {
        "issn_l": (
            lambda t: _normalize(t, idnorm.validate_issn, "ISSN"),
            lambda v_, v: v_.issn_l == v,
        ),
        "venue_type": (str, lambda v_, v: v_.venue_type.value == v),
        "display_name.search": (str, lambda v_, v: _search_match(v_.display_name, v)),
    },
    EntityKind.INSTITUTION: {
        "ror": (
            lambda t: _normalize(t, idnorm.validate_ror, "ROR id"),
            lambda i, v: i.ror == v,
        ),
        "country_code": (str.upper, lambda i, v: (i.country_code or "").upper() == v),
        "display_name.search": (str, lambda i, v: _search_match(i.display_name, v)),
    },
    EntityKind.CONCEPT: {
        "level": (_parse_int, lambda c, v: c.level == v),
        "wikidata": (
            lambda t: _normalize(t, idnorm.validate_wikidata, "Wikidata id"),
            lambda c, v: c.wikidata == v,
        ),
        "parents": (
            lambda t: _parse_entity_id(t, EntityKind.CONCEPT),
            lambda c, v: v in c.parents,
        ),
        "display_name.search": (str, lambda c, v: _search_match(c.display_name, v)),
    },
}


@dataclass
class Conjunct:
    attribute: str
    raw_values: list[str]
    parsed_values: list[Any]
    predicate: Callable[[Entity, Any], bool]

    def matches(self, entity: Entity) -> bool:
        return any(self.predicate(entity, v) for v in self.parsed_values)


@dataclass
class FilterExpr:
    """Conjunction of per-attribute one-of terms."""

    kind: EntityKind
    conjuncts: list[Conjunct]

    def matches(self, entity: Entity) -> bool:
        return all(c.matches(entity) for c in self.conjuncts)

    @classmethod
    def empty(cls, kind: EntityKind) -> "FilterExpr":
        return cls(kind, [])


def build_filter(kind: EntityKind, terms: list[tuple[str, list[str]]]) -> FilterExpr:
    """Assemble a filter from (attribute, values) pairs, validating both."""
    whitelist = FILTER_ATTRIBUTES[kind]
    conjuncts = []
    for attribute, values in terms:
        spec = whitelist.get(attribute)
        if spec is None:
            raise FilterError(f"unknown filter attribute {attribute!r} for {kind.plural}")
        parser, predicate = spec
        if not values:
            raise FilterError(f"filter attribute {attribute!r} has no value")
        parsed = [parser(v) for v in values]
        conjuncts.append(Conjunct(attribute, values, parsed, predicate))
    return FilterExpr(kind, conjuncts)


def parse_filter(kind: EntityKind, text: str | None) -> FilterExpr:
    """Parse the wire form: ``attr:value,attr:v1|v2`` (comma-AND, pipe-OR)."""
    if not text:
        return FilterExpr.empty(kind)
    terms: list[tuple[str, list[str]]] = []
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            raise FilterError("empty filter term")
        attribute, sep, value = chunk.partition(":")
        if not sep:
            raise FilterError(f"filter term {chunk!r} lacks a ':' separator")
        terms.append((attribute.strip(), value.split("|")))
    return build_filter(kind, terms)


# --- sorting -----------------------------------------------------------

SORT_FIELDS: dict[EntityKind, dict[str, Callable[[Entity], Any]]] = {
    EntityKind.WORK: {
        "publication_year": lambda w: w.publication_year,
        "cited_by_count": lambda w: w.cited_by_count,
    },
    EntityKind.AUTHOR: {
        "display_name": lambda a: a.display_name,
        "works_count": lambda a: a.works_count,
        "cited_by_count": lambda a: a.cited_by_count,
    },
    EntityKind.VENUE: {
        "display_name": lambda v: v.display_name,
        "works_count": lambda v: v.works_count,
    },
    EntityKind.INSTITUTION: {
        "display_name": lambda i: i.display_name,
        "works_count": lambda i: i.works_count,
    },
    EntityKind.CONCEPT: {
        "display_name": lambda c: c.display_name,
        "level": lambda c: c.level,
        "works_count": lambda c: c.works_count,
    },
}


@dataclass
class SortSpec:
    field: str  # "id" or a per-kind field
    descending: bool = False


def parse_sort(kind: EntityKind, text: str | None) -> SortSpec:
    if not text:
        return SortSpec("id")
    field_name, _, direction = text.partition(":")
    field_name = field_name.strip()
    direction = direction.strip().lower()
    if direction not in ("", "asc", "desc"):
        raise FilterError(f"unknown sort direction {direction!r}")
    if field_name != "id" and field_name not in SORT_FIELDS[kind]:
        raise FilterError(f"unknown sort field {field_name!r} for {kind.plural}")
    return SortSpec(field_name, direction == "desc")


def sort_entities(kind: EntityKind, entities: list[Entity], spec: SortSpec) -> list[Entity]:
    """Stable sort; serial ascending breaks ties, and entities lacking the
    sort value go last in either direction."""
    ordered = sorted(entities, key=lambda e: e.id.serial)
    if spec.field == "id":
        return list(reversed(ordered)) if spec.descending else ordered
    getter = SORT_FIELDS[kind][spec.field]
    present = [e for e in ordered if getter(e) is not None]
    absent = [e for e in ordered if getter(e) is None]
    present.sort(key=getter, reverse=spec.descending)
    return present + absent
