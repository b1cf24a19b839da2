"""Resolution algorithms: author disambiguation, affiliation-to-institution
matching, and work-version fingerprint deduplication with version-of-record
selection.

Scorers are transparent and deterministic: fixed feature weights for author
matching, an IDF-weighted token overlap for institutions. Both thresholds
and the author weights are configuration, not constants.
"""

from __future__ import annotations

import math
import re
import unicodedata
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .ids import OpenAlexId
from .model import HostLocation, HostVersion, Institution, VenueType


class EmptyNameError(ValueError):
    """A name normalized to nothing."""


class EmptyTitleError(ValueError):
    """Works without a title are never fingerprint-merged."""


def fold_ascii(text: str) -> str:
    """Unicode-normalize and drop diacritics.

    Non-ASCII characters that do not decompose to an ASCII base (dashes,
    quotes, letters like ø) are replaced by a space rather than deleted,
    so they still separate words for the downstream tokenizers.
    """
    decomposed = unicodedata.normalize("NFKD", text)
    out: list[str] = []
    for ch in decomposed:
        if unicodedata.combining(ch):
            continue
        out.append(ch if ch.isascii() else " ")
    return "".join(out)


# --- author name keys ---------------------------------------------------

_NAME_PUNCT_RE = re.compile(r"[^a-z0-9'\- ]+")
_WS_RE = re.compile(r"\s+")


def normalize_name(raw: str) -> str:
    """Reduce an author name to its matching key: given initial + family.

    ``"Priem, Jason"`` and ``"J. Priem"`` both become ``"j priem"``; hyphens
    inside family names survive (``"a martin-martin"``).
    """
    text = fold_ascii(raw).lower()
    if "," in text:
        family, _, given = text.partition(",")
        text = f"{given.strip()} {family.strip()}"
    text = _NAME_PUNCT_RE.sub(" ", text)
    text = _WS_RE.sub(" ", text).strip(" -'")
    tokens = [t for t in text.split(" ") if t.strip("-'")]
    if not tokens:
        raise EmptyNameError(f"name {raw!r} normalized to nothing")
    if len(tokens) == 1:
        return tokens[0]
    return f"{tokens[0][0]} {tokens[-1]}"


def family_token(name_key: str) -> str:
    return name_key.rsplit(" ", 1)[-1]


def given_initial(name_key: str) -> str | None:
    parts = name_key.split(" ")
    return parts[0][0] if len(parts) > 1 else None


def keys_compatible(key_a: str, key_b: str) -> bool:
    """Blocking rule: same family token and non-conflicting given initial."""
    if family_token(key_a) != family_token(key_b):
        return False
    ia, ib = given_initial(key_a), given_initial(key_b)
    return ia is None or ib is None or ia == ib


# --- author disambiguation ----------------------------------------------


@dataclass
class MatchScore:
    """A scorer outcome: clamped sum of named feature contributions."""

    value: float
    features: dict[str, float]

    @classmethod
    def from_features(cls, features: dict[str, float]) -> "MatchScore":
        return cls(min(1.0, max(0.0, sum(features.values()))), features)


@dataclass
class AuthorSignature:
    """Everything the author scorer sees about one stored author.

    Recomputable purely from the store; ``cited_work_ids`` is the author's
    citation neighborhood in both directions (their own works, every work
    those works reference, and every work citing them).
    """

    author: OpenAlexId
    name_key: str
    orcid: str | None = None
    coauthor_name_keys: set[str] = field(default_factory=set)
    venue_ids: set[OpenAlexId] = field(default_factory=set)
    cited_work_ids: set[OpenAlexId] = field(default_factory=set)


@dataclass
class WorkContext:
    """The incoming work's side of the author-matching features."""

    venue: OpenAlexId | None = None
    referenced_work_ids: set[OpenAlexId] = field(default_factory=set)
    coauthor_name_keys: set[str] = field(default_factory=set)


@dataclass
class AuthorMatchWeights:
    name_exact: float = 0.4
    coauthor_each: float = 0.1
    coauthor_cap: float = 0.3
    venue: float = 0.2
    citation_each: float = 0.05
    citation_cap: float = 0.1


@dataclass
class AuthorDecision:
    action: str  # "match" or "create"
    author: OpenAlexId | None
    rule: str  # "orcid", "score", or "new"
    score: MatchScore | None = None


DEFAULT_AUTHOR_THRESHOLD = 0.5


def score_author_candidate(
    name_key: str,
    context: WorkContext,
    candidate: AuthorSignature,
    weights: AuthorMatchWeights,
) -> MatchScore:
    features: dict[str, float] = {}
    if candidate.name_key == name_key:
        features["name_exact"] = weights.name_exact
    shared_coauthors = len(context.coauthor_name_keys & candidate.coauthor_name_keys)
    if shared_coauthors:
        features["shared_coauthors"] = min(
            weights.coauthor_each * shared_coauthors, weights.coauthor_cap
        )
    if context.venue is not None and context.venue in candidate.venue_ids:
        features["same_venue"] = weights.venue
    citation_overlap = len(context.referenced_work_ids & candidate.cited_work_ids)
    if citation_overlap:
        features["citation_overlap"] = min(
            weights.citation_each * citation_overlap, weights.citation_cap
        )
    return MatchScore.from_features(features)


def disambiguate_author(
    name_key: str,
    orcid: str | None,
    context: WorkContext,
    candidates: Iterable[AuthorSignature],
    threshold: float = DEFAULT_AUTHOR_THRESHOLD,
    weights: AuthorMatchWeights | None = None,
) -> AuthorDecision:
    """Match the stub author against candidate signatures, or decide to create.

    ORCID equality wins outright; an ORCID conflict excludes the candidate;
    otherwise the highest-scoring candidate at or above the threshold wins,
    ties broken by lowest author serial.
    """
    weights = weights or AuthorMatchWeights()
    scored: list[tuple[float, int, AuthorSignature, MatchScore]] = []
    for candidate in candidates:
        if orcid is not None and candidate.orcid is not None:
            if candidate.orcid == orcid:
                return AuthorDecision("match", candidate.author, "orcid")
            continue  # conflicting ORCID: never merge
        score = score_author_candidate(name_key, context, candidate, weights)
        scored.append((score.value, candidate.author.serial, candidate, score))
    if scored:
        scored.sort(key=lambda item: (-item[0], item[1]))
        best_value, _, best, best_score = scored[0]
        if best_value >= threshold:
            return AuthorDecision("match", best.author, "score", best_score)
    return AuthorDecision("create", None, "new", scored[0][3] if scored else None)


# --- affiliation extraction and institution matching --------------------

_SEGMENT_SPLIT_RE = re.compile(r",")
_AFFIL_PUNCT_RE = re.compile(r"[^a-z0-9 ]+")
_POSTAL_RUN_RE = re.compile(r"\d{4,}")

_STREET_TOKENS = {
    "st", "street", "ave", "avenue", "rd", "road", "dr", "drive", "blvd",
    "boulevard", "lane", "ln", "suite", "ste", "floor", "box", "po",
}
_ORG_TOKENS = {
    "university", "department", "institute", "institution", "school",
    "college", "laboratory", "lab", "center", "centre", "hospital",
    "academy", "faculty", "observatory", "library", "museum", "foundation",
    "society", "association", "agency", "company", "corporation", "group",
}
_ABBREVIATIONS = {"univ": "university", "dept": "department", "inst": "institute"}


def _is_address_segment(segment: str) -> bool:
    stripped = segment.strip()
    if not stripped:
        return True
    if stripped.isdigit():
        return True
    letters = stripped.replace(".", "")
    if len(letters) == 2 and letters.isalpha():
        return True
    if _POSTAL_RUN_RE.search(stripped):
        return True
    if stripped[0].isdigit() or stripped.startswith("#"):
        return True
    tokens = {t.strip(".").lower() for t in stripped.split()}
    return bool(tokens & _STREET_TOKENS)


def normalize_org_string(segment: str) -> str:
    """Lowercase, fold, strip punctuation, and expand known abbreviations."""
    text = fold_ascii(segment).lower()
    text = _AFFIL_PUNCT_RE.sub(" ", text)
    tokens = [_ABBREVIATIONS.get(t, t) for t in text.split()]
    return " ".join(tokens)


def extract_affiliation_candidates(raw: str) -> list[str]:
    """Split an affiliation statement into normalized organization strings.

    Semicolons separate independent statements; commas separate segments
    within one. Segments that look like addresses (house numbers, postal
    codes, two-letter region codes, street tokens) are dropped, and so are
    non-leading single-word segments, which are almost always cities or
    countries ("..., Granada, Spain").
    """
    out: list[str] = []
    for statement in raw.split(";"):
        kept = 0
        for segment in _SEGMENT_SPLIT_RE.split(statement):
            if _is_address_segment(segment):
                continue
            normalized = normalize_org_string(segment)
            if not normalized:
                continue
            # Position counts surviving segments only, so an org that
            # follows a dropped street address still leads its statement.
            if kept > 0 and len(normalized.split()) == 1:
                continue
            kept += 1
            if normalized not in out:
                out.append(normalized)
    return out


DEFAULT_INSTITUTION_THRESHOLD = 0.7


class InstitutionIndex:
    """Read-only matching view over the stored institutions.

    Stage 1 matches a candidate string exactly against a normalized name or
    alias. Stage 2 scores candidates with token-set overlap weighted by
    inverse document frequency across the registry; exact equality always
    scores 1.0, so Stage 1 acceptance is contained in Stage 2.
    """

    def __init__(self, institutions: Iterable[Institution]):
        self._exact: dict[str, OpenAlexId] = {}
        self._names: list[tuple[int, OpenAlexId, list[frozenset[str]]]] = []
        df: dict[str, int] = {}
        for inst in sorted(institutions, key=lambda i: i.id.serial):
            token_sets: list[frozenset[str]] = []
            seen_tokens: set[str] = set()
            for name in [inst.display_name, *inst.aliases]:
                normalized = normalize_org_string(name)
                if not normalized:
                    continue
                if normalized not in self._exact:
                    self._exact[normalized] = inst.id
                tokens = frozenset(normalized.split())
                token_sets.append(tokens)
                seen_tokens |= tokens
            if token_sets:
                self._names.append((inst.id.serial, inst.id, token_sets))
            for token in seen_tokens:
                df[token] = df.get(token, 0) + 1
        n = len(self._names)
        self._idf = {t: math.log((1 + n) / (1 + c)) + 1.0 for t, c in df.items()}
        self._default_idf = math.log(float(1 + n)) + 1.0
        self._token_index: dict[str, set[int]] = {}
        for pos, (_, _, token_sets) in enumerate(self._names):
            for tokens in token_sets:
                for token in tokens:
                    self._token_index.setdefault(token, set()).add(pos)

    def idf(self, token: str) -> float:
        return self._idf.get(token, self._default_idf)

    def _weighted_jaccard(self, a: frozenset[str], b: frozenset[str]) -> float:
        union = a | b
        if not union:
            return 0.0
        inter = a & b
        if len(inter) == len(union):
            # equal sets score exactly 1.0; summing the two sides separately
            # could differ in the last ulp depending on set iteration order
            return 1.0
        num = sum(self.idf(t) for t in inter)
        den = sum(self.idf(t) for t in union)
        return num / den

    def score_candidate(self, candidate: str) -> tuple[OpenAlexId | None, MatchScore]:
        """Best institution for one normalized candidate string with its score."""
        exact = self._exact.get(candidate)
        if exact is not None:
            return exact, MatchScore(1.0, {"exact_name": 1.0})
        tokens = frozenset(candidate.split())
        if not tokens:
            return None, MatchScore(0.0, {})
        positions: set[int] = set()
        for token in tokens:
            positions |= self._token_index.get(token, set())
        best: tuple[float, int, OpenAlexId] | None = None
        for pos in positions:
            serial, inst_id, token_sets = self._names[pos]
            score = max(self._weighted_jaccard(tokens, ts) for ts in token_sets)
            if best is None or (score, -serial) > (best[0], -best[1]):
                best = (score, serial, inst_id)
        if best is None:
            return None, MatchScore(0.0, {})
        return best[2], MatchScore(best[0], {"token_overlap": best[0]})


def match_institution(
    candidates: list[str],
    index: InstitutionIndex,
    threshold: float = DEFAULT_INSTITUTION_THRESHOLD,
) -> list[OpenAlexId]:
    """Resolve normalized candidate strings to institution ids.

    Unmatched candidates contribute nothing; the result is deduplicated in
    order of first mention.
    """
    out: list[OpenAlexId] = []
    for candidate in candidates:
        inst_id, score = index.score_candidate(candidate)
        if inst_id is not None and score.value >= threshold and inst_id not in out:
            out.append(inst_id)
    return out


# --- work fingerprints and primary-location selection --------------------

_NON_ALNUM_RE = re.compile(r"[^a-z0-9]+")


def fingerprint_work(title: str, first_author_family: str | None = None) -> str:
    """Normalized dedup key for a work: folded title, plus the first author's
    family name when available to keep generic titles apart."""
    normalized = _NON_ALNUM_RE.sub(" ", fold_ascii(title).lower()).strip()
    if not normalized:
        raise EmptyTitleError(f"title {title!r} normalized to nothing")
    if first_author_family:
        family = _NON_ALNUM_RE.sub(" ", fold_ascii(first_author_family).lower()).strip()
        if family:
            return f"{normalized}|{family}"
    return normalized


_VERSION_RANK = {
    HostVersion.PUBLISHED: 0,
    HostVersion.ACCEPTED: 1,
    HostVersion.SUBMITTED: 2,
    HostVersion.UNKNOWN: 3,
}
_VENUE_TYPE_RANK = {
    VenueType.JOURNAL: 0,
    VenueType.CONFERENCE: 1,
    VenueType.REPOSITORY: 2,
}
_NO_VENUE_RANK = 3


def select_primary_location(
    locations: list[HostLocation],
    venue_types: Mapping[OpenAlexId, VenueType],
) -> int:
    """Pick the version-of-record copy and set its primary flag.

    Precedence: published > accepted > submitted > unknown version, then
    journal > conference > repository > no venue, then list position. All
    other locations get their primary flag cleared.
    """
    if not locations:
        raise ValueError("no locations to choose from")

    def rank(item: tuple[int, HostLocation]) -> tuple[int, int, int]:
        pos, loc = item
        if loc.venue is not None and loc.venue in venue_types:
            venue_rank = _VENUE_TYPE_RANK[venue_types[loc.venue]]
        else:
            venue_rank = _NO_VENUE_RANK
        return (_VERSION_RANK[loc.version], venue_rank, pos)

    chosen = min(enumerate(locations), key=rank)[0]
    for pos, loc in enumerate(locations):
        loc.primary = pos == chosen
    return chosen
