"""Hierarchical concept tree loading/validation and lexicon-based work tagging.

The tagger is a transparent stand-in for a learned classifier: keyword
hits from title and abstract produce raw scores, normalized so the top
concept scores 1.0, and ancestors of tagged concepts are pulled in with a
decayed score. Same interface as a learned scorer, so one can be swapped
in later.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

from .disambig import fold_ascii
from .idnorm import validate_wikidata
from .ids import EntityKind, OpenAlexId, parse_id
from .model import Concept, ConceptAssignment, WorkType

MAX_LEVEL = 5
DEFAULT_TAG_THRESHOLD = 0.3
DEFAULT_ANCESTOR_DECAY = 0.5

_TOKEN_RE = re.compile(r"[a-z0-9]+")
_KEYWORD_RE = re.compile(r"^[a-z0-9]+$")


class ConceptTreeError(ValueError):
    """Base for tree validation failures; messages name concept and rule."""


class ConceptCycleError(ConceptTreeError):
    pass


class LevelInconsistencyError(ConceptTreeError):
    pass


class DuplicateWikidataError(ConceptTreeError):
    pass


class DanglingParentError(ConceptTreeError):
    pass


@dataclass
class ConceptTree:
    """Validated concept hierarchy plus the tagging lexicon."""

    concepts: dict[OpenAlexId, Concept]
    roots: list[OpenAlexId]
    lexicon: dict[str, list[tuple[OpenAlexId, float]]]
    _ancestors: dict[OpenAlexId, frozenset[OpenAlexId]] = field(default_factory=dict)

    def ancestors(self, concept_id: OpenAlexId) -> frozenset[OpenAlexId]:
        """All proper ancestors of a concept (transitive parents)."""
        cached = self._ancestors.get(concept_id)
        if cached is not None:
            return cached
        collected: set[OpenAlexId] = set()
        for parent in self.concepts[concept_id].parents:
            collected.add(parent)
            collected |= self.ancestors(parent)
        result = frozenset(collected)
        self._ancestors[concept_id] = result
        return result

    def max_level(self) -> int:
        return max((c.level for c in self.concepts.values()), default=0)


def build_concept_tree(concepts: Iterable[Concept]) -> ConceptTree:
    """Validate a concept set and assemble the tree and lexicon.

    Raises a distinct error per broken rule: dangling parent, cycle, level
    inconsistency, duplicate Wikidata id.
    """
    by_id: dict[OpenAlexId, Concept] = {}
    for concept in concepts:
        if concept.id.kind is not EntityKind.CONCEPT:
            raise ConceptTreeError(f"{concept.id}: not a concept id")
        if concept.id in by_id:
            raise ConceptTreeError(f"{concept.id}: duplicate concept id")
        by_id[concept.id] = concept

    for concept in by_id.values():
        for parent in concept.parents:
            if parent not in by_id:
                raise DanglingParentError(
                    f"{concept.id}: parent {parent} does not exist"
                )

    # Cycle check runs before level checks so a cyclic mutation is named as
    # such rather than as a level problem.
    state: dict[OpenAlexId, int] = {}  # 0 in progress, 1 done

    def visit(node: OpenAlexId, trail: list[OpenAlexId]) -> None:
        mark = state.get(node)
        if mark == 1:
            return
        if mark == 0:
            cycle = trail[trail.index(node):] + [node]
            raise ConceptCycleError(
                "parent cycle: " + " -> ".join(str(c) for c in cycle)
            )
        state[node] = 0
        trail.append(node)
        for parent in by_id[node].parents:
            visit(parent, trail)
        trail.pop()
        state[node] = 1

    for concept_id in by_id:
        visit(concept_id, [])

    seen_wikidata: dict[str, OpenAlexId] = {}
    for concept in by_id.values():
        if not concept.wikidata:
            raise ConceptTreeError(f"{concept.id}: missing wikidata id")
        wikidata = validate_wikidata(concept.wikidata)
        if wikidata in seen_wikidata:
            raise DuplicateWikidataError(
                f"{concept.id}: wikidata {wikidata} already used by {seen_wikidata[wikidata]}"
            )
        seen_wikidata[wikidata] = concept.id

    for concept in by_id.values():
        if not 0 <= concept.level <= MAX_LEVEL:
            raise LevelInconsistencyError(
                f"{concept.id}: level {concept.level} outside [0, {MAX_LEVEL}]"
            )
        if concept.level == 0:
            if concept.parents:
                raise LevelInconsistencyError(f"{concept.id}: root concept has parents")
            continue
        if not concept.parents:
            raise LevelInconsistencyError(
                f"{concept.id}: level {concept.level} concept has no parents"
            )
        for parent in concept.parents:
            parent_level = by_id[parent].level
            if parent_level != concept.level - 1:
                raise LevelInconsistencyError(
                    f"{concept.id}: level {concept.level} but parent {parent} "
                    f"has level {parent_level}, expected {concept.level - 1}"
                )

    lexicon: dict[str, list[tuple[OpenAlexId, float]]] = {}
    for concept in sorted(by_id.values(), key=lambda c: c.id.serial):
        for keyword in concept.keywords:
            token, weight = _parse_keyword(concept, keyword)
            lexicon.setdefault(token, []).append((concept.id, weight))

    roots = sorted(
        (c.id for c in by_id.values() if c.level == 0), key=lambda i: i.serial
    )
    return ConceptTree(concepts=by_id, roots=roots, lexicon=lexicon)


def _parse_keyword(concept: Concept, keyword) -> tuple[str, float]:
    if isinstance(keyword, str):
        token, weight = keyword, 1.0
    elif isinstance(keyword, (list, tuple)) and len(keyword) == 2:
        token, weight = keyword[0], float(keyword[1])
    else:
        raise ConceptTreeError(f"{concept.id}: malformed keyword {keyword!r}")
    if not _KEYWORD_RE.match(token):
        raise ConceptTreeError(
            f"{concept.id}: keyword {token!r} is not a lowercase alphanumeric token"
        )
    if not 0.0 < weight <= 1.0:
        raise ConceptTreeError(f"{concept.id}: keyword {token!r} weight {weight} outside (0,1]")
    return token, weight


def load_concept_tree(path: str | Path) -> ConceptTree:
    """Load a JSON Lines tree file: one concept per line.

    Line shape: ``{id, wikidata, display_name, level, parents, keywords}``
    where a keyword is a token or a ``[token, weight]`` pair (weight
    defaults to 1.0).
    """
    concepts: list[Concept] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                raw = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ConceptTreeError(f"{path}:{lineno}: invalid JSON ({exc})") from exc
            concepts.append(
                Concept(
                    id=parse_id(raw["id"]),
                    wikidata=raw["wikidata"],
                    display_name=raw.get("display_name", ""),
                    level=raw["level"],
                    parents=[parse_id(p) for p in raw.get("parents", [])],
                    keywords=list(raw.get("keywords", [])),
                )
            )
    return build_concept_tree(concepts)


def tokenize(text: str) -> list[str]:
    return _TOKEN_RE.findall(fold_ascii(text).lower())


def tag_work(
    title: str | None,
    abstract: str | None,
    tree: ConceptTree,
    threshold: float = DEFAULT_TAG_THRESHOLD,
    decay: float = DEFAULT_ANCESTOR_DECAY,
) -> list[ConceptAssignment]:
    """Score concepts for a work from its title and abstract.

    Title tokens count double. Raw scores are normalized by the per-work
    maximum, concepts at or above the threshold are emitted directly, and
    every ancestor of an emitted concept follows at ``decay`` times its
    best directly-emitted descendant unless it already scored higher on
    its own.
    """
    counts: dict[str, float] = {}
    for token in tokenize(title or ""):
        counts[token] = counts.get(token, 0.0) + 2.0
    for token in tokenize(abstract or ""):
        counts[token] = counts.get(token, 0.0) + 1.0

    raw: dict[OpenAlexId, float] = {}
    for token, weighted_count in counts.items():
        for concept_id, weight in tree.lexicon.get(token, ()):
            raw[concept_id] = raw.get(concept_id, 0.0) + weight * weighted_count
    if not raw:
        return []

    top = max(raw.values())
    direct = {cid: value / top for cid, value in raw.items() if value / top >= threshold}

    inherited: dict[OpenAlexId, float] = {}
    for cid, score in direct.items():
        for ancestor in tree.ancestors(cid):
            candidate = decay * score
            if candidate > inherited.get(ancestor, 0.0):
                inherited[ancestor] = candidate

    merged: dict[OpenAlexId, tuple[float, bool]] = {}
    for cid, score in direct.items():
        merged[cid] = (score, False)
    for cid, score in inherited.items():
        existing = merged.get(cid)
        if existing is None or existing[0] <= score:
            merged[cid] = (score, True)

    assignments = [
        ConceptAssignment(cid, score, inherited_flag)
        for cid, (score, inherited_flag) in merged.items()
    ]
    assignments.sort(key=lambda a: (-a.score, a.concept.serial))
    return assignments


@dataclass
class CoverageReport:
    """Share of works carrying at least one concept."""

    total_works: int
    tagged_works: int
    fraction: float
    by_type: dict[str, tuple[int, int, float]]


def coverage_report(works: Iterable) -> CoverageReport:
    """Exact concept coverage over a collection of works, total and per type."""
    total = 0
    tagged = 0
    per_type: dict[str, list[int]] = {}
    for work in works:
        total += 1
        has_concept = bool(work.concepts)
        tagged += has_concept
        work_type = work.work_type.value if isinstance(work.work_type, WorkType) else str(work.work_type)
        bucket = per_type.setdefault(work_type, [0, 0])
        bucket[0] += 1
        bucket[1] += has_concept
    by_type = {
        name: (n, k, k / n if n else 0.0)
        for name, (n, k) in sorted(per_type.items())
    }
    return CoverageReport(
        total_works=total,
        tagged_works=tagged,
        fraction=tagged / total if total else 0.0,
        by_type=by_type,
    )
