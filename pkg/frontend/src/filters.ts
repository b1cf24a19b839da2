/** View state and its URL-hash codec.
 *
 * Everything the explorer shows is a function of one ViewState, and every
 * ViewState serializes into the location hash, so any view can be
 * reproduced from its URL alone.
 */

import { Kind } from "./types.js";

export const KINDS: Kind[] = [
  "works",
  "authors",
  "venues",
  "institutions",
  "concepts",
];

/** Filter attributes the server accepts, per kind. Kept in sync by hand
 * with the API's whitelist; the chip builder offers nothing else. */
export const FILTERS: Record<Kind, string[]> = {
  works: [
    "publication_year",
    "work_type",
    "doi",
    "has_doi",
    "authorships.author",
    "authorships.institutions",
    "locations.venue",
    "concepts.id",
    "title.search",
  ],
  authors: ["orcid", "has_orcid", "display_name", "display_name.search"],
  venues: ["issn_l", "venue_type", "display_name.search"],
  institutions: ["ror", "country_code", "display_name.search"],
  concepts: ["level", "wikidata", "parents", "display_name.search"],
};

export const SORTS: Record<Kind, string[]> = {
  works: ["id", "publication_year", "cited_by_count"],
  authors: ["id", "display_name", "works_count", "cited_by_count"],
  venues: ["id", "display_name", "works_count"],
  institutions: ["id", "display_name", "works_count"],
  concepts: ["id", "display_name", "level", "works_count"],
};

/** The free-text box maps onto the one search filter each kind has. */
export const SEARCH_ATTRIBUTE: Record<Kind, string> = {
  works: "title.search",
  authors: "display_name.search",
  venues: "display_name.search",
  institutions: "display_name.search",
  concepts: "display_name.search",
};

export interface Chip {
  attribute: string;
  value: string;
}

export interface ViewState {
  kind: Kind;
  /** null = list view, short id = detail view for that entity. */
  selected: string | null;
  chips: Chip[];
  sort: string | null;
  cursor: string | null;
}

export function isKind(value: string): value is Kind {
  return (KINDS as string[]).includes(value);
}

export function chipAllowed(kind: Kind, attribute: string): boolean {
  return FILTERS[kind].includes(attribute);
}

export function sortAllowed(kind: Kind, field: string): boolean {
  return SORTS[kind].includes(field);
}

export function defaultState(kind: Kind = "works"): ViewState {
  return { kind, selected: null, chips: [], sort: null, cursor: null };
}

/** Conjunction expression the API understands: `a:v,b:w`. */
export function filterExpr(chips: Chip[]): string | null {
  if (chips.length === 0) return null;
  return chips.map((c) => `${c.attribute}:${c.value}`).join(",");
}

/** Inverse of filterExpr. Values may contain ":" but not "," (the API
 * grammar has the same limit). Conjuncts without a colon are dropped. */
export function parseFilterExpr(expr: string): Chip[] {
  const chips: Chip[] = [];
  for (const part of expr.split(",")) {
    const colon = part.indexOf(":");
    if (colon <= 0) continue;
    chips.push({ attribute: part.slice(0, colon), value: part.slice(colon + 1) });
  }
  return chips;
}

export function encodeState(state: ViewState): string {
  if (state.selected !== null) {
    return `#/${state.kind}/${encodeURIComponent(state.selected)}`;
  }
  const params = new URLSearchParams();
  const expr = filterExpr(state.chips);
  if (expr !== null) params.set("filter", expr);
  if (state.sort !== null) params.set("sort", state.sort);
  if (state.cursor !== null) params.set("cursor", state.cursor);
  const query = params.toString();
  return `#/${state.kind}` + (query ? `?${query}` : "");
}

/** Rebuild a ViewState from a location hash.
 *
 * Unknown kinds fall back to the default view and attributes outside the
 * whitelist are dropped, so a decoded state always satisfies the same
 * invariants as one built through the UI. Bad values are kept: the server
 * rejects them and the message is shown inline.
 */
export function decodeState(hash: string): ViewState {
  let body = hash.startsWith("#") ? hash.slice(1) : hash;
  if (body.startsWith("/")) body = body.slice(1);
  if (body === "") return defaultState();

  const queryAt = body.indexOf("?");
  const path = queryAt === -1 ? body : body.slice(0, queryAt);
  const query = queryAt === -1 ? "" : body.slice(queryAt + 1);

  const segments = path.split("/").filter((s) => s !== "");
  const kindRaw = segments[0] ?? "";
  if (!isKind(kindRaw)) return defaultState();
  const kind = kindRaw;

  if (segments.length > 1) {
    return {
      kind,
      selected: decodeURIComponent(segments.slice(1).join("/")),
      chips: [],
      sort: null,
      cursor: null,
    };
  }

  const params = new URLSearchParams(query);
  const rawFilter = params.get("filter");
  const chips = (rawFilter === null ? [] : parseFilterExpr(rawFilter)).filter(
    (c) => chipAllowed(kind, c.attribute),
  );
  let sort = params.get("sort");
  if (sort !== null) {
    const field = sort.endsWith(":desc") ? sort.slice(0, -5) : sort;
    if (!sortAllowed(kind, field)) sort = null;
  }
  return { kind, selected: null, chips, sort, cursor: params.get("cursor") };
}

export function withChip(state: ViewState, chip: Chip): ViewState {
  return { ...state, selected: null, cursor: null, chips: [...state.chips, chip] };
}

export function withoutChip(state: ViewState, index: number): ViewState {
  const chips = state.chips.filter((_, i) => i !== index);
  return { ...state, selected: null, cursor: null, chips };
}

export function withSort(state: ViewState, sort: string | null): ViewState {
  return { ...state, selected: null, cursor: null, sort };
}

export function withCursor(state: ViewState, cursor: string | null): ViewState {
  return { ...state, cursor };
}

/** List view for one kind filtered to a single chip; used by detail links
 * like "works by this author". */
export function linkedList(kind: Kind, attribute: string, value: string): ViewState {
  return { kind, selected: null, chips: [{ attribute, value }], sort: null, cursor: null };
}

export function detailState(kind: Kind, id: string): ViewState {
  return { kind, selected: id, chips: [], sort: null, cursor: null };
}
