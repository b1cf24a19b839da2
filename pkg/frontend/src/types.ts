/** Wire shapes of the REST API. Field names and order follow the server. */

export type Kind = "works" | "authors" | "venues" | "institutions" | "concepts";

export interface ListMeta {
  count: number;
  page: number | null;
  per_page: number;
  next_cursor: string | null;
}

export interface AuthorshipRecord {
  author: string;
  institutions: string[];
  raw_author_name: string;
  raw_affiliation_strings: string[];
  position: string;
}

export interface LocationRecord {
  venue: string | null;
  url: string | null;
  version: string;
  license: string | null;
  primary: boolean;
}

export interface ConceptScoreRecord {
  id: string;
  score: number;
  inherited: boolean;
}

export interface WorkRecord {
  id: string;
  doi: string | null;
  title: string | null;
  abstract: string | null;
  publication_year: number | null;
  work_type: string;
  authorships: AuthorshipRecord[];
  locations: LocationRecord[];
  concepts: ConceptScoreRecord[];
  referenced_works: string[];
  unresolved_references: string[];
  cited_by_count: number;
  created_date: string;
  updated_date: string;
}

export interface AuthorRecord {
  id: string;
  orcid: string | null;
  display_name: string;
  alternate_names: string[];
  works_count: number;
  cited_by_count: number;
  created_date: string;
  updated_date: string;
}

export interface VenueRecord {
  id: string;
  issn_l: string | null;
  issns: string[];
  display_name: string;
  venue_type: string;
  works_count: number;
  created_date: string;
  updated_date: string;
}

export interface InstitutionRecord {
  id: string;
  ror: string | null;
  display_name: string;
  aliases: string[];
  country_code: string | null;
  works_count: number;
  created_date: string;
  updated_date: string;
}

export interface ConceptRecord {
  id: string;
  wikidata: string;
  display_name: string;
  level: number;
  parents: string[];
  keywords: string[];
  works_count: number;
  created_date: string;
  updated_date: string;
}

export type EntityRecord =
  | WorkRecord
  | AuthorRecord
  | VenueRecord
  | InstitutionRecord
  | ConceptRecord;

export interface ListResponse {
  meta: ListMeta;
  results: EntityRecord[];
}

export interface RootResponse {
  kinds: string[];
  counts: Record<string, number>;
  version: string;
  dump_created_date: string | null;
}

export interface ErrorBody {
  error: string;
  message: string;
}

/** Ids inside records are short ("W12"); the top-level id is a URL. */
export function shortId(id: string): string {
  const slash = id.lastIndexOf("/");
  return slash === -1 ? id : id.slice(slash + 1);
}
