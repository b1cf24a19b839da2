/** HTML renderers for every view.
 *
 * All functions are pure string builders over API responses and a
 * ViewState, which keeps them runnable (and testable) without a browser.
 * The shell swaps the returned markup into the page and wires events by
 * the data-role attributes emitted here.
 */

import {
  AuthorRecord,
  ConceptRecord,
  EntityRecord,
  InstitutionRecord,
  Kind,
  ListResponse,
  RootResponse,
  VenueRecord,
  WorkRecord,
  shortId,
} from "./types.js";
import {
  FILTERS,
  KINDS,
  SORTS,
  ViewState,
  defaultState,
  detailState,
  encodeState,
  linkedList,
  withCursor,
  withoutChip,
} from "./filters.js";

export function esc(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;")
    .replace(/'/g, "&#39;");
}

function href(state: ViewState): string {
  return esc(encodeState(state));
}

function anchor(state: ViewState, label: string, cls = ""): string {
  const classAttr = cls ? ` class="${cls}"` : "";
  return `<a${classAttr} href="${href(state)}">${esc(label)}</a>`;
}

function badge(text: string, cls = "badge"): string {
  return `<span class="${cls}">${esc(text)}</span>`;
}

function entityLink(kind: Kind, id: string, label?: string): string {
  return anchor(detailState(kind, id), label ?? id, "entity");
}

// --- navigation chrome -------------------------------------------------

export function renderNav(active: Kind | null): string {
  const tabs = KINDS.map((kind) => {
    const cls = kind === active ? "tab active" : "tab";
    return anchor(defaultState(kind), kind, cls);
  });
  return `<nav>${anchor(
    { ...defaultState(), kind: "works" },
    "openindex",
    "brand",
  )} ${tabs.join(" ")}</nav>`;
}

export function renderHome(root: RootResponse): string {
  const rows = KINDS.map(
    (kind) =>
      `<tr><td>${anchor(defaultState(kind), kind)}</td>` +
      `<td class="num">${root.counts[kind] ?? 0}</td></tr>`,
  );
  const dump = root.dump_created_date
    ? `last dump ${esc(root.dump_created_date)}`
    : "no dump exported yet";
  return (
    `<section class="home"><h1>openindex explorer</h1>` +
    `<p>engine ${esc(root.version)}, ${dump}</p>` +
    `<table class="counts"><tbody>${rows.join("")}</tbody></table></section>`
  );
}

// --- list view ---------------------------------------------------------

function chipRow(state: ViewState): string {
  const chips = state.chips.map((chip, i) => {
    const remove = anchor(withoutChip(state, i), "x", "remove");
    return `<span class="chip">${esc(chip.attribute)}:${esc(chip.value)} ${remove}</span>`;
  });
  return `<div class="chips">${chips.join(" ")}</div>`;
}

function filterForm(state: ViewState): string {
  const options = FILTERS[state.kind]
    .map((attr) => `<option value="${esc(attr)}">${esc(attr)}</option>`)
    .join("");
  return (
    `<form data-role="add-chip">` +
    `<select name="attribute">${options}</select>` +
    `<input name="value" placeholder="value" autocomplete="off">` +
    `<button type="submit">add filter</button></form>`
  );
}

function searchForm(state: ViewState): string {
  return (
    `<form data-role="search">` +
    `<input name="q" placeholder="search ${esc(state.kind)}" autocomplete="off">` +
    `<button type="submit">search</button></form>`
  );
}

function sortControl(state: ViewState): string {
  const choices: string[] = [];
  for (const field of SORTS[state.kind]) {
    choices.push(field);
    choices.push(`${field}:desc`);
  }
  const options = choices
    .map((choice) => {
      const selected =
        choice === (state.sort ?? "id") ? " selected" : "";
      return `<option value="${esc(choice)}"${selected}>${esc(choice)}</option>`;
    })
    .join("");
  return `<label class="sort">sort <select data-role="sort">${options}</select></label>`;
}

function pager(state: ViewState, nextCursor: string | null, empty: boolean): string {
  const parts: string[] = [];
  if (state.cursor !== null) {
    parts.push(anchor(withCursor(state, null), "first page", "pager"));
  } else {
    parts.push(`<span class="pager disabled">first page</span>`);
  }
  if (nextCursor !== null && !empty) {
    // data-role lets the shell re-trigger a walk whose token stayed the
    // same between pages, where a plain hash click would be a no-op
    parts.push(
      `<a class="pager next" data-role="next" href="${href(
        withCursor(state, nextCursor),
      )}">next</a>`,
    );
  } else {
    parts.push(`<span class="pager disabled">next</span>`);
  }
  return `<div class="pager-row">${parts.join(" ")}</div>`;
}

function ceidBadge(record: EntityRecord): string {
  const r = record as unknown as Record<string, unknown>;
  if (typeof r.doi === "string") return badge(`doi ${r.doi}`, "badge ceid");
  if (typeof r.orcid === "string") return badge(`orcid ${r.orcid}`, "badge ceid");
  if (typeof r.issn_l === "string") return badge(`issn ${r.issn_l}`, "badge ceid");
  if (typeof r.ror === "string") return badge(`ror ${r.ror}`, "badge ceid");
  if (typeof r.wikidata === "string" && r.wikidata !== "")
    return badge(`wikidata ${r.wikidata}`, "badge ceid");
  return "";
}

function listRow(kind: Kind, record: EntityRecord): string {
  const id = shortId(record.id);
  const cells: string[] = [];
  if (kind === "works") {
    const w = record as WorkRecord;
    cells.push(entityLink(kind, id, w.title ?? id));
    cells.push(w.publication_year === null ? "" : String(w.publication_year));
    cells.push(esc(w.work_type));
    cells.push(`cited by ${w.cited_by_count}`);
  } else if (kind === "authors") {
    const a = record as AuthorRecord;
    cells.push(entityLink(kind, id, a.display_name));
    cells.push(`${a.works_count} works`);
    cells.push(`cited by ${a.cited_by_count}`);
  } else if (kind === "venues") {
    const v = record as VenueRecord;
    cells.push(entityLink(kind, id, v.display_name));
    cells.push(esc(v.venue_type));
    cells.push(`${v.works_count} works`);
  } else if (kind === "institutions") {
    const inst = record as InstitutionRecord;
    cells.push(entityLink(kind, id, inst.display_name));
    cells.push(esc(inst.country_code ?? ""));
    cells.push(`${inst.works_count} works`);
  } else {
    const c = record as ConceptRecord;
    cells.push(entityLink(kind, id, c.display_name));
    cells.push(`level ${c.level}`);
    cells.push(`${c.works_count} works`);
  }
  cells.push(ceidBadge(record));
  return `<tr data-id="${esc(id)}">${cells.map((c) => `<td>${c}</td>`).join("")}</tr>`;
}

export interface ListExtras {
  /** Inline message from a rejected filter; previous rows stay visible. */
  inlineError?: string;
  /** Set after a stale cursor forced a restart from the first page. */
  staleNotice?: boolean;
}

export function renderList(
  state: ViewState,
  response: ListResponse,
  extras: ListExtras = {},
): string {
  const rows = response.results.map((r) => listRow(state.kind, r)).join("");
  const empty = response.results.length === 0;
  const table = empty
    ? `<p class="empty">no results</p>`
    : `<table class="list"><tbody>${rows}</tbody></table>`;
  const notice = extras.staleNotice
    ? `<div class="banner stale">results changed underneath this page; restarted from the first page</div>`
    : "";
  const inline = extras.inlineError
    ? `<div class="error inline">${esc(extras.inlineError)}</div>`
    : "";
  return (
    `<section class="list-view" data-kind="${esc(state.kind)}">` +
    renderNav(state.kind) +
    `<h1>${esc(state.kind)}</h1>` +
    searchForm(state) +
    filterForm(state) +
    chipRow(state) +
    sortControl(state) +
    notice +
    inline +
    `<p class="count" data-count="${response.meta.count}">${response.meta.count} results</p>` +
    table +
    pager(state, response.meta.next_cursor, empty) +
    `</section>`
  );
}

// --- detail views ------------------------------------------------------

function field(label: string, value: string): string {
  return `<dt>${esc(label)}</dt><dd>${value}</dd>`;
}

function plain(label: string, value: string | number | null): string {
  return field(label, value === null || value === "" ? "<em>none</em>" : esc(String(value)));
}

function workDetail(w: WorkRecord): string {
  const authorships = w.authorships
    .map((a) => {
      const insts = a.institutions
        .map((i) => entityLink("institutions", i))
        .join(", ");
      const affiliation = insts ? ` (${insts})` : "";
      return (
        `<li>${entityLink("authors", a.author, a.raw_author_name || a.author)}` +
        `${affiliation} <span class="pos">${esc(a.position)}</span></li>`
      );
    })
    .join("");
  const locations = w.locations
    .map((loc) => {
      const host =
        loc.venue !== null
          ? entityLink("venues", loc.venue)
          : loc.url !== null
            ? esc(loc.url)
            : "<em>unknown host</em>";
      const vor = loc.primary
        ? ` ${badge("version of record", "badge vor")}`
        : "";
      const license = loc.license ? ` ${badge(loc.license, "badge license")}` : "";
      return `<li>${host} <span class="version">${esc(loc.version)}</span>${vor}${license}</li>`;
    })
    .join("");
  const concepts = w.concepts
    .map(
      (c) =>
        `<li>${entityLink("concepts", c.id)} ${c.score.toFixed(2)}` +
        `${c.inherited ? " (inherited)" : ""}</li>`,
    )
    .join("");
  const refs = w.referenced_works.map((r) => entityLink("works", r)).join(", ");
  return (
    `<dl>` +
    plain("doi", w.doi) +
    plain("publication year", w.publication_year) +
    plain("type", w.work_type) +
    field("authorships", authorships ? `<ul>${authorships}</ul>` : "<em>none</em>") +
    field("locations", locations ? `<ul>${locations}</ul>` : "<em>none</em>") +
    field("concepts", concepts ? `<ul>${concepts}</ul>` : "<em>none</em>") +
    field("referenced works", refs || "<em>none</em>") +
    plain("unresolved references", w.unresolved_references.length) +
    plain("cited by", w.cited_by_count) +
    plain("abstract", w.abstract) +
    plain("created", w.created_date) +
    plain("updated", w.updated_date) +
    `</dl>`
  );
}

function authorDetail(a: AuthorRecord): string {
  return (
    `<dl>` +
    plain("orcid", a.orcid) +
    plain("alternate names", a.alternate_names.join("; ")) +
    plain("works", a.works_count) +
    plain("cited by", a.cited_by_count) +
    plain("created", a.created_date) +
    plain("updated", a.updated_date) +
    `</dl>` +
    anchor(
      linkedList("works", "authorships.author", shortId(a.id)),
      "all works by this author",
      "assoc",
    )
  );
}

function venueDetail(v: VenueRecord): string {
  return (
    `<dl>` +
    plain("issn-l", v.issn_l) +
    plain("issns", v.issns.join(", ")) +
    plain("type", v.venue_type) +
    plain("works", v.works_count) +
    plain("created", v.created_date) +
    plain("updated", v.updated_date) +
    `</dl>` +
    anchor(
      linkedList("works", "locations.venue", shortId(v.id)),
      "all works in this venue",
      "assoc",
    )
  );
}

function institutionDetail(i: InstitutionRecord): string {
  return (
    `<dl>` +
    plain("ror", i.ror) +
    plain("aliases", i.aliases.join("; ")) +
    plain("country", i.country_code) +
    plain("works", i.works_count) +
    plain("created", i.created_date) +
    plain("updated", i.updated_date) +
    `</dl>` +
    anchor(
      linkedList("works", "authorships.institutions", shortId(i.id)),
      "all works affiliated here",
      "assoc",
    )
  );
}

function conceptDetail(c: ConceptRecord): string {
  const parents = c.parents.map((p) => entityLink("concepts", p)).join(", ");
  return (
    `<dl>` +
    plain("wikidata", c.wikidata) +
    plain("level", c.level) +
    field("parents", parents || "<em>none (root)</em>") +
    field(
      "children",
      anchor(linkedList("concepts", "parents", shortId(c.id)), "browse children"),
    ) +
    plain("keywords", c.keywords.join(", ")) +
    plain("works", c.works_count) +
    plain("created", c.created_date) +
    plain("updated", c.updated_date) +
    `</dl>` +
    anchor(
      linkedList("works", "concepts.id", shortId(c.id)),
      "all works tagged with this concept",
      "assoc",
    )
  );
}

function title(kind: Kind, record: EntityRecord): string {
  if (kind === "works") return (record as WorkRecord).title ?? shortId(record.id);
  return (record as AuthorRecord).display_name || shortId(record.id);
}

/** Compact listing of associated works embedded on non-work detail pages,
 * fetched through the same documented filter the "all works" link uses. */
export function renderAssociatedWorks(works: ListResponse): string {
  if (works.results.length === 0) {
    return `<section class="assoc-works"><h2>works</h2><p class="empty">no works</p></section>`;
  }
  const rows = works.results
    .map((r) => {
      const w = r as WorkRecord;
      const id = shortId(w.id);
      const year = w.publication_year === null ? "" : ` (${w.publication_year})`;
      return `<li>${entityLink("works", id, w.title ?? id)}${esc(year)}</li>`;
    })
    .join("");
  return (
    `<section class="assoc-works"><h2>works</h2>` +
    `<p class="count" data-count="${works.meta.count}">${works.meta.count} total</p>` +
    `<ul>${rows}</ul></section>`
  );
}

export function renderDetail(
  kind: Kind,
  record: EntityRecord,
  associated: ListResponse | null,
): string {
  let body: string;
  if (kind === "works") body = workDetail(record as WorkRecord);
  else if (kind === "authors") body = authorDetail(record as AuthorRecord);
  else if (kind === "venues") body = venueDetail(record as VenueRecord);
  else if (kind === "institutions") body = institutionDetail(record as InstitutionRecord);
  else body = conceptDetail(record as ConceptRecord);
  const id = shortId(record.id);
  return (
    `<section class="detail" data-kind="${esc(kind)}" data-id="${esc(id)}">` +
    renderNav(kind) +
    `<h1>${esc(title(kind, record))} <span class="short-id">${esc(id)}</span></h1>` +
    ceidBadge(record) +
    body +
    (associated === null ? "" : renderAssociatedWorks(associated)) +
    `</section>`
  );
}

// --- error surfaces ----------------------------------------------------

export function renderNotFound(kind: Kind, key: string, message: string): string {
  return (
    `<section class="not-found">` +
    renderNav(kind) +
    `<h1>not found</h1>` +
    `<p>${esc(message || `no ${kind} entry for ${key}`)}</p>` +
    `<p>${anchor(defaultState(kind), `browse all ${kind}`)}</p>` +
    searchForm(defaultState(kind)) +
    `</section>`
  );
}

export function renderRetryBanner(message: string): string {
  return (
    `<div class="banner retry">request failed: ${esc(message)} ` +
    `<a href="" data-role="retry">retry</a></div>`
  );
}

export function renderFatal(kind: Kind | null, message: string): string {
  return (
    `<section class="fatal">` +
    renderNav(kind) +
    renderRetryBanner(message) +
    `</section>`
  );
}
