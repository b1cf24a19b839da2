/** View controller: one ViewState in, one rendered page out.
 *
 * The browser shell feeds it location-hash changes and form submissions;
 * tests feed it the same calls directly. It issues only the documented
 * API requests and renders through the pure builders in render.ts, so the
 * whole explorer minus the DOM glue runs headless.
 */

import { ApiClient, ApiError, FetchLike } from "./api.js";
import {
  Chip,
  SEARCH_ATTRIBUTE,
  ViewState,
  chipAllowed,
  decodeState,
  defaultState,
  encodeState,
  linkedList,
  withChip,
  withCursor,
  withSort,
} from "./filters.js";
import {
  renderDetail,
  renderFatal,
  renderHome,
  renderList,
  renderNotFound,
} from "./render.js";
import { EntityRecord, ListResponse } from "./types.js";

export interface ControllerEnv {
  apiBaseUrl: string;
  fetchImpl: FetchLike;
  onRender(html: string): void;
  /** Receives the new hash on navigation; the shell assigns it to
   * location.hash, which loops back into handleHash. */
  onNavigate(hash: string): void;
  perPage?: number;
}

const EMPTY_LIST: ListResponse = {
  meta: { count: 0, page: 1, per_page: 0, next_cursor: null },
  results: [],
};

export class Controller {
  readonly client: ApiClient;
  private readonly perPage: number;
  private seq = 0;
  state: ViewState = defaultState();
  /** Last successfully rendered list, kept so a rejected filter can show
   * its error inline without losing the previous rows. */
  private lastList: { state: ViewState; response: ListResponse } | null = null;
  lastHtml = "";

  constructor(private readonly env: ControllerEnv) {
    this.client = new ApiClient(env.apiBaseUrl, env.fetchImpl);
    this.perPage = env.perPage ?? 25;
  }

  get requestLog(): string[] {
    return this.client.requestLog;
  }

  private render(html: string): void {
    this.lastHtml = html;
    this.env.onRender(html);
  }

  navigate(state: ViewState): void {
    this.env.onNavigate(encodeState(state));
  }

  /** Entry point for hash changes, including the initial page load. */
  async handleHash(hash: string): Promise<void> {
    if (hash === "" || hash === "#" || hash === "#/") {
      await this.showHome();
      return;
    }
    const state = decodeState(hash);
    await this.show(state);
  }

  async show(state: ViewState): Promise<void> {
    this.state = state;
    if (state.selected !== null) {
      await this.showDetail(state);
    } else {
      await this.showList(state);
    }
  }

  private nextSeq(): number {
    this.seq += 1;
    return this.seq;
  }

  private stale(seq: number): boolean {
    return seq !== this.seq;
  }

  private async showHome(): Promise<void> {
    const seq = this.nextSeq();
    this.state = defaultState();
    try {
      const root = await this.client.root();
      if (this.stale(seq)) return;
      this.render(renderHome(root));
    } catch (err) {
      if (this.stale(seq)) return;
      this.render(renderFatal(null, this.describe(err)));
    }
  }

  private async showList(state: ViewState): Promise<void> {
    const seq = this.nextSeq();
    try {
      const response = await this.client.list(state, this.perPage);
      if (this.stale(seq)) return;
      this.lastList = { state, response };
      this.render(renderList(state, response));
    } catch (err) {
      if (this.stale(seq)) return;
      await this.handleListError(state, err, seq);
    }
  }

  private async handleListError(
    state: ViewState,
    err: unknown,
    seq: number,
  ): Promise<void> {
    if (err instanceof ApiError && err.code === "bad_cursor") {
      // the store changed under the cursor; restart from the first page
      const restarted = withCursor(state, null);
      try {
        const response = await this.client.list(restarted, this.perPage);
        if (this.stale(seq)) return;
        this.state = restarted;
        this.lastList = { state: restarted, response };
        this.render(renderList(restarted, response, { staleNotice: true }));
      } catch (inner) {
        if (this.stale(seq)) return;
        this.render(renderFatal(state.kind, this.describe(inner)));
      }
      return;
    }
    if (err instanceof ApiError && err.status === 400) {
      const kept =
        this.lastList !== null && this.lastList.state.kind === state.kind
          ? this.lastList.response
          : EMPTY_LIST;
      this.render(renderList(state, kept, { inlineError: err.message }));
      return;
    }
    this.render(renderFatal(state.kind, this.describe(err)));
  }

  private async showDetail(state: ViewState): Promise<void> {
    const seq = this.nextSeq();
    const id = state.selected as string;
    try {
      const record = await this.client.get(state.kind, id);
      const associated =
        state.kind === "works" ? null : await this.fetchAssociated(state, record);
      if (this.stale(seq)) return;
      this.render(renderDetail(state.kind, record, associated));
    } catch (err) {
      if (this.stale(seq)) return;
      if (err instanceof ApiError && err.status === 404) {
        this.render(renderNotFound(state.kind, id, err.message));
        return;
      }
      this.render(renderFatal(state.kind, this.describe(err)));
    }
  }

  private async fetchAssociated(
    state: ViewState,
    record: EntityRecord,
  ): Promise<ListResponse> {
    const attribute = {
      authors: "authorships.author",
      venues: "locations.venue",
      institutions: "authorships.institutions",
      concepts: "concepts.id",
    }[state.kind as "authors" | "venues" | "institutions" | "concepts"];
    const short = record.id.slice(record.id.lastIndexOf("/") + 1);
    return this.client.list(linkedList("works", attribute, short), 10);
  }

  private describe(err: unknown): string {
    if (err instanceof ApiError) return err.message || err.code;
    return String(err);
  }

  // --- intents from the shell's form handlers --------------------------

  addChip(attribute: string, value: string): void {
    const chip: Chip = { attribute: attribute.trim(), value: value.trim() };
    if (chip.value === "" || !chipAllowed(this.state.kind, chip.attribute)) return;
    this.navigate(withChip(this.state, chip));
  }

  removeSearchChips(state: ViewState): Chip[] {
    const search = SEARCH_ATTRIBUTE[state.kind];
    return state.chips.filter((c) => c.attribute !== search);
  }

  search(query: string): void {
    const chips = this.removeSearchChips(this.state);
    const next: ViewState = {
      ...this.state,
      selected: null,
      cursor: null,
      chips,
    };
    const q = query.trim();
    if (q === "") {
      this.navigate(next);
      return;
    }
    this.navigate(withChip(next, { attribute: SEARCH_ATTRIBUTE[this.state.kind], value: q }));
  }

  setSort(sort: string): void {
    this.navigate(withSort(this.state, sort === "id" ? null : sort));
  }

  retry(): void {
    void this.show(this.state);
  }
}
