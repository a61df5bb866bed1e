// Client-side behavior for the generated documentation site: search over the
// embedded JSON database, tag filtering on tactic pages, and per-entry
// expansion toggles.  Pure logic is exported for testing; DOM wiring runs only
// when a document is present.

export interface DocDecl {
  name: string;
  kind: string;
  type_compact: string;
  type_full: string;
  doc: string | null;
  attrs: string[];
  instances: string[];
  eq_lemmas: string[];
  members: string[];
  file: string;
  line: number;
  namespace: string;
}

export interface DocModule {
  file: string;
  doc: string | null;
  decls: DocDecl[];
}

export interface TacticDoc {
  name: string;
  category: string;
  description: string;
  tags: string[];
}

export interface DocDatabase {
  modules: DocModule[];
  tactic_docs: TacticDoc[];
  notes: { name: string; content: string }[];
  index: { name: string; href: string }[];
}

export interface IndexEntry {
  name: string;
  nameLower: string;
  docLower: string;
  href: string;
}

export interface SearchIndex {
  entries: IndexEntry[];
}

export function buildSearchIndex(db: DocDatabase): SearchIndex {
  const hrefs = new Map<string, string>();
  for (const item of db.index) {
    hrefs.set(item.name, item.href);
  }
  const entries: IndexEntry[] = [];
  for (const module of db.modules) {
    for (const decl of module.decls) {
      entries.push({
        name: decl.name,
        nameLower: decl.name.toLowerCase(),
        docLower: (decl.doc ?? "").toLowerCase(),
        href: hrefs.get(decl.name) ?? "",
      });
    }
  }
  return { entries };
}

export function search(index: SearchIndex, query: string): IndexEntry[] {
  if (query === "") {
    return [];
  }
  const needle = query.toLowerCase();
  const nameHits: { entry: IndexEntry; position: number }[] = [];
  const docHits: IndexEntry[] = [];
  for (const entry of index.entries) {
    const position = entry.nameLower.indexOf(needle);
    if (position >= 0) {
      nameHits.push({ entry, position });
    } else if (entry.docLower.includes(needle)) {
      docHits.push(entry);
    }
  }
  nameHits.sort((a, b) =>
    a.position - b.position ||
    a.entry.name.length - b.entry.name.length ||
    (a.entry.name < b.entry.name ? -1 : a.entry.name > b.entry.name ? 1 : 0));
  docHits.sort((a, b) => (a.name < b.name ? -1 : a.name > b.name ? 1 : 0));
  return nameHits.map((hit) => hit.entry).concat(docHits);
}

export interface Tagged {
  tags: string[];
}

export function filterByTags<T extends Tagged>(
  entries: T[],
  selected: string[],
): T[] {
  if (selected.length === 0) {
    return entries.slice();
  }
  const wanted = new Set(selected);
  return entries.filter((entry) => entry.tags.some((tag) => wanted.has(tag)));
}

export type ExpansionTarget = "implicit_args" | "instances" | "eq_lemmas";

export interface ExpansionState {
  implicit_args: boolean;
  instances: boolean;
  eq_lemmas: boolean;
}

export function freshExpansionState(): ExpansionState {
  return { implicit_args: false, instances: false, eq_lemmas: false };
}

// Flips one target's expansion flag and returns the new value.  State is held
// per entry, so toggling one entry never affects another.
export function toggleExpansion(
  state: ExpansionState,
  target: ExpansionTarget,
): boolean {
  state[target] = !state[target];
  return state[target];
}

function wireDeclToggles(doc: Document): void {
  for (const decl of Array.from(doc.querySelectorAll(".decl"))) {
    const state = freshExpansionState();
    const compact = decl.querySelector<HTMLElement>(".type-compact");
    const full = decl.querySelector<HTMLElement>(".type-full");
    const applyTypes = () => {
      if (compact && full) {
        compact.hidden = state.implicit_args;
        full.hidden = !state.implicit_args;
      }
    };
    for (const button of Array.from(
        decl.querySelectorAll(".type-toggle, .impl-toggle"))) {
      button.addEventListener("click", () => {
        toggleExpansion(state, "implicit_args");
        applyTypes();
      });
    }
  }
}

function wireTagFilters(doc: Document): void {
  const boxes = Array.from(
    doc.querySelectorAll<HTMLInputElement>(".tag-filter"));
  if (boxes.length === 0) {
    return;
  }
  const apply = () => {
    const selected = boxes
      .filter((box) => box.checked)
      .map((box) => box.value);
    for (const entry of Array.from(
        doc.querySelectorAll<HTMLElement>(".tactic-entry"))) {
      const raw = entry.getAttribute("data-tags") ?? "";
      const tags = raw === "" ? [] : raw.split(";");
      const visible = filterByTags([{ tags }], selected).length > 0;
      entry.hidden = !visible;
    }
  };
  for (const box of boxes) {
    box.addEventListener("change", apply);
  }
  apply();
}

function wireSearch(doc: Document, index: SearchIndex, root: string): void {
  const box = doc.querySelector<HTMLInputElement>("#search-box");
  const results = doc.querySelector<HTMLElement>("#search-results");
  if (!box || !results) {
    return;
  }
  box.addEventListener("input", () => {
    const hits = search(index, box.value).slice(0, 50);
    results.textContent = "";
    for (const hit of hits) {
      const item = doc.createElement("li");
      const link = doc.createElement("a");
      link.href = root + hit.href;
      link.textContent = hit.name;
      item.appendChild(link);
      results.appendChild(item);
    }
    results.hidden = hits.length === 0;
  });
}

async function boot(doc: Document): Promise<void> {
  const root = doc.body.getAttribute("data-root") ?? "";
  wireDeclToggles(doc);
  wireTagFilters(doc);
  try {
    const response = await fetch(root + "db.json");
    const db = (await response.json()) as DocDatabase;
    wireSearch(doc, buildSearchIndex(db), root);
  } catch {
    // Search stays inert when db.json cannot be loaded (e.g. file:// fetch
    // restrictions); filtering and toggles still work.
  }
}

if (typeof document !== "undefined") {
  if (document.readyState === "loading") {
    document.addEventListener("DOMContentLoaded", () => {
      void boot(document);
    });
  } else {
    void boot(document);
  }
}
