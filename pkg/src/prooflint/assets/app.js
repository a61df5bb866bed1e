// Client-side behavior for the generated documentation site: search over the
// embedded JSON database, tag filtering on tactic pages, and per-entry
// expansion toggles.  Pure logic is exported for testing; DOM wiring runs only
// when a document is present.
export function buildSearchIndex(db) {
    var _a, _b;
    const hrefs = new Map();
    for (const item of db.index) {
        hrefs.set(item.name, item.href);
    }
    const entries = [];
    for (const module of db.modules) {
        for (const decl of module.decls) {
            entries.push({
                name: decl.name,
                nameLower: decl.name.toLowerCase(),
                docLower: ((_a = decl.doc) !== null && _a !== void 0 ? _a : "").toLowerCase(),
                href: (_b = hrefs.get(decl.name)) !== null && _b !== void 0 ? _b : "",
            });
        }
    }
    return { entries };
}
export function search(index, query) {
    if (query === "") {
        return [];
    }
    const needle = query.toLowerCase();
    const nameHits = [];
    const docHits = [];
    for (const entry of index.entries) {
        const position = entry.nameLower.indexOf(needle);
        if (position >= 0) {
            nameHits.push({ entry, position });
        }
        else if (entry.docLower.includes(needle)) {
            docHits.push(entry);
        }
    }
    nameHits.sort((a, b) => a.position - b.position ||
        a.entry.name.length - b.entry.name.length ||
        (a.entry.name < b.entry.name ? -1 : a.entry.name > b.entry.name ? 1 : 0));
    docHits.sort((a, b) => (a.name < b.name ? -1 : a.name > b.name ? 1 : 0));
    return nameHits.map((hit) => hit.entry).concat(docHits);
}
export function filterByTags(entries, selected) {
    if (selected.length === 0) {
        return entries.slice();
    }
    const wanted = new Set(selected);
    return entries.filter((entry) => entry.tags.some((tag) => wanted.has(tag)));
}
export function freshExpansionState() {
    return { implicit_args: false, instances: false, eq_lemmas: false };
}
// Flips one target's expansion flag and returns the new value.  State is held
// per entry, so toggling one entry never affects another.
export function toggleExpansion(state, target) {
    state[target] = !state[target];
    return state[target];
}
function wireDeclToggles(doc) {
    for (const decl of Array.from(doc.querySelectorAll(".decl"))) {
        const state = freshExpansionState();
        const compact = decl.querySelector(".type-compact");
        const full = decl.querySelector(".type-full");
        const applyTypes = () => {
            if (compact && full) {
                compact.hidden = state.implicit_args;
                full.hidden = !state.implicit_args;
            }
        };
        for (const button of Array.from(decl.querySelectorAll(".type-toggle, .impl-toggle"))) {
            button.addEventListener("click", () => {
                toggleExpansion(state, "implicit_args");
                applyTypes();
            });
        }
    }
}
function wireTagFilters(doc) {
    const boxes = Array.from(doc.querySelectorAll(".tag-filter"));
    if (boxes.length === 0) {
        return;
    }
    const apply = () => {
        var _a;
        const selected = boxes
            .filter((box) => box.checked)
            .map((box) => box.value);
        for (const entry of Array.from(doc.querySelectorAll(".tactic-entry"))) {
            const raw = (_a = entry.getAttribute("data-tags")) !== null && _a !== void 0 ? _a : "";
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
function wireSearch(doc, index, root) {
    const box = doc.querySelector("#search-box");
    const results = doc.querySelector("#search-results");
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
async function boot(doc) {
    var _a;
    const root = (_a = doc.body.getAttribute("data-root")) !== null && _a !== void 0 ? _a : "";
    wireDeclToggles(doc);
    wireTagFilters(doc);
    try {
        const response = await fetch(root + "db.json");
        const db = (await response.json());
        wireSearch(doc, buildSearchIndex(db), root);
    }
    catch (_b) {
        // Search stays inert when db.json cannot be loaded (e.g. file:// fetch
        // restrictions); filtering and toggles still work.
    }
}
if (typeof document !== "undefined") {
    if (document.readyState === "loading") {
        document.addEventListener("DOMContentLoaded", () => {
            void boot(document);
        });
    }
    else {
        void boot(document);
    }
}
