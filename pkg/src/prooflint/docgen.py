"""Documentation database (JSON) and static HTML site generation."""

from __future__ import annotations

import html
import json
import re
import shutil
from pathlib import Path
from typing import Any, Optional

from .core import (
    Declaration, DeclarationKind, Environment, LibraryNote, Name,
    TACTIC_DOC_CATEGORIES, TacticDocEntry, pretty,
)
from .typeclass import build_instance_db

KIND_LABELS = {
    DeclarationKind.DEFINITION: "def",
    DeclarationKind.THEOREM: "theorem",
    DeclarationKind.AXIOM: "axiom",
    DeclarationKind.CONSTANT: "constant",
    DeclarationKind.INDUCTIVE: "inductive",
    DeclarationKind.STRUCTURE: "structure",
}

# attributes worth showing on an entry
ATTRIBUTE_ALLOWLIST = ("simp", "class", "instance", "nolint", "priority")


class NoDescription(Exception):
    def __init__(self, entry_name: str):
        super().__init__(f"tactic doc entry {entry_name!r} has no description "
                         "and no declaration to inherit one from")
        self.entry_name = entry_name


class MissingDeclaration(Exception):
    def __init__(self, name: Name):
        super().__init__(f"tactic doc entry references missing declaration {name}")
        self.name = name


def resolve_description(entry: TacticDocEntry, env: Environment) -> str:
    if entry.description:
        return entry.description
    source: Optional[Name] = None
    if entry.inherit_description_from is not None:
        source = entry.inherit_description_from
    elif len(entry.decl_names) == 1:
        source = entry.decl_names[0]
    if source is None:
        raise NoDescription(entry.entry_name)
    d = env.decl(source)
    if d is None:
        raise MissingDeclaration(source)
    if not d.doc_string:
        raise NoDescription(entry.entry_name)
    return d.doc_string


def note_slug(note_name: str) -> str:
    slug = note_name.lower().replace(" ", "-")
    return re.sub(r"[^a-z0-9-]", "", slug)


_NOTE_REF = re.compile(r"Note \[([^\]]+)\]")


def link_notes(text: str, notes: tuple[LibraryNote, ...],
               warnings: Optional[list[str]] = None) -> str:
    known = {n.note_name for n in notes}

    def repl(m: re.Match) -> str:
        name = m.group(1)
        if name in known:
            return f"[Note: {name}](#note-{note_slug(name)})"
        if warnings is not None:
            warnings.append(f"reference to undeclared note [{name}]")
        return m.group(0)

    return _NOTE_REF.sub(repl, text)


def sanitize_file(file: str) -> str:
    return re.sub(r"[^A-Za-z0-9_-]", "_", file)


def _members_of(env: Environment) -> dict[Name, list[Declaration]]:
    """Constructor/field declarations folded into their inductive/structure
    parent, identified by name extension and constant kind."""
    members: dict[Name, list[Declaration]] = {}
    for d in env.declarations:
        if d.kind is not DeclarationKind.CONSTANT or len(d.name.parts) < 2:
            continue
        parent = env.decl(Name(d.name.parts[:-1]))
        if parent is not None and parent.kind in (DeclarationKind.INDUCTIVE,
                                                  DeclarationKind.STRUCTURE):
            members.setdefault(parent.name, []).append(d)
    return members


def _equational_lemmas(env: Environment) -> dict[Name, list[Name]]:
    eqns: dict[Name, list[Name]] = {}
    for d in env.declarations:
        parts = d.name.parts
        if "equations" in parts[1:]:
            idx = parts[1:].index("equations") + 1
            parent = Name(parts[:idx])
            if env.contains(parent):
                eqns.setdefault(parent, []).append(d.name)
    return eqns


def build_doc_database(env: Environment,
                       warnings: Optional[list[str]] = None) -> dict:
    """The complete documentation record, shaped exactly like the emitted JSON."""
    db = build_instance_db(env)
    instances_by_class = {cls: [str(e.decl) for e in entries]
                          for cls, entries in db.items()}
    members = _members_of(env)
    member_names = {d.name for ds in members.values() for d in ds}
    eq_lemmas = _equational_lemmas(env)

    module_doc = dict(env.module_docs)
    modules: dict[str, list[dict]] = {}
    module_order: list[str] = []
    for d in env.declarations:
        if d.is_auto_generated or d.name in member_names:
            continue
        if d.file not in modules:
            modules[d.file] = []
            module_order.append(d.file)
        entry: dict[str, Any] = {
            "name": str(d.name),
            "kind": KIND_LABELS[d.kind],
            "type_compact": pretty(env, d.type_, expand_implicits=False),
            "type_full": pretty(env, d.type_, expand_implicits=True),
            "doc": (link_notes(d.doc_string, env.notes, warnings)
                    if d.doc_string is not None else None),
            "attrs": [a.name for a in d.attributes
                      if a.name in ATTRIBUTE_ALLOWLIST],
            "instances": (instances_by_class.get(d.name, [])
                          if d.has_attr("class") else None),
            "eq_lemmas": [str(n) for n in eq_lemmas.get(d.name, [])],
            "members": [{"name": str(m.name),
                         "type": pretty(env, m.type_, expand_implicits=False)}
                        for m in members.get(d.name, [])],
            "file": d.file,
            "line": d.line,
            "namespace": d.name.namespace,
        }
        modules[d.file].append(entry)

    tactic_docs = []
    for category in TACTIC_DOC_CATEGORIES:
        for t in env.tactic_docs:
            if t.category != category:
                continue
            tactic_docs.append({
                "name": t.entry_name,
                "category": t.category,
                "decl_names": [str(n) for n in t.decl_names],
                "tags": list(t.tags),
                "description": link_notes(resolve_description(t, env),
                                          env.notes, warnings),
            })

    notes = [{"name": n.note_name, "content": n.content,
              "file": n.file, "line": n.line} for n in env.notes]

    index = []
    for file in module_order:
        for entry in modules[file]:
            index.append({"name": entry["name"],
                          "href": f"module/{sanitize_file(file)}.html#{entry['name']}"})
    index.sort(key=lambda e: e["name"])

    return {
        "modules": [{"file": file, "doc": module_doc.get(file, ""),
                     "decls": modules[file]} for file in module_order],
        "tactic_docs": tactic_docs,
        "notes": notes,
        "index": index,
    }


def emit_json(db: dict) -> bytes:
    return (json.dumps(db, ensure_ascii=False, separators=(",", ":")) + "\n"
            ).encode("utf-8")


# ---------------------------------------------------------------------------
# HTML emission


_NOTE_LINK = re.compile(r"\[Note: ([^\]]+)\]\(#note-([a-z0-9-]+)\)")


def _doc_html(text: str) -> str:
    escaped = html.escape(text)
    return _NOTE_LINK.sub(
        lambda m: f'<a href="../notes.html#note-{m.group(2)}">Note [{m.group(1)}]</a>',
        escaped)


def _doc_html_local(text: str) -> str:
    escaped = html.escape(text)
    return _NOTE_LINK.sub(
        lambda m: f'<a href="notes.html#note-{m.group(2)}">Note [{m.group(1)}]</a>',
        escaped)


def _page(title: str, body: str, root: str = "") -> str:
    return f"""<!DOCTYPE html>
<html lang="en">
<head>
<meta charset="utf-8">
<title>{html.escape(title)}</title>
<link rel="stylesheet" href="{root}assets/style.css">
</head>
<body data-root="{root}">
<header>
<a href="{root}index.html">Library documentation</a>
<input id="search-box" type="search" placeholder="search declarations" autocomplete="off">
<ul id="search-results"></ul>
</header>
<main>
{body}
</main>
<script type="module" src="{root}assets/app.js"></script>
</body>
</html>
"""


def _decl_entry_html(entry: dict) -> str:
    parts = [f'<div class="decl decl-{entry["kind"]}" id="{html.escape(entry["name"])}">']
    parts.append(f'<span class="decl-kind">{entry["kind"]}</span> '
                 f'<span class="decl-name">{html.escape(entry["name"])}</span>')
    compact = html.escape(entry["type_compact"])
    full = html.escape(entry["type_full"])
    if compact != full:
        compact_markup = compact.replace(
            "{...}", '<button class="impl-toggle" title="expand implicit arguments">{...}</button>')
        parts.append(f'<div class="decl-type">'
                     f'<span class="type-compact">{compact_markup}</span>'
                     f'<span class="type-full" hidden>{full}</span>'
                     f'<button class="type-toggle">{{...}}</button></div>')
    else:
        parts.append(f'<div class="decl-type"><span class="type-compact">{compact}</span></div>')
    if entry["doc"]:
        parts.append(f'<div class="decl-doc">{_doc_html(entry["doc"])}</div>')
    if entry["members"]:
        items = "".join(f'<li><code>{html.escape(m["name"])} : '
                        f'{html.escape(m["type"])}</code></li>'
                        for m in entry["members"])
        parts.append(f'<ul class="decl-members">{items}</ul>')
    if entry["attrs"]:
        parts.append('<div class="decl-attrs">@[' +
                     ", ".join(html.escape(a) for a in entry["attrs"]) + ']</div>')
    if entry["instances"] is not None:
        items = "".join(f"<li><code>{html.escape(i)}</code></li>"
                        for i in entry["instances"])
        parts.append(f'<details class="instances"><summary>Instances '
                     f'({len(entry["instances"])})</summary><ul>{items}</ul></details>')
    if entry["eq_lemmas"]:
        items = "".join(f"<li><code>{html.escape(e)}</code></li>"
                        for e in entry["eq_lemmas"])
        parts.append(f'<details class="eq-lemmas"><summary>Equations</summary>'
                     f'<ul>{items}</ul></details>')
    parts.append(f'<div class="decl-source">source: '
                 f'{html.escape(entry["file"])}:{entry["line"]}</div>')
    parts.append("</div>")
    return "\n".join(parts)


class IoFailure(Exception):
    def __init__(self, path: str):
        super().__init__(f"cannot write {path}")
        self.path = path


def emit_html(db: dict, out_dir) -> None:
    """Write the static site for a documentation database."""
    out = Path(out_dir)
    try:
        (out / "module").mkdir(parents=True, exist_ok=True)
        (out / "tactics").mkdir(parents=True, exist_ok=True)
        (out / "assets").mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise IoFailure(str(out)) from e

    def write(rel: str, text: str) -> None:
        try:
            (out / rel).write_text(text, encoding="utf-8")
        except OSError as e:
            raise IoFailure(str(out / rel)) from e

    try:
        (out / "db.json").write_bytes(emit_json(db))
    except OSError as e:
        raise IoFailure(str(out / "db.json")) from e

    # module pages
    index_side = "".join(
        f'<li><a href="{e["href"]}">{html.escape(e["name"])}</a></li>'
        for e in db["index"])
    for module in db["modules"]:
        entries = "\n".join(_decl_entry_html(e) for e in module["decls"])
        doc = (f'<div class="module-doc">{_doc_html(module["doc"])}</div>'
               if module["doc"] else "")
        side = index_side.replace('href="module/', 'href="')
        body = (f'<h1>{html.escape(module["file"])}</h1>{doc}{entries}'
                f'<nav class="index-panel"><ul>{side}</ul></nav>')
        page = _page(module["file"], body, root="../")
        write(f'module/{sanitize_file(module["file"])}.html', page)

    # tactic category pages
    for category in TACTIC_DOC_CATEGORIES:
        entries = [t for t in db["tactic_docs"] if t["category"] == category]
        all_tags = sorted({tag for t in entries for tag in t["tags"]})
        filters = "".join(
            f'<label><input type="checkbox" class="tag-filter" value="{html.escape(tag)}">'
            f'{html.escape(tag)}</label>' for tag in all_tags)
        items = []
        for t in entries:
            tags = ";".join(t["tags"])
            items.append(
                f'<div class="tactic-entry" data-tags="{html.escape(tags)}">'
                f'<h2>{html.escape(t["name"])}</h2>'
                f'<div class="tactic-doc">{_doc_html(t["description"])}</div>'
                f'<div class="tactic-decls">{html.escape(", ".join(t["decl_names"]))}</div>'
                f"</div>")
        body = (f"<h1>{category}</h1>"
                f'<div class="tag-filters">{filters}</div>' + "\n".join(items))
        write(f"tactics/{category}.html", _page(category, body, root="../"))

    # notes page
    note_items = "\n".join(
        f'<div class="note" id="note-{note_slug(n["name"])}">'
        f'<h2>Note [{html.escape(n["name"])}]</h2>'
        f'<div>{html.escape(n["content"])}</div>'
        f'<div class="note-origin">{html.escape(n["file"])}:{n["line"]}</div></div>'
        for n in db["notes"])
    write("notes.html", _page("Library notes", f"<h1>Library notes</h1>{note_items}"))

    # index page
    modules_list = "".join(
        f'<li><a href="module/{sanitize_file(m["file"])}.html">'
        f'{html.escape(m["file"])}</a></li>' for m in db["modules"])
    tactic_links = "".join(
        f'<li><a href="tactics/{c}.html">{c}</a></li>' for c in TACTIC_DOC_CATEGORIES)
    body = (f"<h1>Library documentation</h1>"
            f"<h2>Modules</h2><ul>{modules_list}</ul>"
            f"<h2>Tactic documentation</h2><ul>{tactic_links}</ul>"
            f'<h2><a href="notes.html">Library notes</a></h2>'
            f'<nav class="index-panel"><ul>{index_side}</ul></nav>')
    write("index.html", _page("Library documentation", body))

    # static assets shipped with the package
    assets_src = Path(__file__).parent / "assets"
    for asset in sorted(assets_src.iterdir()):
        shutil.copyfile(asset, out / "assets" / asset.name)
