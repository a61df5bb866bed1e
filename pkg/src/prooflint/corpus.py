"""Reader and writer for the ``.pcorpus`` declaration-corpus format.

A corpus is newline-delimited JSON, one entry per line.  Terms are encoded as
nested arrays, S-expression style:

    ["var", n]  ["const", "name.parts"]  ["app", f, a]
    ["lam", "x", "e|i|si|ii", dom, body]  ["pi", ...]
    ["sort", 0]  ["sort", ["succ", l]]  ["sort", ["param", "u"]]

Entry kinds are distinguished by their key signature; unknown keys are
rejected so exporter drift fails fast.
"""

from __future__ import annotations

import io
import json
from typing import Any, BinaryIO, Optional, Union

from .core import (
    App, AttributeInstance, BinderInfo, Const, Declaration, DeclarationKind,
    Environment, Fixity, Lam, Level, LibraryNote, Name, Notation, Param, Pi,
    Sort, Succ, TacticDocEntry, Term, Var, Zero, constants_of, level_as_nat,
    TACTIC_DOC_CATEGORIES,
)


class CorpusError(Exception):
    pass


class MalformedLine(CorpusError):
    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no
        self.message = message


class DuplicateName(CorpusError):
    def __init__(self, name: Name):
        super().__init__(f"duplicate declaration name {name}")
        self.name = name


class UnresolvedConstant(CorpusError):
    def __init__(self, name: Name, first_use_line: int):
        super().__init__(f"unresolved constant {name} (first used on line {first_use_line})")
        self.name = name
        self.first_use_line = first_use_line


# ---------------------------------------------------------------------------
# Term encoding

_BINDER_CODES = {b.value: b for b in BinderInfo}
_KIND_CODES = {k.value: k for k in DeclarationKind}
_FIXITY_CODES = {f.value: f for f in Fixity}


def level_from_json(data: Any) -> Level:
    if isinstance(data, int) and not isinstance(data, bool) and data >= 0:
        lvl: Level = Zero()
        for _ in range(data):
            lvl = Succ(lvl)
        return lvl
    if isinstance(data, list) and len(data) == 2:
        tag, payload = data
        if tag == "succ":
            return Succ(level_from_json(payload))
        if tag == "param" and isinstance(payload, str) and payload:
            return Param(payload)
    raise ValueError(f"bad level encoding {data!r}")


def level_to_json(lvl: Level) -> Any:
    n = level_as_nat(lvl)
    if n is not None:
        return n
    if isinstance(lvl, Param):
        return ["param", lvl.name]
    assert isinstance(lvl, Succ)
    return ["succ", level_to_json(lvl.of)]


def term_from_json(data: Any, depth: int = 0) -> Term:
    if not isinstance(data, list) or not data:
        raise ValueError(f"bad term encoding {data!r}")
    tag = data[0]
    if tag == "var" and len(data) == 2:
        idx = data[1]
        if not isinstance(idx, int) or isinstance(idx, bool) or idx < 0:
            raise ValueError(f"bad var index {idx!r}")
        if idx >= depth:
            raise ValueError(f"var index {idx} escapes its {depth} enclosing binders")
        return Var(idx)
    if tag == "const" and len(data) == 2 and isinstance(data[1], str):
        return Const(Name.of(data[1]))
    if tag == "app" and len(data) == 3:
        return App(term_from_json(data[1], depth), term_from_json(data[2], depth))
    if tag in ("lam", "pi") and len(data) == 5:
        _, name, code, dom, body = data
        if not isinstance(name, str) or code not in _BINDER_CODES:
            raise ValueError(f"bad binder encoding {data!r}")
        cls = Lam if tag == "lam" else Pi
        return cls(name, _BINDER_CODES[code],
                   term_from_json(dom, depth), term_from_json(body, depth + 1))
    if tag == "sort" and len(data) == 2:
        return Sort(level_from_json(data[1]))
    raise ValueError(f"bad term encoding {data!r}")


def term_to_json(term: Term) -> Any:
    if isinstance(term, Var):
        return ["var", term.index]
    if isinstance(term, Const):
        return ["const", str(term.name)]
    if isinstance(term, App):
        return ["app", term_to_json(term.fn), term_to_json(term.arg)]
    if isinstance(term, (Lam, Pi)):
        tag = "lam" if isinstance(term, Lam) else "pi"
        return [tag, term.binder_name, term.info.value,
                term_to_json(term.dom), term_to_json(term.body)]
    if isinstance(term, Sort):
        return ["sort", level_to_json(term.level)]
    raise ValueError(f"term {term!r} is not serializable")


# ---------------------------------------------------------------------------
# Entry decoding


def _check_keys(obj: dict, required: set, optional: set, line_no: int) -> None:
    keys = set(obj)
    missing = required - keys
    if missing:
        raise MalformedLine(line_no, f"missing keys {sorted(missing)}")
    unknown = keys - required - optional
    if unknown:
        raise MalformedLine(line_no, f"unknown keys {sorted(unknown)}")


def _parse_attrs(data: Any, line_no: int) -> tuple[AttributeInstance, ...]:
    if not isinstance(data, list):
        raise MalformedLine(line_no, "attrs must be a list")
    attrs = []
    for item in data:
        if not isinstance(item, dict):
            raise MalformedLine(line_no, "attr entries must be objects")
        _check_keys(item, {"name"}, {"priority", "args"}, line_no)
        prio = item.get("priority")
        if prio is not None and (not isinstance(prio, int) or prio <= 0):
            raise MalformedLine(line_no, f"bad attribute priority {prio!r}")
        args = item.get("args", [])
        if not isinstance(args, list) or not all(isinstance(a, str) for a in args):
            raise MalformedLine(line_no, "attr args must be strings")
        attrs.append(AttributeInstance(item["name"], prio, tuple(args)))
    return tuple(attrs)


def _parse_decl(obj: dict, line_no: int) -> Declaration:
    _check_keys(obj, {"name", "kind", "type", "file", "line"},
                {"value", "attrs", "doc", "auto"}, line_no)
    if obj["kind"] not in _KIND_CODES:
        raise MalformedLine(line_no, f"unknown declaration kind {obj['kind']!r}")
    kind = _KIND_CODES[obj["kind"]]
    doc = obj.get("doc")
    if doc is not None and not isinstance(doc, str):
        raise MalformedLine(line_no, "doc must be a string")
    auto = obj.get("auto", False)
    if not isinstance(auto, bool):
        raise MalformedLine(line_no, "auto must be a boolean")
    if not isinstance(obj["file"], str) or not isinstance(obj["line"], int):
        raise MalformedLine(line_no, "bad source location")
    try:
        name = Name.of(obj["name"])
        type_ = term_from_json(obj["type"])
        value = term_from_json(obj["value"]) if "value" in obj else None
        attrs = _parse_attrs(obj.get("attrs", []), line_no)
        return Declaration(name, kind, type_, value, attrs, doc, auto,
                           obj["file"], obj["line"])
    except MalformedLine:
        raise
    except ValueError as e:
        raise MalformedLine(line_no, str(e)) from e


def _parse_notation(obj: dict, line_no: int) -> Notation:
    _check_keys(obj, {"symbol", "const", "fixity", "precedence"}, set(), line_no)
    if obj["fixity"] not in _FIXITY_CODES:
        raise MalformedLine(line_no, f"unknown fixity {obj['fixity']!r}")
    if not isinstance(obj["precedence"], int) or obj["precedence"] < 0:
        raise MalformedLine(line_no, "precedence must be a natural")
    try:
        return Notation(obj["symbol"], Name.of(obj["const"]),
                        _FIXITY_CODES[obj["fixity"]], obj["precedence"])
    except ValueError as e:
        raise MalformedLine(line_no, str(e)) from e


def _parse_tactic_doc(obj: dict, line_no: int) -> TacticDocEntry:
    _check_keys(obj, {"entry_name", "category", "decl_names"},
                {"tags", "description", "inherit_description_from"}, line_no)
    if obj["category"] not in TACTIC_DOC_CATEGORIES:
        raise MalformedLine(line_no, f"unknown doc category {obj['category']!r}")
    try:
        decl_names = tuple(Name.of(n) for n in obj["decl_names"])
        inherit = obj.get("inherit_description_from")
        return TacticDocEntry(
            obj["entry_name"], obj["category"], decl_names,
            tuple(obj.get("tags", [])), obj.get("description", ""),
            Name.of(inherit) if inherit is not None else None)
    except (TypeError, ValueError) as e:
        raise MalformedLine(line_no, str(e)) from e


def _parse_note(obj: dict, line_no: int) -> LibraryNote:
    _check_keys(obj, {"note_name", "content", "file", "line"}, set(), line_no)
    if not isinstance(obj["content"], str) or not isinstance(obj["note_name"], str):
        raise MalformedLine(line_no, "note fields must be strings")
    return LibraryNote(obj["note_name"], obj["content"], obj["file"], obj["line"])


def parse_corpus(stream: Union[bytes, BinaryIO]) -> Environment:
    """Parse a corpus byte stream into an immutable Environment."""
    if isinstance(stream, bytes):
        stream = io.BytesIO(stream)
    decls: list[Declaration] = []
    notations: list[Notation] = []
    module_docs: list[tuple[str, str]] = []
    tactic_docs: list[TacticDocEntry] = []
    notes: list[LibraryNote] = []
    seen: set[Name] = set()
    const_uses: dict[Name, int] = {}

    for line_no, raw in enumerate(stream, start=1):
        text = raw.decode("utf-8").strip()
        if not text:
            continue
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as e:
            raise MalformedLine(line_no, f"invalid JSON: {e}") from e
        if not isinstance(obj, dict):
            raise MalformedLine(line_no, "entry must be a JSON object")
        if "kind" in obj:
            d = _parse_decl(obj, line_no)
            if d.name in seen:
                raise DuplicateName(d.name)
            seen.add(d.name)
            for t in (d.type_, d.value):
                if t is not None:
                    for c in constants_of(t):
                        const_uses.setdefault(c, line_no)
            decls.append(d)
        elif "symbol" in obj:
            notations.append(_parse_notation(obj, line_no))
        elif "text" in obj:
            _check_keys(obj, {"file", "text"}, set(), line_no)
            module_docs.append((obj["file"], obj["text"]))
        elif "entry_name" in obj:
            tactic_docs.append(_parse_tactic_doc(obj, line_no))
        elif "note_name" in obj:
            notes.append(_parse_note(obj, line_no))
        else:
            raise MalformedLine(line_no, "unrecognized entry shape")

    for name, first_line in sorted(const_uses.items(), key=lambda kv: kv[1]):
        if name not in seen:
            raise UnresolvedConstant(name, first_line)

    return Environment(tuple(decls), tuple(notations), tuple(module_docs),
                       tuple(tactic_docs), tuple(notes))


# ---------------------------------------------------------------------------
# Serialization


def _dump(obj: dict) -> str:
    return json.dumps(obj, ensure_ascii=False, separators=(",", ":"))


def _decl_to_json(d: Declaration) -> dict:
    obj: dict = {"name": str(d.name), "kind": d.kind.value,
                 "type": term_to_json(d.type_)}
    if d.value is not None:
        obj["value"] = term_to_json(d.value)
    if d.attributes:
        attrs = []
        for a in d.attributes:
            item: dict = {"name": a.name}
            if a.priority is not None:
                item["priority"] = a.priority
            if a.args:
                item["args"] = list(a.args)
            attrs.append(item)
        obj["attrs"] = attrs
    if d.doc_string is not None:
        obj["doc"] = d.doc_string
    if d.is_auto_generated:
        obj["auto"] = True
    obj["file"] = d.file
    obj["line"] = d.line
    return obj


def serialize_corpus(env: Environment) -> bytes:
    """Inverse of parse_corpus; output is byte-stable for a given environment."""
    lines: list[str] = []
    for d in env.declarations:
        lines.append(_dump(_decl_to_json(d)))
    for n in env.notations:
        lines.append(_dump({"symbol": n.symbol, "const": str(n.const),
                            "fixity": n.fixity.value, "precedence": n.precedence}))
    for file, text in env.module_docs:
        lines.append(_dump({"file": file, "text": text}))
    for t in env.tactic_docs:
        obj: dict = {"entry_name": t.entry_name, "category": t.category,
                     "decl_names": [str(n) for n in t.decl_names]}
        if t.tags:
            obj["tags"] = list(t.tags)
        if t.description:
            obj["description"] = t.description
        if t.inherit_description_from is not None:
            obj["inherit_description_from"] = str(t.inherit_description_from)
        lines.append(_dump(obj))
    for note in env.notes:
        lines.append(_dump({"note_name": note.note_name, "content": note.content,
                            "file": note.file, "line": note.line}))
    return ("\n".join(lines) + ("\n" if lines else "")).encode("utf-8")


def load_corpus(path: str) -> Environment:
    with open(path, "rb") as fh:
        return parse_corpus(fh)
