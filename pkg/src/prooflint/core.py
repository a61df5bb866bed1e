"""Term language, declarations, and environment shared by the linters and doc generator.

Terms use de Bruijn indices for bound variables; binder names are kept only
for printing.  Everything here is an immutable value, so environments can be
shared freely between worker threads.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Iterator, Optional, Union


# ---------------------------------------------------------------------------
# Names


@functools.total_ordering
@dataclass(frozen=True)
class Name:
    """Hierarchical dot-separated name, e.g. ``list.reverse``."""

    parts: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.parts:
            raise ValueError("name must have at least one component")
        for p in self.parts:
            if not p or "." in p:
                raise ValueError(f"bad name component {p!r}")

    @staticmethod
    def of(text: str) -> "Name":
        return Name(tuple(text.split(".")))

    def __str__(self) -> str:
        return ".".join(self.parts)

    def __lt__(self, other: "Name") -> bool:
        return self.parts < other.parts

    @property
    def namespace(self) -> str:
        return ".".join(self.parts[:-1])

    @property
    def last(self) -> str:
        return self.parts[-1]

    def extend(self, component: str) -> "Name":
        return Name(self.parts + (component,))


# ---------------------------------------------------------------------------
# Universe levels (just enough to tell Prop from Type)


class Level:
    pass


@dataclass(frozen=True)
class Zero(Level):
    pass


@dataclass(frozen=True)
class Succ(Level):
    of: Level


@dataclass(frozen=True)
class Param(Level):
    name: str


LEVEL_ZERO = Zero()
LEVEL_ONE = Succ(LEVEL_ZERO)


def level_of_nat(n: int) -> Level:
    lvl: Level = LEVEL_ZERO
    for _ in range(n):
        lvl = Succ(lvl)
    return lvl


def level_as_nat(lvl: Level) -> Optional[int]:
    """The natural a Succ-chain over Zero counts, or None if a Param occurs."""
    n = 0
    while isinstance(lvl, Succ):
        n += 1
        lvl = lvl.of
    return n if isinstance(lvl, Zero) else None


def level_key(lvl: Level) -> tuple:
    if isinstance(lvl, Zero):
        return (0,)
    if isinstance(lvl, Succ):
        return (1, level_key(lvl.of))
    assert isinstance(lvl, Param)
    return (2, lvl.name)


# ---------------------------------------------------------------------------
# Terms


class BinderInfo(Enum):
    EXPLICIT = "e"
    IMPLICIT = "i"
    STRICT_IMPLICIT = "si"
    INSTANCE_IMPLICIT = "ii"


class Term:
    pass


@dataclass(frozen=True)
class Var(Term):
    index: int


@dataclass(frozen=True)
class Const(Term):
    name: Name


@dataclass(frozen=True)
class App(Term):
    fn: Term
    arg: Term


@dataclass(frozen=True)
class Lam(Term):
    binder_name: str
    info: BinderInfo
    dom: Term
    body: Term


@dataclass(frozen=True)
class Pi(Term):
    binder_name: str
    info: BinderInfo
    dom: Term
    body: Term


@dataclass(frozen=True)
class Sort(Term):
    level: Level


@dataclass(frozen=True)
class Meta(Term):
    """Metavariable; used by the type-class engine only, never serialized."""

    id: int


@dataclass(frozen=True)
class PatternVar(Term):
    """Pattern variable of a compiled simp lemma; never serialized."""

    id: int


def const(text: str) -> Const:
    return Const(Name.of(text))


def app(fn: Term, *args: Term) -> Term:
    for a in args:
        fn = App(fn, a)
    return fn


PROP = Sort(LEVEL_ZERO)
TYPE = Sort(LEVEL_ONE)


# ---------------------------------------------------------------------------
# Basic term algorithms


def lift(term: Term, amount: int, cutoff: int = 0) -> Term:
    """Shift free variables >= cutoff by amount."""
    if amount == 0:
        return term
    if isinstance(term, Var):
        return Var(term.index + amount) if term.index >= cutoff else term
    if isinstance(term, App):
        return App(lift(term.fn, amount, cutoff), lift(term.arg, amount, cutoff))
    if isinstance(term, (Lam, Pi)):
        cls = type(term)
        return cls(term.binder_name, term.info,
                   lift(term.dom, amount, cutoff),
                   lift(term.body, amount, cutoff + 1))
    return term


def instantiate(body: Term, arg: Term) -> Term:
    """Open a binder body: substitute index 0 by arg, shifting the rest down."""

    def go(t: Term, depth: int) -> Term:
        if isinstance(t, Var):
            if t.index == depth:
                return lift(arg, depth)
            if t.index > depth:
                return Var(t.index - 1)
            return t
        if isinstance(t, App):
            return App(go(t.fn, depth), go(t.arg, depth))
        if isinstance(t, (Lam, Pi)):
            cls = type(t)
            return cls(t.binder_name, t.info, go(t.dom, depth), go(t.body, depth + 1))
        return t

    return go(body, 0)


def occurs(term: Term, index: int) -> bool:
    """Does Var(index), adjusted under binders, occur free in term?"""
    if isinstance(term, Var):
        return term.index == index
    if isinstance(term, App):
        return occurs(term.fn, index) or occurs(term.arg, index)
    if isinstance(term, (Lam, Pi)):
        return occurs(term.dom, index) or occurs(term.body, index + 1)
    return False


def max_free_var(term: Term) -> int:
    """Largest free de Bruijn index in term, or -1 if closed."""
    if isinstance(term, Var):
        return term.index
    if isinstance(term, App):
        return max(max_free_var(term.fn), max_free_var(term.arg))
    if isinstance(term, (Lam, Pi)):
        return max(max_free_var(term.dom), max_free_var(term.body) - 1)
    return -1


def is_closed(term: Term) -> bool:
    return max_free_var(term) < 0


Binder = tuple[str, BinderInfo, Term]


def strip_binders(type_: Term) -> tuple[list[Binder], Term]:
    """Split a Pi-telescope into its binders and conclusion."""
    binders: list[Binder] = []
    t = type_
    while isinstance(t, Pi):
        binders.append((t.binder_name, t.info, t.dom))
        t = t.body
    return binders, t


def fold_binders(binders: list[Binder], conclusion: Term) -> Term:
    t = conclusion
    for name, info, dom in reversed(binders):
        t = Pi(name, info, dom, t)
    return t


def strip_lambdas(value: Term) -> tuple[list[Binder], Term]:
    binders: list[Binder] = []
    t = value
    while isinstance(t, Lam):
        binders.append((t.binder_name, t.info, t.dom))
        t = t.body
    return binders, t


class HeadKind(Enum):
    CONST = "const"
    VAR = "var"
    PATTERN_VAR = "pattern_var"
    OTHER = "other"


@dataclass(frozen=True)
class Head:
    kind: HeadKind
    name: Optional[Name] = None
    index: Optional[int] = None


def spine(term: Term) -> tuple[Term, list[Term]]:
    args: list[Term] = []
    while isinstance(term, App):
        args.append(term.arg)
        term = term.fn
    args.reverse()
    return term, args


def head_const(term: Term) -> Head:
    head, _ = spine(term)
    if isinstance(head, Const):
        return Head(HeadKind.CONST, name=head.name)
    if isinstance(head, Var):
        return Head(HeadKind.VAR, index=head.index)
    if isinstance(head, PatternVar):
        return Head(HeadKind.PATTERN_VAR, index=head.id)
    return Head(HeadKind.OTHER)


def constants_of(term: Term) -> Iterator[Name]:
    if isinstance(term, Const):
        yield term.name
    elif isinstance(term, App):
        yield from constants_of(term.fn)
        yield from constants_of(term.arg)
    elif isinstance(term, (Lam, Pi)):
        yield from constants_of(term.dom)
        yield from constants_of(term.body)


def node_count(term: Term) -> int:
    if isinstance(term, App):
        return 1 + node_count(term.fn) + node_count(term.arg)
    if isinstance(term, (Lam, Pi)):
        return 1 + node_count(term.dom) + node_count(term.body)
    return 1


def map_free_vars(term: Term, f: Callable[[int, int], Term]) -> Term:
    """Replace each free Var with f(index_adjusted_to_top, depth)."""

    def go(t: Term, depth: int) -> Term:
        if isinstance(t, Var):
            if t.index >= depth:
                return f(t.index - depth, depth)
            return t
        if isinstance(t, App):
            return App(go(t.fn, depth), go(t.arg, depth))
        if isinstance(t, (Lam, Pi)):
            cls = type(t)
            return cls(t.binder_name, t.info, go(t.dom, depth), go(t.body, depth + 1))
        return t

    return go(term, 0)


# ---------------------------------------------------------------------------
# Declarations and the environment


class DeclarationKind(Enum):
    DEFINITION = "definition"
    THEOREM = "theorem"
    AXIOM = "axiom"
    CONSTANT = "constant"
    INDUCTIVE = "inductive"
    STRUCTURE = "structure"


@dataclass(frozen=True)
class AttributeInstance:
    name: str
    priority: Optional[int] = None
    args: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if self.priority is not None and self.priority <= 0:
            raise ValueError("attribute priority must be positive")


@dataclass(frozen=True)
class Declaration:
    name: Name
    kind: DeclarationKind
    type_: Term
    value: Optional[Term]
    attributes: tuple[AttributeInstance, ...]
    doc_string: Optional[str]
    is_auto_generated: bool
    file: str
    line: int

    def __post_init__(self) -> None:
        names = [a.name for a in self.attributes]
        if len(names) != len(set(names)):
            raise ValueError(f"duplicate attribute on {self.name}")

    def attr(self, name: str) -> Optional[AttributeInstance]:
        for a in self.attributes:
            if a.name == name:
                return a
        return None

    def has_attr(self, name: str) -> bool:
        return self.attr(name) is not None


class Fixity(Enum):
    INFIXL = "infixl"
    INFIXR = "infixr"
    PREFIX = "prefix"
    POSTFIX = "postfix"


@dataclass(frozen=True)
class Notation:
    symbol: str
    const: Name
    fixity: Fixity
    precedence: int


@dataclass(frozen=True)
class TacticDocEntry:
    entry_name: str
    category: str  # tactic | command | hole_command | attribute
    decl_names: tuple[Name, ...]
    tags: tuple[str, ...] = ()
    description: str = ""
    inherit_description_from: Optional[Name] = None


TACTIC_DOC_CATEGORIES = ("tactic", "command", "hole_command", "attribute")


@dataclass(frozen=True)
class LibraryNote:
    note_name: str
    content: str
    file: str
    line: int


@dataclass(frozen=True)
class Environment:
    declarations: tuple[Declaration, ...] = ()
    notations: tuple[Notation, ...] = ()
    module_docs: tuple[tuple[str, str], ...] = ()
    tactic_docs: tuple[TacticDocEntry, ...] = ()
    notes: tuple[LibraryNote, ...] = ()
    by_name: dict = field(default_factory=dict, compare=False, repr=False)
    notation_by_const: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self) -> None:
        by_name = {}
        for d in self.declarations:
            if d.name in by_name:
                raise ValueError(f"duplicate declaration {d.name}")
            by_name[d.name] = d
        # later notation entries override earlier ones
        notation_by_const = {}
        for n in self.notations:
            notation_by_const[n.const] = n
        object.__setattr__(self, "by_name", by_name)
        object.__setattr__(self, "notation_by_const", notation_by_const)

    def decl(self, name: Union[Name, str]) -> Optional[Declaration]:
        if isinstance(name, str):
            name = Name.of(name)
        return self.by_name.get(name)

    def contains(self, name: Union[Name, str]) -> bool:
        return self.decl(name) is not None

    def notation_for(self, name: Name) -> Optional[Notation]:
        return self.notation_by_const.get(name)

    def classes(self) -> set[Name]:
        return {d.name for d in self.declarations if d.has_attr("class")}

    def note(self, note_name: str) -> Optional[LibraryNote]:
        for n in self.notes:
            if n.note_name == note_name:
                return n
        return None


# ---------------------------------------------------------------------------
# Result sorts


class ResultSort(Enum):
    PROP = "Prop"
    TYPE = "Type"
    UNKNOWN = "Unknown"


def result_sort(env: Environment, type_: Term, depth: int = 100) -> ResultSort:
    """Sort of a declaration's type: proof (Prop) or data (Type).

    Strips Pi binders and chases the conclusion's head constant through its
    declared type; no reduction is performed, so Unknown is a possible answer.
    """
    if depth <= 0:
        return ResultSort.UNKNOWN
    _, concl = strip_binders(type_)
    if isinstance(concl, Sort):
        if isinstance(concl.level, Zero):
            return ResultSort.PROP
        if isinstance(concl.level, Succ):
            return ResultSort.TYPE
        return ResultSort.UNKNOWN
    head = head_const(concl)
    if head.kind is HeadKind.CONST:
        d = env.decl(head.name)
        if d is None:
            return ResultSort.UNKNOWN
        return result_sort(env, d.type_, depth - 1)
    return ResultSort.UNKNOWN


def is_type_former(type_: Term) -> bool:
    """Is the conclusion of this Pi-telescope literally a non-Prop Sort?"""
    _, concl = strip_binders(type_)
    return isinstance(concl, Sort) and not isinstance(concl.level, Zero)


# ---------------------------------------------------------------------------
# Pretty printing

_PREC_ARROW = 25
_PREC_APP = 1024
_PREC_MAX = 2048

_HIDDEN_INFOS = (BinderInfo.IMPLICIT, BinderInfo.STRICT_IMPLICIT,
                 BinderInfo.INSTANCE_IMPLICIT)

_BINDER_BRACKETS = {
    BinderInfo.EXPLICIT: ("(", ")"),
    BinderInfo.IMPLICIT: ("{", "}"),
    BinderInfo.STRICT_IMPLICIT: ("{{", "}}"),
    BinderInfo.INSTANCE_IMPLICIT: ("[", "]"),
}


def _level_str(lvl: Level) -> str:
    n = level_as_nat(lvl)
    if n == 0:
        return "Prop"
    if n == 1:
        return "Type"
    if n is not None:
        return f"Type {n - 1}"
    if isinstance(lvl, Param):
        return f"Sort {lvl.name}"
    # Succ over a Param
    assert isinstance(lvl, Succ)
    return f"Sort ({_level_str_raw(lvl)})"


def _level_str_raw(lvl: Level) -> str:
    if isinstance(lvl, Zero):
        return "0"
    if isinstance(lvl, Succ):
        return f"{_level_str_raw(lvl.of)}+1"
    assert isinstance(lvl, Param)
    return lvl.name


def _fresh_name(base: str, in_scope: list[str]) -> str:
    if base not in in_scope:
        return base
    i = 1
    while f"{base}_{i}" in in_scope:
        i += 1
    return f"{base}_{i}"


def _binder_infos_for(env: Environment, name: Name, count: int) -> list[BinderInfo]:
    d = env.decl(name)
    if d is None:
        return [BinderInfo.EXPLICIT] * count
    binders, _ = strip_binders(d.type_)
    infos = [b[1] for b in binders[:count]]
    infos += [BinderInfo.EXPLICIT] * (count - len(infos))
    return infos


def pretty(env: Environment, term: Term, expand_implicits: bool = False) -> str:
    """Single-line rendering of a term using the environment's notations."""

    def paren(s: str, prec: int, ctx: int) -> str:
        return f"({s})" if prec < ctx else s

    def go(t: Term, scope: list[str], ctx: int) -> str:
        if isinstance(t, Var):
            if t.index < len(scope):
                return scope[-(t.index + 1)]
            return f"#{t.index}"
        if isinstance(t, Meta):
            return f"?m{t.id}"
        if isinstance(t, PatternVar):
            return f"?x{t.id}"
        if isinstance(t, Sort):
            s = _level_str(t.level)
            return paren(s, _PREC_APP if " " not in s else _PREC_APP - 1, ctx)
        if isinstance(t, Const):
            notn = env.notation_for(t.name)
            if notn is not None:
                d = env.decl(t.name)
                if d is not None and not isinstance(d.type_, Pi):
                    return notn.symbol
            return str(t.name)
        if isinstance(t, App):
            return go_app(t, scope, ctx)
        if isinstance(t, Lam):
            return go_binder(t, scope, ctx, lam=True)
        assert isinstance(t, Pi)
        if not occurs(t.body, 0):
            # non-dependent Pi prints as an arrow
            dom = go(t.dom, scope, _PREC_ARROW + 1)
            body = go(t.body, scope + ["_"], _PREC_ARROW)
            return paren(f"{dom} → {body}", _PREC_ARROW, ctx)
        return go_binder(t, scope, ctx, lam=False)

    def go_binder(t: Union[Lam, Pi], scope: list[str], ctx: int, lam: bool) -> str:
        sym = "λ" if lam else "Π"
        # compact mode collapses a maximal run of implicit Pi binders
        if not lam and not expand_implicits and t.info in (
                BinderInfo.IMPLICIT, BinderInfo.STRICT_IMPLICIT):
            inner: Term = t
            names = list(scope)
            while isinstance(inner, Pi) and inner.info in (
                    BinderInfo.IMPLICIT, BinderInfo.STRICT_IMPLICIT):
                names.append(_fresh_name(inner.binder_name or "a", names))
                inner = inner.body
            body = go(inner, names, 0)
            return paren(f"{sym} {{...}}, {body}", 0, ctx)
        name = _fresh_name(t.binder_name or "a", scope)
        lb, rb = _BINDER_BRACKETS[t.info]
        dom = go(t.dom, scope, 0)
        body = go(t.body, scope + [name], 0)
        return paren(f"{sym} {lb}{name} : {dom}{rb}, {body}", 0, ctx)

    def go_app(t: App, scope: list[str], ctx: int) -> str:
        head, args = spine(t)
        if isinstance(head, Const):
            infos = _binder_infos_for(env, head.name, len(args))
            has_hidden = any(i in _HIDDEN_INFOS for i in infos)
            if expand_implicits and has_hidden:
                parts = [f"@{head.name}"]
                parts += [go(a, scope, _PREC_MAX) for a in args]
                return paren(" ".join(parts), _PREC_APP, ctx)
            shown = [(a, i) for a, i in zip(args, infos) if i not in _HIDDEN_INFOS]
            notn = env.notation_for(head.name)
            if notn is not None:
                if notn.fixity in (Fixity.INFIXL, Fixity.INFIXR) and len(shown) == 2:
                    p = notn.precedence
                    lp = p if notn.fixity is Fixity.INFIXL else p + 1
                    rp = p + 1 if notn.fixity is Fixity.INFIXL else p
                    left = go(shown[0][0], scope, lp)
                    right = go(shown[1][0], scope, rp)
                    return paren(f"{left} {notn.symbol} {right}", p, ctx)
                if notn.fixity is Fixity.PREFIX and len(shown) == 1:
                    arg = go(shown[0][0], scope, notn.precedence + 1)
                    return paren(f"{notn.symbol}{arg}", notn.precedence, ctx)
                if notn.fixity is Fixity.POSTFIX and len(shown) == 1:
                    arg = go(shown[0][0], scope, notn.precedence + 1)
                    return paren(f"{arg}{notn.symbol}", notn.precedence, ctx)
            parts = [go(Const(head.name), scope, _PREC_MAX)]
            run_hidden = False
            for a, i in zip(args, infos):
                if i in _HIDDEN_INFOS:
                    if not run_hidden:
                        parts.append("{...}")
                        run_hidden = True
                else:
                    run_hidden = False
                    parts.append(go(a, scope, _PREC_MAX))
            return paren(" ".join(parts), _PREC_APP, ctx)
        parts = [go(head, scope, _PREC_MAX)]
        parts += [go(a, scope, _PREC_MAX) for a in args]
        return paren(" ".join(parts), _PREC_APP, ctx)

    return go(term, [], 0)


# ---------------------------------------------------------------------------
# Total term order (used by ordered rewriting)


def term_key(term: Term) -> tuple:
    """Injective key realizing the total term order.

    Smaller node count first, then constructor rank
    (Var < Const < Sort < App < Lam < Pi), then payloads and children.
    """
    return (node_count(term), _structural_key(term))


def _structural_key(t: Term) -> tuple:
    if isinstance(t, Var):
        return (0, t.index)
    if isinstance(t, Const):
        return (1, t.name.parts)
    if isinstance(t, Sort):
        return (2, level_key(t.level))
    if isinstance(t, App):
        return (3, term_key(t.fn), term_key(t.arg))
    if isinstance(t, Lam):
        return (4, t.binder_name, t.info.value, term_key(t.dom), term_key(t.body))
    if isinstance(t, Pi):
        return (5, t.binder_name, t.info.value, term_key(t.dom), term_key(t.body))
    if isinstance(t, Meta):
        return (6, t.id)
    assert isinstance(t, PatternVar)
    return (7, t.id)


class Ordering(Enum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


def term_order(a: Term, b: Term) -> Ordering:
    ka, kb = term_key(a), term_key(b)
    if ka < kb:
        return Ordering.LESS
    if ka > kb:
        return Ordering.GREATER
    return Ordering.EQUAL
