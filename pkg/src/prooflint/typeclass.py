"""Instance database and depth-first, priority-ordered instance search.

The search emulates backward chaining over the instance database: the goal is
unified with an instance's conclusion (binders become fresh metavariables),
instance-implicit hypotheses become subgoals, and a candidate only counts as a
solution once every non-instance binder has been determined to a ground term.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator, Optional

from .core import (
    App, Binder, BinderInfo, Const, Declaration, Environment, Head, HeadKind,
    Lam, Meta, Name, Pi, Sort, Term, Var, head_const, map_free_vars, pretty,
    spine, strip_binders,
)

DEFAULT_PRIORITY = 1000
DEFAULT_DEPTH_LIMIT = 32


class InstanceWithoutClassHead(Exception):
    def __init__(self, decl: Name):
        super().__init__(f"instance {decl} has no type-class conclusion head")
        self.decl = decl


@dataclass(frozen=True)
class InstanceEntry:
    decl: Name
    binders: tuple[Binder, ...]
    conclusion: Term
    priority: int
    order_index: int

    @property
    def class_name(self) -> Name:
        head = head_const(self.conclusion)
        assert head.kind is HeadKind.CONST
        return head.name


def declared_priority(d: Declaration) -> int:
    """Priority of an instance: instance attr, else priority attr, else default."""
    inst = d.attr("instance")
    if inst is not None and inst.priority is not None:
        return inst.priority
    prio = d.attr("priority")
    if prio is not None and prio.priority is not None:
        return prio.priority
    return DEFAULT_PRIORITY


InstanceDb = dict[Name, list[InstanceEntry]]


def build_instance_db(env: Environment, strict: bool = False) -> InstanceDb:
    """Group instances by conclusion head class; high priority first, then
    most recently declared first."""
    classes = env.classes()
    db: InstanceDb = {}
    for order_index, d in enumerate(env.declarations):
        if not d.has_attr("instance"):
            continue
        binders, conclusion = strip_binders(d.type_)
        head = head_const(conclusion)
        if head.kind is not HeadKind.CONST or head.name not in classes:
            if strict:
                raise InstanceWithoutClassHead(d.name)
            continue
        entry = InstanceEntry(d.name, tuple(binders), conclusion,
                              declared_priority(d), order_index)
        db.setdefault(head.name, []).append(entry)
    for entries in db.values():
        entries.sort(key=lambda e: (-e.priority, -e.order_index))
    return db


# ---------------------------------------------------------------------------
# Structural instance analysis


def introduced_metavariables(inst: InstanceEntry) -> list[str]:
    """Binder names occurring in an instance-implicit hypothesis's type but
    not in the conclusion; these become metavariables during search."""
    n = len(inst.binders)
    in_conclusion = {i for i in range(n)
                     if _occurs_as_binder(inst.conclusion, n, i)}
    introduced = []
    for i, (name, _, _) in enumerate(inst.binders):
        if i in in_conclusion:
            continue
        for j in range(i + 1, n):
            _, info_j, dom_j = inst.binders[j]
            if info_j is BinderInfo.INSTANCE_IMPLICIT and \
                    _occurs_as_binder(dom_j, j, i):
                introduced.append(name)
                break
    return introduced


def _occurs_as_binder(term: Term, depth: int, binder_index: int) -> bool:
    """Does the variable of binder binder_index occur in a term that lives
    under the first `depth` binders of the telescope?"""
    from .core import occurs
    return occurs(term, depth - 1 - binder_index)


def is_forgetful(inst: InstanceEntry) -> bool:
    """Does the conclusion apply its class to variables only, so that it
    unifies with every goal of that class?"""
    _, args = spine(inst.conclusion)
    return all(isinstance(a, Var) for a in args)


# ---------------------------------------------------------------------------
# Resolution


class Outcome(Enum):
    SOLVED = "solved"
    FAILED = "failed"
    DEPTH_EXCEEDED = "depth_exceeded"


@dataclass(frozen=True)
class WitnessNode:
    instance: Name
    children: tuple["WitnessNode", ...] = ()


@dataclass
class ResolutionTrace:
    outcome: Outcome
    witness: Optional[WitnessNode]
    nodes_visited: int
    tried: list[tuple[str, Name]] = field(default_factory=list)


class _Store:
    """Metavariable assignments with an undo trail for backtracking."""

    def __init__(self) -> None:
        self.assignments: dict[int, Term] = {}
        self.trail: list[int] = []
        self.counter = 0

    def fresh(self) -> Meta:
        self.counter += 1
        return Meta(self.counter)

    def mark(self) -> int:
        return len(self.trail)

    def undo(self, mark: int) -> None:
        while len(self.trail) > mark:
            del self.assignments[self.trail.pop()]

    def assign(self, mid: int, term: Term) -> None:
        self.assignments[mid] = term
        self.trail.append(mid)

    def expand(self, term: Term) -> Term:
        if isinstance(term, Meta):
            assigned = self.assignments.get(term.id)
            return term if assigned is None else self.expand(assigned)
        if isinstance(term, App):
            return App(self.expand(term.fn), self.expand(term.arg))
        if isinstance(term, (Lam, Pi)):
            cls = type(term)
            return cls(term.binder_name, term.info,
                       self.expand(term.dom), self.expand(term.body))
        return term


def is_ground(term: Term) -> bool:
    if isinstance(term, Meta):
        return False
    if isinstance(term, App):
        return is_ground(term.fn) and is_ground(term.arg)
    if isinstance(term, (Lam, Pi)):
        return is_ground(term.dom) and is_ground(term.body)
    return True


def _contains_meta(term: Term, mid: int) -> bool:
    if isinstance(term, Meta):
        return term.id == mid
    if isinstance(term, App):
        return _contains_meta(term.fn, mid) or _contains_meta(term.arg, mid)
    if isinstance(term, (Lam, Pi)):
        return _contains_meta(term.dom, mid) or _contains_meta(term.body, mid)
    return False


def unify(a: Term, b: Term, store: _Store) -> bool:
    """First-order syntactic unification; no reduction."""
    a = store.expand(a)
    b = store.expand(b)
    if isinstance(a, Meta):
        if isinstance(b, Meta) and b.id == a.id:
            return True
        if _contains_meta(b, a.id):
            return False
        store.assign(a.id, b)
        return True
    if isinstance(b, Meta):
        if _contains_meta(a, b.id):
            return False
        store.assign(b.id, a)
        return True
    if type(a) is not type(b):
        return False
    if isinstance(a, App):
        return unify(a.fn, b.fn, store) and unify(a.arg, b.arg, store)
    if isinstance(a, (Lam, Pi)):
        return (a.binder_name == b.binder_name and a.info == b.info
                and unify(a.dom, b.dom, store) and unify(a.body, b.body, store))
    return a == b


def _open_with(term: Term, metas: list[Meta], depth_in_telescope: int) -> Term:
    """Replace free vars of a telescope-local term by the telescope metas.

    The term lives under the first `depth_in_telescope` binders; the free
    variable with top-level index k refers to binder depth_in_telescope-1-k.
    """
    def repl(k: int, depth: int) -> Term:
        binder = depth_in_telescope - 1 - k
        if 0 <= binder < len(metas):
            return metas[binder]
        return Var(k)  # stays free (malformed telescopes only)
    return map_free_vars(term, repl)


def resolve(env: Environment, db: InstanceDb, goal: Term,
            depth_limit: int = DEFAULT_DEPTH_LIMIT) -> ResolutionTrace:
    """Depth-first, priority-ordered backward search for an instance witness."""
    store = _Store()
    trace = ResolutionTrace(Outcome.FAILED, None, 0)
    cut = [False]

    def solutions(goal_term: Term, depth: int) -> Iterator[WitnessNode]:
        trace.nodes_visited += 1
        if depth > depth_limit:
            cut[0] = True
            return
        g = store.expand(goal_term)
        head = head_const(g)
        if head.kind is not HeadKind.CONST:
            return
        for entry in db.get(head.name, []):
            trace.tried.append((pretty(env, g), entry.decl))
            mark = store.mark()
            metas = [store.fresh() for _ in entry.binders]
            conclusion = _open_with(entry.conclusion, metas, len(entry.binders))
            if unify(conclusion, g, store):
                inst_positions = [i for i, (_, info, _) in enumerate(entry.binders)
                                  if info is BinderInfo.INSTANCE_IMPLICIT]

                def subgoals(idx: int, acc: tuple[WitnessNode, ...]
                             ) -> Iterator[tuple[WitnessNode, ...]]:
                    if idx == len(inst_positions):
                        yield acc
                        return
                    i = inst_positions[idx]
                    _, _, dom = entry.binders[i]
                    sub = _open_with(dom, metas[:i], i)
                    for wit in solutions(sub, depth + 1):
                        yield from subgoals(idx + 1, acc + (wit,))

                for children in subgoals(0, ()):
                    ok = True
                    for i, (_, info, _) in enumerate(entry.binders):
                        if info is not BinderInfo.INSTANCE_IMPLICIT and \
                                not is_ground(store.expand(metas[i])):
                            ok = False
                            break
                    if ok:
                        yield WitnessNode(entry.decl, children)
            store.undo(mark)

    for witness in solutions(goal, 1):
        trace.outcome = Outcome.SOLVED
        trace.witness = witness
        return trace
    trace.outcome = Outcome.DEPTH_EXCEEDED if cut[0] else Outcome.FAILED
    return trace
