"""Simp-lemma compilation and inside-out conditional rewriting.

Lemmas rewrite left to right; the most recently declared matching lemma wins,
unless overridden by a priority attribute.  Permutative lemmas (rhs = lhs under
a nontrivial variable permutation) only apply when the result is smaller in
the total term order, which keeps them terminating.  Every simplification
produces a replayable trace of rewrite steps.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from .core import (
    App, Binder, BinderInfo, Const, Declaration, Environment, HeadKind, Lam,
    Name, Ordering, PatternVar, Pi, Sort, Term, Var, head_const, is_closed,
    map_free_vars, result_sort, ResultSort, spine, term_order,
)
from .typeclass import InstanceDb, Outcome, ResolutionTrace, build_instance_db, resolve

DEFAULT_FUEL = 10000

EQ = Name.of("eq")
IFF = Name.of("iff")
TRUE = Const(Name.of("true"))


class NotAnEquation(Exception):
    def __init__(self, decl: Name):
        super().__init__(f"simp lemma {decl} does not conclude with an equation "
                         "or a proposition")
        self.decl = decl


@dataclass(frozen=True)
class SimpCondition:
    term: Term  # pattern vars stand for the lemma's variables
    instance_implicit: bool


@dataclass(frozen=True)
class SimpLemma:
    decl: Name
    pattern_vars: tuple[Binder, ...]  # the full telescope, for reference
    conditions: tuple[SimpCondition, ...]
    lhs: Term
    rhs: Term
    permutative: bool
    priority: int
    order_index: int


def _simp_priority(d: Declaration) -> int:
    """Priority of a simp lemma: simp attr, else priority attr, else default."""
    from .typeclass import DEFAULT_PRIORITY
    simp_attr = d.attr("simp")
    if simp_attr is not None and simp_attr.priority is not None:
        return simp_attr.priority
    prio = d.attr("priority")
    if prio is not None and prio.priority is not None:
        return prio.priority
    return DEFAULT_PRIORITY


def _is_prop_binder(env: Environment, dom: Term) -> bool:
    if isinstance(dom, Sort):
        return False
    return result_sort(env, dom) is ResultSort.PROP


def _to_pattern(term: Term, telescope_depth: int) -> Term:
    """Turn free telescope variables into pattern variables numbered in binder
    order (the term lives under telescope_depth binders)."""
    def repl(k: int, _depth: int) -> Term:
        binder = telescope_depth - 1 - k
        return PatternVar(binder) if binder >= 0 else Var(k)
    return map_free_vars(term, repl)


def _split_conclusion(env: Environment, decl: Name, concl: Term) -> tuple[Term, Term]:
    head, args = spine(concl)
    if isinstance(head, Const):
        if head.name == EQ and len(args) == 3:
            return args[1], args[2]
        if head.name == IFF and len(args) == 2:
            return args[0], args[1]
    sort = _conclusion_sort(env, concl)
    if sort is ResultSort.PROP:
        return concl, TRUE
    raise NotAnEquation(decl)


def _conclusion_sort(env: Environment, concl: Term) -> ResultSort:
    # the conclusion is open, so only head-constant chasing is meaningful
    head = head_const(concl)
    if head.kind is HeadKind.CONST:
        d = env.decl(head.name)
        if d is not None:
            return result_sort(env, d.type_)
    if isinstance(concl, Sort):
        return ResultSort.TYPE
    return ResultSort.UNKNOWN


def _permutation_image(lhs: Term, rhs: Term) -> Optional[dict[int, int]]:
    """Mapping of pattern vars making rhs the image of lhs, if the two terms
    share a skeleton; requires the mapping to be injective."""
    mapping: dict[int, int] = {}

    def go(a: Term, b: Term) -> bool:
        if isinstance(a, PatternVar):
            if not isinstance(b, PatternVar):
                return False
            if a.id in mapping:
                return mapping[a.id] == b.id
            mapping[a.id] = b.id
            return True
        if type(a) is not type(b):
            return False
        if isinstance(a, App):
            return go(a.fn, b.fn) and go(a.arg, b.arg)
        if isinstance(a, (Lam, Pi)):
            return (a.binder_name == b.binder_name and a.info == b.info
                    and go(a.dom, b.dom) and go(a.body, b.body))
        return a == b

    if not go(lhs, rhs):
        return None
    if len(set(mapping.values())) != len(mapping):
        return None
    return mapping


def compile_simp_lemma(env: Environment, d: Declaration,
                       order_index: int = 0) -> SimpLemma:
    """Compile a simp-tagged declaration into a rewrite rule.

    Prop-typed binders become conditions (instance-implicit ones are
    discharged by instance search); everything else is a pattern variable.
    """
    from .core import strip_binders

    binders, concl = strip_binders(d.type_)
    conditions: list[SimpCondition] = []
    for i, (name, info, dom) in enumerate(binders):
        if info is BinderInfo.INSTANCE_IMPLICIT:
            conditions.append(SimpCondition(_to_pattern(dom, i), True))
        elif _is_prop_binder(env, dom):
            conditions.append(SimpCondition(_to_pattern(dom, i), False))
    n = len(binders)
    lhs_raw, rhs_raw = _split_conclusion(env, d.name, concl)
    lhs = _to_pattern(lhs_raw, n)
    rhs = _to_pattern(rhs_raw, n)
    mapping = _permutation_image(lhs, rhs)
    permutative = mapping is not None and any(k != v for k, v in mapping.items())
    return SimpLemma(d.name, tuple(binders), tuple(conditions), lhs, rhs,
                     permutative, _simp_priority(d), order_index)


@dataclass(frozen=True)
class SimpSet:
    lemmas: tuple[SimpLemma, ...]
    buckets: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self) -> None:
        buckets: dict[Name, list[SimpLemma]] = {}
        for lemma in self.lemmas:
            head = head_const(lemma.lhs)
            if head.kind is HeadKind.CONST:
                buckets.setdefault(head.name, []).append(lemma)
        for entries in buckets.values():
            entries.sort(key=lambda l: (-l.priority, -l.order_index))
        object.__setattr__(self, "buckets", buckets)

    def candidates(self, term: Term) -> list[SimpLemma]:
        head = head_const(term)
        if head.kind is HeadKind.CONST:
            return self.buckets.get(head.name, [])
        return []

    def lemma(self, name: Name) -> Optional[SimpLemma]:
        for l in self.lemmas:
            if l.decl == name:
                return l
        return None


def build_simp_set(env: Environment) -> SimpSet:
    lemmas = []
    for order_index, d in enumerate(env.declarations):
        if d.has_attr("simp"):
            lemmas.append(compile_simp_lemma(env, d, order_index))
    return SimpSet(tuple(lemmas))


# ---------------------------------------------------------------------------
# Matching


def match_pattern(lemma: SimpLemma, term: Term) -> Optional[dict[int, Term]]:
    """First-order match of the lemma's lhs against a term; pattern variables
    bind at most once; a variable-headed lhs never matches."""
    if head_const(lemma.lhs).kind is HeadKind.PATTERN_VAR:
        return None
    subst: dict[int, Term] = {}

    def go(pat: Term, t: Term) -> bool:
        if isinstance(pat, PatternVar):
            if pat.id in subst:
                return subst[pat.id] == t
            subst[pat.id] = t
            return True
        if type(pat) is not type(t):
            return False
        if isinstance(pat, App):
            return go(pat.fn, t.fn) and go(pat.arg, t.arg)
        if isinstance(pat, (Lam, Pi)):
            return (pat.binder_name == t.binder_name and pat.info == t.info
                    and go(pat.dom, t.dom) and go(pat.body, t.body))
        return pat == t

    return subst if go(lemma.lhs, term) else None


def subst_pattern(term: Term, subst: dict[int, Term]) -> Term:
    if isinstance(term, PatternVar):
        return subst.get(term.id, term)
    if isinstance(term, App):
        return App(subst_pattern(term.fn, subst), subst_pattern(term.arg, subst))
    if isinstance(term, (Lam, Pi)):
        cls = type(term)
        return cls(term.binder_name, term.info,
                   subst_pattern(term.dom, subst), subst_pattern(term.body, subst))
    return term


def _has_pattern_var(term: Term) -> bool:
    if isinstance(term, PatternVar):
        return True
    if isinstance(term, App):
        return _has_pattern_var(term.fn) or _has_pattern_var(term.arg)
    if isinstance(term, (Lam, Pi)):
        return _has_pattern_var(term.dom) or _has_pattern_var(term.body)
    return False


# ---------------------------------------------------------------------------
# Rewriting


@dataclass(frozen=True)
class RewriteStep:
    lemma: Name
    position: tuple[int, ...]  # 1-based child indices from the root
    before: Term  # subterm at position before the rewrite
    after: Term
    condition_traces: tuple[Union["SimpResult", ResolutionTrace], ...] = ()


@dataclass(frozen=True)
class SimpResult:
    input: Term
    output: Term
    steps: tuple[RewriteStep, ...]
    fuel_exhausted: bool

    @property
    def lemmas_used(self) -> set[Name]:
        used: set[Name] = set()

        def collect(steps) -> None:
            for step in steps:
                used.add(step.lemma)
                for trace in step.condition_traces:
                    if isinstance(trace, SimpResult):
                        collect(trace.steps)

        collect(self.steps)
        return used


def _children(term: Term) -> list[tuple[int, Term]]:
    if isinstance(term, App):
        return [(1, term.fn), (2, term.arg)]
    if isinstance(term, (Lam, Pi)):
        return [(1, term.dom), (2, term.body)]
    return []


def _with_child(term: Term, index: int, child: Term) -> Term:
    if isinstance(term, App):
        return App(child, term.arg) if index == 1 else App(term.fn, child)
    assert isinstance(term, (Lam, Pi))
    cls = type(term)
    if index == 1:
        return cls(term.binder_name, term.info, child, term.body)
    return cls(term.binder_name, term.info, term.dom, child)


def subterm_at(term: Term, position: tuple[int, ...]) -> Term:
    for index in position:
        for i, child in _children(term):
            if i == index:
                term = child
                break
        else:
            raise IndexError(f"no child {index} at {term!r}")
    return term


def replace_at(term: Term, position: tuple[int, ...], new: Term) -> Term:
    if not position:
        return new
    index = position[0]
    child = subterm_at(term, (index,))
    return _with_child(term, index, replace_at(child, position[1:], new))


class _Simplifier:
    def __init__(self, env: Environment, simp_set: SimpSet, fuel: int,
                 instance_db: Optional[InstanceDb]):
        self.env = env
        self.set = simp_set
        self.fuel = fuel
        self.exhausted = False
        self.steps: list[RewriteStep] = []
        self._instance_db = instance_db

    @property
    def instance_db(self) -> InstanceDb:
        if self._instance_db is None:
            self._instance_db = build_instance_db(self.env)
        return self._instance_db

    def run(self, term: Term, path: tuple[int, ...]) -> Term:
        while True:
            if self.exhausted:
                return term
            for index, child in _children(term):
                new_child = self.run(child, path + (index,))
                if new_child is not child:
                    term = _with_child(term, index, new_child)
            rewritten = False
            for lemma in self.set.candidates(term):
                new = self._try_rewrite(lemma, term, path)
                if new is not None:
                    term = new
                    rewritten = True
                    break
            if not rewritten or self.exhausted:
                return term

    def _try_rewrite(self, lemma: SimpLemma, term: Term,
                     path: tuple[int, ...]) -> Optional[Term]:
        subst = match_pattern(lemma, term)
        if subst is None:
            return None
        new = subst_pattern(lemma.rhs, subst)
        if _has_pattern_var(new):
            return None  # rhs variable not determined by the lhs
        if lemma.permutative and term_order(new, term) is not Ordering.LESS:
            return None
        traces = self._discharge_conditions(lemma, subst)
        if traces is None:
            return None
        if self.fuel <= 0:
            self.exhausted = True
            return None
        self.fuel -= 1
        self.steps.append(RewriteStep(lemma.decl, path, term, new, tuple(traces)))
        return new

    def _discharge_conditions(self, lemma: SimpLemma, subst: dict[int, Term]
                              ) -> Optional[list]:
        traces: list = []
        for cond in lemma.conditions:
            goal = subst_pattern(cond.term, subst)
            if _has_pattern_var(goal) or not is_closed(goal):
                return None
            if cond.instance_implicit:
                trace = resolve(self.env, self.instance_db, goal)
                if trace.outcome is not Outcome.SOLVED:
                    return None
                traces.append(trace)
            else:
                sub = _Simplifier(self.env, self.set, self.fuel, self._instance_db)
                out = sub.run(goal, ())
                self.fuel = sub.fuel
                result = SimpResult(goal, out, tuple(sub.steps), sub.exhausted)
                if sub.exhausted:
                    self.exhausted = True
                    return None
                if out != TRUE:
                    return None
                traces.append(result)
        return traces


def simp(env: Environment, simp_set: SimpSet, term: Term,
         fuel: int = DEFAULT_FUEL,
         instance_db: Optional[InstanceDb] = None) -> SimpResult:
    """Normalize a closed term bottom-up with the given simp set."""
    engine = _Simplifier(env, simp_set, fuel, instance_db)
    output = engine.run(term, ())
    return SimpResult(term, output, tuple(engine.steps), engine.exhausted)


class BrokenTrace(Exception):
    def __init__(self, step_index: int):
        super().__init__(f"trace step {step_index} does not apply")
        self.step_index = step_index


def replay(result: SimpResult) -> Term:
    """Re-apply the recorded steps to the input; must reproduce the output."""
    term = result.input
    for i, step in enumerate(result.steps):
        try:
            current = subterm_at(term, step.position)
        except IndexError as e:
            raise BrokenTrace(i) from e
        if current != step.before:
            raise BrokenTrace(i)
        term = replace_at(term, step.position, step.after)
    return term
