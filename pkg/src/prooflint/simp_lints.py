"""The three simp-set linters.

simp_nf grounds a lemma's pattern variables with constants that are fresh for
the environment, simplifies the grounded left-hand side with the full simp
set, and inspects the trace: a lemma is fine if its own rewrite shows up, or
if nothing rewrites at all.
"""

from __future__ import annotations

from typing import Optional

from .core import (
    App, Const, Declaration, Environment, HeadKind, Lam, Name, PatternVar, Pi,
    Term, head_const,
)
from .simp import SimpLemma, SimpSet, simp, subst_pattern

# fresh grounding constants; the zzz prefix keeps them above the fixture
# names in the term order so permutative lemmas stay inert on them
_GROUND_PREFIX = "zzz_lint_fresh"


def grounding_substitution(env: Environment, lemma: SimpLemma) -> dict[int, Term]:
    subst: dict[int, Term] = {}
    for pv in sorted(_pattern_var_ids(lemma.lhs)):
        name = Name.of(f"{_GROUND_PREFIX}.x{pv}")
        assert not env.contains(name), f"grounding constant {name} not fresh"
        subst[pv] = Const(name)
    return subst


def _pattern_var_ids(term: Term) -> set[int]:
    if isinstance(term, PatternVar):
        return {term.id}
    if isinstance(term, App):
        return _pattern_var_ids(term.fn) | _pattern_var_ids(term.arg)
    if isinstance(term, (Lam, Pi)):
        return _pattern_var_ids(term.dom) | _pattern_var_ids(term.body)
    return set()


def lint_simp_nf(env: Environment, simp_set: SimpSet,
                 d: Declaration) -> Optional[str]:
    lemma = simp_set.lemma(d.name)
    if lemma is None:
        return None
    grounded = subst_pattern(lemma.lhs, grounding_substitution(env, lemma))
    result = simp(env, simp_set, grounded)
    used = result.lemmas_used
    if d.name in used or not result.steps:
        return None
    names = ", ".join(sorted(str(n) for n in used))
    return ("left-hand side simplifies without using this lemma; "
            f"simp lemmas used: [{names}]")


def lint_simp_comm(env: Environment, simp_set: SimpSet,
                   d: Declaration) -> Optional[str]:
    lemma = simp_set.lemma(d.name)
    if lemma is None:
        return None
    if lemma.permutative:
        return ("commutativity lemma tagged simp; ordered rewriting makes its "
                "behavior unpredictable")
    return None


def lint_simp_var_head(env: Environment, simp_set: SimpSet,
                       d: Declaration) -> Optional[str]:
    lemma = simp_set.lemma(d.name)
    if lemma is None:
        return None
    head = head_const(lemma.lhs)
    if head.kind is HeadKind.PATTERN_VAR:
        name = "_"
        if head.index is not None and head.index < len(lemma.pattern_vars):
            name = lemma.pattern_vars[head.index][0] or "_"
        return (f"left-hand side has variable head symbol '{name}'; "
                "the simplifier will never rewrite with this lemma")
    return None
