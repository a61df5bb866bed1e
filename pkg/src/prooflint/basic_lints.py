"""The five simple per-declaration linters."""

from __future__ import annotations

from typing import Optional

from .core import (
    BinderInfo, Declaration, DeclarationKind, Environment, Name, ResultSort,
    constants_of, occurs, result_sort, strip_binders, strip_lambdas,
)

ILLEGAL_CONSTANTS = (Name.of("gt"), Name.of("ge"))


def lint_dup_namespace(d: Declaration) -> Optional[str]:
    seen = set()
    for part in d.name.parts:
        if part in seen:
            return f"duplicate namespace component '{part}'"
        seen.add(part)
    return None


def lint_def_lemma(env: Environment, d: Declaration) -> Optional[str]:
    if d.kind not in (DeclarationKind.DEFINITION, DeclarationKind.THEOREM):
        return None
    if d.has_attr("instance"):
        return None
    sort = result_sort(env, d.type_)
    if d.kind is DeclarationKind.DEFINITION and sort is ResultSort.PROP:
        return "is a def, should be a lemma/theorem"
    if d.kind is DeclarationKind.THEOREM and sort is ResultSort.TYPE:
        return "is a lemma/theorem, should be a def"
    return None


def lint_illegal_constants(d: Declaration) -> Optional[str]:
    found = sorted({str(c) for c in constants_of(d.type_)
                    if c in ILLEGAL_CONSTANTS})
    if found:
        return "the type contains the disfavored constant(s) " + ", ".join(found)
    return None


def _binder_used(binders, conclusion, value, i: int) -> bool:
    n = len(binders)
    # in a later binder's type
    for j in range(i + 1, n):
        if occurs(binders[j][2], j - i - 1):
            return True
    if occurs(conclusion, n - 1 - i):
        return True
    if value is not None:
        lams, body = strip_lambdas(value)
        stripped = min(len(lams), n)
        if i < stripped:
            for j in range(i + 1, stripped):
                if occurs(lams[j][2], j - i - 1):
                    return True
            if occurs(body, stripped - 1 - i):
                return True
    return False


def lint_unused_arguments(d: Declaration) -> Optional[str]:
    # only value-bearing declarations are checked: for an axiom or constant
    # there is no body in which a plain argument could legitimately be used
    if d.value is None:
        return None
    binders, conclusion = strip_binders(d.type_)
    unused = [f"argument {i + 1} ({name or '_'})"
              for i, (name, _, _) in enumerate(binders)
              if not _binder_used(binders, conclusion, d.value, i)]
    if unused:
        return "unused " + ", ".join(unused)
    return None


def lint_doc_blame(d: Declaration) -> Optional[str]:
    if d.kind not in (DeclarationKind.DEFINITION, DeclarationKind.CONSTANT):
        return None
    if d.has_attr("instance"):
        return None
    if d.doc_string is None:
        if d.kind is DeclarationKind.DEFINITION:
            return "def missing doc string"
        return "constant missing doc string"
    return None
