"""The six type-class linters, built on the instance search engine."""

from __future__ import annotations

from typing import Optional

from .core import (
    BinderInfo, Declaration, DeclarationKind, Environment, HeadKind, Name,
    ResultSort, Sort, Zero, head_const, occurs, result_sort, strip_binders,
)
from .typeclass import (
    DEFAULT_PRIORITY, InstanceDb, InstanceEntry, declared_priority,
    introduced_metavariables, is_forgetful,
)

INHABITED = Name.of("inhabited")
NONEMPTY = Name.of("nonempty")


def _instance_entry(env: Environment, d: Declaration) -> Optional[InstanceEntry]:
    if not d.has_attr("instance"):
        return None
    binders, conclusion = strip_binders(d.type_)
    head = head_const(conclusion)
    if head.kind is not HeadKind.CONST:
        return None
    return InstanceEntry(d.name, tuple(binders), conclusion,
                         declared_priority(d), 0)


def lint_instance_priority(env: Environment, d: Declaration) -> Optional[str]:
    entry = _instance_entry(env, d)
    if entry is None:
        return None
    if is_forgetful(entry) and entry.priority >= DEFAULT_PRIORITY:
        return ("forgetful instance with default priority; assign a priority "
                "below the default (see Note [lower instance priority])")
    return None


def lint_dangerous_instance(env: Environment, d: Declaration) -> Optional[str]:
    entry = _instance_entry(env, d)
    if entry is None:
        return None
    introduced = introduced_metavariables(entry)
    if introduced:
        return ("instance search introduces metavariables for argument(s) "
                + ", ".join(introduced) + "; the resulting subgoal is likely to loop")
    return None


def _is_class_headed(env: Environment, dom) -> bool:
    head = head_const(dom)
    return head.kind is HeadKind.CONST and head.name in env.classes()


def lint_impossible_instance(env: Environment, d: Declaration) -> Optional[str]:
    if not d.has_attr("instance"):
        return None
    binders, conclusion = strip_binders(d.type_)
    n = len(binders)
    bad = []
    for i, (name, info, dom) in enumerate(binders):
        if info is BinderInfo.INSTANCE_IMPLICIT and _is_class_headed(env, dom):
            continue
        used = occurs(conclusion, n - 1 - i) or any(
            occurs(binders[j][2], j - i - 1) for j in range(i + 1, n))
        if not used:
            bad.append(f"argument {i + 1} ({name or '_'})")
    if bad:
        return ("cannot be inferred: " + ", ".join(bad)
                + "; this instance will never be applied")
    return None


def lint_incorrect_type_class_argument(env: Environment,
                                       d: Declaration) -> Optional[str]:
    binders, _ = strip_binders(d.type_)
    bad = [f"argument {i + 1} ({name or '_'})"
           for i, (name, info, dom) in enumerate(binders)
           if info is BinderInfo.INSTANCE_IMPLICIT and not _is_class_headed(env, dom)]
    if bad:
        return "instance-implicit but not a type class: " + ", ".join(bad)
    return None


_INHABITABLE_KINDS = (DeclarationKind.DEFINITION, DeclarationKind.CONSTANT,
                      DeclarationKind.INDUCTIVE, DeclarationKind.STRUCTURE)


def lint_has_inhabited_instance(env: Environment, db: InstanceDb,
                                d: Declaration) -> Optional[str]:
    if d.kind not in _INHABITABLE_KINDS or d.has_attr("class"):
        return None
    # only type formers are in the linter's domain: a declaration whose
    # conclusion is literally a non-Prop sort
    _, concl = strip_binders(d.type_)
    if not isinstance(concl, Sort) or isinstance(concl.level, Zero):
        return None
    for class_name in (INHABITED, NONEMPTY):
        for entry in db.get(class_name, []):
            _, args = _spine_args(entry)
            for arg in args:
                if head_const(arg).name == d.name:
                    return None
    return "type is missing an inhabited (or nonempty) instance"


def _spine_args(entry: InstanceEntry):
    from .core import spine
    return spine(entry.conclusion)


def lint_inhabited_nonempty(env: Environment, d: Declaration) -> Optional[str]:
    if result_sort(env, d.type_) is not ResultSort.PROP:
        return None
    binders, conclusion = strip_binders(d.type_)
    n = len(binders)
    bad = []
    for i, (name, info, dom) in enumerate(binders):
        head = head_const(dom)
        if head.kind is not HeadKind.CONST or head.name != INHABITED:
            continue
        used = occurs(conclusion, n - 1 - i) or any(
            occurs(binders[j][2], j - i - 1) for j in range(i + 1, n))
        if not used:
            bad.append(f"argument {i + 1} ({name or '_'})")
    if bad:
        return ("inhabited hypothesis can be weakened to nonempty: "
                + ", ".join(bad))
    return None
