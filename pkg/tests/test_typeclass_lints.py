"""Unit tests for the instance-hygiene linters."""

import pytest

from prooflint.core import (
    App, AttributeInstance, BinderInfo, Const, Declaration, DeclarationKind,
    Environment, Name, Pi, PROP, TYPE, Var, app, const,
)
from prooflint.typeclass import build_instance_db
from prooflint.typeclass_lints import (
    lint_dangerous_instance, lint_has_inhabited_instance,
    lint_impossible_instance, lint_incorrect_type_class_argument,
    lint_inhabited_nonempty, lint_instance_priority,
)

E = BinderInfo.EXPLICIT
I = BinderInfo.IMPLICIT
II = BinderInfo.INSTANCE_IMPLICIT


def decl(name, kind, type_, attrs=(), doc=None):
    return Declaration(Name.of(name), kind, type_, None, tuple(attrs), doc,
                       False, "t.lean", 1)


def instance(name, type_, priority=None):
    return decl(name, DeclarationKind.DEFINITION, type_,
                [AttributeInstance("instance", priority=priority)])


# --- instance_priority -------------------------------------------------------

def test_forgetful_default_priority_flagged(prelude_env):
    inst = instance("comm_group.to_group2",
                    Pi("α", I, TYPE,
                       Pi("h", II, App(const("comm_group"), Var(0)),
                          App(const("group"), Var(1)))))
    message = lint_instance_priority(prelude_env, inst)
    assert "Note [lower instance priority]" in message


def test_forgetful_low_priority_passes(prelude_env):
    inst = instance("ok", Pi("α", I, TYPE,
                             Pi("h", II, App(const("comm_group"), Var(0)),
                                App(const("group"), Var(1)))), priority=100)
    assert lint_instance_priority(prelude_env, inst) is None


def test_concrete_instance_any_priority_passes(prelude_env):
    inst = instance("nat.group", App(const("group"), const("nat")))
    assert lint_instance_priority(prelude_env, inst) is None


def test_non_instances_skipped(prelude_env):
    d = decl("plain", DeclarationKind.DEFINITION,
             App(const("group"), const("nat")))
    assert lint_instance_priority(prelude_env, d) is None


# --- dangerous_instance ------------------------------------------------------

def test_projection_instance_names_the_metavariable(seeded_env):
    d = seeded_env.decl("module.to_ring")
    message = lint_dangerous_instance(seeded_env, d)
    assert "M" in message and "metavariable" in message


def test_all_conclusion_arguments_bound_passes(prelude_env):
    d = prelude_env.decl("prod.inhabited")
    assert lint_dangerous_instance(prelude_env, d) is None


# --- impossible_instance -----------------------------------------------------

def test_uninferable_plain_hypothesis_flagged(seeded_env):
    d = seeded_env.decl("completion.is_ring_hom_map")
    message = lint_impossible_instance(seeded_env, d)
    assert "argument 3 (hc)" in message


def test_class_hypotheses_are_fine(prelude_env):
    assert lint_impossible_instance(
        prelude_env, prelude_env.decl("prod.inhabited")) is None


def test_argument_used_by_later_binder_is_inferable(prelude_env):
    inst = instance("dep", Pi("T", E, TYPE,
                              Pi("h", II, App(const("inhabited"), Var(0)),
                                 App(const("inhabited"),
                                     App(const("list"), Var(1))))))
    assert lint_impossible_instance(prelude_env, inst) is None


# --- incorrect_type_class_argument -------------------------------------------

def test_non_class_instance_implicit_flagged(prelude_env):
    d = decl("t", DeclarationKind.THEOREM,
             Pi("l", II, App(const("list"), const("nat")), PROP))
    message = lint_incorrect_type_class_argument(prelude_env, d)
    assert "argument 1 (l)" in message


def test_class_instance_implicit_passes(prelude_env):
    d = decl("t", DeclarationKind.THEOREM,
             Pi("h", II, App(const("inhabited"), const("nat")), PROP))
    assert lint_incorrect_type_class_argument(prelude_env, d) is None


def test_applies_to_every_declaration_kind(prelude_env):
    for kind in DeclarationKind:
        d = decl("t", kind, Pi("x", II, const("nat"), PROP))
        assert lint_incorrect_type_class_argument(prelude_env, d) is not None


# --- has_inhabited_instance --------------------------------------------------

def test_bare_type_without_instance_flagged(prelude_env):
    d = decl("fresh_type", DeclarationKind.CONSTANT, TYPE, doc="doc")
    db = build_instance_db(prelude_env)
    message = lint_has_inhabited_instance(prelude_env, db, d)
    assert "inhabited" in message


def test_types_with_instances_pass(prelude_env):
    db = build_instance_db(prelude_env)
    for name in ["nat", "int", "list", "prod"]:
        d = prelude_env.decl(name)
        assert lint_has_inhabited_instance(prelude_env, db, d) is None


def test_classes_propositions_and_functions_skipped(prelude_env):
    db = build_instance_db(prelude_env)
    for name in ["inhabited", "ring", "gt", "nat.add", "f", "true", "eq"]:
        d = prelude_env.decl(name)
        assert lint_has_inhabited_instance(prelude_env, db, d) is None


def test_nonempty_instance_also_satisfies(prelude_env):
    db = build_instance_db(prelude_env)
    fresh = decl("fresh_type", DeclarationKind.CONSTANT, TYPE, doc="doc")
    env2 = Environment(prelude_env.declarations + (
        fresh,
        instance("fresh_type.nonempty",
                 App(const("nonempty"), const("fresh_type")))),
        prelude_env.notations)
    db2 = build_instance_db(env2)
    assert lint_has_inhabited_instance(env2, db2, fresh) is None


# --- inhabited_nonempty ------------------------------------------------------

def test_unused_inhabited_hypothesis_flagged(seeded_env):
    d = seeded_env.decl("zero_eq_zero_of_inhabited")
    message = lint_inhabited_nonempty(seeded_env, d)
    assert "nonempty" in message and "argument 2 (h)" in message


def test_used_inhabited_hypothesis_passes(prelude_env):
    t = Pi("T", E, TYPE,
           Pi("h", II, App(const("inhabited"), Var(0)),
              app(const("eq"), App(const("inhabited"), Var(1)),
                  Var(0), Var(0))))
    d = decl("t", DeclarationKind.THEOREM, t)
    assert lint_inhabited_nonempty(prelude_env, d) is None


def test_data_level_declarations_skipped(prelude_env):
    t = Pi("T", E, TYPE, Pi("h", II, App(const("inhabited"), Var(0)), Var(1)))
    d = decl("pick", DeclarationKind.DEFINITION, t)
    assert lint_inhabited_nonempty(prelude_env, d) is None
