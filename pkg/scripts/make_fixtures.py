#!/usr/bin/env python3
"""Regenerate the corpora and golden files under fixtures/.

Everything here is built programmatically through the package's own data
model and serializer, so the fixtures stay in sync with the corpus format.
The prelude corpus is designed to pass every linter; the seeded corpus
plants exactly one finding per linter.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

from prooflint.core import (
    App, AttributeInstance, BinderInfo, Const, Declaration, DeclarationKind,
    Environment, Fixity, Lam, LibraryNote, Name, Notation, Pi, PROP,
    TacticDocEntry, Term, TYPE, Var, app, const,
)
from prooflint.corpus import parse_corpus, serialize_corpus
from prooflint.docgen import build_doc_database, emit_json

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

E = BinderInfo.EXPLICIT
I = BinderInfo.IMPLICIT
II = BinderInfo.INSTANCE_IMPLICIT

NAT = const("nat")
INT = const("int")
ZERO = const("nat.zero")
ONE = const("nat.one")
ADD = const("nat.add")
EQ = const("eq")
TRUE_INTRO = const("true.intro")
LIST = const("list")
NIL = const("list.nil")
CONS = const("list.cons")
LENGTH = const("list.length")
INHABITED = const("inhabited")
F = const("f")
G = const("g")


def arr(a: Term, b: Term) -> Term:
    return Pi("_x", E, a, b)


def eq_nat(lhs: Term, rhs: Term) -> Term:
    return app(EQ, NAT, lhs, rhs)


def lam_chain(binders: list[tuple[str, BinderInfo, Term]], body: Term) -> Term:
    for name, info, dom in reversed(binders):
        body = Lam(name, info, dom, body)
    return body


def pi_chain(binders: list[tuple[str, BinderInfo, Term]], concl: Term) -> Term:
    for name, info, dom in reversed(binders):
        concl = Pi(name, info, dom, concl)
    return concl


NAT_ARROW_NAT = arr(NAT, NAT)


def attrs(*specs) -> tuple[AttributeInstance, ...]:
    out = []
    for spec in specs:
        if isinstance(spec, str):
            out.append(AttributeInstance(spec))
        else:
            out.append(spec)
    return tuple(out)


def prelude_declarations() -> list[Declaration]:
    D = DeclarationKind
    rows: list[tuple] = [
        # (name, kind, type, value, attrs, doc)
        ("nat", D.INDUCTIVE, TYPE, None, (), "The natural numbers."),
        ("nat.zero", D.CONSTANT, NAT, None, (), "The natural number zero."),
        ("nat.one", D.CONSTANT, NAT, None, (), "The natural number one."),
        ("nat.add", D.CONSTANT, arr(NAT, NAT_ARROW_NAT), None, (),
         "Addition of natural numbers."),
        ("int", D.INDUCTIVE, TYPE, None, (), "The integers."),
        ("int.neg", D.CONSTANT, arr(INT, INT), None, (), "Integer negation."),
        ("eq", D.INDUCTIVE,
         Pi("α", I, TYPE, Pi("a", E, Var(0), Pi("b", E, Var(1), PROP))),
         None, (), "Propositional equality."),
        ("iff", D.INDUCTIVE, Pi("a", E, PROP, Pi("b", E, PROP, PROP)),
         None, (), "Logical equivalence of propositions."),
        ("true", D.INDUCTIVE, PROP, None, (), "The always-true proposition."),
        ("true.intro", D.CONSTANT, const("true"), None, (),
         "The trivial proof of `true`."),
        ("gt", D.CONSTANT, arr(NAT, arr(NAT, PROP)), None, (),
         "Strict greater-than on the naturals."),
        ("list", D.INDUCTIVE, arr(TYPE, TYPE), None, (),
         "Finite sequences of elements."),
        ("list.nil", D.CONSTANT, Pi("α", I, TYPE, App(LIST, Var(0))),
         None, (), "The empty list."),
        ("list.cons", D.CONSTANT,
         Pi("α", I, TYPE, Pi("a", E, Var(0),
            Pi("l", E, App(LIST, Var(1)), App(LIST, Var(2))))),
         None, (), "Prepend an element to a list."),
        ("list.length", D.CONSTANT,
         Pi("α", I, TYPE, Pi("l", E, App(LIST, Var(0)), NAT)),
         None, (), "The number of elements in a list."),
        ("prod", D.INDUCTIVE, arr(TYPE, arr(TYPE, TYPE)), None, (),
         "The cartesian product of two types."),
        ("inhabited", D.STRUCTURE, arr(TYPE, TYPE), None, attrs("class"),
         "Types with a designated default element."),
        ("nonempty", D.STRUCTURE, arr(TYPE, PROP), None, attrs("class"),
         "Types with at least one element, propositionally."),
        ("has_scalar", D.STRUCTURE, arr(TYPE, arr(TYPE, TYPE)), None,
         attrs("class"), "Scalar multiplication of one type on another."),
        ("ring", D.STRUCTURE, arr(TYPE, TYPE), None, attrs("class"),
         "Ring structure on a type."),
        ("add_comm_group", D.STRUCTURE, arr(TYPE, TYPE), None, attrs("class"),
         "Additive commutative group structure on a type."),
        ("group", D.STRUCTURE, arr(TYPE, TYPE), None, attrs("class"),
         "Group structure on a type."),
        ("comm_group", D.STRUCTURE, arr(TYPE, TYPE), None, attrs("class"),
         "Commutative group structure on a type."),
        ("module", D.STRUCTURE, arr(TYPE, arr(TYPE, TYPE)), None,
         attrs("class"), "Module structure of a ring on an abelian group."),
        ("is_ring_hom", D.STRUCTURE, Pi("fn", E, NAT_ARROW_NAT, PROP), None,
         attrs("class"), "The predicate that a function respects ring structure."),
        ("continuous", D.CONSTANT, Pi("fn", E, NAT_ARROW_NAT, PROP), None, (),
         "The predicate that a function is continuous."),
        ("completion.map", D.CONSTANT, Pi("fn", E, NAT_ARROW_NAT, NAT_ARROW_NAT),
         None, (), "Extend a function to the completion."),
        ("f", D.CONSTANT, NAT_ARROW_NAT, None, (),
         "An arbitrary fixed function on the naturals."),
        ("g", D.CONSTANT, NAT_ARROW_NAT, None, (),
         "Another arbitrary fixed function on the naturals."),
        ("nat.inhabited", D.DEFINITION, App(INHABITED, NAT), None,
         attrs("instance"), None),
        ("int.inhabited", D.DEFINITION, App(INHABITED, INT), None,
         attrs("instance"), None),
        ("list.inhabited", D.DEFINITION,
         Pi("α", I, TYPE, App(INHABITED, App(LIST, Var(0)))), None,
         attrs("instance"), None),
        ("prod.inhabited", D.DEFINITION,
         pi_chain([("α", I, TYPE), ("β", I, TYPE),
                   ("ha", II, App(INHABITED, Var(1))),
                   ("hb", II, App(INHABITED, Var(1)))],
                  App(INHABITED, app(const("prod"), Var(3), Var(2)))),
         None, attrs("instance"), None),
        ("comm_group.to_group", D.DEFINITION,
         pi_chain([("α", I, TYPE), ("h", II, App(const("comm_group"), Var(0)))],
                  App(const("group"), Var(1))),
         None, attrs(AttributeInstance("instance", priority=100)),
         "The group underlying a commutative group. "
         "See Note [lower instance priority]."),
        ("module.to_ring", D.DEFINITION,
         pi_chain([("R", E, TYPE), ("M", I, TYPE),
                   ("m", II, app(const("module"), Var(1), Var(0)))],
                  App(const("ring"), Var(2))),
         None, (), "The scalar ring of a module."),
        ("zero_add", D.THEOREM,
         Pi("x", E, NAT, eq_nat(app(ADD, ZERO, Var(0)), Var(0))),
         Lam("x", E, NAT, TRUE_INTRO), attrs("simp"), None),
        ("add_comm", D.THEOREM,
         pi_chain([("a", E, NAT), ("b", E, NAT)],
                  eq_nat(app(ADD, Var(1), Var(0)), app(ADD, Var(0), Var(1)))),
         lam_chain([("a", E, NAT), ("b", E, NAT)], TRUE_INTRO), (), None),
        ("length_nil", D.THEOREM,
         Pi("α", I, TYPE,
            eq_nat(app(LENGTH, Var(0), App(NIL, Var(0))), ZERO)),
         Lam("α", I, TYPE, TRUE_INTRO), attrs("simp"), None),
        ("length_cons", D.THEOREM,
         pi_chain([("α", I, TYPE), ("a", E, Var(0)), ("l", E, App(LIST, Var(1)))],
                  eq_nat(app(LENGTH, Var(2), app(CONS, Var(2), Var(1), Var(0))),
                         app(ADD, app(LENGTH, Var(2), Var(0)), ONE))),
         lam_chain([("α", I, TYPE), ("a", E, Var(0)),
                    ("l", E, App(LIST, Var(1)))], TRUE_INTRO),
         attrs("simp"), None),
        ("length_singleton", D.THEOREM,
         pi_chain([("α", I, TYPE), ("a", E, Var(0))],
                  eq_nat(app(LENGTH, Var(1),
                             app(CONS, Var(1), Var(0), App(NIL, Var(1)))),
                         ONE)),
         lam_chain([("α", I, TYPE), ("a", E, Var(0))], TRUE_INTRO), (), None),
    ]
    decls = []
    for line, (name, kind, type_, value, attributes, doc) in enumerate(rows):
        decls.append(Declaration(Name.of(name), kind, type_, value,
                                 tuple(attributes), doc, False,
                                 "prelude.lean", (line + 1) * 10))
    return decls


NOTATIONS = (
    Notation("0", Name.of("nat.zero"), Fixity.PREFIX, 1024),
    Notation("+", Name.of("nat.add"), Fixity.INFIXL, 65),
    Notation("-", Name.of("int.neg"), Fixity.PREFIX, 75),
    Notation("=", Name.of("eq"), Fixity.INFIXL, 50),
)

PRELUDE_MODULE_DOC = (
    "prelude.lean",
    "Core types, classes, and lemmas every corpus in this repository builds on.")

LOWER_PRIORITY_NOTE = LibraryNote(
    "lower instance priority",
    "Instances whose conclusion unifies with every goal of their class "
    "(forgetful instances between structures) are tried on every search "
    "for that class.  Assign them a priority below the default, e.g. 100, "
    "so that concrete instances are found first.",
    "prelude.lean", 5)


def prelude_env() -> Environment:
    return Environment(tuple(prelude_declarations()), NOTATIONS,
                       (PRELUDE_MODULE_DOC,), (), (LOWER_PRIORITY_NOTE,))


# ---------------------------------------------------------------------------
# Seeded corpus: one planted finding per linter


def seeded_env() -> Environment:
    D = DeclarationKind
    decls = {d.name: d for d in prelude_declarations()}

    def replace(name: str, **changes) -> None:
        d = decls[Name.of(name)]
        decls[Name.of(name)] = Declaration(
            d.name, d.kind, d.type_, d.value,
            changes.get("attributes", d.attributes), d.doc_string,
            d.is_auto_generated, d.file, d.line)

    # instance_priority: forgetful instance left at the default priority
    replace("comm_group.to_group", attributes=attrs("instance"))
    # dangerous_instance: the module argument M only occurs inside the
    # instance-implicit hypothesis, so search must invent it
    replace("module.to_ring",
            attributes=attrs(AttributeInstance("instance", priority=100)))
    # simp_comm: a commutativity lemma in the simp set
    replace("add_comm", attributes=attrs("simp"))

    extra_rows: list[tuple] = [
        ("list.list.reverse", D.DEFINITION,
         pi_chain([("α", I, TYPE), ("l", E, App(LIST, Var(0)))],
                  App(LIST, Var(1))),
         lam_chain([("α", I, TYPE), ("l", E, App(LIST, Var(0)))], Var(0)),
         (), "Reverse the elements of a list."),
        ("seeded.nat_eq_refl", D.DEFINITION,
         Pi("a", E, NAT, eq_nat(Var(0), Var(0))),
         Lam("a", E, NAT, TRUE_INTRO), (),
         "Every natural number equals itself."),
        ("one_gt_zero", D.THEOREM, app(const("gt"), ONE, ZERO),
         TRUE_INTRO, (), None),
        ("nat_refl_unused", D.THEOREM,
         pi_chain([("a", E, NAT), ("b", E, NAT)], eq_nat(Var(1), Var(1))),
         lam_chain([("a", E, NAT), ("b", E, NAT)], TRUE_INTRO), (), None),
        ("mystery", D.DEFINITION, NAT_ARROW_NAT,
         Lam("x", E, NAT, Var(0)), (), None),
        ("completion.is_ring_hom_map", D.DEFINITION,
         pi_chain([("fn", E, NAT_ARROW_NAT),
                   ("hrh", II, App(const("is_ring_hom"), Var(0))),
                   ("hc", E, App(const("continuous"), Var(1)))],
                  App(const("is_ring_hom"), App(const("completion.map"), Var(2)))),
         None, attrs("instance"), None),
        ("continuous_comp_theorem", D.THEOREM,
         pi_chain([("fn", E, NAT_ARROW_NAT),
                   ("c", II, App(const("continuous"), Var(0)))],
                  eq_nat(App(Var(1), ZERO), App(Var(1), ZERO))),
         None, (), None),
        ("mytype", D.CONSTANT, TYPE, None, (),
         "A bare type with no instances."),
        ("zero_eq_zero_of_inhabited", D.THEOREM,
         pi_chain([("T", E, TYPE), ("h", II, App(INHABITED, Var(0)))],
                  eq_nat(ZERO, ZERO)),
         None, (), None),
        ("f_zero_add", D.THEOREM,
         Pi("x", E, NAT,
            eq_nat(App(F, app(ADD, ZERO, Var(0))), App(G, Var(0)))),
         Lam("x", E, NAT, TRUE_INTRO), attrs("simp"), None),
        ("hom_add", D.THEOREM,
         pi_chain([("h", E, NAT_ARROW_NAT), ("x", E, NAT), ("y", E, NAT)],
                  eq_nat(App(Var(2), app(ADD, Var(1), Var(0))),
                         app(ADD, App(Var(2), Var(1)), App(Var(2), Var(0))))),
         lam_chain([("h", E, NAT_ARROW_NAT), ("x", E, NAT), ("y", E, NAT)],
                   TRUE_INTRO),
         attrs("simp"), None),
    ]
    extra = [Declaration(Name.of(name), kind, type_, value, tuple(attributes),
                         doc, False, "seeded.lean", (line + 1) * 10)
             for line, (name, kind, type_, value, attributes, doc)
             in enumerate(extra_rows)]
    return Environment(tuple(decls.values()) + tuple(extra), NOTATIONS,
                       (PRELUDE_MODULE_DOC,), (), (LOWER_PRIORITY_NOTE,))


# The (linter, declaration) pairs the seeded corpus is built to produce.
SEEDED_EXPECTED = {
    ("doc_blame", "mystery"),
    ("dup_namespace", "list.list.reverse"),
    ("def_lemma", "seeded.nat_eq_refl"),
    ("ge_or_gt", "one_gt_zero"),
    ("unused_arguments", "nat_refl_unused"),
    ("instance_priority", "comm_group.to_group"),
    ("dangerous_instance", "module.to_ring"),
    ("impossible_instance", "completion.is_ring_hom_map"),
    ("incorrect_type_class_argument", "continuous_comp_theorem"),
    ("has_inhabited_instance", "mytype"),
    ("inhabited_nonempty", "zero_eq_zero_of_inhabited"),
    ("simp_nf", "f_zero_add"),
    ("simp_comm", "add_comm"),
    ("simp_var_head", "hom_add"),
}


# ---------------------------------------------------------------------------
# Ordered-rewriting corpus: a simp lemma subsumed by more general ones


def length_nf_env() -> Environment:
    decls = prelude_declarations()
    by_name = {d.name: d for d in decls}

    def with_attrs(name: str, attributes) -> Declaration:
        d = by_name[Name.of(name)]
        return Declaration(d.name, d.kind, d.type_, d.value, attributes,
                           d.doc_string, d.is_auto_generated, d.file, d.line)

    # the singleton lemma gains the simp attribute but is declared *before*
    # length_cons, so the more recent general lemma wins the match
    singleton = with_attrs("length_singleton", attrs("simp"))
    cons = by_name[Name.of("length_cons")]
    reordered = []
    for d in decls:
        if d.name == singleton.name:
            continue
        if d.name == cons.name:
            reordered.append(singleton)
        reordered.append(d)
    return Environment(tuple(reordered), NOTATIONS, (PRELUDE_MODULE_DOC,),
                       (), (LOWER_PRIORITY_NOTE,))


# ---------------------------------------------------------------------------
# Documentation corpus


def docs_env() -> Environment:
    D = DeclarationKind
    decls = list(prelude_declarations())
    decls.append(Declaration(
        Name.of("tactic.interactive.linarith"), D.DEFINITION, NAT_ARROW_NAT,
        None, (),
        "An efficient decision procedure for linear arithmetic goals: "
        "closes goals that follow by a linear combination of hypotheses.",
        False, "tactics.lean", 10))
    decls.append(Declaration(
        Name.of("completion.map.equations._eqn_1"), D.THEOREM,
        pi_chain([("fn", E, NAT_ARROW_NAT), ("x", E, NAT)],
                 eq_nat(app(const("completion.map"), Var(1), Var(0)),
                        App(Var(1), Var(0)))),
        None, (), None, True, "prelude.lean", 270))
    tactic_docs = (TacticDocEntry(
        "linarith", "tactic", (Name.of("tactic.interactive.linarith"),),
        ("arithmetic", "decision procedure")),)
    return Environment(tuple(decls), NOTATIONS,
                       (PRELUDE_MODULE_DOC,
                        ("tactics.lean", "Interactive tactic front ends.")),
                       tactic_docs, (LOWER_PRIORITY_NOTE,))


def main() -> int:
    FIXTURES.mkdir(exist_ok=True)
    corpora = {
        "prelude.pcorpus": prelude_env(),
        "seeded.pcorpus": seeded_env(),
        "length_nf.pcorpus": length_nf_env(),
        "docs.pcorpus": docs_env(),
    }
    for filename, env in corpora.items():
        data = serialize_corpus(env)
        assert parse_corpus(data) == env, f"{filename} does not round-trip"
        (FIXTURES / filename).write_bytes(data)
        print(f"wrote fixtures/{filename} "
              f"({len(env.declarations)} declarations)")
    (FIXTURES / "seeded_expected.json").write_text(
        json.dumps(sorted(list(p) for p in SEEDED_EXPECTED), indent=1) + "\n")
    print("wrote fixtures/seeded_expected.json")
    golden = build_doc_database(docs_env())
    (FIXTURES / "golden_db.json").write_bytes(emit_json(golden))
    print("wrote fixtures/golden_db.json")
    return 0


if __name__ == "__main__":
    sys.exit(main())
