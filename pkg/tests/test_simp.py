"""Rewriting engine: trace exactness, loops, oracles, ordered rewriting."""

import random

import pytest

from prooflint.core import (
    App, AttributeInstance, BinderInfo, Const, Declaration, DeclarationKind,
    Environment, Name, Ordering, Pi, PROP, TYPE, Var, app, const, node_count,
    term_order,
)
from prooflint.simp import (
    BrokenTrace, NotAnEquation, RewriteStep, SimpResult, build_simp_set,
    compile_simp_lemma, replay, simp, subterm_at,
)

E = BinderInfo.EXPLICIT
I = BinderInfo.IMPLICIT
II = BinderInfo.INSTANCE_IMPLICIT


def decl(name, kind, type_, attrs=(), value=None, line=1):
    return Declaration(Name.of(name), kind, type_, value, tuple(attrs), None,
                       False, "t.lean", line)


def theorem(name, type_, line=1, simp_attr=True):
    attrs = [AttributeInstance("simp")] if simp_attr else []
    return decl(name, DeclarationKind.THEOREM, type_, attrs, line=line)


NAT = const("nat")
ZERO = const("nat.zero")
ONE = const("nat.one")
ADD = const("nat.add")


def eq_nat(lhs, rhs):
    return app(const("eq"), NAT, lhs, rhs)


# --- two-step normalization with exact trace ---------------------------------

def test_nested_zero_add_two_steps(prelude_env):
    simp_set = build_simp_set(prelude_env)
    term = app(ADD, ZERO, app(ADD, ZERO, ONE))
    result = simp(prelude_env, simp_set, term)
    assert result.output == ONE
    assert not result.fuel_exhausted
    assert len(result.steps) == 2
    assert [str(s.lemma) for s in result.steps] == ["zero_add", "zero_add"]
    assert result.steps[0].position == (2,)
    assert result.steps[1].position == ()
    assert replay(result) == result.output


# --- loops and fuel ----------------------------------------------------------

def loop_env():
    return Environment((
        decl("nat", DeclarationKind.INDUCTIVE, TYPE),
        decl("eq", DeclarationKind.INDUCTIVE,
             Pi("α", I, TYPE, Pi("a", E, Var(0), Pi("b", E, Var(1), PROP)))),
        decl("a", DeclarationKind.CONSTANT, NAT),
        decl("b", DeclarationKind.CONSTANT, NAT),
        theorem("a_eq_b", eq_nat(const("a"), const("b")), line=1),
        theorem("b_eq_a", eq_nat(const("b"), const("a")), line=2),
    ))


def test_symmetric_pair_exhausts_fuel():
    env = loop_env()
    simp_set = build_simp_set(env)
    result = simp(env, simp_set, const("a"))
    assert result.fuel_exhausted


def test_loop_consumes_exactly_the_fuel():
    env = loop_env()
    simp_set = build_simp_set(env)
    result = simp(env, simp_set, const("a"), fuel=17)
    assert result.fuel_exhausted
    assert len(result.steps) == 17
    assert replay(result) == result.output


# --- compilation -------------------------------------------------------------

def test_compile_rejects_non_equation(prelude_env):
    d = decl("bad", DeclarationKind.THEOREM,
             Pi("x", E, NAT, NAT), [AttributeInstance("simp")])
    with pytest.raises(NotAnEquation):
        compile_simp_lemma(prelude_env, d)


def test_compile_prop_conclusion_rewrites_to_true(prelude_env):
    d = theorem("gt_one", app(const("gt"), ONE, ZERO))
    lemma = compile_simp_lemma(prelude_env, d)
    assert lemma.rhs == const("true")


def test_compile_detects_permutative(prelude_env):
    add_comm = prelude_env.decl("add_comm")
    lemma = compile_simp_lemma(prelude_env, add_comm)
    assert lemma.permutative
    zero_add = prelude_env.decl("zero_add")
    assert not compile_simp_lemma(prelude_env, zero_add).permutative


# --- priorities and recency --------------------------------------------------

def rules_env(rows):
    base = [
        decl("nat", DeclarationKind.INDUCTIVE, TYPE),
        decl("eq", DeclarationKind.INDUCTIVE,
             Pi("α", I, TYPE, Pi("a", E, Var(0), Pi("b", E, Var(1), PROP)))),
        decl("c0", DeclarationKind.CONSTANT, NAT),
        decl("c1", DeclarationKind.CONSTANT, NAT),
        decl("c2", DeclarationKind.CONSTANT, NAT),
        decl("un", DeclarationKind.CONSTANT, Pi("x", E, NAT, NAT)),
        decl("bin", DeclarationKind.CONSTANT,
             Pi("x", E, NAT, Pi("y", E, NAT, NAT))),
    ]
    return Environment(tuple(base) + tuple(rows))


def test_most_recent_lemma_wins():
    env = rules_env([
        theorem("to_c1", eq_nat(App(const("un"), const("c0")), const("c1")),
                line=1),
        theorem("to_c2", eq_nat(App(const("un"), const("c0")), const("c2")),
                line=2),
    ])
    result = simp(env, build_simp_set(env), App(const("un"), const("c0")))
    assert result.output == const("c2")
    assert [str(s.lemma) for s in result.steps] == ["to_c2"]


def test_priority_overrides_recency():
    env = rules_env([
        decl("to_c1", DeclarationKind.THEOREM,
             eq_nat(App(const("un"), const("c0")), const("c1")),
             [AttributeInstance("simp", priority=1100)], line=1),
        theorem("to_c2", eq_nat(App(const("un"), const("c0")), const("c2")),
                line=2),
    ])
    result = simp(env, build_simp_set(env), App(const("un"), const("c0")))
    assert result.output == const("c1")


# --- conditional rewriting ---------------------------------------------------

def test_prop_condition_discharged_by_simplification(prelude_env):
    rows = (
        decl("cond_holds", DeclarationKind.CONSTANT, PROP),
        theorem("cond_lemma", const("cond_holds"), line=1),
        decl("cond_rw", DeclarationKind.THEOREM,
             Pi("x", E, NAT,
                Pi("h", E, const("cond_holds"),
                   eq_nat(App(const("f"), Var(1)), App(const("g"), Var(1))))),
             [AttributeInstance("simp")], line=2),
    )
    env = Environment(prelude_env.declarations + rows, prelude_env.notations)
    simp_set = build_simp_set(env)
    result = simp(env, simp_set, App(const("f"), ONE))
    assert result.output == App(const("g"), ONE)
    assert Name.of("cond_lemma") in result.lemmas_used
    step = result.steps[0]
    assert len(step.condition_traces) == 1
    assert isinstance(step.condition_traces[0], SimpResult)
    assert step.condition_traces[0].output == const("true")


def test_prop_condition_failure_blocks_rewrite(prelude_env):
    rows = (
        decl("cond_holds", DeclarationKind.CONSTANT, PROP),
        decl("cond_rw", DeclarationKind.THEOREM,
             Pi("x", E, NAT,
                Pi("h", E, const("cond_holds"),
                   eq_nat(App(const("f"), Var(1)), App(const("g"), Var(1))))),
             [AttributeInstance("simp")]),
    )
    env = Environment(prelude_env.declarations + rows, prelude_env.notations)
    result = simp(env, build_simp_set(env), App(const("f"), ONE))
    assert result.output == App(const("f"), ONE)
    assert not result.steps


def test_instance_condition_uses_resolution(prelude_env):
    rows = (
        decl("measure", DeclarationKind.CONSTANT, Pi("T", E, TYPE, NAT)),
        decl("mytype", DeclarationKind.CONSTANT, TYPE),
        decl("measure_eq_zero", DeclarationKind.THEOREM,
             Pi("T", E, TYPE,
                Pi("h", II, App(const("inhabited"), Var(0)),
                   eq_nat(App(const("measure"), Var(1)), ZERO))),
             [AttributeInstance("simp")]),
    )
    env = Environment(prelude_env.declarations + rows, prelude_env.notations)
    simp_set = build_simp_set(env)
    # nat has an inhabited instance: the conditional rewrite fires
    ok = simp(env, simp_set, App(const("measure"), NAT))
    assert ok.output == ZERO
    # mytype has none: the rewrite is blocked
    blocked = simp(env, simp_set, App(const("measure"), const("mytype")))
    assert blocked.output == App(const("measure"), const("mytype"))


# --- random terminating systems vs. brute-force oracle -----------------------

def random_ground(rng, depth):
    roll = rng.random()
    if depth <= 0 or roll < 0.4:
        return rng.choice([const("c0"), const("c1"), const("c2")])
    if roll < 0.7:
        return App(const("un"), random_ground(rng, depth - 1))
    return app(const("bin"), random_ground(rng, depth - 1),
               random_ground(rng, depth - 1))


def all_rewrites(term, rules):
    """Every term reachable by one rewrite anywhere, any rule."""
    out = []
    for lhs, rhs in rules:
        if term == lhs:
            out.append(rhs)
    if isinstance(term, App):
        for t in all_rewrites(term.fn, rules):
            out.append(App(t, term.arg))
        for t in all_rewrites(term.arg, rules):
            out.append(App(term.fn, t))
    return out


def normal_forms(term, rules):
    seen = set()
    nfs = set()
    stack = [term]
    while stack:
        t = stack.pop()
        if t in seen:
            continue
        seen.add(t)
        succ = all_rewrites(t, rules)
        if not succ:
            nfs.add(t)
        else:
            stack.extend(succ)
    return nfs


def test_simp_matches_unique_innermost_normal_forms():
    rng = random.Random(271828)
    unique = ambiguous = 0
    for _ in range(500):
        rules = []
        rows = []
        for i in range(rng.randrange(1, 5)):
            lhs = random_ground(rng, rng.randrange(1, 4))
            rhs = random_ground(rng, rng.randrange(0, 3))
            if node_count(rhs) >= node_count(lhs):
                continue  # keep the system terminating
            rules.append((lhs, rhs))
            rows.append(theorem(f"r{i}", eq_nat(lhs, rhs), line=i + 1))
        env = rules_env(rows)
        simp_set = build_simp_set(env)
        subject = random_ground(rng, 3)
        result = simp(env, simp_set, subject)
        assert not result.fuel_exhausted
        assert replay(result) == result.output
        assert not all_rewrites(result.output, rules), \
            "simp output must be a normal form"
        nfs = normal_forms(subject, rules)
        if len(nfs) == 1:
            unique += 1
            assert result.output == next(iter(nfs))
        else:
            ambiguous += 1
    assert unique > 100


def test_simp_is_idempotent_on_random_systems():
    rng = random.Random(16180)
    for _ in range(100):
        rows = []
        for i in range(rng.randrange(1, 5)):
            lhs = random_ground(rng, rng.randrange(1, 4))
            rhs = random_ground(rng, rng.randrange(0, 3))
            if node_count(rhs) >= node_count(lhs):
                continue
            rows.append(theorem(f"r{i}", eq_nat(lhs, rhs), line=i + 1))
        env = rules_env(rows)
        simp_set = build_simp_set(env)
        result = simp(env, simp_set, random_ground(rng, 3))
        again = simp(env, simp_set, result.output)
        assert again.output == result.output
        assert not again.steps


# --- ordered (permutative) rewriting -----------------------------------------

def random_sum(rng, leaves):
    if len(leaves) == 1:
        return const(leaves[0])
    k = rng.randrange(1, len(leaves))
    return app(ADD, random_sum(rng, leaves[:k]), random_sum(rng, leaves[k:]))


def comm_env(prelude_env):
    decls = []
    for d in prelude_env.declarations:
        if d.name == Name.of("add_comm"):
            d = Declaration(d.name, d.kind, d.type_, d.value,
                            (AttributeInstance("simp"),), d.doc_string,
                            d.is_auto_generated, d.file, d.line)
        elif d.has_attr("simp"):
            d = Declaration(d.name, d.kind, d.type_, d.value, (),
                            d.doc_string, d.is_auto_generated, d.file, d.line)
        decls.append(d)
    return Environment(tuple(decls), prelude_env.notations)


def test_ordered_rewriting_terminates_and_decreases(prelude_env):
    env = comm_env(prelude_env)
    simp_set = build_simp_set(env)
    assert [str(l.decl) for l in simp_set.lemmas] == ["add_comm"]
    rng = random.Random(4321)
    names = ["nat.zero", "nat.one", "f", "g", "c", "d"]
    extra = Environment(env.declarations + (
        decl("c", DeclarationKind.CONSTANT, NAT),
        decl("d", DeclarationKind.CONSTANT, NAT)), env.notations)
    total_steps = 0
    for _ in range(200):
        k = rng.randrange(2, 7)
        leaves = [rng.choice(names) for _ in range(k)]
        term = random_sum(rng, leaves)
        result = simp(extra, simp_set, term)
        assert not result.fuel_exhausted
        # each permutative step strictly decreases the whole-term order
        current = result.input
        for step in result.steps:
            nxt = replay(SimpResult(current, None, (step,), False))
            assert term_order(nxt, current) is Ordering.LESS
            current = nxt
        assert current == result.output
        total_steps += len(result.steps)
    assert total_steps > 50  # the lemma must actually fire


def test_ordered_rewriting_closes_commuted_application(prelude_env):
    env = comm_env(prelude_env)
    extra = Environment(env.declarations + (
        decl("m", DeclarationKind.CONSTANT, NAT),
        decl("n", DeclarationKind.CONSTANT, NAT)), env.notations)
    simp_set = build_simp_set(extra)
    left = App(const("f"), app(ADD, const("m"), const("n")))
    right = App(const("f"), app(ADD, const("n"), const("m")))
    a = simp(extra, simp_set, left).output
    b = simp(extra, simp_set, right).output
    assert a == b


# --- replay safety -----------------------------------------------------------

def test_replay_detects_corrupted_traces(prelude_env):
    simp_set = build_simp_set(prelude_env)
    term = app(ADD, ZERO, app(ADD, ZERO, ONE))
    result = simp(prelude_env, simp_set, term)
    bad_before = RewriteStep(result.steps[0].lemma, result.steps[0].position,
                             const("g"), result.steps[0].after)
    with pytest.raises(BrokenTrace):
        replay(SimpResult(result.input, result.output,
                          (bad_before,) + result.steps[1:], False))
    bad_pos = RewriteStep(result.steps[0].lemma, (9, 9),
                          result.steps[0].before, result.steps[0].after)
    with pytest.raises(BrokenTrace):
        replay(SimpResult(result.input, result.output, (bad_pos,), False))


def test_subterm_at_positions(prelude_env):
    term = app(ADD, ZERO, ONE)  # App(App(add, 0), 1)
    assert subterm_at(term, ()) == term
    assert subterm_at(term, (2,)) == ONE
    assert subterm_at(term, (1, 2)) == ZERO
    assert subterm_at(term, (1, 1)) == ADD
