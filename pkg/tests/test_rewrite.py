import random

import pytest
from hypothesis import given, strategies as st

from lambdaq import NEG, POS, App, Coll, Lam, Neg, Var, parse, term_equal
from lambdaq.generate import random_affine_term, random_term
from lambdaq.rewrite import (
    beta_gamma_step,
    beta_p_contract,
    gamma_normalize,
    gamma_redexes,
    gamma_step,
    has_gamma_redex,
    normalize,
    reduce_gamma,
    scale,
    substitute,
    trace_line,
)
from lambdaq.terms import cardinality, members, mk_collection, same_syntax, sign_concat

x, y, z, N = Var("x"), Var("y"), Var("z"), parse(r"\w.w w")


def sub(body, repl, var="x"):
    return substitute(parse(body), parse(repl) if isinstance(repl, str) else repl, var)


class TestPlainRules:
    def test_rule1_variable_hit(self):
        assert substitute(x, N, "x") == N

    def test_rule2_other_variable(self):
        assert substitute(y, N, "x") == y

    def test_rule3_application(self):
        assert sub("x (y x)", "a b") == parse("a b (y (a b))")

    def test_rule4_bound_variable_shadows(self):
        assert same_syntax(sub(r"\x.x", N), parse(r"\x.x"))

    def test_rule5_no_capture_possible(self):
        assert same_syntax(sub(r"\y.x y", "z"), parse(r"\y.z y"))

    def test_rule6_renames_binder(self):
        out = sub(r"\y.x y", "y")
        assert isinstance(out, Lam) and out.binder not in ("x", "y")
        assert term_equal(out, parse(r"\z.y z"))
        assert "y" in out.free_vars

    def test_rule6_fresh_name_avoids_body_and_replacement(self):
        out = sub(r"\y.x y y1", "y")
        assert out.binder not in {"x", "y", "y1"}
        assert out.free_vars == {"y", "y1"}


def test_rule7_collection():
    assert term_equal(sub("x, y x", "a"), parse("a, y a"))
    assert cardinality(sub("x, y", "a, b")) == 3


class TestSignedRules:
    def test_s1_sign_scales_the_replacement(self):
        assert same_syntax(sub("~x", r"~\y.y"), parse(r"\y.y"))
        assert same_syntax(sub("~x", "a"), parse("~a"))

    def test_s1_application_replacement_is_wrapped(self):
        out = sub("~x", "a b")
        assert isinstance(out, Neg) and out.inner == parse("a b")

    def test_s1_collection_replacement_distributes(self):
        assert term_equal(sub("~x", "a, ~b"), parse("~a, b"))

    def test_s2_other_signed_variable(self):
        assert same_syntax(sub("~y", "a"), parse("~y"))

    def test_s3_application(self):
        assert term_equal(sub("~x x", "a"), parse("~a a"))

    def test_s4_signed_abstraction_shadows(self):
        assert same_syntax(sub(r"~\x.x", "a"), parse(r"~\x.x"))

    def test_s5_signed_abstraction_body(self):
        assert same_syntax(sub(r"~\y.~x", "a"), parse(r"~\y.~a"))

    def test_s6_signed_abstraction_renames(self):
        out = sub(r"~\y.x ~y", "y")
        assert out.sign is NEG and out.binder != "y"
        assert term_equal(out, parse(r"~\q.y ~q"))

    def test_s7_signed_collection(self):
        assert term_equal(sub("~x, x", r"\a.a"), parse(r"~\a.a, \a.a"))


def test_scale():
    assert scale(NEG, x) == Var("x", NEG)
    assert term_equal(scale(NEG, parse("x, ~y")), parse("~x, y"))
    assert scale(POS, parse("a b")) == parse("a b")
    assert scale(NEG, scale(NEG, parse("a b"))) == parse("a b")


@given(st.integers(0, 2**32), st.sampled_from([POS, NEG]), st.sampled_from([POS, NEG]))
def test_scale_is_a_group_action(seed, s1, s2):
    t = random_term(random.Random(seed), "q", depth=4)
    assert scale(s1, scale(s2, t)) == scale(sign_concat(s1, s2), t)


@given(st.integers(0, 2**32), st.integers(0, 2**32))
def test_substitution_never_captures(s1, s2):
    body = random_term(random.Random(s1), "q", depth=4)
    repl = random_term(random.Random(s2), "q", depth=3)
    out = substitute(body, repl, "x")
    expected = body.free_vars - {"x"}
    if "x" in body.free_vars:
        expected |= repl.free_vars
    assert out.free_vars == expected


def test_gamma_step_examples():
    t, path = gamma_step(parse("(M, N) (P, Q)"))
    assert path == () and term_equal(t, parse("M P, M Q, N P, N Q"))
    assert gamma_step(parse("x y")) is None
    t, _ = gamma_step(parse(r"(\x.x) (a, b)"))
    assert term_equal(t, parse(r"(\x.x) a, (\x.x) b"))


def test_gamma_step_picks_leftmost_innermost():
    t = parse("(a, b) ((c, d) e)")
    assert list(gamma_redexes(t)) == [(1,), ()]
    assert list(gamma_redexes(t, "leftmost-outermost")) == [(), (1,)]
    _, path = gamma_step(t)
    assert path == (1,)


def test_gamma_normalize_examples():
    assert cardinality(gamma_normalize(parse("(M, N) (P, Q)"))) == 4
    assert term_equal(gamma_normalize(parse(r"\x.(a, b) c")), parse(r"\x.(a c, b c)"))
    v = parse(r"\x.x y")
    assert gamma_normalize(v) is v


def test_gamma_normal_cardinality_law():
    m, n = parse("a, b, c"), parse(r"\x.x, y")
    assert cardinality(gamma_normalize(App(m, n))) == 6


def test_gamma_confluence_random(rng):
    for _ in range(1000):
        t = random_term(rng, "p", depth=5)
        a = reduce_gamma(t, "leftmost-innermost")
        b = reduce_gamma(t, "rightmost-outermost")
        assert term_equal(a, b) and term_equal(a, gamma_normalize(t))
        assert not has_gamma_redex(a)


def test_gamma_termination_bound(rng):
    for _ in range(200):
        t = random_term(rng, "p", depth=5)
        # each step strictly removes one application-over-collection; the
        # final size bounds the number of steps
        bound = gamma_normalize(t).size + t.size
        reduce_gamma(t, limit=bound)


def test_beta_gamma_routes_agree():
    t = gamma_normalize(parse(r"(\x.x) (a, b)"))
    assert isinstance(t, Coll)
    t1, _ = beta_gamma_step(t)
    t2, _ = beta_gamma_step(t1)
    assert beta_gamma_step(t2) is None
    assert term_equal(t2, parse("a, b"))
    assert term_equal(beta_p_contract(parse(r"(\x.x) (a, b)")), t2)


def test_beta_gamma_signed():
    t, path = beta_gamma_step(parse(r"(~\x.x) y"))
    assert t == parse("~y") and path == ()
    assert beta_gamma_step(parse(r"\x.x")) is None


def test_beta_gamma_requires_gamma_normal_form():
    with pytest.raises(ValueError):
        beta_gamma_step(parse("(a, b) c"))


def test_beta_p_matches_gamma_first_route(rng):
    for _ in range(200):
        body = random_term(rng, "q", depth=3, names=("x", "y"))
        arg = gamma_normalize(random_term(rng, "q", depth=2, names=("a", "b")))
        lam = Lam("x", body, rng.choice([POS, NEG]))
        via_gamma = gamma_normalize(App(lam, arg))
        via_beta_p = beta_p_contract(App(lam, arg))
        each_member = mk_collection(beta_p_contract(m) for m in members(via_gamma))
        assert term_equal(each_member, via_beta_p)


def test_trace_line_format():
    t, path = beta_gamma_step(parse(r"a ((\x.x) b)"))
    assert trace_line("beta", path, t) == "beta @ /1: a b"


def _normal_forms(t):
    return normalize(t, strategy="leftmost-outermost"), normalize(t, strategy="rightmost-innermost")


def test_beta_gamma_plain_lambda_confluence(rng):
    for _ in range(300):
        t = random_affine_term(rng, level="l")
        a, b = _normal_forms(t)
        assert term_equal(a, b)


def test_beta_gamma_normal_forms_depend_on_order():
    # the contractum of the inner redex is a collection; contracting the outer
    # redex first keeps that collection under the binder
    t = parse(r"(\x.\y.x) ((\z.(z, c)) a)")
    a, b = _normal_forms(t)
    assert term_equal(a, parse(r"\y.(a, c)"))
    assert term_equal(b, parse(r"\y.a, \y.c"))
    assert not term_equal(a, b)
