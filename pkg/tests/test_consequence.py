import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import random_case
from rulescope.canonical import fresh_lambda
from rulescope.consequence import (
    CRITICAL,
    SCORE,
    FreshVars,
    IterationLimitExceeded,
    applicability_report,
    basic_consequence,
    compute_mappings,
    expand_schema,
    filter_mapping,
    schema_closure,
)
from rulescope.genbench import GenParams, generate
from rulescope.oracle import check_methods_agree
from rulescope.rdf import GraphPattern, Mapping, TriplePattern, lit, uri, var
from rulescope.rules import Rule, RuleSet
from rulescope.schema import TriplestoreSchema, check_schema, schema_contains, schema_equiv

LAM = uri("lambda:l0")
TUNNEL = uri(":TunnelA")
RDF_TYPE = uri("rdf:type")
OFF_LIMIT = TriplePattern(TUNNEL, RDF_TYPE, uri(":OffLimitArea"))
TRESPASSED = TriplePattern(TUNNEL, RDF_TYPE, uri(":TrespassedArea"))
V1, V2 = var("v1"), var("v2")
P, Q = uri(":p"), uri(":q")


def test_compute_mappings(s1, mine_rules):
    r2 = mine_rules["r2"]
    want = Mapping({V1: LAM, V2: TUNNEL})
    assert compute_mappings(s1, r2, SCORE, LAM) == {want}
    assert compute_mappings(s1, r2, SCORE, LAM, ucq="unions") == {want}
    crit = compute_mappings(s1, r2, CRITICAL, LAM)
    assert want in crit
    for m in crit:
        assert set(m) == {V1, V2}
    empty = TriplestoreSchema()
    assert compute_mappings(empty, r2, SCORE, LAM) == set()
    assert compute_mappings(empty, r2, CRITICAL, LAM) == set()


def test_filter_accepts_running_example(s1, mine_rules):
    out = filter_mapping(Mapping({V1: LAM, V2: TUNNEL}), mine_rules["r2"], s1, SCORE, LAM)
    assert out.accepted
    assert out.delta_m == {V1, V2}


def test_filter_adds_object_variable_without_literal_pattern():
    a, b = var("a"), var("b")
    S = TriplestoreSchema([(var("x"), P, var("y"))], {var("x"), var("y")})
    r = Rule("r", [(a, P, b)], [(uri(":c"), Q, b)])
    out = filter_mapping(Mapping({a: LAM, b: LAM}), r, S, SCORE, LAM)
    assert out.accepted and b in out.delta_m


def test_filter_rejects_unsupported_literal():
    a = var("a")
    S = TriplestoreSchema([(var("x"), P, var("y"))], {var("x"), var("y")})
    r = Rule("r", [(a, P, lit("1"))], [(uri(":c"), Q, uri(":d"))])
    assert not filter_mapping(Mapping({a: LAM}), r, S, SCORE, LAM).accepted
    assert compute_mappings(S, r, SCORE, LAM) == {Mapping({a: LAM})}


def test_filter_rejects_literal_in_nolit_variable():
    # ?o is bound to a literal but the consequent puts it in subject position
    s, o = var("s"), var("o")
    S = TriplestoreSchema([(var("x"), P, lit("1"))], {var("x")})
    r = Rule("r", [(s, P, o)], [(o, Q, s)])
    ms = compute_mappings(S, r, SCORE, LAM)
    assert ms == {Mapping({s: LAM, o: lit("1")})}
    assert not filter_mapping(next(iter(ms)), r, S, SCORE, LAM).accepted


def test_expand_schema(s1, mine_rules):
    out = expand_schema(s1, Mapping({V1: LAM, V2: TUNNEL}), {V1, V2}, mine_rules["r2"].consequent, LAM)
    assert set(out.graph) == set(s1.graph) | {OFF_LIMIT}
    assert expand_schema(out, Mapping({V1: LAM, V2: TUNNEL}), {V1, V2}, mine_rules["r2"].consequent, LAM) == out


def test_expand_schema_unpacks_lambda_to_fresh_variables():
    a, b = var("a"), var("b")
    S = TriplestoreSchema([(var("x"), P, uri(":k"))], {var("x")})
    fresh = FreshVars(S.variables())
    out = expand_schema(S, Mapping({a: LAM, b: LAM}), {a, b}, GraphPattern([(a, Q, b)]), LAM, fresh)
    new = [tp for tp in out.graph if tp[1] == Q]
    assert len(new) == 1
    s, _, o = new[0]
    assert s.is_var and o.is_var and s != o
    assert {s, o} <= out.nolit
    assert check_schema(out) == []


def test_basic_consequence_running_example(s1, mine_rules):
    for method in (SCORE, CRITICAL):
        out = basic_consequence(s1, mine_rules["r2"], method)
        assert schema_equiv(out, s1.union([OFF_LIMIT]))
        assert schema_equiv(basic_consequence(s1, mine_rules["r1"], method), s1)


def test_closure_running_example(s1, mine_rules):
    for method in (SCORE, CRITICAL):
        rep = schema_closure(s1, mine_rules, method)
        assert set(rep.output.graph) == set(s1.graph) | {OFF_LIMIT, TRESPASSED}
        assert rep.output.nolit == s1.nolit
        assert rep.applicable == {"r1": True, "r2": True}
        assert rep.iterations == 3


def test_closure_without_rules_is_identity(s1):
    rep = schema_closure(s1, RuleSet(), SCORE)
    assert rep.output == s1 and rep.iterations == 1


def test_iteration_guard(s1, mine_rules):
    with pytest.raises(IterationLimitExceeded):
        schema_closure(s1, mine_rules, SCORE, max_iterations=1)


def test_applicability(s1, mine_rules):
    assert applicability_report(s1, mine_rules, SCORE) == {"r1": True, "r2": True}
    assert applicability_report(s1, mine_rules, CRITICAL) == {"r1": True, "r2": True}
    assert applicability_report(s1, mine_rules, SCORE, fast=True) == {"r1": True, "r2": True}
    assert applicability_report(s1, RuleSet((mine_rules["r1"],)), SCORE) == {"r1": False}
    assert applicability_report(TriplestoreSchema(), mine_rules) == {"r1": False, "r2": False}


def test_unknown_method(s1, mine_rules):
    with pytest.raises(ValueError):
        basic_consequence(s1, mine_rules["r2"], "psychic")


def test_fresh_variables_avoid_schema_names():
    taken = {var("g0"), var("g2")}
    fresh = FreshVars(taken)
    assert [fresh(), fresh(), fresh()] == [var("g1"), var("g3"), var("g4")]


# -- property tests ------------------------------------------------------------

@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10**6))
def test_score_and_critical_agree(seed):
    S, r = random_case(seed)
    assert check_methods_agree(S, r)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**6))
def test_consequence_contains_input(seed):
    S, r = random_case(seed)
    for method in (SCORE, CRITICAL):
        out = basic_consequence(S, r, method)
        assert schema_contains(S, out)
        assert check_schema(out) == []


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**6))
def test_ucq_strategies_give_same_consequence(seed):
    S, r = random_case(seed)
    assert schema_equiv(basic_consequence(S, r, SCORE), basic_consequence(S, r, SCORE, ucq="unions"))


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**6))
def test_accepted_delta_covers_structural_variables(seed):
    S, r = random_case(seed)
    lam = fresh_lambda(S, r.constants())
    structural = {t for tp in (*r.antecedent, *r.consequent) for t in tp[:2] if t.is_var}
    for m in compute_mappings(S, r, SCORE, lam):
        out = filter_mapping(m, r, S, SCORE, lam)
        if out.accepted:
            assert structural <= out.delta_m


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_fast_applicability_agrees_with_faithful(seed):
    S, R = generate(GenParams(pi_c=0.3, n_p=5, n_u=3, n_l=3, n_s=6, n_r=3, n_a=2, seed=seed))
    assert applicability_report(S, R, fast=True) == applicability_report(S, R)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_closure_independent_of_rule_order(seed):
    S, R = generate(GenParams(pi_c=0.3, n_p=5, n_u=3, n_l=3, n_s=8, n_r=3, n_a=2, seed=seed))
    forward = schema_closure(S, R).output
    backward = schema_closure(S, RuleSet(tuple(reversed(R.rules)))).output
    assert schema_equiv(forward, backward)
    again = schema_closure(forward, R)
    assert schema_equiv(again.output, forward)
    assert schema_equiv(schema_closure(S, R, CRITICAL).output, forward)
