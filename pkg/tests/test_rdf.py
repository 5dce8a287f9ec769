import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rulescope.canonical import rewrite_antecedent, sandbox_graph
from rulescope.oracle import brute_force_bgp, naive_ucq
from rulescope.rdf import (
    Graph,
    GraphPattern,
    InvalidTripleError,
    Mapping,
    Term,
    Triple,
    TriplePattern,
    VarSubstitution,
    apply_substitution,
    evaluate_bgp,
    evaluate_ucq,
    is_valid_rdf_graph,
    lit,
    term_sets,
    uri,
    var,
)

A, B, P, Q = uri(":a"), uri(":b"), uri(":p"), uri(":q")
X, Y, Z = var("x"), var("y"), var("z")


def test_terms_compare_by_kind_and_text():
    assert uri(":a") == uri(":a")
    assert uri("a:b") != lit("a:b")
    assert var("?x") == var("x")
    with pytest.raises(ValueError):
        Term("uri", "")
    with pytest.raises(ValueError):
        Term("blank", "b0")


def test_literal_only_in_object_position():
    TriplePattern(X, P, lit("1"))
    with pytest.raises(ValueError):
        TriplePattern(lit("1"), P, X)
    with pytest.raises(ValueError):
        TriplePattern(X, lit("1"), X)
    with pytest.raises(ValueError):
        Triple(A, P, X)


def test_graph_pattern_dedups_and_ignores_order():
    g = GraphPattern([(X, P, Y), (X, P, Y), (A, Q, B)])
    assert len(g) == 2
    assert g == GraphPattern([(A, Q, B), (X, P, Y)])


def test_graph_has_set_semantics():
    g = Graph([(A, P, B), (A, P, B)])
    assert len(g) == 1
    assert Triple(A, P, B) in g


def test_term_sets(mine_rules):
    vs, cs = term_sets(mine_rules["r2"].antecedent)
    assert vs == {var("v1"), var("v2")}
    assert cs == {uri("sosa:observedProperty"), uri(":CO_Danger"), uri("sosa:hasFeatureOfInterest"),
                  uri("sosa:hasResult"), lit("1")}
    assert term_sets(GraphPattern()) == (set(), set())
    assert term_sets([(A, B, lit("c"))]) == (set(), {A, B, lit("c")})


def test_apply_substitution(mine_rules):
    out = apply_substitution({var("v2"): uri(":TunnelA")}, mine_rules["r1"].consequent)
    assert out == GraphPattern([(uri(":TunnelA"), uri("rdf:type"), uri(":TrespassedArea"))])
    p = GraphPattern([(X, P, Y)])
    assert apply_substitution({}, p) == p
    with pytest.raises(InvalidTripleError):
        apply_substitution({X: lit("l")}, GraphPattern([(X, P, uri(":o"))]))


def test_substitution_passes_unbound_variables_through():
    s = VarSubstitution({X: A})
    assert s.apply(TriplePattern(X, P, Y)) == TriplePattern(A, P, Y)


def test_mapping_rejects_variable_values():
    with pytest.raises(ValueError):
        Mapping({X: Y})


def test_evaluate_bgp_on_i1(mine_rules, i1):
    assert evaluate_bgp(mine_rules["r2"].antecedent, i1) == {
        Mapping({var("v1"): uri(":o1"), var("v2"): uri(":TunnelA")})}
    assert evaluate_bgp([(X, Q, Y)], i1) == set()
    assert evaluate_bgp([(X, uri("sosa:hasResult"), Y)], i1) == {
        Mapping({X: uri(":o1"), Y: lit("1")}),
        Mapping({X: uri(":o2"), Y: uri(":John")}),
    }


def test_ground_pattern_yields_empty_mapping():
    g = Graph([(A, P, B)])
    assert evaluate_bgp([(A, P, B)], g) == {Mapping({})}
    assert evaluate_bgp([(A, P, A)], g) == set()


def test_is_valid_rdf_graph(i1):
    assert is_valid_rdf_graph(i1)
    assert not is_valid_rdf_graph([(lit("l"), P, uri(":o"))])
    assert is_valid_rdf_graph([])


def test_ucq_on_sandbox(s1, mine_rules):
    lam = uri("lambda:l0")
    sb = sandbox_graph(s1, lam)
    q = rewrite_antecedent(mine_rules["r2"].antecedent, lam)
    assert evaluate_ucq(q, sb) == {Mapping({var("v1"): lam, var("v2"): uri(":TunnelA")})}
    assert naive_ucq(q, sb) == evaluate_ucq(q, sb)

    extended = sb | {Triple(uri(":TunnelA"), uri("rdf:type"), uri(":OffLimitArea"))}
    q1 = rewrite_antecedent(mine_rules["r1"].antecedent, lam)
    want = Mapping({var("v1"): lam, var("v2"): uri(":TunnelA"), var("v3"): lam})
    assert want in evaluate_ucq(q1, extended)
    assert naive_ucq(q1, extended) == evaluate_ucq(q1, extended)


def test_ucq_of_present_ground_triple():
    lam = uri("lambda:l0")
    g = Graph([(A, P, B)])
    assert evaluate_ucq(rewrite_antecedent([(A, P, B)], lam), g) == {Mapping({})}


def test_unknown_ucq_strategy():
    lam = uri("lambda:l0")
    with pytest.raises(ValueError):
        evaluate_ucq(rewrite_antecedent([(X, P, B)], lam), Graph(), "magic")


# -- property tests ------------------------------------------------------------

TERMS = [A, B, P, Q, lit("1")]


def random_graph(rng, n):
    out = set()
    for _ in range(n):
        out.add(Triple(rng.choice([A, B]), rng.choice([P, Q, A]), rng.choice(TERMS)))
    return Graph(out)


def random_bgp(rng, n):
    vs = [X, Y, Z]
    out = []
    for _ in range(n):
        s = rng.choice(vs + [A])
        p = rng.choice([P, Q] + vs)
        o = rng.choice(vs + TERMS)
        out.append(TriplePattern(s, p, o))
    return out


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10**6), st.integers(0, 15), st.integers(1, 3))
def test_bgp_matches_brute_force(seed, n_triples, n_patterns):
    rng = random.Random(seed)
    G = random_graph(rng, n_triples)
    bgp = random_bgp(rng, n_patterns)
    assert evaluate_bgp(bgp, G) == brute_force_bgp(bgp, G)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**6), st.integers(0, 10))
def test_bgp_is_monotone(seed, n):
    rng = random.Random(seed)
    G = random_graph(rng, n)
    bigger = G | random_graph(rng, 4)
    bgp = random_bgp(rng, 2)
    assert evaluate_bgp(bgp, G) <= evaluate_bgp(bgp, bigger)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**6))
def test_ucq_strategies_agree_with_naive_union(seed):
    rng = random.Random(seed)
    lam = uri("lambda:l0")
    G = Graph(list(random_graph(rng, 6)) + [Triple(lam, rng.choice([P, Q]), lam), Triple(A, P, lam)])
    bgp = random_bgp(rng, rng.randint(1, 2))
    q = rewrite_antecedent(bgp, lam)
    want = naive_ucq(q, G)
    assert evaluate_ucq(q, G) == want
    assert evaluate_ucq(q, G, "unions") == want


@given(st.integers(0, 10**6))
def test_substitution_idempotent(seed):
    rng = random.Random(seed)
    s = VarSubstitution({X: rng.choice([A, B]), Y: lit("1")})
    p = GraphPattern([(X, P, Y), (Z, Q, X)])
    once = apply_substitution(s, p)
    assert apply_substitution(s, once) == once
