"""Brute-force instance-level checks for the schema-level algorithms.

Everything here works on a finite domain: the constants of the schema
(plus any extra constants supplied) and a few fresh URIs and literals.
These are bounded checks, useful for catching bugs, not proofs.
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator
from dataclasses import dataclass, field
from itertools import combinations, count, islice, product
from math import comb

from .consequence import CRITICAL, SCORE, basic_consequence
from .rdf import LITERAL, URI, VARIABLE, Graph, GraphPattern, Mapping, Term, _triple, evaluate_bgp, lit, uri
from .rules import Rule, apply_rule_once, derive
from .schema import TriplestoreSchema, is_instance, models_triple, schema_equiv


@dataclass(frozen=True)
class EnumBounds:
    domain_uris: int = 2
    domain_literals: int = 1
    max_triples: int = 5

    def __post_init__(self):
        if min(self.domain_uris, self.domain_literals, self.max_triples) < 1:
            raise ValueError("all enumeration bounds must be at least 1")


def domain(S: TriplestoreSchema, b: EnumBounds, extra_constants: Iterable[Term] = ()) -> tuple[list, list]:
    """URIs and literals available to fill schema variables, sorted."""
    consts = S.constants() | set(extra_constants)
    fresh_uris = islice((c for c in (uri(f"oracle:u{k}") for k in count()) if c not in consts), b.domain_uris)
    fresh_lits = islice((c for c in (lit(f"o{k}") for k in count()) if c not in consts), b.domain_literals)
    uris = sorted({c for c in consts if c[0] == URI} | set(fresh_uris))
    lits = sorted({c for c in consts if c[0] == LITERAL} | set(fresh_lits))
    return uris, lits


def ground_universe(S: TriplestoreSchema, b: EnumBounds, extra_constants: Iterable[Term] = ()) -> list:
    """Every ground triple some pattern of S models over the bounded domain."""
    uris, lits = domain(S, b, extra_constants)
    out = set()
    for tp in S.graph:
        choices = []
        for i, t in enumerate(tp):
            if t[0] != VARIABLE:
                choices.append((t,))
            elif i == 2 and t not in S.nolit:
                choices.append(uris + lits)
            else:
                choices.append(uris)
        out.update(_triple(*c) for c in product(*choices))
    return sorted(out, key=lambda t: tuple(x.n3() for x in t))


def enumerate_instances(S: TriplestoreSchema, b: EnumBounds,
                        extra_constants: Iterable[Term] = ()) -> Iterator[Graph]:
    """Every instance of S over the bounded domain with at most ``b.max_triples`` triples.

    Instances come out by increasing size, starting with the empty graph.
    """
    universe = ground_universe(S, b, extra_constants)
    for n in range(min(b.max_triples, len(universe)) + 1):
        for combo in combinations(universe, n):
            yield Graph._trusted(combo)


def count_instances(universe_size: int, max_triples: int) -> int:
    """Number of subsets of at most ``max_triples`` elements."""
    return sum(comb(universe_size, k) for k in range(min(max_triples, universe_size) + 1))


# -- query evaluation oracles ---------------------------------------------------

def brute_force_bgp(P: Iterable, G: Graph) -> set[Mapping]:
    """Try every assignment of G's terms to the variables of P."""
    P = GraphPattern(P)
    vs = sorted(P.variables())
    terms = sorted(G.constants())
    out = set()
    for values in product(terms, repeat=len(vs)):
        m = dict(zip(vs, values))
        ok = True
        for tp in P:
            t = tuple(m.get(x, x) if x[0] == VARIABLE else x for x in tp)
            if t not in G.triples:
                ok = False
                break
        if ok:
            out.add(Mapping._trusted(m))
    return out


def naive_ucq(Q, G: Graph) -> set[Mapping]:
    """Union of every conjunctive query of a rewriting, evaluated one by one.

    Answers that leave a query variable unbound are dropped.
    """
    out = set()
    for cq in Q.conjunctive_queries():
        for m in evaluate_bgp(cq, G):
            if set(m) == Q.query_vars:
                out.add(m)
    return out


# -- containment --------------------------------------------------------------

def family_contains(S1: TriplestoreSchema, S2: TriplestoreSchema, b: EnumBounds) -> bool:
    """Every bounded instance of S1 is an instance of S2.

    Being an instance is decided triple by triple, so a failing instance
    exists iff a failing single triple does; only instances of size one are
    enumerated.
    """
    consts = S1.constants() | S2.constants()
    b1 = EnumBounds(b.domain_uris, b.domain_literals, 1)
    return all(is_instance(G, S2) for G in enumerate_instances(S1, b1, consts))


# -- checks against rule application -----------------------------------------------------------

def check_methods_agree(S: TriplestoreSchema, r: Rule) -> bool:
    """Both methods produce equivalent basic consequences."""
    return schema_equiv(basic_consequence(S, r, SCORE), basic_consequence(S, r, CRITICAL))


@dataclass
class RuleCheckReport:
    sound: bool
    tight: bool
    exact: bool | None = None
    counterexample: tuple | None = None
    matches: int = 0
    new_patterns: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.sound and self.tight and self.exact is not False


def check_against_rules(S: TriplestoreSchema, r: Rule, b: EnumBounds = EnumBounds(),
                   exact: bool = False) -> RuleCheckReport:
    """Compare the score consequence with rule application on bounded instances.

    Derived triples depend only on the antecedent match, and applying a rule
    is monotone, so instead of every instance it is enough to look at the
    images m(A) of the antecedent matches over the ground universe of S
    (each is an instance of at most |A| triples). Rule constants join the
    domain so that antecedents mentioning them can match.

    sound: every triple of r(I) is modeled by score(S, r).
    tight: each pattern score adds to S models a triple of r(I) minus I.
    exact (optional): every ground triple of a new pattern over the domain
    is in S's universe or derived.
    """
    out = basic_consequence(S, r, SCORE)
    new_patterns = [tp for tp in out.graph if tp not in set(S.graph)]
    universe = Graph._trusted(ground_universe(S, b, r.constants()))

    report = RuleCheckReport(True, True, None, None, 0, new_patterns)
    derived_new = set()
    derived_all = set()
    for m in evaluate_bgp(r.antecedent, universe):
        I = Graph._trusted(m.apply(tp) for tp in r.antecedent)
        if len(I) > b.max_triples:
            continue
        report.matches += 1
        J = apply_rule_once(r, I)
        for t in J:
            if report.sound and not any(models_triple(p, out.nolit, t) for p in out.graph):
                report.sound = False
                report.counterexample = (I, t, None)
        derived_all |= J.triples
        derived_new |= J.triples - I.triples

    for p in new_patterns:
        if not any(models_triple(p, out.nolit, t) for t in derived_new):
            report.tight = False
            if report.counterexample is None:
                report.counterexample = (None, None, p)
            break

    if exact:
        reachable = set(universe) | derived_all
        pat_schema = TriplestoreSchema._trusted(new_patterns, out.nolit & {
            t for p in new_patterns for t in p if t[0] == VARIABLE})
        extra = r.constants()
        report.exact = all(t in reachable for t in ground_universe(pat_schema, b, S.constants() | extra))
    return report


def derived_triples(r: Rule, I: Graph) -> set:
    """Triples r adds to I (r(I) minus I)."""
    return derive(r, I) - I.triples
