"""Schema consequences: which rules apply to a schema and what they add to it.

Two interchangeable methods compute the antecedent mappings of a rule over a
schema. ``critical`` evaluates the antecedent on the critical instance;
``score`` evaluates the 8-way rewriting of the antecedent on the much smaller
sandbox graph. Both feed the same filtering and expansion steps.
"""

from __future__ import annotations

import logging
from collections.abc import Iterable
from dataclasses import dataclass, field

from .canonical import critical_instance, fresh_lambda, rewrite_antecedent, sandbox_graph, variants
from .rdf import (
    LITERAL,
    VARIABLE,
    Graph,
    GraphPattern,
    InvalidTripleError,
    Mapping,
    Term,
    TriplePattern,
    evaluate_bgp,
    evaluate_ucq,
    var,
)
from .rules import Rule, RuleSet, check_rule
from .schema import TriplestoreSchema, _PatternIndex, generic_witness, models_triple

log = logging.getLogger(__name__)

SCORE = "score"
CRITICAL = "critical"
METHODS = (SCORE, CRITICAL)


class IterationLimitExceeded(RuntimeError):
    """The closure did not reach a fixpoint within the iteration guard."""


@dataclass(frozen=True)
class FilterOutcome:
    accepted: bool
    delta_m: frozenset = frozenset()


@dataclass
class ConsequenceReport:
    output: TriplestoreSchema
    applicable: dict
    iterations: int
    method: str
    added: list = field(default_factory=list)


class FreshVars:
    """Generates ``?g<k>`` names never handed out before and not in ``taken``."""

    def __init__(self, taken: Iterable[Term] = (), prefix: str = "g"):
        self.prefix = prefix
        self.taken = {t for t in taken}
        self.k = 0

    def __call__(self) -> Term:
        while True:
            v = var(f"{self.prefix}{self.k}")
            self.k += 1
            if v not in self.taken:
                self.taken.add(v)
                return v


def _check_method(method: str):
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")


def canonical_instance(S: TriplestoreSchema, r: Rule, method: str, lam: Term) -> Graph:
    _check_method(method)
    if method == CRITICAL:
        return critical_instance(S, r, lam)
    return sandbox_graph(S, lam)


def compute_mappings(S: TriplestoreSchema, r: Rule, method: str, lam: Term,
                     canonical: Graph | None = None, ucq: str = "wildcard") -> set[Mapping]:
    """Antecedent mappings over the method's canonical instance, all total on vars(A).

    ``ucq`` picks how score evaluates the rewriting (see :func:`evaluate_ucq`).
    """
    if canonical is None:
        canonical = canonical_instance(S, r, method, lam)
    if method == CRITICAL:
        return evaluate_bgp(r.antecedent, canonical)
    return evaluate_ucq(rewrite_antecedent(r.antecedent, lam), canonical, ucq)


def _structural_nolit(r: Rule) -> set:
    # variables in subject/predicate position of A or C can never be literals
    return {t for tp in (*r.antecedent, *r.consequent) for t in tp[:2] if t[0] == VARIABLE}


def _ground(m: Mapping, tp: TriplePattern):
    try:
        return m.apply(tp)
    except InvalidTripleError:
        return None


class _Filter:
    """Mapping filter for one (schema, rule, method) with a per-triple cache."""

    def __init__(self, S: TriplestoreSchema, r: Rule, method: str, lam: Term, canonical: Graph,
                 index: _PatternIndex | None = None):
        _check_method(method)
        self.S = S
        self.r = r
        self.method = method
        self.lam = lam
        self.canonical = canonical
        self.index = index or _PatternIndex(S.graph)
        self.base = frozenset(_structural_nolit(r))
        self.rewritings = [[tp] if method == CRITICAL else variants(tp, lam) for tp in r.antecedent]
        self.cache = {}

    def _enablers(self, k: int, m: Mapping) -> list:
        """Schema patterns modeling some rewriting of antecedent triple k under m."""
        nolit = self.S.nolit
        out = {}
        for tq in self.rewritings[k]:
            g = _ground(m, tq)
            if g is None or g not in self.canonical:
                continue
            for ts in self.index.candidates(g[1]):
                if models_triple(ts, nolit, g):
                    out[ts] = None
        return list(out)

    def _triple_verdict(self, k: int, tA: TriplePattern, m: Mapping):
        """(reject, adds_to_delta) for antecedent triple k."""
        key = (k, tuple(m[t] if t[0] == VARIABLE else t for t in tA))
        hit = self.cache.get(key)
        if hit is not None:
            return hit
        obj = tA[2]
        val = m[obj] if obj[0] == VARIABLE else obj
        nolit = self.S.nolit
        verdict = (False, False)
        if val[0] == LITERAL:
            ok = any(ts[2] == val or (ts[2][0] == VARIABLE and ts[2] not in nolit)
                     for ts in self._enablers(k, m))
            verdict = (not ok, False)
        elif obj[0] == VARIABLE and val == self.lam:
            allows = any(ts[2][0] == VARIABLE and ts[2] not in nolit for ts in self._enablers(k, m))
            verdict = (False, not allows)
        self.cache[key] = verdict
        return verdict

    def __call__(self, m: Mapping) -> FilterOutcome:
        delta = set(self.base)
        for k, tA in enumerate(self.r.antecedent):
            reject, add = self._triple_verdict(k, tA, m)
            if reject:
                return FilterOutcome(False)
            if add:
                delta.add(tA[2])
        for v in delta:
            val = m.get(v)
            if val is not None and val[0] == LITERAL:
                return FilterOutcome(False)
        return FilterOutcome(True, frozenset(delta))


def filter_mapping(m: Mapping, r: Rule, S: TriplestoreSchema, method: str, lam: Term,
                   canonical: Graph | None = None) -> FilterOutcome:
    """Decide whether ``m`` survives the literal checks, and compute its no-literal set.

    Starts from the rule's subject/predicate variables. For every antecedent
    triple, looks at the schema patterns that model one of its rewritings
    (just the triple itself for ``critical``) as grounded by ``m`` in the
    canonical instance. A literal object needs a pattern with that literal or
    a literal-friendly object variable, else ``m`` is rejected; an object
    variable bound to the fresh URI joins the no-literal set unless such a
    variable exists. Finally ``m`` is rejected if it binds a no-literal
    variable to a literal.
    """
    if canonical is None:
        canonical = canonical_instance(S, r, method, lam)
    return _Filter(S, r, method, lam, canonical)(m)


def _expansion(m: Mapping, delta_m, C: GraphPattern, lam: Term, fresh) -> tuple[list, set]:
    subst = {}
    for v in C.variables():
        val = m[v]
        subst[v] = fresh() if val == lam else val
    new = []
    for tp in C:
        new.append(TriplePattern(*(subst[t] if t[0] == VARIABLE else t for t in tp)))
    nolit = {subst[v] for v in delta_m if v in subst and subst[v][0] == VARIABLE}
    return new, nolit


class _SchemaBuilder:
    """Accumulates patterns, skipping any subsumed by one already present."""

    def __init__(self, S: TriplestoreSchema):
        self.graph = list(S.graph)
        self.nolit = set(S.nolit)
        self.index = _PatternIndex(self.graph)
        self.consts = {t for tp in self.graph for t in tp if t[0] != VARIABLE}

    def subsumed(self, tp: TriplePattern, tp_nolit) -> bool:
        w = generic_witness(tp, tp_nolit, avoid=self.consts)
        nolit = self.nolit
        return any(models_triple(q, nolit, w) for q in self.index.candidates(w[1]))

    def add(self, tp: TriplePattern, tp_nolit) -> bool:
        if self.subsumed(tp, tp_nolit):
            return False
        self.graph.append(tp)
        self.consts.update(t for t in tp if t[0] != VARIABLE)
        self.index.add(tp)
        self.nolit.update(v for v in tp if v in tp_nolit)
        return True

    def schema(self) -> TriplestoreSchema:
        return TriplestoreSchema._trusted(self.graph, self.nolit)


def expand_schema(Sacc: TriplestoreSchema, m: Mapping, delta_m, C: GraphPattern, lam: Term,
                  fresh=None) -> TriplestoreSchema:
    """Add the consequent instantiated by ``m`` to ``Sacc``.

    Bindings to the fresh URI become brand-new variables; those coming from
    ``delta_m`` join the no-literal set. Patterns already subsumed by
    ``Sacc`` are not added.
    """
    if fresh is None:
        fresh = FreshVars(Sacc.variables())
    new, nolit = _expansion(m, delta_m, GraphPattern(C), lam, fresh)
    b = _SchemaBuilder(Sacc)
    for tp in new:
        b.add(tp, nolit)
    return b.schema()


def _consequence_items(S: TriplestoreSchema, r: Rule, method: str, lam: Term, fresh,
                       index: _PatternIndex | None = None, canonical: Graph | None = None,
                       ucq: str = "wildcard") -> tuple[bool, list]:
    """Accepted flag and the (patterns, nolit) produced by every accepted mapping."""
    if canonical is None:
        canonical = canonical_instance(S, r, method, lam)
    mappings = compute_mappings(S, r, method, lam, canonical, ucq)
    filt = _Filter(S, r, method, lam, canonical, index)
    applicable = False
    items = []
    for m in sorted(mappings, key=_mapping_key):
        outcome = filt(m)
        if not outcome.accepted:
            continue
        applicable = True
        items.append(_expansion(m, outcome.delta_m, r.consequent, lam, fresh))
    return applicable, items


def _mapping_key(m: Mapping):
    # deterministic processing order, so fresh variable names are reproducible
    return sorted((k[1], v[0], v[1]) for k, v in m.items())


def basic_consequence(S: TriplestoreSchema, r: Rule, method: str = SCORE, lam: Term | None = None,
                      fresh=None, ucq: str = "wildcard") -> TriplestoreSchema:
    """One-step schema consequence of ``S`` under rule ``r``."""
    _check_method(method)
    check_rule(r)
    if lam is None:
        lam = fresh_lambda(S, r.constants())
    if fresh is None:
        fresh = FreshVars(S.variables())
    _, items = _consequence_items(S, r, method, lam, fresh, ucq=ucq)
    b = _SchemaBuilder(S)
    for new, nolit in items:
        for tp in new:
            b.add(tp, nolit)
    return b.schema()


def is_applicable_on(S: TriplestoreSchema, r: Rule, method: str = SCORE, lam: Term | None = None,
                     ucq: str = "wildcard") -> bool:
    """Whether some mapping of r's antecedent over S survives filtering."""
    _check_method(method)
    if lam is None:
        lam = fresh_lambda(S, r.constants())
    canonical = canonical_instance(S, r, method, lam)
    filt = _Filter(S, r, method, lam, canonical)
    return any(filt(m).accepted for m in compute_mappings(S, r, method, lam, canonical, ucq))


def default_iteration_limit(S: TriplestoreSchema, R: RuleSet) -> int:
    consts = S.constants() | R.constants()
    return 10 * (len(S.graph) + len(R)) * (1 + len(consts)) ** 3


def schema_closure(S: TriplestoreSchema, R: Iterable[Rule], method: str = SCORE,
                   max_iterations: int | None = None, ucq: str = "wildcard") -> ConsequenceReport:
    """Iterate basic consequences of every rule until the schema stops growing.

    Each round applies all rules to the schema of the previous round and
    merges the new patterns. A round that adds nothing (every new pattern
    is subsumed) is the fixpoint. ``applicable`` records, per rule, whether
    any of its mappings was accepted during this joint closure.
    """
    _check_method(method)
    R = R if isinstance(R, RuleSet) else RuleSet(tuple(R))
    for r in R:
        check_rule(r)
    lam = fresh_lambda(S, R.constants())
    fresh = FreshVars(S.variables())
    limit = default_iteration_limit(S, R) if max_iterations is None else max_iterations
    builder = _SchemaBuilder(S)
    current = S
    applicable = {r.name: False for r in R}
    added_log = []
    iterations = 0
    while True:
        iterations += 1
        if iterations > limit:
            raise IterationLimitExceeded(f"no fixpoint after {limit} iterations")
        index = _PatternIndex(current.graph)
        # the sandbox does not depend on the rule, so build it once per round
        shared = sandbox_graph(current, lam) if method == SCORE else None
        round_items = []
        for r in R:
            ok, items = _consequence_items(current, r, method, lam, fresh, index, shared, ucq)
            applicable[r.name] = applicable[r.name] or ok
            round_items.extend(items)
        added = 0
        for new, nolit in round_items:
            for tp in new:
                if builder.add(tp, nolit):
                    added += 1
                    added_log.append(tp)
        log.debug("closure round %d (%s): %d new patterns", iterations, method, added)
        if not added:
            break
        current = builder.schema()
    return ConsequenceReport(current, applicable, iterations, method, added_log)


def applicability_report(S: TriplestoreSchema, R: Iterable[Rule], method: str = SCORE,
                         fast: bool = False, ucq: str = "wildcard") -> dict:
    """Rule name to whether the rule can fire on some instance of S.

    A rule counts as applicable when its antecedent has an accepted mapping
    over the closure of S under all the other rules, which costs one closure
    per rule. ``fast=True`` instead reports what was observed during a
    single joint closure. The answers agree: a rule first fires on a schema
    that none of its own output has reached yet.
    """
    R = R if isinstance(R, RuleSet) else RuleSet(tuple(R))
    if fast:
        return schema_closure(S, R, method, ucq=ucq).applicable
    out = {}
    for r in R:
        others = R.without(r.name)
        F = schema_closure(S, others, method, ucq=ucq).output if len(others) else S
        out[r.name] = is_applicable_on(F, r, method, ucq=ucq)
    return out
