"""Triplestore schemas: pattern sets with a no-literal variable set."""

from __future__ import annotations

import itertools
import warnings
from collections.abc import Iterable

from .rdf import (
    LITERAL,
    VARIABLE,
    Term,
    Triple,
    TriplePattern,
    _triple,
    lit,
    term_sets,
    uri,
    var,
)


class SchemaError(ValueError):
    """A schema violates the single-occurrence or no-literal invariants."""


class TriplestoreSchema:
    """A pair of triple patterns and the variables that never bind literals.

    Every variable occurs at most once in ``graph``; ``nolit`` is a subset of
    the graph's variables and contains every subject/predicate variable
    (missing ones are added with a warning).
    """

    __slots__ = ("graph", "nolit", "_h")

    def __init__(self, graph: Iterable[TriplePattern] = (), nolit: Iterable[Term] = (), *, strict: bool = False):
        patterns = {}
        for tp in graph:
            if not isinstance(tp, TriplePattern):
                tp = TriplePattern(*tp)
            patterns.setdefault(tp, None)
        self.graph = tuple(patterns)
        nolit = frozenset(nolit)

        seen = set()
        for tp in self.graph:
            for t in tp:
                if t[0] == VARIABLE:
                    if t in seen:
                        raise SchemaError(f"variable {t.n3()} occurs more than once")
                    seen.add(t)
        unknown = nolit - seen
        if unknown:
            names = " ".join(sorted(v.n3() for v in unknown))
            raise SchemaError(f"no-literal set names variables not in the schema: {names}")
        forced = {t for tp in self.graph for t in tp[:2] if t[0] == VARIABLE}
        missing = forced - nolit
        if missing:
            names = " ".join(sorted(v.n3() for v in missing))
            if strict:
                raise SchemaError(f"subject/predicate variables missing from no-literal set: {names}")
            warnings.warn(f"adding subject/predicate variables to no-literal set: {names}", stacklevel=2)
            nolit = nolit | missing
        self.nolit = nolit
        self._h = None

    @classmethod
    def _trusted(cls, graph, nolit) -> TriplestoreSchema:
        s = object.__new__(cls)
        s.graph = tuple(graph)
        s.nolit = frozenset(nolit)
        s._h = None
        return s

    def __eq__(self, other):
        if not isinstance(other, TriplestoreSchema):
            return NotImplemented
        return self.nolit == other.nolit and frozenset(self.graph) == frozenset(other.graph)

    def __hash__(self):
        if self._h is None:
            self._h = hash((frozenset(self.graph), self.nolit))
        return self._h

    def __len__(self):
        return len(self.graph)

    def __iter__(self):
        return iter(self.graph)

    def __repr__(self):
        pats = ", ".join(repr(tp) for tp in self.graph)
        nl = " ".join(sorted(v.n3() for v in self.nolit))
        return f"TriplestoreSchema({{{pats}}}, nolit={{{nl}}})"

    def variables(self) -> set[Term]:
        return term_sets(self.graph)[0]

    def constants(self) -> set[Term]:
        return term_sets(self.graph)[1]

    def union(self, patterns: Iterable[TriplePattern], nolit: Iterable[Term] = ()) -> TriplestoreSchema:
        return TriplestoreSchema(list(self.graph) + list(patterns), self.nolit | frozenset(nolit))


def models_triple(tp: TriplePattern, nolit, t) -> bool:
    """Whether pattern ``tp`` (no repeated variables) models ground triple ``t``."""
    for x, y in zip(tp, t):
        if x[0] == VARIABLE:
            if y[0] == LITERAL and x in nolit:
                return False
        elif x != y:
            return False
    return True


def is_instance(G: Iterable, S: TriplestoreSchema) -> bool:
    """Every triple of G is modeled by some pattern of S."""
    index = _PatternIndex(S.graph)
    nolit = S.nolit
    return all(any(models_triple(tp, nolit, t) for tp in index.candidates(t[1])) for t in G)


class _PatternIndex:
    """Patterns grouped by constant predicate; variable predicates kept aside."""

    __slots__ = ("by_pred", "open")

    def __init__(self, patterns=()):
        self.by_pred = {}
        self.open = []
        for tp in patterns:
            self.add(tp)

    def add(self, tp):
        if tp[1][0] == VARIABLE:
            self.open.append(tp)
        else:
            self.by_pred.setdefault(tp[1], []).append(tp)

    def candidates(self, predicate):
        if predicate[0] == VARIABLE:
            return [tp for group in self.by_pred.values() for tp in group] + self.open
        return self.by_pred.get(predicate, []) + self.open


_fresh_counter = itertools.count()


def generic_witness(tp: TriplePattern, nolit, avoid=frozenset()) -> Triple:
    """Instance triple of ``tp`` whose variable positions hold fresh constants.

    Subject, predicate and no-literal variables get a fresh URI; an object
    variable that may hold literals gets a fresh literal.
    """
    out = []
    for i, t in enumerate(tp):
        if t[0] != VARIABLE:
            out.append(t)
            continue
        as_literal = i == 2 and t not in nolit
        while True:
            k = next(_fresh_counter)
            c = lit(f"fresh_l{k}") if as_literal else uri(f"fresh:u{k}")
            if c not in avoid:
                break
        out.append(c)
    return _triple(*out)


def subsumes(general: TriplePattern, general_nolit, specific: TriplePattern, specific_nolit) -> bool:
    """Every instance triple of ``specific`` is an instance triple of ``general``."""
    w = generic_witness(specific, specific_nolit, avoid=frozenset(general))
    return models_triple(general, general_nolit, w)


def schema_contains(S1: TriplestoreSchema, S2: TriplestoreSchema) -> bool:
    """True iff every instance of S1 is an instance of S2."""
    avoid = S2.constants()
    index = _PatternIndex(S2.graph)
    for tp in S1.graph:
        w = generic_witness(tp, S1.nolit, avoid)
        if not any(models_triple(q, S2.nolit, w) for q in index.candidates(w[1])):
            return False
    return True


def schema_equiv(S1: TriplestoreSchema, S2: TriplestoreSchema) -> bool:
    return schema_contains(S1, S2) and schema_contains(S2, S1)


def _shape_key(tp: TriplePattern, nolit):
    # variable names ignored, so renamed copies sort together
    key = []
    for t in tp:
        if t[0] == VARIABLE:
            key.append(("~var", "nolit" if t in nolit else "any"))
        else:
            key.append((t[0], t[1]))
    return tuple(key)


def normalize(S: TriplestoreSchema, prefix: str = "g") -> TriplestoreSchema:
    """Drop patterns subsumed by another pattern and rename variables canonically."""
    nolit = S.nolit
    ordered = sorted(S.graph, key=lambda tp: _shape_key(tp, nolit))
    kept = []
    for i, p in enumerate(ordered):
        dominated = False
        for j, q in enumerate(ordered):
            if i == j or not subsumes(q, nolit, p, nolit):
                continue
            # strictly more general, or an equivalent pattern earlier in order
            if j < i or not subsumes(p, nolit, q, nolit):
                dominated = True
                break
        if not dominated:
            kept.append(p)

    renaming = {}
    out = []
    for tp in kept:
        terms = []
        for t in tp:
            if t[0] == VARIABLE:
                if t not in renaming:
                    renaming[t] = var(f"{prefix}{len(renaming)}")
                t = renaming[t]
            terms.append(t)
        out.append(TriplePattern(*terms))
    return TriplestoreSchema._trusted(out, {renaming[v] for v in nolit if v in renaming})


def check_schema(S: TriplestoreSchema) -> list[str]:
    """Invariant violations of an already-built schema (empty when valid)."""
    problems = []
    seen = set()
    for tp in S.graph:
        for i, t in enumerate(tp):
            if i < 2 and t[0] == LITERAL:
                problems.append(f"literal in subject/predicate of {tp!r}")
            if t[0] == VARIABLE:
                if t in seen:
                    problems.append(f"variable {t.n3()} occurs more than once")
                seen.add(t)
                if i < 2 and t not in S.nolit:
                    problems.append(f"{t.n3()} in subject/predicate but not in no-literal set")
    if not S.nolit <= seen:
        problems.append("no-literal set names unknown variables")
    return problems


__all__ = [
    "SchemaError",
    "TriplestoreSchema",
    "check_schema",
    "generic_witness",
    "is_instance",
    "models_triple",
    "normalize",
    "schema_contains",
    "schema_equiv",
    "subsumes",
]
