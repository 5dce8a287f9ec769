"""RDF terms, triples, graphs, patterns and basic graph pattern evaluation.

Terms are plain tuples underneath so that hashing and comparison stay in C;
this matters once critical instances reach hundreds of thousands of triples.
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator, Mapping as _MappingABC
from itertools import product

URI = "uri"
LITERAL = "literal"
VARIABLE = "var"
_KINDS = (URI, LITERAL, VARIABLE)


class Term(tuple):
    """An RDF term: ``(kind, text)``.

    URIs are opaque prefixed names (``sosa:hasResult``), literals carry
    their unquoted lexical form and variables their name without ``?``.
    """

    __slots__ = ()

    def __new__(cls, kind: str, text: str):
        if kind not in _KINDS:
            raise ValueError(f"unknown term kind {kind!r}")
        if not isinstance(text, str) or not text:
            raise ValueError("term text must be a nonempty string")
        return tuple.__new__(cls, (kind, text))

    def __getnewargs__(self):
        return tuple(self)

    @property
    def kind(self) -> str:
        return self[0]

    @property
    def text(self) -> str:
        return self[1]

    @property
    def is_uri(self) -> bool:
        return self[0] == URI

    @property
    def is_literal(self) -> bool:
        return self[0] == LITERAL

    @property
    def is_var(self) -> bool:
        return self[0] == VARIABLE

    @property
    def is_const(self) -> bool:
        return self[0] != VARIABLE

    def n3(self) -> str:
        """Surface syntax used by the text formats."""
        if self[0] == VARIABLE:
            return "?" + self[1]
        if self[0] == LITERAL:
            return '"' + self[1].replace("\\", "\\\\").replace('"', '\\"') + '"'
        return self[1]

    def __repr__(self):
        return self.n3()


def uri(text: str) -> Term:
    return Term(URI, text)


def lit(text: str) -> Term:
    return Term(LITERAL, text)


def var(name: str) -> Term:
    return Term(VARIABLE, name.lstrip("?"))


class TriplePattern(tuple):
    """A triple pattern ``(subject, predicate, object)``.

    Literals are only allowed in object position.
    """

    __slots__ = ()

    def __new__(cls, s: Term, p: Term, o: Term):
        for pos, t in ((0, s), (1, p), (2, o)):
            if not isinstance(t, Term):
                raise TypeError(f"position {pos + 1}: expected Term, got {t!r}")
        if s[0] == LITERAL or p[0] == LITERAL:
            raise ValueError(f"literal in subject or predicate position: {s!r} {p!r} {o!r}")
        return tuple.__new__(cls, (s, p, o))

    def __getnewargs__(self):
        return tuple(self)

    @property
    def subject(self) -> Term:
        return self[0]

    @property
    def predicate(self) -> Term:
        return self[1]

    @property
    def object(self) -> Term:
        return self[2]

    def variables(self) -> list[Term]:
        return [t for t in self if t[0] == VARIABLE]

    def constants(self) -> list[Term]:
        return [t for t in self if t[0] != VARIABLE]

    @property
    def is_ground(self) -> bool:
        return all(t[0] != VARIABLE for t in self)

    def n3(self) -> str:
        return f"{self[0].n3()} {self[1].n3()} {self[2].n3()} ."

    def __repr__(self):
        return f"({self[0].n3()} {self[1].n3()} {self[2].n3()})"


class Triple(TriplePattern):
    """A ground RDF triple: URI subject and predicate, URI or literal object."""

    __slots__ = ()

    def __new__(cls, s: Term, p: Term, o: Term):
        self = TriplePattern.__new__(cls, s, p, o)
        if o[0] == VARIABLE or s[0] != URI or p[0] != URI:
            raise ValueError(f"not a valid RDF triple: {self!r}")
        return self


def _triple(s, p, o) -> Triple:
    # unchecked constructor for hot paths whose inputs are already valid
    return tuple.__new__(Triple, (s, p, o))


def triple(s: Term, p: Term, o: Term) -> Triple:
    return Triple(s, p, o)


def pattern(s: Term, p: Term, o: Term) -> TriplePattern:
    return TriplePattern(s, p, o)


class GraphPattern(tuple):
    """An ordered, duplicate-free collection of triple patterns.

    Order is for presentation only: equality is set-based.
    """

    __slots__ = ()

    def __new__(cls, patterns: Iterable[TriplePattern] = ()):
        seen = {}
        for tp in patterns:
            if not isinstance(tp, TriplePattern):
                tp = TriplePattern(*tp)
            seen.setdefault(tp, None)
        return tuple.__new__(cls, tuple(seen))

    def __eq__(self, other):
        if isinstance(other, GraphPattern):
            return frozenset(self) == frozenset(other)
        return NotImplemented

    def __ne__(self, other):
        eq = self.__eq__(other)
        return eq if eq is NotImplemented else not eq

    def __hash__(self):
        return hash(frozenset(self))

    def variables(self) -> set[Term]:
        return {t for tp in self for t in tp if t[0] == VARIABLE}

    def constants(self) -> set[Term]:
        return {t for tp in self for t in tp if t[0] != VARIABLE}

    def __repr__(self):
        return "{" + ", ".join(repr(tp) for tp in self) + "}"


def term_sets(p: Iterable[TriplePattern]) -> tuple[set[Term], set[Term]]:
    """Variables and constants occurring anywhere in ``p``."""
    variables, constants = set(), set()
    for tp in p:
        for t in tp:
            (variables if t[0] == VARIABLE else constants).add(t)
    return variables, constants


class Substitution(_MappingABC):
    """Immutable partial function from variables to terms."""

    __slots__ = ("_d", "_h")

    def __init__(self, bindings=None, **kw):
        d = dict(bindings or {})
        for k, v in kw.items():
            d[var(k)] = v
        for k, v in d.items():
            if not isinstance(k, Term) or k[0] != VARIABLE:
                raise TypeError(f"substitution key must be a variable, got {k!r}")
            if not isinstance(v, Term):
                raise TypeError(f"substitution value must be a Term, got {v!r}")
        self._check(d)
        self._d = d
        self._h = None

    def _check(self, d):
        pass

    @classmethod
    def _trusted(cls, d: dict):
        self = object.__new__(cls)
        self._d = d
        self._h = None
        return self

    def __getitem__(self, k):
        return self._d[k]

    def __iter__(self):
        return iter(self._d)

    def __len__(self):
        return len(self._d)

    def __hash__(self):
        if self._h is None:
            self._h = hash(frozenset(self._d.items()))
        return self._h

    def __eq__(self, other):
        if isinstance(other, Substitution):
            return self._d == other._d
        if isinstance(other, _MappingABC):
            return self._d == dict(other)
        return NotImplemented

    def __repr__(self):
        inner = ", ".join(f"{k.n3()}->{v.n3()}" for k, v in sorted(self._d.items()))
        return f"{type(self).__name__}({{{inner}}})"

    def apply_term(self, t: Term) -> Term:
        return self._d.get(t, t) if t[0] == VARIABLE else t

    def apply(self, tp: TriplePattern) -> TriplePattern:
        d = self._d
        s, p, o = (d.get(t, t) if t[0] == VARIABLE else t for t in tp)
        if s[0] == LITERAL or p[0] == LITERAL:
            raise InvalidTripleError(f"substitution places a literal in subject/predicate: ({s!r} {p!r} {o!r})")
        if s[0] != VARIABLE and p[0] != VARIABLE and o[0] != VARIABLE:
            return _triple(s, p, o)
        return tuple.__new__(TriplePattern, (s, p, o))


class VarSubstitution(Substitution):
    """Variables may map to variables, URIs or literals."""

    __slots__ = ()


class Mapping(Substitution):
    """A query solution: variables bound to URIs or literals only."""

    __slots__ = ()

    def _check(self, d):
        for k, v in d.items():
            if v[0] == VARIABLE:
                raise ValueError(f"mapping binds {k!r} to variable {v!r}")


class InvalidTripleError(ValueError):
    """A substitution produced a literal in subject or predicate position."""


def apply_substitution(s: Substitution | dict, p: Iterable[TriplePattern]) -> GraphPattern:
    """Replace every variable in the domain of ``s`` throughout ``p``.

    Raises InvalidTripleError when a literal lands in subject or predicate
    position; callers decide whether that is a rejection or a bug.
    """
    if not isinstance(s, Substitution):
        s = VarSubstitution(s)
    return GraphPattern(s.apply(tp) for tp in p)


def is_valid_rdf_graph(ts: Iterable) -> bool:
    """True iff no literal sits in subject/predicate position and no variable occurs."""
    for t in ts:
        s, p, o = t
        if s[0] != URI or p[0] != URI or o[0] == VARIABLE:
            return False
    return True


class Graph:
    """An immutable set of ground triples with lazily built lookup indexes."""

    __slots__ = ("_triples", "_index", "_h")

    def __init__(self, triples: Iterable = ()):
        ts = set()
        for t in triples:
            if type(t) is not Triple:
                t = Triple(*t)
            ts.add(t)
        self._triples = frozenset(ts)
        self._index = {}
        self._h = None

    @classmethod
    def _trusted(cls, triples) -> Graph:
        g = object.__new__(cls)
        g._triples = frozenset(triples)
        g._index = {}
        g._h = None
        return g

    @property
    def triples(self) -> frozenset:
        return self._triples

    def __contains__(self, t):
        return t in self._triples

    def __iter__(self) -> Iterator[Triple]:
        return iter(self._triples)

    def __len__(self):
        return len(self._triples)

    def __eq__(self, other):
        if isinstance(other, Graph):
            return self._triples == other._triples
        if isinstance(other, (set, frozenset)):
            return self._triples == other
        return NotImplemented

    def __hash__(self):
        if self._h is None:
            self._h = hash(self._triples)
        return self._h

    def __le__(self, other):
        return self._triples <= _as_set(other)

    def __or__(self, other) -> Graph:
        return Graph._trusted(self._triples | _as_set(other))

    def __sub__(self, other) -> Graph:
        return Graph._trusted(self._triples - _as_set(other))

    def union(self, other) -> Graph:
        return self | other

    def constants(self) -> set[Term]:
        return {x for t in self._triples for x in t}

    def sorted(self) -> list[Triple]:
        return sorted(self._triples, key=lambda t: tuple(x.n3() for x in t))

    def __repr__(self):
        return f"Graph({len(self._triples)} triples)"

    def lookup(self, positions: tuple[int, ...], values: tuple) -> list[Triple]:
        """Triples whose elements at ``positions`` equal ``values``."""
        if not positions:
            return list(self._triples)
        idx = self._index.get(positions)
        if idx is None:
            idx = {}
            for t in self._triples:
                idx.setdefault(tuple(t[i] for i in positions), []).append(t)
            self._index[positions] = idx
        return idx.get(values, ())


def _as_set(x):
    if isinstance(x, Graph):
        return x._triples
    return frozenset(x)


# -- evaluation ---------------------------------------------------------------

def _candidates(tp, graph: Graph, binding: dict, wildcard):
    positions, values = [], []
    for i, t in enumerate(tp):
        if t[0] != VARIABLE:
            positions.append(i)
            values.append(t)
        elif t in binding:
            positions.append(i)
            values.append(binding[t])
    positions = tuple(positions)
    if wildcard is None:
        return graph.lookup(positions, tuple(values))
    # every fixed position may also be matched by the wildcard constant
    out = []
    for combo in product(*[(v, wildcard) for v in values]):
        out.extend(graph.lookup(positions, combo))
    return out


def _extend(tp, g, binding: dict, wildcard):
    """Bindings added when ``tp`` is matched against triple ``g``, or None."""
    new = {}
    for t, x in zip(tp, g):
        if wildcard is not None and x == wildcard:
            continue
        if t[0] != VARIABLE:
            if t != x:
                return None
            continue
        b = binding.get(t)
        if b is None:
            b = new.get(t)
        if b is None:
            new[t] = x
        elif b != x:
            return None
    return new


def _unbound_count(tp, binding) -> int:
    return sum(1 for t in tp if t[0] == VARIABLE and t not in binding)


def _solve(patterns: list, graph: Graph, binding: dict, wildcard) -> Iterator[dict]:
    if not patterns:
        yield binding
        return
    # greedy selectivity: fewest unbound variables first
    best = min(range(len(patterns)), key=lambda i: _unbound_count(patterns[i], binding))
    tp = patterns[best]
    rest = patterns[:best] + patterns[best + 1:]
    for g in _candidates(tp, graph, binding, wildcard):
        new = _extend(tp, g, binding, wildcard)
        if new is None:
            continue
        if new:
            merged = dict(binding)
            merged.update(new)
            yield from _solve(rest, graph, merged, wildcard)
        else:
            yield from _solve(rest, graph, binding, wildcard)


def iter_bgp(patterns: Iterable[TriplePattern], graph: Graph, binding: dict | None = None) -> Iterator[dict]:
    """Yield raw solution dicts (possibly repeated) extending ``binding``."""
    yield from _solve(list(patterns), graph, dict(binding or {}), None)


def evaluate_bgp(P: Iterable[TriplePattern], G: Graph) -> set[Mapping]:
    """All mappings m with dom(m) = vars(P) and m(P) a subset of G."""
    return {Mapping._trusted(b) for b in _solve(list(P), G, {}, None)}


class UCQRewriting:
    """Conjunction over antecedent triples of 8-way disjunctions of variants.

    ``per_triple[k]`` lists the variants of the k-th antecedent triple, in
    which any subset of positions is replaced by the wildcard URI ``lam``.
    Built by :func:`rulescope.canonical.rewrite_antecedent`.
    """

    __slots__ = ("source", "per_triple", "query_vars", "lam")

    def __init__(self, source: GraphPattern, per_triple, query_vars, lam: Term):
        self.source = source
        self.per_triple = tuple(tuple(v) for v in per_triple)
        self.query_vars = frozenset(query_vars)
        self.lam = lam

    def conjunctive_queries(self) -> Iterator[GraphPattern]:
        """All 8^|A| conjunctive queries of the union (exponential, for oracles)."""
        for choice in product(*self.per_triple):
            yield GraphPattern(choice)

    def __len__(self):
        n = 1
        for v in self.per_triple:
            n *= len(v)
        return n

    def __repr__(self):
        return f"UCQRewriting({len(self.per_triple)} triples, lambda={self.lam!r})"


UCQ_STRATEGIES = ("wildcard", "unions")


def evaluate_ucq(Q: UCQRewriting, G: Graph, strategy: str = "wildcard") -> set[Mapping]:
    """Union of the rewriting's conjunctive queries over G, total mappings only.

    A disjunct that replaced every occurrence of a variable leaves it
    unbound; such answers are discarded. Nothing is lost, since the disjunct
    keeping those occurrences binds the variable to the rewriting constant.

    Rather than enumerating 8^|A| queries, the default strategy matches the
    antecedent once with the rewriting constant acting as a wildcard in the
    data: a data position holding it accepts any query element without
    binding, which is exactly the effect of choosing that position's
    rewritten variant. Variables that only ever meet the wildcard are then
    bound to it. ``strategy="unions"`` evaluates the query the way a SPARQL
    engine evaluates a join of UNION groups: each triple's variants are
    answered separately and the partial mappings joined left to right.
    """
    lam = Q.lam
    qvars = Q.query_vars
    if strategy == "unions":
        return {Mapping._trusted(b) for b in _join_unions(Q, G) if len(b) == len(qvars)}
    if strategy != "wildcard":
        raise ValueError(f"unknown UCQ strategy {strategy!r}")
    out = set()
    for b in _solve(list(Q.source), G, {}, lam):
        if len(b) != len(qvars):
            b = dict(b)
            for v in qvars:
                b.setdefault(v, lam)
        out.add(Mapping._trusted(b))
    return out


def _join_unions(Q: UCQRewriting, G: Graph) -> Iterator[dict]:
    tables = []
    for group in Q.per_triple:
        rows = set()
        for tp in group:
            for b in _solve([tp], G, {}, None):
                rows.add(frozenset(b.items()))
        tables.append([dict(r) for r in rows])
    partial = [{}]
    for rows in tables:
        joined = {}
        for a in partial:
            for b in rows:
                if all(a.get(k, v) == v for k, v in b.items()):
                    m = {**a, **b}
                    joined.setdefault(frozenset(m.items()), m)
        partial = list(joined.values())
        if not partial:
            break
    return iter(partial)
