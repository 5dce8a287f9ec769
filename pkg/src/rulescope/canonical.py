"""Canonical instances of a schema: the critical instance and the sandbox graph.

Both substitute schema variables; the sandbox uses a single fresh URI for
every variable and pairs with :func:`rewrite_antecedent`, while the critical
instance enumerates every available constant.
"""

from __future__ import annotations

from collections.abc import Iterable
from itertools import combinations, product

from .rdf import (
    LITERAL,
    URI,
    VARIABLE,
    Graph,
    GraphPattern,
    Term,
    TriplePattern,
    UCQRewriting,
    _triple,
    uri,
)
from .rules import Rule
from .schema import TriplestoreSchema

LAMBDA_PREFIX = "lambda:l"


def fresh_lambda(S: TriplestoreSchema | None, consts: Iterable[Term] = ()) -> Term:
    """Smallest ``lambda:l<k>`` colliding with no constant of S or ``consts``."""
    taken = set(consts)
    if S is not None:
        taken |= S.constants()
    k = 0
    while uri(f"{LAMBDA_PREFIX}{k}") in taken:
        k += 1
    return uri(f"{LAMBDA_PREFIX}{k}")


def _antecedent(r) -> GraphPattern:
    return r.antecedent if isinstance(r, Rule) else GraphPattern(r)


def critical_instance(S: TriplestoreSchema, r, lam: Term) -> Graph:
    """Every instantiation of every schema pattern over the available constants.

    Variables take any URI from the schema, the rule antecedent and ``lam``;
    an object variable outside the no-literal set may also take any literal
    from that pool. ``r`` is a Rule or an antecedent pattern.
    """
    pool = S.constants() | _antecedent(r).constants() | {lam}
    uris = sorted(c for c in pool if c[0] == URI)
    anything = uris + sorted(c for c in pool if c[0] == LITERAL)
    out = set()
    for tp in S.graph:
        choices = []
        for i, t in enumerate(tp):
            if t[0] != VARIABLE:
                choices.append((t,))
            elif i == 2 and t not in S.nolit:
                choices.append(anything)
            else:
                choices.append(uris)
        for s, p, o in product(*choices):
            out.add(_triple(s, p, o))
    return Graph._trusted(out)


def sandbox_graph(S: TriplestoreSchema, lam: Term) -> Graph:
    """One triple per schema pattern with every variable replaced by ``lam``."""
    out = set()
    for tp in S.graph:
        out.add(_triple(*(lam if t[0] == VARIABLE else t for t in tp)))
    return Graph._trusted(out)


def sandbox_origins(S: TriplestoreSchema, lam: Term) -> dict:
    """Map each sandbox triple to the schema patterns it was built from."""
    out = {}
    for tp in S.graph:
        g = _triple(*(lam if t[0] == VARIABLE else t for t in tp))
        out.setdefault(g, []).append(tp)
    return out


def variants(tp: TriplePattern, lam: Term) -> list[TriplePattern]:
    """The 8 rewritings of ``tp``: original first, then by growing sets of replaced positions."""
    out = []
    for k in range(4):
        for positions in combinations(range(3), k):
            terms = [lam if i in positions else t for i, t in enumerate(tp)]
            out.append(tuple.__new__(TriplePattern, terms))
    return out


def rewrite_antecedent(A, lam: Term) -> UCQRewriting:
    """Expand each antecedent triple into the union of its 8 variants."""
    A = _antecedent(A)
    if lam in A.constants():
        raise ValueError(f"{lam!r} is not fresh for the antecedent")
    return UCQRewriting(A, [variants(tp, lam) for tp in A], A.variables(), lam)
