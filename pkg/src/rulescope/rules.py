"""Inference rules and their instance-level semantics."""

from __future__ import annotations

from collections import Counter
from collections.abc import Iterable
from dataclasses import dataclass, field

from .rdf import (
    URI,
    VARIABLE,
    Graph,
    GraphPattern,
    _solve,
    _triple,
)


class RuleError(ValueError):
    """A rule or rule set violates its invariants."""


@dataclass(frozen=True)
class Rule:
    name: str
    antecedent: GraphPattern
    consequent: GraphPattern

    def __post_init__(self):
        if not isinstance(self.antecedent, GraphPattern):
            object.__setattr__(self, "antecedent", GraphPattern(self.antecedent))
        if not isinstance(self.consequent, GraphPattern):
            object.__setattr__(self, "consequent", GraphPattern(self.consequent))

    def constants(self) -> set:
        return self.antecedent.constants() | self.consequent.constants()

    def __str__(self):
        return f"{self.name}: {self.antecedent!r} -> {self.consequent!r}"


def validate_rule(r: Rule) -> list[str]:
    """Every violated rule invariant, as messages; empty when the rule is fine."""
    problems = []
    if not r.name:
        problems.append("empty rule name")
    if not r.antecedent:
        problems.append("empty antecedent")
    if not r.consequent:
        problems.append("empty consequent")
    unsafe = r.consequent.variables() - r.antecedent.variables()
    for v in sorted(unsafe):
        problems.append(f"unsafe variable {v.n3()} in consequent")
    seen = set()
    repeated = set()
    for tp in r.consequent:
        for t in tp:
            if t[0] == VARIABLE:
                if t in seen:
                    repeated.add(t)
                seen.add(t)
    for v in sorted(repeated):
        problems.append(f"variable {v.n3()} repeated in consequent")
    return problems


def check_rule(r: Rule) -> None:
    problems = validate_rule(r)
    if problems:
        raise RuleError(f"rule {r.name!r}: " + "; ".join(problems))


@dataclass(frozen=True)
class RuleSet:
    rules: tuple = field(default_factory=tuple)

    def __post_init__(self):
        rules = tuple(self.rules)
        object.__setattr__(self, "rules", rules)
        names = Counter(r.name for r in rules)
        dups = sorted(n for n, c in names.items() if c > 1)
        if dups:
            raise RuleError(f"duplicate rule names: {', '.join(dups)}")

    def __iter__(self):
        return iter(self.rules)

    def __len__(self):
        return len(self.rules)

    def __getitem__(self, name: str) -> Rule:
        for r in self.rules:
            if r.name == name:
                return r
        raise KeyError(name)

    def names(self) -> list[str]:
        return [r.name for r in self.rules]

    def without(self, name: str) -> RuleSet:
        return RuleSet(tuple(r for r in self.rules if r.name != name))

    def constants(self) -> set:
        out = set()
        for r in self.rules:
            out |= r.constants()
        return out


def _instantiate(consequent, binding: dict):
    out = []
    for tp in consequent:
        s, p, o = (binding.get(t, t) if t[0] == VARIABLE else t for t in tp)
        if s[0] != URI or p[0] != URI or o[0] == VARIABLE:
            return None
        out.append(_triple(s, p, o))
    return out


def derive(r: Rule, I: Graph, stats: Counter | None = None) -> set:
    """Triples m(C) for every antecedent match m whose instantiation is valid RDF."""
    out = set()
    seen = set()
    for b in _solve(list(r.antecedent), I, {}, None):
        key = frozenset(b.items())
        if key in seen:
            continue
        seen.add(key)
        ts = _instantiate(r.consequent, b)
        if ts is None:
            if stats is not None:
                stats["skipped"] += 1
            continue
        out.update(ts)
    return out


def apply_rule_once(r: Rule, I: Graph, stats: Counter | None = None) -> Graph:
    """``I`` plus ``m(C)`` for each match ``m`` of the antecedent in ``I``.

    Instantiations that would put a literal in subject or predicate position
    are skipped; pass a Counter as ``stats`` to count them under "skipped".
    """
    return Graph._trusted(I.triples | derive(r, I, stats))


def closure_instance(I: Graph, R: Iterable[Rule], strategy: str = "naive",
                     stats: Counter | None = None) -> Graph:
    """Least fixpoint of applying every rule of R to I.

    ``strategy="seminaive"`` only re-evaluates antecedents that touch triples
    derived in the previous round; it returns the same graph.
    """
    rules = list(R)
    if strategy == "naive":
        current = I
        while True:
            new = set()
            for r in rules:
                new |= derive(r, current, stats)
            if new <= current.triples:
                return current
            current = Graph._trusted(current.triples | new)
    if strategy != "seminaive":
        raise ValueError(f"unknown strategy {strategy!r}")

    current = set(I.triples)
    delta = set(current)
    while delta:
        full = Graph._trusted(current)
        dgraph = Graph._trusted(delta)
        new = set()
        for r in rules:
            new |= _derive_touching(r, full, dgraph, stats)
        delta = new - current
        current |= delta
    return Graph._trusted(current)


def _derive_touching(r: Rule, full: Graph, delta: Graph, stats) -> set:
    ante = list(r.antecedent)
    out = set()
    seen = set()
    for j, tp in enumerate(ante):
        rest = ante[:j] + ante[j + 1:]
        for seed in _solve([tp], delta, {}, None):
            for b in _solve(rest, full, seed, None):
                key = frozenset(b.items())
                if key in seen:
                    continue
                seen.add(key)
                ts = _instantiate(r.consequent, b)
                if ts is None:
                    if stats is not None:
                        stats["skipped"] += 1
                    continue
                out.update(ts)
    return out


__all__ = [
    "Rule",
    "RuleError",
    "RuleSet",
    "apply_rule_once",
    "check_rule",
    "closure_instance",
    "derive",
    "validate_rule",
]
