"""Line-oriented text formats for schemas, rules and graphs.

Schema files hold one triple pattern per line (``term term term .``) plus
``@nolit ?a ?b .`` lines; rule files hold ``RULE name { ... => ... }``
blocks; graph files hold ground triples. ``#`` starts a comment.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .rdf import Graph, Term, Triple, TriplePattern, lit, uri, var
from .rules import Rule, RuleSet, validate_rule
from .schema import SchemaError, TriplestoreSchema

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<comment>\#.*)
  | (?P<literal>"(?:[^"\\]|\\["\\])*")
  | (?P<var>\?[A-Za-z0-9_]+)
  | (?P<uri>[A-Za-z0-9_]*:[A-Za-z0-9_.\-]+)
  | (?P<arrow>=>)
  | (?P<lbrace>\{)
  | (?P<rbrace>\})
  | (?P<nolit>@nolit\b)
  | (?P<rule>RULE\b)
  | (?P<name>[A-Za-z0-9_\-]+)
  | (?P<dot>\.)
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class ParseDiagnostic:
    line: int
    column: int
    message: str
    severity: str = "error"

    def __str__(self):
        return f"{self.line}:{self.column}: {self.severity}: {self.message}"


class ParseError(ValueError):
    """Input rejected; ``diagnostics`` holds at least one positioned error."""

    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        self.path = None
        super().__init__("\n".join(str(d) for d in self.diagnostics))


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(text: str, diags: list) -> list[list[_Tok]]:
    lines = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        toks = []
        pos = 0
        while pos < len(raw):
            mt = _TOKEN.match(raw, pos)
            if mt is None:
                diags.append(ParseDiagnostic(lineno, pos + 1, f"unexpected character {raw[pos]!r}"))
                break
            kind = mt.lastgroup
            if kind not in ("ws", "comment"):
                tok_text = mt.group()
                # a URI swallowing the statement terminator: split the dot off
                if kind == "uri" and tok_text.endswith(".") and mt.end() == len(raw.rstrip()):
                    toks.append(_Tok(kind, tok_text[:-1], lineno, pos + 1))
                    toks.append(_Tok("dot", ".", lineno, mt.end()))
                else:
                    toks.append(_Tok(kind, tok_text, lineno, pos + 1))
            pos = mt.end()
        lines.append(toks)
    return lines


def _term(tok: _Tok) -> Term:
    if tok.kind == "uri":
        return uri(tok.text)
    if tok.kind == "var":
        return var(tok.text[1:])
    if tok.kind == "literal":
        body = tok.text[1:-1]
        return lit(re.sub(r"\\([\"\\])", r"\1", body)) if body else _empty_literal(tok)
    raise _TermError(tok, f"expected a term, found {tok.text!r}")


def _empty_literal(tok):
    raise _TermError(tok, "empty literal")


class _TermError(Exception):
    def __init__(self, tok, message):
        self.tok = tok
        self.message = message


def _triple_line(toks: list[_Tok], diags: list, allow_vars: bool = True):
    """Parse ``term term term .``; returns a TriplePattern or None after a diagnostic."""
    if len(toks) != 4 or toks[3].kind != "dot":
        at = toks[min(len(toks), 4) - 1] if toks else None
        if len(toks) == 3:
            last = toks[-1]
            diags.append(ParseDiagnostic(last.line, last.col + len(last.text), "expected '.' after triple"))
        else:
            diags.append(ParseDiagnostic(at.line, at.col, "expected 'subject predicate object .'"))
        return None
    try:
        terms = [_term(t) for t in toks[:3]]
    except _TermError as e:
        diags.append(ParseDiagnostic(e.tok.line, e.tok.col, e.message))
        return None
    for tok, t in zip(toks[:3], terms):
        if t.is_var and not allow_vars:
            diags.append(ParseDiagnostic(tok.line, tok.col, f"variable {tok.text} not allowed in a graph"))
            return None
    for pos, (tok, t) in enumerate(zip(toks[:2], terms[:2])):
        if t.is_literal:
            where = "subject" if pos == 0 else "predicate"
            diags.append(ParseDiagnostic(tok.line, tok.col, f"literal in {where} position"))
            return None
    return TriplePattern(*terms)


def parse_schema(text: str, warnings_out: list | None = None) -> TriplestoreSchema:
    """Parse a schema file. Raises ParseError; warnings go to ``warnings_out``."""
    diags = []
    patterns = []
    nolit = []
    first_seen = {}
    for toks in _tokenize(text, diags):
        if not toks:
            continue
        if toks[0].kind == "nolit":
            if toks[-1].kind != "dot":
                last = toks[-1]
                diags.append(ParseDiagnostic(last.line, last.col + len(last.text), "expected '.' after @nolit list"))
                continue
            for tok in toks[1:-1]:
                if tok.kind != "var":
                    diags.append(ParseDiagnostic(tok.line, tok.col, f"@nolit expects variables, found {tok.text!r}"))
                    continue
                nolit.append((tok, var(tok.text[1:])))
            continue
        tp = _triple_line(toks, diags)
        if tp is None:
            continue
        for tok, t in zip(toks, tp):
            if t.is_var:
                if t in first_seen:
                    diags.append(ParseDiagnostic(
                        tok.line, tok.col,
                        f"variable {t.n3()} occurs more than once (first at line {first_seen[t]})"))
                else:
                    first_seen[t] = tok.line
        patterns.append((toks[0], tp))

    for tok, v in nolit:
        if v not in first_seen:
            diags.append(ParseDiagnostic(tok.line, tok.col, f"@nolit names unknown variable {v.n3()}"))
    if any(d.severity == "error" for d in diags):
        raise ParseError(diags)

    declared = {v for _, v in nolit}
    for tok, tp in patterns:
        for pos, t in enumerate(tp[:2]):
            if t.is_var and t not in declared:
                declared.add(t)
                d = ParseDiagnostic(tok.line, tok.col,
                                    f"{t.n3()} in {'subject' if pos == 0 else 'predicate'} position "
                                    "added to @nolit", "warning")
                diags.append(d)
    if warnings_out is not None:
        warnings_out.extend(diags)
    try:
        return TriplestoreSchema([tp for _, tp in patterns], declared)
    except SchemaError as e:
        raise ParseError([ParseDiagnostic(1, 1, str(e))]) from e


def parse_rules(text: str) -> RuleSet:
    """Parse ``RULE name { antecedent => consequent }`` blocks."""
    diags = []
    rules = []
    names = {}
    block = None  # dict while inside a rule
    for toks in _tokenize(text, diags):
        i = 0
        while i < len(toks):
            tok = toks[i]
            if block is None:
                if tok.kind != "rule":
                    diags.append(ParseDiagnostic(tok.line, tok.col, f"expected 'RULE', found {tok.text!r}"))
                    break
                if i + 2 >= len(toks):
                    diags.append(ParseDiagnostic(tok.line, tok.col, "expected 'RULE <name> {'"))
                    break
                name_tok, brace = toks[i + 1], toks[i + 2]
                if name_tok.kind not in ("name", "uri") or brace.kind != "lbrace":
                    diags.append(ParseDiagnostic(name_tok.line, name_tok.col, "expected 'RULE <name> {'"))
                    break
                block = {"name": name_tok.text, "tok": tok, "ante": [], "cons": [], "arrow": False}
                i += 3
                continue
            if tok.kind == "arrow":
                if block["arrow"]:
                    diags.append(ParseDiagnostic(tok.line, tok.col, "duplicate '=>'"))
                block["arrow"] = True
                i += 1
                continue
            if tok.kind == "rbrace":
                _close_rule(block, tok, rules, names, diags)
                block = None
                i += 1
                continue
            # a triple: up to and including the next dot
            j = i
            while j < len(toks) and toks[j].kind != "dot":
                j += 1
            tp = _triple_line(toks[i:j + 1], diags)
            if tp is not None:
                (block["cons"] if block["arrow"] else block["ante"]).append(tp)
            i = j + 1
    if block is not None:
        t = block["tok"]
        diags.append(ParseDiagnostic(t.line, t.col, f"rule {block['name']!r} is missing its closing '}}'"))
    if diags:
        raise ParseError(diags)
    return RuleSet(tuple(rules))


def _close_rule(block, end_tok, rules, names, diags):
    name = block["name"]
    start = block["tok"]
    if not block["arrow"]:
        diags.append(ParseDiagnostic(end_tok.line, end_tok.col, f"rule {name!r} is missing '=>'"))
        return
    if name in names:
        diags.append(ParseDiagnostic(start.line, start.col,
                                     f"duplicate rule name {name!r} (first at line {names[name]})"))
        return
    names[name] = start.line
    r = Rule(name, block["ante"], block["cons"])
    for problem in validate_rule(r):
        diags.append(ParseDiagnostic(start.line, start.col, f"rule {name!r}: {problem}"))
    rules.append(r)


def parse_graph(text: str) -> Graph:
    """Parse a file of ground triples."""
    diags = []
    triples = []
    for toks in _tokenize(text, diags):
        if not toks:
            continue
        tp = _triple_line(toks, diags, allow_vars=False)
        if tp is not None:
            triples.append(Triple(*tp))
    if diags:
        raise ParseError(diags)
    return Graph(triples)


def _sort_key(tp):
    return tuple(t.n3() for t in tp)


def serialize_graph(G) -> str:
    return "".join(tp.n3() + "\n" for tp in sorted(G, key=_sort_key))


def serialize_schema(S: TriplestoreSchema) -> str:
    """Patterns sorted by text, then exactly one consolidated @nolit line."""
    lines = [tp.n3() for tp in sorted(S.graph, key=_sort_key)]
    nl = " ".join(sorted(v.n3() for v in S.nolit))
    lines.append(f"@nolit {nl} ." if nl else "@nolit .")
    return "\n".join(lines) + "\n"


def serialize_rules(R) -> str:
    blocks = []
    for r in R:
        body = [f"RULE {r.name} {{"]
        body += ["  " + tp.n3() for tp in r.antecedent]
        body.append("  =>")
        body += ["  " + tp.n3() for tp in r.consequent]
        body.append("}")
        blocks.append("\n".join(body))
    return "\n\n".join(blocks) + ("\n" if blocks else "")


def _load(parse, path):
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        return parse(text)
    except ParseError as e:
        e.path = str(path)
        raise


def load_schema(path) -> TriplestoreSchema:
    return _load(parse_schema, path)


def load_rules(path) -> RuleSet:
    return _load(parse_rules, path)


def load_graph(path) -> Graph:
    return _load(parse_graph, path)
