"""Rule applicability and schema consequences over RDF triplestore schemas."""

from .canonical import critical_instance, fresh_lambda, rewrite_antecedent, sandbox_graph, variants
from .consequence import (
    CRITICAL,
    SCORE,
    ConsequenceReport,
    FilterOutcome,
    IterationLimitExceeded,
    applicability_report,
    basic_consequence,
    compute_mappings,
    expand_schema,
    filter_mapping,
    schema_closure,
)
from .formats import (
    ParseDiagnostic,
    ParseError,
    parse_graph,
    parse_rules,
    parse_schema,
    serialize_graph,
    serialize_rules,
    serialize_schema,
)
from .rdf import Graph, GraphPattern, Mapping, Term, Triple, TriplePattern, evaluate_bgp, evaluate_ucq, lit, uri, var
from .rules import Rule, RuleError, RuleSet, apply_rule_once, closure_instance, validate_rule
from .schema import (
    SchemaError,
    TriplestoreSchema,
    is_instance,
    models_triple,
    normalize,
    schema_contains,
    schema_equiv,
)

__all__ = [
    "CRITICAL", "SCORE", "ConsequenceReport", "FilterOutcome", "Graph", "GraphPattern",
    "IterationLimitExceeded", "Mapping", "ParseDiagnostic", "ParseError", "Rule", "RuleError",
    "RuleSet", "SchemaError", "Term", "Triple", "TriplePattern", "TriplestoreSchema",
    "applicability_report", "apply_rule_once", "basic_consequence", "closure_instance",
    "compute_mappings", "critical_instance", "evaluate_bgp", "evaluate_ucq", "expand_schema",
    "filter_mapping", "fresh_lambda", "is_instance", "lit", "models_triple", "normalize",
    "parse_graph", "parse_rules", "parse_schema", "rewrite_antecedent", "sandbox_graph",
    "schema_closure", "schema_contains", "schema_equiv", "serialize_graph", "serialize_rules",
    "serialize_schema", "uri", "validate_rule", "var", "variants",
]
