"""The mine-monitoring example: a sensor schema, two rules, and what they imply.

Run with ``python3 demos/running_example.py``.
"""

from importlib import resources

from rulescope import SCORE, applicability_report, schema_closure
from rulescope.formats import load_graph, load_rules, load_schema
from rulescope.formats import serialize_graph, serialize_schema
from rulescope.rules import closure_instance

data = resources.files("rulescope") / "data"
S = load_schema(data / "s1.schema")
R = load_rules(data / "mine.rules")
I = load_graph(data / "i1.graph")

print("schema:")
print(serialize_schema(S))

rep = schema_closure(S, R, SCORE)
print(f"closed in {rep.iterations} rounds; new patterns:")
for tp in sorted(set(rep.output.graph) - set(S.graph)):
    print("  ", tp)

print("\napplicable:", applicability_report(S, R))

# The instance-level view: the same two facts show up on a concrete graph.
print("\nclosure of the sample graph:")
print(serialize_graph(closure_instance(I, R)))
