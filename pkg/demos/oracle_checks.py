"""Check the schema-level answers against brute-force rule application.

For a handful of generated cases, enumerate small instances, apply each
rule, and confirm the consequence schema covers exactly what appears.
"""

from rulescope.genbench import GenParams, generate
from rulescope.oracle import EnumBounds, check_methods_agree, check_against_rules

bounds = EnumBounds(domain_uris=2, domain_literals=1, max_triples=5)
for seed in range(10):
    S, R = generate(GenParams(pi_c=0.2, n_p=3, n_u=3, n_l=2, n_s=5, n_r=2, n_a=2, seed=seed))
    for r in R:
        rep = check_against_rules(S, r, bounds, exact=True)
        print(f"seed {seed} {r.name}: methods agree={check_methods_agree(S, r)} "
              f"sound={rep.sound} tight={rep.tight} exact={rep.exact} "
              f"matches={rep.matches} new={len(rep.new_patterns)}")
