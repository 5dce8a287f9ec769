"""Compare the two canonical graphs on a growing schema.

The critical instance multiplies out every constant for every variable, the
sandbox uses one placeholder per variable. Both give the same consequence.
"""

import time

from rulescope import CRITICAL, SCORE, schema_closure, schema_equiv
from rulescope.genbench import GenParams, generate
from rulescope.canonical import critical_instance, fresh_lambda, sandbox_graph

print(f"{'|S|':>4} {'critical':>9} {'sandbox':>8} {'crit ms':>9} {'score ms':>9}  equal")
for n in (5, 10, 15, 20, 25):
    S, R = generate(GenParams.fig1(n, seed=1))
    r = R.rules[0]
    lam = fresh_lambda(S, R.constants())
    sizes = len(critical_instance(S, r, lam)), len(sandbox_graph(S, lam))

    times, outs = {}, {}
    for method in (CRITICAL, SCORE):
        t0 = time.perf_counter()
        outs[method] = schema_closure(S, R, method).output
        times[method] = (time.perf_counter() - t0) * 1000
    same = schema_equiv(outs[CRITICAL], outs[SCORE])
    print(f"{n:>4} {sizes[0]:>9} {sizes[1]:>8} {times[CRITICAL]:>9.1f} {times[SCORE]:>9.2f}  {same}")
