"""
Checking the error recursion step by step
=========================================

The linear rate rests on per-step inequalities between four error
quantities: optimality gap of the weighted average, dispersion around it,
tracker dispersion and iterate change. Here a run keeps every state and each
inequality is rebuilt from the measured quantities and checked.
"""

from dataclasses import replace

import numpy as np

from pushpull.analysis import quantities, verify_propositions
from pushpull.graph import generate_sequence
from pushpull.problems import ridge_problem
from pushpull.solver import SolverConfig, run

prob = ridge_problem(5, 4, 3, 0.5, seed=3)
graphs = generate_sequence(5, 300, 0.3, 1)
x0 = np.random.default_rng(0).standard_normal((5, 4))

for params in [(0.02, 0.0, 0.0), (0.02, 0.3, 0.1)]:
    rec = run(prob, graphs, SolverConfig(*params, max_iters=300), x_init=x0, keep_states=True)
    report = verify_propositions(rec, prob, *params, graphs)
    print(f"alpha, beta, gamma = {params}")
    print(f"  steps checked per inequality: {report.count('prop2')}, violations: {len(report.violations)}")
    print(f"  largest (lhs - rhs) / scale: {report.max_violation:.3e}")
    first = quantities(rec.states[0], rec.phi[0], rec.pi[0], prob.reference_optimum).vector()
    last = quantities(rec.states[-1], rec.phi[-1], rec.pi[-1], prob.reference_optimum).vector()
    print(f"  V_0   = {np.array2string(first, precision=3)}")
    print(f"  V_300 = {np.array2string(last, precision=3)}")

# Tampering with one state breaks the exact identities at once.
st = rec.states[100]
rec.states[100] = replace(st, y=st.y * 2.0)
report = verify_propositions(rec, prob, 0.02, 0.3, 0.1, graphs)
print("\nafter doubling the trackers at k=100:", sorted({v[0] for v in report.violations}))
