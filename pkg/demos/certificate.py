"""
What the convergence certificate promises
=========================================

The certificate turns graph and problem constants into a 4x4 nonnegative
matrix M. If the step size and momentum parameters lie in the admissible
ranges, M has spectral radius below one and the error vector contracts
geometrically. The ranges are very conservative, so the demo uses tiny
complete graphs where they are least tight.
"""

import numpy as np

from pushpull.analysis import certify, fit_linear_rate, horizon_setup
from pushpull.graph import Digraph, DigraphSequence, generate_sequence
from pushpull.problems import ridge_problem
from pushpull.solver import SolverConfig, run

np.set_printoptions(precision=4, suppress=False)

prob = ridge_problem(3, 2, 2, 0.5, seed=1)
graphs = DigraphSequence.constant(Digraph.complete(3), 50)
setup = horizon_setup(graphs)

probe = certify(prob, graphs, 1e-12, setup=setup)
print(f"momentum must stay below kappa_max = {probe.kappa_max:.3e}")
print(f"with no momentum alpha must stay below {probe.alpha_max:.3e}")

beta = gamma = 0.5 * probe.kappa_max
alpha = 0.8 * certify(prob, graphs, 1e-12, beta, gamma, setup=setup).alpha_max
cert = certify(prob, graphs, alpha, beta, gamma, setup=setup)
print(f"\nalpha={alpha:.3e} beta=gamma={beta:.3e}: verdict {cert.verdict}")
print("M =\n", cert.M)
print(f"rho(M) = {cert.rho_M:.8f}, det(I - M) = {cert.det_I_minus_M:.3e}")

rec = run(prob, DigraphSequence.constant(Digraph.complete(3), 3000), SolverConfig(alpha, beta, gamma, max_iters=3000))
print(f"simulated rate {fit_linear_rate(rec['residual'])[0]:.8f} (the certificate only bounds it)")

# Push momentum past the range and the certificate declines to promise anything,
# even though the iteration itself may still converge.
bad = certify(prob, graphs, alpha, 2 * probe.kappa_max, 0.0, setup=setup)
print(f"\nbeta = 2 kappa_max: verdict {bad.verdict}, empty alpha range {bad.ranges.empty}")

# On a sparse random network the constants are far worse.
ring_like = generate_sequence(5, 100, 0.3, 1)
loose = certify(ridge_problem(5, 4, 3, 0.5, seed=3), ring_like, 1e-12)
print(f"n=5 random network: alpha_max {loose.alpha_max:.2e}, kappa_max {loose.kappa_max:.2e}")
