"""
Time-varying directed graphs
============================

Every generated graph is a directed ring under a fresh random labelling plus
a sprinkling of extra edges, so each one is strongly connected. The two
numbers that drive the analysis are the diameter and the largest number of
shortest paths that are forced through a single edge.
"""

import numpy as np

from pushpull.graph import Digraph, diameter, edge_utilities, generate_sequence, max_edge_utility
from pushpull.weights import build_column_stochastic, build_row_stochastic, phi_sequence, pi_sequence

# A plain ring is the sparsest strongly connected digraph: every shortest
# path has to walk around it.
ring = Digraph.ring(5)
print("ring(5): diameter", diameter(ring), "max edge utility", max_edge_utility(ring))

# Adding every edge collapses both numbers to one.
full = Digraph.complete(5)
print("complete(5): diameter", diameter(full), "max edge utility", max_edge_utility(full))

# Per-edge loads for a random graph
g = generate_sequence(6, 1, 0.2, seed=4)[0]
loads = edge_utilities(g)
busiest = sorted(loads.items(), key=lambda kv: -kv[1])[:3]
print("random graph with", len(g.edges), "edges; busiest edges:", busiest)

# The mixing matrices: A averages what a node pulls in, B splits what it pushes out.
A, B = build_row_stochastic(ring), build_column_stochastic(ring)
print("row sums of A:", A.sum(axis=1))
print("column sums of B:", B.sum(axis=0))

# Along a sequence the column-stochastic chain pushes the uniform vector
# forward and the row-stochastic chain pulls a uniform terminal vector back.
seq = generate_sequence(6, 40, 0.15, seed=1)
pi = pi_sequence([build_column_stochastic(h) for h in seq])
phi = phi_sequence([build_row_stochastic(h) for h in seq])
np.set_printoptions(precision=3, suppress=True)
print("pi_0  ", pi[0])
print("pi_40 ", pi[-1])
print("phi_0 ", phi[0])
print("smallest entries over the horizon:", pi.min(), phi.min())
