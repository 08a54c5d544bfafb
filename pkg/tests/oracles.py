"""Independent reference computations used only by the tests."""

import itertools

import numpy as np


def floyd_warshall(g):
    """Shortest path lengths by dynamic programming; ``inf`` when unreachable."""
    n = g.n
    d = np.full((n, n), np.inf)
    np.fill_diagonal(d, 0.0)
    for i, j in g.edges:
        d[i, j] = 1.0
    for m in range(n):
        d = np.minimum(d, d[:, [m]] + d[[m], :])
    return d


def transitive_closure(g):
    reach = np.eye(g.n, dtype=bool) | g.adjacency()
    for m in range(g.n):
        reach = reach | (reach[:, [m]] & reach[[m], :])
    return reach


def all_shortest_paths(g, src, dst):
    """Every shortest directed path from src to dst, as tuples of edges."""
    d = floyd_warshall(g)
    target = d[src, dst]
    out = []

    def extend(path, node):
        if node == dst:
            out.append(tuple(zip(path[:-1], path[1:])))
            return
        for i, j in g.edges:
            if i == node and d[src, j] == d[src, node] + 1 and d[j, dst] == target - d[src, j]:
                extend(path + [j], j)

    extend([src], src)
    return out


def covering_count(g):
    n = g.n
    total = 1
    for j, l in itertools.permutations(range(n), 2):
        total *= len(all_shortest_paths(g, j, l))
    return total


def brute_force_edge_utility(g):
    """Maximum over every shortest-path covering of its largest edge load."""
    n = g.n
    choices = [all_shortest_paths(g, j, l) for j, l in itertools.permutations(range(n), 2)]
    best = 0
    for covering in itertools.product(*choices):
        load = {}
        for path in covering:
            for e in path:
                load[e] = load.get(e, 0) + 1
        best = max(best, max(load.values()))
    return best


def char_poly_eigs(M):
    """Eigenvalues through the Faddeev-LeVerrier characteristic polynomial."""
    n = M.shape[0]
    coeffs = [1.0]
    Mk = np.zeros_like(M)
    I = np.eye(n)
    c = 1.0
    for k in range(1, n + 1):
        Mk = M @ (Mk + c * I)
        c = -np.trace(Mk) / k
        coeffs.append(c)
    return np.roots(coeffs)
