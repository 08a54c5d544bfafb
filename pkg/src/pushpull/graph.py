"""
Time-varying directed communication graphs.

An edge ``(i, j)`` means node ``i`` sends to node ``j``. Self-loops are
implicit: every node is its own in- and out-neighbour, so they are never
stored and never enter path computations.
"""

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import InfeasibleGraphError, InvalidArgument


@dataclass(frozen=True)
class Digraph:
    n: int
    edges: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if self.n < 1:
            raise InvalidArgument(f"node count must be >= 1, got {self.n}")
        edges = frozenset((int(i), int(j)) for i, j in self.edges)
        arr = np.array(sorted(edges), dtype=np.int64).reshape(-1, 2)
        bad = (arr < 0) | (arr >= self.n)
        if bad.any():
            i, j = arr[np.nonzero(bad.any(axis=1))[0][0]]
            raise InvalidArgument(f"edge ({i}, {j}) outside [0, {self.n})")
        loops = arr[:, 0] == arr[:, 1]
        if loops.any():
            i = arr[np.nonzero(loops)[0][0], 0]
            raise InvalidArgument(f"explicit self-loop ({i}, {i}); self-loops are implicit")
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "_edge_array", arr)

    @classmethod
    def _from_adjacency(cls, adj):
        """Trusted constructor for generated graphs (no self-loops, in range)."""
        g = object.__new__(cls)
        arr = np.argwhere(adj)
        object.__setattr__(g, "n", adj.shape[0])
        object.__setattr__(g, "edges", frozenset(map(tuple, arr.tolist())))
        object.__setattr__(g, "_edge_array", arr)
        return g

    @cached_property
    def _adjacency(self):
        adj = np.zeros((self.n, self.n), dtype=bool)
        adj[self._edge_array[:, 0], self._edge_array[:, 1]] = True
        adj.flags.writeable = False
        return adj

    def adjacency(self):
        """Boolean matrix with ``adj[i, j]`` true iff ``i -> j``."""
        return self._adjacency.copy()

    def in_neighbors(self, i):
        return sorted(j for j, l in self.edges if l == i)

    def out_neighbors(self, i):
        return sorted(l for j, l in self.edges if j == i)

    def to_dict(self):
        return {"n": self.n, "edges": [list(e) for e in sorted(self.edges)]}

    @classmethod
    def from_dict(cls, d):
        return cls(int(d["n"]), frozenset(tuple(e) for e in d["edges"]))

    @classmethod
    def ring(cls, n):
        return cls(n, frozenset((i, (i + 1) % n) for i in range(n) if n > 1))

    @classmethod
    def complete(cls, n):
        return cls(n, frozenset((i, j) for i in range(n) for j in range(n) if i != j))


@dataclass(frozen=True)
class DigraphSequence:
    n: int
    graphs: tuple
    seed: int = 0

    def __post_init__(self):
        graphs = tuple(self.graphs)
        for k, g in enumerate(graphs):
            if g.n != self.n:
                raise InvalidArgument(f"graph {k} has n={g.n}, sequence has n={self.n}")
            if not is_strongly_connected(g):
                raise InfeasibleGraphError(f"graph {k} is not strongly connected")
        object.__setattr__(self, "graphs", graphs)

    def __len__(self):
        return len(self.graphs)

    def __getitem__(self, k):
        return self.graphs[k]

    def __iter__(self):
        return iter(self.graphs)

    @property
    def horizon(self):
        return len(self.graphs)

    def to_dict(self):
        return {"n": self.n, "seed": self.seed, "graphs": [g.to_dict() for g in self.graphs]}

    @classmethod
    def from_dict(cls, d):
        return cls(int(d["n"]), tuple(Digraph.from_dict(g) for g in d["graphs"]), int(d.get("seed", 0)))

    @classmethod
    def constant(cls, g, horizon):
        return cls(g.n, (g,) * horizon, 0)


@dataclass(frozen=True)
class GraphStats:
    diameter: int
    max_edge_utility: int
    n: int


def generate_sequence(n, horizon, extra_edge_prob, seed):
    """
    Random strongly connected graph sequence.

    Every graph holds the directed ring ``i -> i+1 (mod n)`` plus each other
    ordered pair independently with probability `extra_edge_prob`.

    Parameters
    ----------
    n : int
        Number of agents.
    horizon : int
        Number of graphs (one per iteration).
    extra_edge_prob : float
        Bernoulli probability of each non-ring ordered pair.
    seed : int
        Seed for ``numpy.random.default_rng``; equal arguments give equal
        sequences.

    Returns
    -------
    DigraphSequence
    """
    if n < 1 or horizon < 1:
        raise InvalidArgument(f"need n >= 1 and horizon >= 1, got n={n}, horizon={horizon}")
    if not 0.0 <= extra_edge_prob <= 1.0:
        raise InvalidArgument(f"extra_edge_prob must lie in [0, 1], got {extra_edge_prob}")
    rng = np.random.default_rng(seed)
    ring = np.zeros((n, n), dtype=bool)
    if n > 1:
        ring[np.arange(n), (np.arange(n) + 1) % n] = True
    off_diag = ~np.eye(n, dtype=bool)
    graphs = []
    for _ in range(horizon):
        adj = ((rng.random((n, n)) < extra_edge_prob) & off_diag) | ring
        graphs.append(Digraph._from_adjacency(adj))
    return DigraphSequence(n, tuple(graphs), seed)


def distances(g):
    """
    All-pairs shortest directed path lengths; ``-1`` marks unreachable.

    Breadth-first search from every source at once: row ``i`` of the
    frontier holds the nodes first reached from ``i`` at the current depth.
    """
    adj = g._adjacency.astype(np.int64)
    dist = np.full((g.n, g.n), -1, dtype=np.int64)
    np.fill_diagonal(dist, 0)
    seen = np.eye(g.n, dtype=bool)
    frontier = seen.astype(np.int64)
    depth = 0
    while True:
        depth += 1
        reached = ((frontier @ adj) > 0) & ~seen
        if not reached.any():
            return dist
        dist[reached] = depth
        seen |= reached
        frontier = reached.astype(np.int64)


def _reaches_all(adj):
    seen = np.zeros(adj.shape[0], dtype=bool)
    seen[0] = True
    frontier = seen.copy()
    while frontier.any():
        frontier = adj[frontier].any(axis=0) & ~seen
        seen |= frontier
    return bool(seen.all())


def is_strongly_connected(g):
    """Node 0 reaches every node and every node reaches node 0."""
    adj = g._adjacency
    return _reaches_all(adj) and _reaches_all(adj.T)


def _checked_distances(g):
    if g.n < 2:
        raise InvalidArgument("graph functionals need n >= 2")
    dist = distances(g)
    if np.any(dist < 0):
        raise InfeasibleGraphError("graph is not strongly connected")
    return dist


def diameter(g):
    return int(_checked_distances(g).max())


def edge_utilities(g, dist=None):
    """
    Number of ordered pairs ``(j, l)``, ``j != l``, having some shortest path
    through each edge.

    Returns a dict mapping edge -> count.
    """
    if dist is None:
        dist = _checked_distances(g)
    util = {}
    for u, v in g.edges:
        on_path = dist[:, u][:, None] + 1 + dist[v, :][None, :] == dist
        util[(u, v)] = int(on_path.sum())
    return util


def max_edge_utility(g):
    """
    Maximal edge-utility of `g`.

    A shortest-path covering picks one path per ordered pair independently,
    so the best covering for a given edge routes every pair that can use it
    through it. The maximum over coverings is therefore the largest per-edge
    count from :func:`edge_utilities`.
    """
    return max(edge_utilities(g).values())


def graph_stats(g):
    dist = _checked_distances(g)
    return GraphStats(int(dist.max()), max(edge_utilities(g, dist).values()), g.n)


def min_degree(g):
    """Smallest in- or out-degree over all nodes (self-loop excluded)."""
    adj = g.adjacency()
    return int(min(adj.sum(axis=0).min(), adj.sum(axis=1).min()))
