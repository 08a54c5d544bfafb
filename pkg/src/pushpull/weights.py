"""
Mixing matrices aligned with a directed graph, and the stochastic vector
sequences absorbed by the row-stochastic chain (backward) and propagated by
the column-stochastic chain (forward).

Vector sequences are returned as ``(T + 1, n)`` arrays whose row ``k`` is
the vector at iteration ``k``.
"""

from dataclasses import dataclass

import numpy as np

from .errors import InvalidMatrixError

STOCHASTIC_TOL = 1e-12


@dataclass(frozen=True)
class MixingPair:
    A: np.ndarray
    B: np.ndarray
    a_min: float
    b_min: float
    graph_index: int = 0

    def to_dict(self):
        n = self.A.shape[0]
        return {
            "row": {"n": n, "kind": "row", "k": self.graph_index, "data": self.A.tolist()},
            "col": {"n": n, "kind": "col", "k": self.graph_index, "data": self.B.tolist()},
        }


def min_positive(m):
    return float(m[m > 0].min())


def build_row_stochastic(g):
    """``A[i, j] = 1 / (|N_in(i)| + 1)`` on the in-neighbourhood of ``i`` plus ``i``."""
    support = g.adjacency().T | np.eye(g.n, dtype=bool)
    return support / support.sum(axis=1, keepdims=True)


def build_column_stochastic(g):
    """``B[j, i] = 1 / (|N_out(i)| + 1)`` on the out-neighbourhood of ``i`` plus ``i``."""
    support = g.adjacency().T | np.eye(g.n, dtype=bool)
    return support / support.sum(axis=0, keepdims=True)


def mixing_pair(g, k=0):
    A = build_row_stochastic(g)
    B = build_column_stochastic(g)
    return MixingPair(A, B, min_positive(A), min_positive(B), k)


def mixing_sequence(graphs):
    # a repeated graph object shares its matrices
    seen, out = {}, []
    for k, g in enumerate(graphs):
        base = seen.get(id(g))
        if base is None:
            base = seen[id(g)] = mixing_pair(g)
        out.append(MixingPair(base.A, base.B, base.a_min, base.b_min, k))
    return out


def _check_all(ms, axis, kind):
    if not ms:
        return
    stack = np.stack(ms)
    bad = np.any(stack < 0, axis=(1, 2)) | np.any(np.abs(stack.sum(axis=axis + 1) - 1.0) > STOCHASTIC_TOL, axis=1)
    if bad.any():
        raise InvalidMatrixError(f"matrix {int(np.argmax(bad))} is not {kind}-stochastic")


def pi_sequence(Bs):
    """
    Forward sequence ``pi_{k+1} = B_k pi_k`` from the uniform vector.

    Parameters
    ----------
    Bs : sequence of ndarray
        Column-stochastic matrices ``B_0, ..., B_{T-1}``.

    Returns
    -------
    ndarray of shape (T + 1, n)
    """
    Bs = [np.asarray(B, dtype=float) for B in Bs]
    _check_all(Bs, 0, "column")
    n = Bs[0].shape[0] if Bs else 1
    out = np.empty((len(Bs) + 1, n))
    out[0] = 1.0 / n
    for k, B in enumerate(Bs):
        out[k + 1] = B @ out[k]
    return out


def phi_sequence(As, terminal=None):
    """
    Backward sequence with ``phi_{k+1}^T A_k = phi_k^T`` ending at `terminal`.

    The terminal vector defaults to uniform. Only the weighted averages and
    norms of the analysis depend on this choice, never the iterates.
    """
    As = [np.asarray(A, dtype=float) for A in As]
    _check_all(As, 1, "row")
    n = As[0].shape[0] if As else len(terminal)
    if terminal is None:
        terminal = np.full(n, 1.0 / n)
    terminal = np.asarray(terminal, dtype=float)
    if np.any(terminal < 0) or abs(terminal.sum() - 1.0) > STOCHASTIC_TOL:
        raise InvalidMatrixError("terminal vector is not stochastic")
    out = np.empty((len(As) + 1, n))
    out[-1] = terminal
    for k in range(len(As) - 1, -1, -1):
        out[k] = As[k].T @ out[k + 1]
    return out


def lower_bound(min_entry, n):
    """Uniform entry bound ``m**n / n`` for either vector sequence."""
    return min_entry**n / n
