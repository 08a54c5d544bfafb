"""
Accelerated AB/Push-Pull iteration over a time-varying directed graph.

Each agent keeps a decision ``x``, its previous value, an extrapolated point
``s`` where gradients are taken and a tracker ``y`` of the global gradient:

    x_{k+1} = A_k s_k - alpha y_k + beta (x_k - x_{k-1})
    s_{k+1} = x_{k+1} + gamma (x_{k+1} - x_k)
    y_{k+1} = B_k y_k + grad(s_{k+1}) - grad(s_k)

State arrays are ``(n, p)`` with one row per agent.
"""

import csv
import io
import json
import time
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from .errors import DivergenceError, InvalidArgument
from .weights import mixing_sequence, phi_sequence, pi_sequence

MODES = {
    (False, False): "plain",
    (True, False): "heavy-ball",
    (False, True): "nesterov",
    (True, True): "combined",
}

METRIC_COLUMNS = (
    "k",
    "residual",
    "optimality_gap",
    "consensus_D",
    "state_diff",
    "tracking_S",
    "consensus_error",
    "tracking_deviation",
)


@dataclass(frozen=True)
class SolverConfig:
    alpha: float
    beta: float = 0.0
    gamma: float = 0.0
    max_iters: int = 1000
    stop_tolerance: float = None
    log_stride: int = 1
    stop_metric: str = "consensus"

    def __post_init__(self):
        if not self.alpha > 0:
            raise InvalidArgument(f"alpha must be > 0, got {self.alpha}")
        if self.beta < 0 or self.gamma < 0:
            raise InvalidArgument(f"beta and gamma must be >= 0, got {self.beta}, {self.gamma}")
        if self.max_iters < 0 or self.log_stride < 1:
            raise InvalidArgument("max_iters must be >= 0 and log_stride >= 1")
        if self.stop_metric not in ("consensus", "residual"):
            raise InvalidArgument(f"stop_metric must be 'consensus' or 'residual', got {self.stop_metric!r}")

    @property
    def mode(self):
        return MODES[(self.beta > 0, self.gamma > 0)]


@dataclass(frozen=True)
class AgentSwarm:
    x: np.ndarray
    x_prev: np.ndarray
    s: np.ndarray
    y: np.ndarray
    grad_s: np.ndarray
    k: int = 0

    @property
    def n(self):
        return self.x.shape[0]


def init(problem, x_init=None, x_init_prev=None, s_init=None):
    """
    Initial swarm with ``y_0 = grad f_i(s_0)``.

    ``x_{-1}`` defaults to ``x_0`` and ``s_0`` defaults to ``x_0``, which keeps
    ``s_k - x_k = gamma (x_k - x_{k-1})`` true from the first iteration.
    """
    shape = (problem.n, problem.dimension)
    x = np.zeros(shape) if x_init is None else np.array(x_init, dtype=float)
    x_prev = x.copy() if x_init_prev is None else np.array(x_init_prev, dtype=float)
    s = x.copy() if s_init is None else np.array(s_init, dtype=float)
    for name, arr in (("x_init", x), ("x_init_prev", x_prev), ("s_init", s)):
        if arr.shape != shape:
            raise InvalidArgument(f"{name} has shape {arr.shape}, expected {shape}")
    grad = problem.gradients(s)
    return AgentSwarm(x, x_prev, s, grad.copy(), grad, 0)


def step(swarm, mix, cfg, problem):
    """One synchronous round of all agents."""
    if mix.A.shape != (swarm.n, swarm.n):
        raise InvalidArgument(f"mixing matrices are {mix.A.shape}, swarm has {swarm.n} agents")
    x_new = mix.A @ swarm.s - cfg.alpha * swarm.y + cfg.beta * (swarm.x - swarm.x_prev)
    s_new = x_new + cfg.gamma * (x_new - swarm.x)
    grad_new = problem.gradients(s_new)
    y_new = mix.B @ swarm.y + grad_new - swarm.grad_s
    # one reduction covers the common all-finite case
    total = x_new.sum() + s_new.sum() + y_new.sum()
    for name, arr in () if np.isfinite(total) else (("x", x_new), ("s", s_new), ("y", y_new)):
        bad = ~np.isfinite(arr)
        if bad.any():
            agent = int(np.argwhere(bad)[0][0])
            raise DivergenceError(
                f"non-finite {name} at iteration {swarm.k + 1}, agent {agent}",
                iteration=swarm.k + 1,
                agent=agent,
                quantity=name,
            )
    return AgentSwarm(x_new, swarm.x, s_new, y_new, grad_new, swarm.k + 1)


def _row_norms(m):
    return np.sqrt(np.einsum("ij,ij->i", m, m))


def consensus_error(x):
    """``max_i ||x_i - mean(x)||``."""
    return float(_row_norms(x - x.mean(axis=0)).max())


def tracking_deviation(swarm):
    """Relative gap between the tracker sum and the gradient sum."""
    total = swarm.grad_s.sum(axis=0)
    return float(np.linalg.norm(swarm.y.sum(axis=0) - total) / (1.0 + np.linalg.norm(total)))


def _metrics(swarm, phi, pi, x_star):
    x = swarm.x
    x_hat = phi @ x
    ysum = swarm.y.sum(axis=0)
    dev = x - x_hat
    ydev = swarm.y / pi[:, None] - ysum
    return (
        swarm.k,
        float(_row_norms(x - x_star).mean()),
        float(np.linalg.norm(x_hat - x_star)),
        float(np.sqrt(phi @ np.einsum("ij,ij->i", dev, dev))),
        float(np.linalg.norm(x - swarm.x_prev)),
        float(np.sqrt(pi @ np.einsum("ij,ij->i", ydev, ydev))),
        consensus_error(x),
        tracking_deviation(swarm),
    )


@dataclass
class RunRecord:
    rows: dict
    status: str
    iterations: int
    wall_ms: float
    config: dict
    seeds: dict = field(default_factory=dict)
    final: AgentSwarm = None
    states: list = None
    phi: np.ndarray = None
    pi: np.ndarray = None
    mixing: list = None

    def __getitem__(self, column):
        return self.rows[column]

    @property
    def final_residual(self):
        return float(self.rows["residual"][-1])

    def iterations_to(self, threshold, column="residual"):
        """First logged ``k`` with `column` below `threshold`, else ``None``."""
        hit = np.nonzero(self.rows[column] < threshold)[0]
        return int(self.rows["k"][hit[0]]) if hit.size else None

    def to_csv(self):
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(METRIC_COLUMNS)
        for i in range(len(self.rows["k"])):
            writer.writerow([int(self.rows["k"][i])] + [repr(float(self.rows[c][i])) for c in METRIC_COLUMNS[1:]])
        return buf.getvalue()

    def summary(self):
        return {
            "config": self.config,
            "status": self.status,
            "iterations": self.iterations,
            "final_residual": self.final_residual,
            "wall_ms": self.wall_ms,
            "seeds": self.seeds,
        }

    def to_json(self):
        return json.dumps(self.summary(), indent=2)


def run(
    problem,
    graphs,
    cfg,
    x_init=None,
    x_init_prev=None,
    phi=None,
    pi=None,
    x_star=None,
    keep_states=False,
    mixing=None,
):
    """
    Run the iteration until the stopping metric drops to ``cfg.stop_tolerance``
    or ``cfg.max_iters`` rounds have been made.

    Parameters
    ----------
    problem : ProblemSet
    graphs : DigraphSequence or None
        One graph per round; ignored when `mixing` is given.
    cfg : SolverConfig
    phi, pi : ndarray, optional
        Weight sequences of shape ``(T + 1, n)``. Computed from the mixing
        matrices over the available horizon when omitted.
    x_star : ndarray, optional
        Defaults to ``problem.reference_optimum``.
    keep_states : bool
        Retain every swarm (needed for proposition checks).

    Returns
    -------
    RunRecord
        ``status`` is ``"converged"``, ``"max_iters"`` or ``"truncated"``
        (graph horizon shorter than ``max_iters``).
    """
    if mixing is None:
        mixing = mixing_sequence(graphs[: cfg.max_iters])
    horizon = min(len(mixing), cfg.max_iters)
    if phi is None:
        phi = phi_sequence([m.A for m in mixing[:horizon]]) if horizon else np.full((1, problem.n), 1.0 / problem.n)
    if pi is None:
        pi = pi_sequence([m.B for m in mixing[:horizon]]) if horizon else np.full((1, problem.n), 1.0 / problem.n)
    if x_star is None:
        x_star = problem.reference_optimum
    seeds = {"graph": getattr(graphs, "seed", None), "problem": problem.meta.get("seed")}
    config = asdict(cfg) | {"mode": cfg.mode, "n": problem.n}

    start = time.perf_counter()
    swarm = init(problem, x_init, x_init_prev)
    rows = [_metrics(swarm, phi[0], pi[0], x_star)]
    states = [swarm] if keep_states else None
    status = "max_iters"
    stop_col = METRIC_COLUMNS.index("consensus_error" if cfg.stop_metric == "consensus" else "residual")
    try:
        for k in range(cfg.max_iters):
            if k >= horizon:
                status = "truncated"
                break
            with np.errstate(over="ignore", invalid="ignore"):
                swarm = step(swarm, mixing[k], cfg, problem)
                if keep_states:
                    states.append(swarm)
                latest = None
                if cfg.stop_tolerance is not None or swarm.k % cfg.log_stride == 0:
                    latest = _metrics(swarm, phi[swarm.k], pi[swarm.k], x_star)
                    _check_finite(latest, swarm.k)
            if swarm.k % cfg.log_stride == 0:
                rows.append(latest)
            if cfg.stop_tolerance is not None and latest[stop_col] <= cfg.stop_tolerance:
                if rows[-1][0] != swarm.k:
                    rows.append(latest)
                status = "converged"
                break
    except DivergenceError as err:
        err.record = _record(rows, "diverged", swarm, start, config, seeds, states, phi, pi, mixing)
        raise
    return _record(rows, status, swarm, start, config, seeds, states, phi, pi, mixing)


def _check_finite(row, k):
    if np.isfinite(sum(row)):
        return
    for name, value in zip(METRIC_COLUMNS[1:], row[1:]):
        if not np.isfinite(value):
            raise DivergenceError(f"non-finite {name} at iteration {k}", iteration=k, quantity=name)


def _record(rows, status, swarm, start, config, seeds, states, phi, pi, mixing):
    cols = {c: np.array([r[i] for r in rows]) for i, c in enumerate(METRIC_COLUMNS)}
    cols["k"] = cols["k"].astype(int)
    return RunRecord(
        rows=cols,
        status=status,
        iterations=swarm.k,
        wall_ms=(time.perf_counter() - start) * 1e3,
        config=config,
        seeds=seeds,
        final=swarm,
        states=states,
        phi=phi,
        pi=pi,
        mixing=mixing,
    )


def mode_config(cfg, mode):
    """Copy of `cfg` with momentum terms switched off as `mode` requires."""
    if mode in ("plain", "abpp"):
        return replace(cfg, beta=0.0, gamma=0.0)
    if mode in ("heavy-ball", "hb", "abpp-m"):
        return replace(cfg, gamma=0.0)
    if mode in ("nesterov", "abpp-n"):
        return replace(cfg, beta=0.0)
    if mode in ("combined", "abpp-mn"):
        return cfg
    raise InvalidArgument(f"unknown mode {mode!r}")
