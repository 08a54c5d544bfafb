"""
Per-agent objectives, datasets and reference optima.

The global objective is the average ``f = (1/n) sum_i f_i``. ``global_L`` is
the largest per-agent gradient Lipschitz constant (every ``f_i`` must be
``L``-smooth for the convergence bounds) and ``global_mu`` is the strong
convexity constant of the average.
"""

import csv
from dataclasses import dataclass, field

import numpy as np
from scipy.special import expit

from .errors import ConvergenceFailure, InvalidArgument, ParseError, SchemaError

REFERENCE_TOL = 1e-10
REFERENCE_MAX_ITERS = 10**6


class RidgeOracle:
    """``f(x) = ||z - H x||^2 + lam ||x||^2``."""

    def __init__(self, H, z, lam):
        self.H = np.atleast_2d(np.asarray(H, dtype=float))
        self.z = np.atleast_1d(np.asarray(z, dtype=float))
        self.lam = float(lam)
        self.dimension = self.H.shape[1]
        self.lipschitz_L = 2.0 * (np.linalg.norm(self.H, 2) ** 2 + self.lam)

    def evaluate(self, x):
        res = self.z - self.H @ x
        return float(res @ res + self.lam * (x @ x))

    def gradient(self, x):
        return 2.0 * (self.H.T @ (self.H @ x - self.z) + self.lam * x)

    def hessian(self, x=None):
        return 2.0 * (self.H.T @ self.H + self.lam * np.eye(self.dimension))


class LogisticOracle:
    """
    L2-regularised logistic loss on a local batch.

    `features` already carries the leading all-ones column, so ``x[0]`` is the
    intercept and the regulariser covers the whole vector.
    """

    def __init__(self, features, labels, lam):
        self.features = np.asarray(features, dtype=float)
        self.labels = np.asarray(labels, dtype=float)
        self.lam = float(lam)
        self.m, self.dimension = self.features.shape
        self.lipschitz_L = self.lam + np.linalg.norm(self.features, 2) ** 2 / (4.0 * self.m)

    def evaluate(self, x):
        margins = self.labels * (self.features @ x)
        return float(np.logaddexp(0.0, -margins).mean() + 0.5 * self.lam * (x @ x))

    def gradient(self, x):
        margins = self.labels * (self.features @ x)
        weights = -self.labels * expit(-margins)
        return self.features.T @ weights / self.m + self.lam * x

    def hessian(self, x):
        p = expit(self.features @ x)
        d = p * (1.0 - p)
        return (self.features.T * d) @ self.features / self.m + self.lam * np.eye(self.dimension)


@dataclass
class ProblemSet:
    oracles: list
    global_L: float
    global_mu: float
    reference_optimum: np.ndarray = None
    reference_grad_norm: float = np.nan
    name: str = "custom"
    average_L: float = np.nan
    meta: dict = field(default_factory=dict)

    @property
    def n(self):
        return len(self.oracles)

    @property
    def dimension(self):
        return self.oracles[0].dimension

    def gradients(self, X):
        """Stack of ``grad f_i(X[i])``."""
        return np.stack([o.gradient(x) for o, x in zip(self.oracles, X)])

    def value(self, x):
        return sum(o.evaluate(x) for o in self.oracles) / self.n

    def gradient(self, x):
        return sum(o.gradient(x) for o in self.oracles) / self.n

    def hessian(self, x):
        return sum(o.hessian(x) for o in self.oracles) / self.n


class _RidgeProblem(ProblemSet):
    def gradients(self, X):
        H, z, lam = self.meta["H"], self.meta["z"], self.meta["lam"]
        res = np.einsum("isp,ip->is", H, X) - z
        return 2.0 * (np.einsum("isp,is->ip", H, res) + lam * X)


def constants(problem):
    """Return ``(L, mu, Q)`` with ``Q = L / mu``."""
    return problem.global_L, problem.global_mu, problem.global_L / problem.global_mu


def ridge_from_data(Hs, zs, lam, name="ridge"):
    """Ridge problem from explicit per-agent measurement matrices and observations."""
    if lam <= 0:
        raise InvalidArgument(f"lambda must be > 0 for strong convexity, got {lam}")
    oracles = [RidgeOracle(H, z, lam) for H, z in zip(Hs, zs)]
    H = np.stack([o.H for o in oracles])
    z = np.stack([o.z for o in oracles])
    n, _, p = H.shape
    gram = np.einsum("isp,isq->pq", H, H)
    avg_hess = 2.0 * (gram / n + lam * np.eye(p))
    eig = np.linalg.eigvalsh(avg_hess)
    x_star = np.linalg.solve(gram + n * lam * np.eye(p), np.einsum("isp,is->p", H, z))
    problem = _RidgeProblem(
        oracles,
        global_L=max(o.lipschitz_L for o in oracles),
        global_mu=float(eig[0]),
        name=name,
        average_L=float(eig[-1]),
        meta={"H": H, "z": z, "lam": float(lam)},
    )
    problem.reference_optimum = x_star
    problem.reference_grad_norm = float(np.linalg.norm(problem.gradient(x_star)))
    return problem


def ridge_problem(n, p, s, lam, noise_sigma=1.0, seed=0):
    """
    Sensor-fusion ridge regression.

    Each ``H_i`` is drawn uniformly from the unit cube and scaled so that the
    data term ``x -> ||z_i - H_i x||^2`` has gradient Lipschitz constant 1.
    """
    if min(n, p, s) < 1:
        raise InvalidArgument(f"n, p, s must be >= 1, got {n}, {p}, {s}")
    if lam <= 0:
        raise InvalidArgument(f"lambda must be > 0 for strong convexity, got {lam}")
    rng = np.random.default_rng(seed)
    Hs = []
    for _ in range(n):
        H = rng.uniform(0.0, 1.0, size=(s, p))
        Hs.append(H / np.sqrt(2.0 * np.linalg.norm(H, 2) ** 2))
    x_true = rng.standard_normal(p)
    zs = [H @ x_true + noise_sigma * rng.standard_normal(s) for H in Hs]
    problem = ridge_from_data(Hs, zs, lam, name="sensor-fusion")
    problem.meta["x_true"] = x_true
    problem.meta["seed"] = seed
    return problem


@dataclass
class Dataset:
    features: np.ndarray
    labels: np.ndarray
    feature_names: list = field(default_factory=list)
    label_column: str = ""

    def __post_init__(self):
        self.features = np.atleast_2d(np.asarray(self.features, dtype=float))
        self.labels = np.asarray(self.labels, dtype=float)
        if self.features.shape[0] != self.labels.shape[0]:
            raise InvalidArgument("feature rows and label count differ")
        if not (np.all(np.isfinite(self.features)) and np.all(np.isfinite(self.labels))):
            raise InvalidArgument("dataset contains NaN or Inf")

    def __len__(self):
        return self.labels.shape[0]

    @property
    def p(self):
        return self.features.shape[1]

    def split(self, n_train):
        """First `n_train` rows and the remainder, order preserved."""
        return (
            Dataset(self.features[:n_train], self.labels[:n_train], self.feature_names, self.label_column),
            Dataset(self.features[n_train:], self.labels[n_train:], self.feature_names, self.label_column),
        )

    def head(self, m):
        return self.split(m)[0]


@dataclass
class CsvSchema:
    label_column: str
    positive_label: str
    feature_columns: list = None
    normalize: bool = False
    keep_labels: list = None


def load_csv(path, schema):
    """
    Read a labelled CSV with a header row.

    Labels equal to ``schema.positive_label`` become +1, all others -1. Rows
    whose label is not in ``schema.keep_labels`` (when given) are dropped.
    With ``schema.normalize`` each feature is min-max scaled to [0, 1].
    """
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise InvalidArgument(f"{path}: empty file") from None
        if schema.label_column not in header:
            raise SchemaError(f"missing label column {schema.label_column!r}")
        feature_cols = schema.feature_columns
        if feature_cols is None:
            feature_cols = [h for h in header if h != schema.label_column]
        for col in feature_cols:
            if col not in header:
                raise SchemaError(f"missing feature column {col!r}")
        label_idx = header.index(schema.label_column)
        feat_idx = [header.index(c) for c in feature_cols]
        keep = None if schema.keep_labels is None else {str(v) for v in schema.keep_labels}
        rows, labels = [], []
        for row_no, row in enumerate(reader, start=1):
            if not row:
                continue
            label = row[label_idx].strip()
            if keep is not None and label not in keep:
                continue
            try:
                rows.append([float(row[i]) for i in feat_idx])
            except (ValueError, IndexError):
                raise ParseError(f"{path}: non-numeric feature in data row {row_no}", row=row_no) from None
            labels.append(1.0 if label == str(schema.positive_label) else -1.0)
    if not rows:
        raise InvalidArgument(f"{path}: no data rows")
    X = np.asarray(rows, dtype=float)
    if schema.normalize:
        lo, hi = X.min(axis=0), X.max(axis=0)
        span = np.where(hi > lo, hi - lo, 1.0)
        X = (X - lo) / span
    return Dataset(X, np.asarray(labels), list(feature_cols), schema.label_column)


def partition(m, n_agents):
    """Contiguous equal blocks of ``range(m)``; the last block takes the remainder."""
    if n_agents < 1 or m < n_agents:
        raise InvalidArgument(f"cannot split {m} rows among {n_agents} agents")
    size = m // n_agents
    bounds = [i * size for i in range(n_agents)] + [m]
    return [slice(bounds[i], bounds[i + 1]) for i in range(n_agents)]


def with_intercept(features):
    return np.hstack([np.ones((features.shape[0], 1)), features])


def logistic_problem(data, n_agents, lam, tolerance=REFERENCE_TOL):
    """Distributed L2 logistic regression with the intercept as coordinate 0."""
    if len(data) == 0:
        raise InvalidArgument("empty dataset")
    if not np.all(np.isin(data.labels, (-1.0, 1.0))):
        raise InvalidArgument("labels must be +1 or -1")
    if lam <= 0:
        raise InvalidArgument(f"lambda must be > 0, got {lam}")
    Bt = with_intercept(data.features)
    oracles = [LogisticOracle(Bt[sl], data.labels[sl], lam) for sl in partition(len(data), n_agents)]
    problem = ProblemSet(
        oracles,
        global_L=max(o.lipschitz_L for o in oracles),
        global_mu=float(lam),
        name="logistic",
        average_L=float(np.mean([o.lipschitz_L for o in oracles])),
    )
    problem.reference_optimum = solve_reference(problem, tolerance)
    problem.reference_grad_norm = float(np.linalg.norm(problem.gradient(problem.reference_optimum)))
    return problem


def solve_reference(problem, tolerance=REFERENCE_TOL, max_iters=REFERENCE_MAX_ITERS, x0=None):
    """
    Centralised minimiser of the average objective.

    Ridge problems use the normal equations. Everything else runs Nesterov's
    accelerated gradient for strongly convex functions with gradient-based
    restarts until ``||grad f|| <= tolerance``.
    """
    if isinstance(problem, _RidgeProblem):
        x = problem.reference_optimum
        g = np.linalg.norm(problem.gradient(x))
        if g > tolerance:
            raise ConvergenceFailure(f"normal equations reached |grad|={g:.3e} > {tolerance:.1e}", achieved=g)
        return x
    L = problem.average_L if np.isfinite(problem.average_L) else problem.global_L
    mu = problem.global_mu
    step = 1.0 / L
    momentum = (np.sqrt(L / mu) - 1.0) / (np.sqrt(L / mu) + 1.0)
    x = np.zeros(problem.dimension) if x0 is None else np.array(x0, dtype=float)
    v = x.copy()
    gnorm = np.inf
    for _ in range(max_iters):
        g = problem.gradient(v)
        x_new = v - step * g
        gnorm = np.linalg.norm(problem.gradient(x_new))
        if gnorm <= tolerance:
            return x_new
        if g @ (x_new - x) > 0:
            v = x_new.copy()
        else:
            v = x_new + momentum * (x_new - x)
        x = x_new
    raise ConvergenceFailure(
        f"reference solve stopped at |grad|={gnorm:.3e} after {max_iters} iterations", achieved=gnorm
    )


def accuracy(x, data):
    """Fraction of `data` classified correctly by ``sign(x0 + x1: . b)``."""
    scores = with_intercept(data.features) @ x
    return float(np.mean(np.where(scores >= 0, 1.0, -1.0) == data.labels))
