"""
Linear-convergence certificate for the accelerated push-pull iteration.

The error vector tracked along a run is

    V_k = (||x_hat_k - x*||, D(x_k, phi_k), S(y_k, pi_k), ||x_k - x_{k-1}||)

and it obeys ``V_{k+1} <= M_k V_k`` entrywise. Bounding the per-step
constants over the horizon gives a single nonnegative 4x4 matrix ``M``; a
spectral radius below one certifies a linear rate. This module computes all
of those quantities, the admissible parameter ranges, and checks every
per-step inequality against a recorded trajectory.
"""

import csv
import io
import json
from dataclasses import dataclass, field

import numpy as np

from .errors import CertificateViolation, InvalidArgument
from .graph import graph_stats
from .weights import lower_bound, mixing_sequence, phi_sequence, pi_sequence

PROPOSITION_RTOL = 1e-9
# absolute rounding floor, relative to the largest iterate entry
ROUNDING_FLOOR = 1e-12


@dataclass(frozen=True)
class IterateQuantities:
    opt_gap: float
    consensus_D: float
    tracking_S: float
    state_diff: float
    k: int = 0

    def vector(self):
        """``V_k`` in its canonical order."""
        return np.array([self.opt_gap, self.consensus_D, self.tracking_S, self.state_diff])


def weighted_average(x, phi):
    return phi @ x


def dispersion(x, phi):
    """``D(x, phi) = sqrt(sum_i phi_i ||x_i - x_hat||^2)``."""
    x_hat = phi @ x
    return float(np.sqrt(phi @ np.sum((x - x_hat) ** 2, axis=1)))


def tracking_error(y, pi):
    """``S(y, pi) = sqrt(sum_j pi_j ||y_j / pi_j - sum_l y_l||^2)``."""
    if np.any(pi <= 0):
        raise InvalidArgument("pi must be strictly positive")
    ysum = y.sum(axis=0)
    return float(np.sqrt(pi @ np.sum((y / pi[:, None] - ysum) ** 2, axis=1)))


def quantities(swarm, phi_k, pi_k, x_star):
    """The four components of ``V_k`` for one swarm state."""
    pi_k = np.asarray(pi_k, dtype=float)
    if np.any(pi_k <= 0):
        raise InvalidArgument("pi_k has a zero entry")
    x_hat = phi_k @ swarm.x
    return IterateQuantities(
        opt_gap=float(np.linalg.norm(x_hat - x_star)),
        consensus_D=dispersion(swarm.x, phi_k),
        tracking_S=tracking_error(swarm.y, pi_k),
        state_diff=float(np.linalg.norm(swarm.x - swarm.x_prev)),
        k=swarm.k,
    )


@dataclass(frozen=True)
class StepConstants:
    r: float
    c: float
    varphi: float
    tau: float
    varphi_next: float
    k: int = 0


def _contraction(radicand, name):
    if not 0.0 <= radicand < 1.0:
        raise CertificateViolation(f"{name}: radicand {radicand!r} outside [0, 1)")
    return float(np.sqrt(radicand))


def step_constants(stats, phi_k, phi_next, pi_k, pi_next, a, b, k=0):
    """
    Per-step contraction constants ``r_k, c_k, varphi_k, tau_k``.

    `stats` carries the diameter and maximal edge-utility of the graph used
    at step ``k``; `a` and `b` are the uniform lower bounds on the positive
    entries of the row- and column-stochastic matrices.
    """
    if stats.n < 2:
        raise InvalidArgument("contraction constants need n >= 2")
    if not (0 < a <= 1 and 0 < b <= 1):
        raise InvalidArgument(f"a and b must lie in (0, 1], got {a}, {b}")
    vecs = [np.asarray(v, dtype=float) for v in (phi_k, phi_next, pi_k, pi_next)]
    if any(np.any(v <= 0) for v in vecs):
        raise InvalidArgument("weight vectors must be strictly positive")
    phi_k, phi_next, pi_k, pi_next = vecs
    dk = stats.diameter * stats.max_edge_utility
    c = _contraction(1.0 - phi_next.min() * a**2 / (phi_k.max() ** 2 * dk), "c_k")
    tau = _contraction(1.0 - pi_k.min() ** 2 * b**2 / (pi_k.max() ** 2 * pi_next.max() * dk), "tau_k")
    return StepConstants(
        r=float(np.sqrt(stats.n) + 1.0 / np.sqrt(pi_next.min())),
        c=c,
        varphi=float(np.sqrt(1.0 / phi_k.min())),
        tau=tau,
        varphi_next=float(np.sqrt(1.0 / phi_next.min())),
        k=k,
    )


@dataclass(frozen=True)
class HorizonBounds:
    c: float
    tau: float
    r: float
    varphi: float
    sigma: float
    q_bound: float
    sigma_source: str = "measured"


def horizon_bounds(consts, pi, alpha, n, mu, L, sigma_source="measured", b=None):
    """
    Maxima of the per-step constants and the bound ``1 - alpha n sigma mu``
    on the optimality-gap factor.

    ``sigma`` is the smallest entry of the whole `pi` sequence, or
    ``b**n / n`` when ``sigma_source="analytic"``.
    """
    upper = 2.0 / (n * (L + mu))
    if not 0 < alpha < upper:
        raise InvalidArgument(f"alpha={alpha} outside (0, 2/(n(L+mu))) = (0, {upper:.6g})")
    if sigma_source == "measured":
        sigma = float(np.min(pi))
    elif sigma_source == "analytic":
        if b is None:
            raise InvalidArgument("analytic sigma needs b")
        sigma = lower_bound(b, n)
    else:
        raise InvalidArgument(f"unknown sigma_source {sigma_source!r}")
    return HorizonBounds(
        c=max(s.c for s in consts),
        tau=max(s.tau for s in consts),
        r=max(s.r for s in consts),
        varphi=max(max(s.varphi, s.varphi_next) for s in consts),
        sigma=sigma,
        q_bound=1.0 - alpha * n * sigma * mu,
        sigma_source=sigma_source,
    )


@dataclass(frozen=True)
class Etas:
    eta1: float
    eta2: float
    eta3: float
    eta4: float
    eta5: float
    eta6: float

    def as_tuple(self):
        return (self.eta1, self.eta2, self.eta3, self.eta4, self.eta5, self.eta6)


def eta_constants(c, tau, r, varphi, sigma, n, mu, L, gamma):
    rn = np.sqrt(n)
    if gamma * rn >= 1:
        raise InvalidArgument(f"gamma*sqrt(n) = {gamma * rn:.6g} must be < 1")
    nsm = n * sigma * mu
    e1 = (1 - tau) * (1 - c) * nsm
    e2 = (1 - tau) * (nsm * L * rn * varphi + L**2 * n * varphi**2)
    e3 = L * r * ((1 + c) * varphi + 1 - c) * (nsm + L * rn * varphi)
    e4 = (1 - tau) * ((1 + c) * varphi + 1 - c)
    e5 = e1 * (rn - c) + (nsm * (1 + c + L * rn) + 2 * L * rn * varphi) * e4
    e6 = (1 + gamma * c - gamma * rn) * e2 + (1 + gamma) * e3 + L**2 * n * varphi * e4
    return Etas(*(float(e) for e in (e1, e2, e3, e4, e5, e6)))


def _assemble(alpha, beta, gamma, q, c, tau, r, phi_k, phi_next, n, L):
    a_l = alpha * L * np.sqrt(n)
    row4 = np.array([a_l * phi_k, c * phi_next + phi_k + a_l * phi_k, alpha, beta + gamma * np.sqrt(n) * (1 + alpha * L)])
    row3 = L * r * (1 + gamma) * row4 + np.array([0.0, 0.0, tau, L * r * gamma])
    return np.array(
        [
            [q, a_l * phi_k, alpha, beta + gamma * (1 + a_l)],
            [a_l * phi_k, c + a_l * phi_k, alpha, beta + gamma * (c + a_l)],
            row3,
            row4,
        ]
    )


def m_matrix(alpha, beta, gamma, c, tau, r, varphi, sigma, n, mu, L):
    """The horizon matrix ``M(alpha, beta, gamma)``."""
    return _assemble(alpha, beta, gamma, 1.0 - alpha * n * sigma * mu, c, tau, r, varphi, varphi, n, L)


def m_matrix_step(alpha, beta, gamma, q_k, sc, n, L):
    """Per-step matrix ``M_k`` from the step constants `sc` and factor `q_k`."""
    return _assemble(alpha, beta, gamma, q_k, sc.c, sc.tau, sc.r, sc.varphi, sc.varphi_next, n, L)


def i_minus_m(alpha, beta, gamma, c, tau, r, varphi, sigma, n, mu, L):
    """
    ``I - M`` with the diagonal formed directly, so ``1 - M[0, 0]`` is
    ``alpha n sigma mu`` exactly rather than a cancellation.
    """
    out = -m_matrix(alpha, beta, gamma, c, tau, r, varphi, sigma, n, mu, L)
    a_l = alpha * L * np.sqrt(n)
    out[0, 0] = alpha * n * sigma * mu
    out[1, 1] = (1 - c) - a_l * varphi
    out[2, 2] = (1 - tau) - L * r * (1 + gamma) * alpha
    out[3, 3] = (1 - beta - gamma * np.sqrt(n)) - gamma * np.sqrt(n) * alpha * L
    return out


def det4(m):
    """Determinant by cofactor expansion along the first row."""
    m = np.asarray(m, dtype=float)

    def det3(s):
        return (
            s[0, 0] * (s[1, 1] * s[2, 2] - s[1, 2] * s[2, 1])
            - s[0, 1] * (s[1, 0] * s[2, 2] - s[1, 2] * s[2, 0])
            + s[0, 2] * (s[1, 0] * s[2, 1] - s[1, 1] * s[2, 0])
        )

    total = 0.0
    for j in range(4):
        minor = np.delete(m[1:], j, axis=1)
        total += (-1) ** j * m[0, j] * det3(minor)
    return float(total)


def spectral_radius(M):
    M = np.asarray(M, dtype=float)
    if not np.all(np.isfinite(M)):
        raise InvalidArgument("matrix has non-finite entries")
    return float(np.max(np.abs(np.linalg.eigvals(M))))


@dataclass(frozen=True)
class ParameterRanges:
    alpha_terms: tuple
    alpha_max: float
    kappa_max: float
    kappa: float
    empty: bool

    def linear_ok(self, beta, gamma, n):
        return beta + gamma * np.sqrt(n) < 1


def parameter_ranges(etas, c, tau, r, varphi, n, mu, L, kappa=0.0):
    """
    Step-size ceiling at momentum level ``kappa = max(beta, gamma)``.

    The range is empty (not an error) once ``kappa >= eta1 / eta5``.
    """
    rn = np.sqrt(n)
    terms = (
        (1 - c) / (L * rn * varphi),
        (1 - tau) / (L * r),
        (etas.eta1 - kappa * etas.eta5) / etas.eta6,
        2.0 / (n * (L + mu)),
    )
    alpha_max = min(terms)
    kappa_max = etas.eta1 / etas.eta5
    return ParameterRanges(
        tuple(float(t) for t in terms), float(alpha_max), float(kappa_max), float(kappa), bool(alpha_max <= 0)
    )


def admissible(alpha, beta, gamma, ranges, n):
    """
    All step-size and momentum conditions at once.

    The eta-term is enforced strictly: at equality ``det(I - M)`` is exactly
    zero and the spectral radius reaches one.
    """
    return bool(
        0 < alpha <= ranges.alpha_max
        and alpha < ranges.alpha_terms[2]
        and max(beta, gamma) < ranges.kappa_max
        and beta + gamma * np.sqrt(n) < 1
    )


@dataclass
class Certificate:
    alpha: float
    beta: float
    gamma: float
    n: int
    L: float
    mu: float
    a: float
    b: float
    c: float
    tau: float
    r: float
    varphi: float
    sigma: float
    q_bound: float
    etas: Etas
    M: np.ndarray
    rho_M: float
    det_I_minus_M: float
    diag_below_one: bool
    ranges: ParameterRanges
    verdict: bool
    horizon: int
    sigma_source: str = "measured"
    step: list = field(default_factory=list, repr=False)

    @property
    def alpha_max(self):
        return self.ranges.alpha_max

    @property
    def kappa_max(self):
        return self.ranges.kappa_max

    def to_dict(self):
        d = {
            "alpha": self.alpha,
            "beta": self.beta,
            "gamma": self.gamma,
            "n": self.n,
            "L": self.L,
            "mu": self.mu,
            "a": self.a,
            "b": self.b,
            "c": self.c,
            "tau": self.tau,
            "r": self.r,
            "varphi": self.varphi,
            "sigma": self.sigma,
            "q_bound": self.q_bound,
        }
        d.update({f"eta{i + 1}": v for i, v in enumerate(self.etas.as_tuple())})
        d.update(
            {
                "M": self.M.tolist(),
                "rho_M": self.rho_M,
                "det_I_minus_M": self.det_I_minus_M,
                "diag_below_one": self.diag_below_one,
                "alpha_max": self.alpha_max,
                "alpha_terms": list(self.ranges.alpha_terms),
                "kappa_max": self.kappa_max,
                "empty_alpha_range": self.ranges.empty,
                "linear_constraint": self.beta + self.gamma * np.sqrt(self.n) < 1,
                "verdict": self.verdict,
                "horizon": self.horizon,
                "sigma_source": self.sigma_source,
                "note": "maxima taken over the finite simulated horizon",
            }
        )
        return d

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, default=_json_default)


def _json_default(o):
    if isinstance(o, (np.bool_,)):
        return bool(o)
    if isinstance(o, np.generic):
        return o.item()
    raise TypeError(type(o))


def horizon_setup(graphs, mixing=None, phi=None, pi=None):
    """Mixing matrices, weight sequences, graph stats and the global ``a, b``."""
    if mixing is None:
        mixing = mixing_sequence(graphs)
    if phi is None:
        phi = phi_sequence([m.A for m in mixing])
    if pi is None:
        pi = pi_sequence([m.B for m in mixing])
    stats = [graph_stats(g) for g in graphs]
    a = min(m.a_min for m in mixing)
    b = min(m.b_min for m in mixing)
    return mixing, phi, pi, stats, a, b


def all_step_constants(stats, phi, pi, a, b):
    return [step_constants(st, phi[k], phi[k + 1], pi[k], pi[k + 1], a, b, k) for k, st in enumerate(stats)]


def certify(problem, graphs, alpha, beta=0.0, gamma=0.0, sigma_source="measured", setup=None):
    """
    Full certificate for `problem` over the graph horizon `graphs`.

    `setup` may carry a precomputed :func:`horizon_setup` result so that a
    parameter sweep pays for the graph functionals once.
    """
    n = problem.n
    if n < 2:
        raise InvalidArgument("certificates need n >= 2")
    L, mu = problem.global_L, problem.global_mu
    mixing, phi, pi, stats, a, b = setup if setup is not None else horizon_setup(graphs)
    consts = all_step_constants(stats, phi, pi, a, b)
    hb = horizon_bounds(consts, pi, alpha, n, mu, L, sigma_source, b)
    return certificate_from_bounds(hb, alpha, beta, gamma, n, mu, L, a, b, len(stats), consts)


def certificate_from_bounds(hb, alpha, beta, gamma, n, mu, L, a=np.nan, b=np.nan, horizon=0, consts=()):
    etas = eta_constants(hb.c, hb.tau, hb.r, hb.varphi, hb.sigma, n, mu, L, gamma)
    ranges = parameter_ranges(etas, hb.c, hb.tau, hb.r, hb.varphi, n, mu, L, max(beta, gamma))
    args = (alpha, beta, gamma, hb.c, hb.tau, hb.r, hb.varphi, hb.sigma, n, mu, L)
    M = m_matrix(*args)
    IM = i_minus_m(*args)
    return Certificate(
        alpha=alpha,
        beta=beta,
        gamma=gamma,
        n=n,
        L=L,
        mu=mu,
        a=float(a),
        b=float(b),
        c=hb.c,
        tau=hb.tau,
        r=hb.r,
        varphi=hb.varphi,
        sigma=hb.sigma,
        q_bound=hb.q_bound,
        etas=etas,
        M=M,
        rho_M=spectral_radius(M),
        det_I_minus_M=det4(IM),
        diag_below_one=bool(np.all(np.diag(IM) > 0)),
        ranges=ranges,
        verdict=admissible(alpha, beta, gamma, ranges, n),
        horizon=horizon,
        sigma_source=hb.sigma_source,
        step=list(consts),
    )


def fit_linear_rate(residuals):
    """
    Geometric rate fitted to the tail half of a residual series.

    Returns ``(rho_hat, r_squared)`` from a least-squares line through
    ``log(residual)`` against ``k``. The series is cut at its first
    non-positive entry.
    """
    res = np.asarray(residuals, dtype=float)
    bad = np.nonzero(~(res > 0))[0]
    if bad.size:
        res = res[: bad[0]]
    if res.size < 10:
        raise InvalidArgument(f"need at least 10 positive residuals, got {res.size}")
    k = np.arange(res.size)[res.size // 2 :]
    logr = np.log(res[res.size // 2 :])
    slope, intercept = np.polyfit(k, logr, 1)
    fitted = slope * k + intercept
    ss_tot = np.sum((logr - logr.mean()) ** 2)
    r2 = 1.0 if ss_tot == 0 else 1.0 - np.sum((logr - fitted) ** 2) / ss_tot
    return float(np.exp(slope)), float(r2)


CHECKS = (
    "prop1",
    "prop2",
    "prop3",
    "prop4",
    "prop5",
    "weighted_average",
    "x_contraction",
    "y_contraction",
    "y_norm",
    "y_sum",
    "grad_conservation",
)


@dataclass
class PropositionReport:
    slacks: dict
    skipped: list
    violations: list
    rtol: float
    atol: float

    @property
    def ok(self):
        return not self.violations

    @property
    def max_violation(self):
        """Largest ``(lhs - rhs) / scale`` seen, over all checks and iterations."""
        worst = -np.inf
        for rows in self.slacks.values():
            for _, lhs, rhs, scale in rows:
                worst = max(worst, (lhs - rhs) / scale)
        return float(worst)

    def count(self, name):
        return len(self.slacks.get(name, []))

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(("k", "check", "lhs", "rhs", "slack"))
        for name in CHECKS:
            for k, lhs, rhs, scale in self.slacks.get(name, []):
                w.writerow((k, name, repr(lhs), repr(rhs), repr(rhs - lhs)))
        return buf.getvalue()


def verify_propositions(
    record,
    problem,
    alpha,
    beta,
    gamma,
    graphs,
    rtol=PROPOSITION_RTOL,
    atol=0.0,
    x_star=None,
):
    """
    Check every per-step inequality of the error recursion along a run.

    `record` must come from :func:`pushpull.solver.run` with
    ``keep_states=True`` and ``log_stride=1``. For each step ``k`` the
    measured left side is compared with the right side rebuilt from the
    measured ``V_k`` and the step constants; a check fails when
    ``lhs > rhs + rtol * scale + atol + floor`` with ``scale`` the sum of
    absolute terms on the right and ``floor`` equal to ``ROUNDING_FLOOR``
    times the largest entry of the iterates involved. The floor only
    matters once the run has converged to rounding level, where both sides
    are differences of nearly equal vectors.

    Steps whose step size leaves the window in which the optimality-gap
    bound holds are listed in ``skipped`` instead of being checked.
    """
    states = record.states
    if states is None:
        raise InvalidArgument("record was produced without keep_states=True")
    n, L, mu = problem.n, problem.global_L, problem.global_mu
    x_star = problem.reference_optimum if x_star is None else x_star
    phi, pi, mixing = record.phi, record.pi, record.mixing
    T = len(states) - 1
    _, _, _, stats, a, b = horizon_setup(graphs[:T], mixing[:T], phi, pi)
    consts = all_step_constants(stats, phi, pi, a, b)
    rn = np.sqrt(n)

    slacks = {name: [] for name in CHECKS}
    skipped, violations = [], []
    floor = 0.0

    def check(name, k, lhs, terms):
        terms = np.asarray(terms, dtype=float)
        rhs = float(terms.sum())
        scale = float(np.abs(terms).sum()) or 1.0
        slacks[name].append((k, float(lhs), rhs, scale))
        if lhs > rhs + rtol * scale + atol + floor:
            violations.append((name, k, float(lhs), rhs))

    def check_zero(name, k, err, scale):
        slacks[name].append((k, float(err), 0.0, float(scale)))
        if err > rtol * scale + atol + floor:
            violations.append((name, k, float(err), 0.0))

    first = states[0]
    if not np.allclose(first.s, first.x + gamma * (first.x - first.x_prev), rtol=0, atol=1e-15):
        skipped.append((0, "all", "s_0 != x_0 + gamma (x_0 - x_{-1})"))
        start = 1
    else:
        start = 0

    V = [quantities(st, phi[k], pi[k], x_star).vector() for k, st in enumerate(states)]
    for k, st in enumerate(states):
        gsum = st.grad_s.sum(axis=0)
        err = np.linalg.norm(st.y.sum(axis=0) - gsum)
        slacks["grad_conservation"].append((k, float(err), 0.0, 1.0 + float(np.linalg.norm(gsum))))
        if err > 1e-10 * (1.0 + np.linalg.norm(gsum)):
            violations.append(("grad_conservation", k, float(err), 0.0))

    for k in range(start, T):
        cur, nxt = states[k], states[k + 1]
        sc = consts[k]
        floor = ROUNDING_FLOOR * max(
            1.0, *(np.abs(v).max() for v in (cur.x, cur.x_prev, nxt.x, cur.y, nxt.y, x_star))
        )
        A, B = mixing[k].A, mixing[k].B
        opt, D, S, dx = V[k]
        opt1, D1, S1, dx1 = V[k + 1]
        pmin, pmax = pi[k].min(), pi[k].max()
        al = alpha * L * rn

        x_hat = phi[k] @ cur.x
        u = cur.x - cur.x_prev
        predicted = x_hat + (beta * phi[k + 1] + gamma * phi[k]) @ u - alpha * (phi[k + 1] @ cur.y)
        check_zero("weighted_average", k, np.linalg.norm(phi[k + 1] @ nxt.x - predicted), 1.0 + np.linalg.norm(x_hat))

        z = A @ cur.x
        lhs = np.sqrt(phi[k + 1] @ np.sum((z - x_hat) ** 2, axis=1))
        check("x_contraction", k, lhs, [sc.c * D])
        w = B @ cur.y
        ysum = cur.y.sum(axis=0)
        lhs = np.sqrt(pi[k + 1] @ np.sum((w / pi[k + 1][:, None] - ysum) ** 2, axis=1))
        check("y_contraction", k, lhs, [sc.tau * S])
        check("y_norm", k, np.sqrt(np.sum(np.sum(cur.y**2, axis=1) / pi[k])), [S, np.linalg.norm(ysum)])
        lr = L * rn
        check("y_sum", k, np.linalg.norm(ysum), [lr * sc.varphi * opt, lr * sc.varphi * D, lr * gamma * dx])

        ok_window = alpha < 2.0 / (n * pmin * L)
        ok_bound = alpha * n * pmax * (L + mu) <= 2.0
        if not (ok_window and ok_bound):
            reason = "alpha outside 0 < alpha < 2/(n min(pi_k) L)" if not ok_window else (
                "alpha n max(pi_k) (L + mu) > 2: contraction factor bound not guaranteed"
            )
            skipped.append((k, "prop1", reason))
        else:
            q = max(abs(1 - alpha * n * pmin * mu), abs(1 - alpha * n * pmin * L))
            check("prop1", k, opt1, [q * opt, al * sc.varphi * D, alpha * S, (beta + (1 + al) * gamma) * dx])
        check(
            "prop2",
            k,
            D1,
            [(sc.c + al * sc.varphi) * D, alpha * S, al * sc.varphi * opt, (beta + gamma * (sc.c + al)) * dx],
        )
        prop3 = [
            (beta + gamma * rn * (1 + alpha * L)) * dx,
            alpha * S,
            al * sc.varphi * opt,
            (sc.c * sc.varphi_next + sc.varphi + al * sc.varphi) * D,
        ]
        check("prop3", k, dx1, prop3)
        check("prop4", k, S1, [sc.tau * S, L * sc.r * (1 + gamma) * dx1, L * sc.r * gamma * dx])

        if alpha < 2.0 / (n * L) and ok_window and ok_bound:
            q = max(abs(1 - alpha * n * pmin * mu), abs(1 - alpha * n * pmin * L))
            Mk = m_matrix_step(alpha, beta, gamma, q, sc, n, L)
            for i, lhs in enumerate(V[k + 1]):
                check("prop5", k, lhs, Mk[i] * V[k])
        else:
            skipped.append((k, "prop5", "alpha outside (0, 2/(nL)) or the optimality-gap window"))

    return PropositionReport(slacks, skipped, violations, rtol, atol)


def certificate_dominates(cert, alpha, beta, gamma, pi, n, L):
    """True when ``M`` dominates every ``M_k`` entrywise over the horizon."""
    for k, sc in enumerate(cert.step):
        pmin = pi[k].min()
        q = max(abs(1 - alpha * n * pmin * cert.mu), abs(1 - alpha * n * pmin * L))
        if np.any(m_matrix_step(alpha, beta, gamma, q, sc, n, L) > cert.M * (1 + 1e-12) + 1e-300):
            return False
    return True
