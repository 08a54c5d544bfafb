import json
from dataclasses import replace

import numpy as np
import pytest

from pushpull.analysis import (
    HorizonBounds,
    admissible,
    certificate_dominates,
    certificate_from_bounds,
    certify,
    det4,
    dispersion,
    eta_constants,
    fit_linear_rate,
    horizon_bounds,
    horizon_setup,
    i_minus_m,
    m_matrix,
    parameter_ranges,
    quantities,
    spectral_radius,
    step_constants,
    tracking_error,
    verify_propositions,
)
from pushpull.errors import InvalidArgument
from pushpull.graph import Digraph, DigraphSequence, GraphStats, generate_sequence
from pushpull.problems import ridge_from_data, ridge_problem
from pushpull.solver import AgentSwarm, SolverConfig, run

from oracles import char_poly_eigs

RING3 = GraphStats(diameter=2, max_edge_utility=3, n=3)


def synthetic_constants(rng):
    """Random but internally consistent horizon constants."""
    n = int(rng.integers(2, 30))
    sigma = rng.uniform(0.001, 1) / n
    return dict(
        c=rng.uniform(0.01, 0.999),
        tau=rng.uniform(0.01, 0.999),
        r=np.sqrt(n) + 1 / np.sqrt(sigma),
        varphi=np.sqrt(n) * rng.uniform(1, 3),
        sigma=sigma,
        n=n,
        L=rng.uniform(0.1, 10),
    )


class TestQuantities:
    def test_zero_at_optimum(self):
        x_star = np.array([1.0, -2.0])
        x = np.tile(x_star, (3, 1))
        sw = AgentSwarm(x, x, x, np.zeros((3, 2)), np.zeros((3, 2)))
        q = quantities(sw, np.full(3, 1 / 3), np.full(3, 1 / 3), x_star)
        assert q.vector().tolist() == [0.0, 0.0, 0.0, 0.0]

    def test_symmetric_split(self):
        x = np.array([[1.0, 0.0], [-1.0, 0.0]])
        phi = np.array([0.5, 0.5])
        assert dispersion(x, phi) == 1.0
        assert (phi @ x).tolist() == [0.0, 0.0]

    def test_direct_summation(self):
        rng = np.random.default_rng(0)
        x, y = rng.standard_normal((2, 6, 3))
        phi, pi = rng.dirichlet(np.ones(6), size=2)
        x_hat = sum(phi[i] * x[i] for i in range(6))
        D = np.sqrt(sum(phi[i] * np.dot(x[i] - x_hat, x[i] - x_hat) for i in range(6)))
        total = sum(y[i] for i in range(6))
        S = np.sqrt(sum(pi[i] * np.dot(y[i] / pi[i] - total, y[i] / pi[i] - total) for i in range(6)))
        assert dispersion(x, phi) == pytest.approx(D, rel=1e-13)
        assert tracking_error(y, pi) == pytest.approx(S, rel=1e-13)

    def test_zero_pi_rejected(self):
        with pytest.raises(InvalidArgument):
            tracking_error(np.ones((2, 1)), np.array([1.0, 0.0]))


class TestStepConstants:
    def test_ring_three_by_hand(self):
        u = np.full(3, 1 / 3)
        sc = step_constants(RING3, u, u, u, u, 0.5, 0.5)
        # sqrt(1 - (1/3)(1/4) / ((1/9) * 6))
        assert sc.c == pytest.approx(np.sqrt(0.875), rel=1e-15)
        # sqrt(1 - (1/9)(1/4) / ((1/9)(1/3) * 6))
        assert sc.tau == pytest.approx(np.sqrt(0.875), rel=1e-15)
        assert sc.r == pytest.approx(np.sqrt(3) + np.sqrt(3))
        assert sc.varphi == pytest.approx(np.sqrt(3))

    def test_varphi_uniform_four(self):
        u = np.full(4, 0.25)
        sc = step_constants(GraphStats(1, 1, 4), u, u, u, u, 0.25, 0.25)
        assert sc.varphi == 2.0

    def test_rejects_single_node(self):
        with pytest.raises(InvalidArgument):
            step_constants(GraphStats(0, 0, 1), [1.0], [1.0], [1.0], [1.0], 1.0, 1.0)

    def test_open_intervals_on_generated_sequences(self):
        for seed in range(5):
            _, phi, pi, stats, a, b = horizon_setup(generate_sequence(6, 40, 0.3, seed))
            for k, st in enumerate(stats):
                sc = step_constants(st, phi[k], phi[k + 1], pi[k], pi[k + 1], a, b, k)
                assert 0 < sc.c < 1 and 0 < sc.tau < 1
                assert sc.r > np.sqrt(6) and sc.varphi >= 1


class TestHorizon:
    def setup_method(self):
        self.u = np.full(3, 1 / 3)
        self.sc = step_constants(RING3, self.u, self.u, self.u, self.u, 0.5, 0.5)

    def test_constant_graph_maxima(self):
        hb = horizon_bounds([self.sc] * 5, np.tile(self.u, (6, 1)), 0.01, 3, 1.0, 2.0)
        assert (hb.c, hb.tau, hb.r, hb.varphi) == (self.sc.c, self.sc.tau, self.sc.r, self.sc.varphi)

    def test_analytic_sigma(self):
        hb = horizon_bounds([self.sc], np.tile(self.u, (2, 1)), 0.01, 3, 1.0, 2.0, "analytic", b=0.5)
        assert hb.sigma == 1 / 24

    def test_q_bound_linear(self):
        hb = horizon_bounds([self.sc], np.tile(self.u, (2, 1)), 0.15, 3, 1.0, 2.0)
        assert hb.q_bound == pytest.approx(1 - 0.15 * 3 * (1 / 3) * 1.0)

    def test_alpha_window(self):
        with pytest.raises(InvalidArgument):
            horizon_bounds([self.sc], np.tile(self.u, (2, 1)), 2 / 9, 3, 1.0, 2.0)


class TestEtas:
    def test_eta1_by_hand(self):
        e = eta_constants(c=0.5, tau=0.5, r=3.0, varphi=2.0, sigma=0.25, n=2, mu=1.0, L=2.0, gamma=0.0)
        # (1 - tau)(1 - c) n sigma mu = 0.5 * 0.5 * 2 * 0.25 * 1
        assert e.eta1 == pytest.approx(0.125, rel=1e-15)

    def test_gamma_zero_eta6(self):
        e = eta_constants(0.6, 0.7, 4.0, 2.5, 0.1, 5, 0.3, 1.5, 0.0)
        assert e.eta6 == pytest.approx(e.eta2 + e.eta3 + 1.5**2 * 5 * 2.5 * e.eta4, rel=1e-14)

    def test_gamma_sqrt_n_rejected(self):
        with pytest.raises(InvalidArgument):
            eta_constants(0.6, 0.7, 4.0, 2.5, 0.1, 4, 0.3, 1.5, 0.5)

    def test_all_positive(self):
        rng = np.random.default_rng(1)
        for _ in range(200):
            k = synthetic_constants(rng)
            e = eta_constants(k["c"], k["tau"], k["r"], k["varphi"], k["sigma"], k["n"], 0.5 * k["L"], k["L"], 0.0)
            assert all(v > 0 for v in e.as_tuple())


class TestMatrix:
    def test_alpha_zero_structure(self):
        c, tau, r, phi, L = 0.6, 0.8, 3.0, 2.0, 1.5
        M = m_matrix(0.0, 0.0, 0.0, c, tau, r, phi, 0.2, 3, 0.5, L)
        expected = np.array(
            [
                [1, 0, 0, 0],
                [0, c, 0, 0],
                [0, L * r * (c + 1) * phi, tau, 0],
                [0, (c + 1) * phi, 0, 0],
            ]
        )
        np.testing.assert_allclose(M, expected, rtol=1e-15)
        eig = np.sort(np.abs(np.linalg.eigvals(M)))
        np.testing.assert_allclose(eig, [0, c, tau, 1], atol=1e-15)
        assert spectral_radius(M) == 1.0

    def test_entry_first_row_last_column(self):
        rng = np.random.default_rng(2)
        for _ in range(20):
            a, b, g = rng.uniform(0, 0.1, 3)
            k = synthetic_constants(rng)
            M = m_matrix(a, b, g, k["c"], k["tau"], k["r"], k["varphi"], k["sigma"], k["n"], 0.1, k["L"])
            assert M[0, 3] == pytest.approx(b + g * (1 + a * k["L"] * np.sqrt(k["n"])), rel=1e-15)

    def test_i_minus_m_matches_subtraction(self):
        rng = np.random.default_rng(3)
        k = synthetic_constants(rng)
        args = (1e-3, 0.01, 0.02, k["c"], k["tau"], k["r"], k["varphi"], k["sigma"], k["n"], 0.1, k["L"])
        np.testing.assert_allclose(i_minus_m(*args), np.eye(4) - m_matrix(*args), atol=1e-14)

    def test_det4_matches_lapack(self):
        rng = np.random.default_rng(4)
        for _ in range(50):
            m = rng.standard_normal((4, 4))
            assert det4(m) == pytest.approx(np.linalg.det(m), rel=1e-10, abs=1e-12)


class TestSpectralRadius:
    def test_identity(self):
        assert spectral_radius(np.eye(4)) == 1.0

    def test_diagonal(self):
        assert spectral_radius(np.diag([0.3, 0.2, 0.9, 0.5])) == 0.9

    def test_characteristic_polynomial_oracle(self):
        rng = np.random.default_rng(5)
        for _ in range(100):
            M = rng.uniform(0, 1, (4, 4))
            assert spectral_radius(M) == pytest.approx(np.abs(char_poly_eigs(M)).max(), rel=1e-8)

    def test_non_finite(self):
        with pytest.raises(InvalidArgument):
            spectral_radius(np.full((4, 4), np.nan))


class TestRanges:
    def test_momentum_free_range(self):
        rng = np.random.default_rng(6)
        k = synthetic_constants(rng)
        mu = 0.3 * k["L"]
        e = eta_constants(k["c"], k["tau"], k["r"], k["varphi"], k["sigma"], k["n"], mu, k["L"], 0.0)
        pr = parameter_ranges(e, k["c"], k["tau"], k["r"], k["varphi"], k["n"], mu, k["L"])
        rn = np.sqrt(k["n"])
        expected = min(
            (1 - k["c"]) / (k["L"] * rn * k["varphi"]),
            (1 - k["tau"]) / (k["L"] * k["r"]),
            e.eta1 / e.eta6,
            2 / (k["n"] * (k["L"] + mu)),
        )
        assert pr.alpha_max == pytest.approx(expected, rel=1e-15)

    def test_kappa_at_threshold_empty(self):
        rng = np.random.default_rng(7)
        k = synthetic_constants(rng)
        e = eta_constants(k["c"], k["tau"], k["r"], k["varphi"], k["sigma"], k["n"], 0.2, k["L"], 0.0)
        pr = parameter_ranges(e, k["c"], k["tau"], k["r"], k["varphi"], k["n"], 0.2, k["L"], kappa=e.eta1 / e.eta5)
        assert pr.empty
        assert not admissible(1e-12, 0.0, 0.0, pr, k["n"])

    def test_inside_ranges_certifies(self):
        rng = np.random.default_rng(8)
        checked = 0
        for _ in range(3000):
            k = synthetic_constants(rng)
            mu = k["L"] * rng.uniform(0.001, 1)
            e0 = eta_constants(k["c"], k["tau"], k["r"], k["varphi"], k["sigma"], k["n"], mu, k["L"], 0.0)
            kmax = e0.eta1 / e0.eta5
            beta = rng.uniform(0, kmax)
            gamma = rng.uniform(0, min(kmax, (1 - beta) / np.sqrt(k["n"])))
            hb = HorizonBounds(k["c"], k["tau"], k["r"], k["varphi"], k["sigma"], 0.0)
            e = eta_constants(k["c"], k["tau"], k["r"], k["varphi"], k["sigma"], k["n"], mu, k["L"], gamma)
            pr = parameter_ranges(e, k["c"], k["tau"], k["r"], k["varphi"], k["n"], mu, k["L"], max(beta, gamma))
            if pr.empty:
                continue
            alpha = pr.alpha_max * rng.uniform(0.001, 0.999)
            if alpha * k["n"] * k["sigma"] * mu < 1e-9:
                # 1 - rho_M would sit below the rounding level of the eigenvalue solver
                continue
            cert = certificate_from_bounds(
                replace(hb, q_bound=1 - alpha * k["n"] * k["sigma"] * mu), alpha, beta, gamma, k["n"], mu, k["L"]
            )
            assert cert.verdict
            assert cert.diag_below_one and cert.det_I_minus_M > 0 and cert.rho_M < 1
            checked += 1
        assert checked > 500


class TestCertificate:
    def setup_method(self):
        rng = np.random.default_rng(0)
        self.prob = ridge_from_data(
            [rng.standard_normal((3, 2)) for _ in range(3)], [rng.standard_normal(3) for _ in range(3)], 1.0
        )
        self.graphs = generate_sequence(3, 60, 0.5, 1)
        self.setup = horizon_setup(self.graphs)

    def test_json_keys(self):
        cert = certify(self.prob, self.graphs, 1e-6, setup=self.setup)
        d = json.loads(cert.to_json())
        for key in ("c", "tau", "r", "varphi", "sigma", "rho_M", "alpha_max", "kappa_max", "verdict"):
            assert key in d
        assert [f"eta{i}" in d for i in range(1, 7)] == [True] * 6

    def test_dominates_per_step(self):
        for alpha, beta, gamma in [(1e-6, 0.0, 0.0), (1e-5, 1e-4, 1e-4), (1e-3, 0.3, 0.1)]:
            cert = certify(self.prob, self.graphs, alpha, beta, gamma, setup=self.setup)
            assert certificate_dominates(cert, alpha, beta, gamma, self.setup[2], 3, self.prob.global_L)

    def test_linear_constraint_fails_verdict(self):
        cert = certify(self.prob, self.graphs, 1e-7, 0.99, 0.2, setup=self.setup)
        assert not cert.verdict

    def test_single_agent_rejected(self):
        prob = ridge_from_data([np.eye(2)], [np.ones(2)], 1.0)
        with pytest.raises(InvalidArgument):
            certify(prob, DigraphSequence.constant(Digraph(1), 3), 1e-3)


class TestFitRate:
    def test_geometric(self):
        rho, r2 = fit_linear_rate(2.0 ** -np.arange(60))
        assert rho == pytest.approx(0.5, abs=1e-9) and r2 == pytest.approx(1.0)

    def test_constant(self):
        assert fit_linear_rate(np.full(30, 3.0))[0] == 1.0

    def test_stops_at_zero(self):
        res = np.concatenate([0.9 ** np.arange(40), [0.0, 5.0]])
        assert fit_linear_rate(res)[0] == pytest.approx(0.9)

    def test_too_short(self):
        with pytest.raises(InvalidArgument):
            fit_linear_rate([1.0, 0.5])


class TestVerify:
    def test_consensus_start_at_optimum(self):
        # identical agents share x*, so every local gradient vanishes there
        rng = np.random.default_rng(2)
        H, z = rng.standard_normal((2, 3)), rng.standard_normal(2)
        prob = ridge_from_data([H] * 4, [z] * 4, 0.1)
        x0 = np.tile(prob.reference_optimum, (4, 1))
        g = generate_sequence(4, 30, 0.3, 0)
        rec = run(prob, g, SolverConfig(0.01, max_iters=30), x_init=x0, keep_states=True)
        rep = verify_propositions(rec, prob, 0.01, 0.0, 0.0, g)
        assert rep.ok
        for name in ("prop2", "prop3", "prop4"):
            assert all(abs(lhs) < 1e-12 for _, lhs, _, _ in rep.slacks[name])

    def test_run_without_states_rejected(self):
        prob = ridge_problem(3, 2, 1, 0.1)
        g = generate_sequence(3, 5, 0.3, 0)
        with pytest.raises(InvalidArgument):
            verify_propositions(run(prob, g, SolverConfig(0.01, max_iters=5)), prob, 0.01, 0, 0, g)

    @pytest.mark.parametrize("params", [(0.02, 0.0, 0.0), (0.02, 0.3, 0.0), (0.02, 0.0, 0.1), (0.02, 0.3, 0.1)])
    def test_modes_have_no_violations(self, params):
        prob = ridge_problem(5, 4, 3, 0.5, seed=3)
        g = generate_sequence(5, 300, 0.3, 1)
        x0 = np.random.default_rng(0).standard_normal((5, 4))
        rec = run(prob, g, SolverConfig(*params, max_iters=300), x_init=x0, keep_states=True)
        rep = verify_propositions(rec, prob, *params, g)
        assert rep.ok, rep.violations[:5]
        assert rep.count("prop4") == 300
        assert rep.to_csv().startswith("k,check,lhs,rhs,slack")

    def test_detects_corrupted_trajectory(self):
        prob = ridge_problem(5, 4, 3, 0.5, seed=3)
        g = generate_sequence(5, 50, 0.3, 1)
        x0 = np.random.default_rng(0).standard_normal((5, 4))
        rec = run(prob, g, SolverConfig(0.02, max_iters=50), x_init=x0, keep_states=True)
        st = rec.states[20]
        rec.states[20] = replace(st, x=st.x + 1.0, y=st.y * 3.0)
        rep = verify_propositions(rec, prob, 0.02, 0.0, 0.0, g)
        assert not rep.ok
        assert {"weighted_average", "grad_conservation"} <= {v[0] for v in rep.violations}
