// SPDX-License-Identifier: Apache-2.0
//
// satbeam - joint linear precoding and DFT-codebook beam selection
// for multi-beam satellite payloads
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include <catch_amalgamated.hpp>

#include "satbeam/baselines.hpp"
#include "satbeam/metrics.hpp"
#include "satbeam/wmmse.hpp"
#include "test_support.hpp"

using namespace satbeam;

TEST_CASE("receive coefficient updates")
{
    const DftCodebook cb = build_codebook(16);
    const Window win = centered_window(16, 8);
    const Scene scene = test::desk_scene(3, 3, 8, 1.0, 3.0);
    Rng rng(4);
    const Assignment a = random_assignment(16, 3, rng);

    SECTION("zero precoder yields zero coefficients")
    {
        const Precoder zero{arma::cx_mat(3, 3, arma::fill::zeros)};
        const arma::cx_vec deltas = update_receive_coeffs(scene, cb, win, a, zero);
        REQUIRE(arma::norm(deltas) == 0.0);
    }

    SECTION("scalar case: g = 1, sigma^2 = 1 gives 1/2")
    {
        // delta* = conj(g) / (|g|^2 + sigma^2)
        Scene s1 = test::desk_scene(5, 1, 8, 1.0, 1.0);
        Assignment a1;
        a1.row_of = {2};
        // construct a precoder that realizes g_{11} = 1 through the chain
        const arma::cx_mat e = effective_gain_matrix(s1, cb, win, a1);
        Precoder u{arma::cx_mat(1, 1)};
        u.u(0, 0) = 1.0 / e(0, 0);
        const arma::cx_vec deltas = update_receive_coeffs(s1, cb, win, a1, u);
        REQUIRE(std::abs(deltas(0) - arma::cx_double(0.5, 0.0)) < 1e-12);
    }

    SECTION("minimizes the MSE against random perturbations")
    {
        const Precoder u{test::random_precoder(rng, 3, 3.0)};
        const arma::cx_vec deltas = update_receive_coeffs(scene, cb, win, a, u);
        for (arma::uword user = 0; user < 3; ++user)
        {
            const double e_opt = mse(scene, cb, win, a, u, deltas(user), user);
            for (int p = 0; p < 100; ++p)
            {
                const arma::cx_double perturbation(rng.normal(), rng.normal());
                const double e_perturbed =
                    mse(scene, cb, win, a, u, deltas(user) + 1e-3 * perturbation, user);
                REQUIRE(e_opt <= e_perturbed + 1e-15);
            }
        }
    }
}

TEST_CASE("MSE weight updates")
{
    const DftCodebook cb = build_codebook(16);
    const Window win = centered_window(16, 8);
    const Scene scene = test::desk_scene(9, 3, 8, 1.0, 3.0);
    Rng rng(10);
    const Assignment a = random_assignment(16, 3, rng);

    SECTION("zero precoder pins all weights at one")
    {
        const Precoder zero{arma::cx_mat(3, 3, arma::fill::zeros)};
        const arma::vec omegas = update_mse_weights(scene, cb, win, a, zero);
        REQUIRE(arma::norm(omegas - arma::vec(3, arma::fill::ones)) == 0.0);
    }

    SECTION("omega = 1 + SINR")
    {
        const Precoder u{test::random_precoder(rng, 3, 3.0)};
        const arma::vec omegas = update_mse_weights(scene, cb, win, a, u);
        for (arma::uword user = 0; user < 3; ++user)
        {
            REQUIRE(omegas(user) ==
                    Catch::Approx(1.0 + sinr(scene, cb, win, a, u, user)).epsilon(1e-12));
            REQUIRE(omegas(user) >= 1.0);
        }
    }

    SECTION("omega* times e(delta*) is one")
    {
        for (int trial = 0; trial < 20; ++trial)
        {
            const Scene s = test::desk_scene(30 + trial, 3, 8, 0.5, 3.0);
            const Assignment ar = random_assignment(16, 3, rng);
            const Precoder u{test::random_precoder(rng, 3, 3.0)};
            const arma::cx_vec deltas = update_receive_coeffs(s, cb, win, ar, u);
            const arma::vec omegas = update_mse_weights(s, cb, win, ar, u);
            for (arma::uword user = 0; user < 3; ++user)
            {
                const double e = mse(s, cb, win, ar, u, deltas(user), user);
                REQUIRE(omegas(user) * e == Catch::Approx(1.0).margin(1e-9));
            }
        }
    }
}

TEST_CASE("precoder normal matrix")
{
    const DftCodebook cb = build_codebook(16);
    const Window win = centered_window(16, 8);
    Rng rng(11);

    SECTION("zero receive coefficients zero everything")
    {
        const Scene scene = test::desk_scene(12, 3, 8, 1.0, 3.0);
        const Assignment a = random_assignment(16, 3, rng);
        const arma::cx_vec deltas(3, arma::fill::zeros);
        const arma::vec omegas(3, arma::fill::ones);
        const NormalMatrix nm = precoder_normal_matrix(scene, cb, win, a, deltas, omegas);
        REQUIRE(arma::norm(nm.theta, "fro") == 0.0);
        REQUIRE(arma::norm(nm.k, "fro") == 0.0);
    }

    SECTION("single user: rank one with the selected beam gain")
    {
        const Scene scene = test::desk_scene(13, 1, 8, 1.0, 1.0);
        Assignment a;
        a.row_of = {6};
        const arma::cx_vec deltas{arma::cx_double(0.4, 0.2)};
        const arma::vec omegas{2.5};
        const NormalMatrix nm = precoder_normal_matrix(scene, cb, win, a, deltas, omegas);
        const arma::cx_mat t = beam_domain_channel(cb, effective_channel(scene.h, win, cb));
        const double expected = omegas(0) * std::norm(deltas(0)) * std::norm(t(6, 0));
        REQUIRE(std::real(nm.theta(0, 0)) == Catch::Approx(expected).epsilon(1e-12));
        REQUIRE(std::imag(nm.theta(0, 0)) == Catch::Approx(0.0).margin(1e-15));
    }

    SECTION("Hermitian and positive semidefinite")
    {
        for (int trial = 0; trial < 20; ++trial)
        {
            const Scene scene = test::desk_scene(40 + trial, 4, 8, 1.0, 4.0);
            const Assignment a = random_assignment(16, 4, rng);
            const Precoder u{test::random_precoder(rng, 4, 4.0)};
            const arma::cx_vec deltas = update_receive_coeffs(scene, cb, win, a, u);
            const arma::vec omegas = update_mse_weights(scene, cb, win, a, u);
            const NormalMatrix nm = precoder_normal_matrix(scene, cb, win, a, deltas, omegas);

            REQUIRE(arma::norm(nm.theta - nm.theta.t(), "fro") < 1e-12);
            arma::vec eigs;
            REQUIRE(arma::eig_sym(eigs, nm.theta));
            REQUIRE(eigs.min() >= -1e-10);
        }
    }
}

TEST_CASE("closed-form precoder solves the shifted system")
{
    SECTION("theta = 0, beta = 1 returns omega k")
    {
        NormalMatrix nm;
        nm.theta = arma::cx_mat(2, 2, arma::fill::zeros);
        Rng rng(14);
        nm.k = test::random_precoder(rng, 2, 4.0);
        const arma::vec omegas{1.5, 3.0};
        const Precoder u = precoder_closed_form(nm, omegas, 1.0);
        REQUIRE(arma::norm(u.u - nm.k * arma::diagmat(omegas), "fro") < 1e-12);
    }

    SECTION("theta = I, beta = 1, omega = 2 returns k")
    {
        NormalMatrix nm;
        nm.theta = arma::cx_mat(arma::eye(2, 2), arma::zeros(2, 2));
        Rng rng(15);
        nm.k = test::random_precoder(rng, 2, 4.0);
        const arma::vec omegas{2.0, 2.0};
        const Precoder u = precoder_closed_form(nm, omegas, 1.0);
        REQUIRE(arma::norm(u.u - nm.k, "fro") < 1e-12);
    }

    SECTION("stationary point of the Lagrangian by finite differences")
    {
        Rng rng(16);
        const arma::uword m = 3;
        arma::cx_mat b(m, m);
        for (auto &x : b)
            x = arma::cx_double(rng.normal(), rng.normal());
        NormalMatrix nm;
        nm.theta = b.t() * b; // random Hermitian PSD
        nm.k = test::random_precoder(rng, m, 2.0);
        const arma::vec omegas{1.2, 2.1, 3.3};
        const double beta = 0.7;
        const Precoder u = precoder_closed_form(nm, omegas, beta);

        auto lagrangian = [&](const arma::cx_mat &cand) {
            double val = 0.0;
            for (arma::uword col = 0; col < m; ++col)
            {
                const arma::cx_vec v = cand.col(col);
                val += std::real(arma::cdot(v, nm.theta * v)) + beta * std::real(arma::cdot(v, v));
                val -= 2.0 * omegas(col) * std::real(arma::cdot(nm.k.col(col), v));
            }
            return val;
        };

        const double step = 1e-6;
        for (arma::uword col = 0; col < m; ++col)
            for (arma::uword row = 0; row < m; ++row)
                for (int part = 0; part < 2; ++part)
                {
                    const arma::cx_double dir =
                        part == 0 ? arma::cx_double(step, 0.0) : arma::cx_double(0.0, step);
                    arma::cx_mat up = u.u, down = u.u;
                    up(row, col) += dir;
                    down(row, col) -= dir;
                    const double grad = (lagrangian(up) - lagrangian(down)) / (2.0 * step);
                    REQUIRE(std::abs(grad) < 1e-8 * std::max(1.0, arma::norm(nm.k, "fro")));
                }
    }
}

TEST_CASE("dual solve for the power constraint")
{
    SECTION("already feasible at beta = 0")
    {
        NormalMatrix nm;
        nm.theta = arma::cx_mat(arma::eye(2, 2) * 4.0, arma::zeros(2, 2));
        nm.k = arma::cx_mat(arma::eye(2, 2) * 0.1, arma::zeros(2, 2));
        const arma::vec omegas{1.0, 1.0};
        SolverConfig config;
        const BetaSolve out = solve_beta(nm, omegas, 100.0, config);
        REQUIRE(out.beta == 0.0);
        REQUIRE(out.precoder.power() <= 100.0);
        REQUIRE(out.converged);
    }

    SECTION("scalar case beta = |omega k| / sqrt(p)")
    {
        NormalMatrix nm;
        nm.theta = arma::cx_mat(1, 1, arma::fill::zeros);
        nm.k = arma::cx_mat(1, 1);
        nm.k(0, 0) = arma::cx_double(0.3, 0.4); // |k| = 0.5
        const arma::vec omegas{2.0};
        const double p = 0.25;
        SolverConfig config;
        const BetaSolve out = solve_beta(nm, omegas, p, config);
        // u = omega k / beta, |u|^2 = p -> beta = |omega k| / sqrt(p)
        REQUIRE(out.beta == Catch::Approx(1.0 / 0.5).epsilon(1e-6));
        REQUIRE(out.precoder.power() == Catch::Approx(p).epsilon(1e-6));
    }

    SECTION("bisection and subgradient agree")
    {
        const DftCodebook cb = build_codebook(16);
        const Window win = centered_window(16, 8);
        Rng rng(17);
        for (int trial = 0; trial < 10; ++trial)
        {
            const Scene scene = test::desk_scene(70 + trial, 3, 8, 1.0, 3.0);
            const Assignment a = random_assignment(16, 3, rng);
            const Precoder u{test::random_precoder(rng, 3, 3.0)};
            const arma::cx_vec deltas = update_receive_coeffs(scene, cb, win, a, u);
            const arma::vec omegas = update_mse_weights(scene, cb, win, a, u);
            const NormalMatrix nm = precoder_normal_matrix(scene, cb, win, a, deltas, omegas);

            SolverConfig bisect;
            SolverConfig subgrad;
            subgrad.beta_mode = BetaMode::subgradient;
            const BetaSolve b = solve_beta(nm, omegas, scene.power_budget, bisect);
            const BetaSolve s = solve_beta(nm, omegas, scene.power_budget, subgrad);
            REQUIRE(s.converged);

            if (b.beta > 0.0)
                REQUIRE(std::abs(b.beta - s.beta) <= 1e-3 * b.beta);

            auto objective = [&](const Precoder &prec) {
                double val = 0.0;
                for (arma::uword col = 0; col < 3; ++col)
                {
                    const arma::cx_vec v = prec.u.col(col);
                    val += std::real(arma::cdot(v, nm.theta * v));
                    val -= 2.0 * omegas(col) * std::real(arma::cdot(nm.k.col(col), v));
                }
                return val;
            };
            const double ob = objective(b.precoder);
            const double os = objective(s.precoder);
            REQUIRE(std::abs(ob - os) <= 1e-6 * std::max(1.0, std::abs(ob)));
        }
    }
}

namespace
{

// single-user instance with real positive beam gains: the global optimum is
// the strongest beam at full power, and the guarded descent reaches it from
// any initial assignment
Scene aligned_single_user_scene(const DftCodebook &cb)
{
    const arma::uword n = cb.n;
    arma::vec gains(n);
    for (arma::uword i = 0; i < n; ++i)
        gains(i) = 0.2 + 0.05 * static_cast<double>(i % 7);
    gains(9) = 1.2; // unique maximum
    Scene scene = test::desk_scene(1, 1, n, 2.0, 1.0);
    scene.h = cb.dense() * arma::cx_mat(gains, arma::zeros(n)); // t = W^H h = gains
    return scene;
}

} // namespace

TEST_CASE("solve: single user takes the strongest beam at full power")
{
    const arma::uword n = 16;
    const DftCodebook cb = build_codebook(n);
    const Window win{0, n};
    const Scene scene = aligned_single_user_scene(cb);
    const arma::cx_mat t = beam_domain_channel(cb, effective_channel(scene.h, win, cb));
    const arma::uword best_row = arma::index_max(arma::abs(t.col(0)));

    // sweeping all rows confirms the oracle
    REQUIRE(best_row == 9);

    for (std::uint64_t seed : {1u, 2u, 3u, 4u, 5u})
    {
        SolverConfig config;
        config.seed = seed;
        const SolverState state = solve(scene, cb, win, config);
        REQUIRE(state.converged);
        REQUIRE(state.assignment.row_of[0] == best_row);
        REQUIRE(state.precoder.power() ==
                Catch::Approx(scene.power_budget).epsilon(1e-6));
    }
}

TEST_CASE("solve: termination contract")
{
    const DftCodebook cb = build_codebook(16);
    const Window win = centered_window(16, 8);
    const Scene scene = test::desk_scene(91, 3, 8, 1.0, 3.0);
    SolverConfig config;
    config.seed = 5;
    const SolverState state = solve(scene, cb, win, config);
    REQUIRE(state.converged);
    REQUIRE(state.objective_trace.size() >= 2);
    const double last = state.objective_trace.back();
    const double prev = state.objective_trace[state.objective_trace.size() - 2];
    REQUIRE(std::abs(last - prev) / std::max(std::abs(prev), 1e-12) < config.tolerance);
}

TEST_CASE("solve: per-update monotonicity of the objective")
{
    const DftCodebook cb = build_codebook(16);
    const Window win = centered_window(16, 8);
    Rng rng(23);

    for (int trial = 0; trial < 10; ++trial)
    {
        const Scene scene = test::desk_scene(500 + trial, 3, 8, 1.0, 3.0);
        Assignment a = random_assignment(16, 3, rng);
        Precoder u{test::random_precoder(rng, 3, 3.0)};
        arma::cx_vec deltas = test::random_cx_vec(rng, 3) * 0.1;
        arma::vec omegas(3, arma::fill::ones);

        double g = wmmse_objective(scene, cb, win, a, u, deltas, omegas);
        for (int sweep = 0; sweep < 5; ++sweep)
        {
            deltas = update_receive_coeffs(scene, cb, win, a, u);
            double g_next = wmmse_objective(scene, cb, win, a, u, deltas, omegas);
            REQUIRE(g_next <= g + 1e-9 * std::max(1.0, std::abs(g)));
            g = g_next;

            omegas = update_mse_weights(scene, cb, win, a, u);
            g_next = wmmse_objective(scene, cb, win, a, u, deltas, omegas);
            REQUIRE(g_next <= g + 1e-9 * std::max(1.0, std::abs(g)));
            g = g_next;

            const NormalMatrix nm = precoder_normal_matrix(scene, cb, win, a, deltas, omegas);
            SolverConfig config;
            const BetaSolve bs = solve_beta(nm, omegas, scene.power_budget, config);
            u = bs.precoder;
            g_next = wmmse_objective(scene, cb, win, a, u, deltas, omegas);
            REQUIRE(g_next <= g + 1e-9 * std::max(1.0, std::abs(g)));
            g = g_next;
        }
    }
}

TEST_CASE("solve: state invariants on random scenes")
{
    const DftCodebook cb = build_codebook(16);
    const Window win = centered_window(16, 8);

    for (int trial = 0; trial < 15; ++trial)
    {
        const Scene scene = test::desk_scene(700 + trial, 4, 8, 1.0, 4.0);
        SolverConfig config;
        config.seed = 200 + trial;
        const SolverState state = solve(scene, cb, win, config);

        // trace monotone within slack
        for (std::size_t i = 1; i < state.objective_trace.size(); ++i)
            REQUIRE(state.objective_trace[i] <=
                    state.objective_trace[i - 1] +
                        1e-9 * std::max(1.0, std::abs(state.objective_trace[i - 1])));

        REQUIRE(state.omegas.min() >= 1.0);
        REQUIRE(state.beta >= 0.0);
        REQUIRE(state.precoder.power() <= scene.power_budget * (1.0 + 1e-6));
        REQUIRE(state.max_stationarity_residual <= 1e-8);
        REQUIRE(state.max_power_excess <= 1e-6);
        REQUIRE(state.max_slackness <= 1e-6);
        REQUIRE(state.assignment.feasible(16));
    }
}

TEST_CASE("solve: beats the greedy baseline on most desk seeds")
{
    const DftCodebook cb = build_codebook(16);
    const Window win = centered_window(16, 8);
    int wins = 0;
    const int trials = 50;
    for (int trial = 0; trial < trials; ++trial)
    {
        const Scene scene = test::desk_scene(1000 + trial, 3, 8, 1.0, 3.0);
        SolverConfig config;
        config.seed = 77 + trial;
        const SolverState state = solve(scene, cb, win, config);
        const double wmmse_rate = sum_rate(scene, cb, win, state.assignment, state.precoder);
        const SchemeResult greedy = run_scheme(SchemeId::greedy_zf, scene, cb, win, config);
        if (wmmse_rate >= greedy.sum_rate)
            ++wins;
    }
    REQUIRE(wins * 100 >= 90 * trials);
}
