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

#include "satbeam/assignment.hpp"
#include "satbeam/wmmse.hpp"
#include "test_support.hpp"

using namespace satbeam;

namespace
{

CostMatrix random_cost(Rng &rng, arma::uword n, arma::uword m)
{
    arma::mat rho(n, m);
    for (auto &x : rho)
        x = rng.uniform(-10.0, 10.0);
    return CostMatrix{rho};
}

} // namespace

TEST_CASE("assignment weights vanish for a zero precoder")
{
    const DftCodebook cb = build_codebook(8);
    const Window win = centered_window(8, 4);
    const Scene scene = test::desk_scene(1, 2, 4, 1.0, 1.0);
    const Precoder zero{arma::cx_mat(2, 2, arma::fill::zeros)};
    const arma::cx_vec deltas(2, arma::fill::ones);
    const arma::vec omegas(2, arma::fill::ones);

    const CostMatrix cost = assignment_weights(scene, cb, win, zero, deltas, omegas);
    REQUIRE(arma::accu(arma::abs(cost.rho)) == 0.0);
}

TEST_CASE("assignment weights match the scalar expansion for M = 1")
{
    const arma::uword n = 2;
    const DftCodebook cb = build_codebook(n);
    const Window win{0, 1};
    Scene scene = test::desk_scene(2, 1, 1, 1.0, 1.0);
    scene.h(0, 0) = arma::cx_double(0.6, -0.2);

    Precoder u{arma::cx_mat(1, 1)};
    u.u(0, 0) = arma::cx_double(0.9, 0.4);
    const arma::cx_vec deltas{arma::cx_double(0.5, -0.3)};
    const arma::vec omegas{1.7};

    const CostMatrix cost = assignment_weights(scene, cb, win, u, deltas, omegas);
    const arma::cx_mat t = beam_domain_channel(cb, effective_channel(scene.h, win, cb));

    for (arma::uword row = 0; row < n; ++row)
    {
        const double expected =
            omegas(0) * std::norm(deltas(0)) * std::norm(t(row, 0)) * std::norm(u.u(0, 0)) -
            2.0 * std::real(omegas(0) * deltas(0) * std::conj(t(row, 0)) * u.u(0, 0));
        REQUIRE(cost.rho(row, 0) == Catch::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("assignment weights match a dense term-by-term recomputation")
{
    const arma::uword n = 6, k = 3, m = 3;
    const DftCodebook cb = build_codebook(n);
    const Window win = centered_window(n, k);
    Rng rng(42);

    for (int trial = 0; trial < 20; ++trial)
    {
        const Scene scene = test::desk_scene(800 + trial, m, k, 0.8, 3.0);
        const Precoder u{test::random_precoder(rng, m, 3.0)};
        arma::cx_vec deltas = test::random_cx_vec(rng, m) * 0.3;
        arma::vec omegas(m);
        for (auto &w : omegas)
            w = rng.uniform(1.0, 4.0);

        const CostMatrix cost = assignment_weights(scene, cb, win, u, deltas, omegas);

        // independent dense recomputation
        const arma::cx_mat w_dense = test::dense_dft(n);
        const arma::cx_mat phi(test::dense_window(n, win), arma::zeros(k, n));
        const arma::cx_mat h_tilde = phi.st() * scene.h; // Phi^T H
        const arma::cx_mat t = w_dense.t() * h_tilde;
        arma::cx_mat gram(m, m, arma::fill::zeros);
        for (arma::uword j = 0; j < m; ++j)
            gram += u.u.col(j) * u.u.col(j).t();

        for (arma::uword row = 0; row < n; ++row)
        {
            double c_n = 0.0;
            for (arma::uword um = 0; um < m; ++um)
                c_n += omegas(um) * std::norm(deltas(um)) * std::norm(t(row, um));
            const arma::cx_mat psi = c_n * gram;
            arma::cx_vec f(m, arma::fill::zeros);
            for (arma::uword um = 0; um < m; ++um)
                f += omegas(um) * deltas(um) * std::conj(t(row, um)) * u.u.col(um);
            for (arma::uword um = 0; um < m; ++um)
            {
                const double expected = std::real(psi(um, um)) - 2.0 * std::real(f(um));
                REQUIRE(cost.rho(row, um) == Catch::Approx(expected).margin(1e-10));
            }
        }
    }
}

TEST_CASE("hungarian on hand instances")
{
    SECTION("identity-favoring cost")
    {
        arma::mat rho(3, 3, arma::fill::ones);
        rho.diag().zeros();
        const Assignment a = hungarian(CostMatrix{rho});
        REQUIRE(a.row_of == std::vector<arma::uword>{0, 1, 2});
        REQUIRE(assignment_cost(CostMatrix{rho}, a) == 0.0);
    }

    SECTION("rectangular 3x2 instance")
    {
        arma::mat rho = {{1.0, 2.0}, {3.0, 1.0}, {0.0, 0.0}};
        const CostMatrix cost{rho};
        const Assignment a = hungarian(cost);
        REQUIRE(a.feasible(3));
        REQUIRE(assignment_cost(cost, a) == 1.0);
        const Assignment oracle = brute_force_assignment(cost);
        REQUIRE(assignment_cost(cost, oracle) == 1.0);
    }

    SECTION("rejects infeasible shapes and non-finite costs")
    {
        REQUIRE_THROWS_AS(hungarian(CostMatrix{arma::mat(2, 3, arma::fill::zeros)}),
                          std::invalid_argument);
        arma::mat bad(3, 2, arma::fill::zeros);
        bad(0, 0) = arma::datum::nan;
        REQUIRE_THROWS_AS(hungarian(CostMatrix{bad}), std::invalid_argument);
    }
}

TEST_CASE("hungarian equals brute force on random instances")
{
    Rng rng(77);
    for (int trial = 0; trial < 200; ++trial)
    {
        const CostMatrix cost = random_cost(rng, 8, 6);
        const Assignment h = hungarian(cost);
        const Assignment b = brute_force_assignment(cost);
        REQUIRE(h.feasible(8));
        REQUIRE(assignment_cost(cost, h) == assignment_cost(cost, b));
    }
}

TEST_CASE("brute force contracts")
{
    SECTION("1x1")
    {
        const CostMatrix cost{arma::mat(1, 1, arma::fill::value(3.5))};
        REQUIRE(brute_force_assignment(cost).row_of == std::vector<arma::uword>{0});
    }

    SECTION("all-equal costs tie-break lexicographically")
    {
        const CostMatrix cost{arma::mat(5, 3, arma::fill::value(2.0))};
        REQUIRE(brute_force_assignment(cost).row_of == std::vector<arma::uword>{0, 1, 2});
    }

    SECTION("instance too large")
    {
        const CostMatrix cost{arma::mat(60, 10, arma::fill::zeros)};
        REQUIRE_THROWS_AS(brute_force_assignment(cost), std::invalid_argument);
    }
}

TEST_CASE("column shift leaves the optimal assignment unchanged")
{
    Rng rng(88);
    for (int trial = 0; trial < 40; ++trial)
    {
        const CostMatrix cost = random_cost(rng, 7, 4);
        const double shift = rng.uniform(-5.0, 5.0);
        const arma::uword column = rng.uniform_int(4);

        CostMatrix shifted = cost;
        shifted.rho.col(column) += shift;

        const Assignment a = hungarian(cost);
        const Assignment a_shifted = hungarian(shifted);
        const double base = assignment_cost(cost, a);

        // objective shifts by exactly the constant
        REQUIRE(assignment_cost(shifted, a_shifted) ==
                Catch::Approx(base + shift).margin(1e-12));
        // and the returned assignment is still optimal for the original costs
        REQUIRE(assignment_cost(cost, a_shifted) == Catch::Approx(base).margin(1e-12));
    }
}

TEST_CASE("surrogate linearization is exact on feasible assignments")
{
    // a_n^T Psi a_n = diag(Psi)^T a_n whenever each row carries at most one user
    Rng rng(99);
    const arma::uword n = 6, m = 3;
    for (int trial = 0; trial < 100; ++trial)
    {
        arma::mat psi(m, m);
        for (auto &x : psi)
            x = rng.uniform(-2.0, 2.0);
        psi = psi.t() * psi; // PSD

        const Assignment assignment = random_assignment(n, m, rng);
        const arma::mat a_dense = assignment.dense(n);
        for (arma::uword row = 0; row < n; ++row)
        {
            const arma::vec a_n = a_dense.row(row).t();
            const double quadratic = arma::as_scalar(a_n.t() * psi * a_n);
            const double linear = arma::dot(psi.diag(), a_n);
            REQUIRE(quadratic == linear);
        }
    }
}
