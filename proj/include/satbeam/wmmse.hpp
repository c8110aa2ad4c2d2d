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

#pragma once

#include <armadillo>
#include <cstdint>
#include <vector>

#include "satbeam/assignment.hpp"
#include "satbeam/codebook.hpp"
#include "satbeam/geometry.hpp"
#include "satbeam/metrics.hpp"
#include "satbeam/types.hpp"

namespace satbeam
{

enum class BetaMode
{
    bisection,
    subgradient
};

struct SolverConfig
{
    arma::uword max_outer_iters = 200;
    double tolerance = 1e-5;   // relative objective change
    double theta_init = 0.0;   // <= 0 selects sqrt(P / M^2) * 1e-2
    BetaMode beta_mode = BetaMode::bisection;
    double step0 = 1.0;        // subgradient step scale, r_l = step0 / sqrt(l)
    double beta_max = 1e30;    // bracket / divergence cap
    std::uint64_t seed = 0;    // initial random assignment
};

struct IterationStats
{
    arma::uword iter;
    double objective;
    double sum_rate; // bit/s/Hz
    double beta;
    double power;
};

struct SolverState
{
    arma::cx_vec deltas;
    arma::vec omegas;
    double beta = 0.0;
    Precoder precoder;
    Assignment assignment;
    arma::uword iter = 0;
    std::vector<double> objective_trace;
    bool converged = false;

    std::vector<IterationStats> iteration_stats;
    arma::uword assignment_rejections = 0; // guarded Hungarian updates not applied

    // worst KKT violations seen across accepted precoders
    double max_stationarity_residual = 0.0; // vs 1e-8 * max(1, ||k_m||)
    double max_power_excess = 0.0;          // (Trace - P) / P
    double max_slackness = 0.0;             // |beta (Trace - P)| / (P * max(1, beta))
};

/// MMSE receive coefficients: delta_m = conj(g_mm) / (sum_j |g_mj|^2 + sigma^2),
/// the exact minimizer of each user's MSE.
arma::cx_vec update_receive_coeffs(const Scene &scene, const DftCodebook &codebook,
                                   const Window &window, const Assignment &assignment,
                                   const Precoder &precoder);

/// Optimal MSE weights omega_m = 1 + SINR_m = 1 / e_m(delta_m*).
arma::vec update_mse_weights(const Scene &scene, const DftCodebook &codebook,
                             const Window &window, const Assignment &assignment,
                             const Precoder &precoder);

struct NormalMatrix
{
    arma::cx_mat theta; // M x M Hermitian PSD
    arma::cx_mat k;     // M x M, column m is k_m
};

/// Quadratic form of the precoder subproblem:
///   theta = sum_j omega_j |delta_j|^2 q_j q_j^H  with q_j = A^T W^H h~_j,
///   k_m   = conj(delta_m) q_m.
NormalMatrix precoder_normal_matrix(const Scene &scene, const DftCodebook &codebook,
                                    const Window &window, const Assignment &assignment,
                                    const arma::cx_vec &deltas, const arma::vec &omegas);

/// Columns solve (theta + beta I) u_m = omega_m k_m.
Precoder precoder_closed_form(const NormalMatrix &normal, const arma::vec &omegas, double beta);

struct BetaSolve
{
    double beta = 0.0;
    Precoder precoder;
    arma::uword iterations = 0;
    bool converged = false;
};

/// Dual solve of the power-constrained precoder update. Bisection exploits
/// that Trace(U(beta)^H U(beta)) is non-increasing in beta; subgradient mode
/// iterates beta <- [beta + r_l (Trace - P)]^+ with r_l = step0 / sqrt(l).
/// Both return a feasible precoder with complementary slackness satisfied.
BetaSolve solve_beta(const NormalMatrix &normal, const arma::vec &omegas, double power_budget,
                     const SolverConfig &config, double beta_init = 0.0);

/// Alternating weighted-MMSE design: receive coefficients, MSE weights, dual
/// precoder solve, then Hungarian beam re-selection, until the objective
/// change falls below tolerance. The beam update is applied only when it does
/// not increase the exact objective, which keeps the trace monotone.
SolverState solve(const Scene &scene, const DftCodebook &codebook, const Window &window,
                  const SolverConfig &config);

} // namespace satbeam
