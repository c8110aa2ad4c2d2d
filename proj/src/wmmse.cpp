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

#include "satbeam/wmmse.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace satbeam
{

namespace
{

constexpr std::uint64_t kInitAssignStream = 0xa551671ULL;

arma::cx_vec receive_coeffs_from_gains(const arma::cx_mat &gains, double noise_power)
{
    const arma::uword m = gains.n_rows;
    arma::cx_vec deltas(m);
    for (arma::uword um = 0; um < m; ++um)
    {
        double denom = noise_power;
        for (arma::uword j = 0; j < m; ++j)
            denom += std::norm(gains(um, j));
        deltas(um) = std::conj(gains(um, um)) / denom;
    }
    return deltas;
}

arma::vec mse_weights_from_gains(const arma::cx_mat &gains, double noise_power)
{
    const arma::uword m = gains.n_rows;
    arma::vec omegas(m);
    for (arma::uword um = 0; um < m; ++um)
        omegas(um) = 1.0 + sinr_from_gains(gains, noise_power, um);
    return omegas;
}

NormalMatrix normal_from_gains(const arma::cx_mat &gains, const arma::cx_vec &deltas,
                               const arma::vec &omegas)
{
    // theta = Q diag(omega |delta|^2) Q^H with Q = E^H the selected
    // beam-domain channel columns; k_m = conj(delta_m) q_m
    const arma::cx_mat q = gains.t();
    NormalMatrix normal;
    normal.theta = q * arma::diagmat(omegas % arma::square(arma::abs(deltas))) * q.t();
    normal.k = q * arma::diagmat(arma::conj(deltas));
    return normal;
}

// Spectral view of the dual power curve: with theta = V diag(lam) V^H and
// c = V^H (k_m omega_m), Trace(U(beta)^H U(beta)) = sum_i s_i / (lam_i + beta)^2.
struct PowerCurve
{
    arma::vec lam;
    arma::vec s; // per-eigenvector squared loading, summed over users
    arma::cx_mat v;
    arma::cx_mat c; // V^H K diag(omega)
    double lam_cut;

    double power(double beta) const
    {
        double p = 0.0;
        for (arma::uword i = 0; i < lam.n_elem; ++i)
        {
            if (s(i) == 0.0)
                continue;
            const double denom = lam(i) + beta;
            if (denom <= lam_cut)
                return std::numeric_limits<double>::infinity();
            p += s(i) / (denom * denom);
        }
        return p;
    }

    // U(beta) through the eigenbasis; rank-deficient directions with zero
    // loading are dropped (pseudo-inverse semantics at beta = 0)
    arma::cx_mat precoder(double beta) const
    {
        arma::cx_mat scaled = c;
        for (arma::uword i = 0; i < lam.n_elem; ++i)
        {
            const double denom = lam(i) + beta;
            scaled.row(i) *= denom > lam_cut ? 1.0 / denom : 0.0;
        }
        return v * scaled;
    }
};

PowerCurve make_power_curve(const NormalMatrix &normal, const arma::vec &omegas)
{
    PowerCurve curve;
    const arma::cx_mat herm = 0.5 * (normal.theta + normal.theta.t());
    if (!arma::eig_sym(curve.lam, curve.v, herm))
        throw std::runtime_error("solve_beta: eigendecomposition failed");
    curve.lam.transform([](double x) { return x > 0.0 ? x : 0.0; });
    curve.c = curve.v.t() * (normal.k * arma::diagmat(omegas));
    curve.s = arma::sum(arma::square(arma::abs(curve.c)), 1);
    const double lam_max = curve.lam.n_elem > 0 ? curve.lam.max() : 0.0;
    curve.lam_cut = lam_max * 1e-14;
    // loadings below numerical noise live in the null space (k is always in
    // range(theta)); drop them so beta = 0 stays finite
    const double s_total = arma::accu(curve.s);
    for (arma::uword i = 0; i < curve.lam.n_elem; ++i)
        if (curve.lam(i) <= curve.lam_cut && curve.s(i) <= s_total * 1e-24)
            curve.s(i) = 0.0;
    return curve;
}

} // namespace

arma::cx_vec update_receive_coeffs(const Scene &scene, const DftCodebook &codebook,
                                   const Window &window, const Assignment &assignment,
                                   const Precoder &precoder)
{
    const arma::cx_mat gains =
        effective_gain_matrix(scene, codebook, window, assignment) * precoder.u;
    return receive_coeffs_from_gains(gains, scene.noise_power);
}

arma::vec update_mse_weights(const Scene &scene, const DftCodebook &codebook,
                             const Window &window, const Assignment &assignment,
                             const Precoder &precoder)
{
    const arma::cx_mat gains =
        effective_gain_matrix(scene, codebook, window, assignment) * precoder.u;
    return mse_weights_from_gains(gains, scene.noise_power);
}

NormalMatrix precoder_normal_matrix(const Scene &scene, const DftCodebook &codebook,
                                    const Window &window, const Assignment &assignment,
                                    const arma::cx_vec &deltas, const arma::vec &omegas)
{
    if (arma::any(omegas <= 0.0))
        throw std::invalid_argument("precoder_normal_matrix: omega must be positive");
    const arma::cx_mat e = effective_gain_matrix(scene, codebook, window, assignment);
    return normal_from_gains(e, deltas, omegas);
}

Precoder precoder_closed_form(const NormalMatrix &normal, const arma::vec &omegas, double beta)
{
    const arma::uword m = normal.theta.n_rows;
    if (beta < 0.0)
        throw std::invalid_argument("precoder_closed_form: beta must be non-negative");

    const arma::cx_mat lhs =
        normal.theta + beta * arma::cx_mat(arma::eye(m, m), arma::zeros(m, m));
    const arma::cx_mat rhs = normal.k * arma::diagmat(omegas);

    arma::cx_mat u;
    if (!arma::solve(u, lhs, rhs, arma::solve_opts::likely_sympd + arma::solve_opts::no_approx))
        throw std::runtime_error("precoder_closed_form: singular system, increase beta");
    // one step of iterative refinement tightens the stationarity residual
    u += arma::solve(lhs, rhs - lhs * u, arma::solve_opts::likely_sympd);
    return Precoder{u};
}

BetaSolve solve_beta(const NormalMatrix &normal, const arma::vec &omegas, double power_budget,
                     const SolverConfig &config, double beta_init)
{
    if (power_budget <= 0.0)
        throw std::invalid_argument("solve_beta: power budget must be positive");

    const PowerCurve curve = make_power_curve(normal, omegas);
    BetaSolve out;

    auto finish = [&](double beta, arma::uword iters, bool converged) {
        out.beta = beta;
        out.iterations = iters;
        out.converged = converged;
        const double lam_min = curve.lam.n_elem > 0 ? curve.lam.min() : 0.0;
        if (beta > 0.0 || lam_min > curve.lam_cut)
            out.precoder = precoder_closed_form(normal, omegas, beta);
        else
            out.precoder = Precoder{curve.precoder(beta)};
    };

    // unconstrained optimum already feasible: complementary slackness at 0
    const double p0 = curve.power(0.0);
    if (p0 <= power_budget)
    {
        finish(0.0, 0, true);
        return out;
    }

    if (config.beta_mode == BetaMode::bisection)
    {
        // Trace(U(beta)^H U(beta)) <= sum s_i / beta^2, so this is feasible
        double hi = std::sqrt(arma::accu(curve.s) / power_budget);
        double lo = 0.0;
        arma::uword grow = 0;
        while (curve.power(hi) > power_budget)
        {
            lo = hi;
            hi *= 2.0;
            if (hi > config.beta_max || ++grow > 200)
            {
                std::ostringstream msg;
                msg << "solve_beta: bisection bracket failure, power at beta_max "
                    << curve.power(config.beta_max) << " > budget " << power_budget;
                throw std::runtime_error(msg.str());
            }
        }
        arma::uword iters = 0;
        for (; iters < 500; ++iters)
        {
            const double mid = 0.5 * (lo + hi);
            if (curve.power(mid) > power_budget)
                lo = mid;
            else
                hi = mid;
            if (curve.power(hi) >= power_budget * (1.0 - 1e-10))
                break;
        }
        finish(hi, iters, true);
        return out;
    }

    // Subgradient ascent on the dual, beta <- [beta + r_l (Trace - P)]^+ with
    // r_l = step0 / sqrt(l), run in normalized coordinates: beta in units of
    // the asymptotic dual scale beta_ref = sqrt(sum ||omega_m k_m||^2 / P) and
    // the power mismatch in units of P, saturated at +-1. Trace(beta_ref) <= P
    // always, so the optimum lives in [0, beta_ref] and step0 = 1 works across
    // channel scales.
    const double beta_ref = std::sqrt(arma::accu(curve.s) / power_budget);
    const double beta_hat_max = std::min(1.0, config.beta_max / beta_ref);
    double beta = std::clamp(std::max(beta_init, 0.0) / beta_ref, 0.0, beta_hat_max);
    double best_beta = -1.0;
    double best_slack = std::numeric_limits<double>::infinity();
    bool converged = false;
    const arma::uword max_iters = 200000;
    arma::uword l = 0;
    for (l = 1; l <= max_iters; ++l)
    {
        const double pw = curve.power(beta * beta_ref);
        const bool feasible = pw <= power_budget * (1.0 + 1e-6);
        const double slack = std::abs(beta * beta_ref * (pw - power_budget)) /
                             (power_budget * std::max(1.0, beta * beta_ref));
        // stop two decades below the contract so downstream objectives match
        // the bisection route tightly
        if (feasible && slack <= 1e-8)
        {
            converged = true;
            break;
        }
        if (feasible && slack < best_slack)
        {
            best_slack = slack;
            best_beta = beta;
        }
        const double step = config.step0 / std::sqrt(static_cast<double>(l));
        const double mismatch =
            std::isfinite(pw) ? std::clamp((pw - power_budget) / power_budget, -1.0, 1.0)
                              : 1.0;
        beta = std::clamp(beta + step * mismatch, 0.0, beta_hat_max);
    }
    if (!converged && best_beta >= 0.0)
        beta = best_beta; // best feasible iterate seen
    finish(beta * beta_ref, l, converged);
    return out;
}

SolverState solve(const Scene &scene, const DftCodebook &codebook, const Window &window,
                  const SolverConfig &config)
{
    const arma::uword m = scene.m_users;
    const arma::uword n = codebook.n;
    if (m > window.k || window.k > n)
        throw std::invalid_argument("solve: require M <= K <= N");

    const double p = scene.power_budget;
    const double theta0 =
        config.theta_init > 0.0 ? config.theta_init
                                : std::sqrt(p / static_cast<double>(m * m)) * 1e-2;
    if (theta0 * theta0 * static_cast<double>(m * m) > p * (1.0 + 1e-12))
        throw std::invalid_argument("solve: theta_init violates the power budget");

    const arma::cx_mat t =
        beam_domain_channel(codebook, effective_channel(scene.h, window, codebook));

    SolverState state;
    Rng init_rng(mix64(config.seed, kInitAssignStream));
    state.assignment = random_assignment(n, m, init_rng);
    state.precoder.u = arma::cx_mat(arma::mat(m, m, arma::fill::value(theta0)),
                                    arma::zeros(m, m));
    state.beta = 0.0;

    arma::cx_mat e = gather_effective_gains(t, state.assignment);
    double g_prev = 0.0;

    for (arma::uword iter = 1; iter <= config.max_outer_iters; ++iter)
    {
        state.iter = iter;

        arma::cx_mat gains = e * state.precoder.u;
        state.deltas = receive_coeffs_from_gains(gains, scene.noise_power);
        state.omegas = mse_weights_from_gains(gains, scene.noise_power);

        const NormalMatrix normal = normal_from_gains(e, state.deltas, state.omegas);
        const BetaSolve bs = solve_beta(normal, state.omegas, p, config, state.beta);
        state.beta = bs.beta;
        state.precoder = bs.precoder;
        gains = e * state.precoder.u;

        // KKT bookkeeping for the accepted precoder
        {
            const arma::cx_mat lhs =
                normal.theta +
                state.beta * arma::cx_mat(arma::eye(m, m), arma::zeros(m, m));
            const arma::cx_mat resid =
                lhs * state.precoder.u - normal.k * arma::diagmat(state.omegas);
            for (arma::uword um = 0; um < m; ++um)
            {
                const double rel = arma::norm(resid.col(um)) /
                                   std::max(1.0, arma::norm(normal.k.col(um)));
                state.max_stationarity_residual =
                    std::max(state.max_stationarity_residual, rel);
            }
            const double pw = state.precoder.power();
            state.max_power_excess = std::max(state.max_power_excess, (pw - p) / p);
            state.max_slackness =
                std::max(state.max_slackness,
                         std::abs(state.beta * (pw - p)) / (p * std::max(1.0, state.beta)));
        }

        double g_new = wmmse_objective_from_gains(gains, scene.noise_power, state.deltas,
                                                  state.omegas);

        // Hungarian beam re-selection on the separable surrogate, guarded by
        // the exact objective
        const CostMatrix cost = assignment_weights(scene, codebook, window, state.precoder,
                                                   state.deltas, state.omegas);
        const Assignment candidate = hungarian(cost);
        const arma::cx_mat cand_gains =
            gather_effective_gains(t, candidate) * state.precoder.u;
        const double g_cand = wmmse_objective_from_gains(cand_gains, scene.noise_power,
                                                         state.deltas, state.omegas);
        if (g_cand <= g_new)
        {
            state.assignment = candidate;
            e = gather_effective_gains(t, state.assignment);
            gains = cand_gains;
            g_new = g_cand;
        }
        else
        {
            ++state.assignment_rejections;
        }

        state.objective_trace.push_back(g_new);
        state.iteration_stats.push_back(
            IterationStats{iter, g_new, sum_rate_from_gains(gains, scene.noise_power),
                           state.beta, state.precoder.power()});

        if (iter >= 2)
        {
            const double rel = std::abs(g_new - g_prev) / std::max(std::abs(g_prev), 1e-12);
            if (rel < config.tolerance)
            {
                state.converged = true;
                break;
            }
        }
        g_prev = g_new;
    }

    return state;
}

} // namespace satbeam
