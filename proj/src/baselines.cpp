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

#include "satbeam/baselines.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "satbeam/metrics.hpp"

namespace satbeam
{

std::string scheme_name(SchemeId id)
{
    switch (id)
    {
    case SchemeId::joint_wmmse:
        return "joint_wmmse";
    case SchemeId::greedy_zf:
        return "greedy_zf";
    case SchemeId::dft_only:
        return "dft_only";
    case SchemeId::mf_fdp:
        return "mf_fdp";
    case SchemeId::mmse_fdp:
        return "mmse_fdp";
    }
    throw std::logic_error("scheme_name: unknown scheme");
}

SchemeId scheme_from_name(const std::string &name)
{
    for (SchemeId id : {SchemeId::joint_wmmse, SchemeId::greedy_zf, SchemeId::dft_only,
                        SchemeId::mf_fdp, SchemeId::mmse_fdp})
        if (scheme_name(id) == name)
            return id;
    throw std::invalid_argument("unknown scheme: " + name);
}

Assignment greedy_assignment(const Scene &scene, const DftCodebook &codebook,
                             const Window &window)
{
    const arma::uword m = scene.m_users;
    const arma::uword n = codebook.n;
    if (m > n)
        throw std::invalid_argument("greedy_assignment: more users than DFT rows");

    const arma::cx_mat t =
        beam_domain_channel(codebook, effective_channel(scene.h, window, codebook));
    const arma::mat gain = arma::square(arma::abs(t)); // N x M

    std::vector<char> taken(n, false);
    Assignment a;
    a.row_of.resize(m);
    for (arma::uword user = 0; user < m; ++user)
    {
        arma::uword best = n;
        double best_gain = -1.0;
        for (arma::uword row = 0; row < n; ++row)
        {
            if (taken[row])
                continue;
            if (gain(row, user) > best_gain) // strict: ties go to the smallest row
            {
                best_gain = gain(row, user);
                best = row;
            }
        }
        taken[best] = true;
        a.row_of[user] = best;
    }
    return a;
}

Precoder zf_precoder(const Scene &scene, const DftCodebook &codebook, const Window &window,
                     const Assignment &assignment, double power_budget)
{
    const arma::cx_mat e = effective_gain_matrix(scene, codebook, window, assignment);
    const double cond = arma::cond(e);
    if (!std::isfinite(cond) || cond > 1e8)
        throw IllConditionedError("zf_precoder: effective channel condition number " +
                                  std::to_string(cond));

    arma::cx_mat inv_e;
    if (!arma::inv(inv_e, e))
        throw IllConditionedError("zf_precoder: effective channel not invertible");

    Precoder zf{inv_e};
    zf.u *= std::sqrt(power_budget / zf.power());
    return zf;
}

std::pair<Assignment, Precoder> dft_only(const Scene &scene, const DftCodebook &codebook,
                                         const Window &window, double power_budget)
{
    Assignment a = greedy_assignment(scene, codebook, window);
    const arma::uword m = scene.m_users;
    Precoder u{arma::cx_mat(
        std::sqrt(power_budget / static_cast<double>(m)) * arma::eye(m, m),
        arma::zeros(m, m))};
    return {std::move(a), std::move(u)};
}

arma::cx_mat mf_fdp(const Scene &scene, double power_budget)
{
    const arma::uword m = scene.m_users;
    arma::cx_mat u(scene.h.n_rows, m);
    const double per_user = std::sqrt(power_budget / static_cast<double>(m));
    for (arma::uword j = 0; j < m; ++j)
        u.col(j) = per_user * scene.h.col(j) / arma::norm(scene.h.col(j));
    return u;
}

arma::cx_mat mmse_fdp(const Scene &scene, double power_budget)
{
    const arma::uword m = scene.m_users;
    const double reg = static_cast<double>(m) * scene.noise_power / power_budget;
    const arma::cx_mat gram = scene.h.t() * scene.h +
                              reg * arma::cx_mat(arma::eye(m, m), arma::zeros(m, m));
    arma::cx_mat u = scene.h * arma::inv_sympd(gram);
    u *= std::sqrt(power_budget / arma::accu(arma::square(arma::abs(u))));
    return u;
}

SchemeResult run_scheme(SchemeId id, const Scene &scene, const DftCodebook &codebook,
                        const Window &window, const SolverConfig &solver_config)
{
    SchemeResult result;
    result.scheme = id;
    const auto start = std::chrono::steady_clock::now();

    try
    {
        arma::cx_mat gains;
        switch (id)
        {
        case SchemeId::joint_wmmse:
        {
            const SolverState state = solve(scene, codebook, window, solver_config);
            gains = effective_gain_matrix(scene, codebook, window, state.assignment) *
                    state.precoder.u;
            result.iterations = state.iter;
            break;
        }
        case SchemeId::greedy_zf:
        {
            const Assignment a = greedy_assignment(scene, codebook, window);
            const Precoder u = zf_precoder(scene, codebook, window, a, scene.power_budget);
            gains = effective_gain_matrix(scene, codebook, window, a) * u.u;
            break;
        }
        case SchemeId::dft_only:
        {
            const auto [a, u] = dft_only(scene, codebook, window, scene.power_budget);
            gains = effective_gain_matrix(scene, codebook, window, a) * u.u;
            break;
        }
        case SchemeId::mf_fdp:
            gains = scene.h.t() * mf_fdp(scene, scene.power_budget);
            break;
        case SchemeId::mmse_fdp:
            gains = scene.h.t() * mmse_fdp(scene, scene.power_budget);
            break;
        }

        result.per_user_sinr.set_size(scene.m_users);
        for (arma::uword m = 0; m < scene.m_users; ++m)
            result.per_user_sinr(m) = sinr_from_gains(gains, scene.noise_power, m);
        result.sum_rate = sum_rate_from_gains(gains, scene.noise_power);
    }
    catch (const IllConditionedError &)
    {
        result.flag = "zf_illcond";
        result.sum_rate = 0.0;
        result.per_user_sinr = arma::vec(scene.m_users, arma::fill::zeros);
    }
    catch (const std::exception &ex)
    {
        result.flag = std::string("error:") + ex.what();
        result.sum_rate = 0.0;
        result.per_user_sinr = arma::vec(scene.m_users, arma::fill::zeros);
    }

    result.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

} // namespace satbeam
