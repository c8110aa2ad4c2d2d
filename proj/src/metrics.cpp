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

#include "satbeam/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace satbeam
{

arma::cx_mat gather_effective_gains(const arma::cx_mat &beam_channel,
                                    const Assignment &assignment)
{
    const arma::uword m = beam_channel.n_cols;
    if (assignment.n_users() != m)
        throw std::invalid_argument("gather_effective_gains: assignment size != users");
    if (!assignment.feasible(beam_channel.n_rows))
        throw std::invalid_argument("gather_effective_gains: infeasible assignment");

    // E(m, p) = conj(t_m[row_of[p]]): user m's gain through the beam of stream p
    arma::cx_mat e(m, m);
    for (arma::uword p = 0; p < m; ++p)
        for (arma::uword um = 0; um < m; ++um)
            e(um, p) = std::conj(beam_channel(assignment.row_of[p], um));
    return e;
}

arma::cx_mat effective_gain_matrix(const Scene &scene, const DftCodebook &codebook,
                                   const Window &window, const Assignment &assignment)
{
    if (assignment.n_users() != scene.m_users)
        throw std::invalid_argument("effective_gain_matrix: assignment size != users");
    const arma::cx_mat t =
        beam_domain_channel(codebook, effective_channel(scene.h, window, codebook));
    return gather_effective_gains(t, assignment);
}

double sinr_from_gains(const arma::cx_mat &gains, double noise_power, arma::uword user)
{
    if (noise_power <= 0.0)
        throw std::invalid_argument("sinr_from_gains: noise power must be positive");
    const arma::uword m = gains.n_rows;
    if (user >= m)
        throw std::invalid_argument("sinr_from_gains: user index out of range");

    double signal = std::norm(gains(user, user));
    double interference = 0.0;
    for (arma::uword j = 0; j < gains.n_cols; ++j)
        if (j != user)
            interference += std::norm(gains(user, j));
    return signal / (interference + noise_power);
}

double sum_rate_from_gains(const arma::cx_mat &gains, double noise_power)
{
    double rate = 0.0;
    for (arma::uword m = 0; m < gains.n_rows; ++m)
        rate += std::log2(1.0 + sinr_from_gains(gains, noise_power, m));
    return rate;
}

double mse_from_gains(const arma::cx_mat &gains, double noise_power, arma::cx_double delta,
                      arma::uword user)
{
    double off = 0.0;
    for (arma::uword j = 0; j < gains.n_cols; ++j)
        if (j != user)
            off += std::norm(gains(user, j));
    return std::norm(1.0 - delta * gains(user, user)) + std::norm(delta) * (off + noise_power);
}

double wmmse_objective_from_gains(const arma::cx_mat &gains, double noise_power,
                                  const arma::cx_vec &deltas, const arma::vec &omegas)
{
    const arma::uword m = gains.n_rows;
    if (deltas.n_elem != m || omegas.n_elem != m)
        throw std::invalid_argument("wmmse_objective_from_gains: auxiliary size mismatch");

    double g = 0.0;
    for (arma::uword um = 0; um < m; ++um)
    {
        if (omegas(um) <= 0.0)
            throw std::invalid_argument("wmmse_objective_from_gains: omega must be positive");
        g += omegas(um) * mse_from_gains(gains, noise_power, deltas(um), um) -
             std::log(omegas(um)) - 1.0;
    }
    return g;
}

double sinr(const Scene &scene, const DftCodebook &codebook, const Window &window,
            const Assignment &assignment, const Precoder &precoder, arma::uword user)
{
    const arma::cx_mat gains =
        effective_gain_matrix(scene, codebook, window, assignment) * precoder.u;
    return sinr_from_gains(gains, scene.noise_power, user);
}

double sum_rate(const Scene &scene, const DftCodebook &codebook, const Window &window,
                const Assignment &assignment, const Precoder &precoder)
{
    const arma::cx_mat gains =
        effective_gain_matrix(scene, codebook, window, assignment) * precoder.u;
    return sum_rate_from_gains(gains, scene.noise_power);
}

double mse(const Scene &scene, const DftCodebook &codebook, const Window &window,
           const Assignment &assignment, const Precoder &precoder, arma::cx_double delta,
           arma::uword user)
{
    const arma::cx_mat gains =
        effective_gain_matrix(scene, codebook, window, assignment) * precoder.u;
    return mse_from_gains(gains, scene.noise_power, delta, user);
}

double wmmse_objective(const Scene &scene, const DftCodebook &codebook, const Window &window,
                       const Assignment &assignment, const Precoder &precoder,
                       const arma::cx_vec &deltas, const arma::vec &omegas)
{
    const arma::cx_mat gains =
        effective_gain_matrix(scene, codebook, window, assignment) * precoder.u;
    return wmmse_objective_from_gains(gains, scene.noise_power, deltas, omegas);
}

} // namespace satbeam
