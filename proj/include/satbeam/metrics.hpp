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

#include "satbeam/codebook.hpp"
#include "satbeam/geometry.hpp"
#include "satbeam/types.hpp"

namespace satbeam
{

/// Effective user-by-stream channel E = H~^H W A (M x M). Entry (m, p) is the
/// complex gain from precoded stream p to user m through its assigned beam.
arma::cx_mat effective_gain_matrix(const Scene &scene, const DftCodebook &codebook,
                                   const Window &window, const Assignment &assignment);

/// Same gather on an already-computed beam-domain channel T = W^H H~.
/// E(m, p) = conj(T(row_of[p], m)).
arma::cx_mat gather_effective_gains(const arma::cx_mat &beam_channel,
                                    const Assignment &assignment);

// The *_from_gains kernels evaluate the signal model on a precomputed gain
// matrix G = E * U with G(m, j) the gain of stream j at user m. They are
// shared with the fully-digital baselines, which bypass the DFT chain.

double sinr_from_gains(const arma::cx_mat &gains, double noise_power, arma::uword user);
double sum_rate_from_gains(const arma::cx_mat &gains, double noise_power);
double mse_from_gains(const arma::cx_mat &gains, double noise_power, arma::cx_double delta,
                      arma::uword user);

/// Per-user SINR of the full payload chain.
double sinr(const Scene &scene, const DftCodebook &codebook, const Window &window,
            const Assignment &assignment, const Precoder &precoder, arma::uword user);

/// Sum of log2(1 + SINR_m) over all users, in bit/s/Hz.
double sum_rate(const Scene &scene, const DftCodebook &codebook, const Window &window,
                const Assignment &assignment, const Precoder &precoder);

/// Mean-square error of user m for receive coefficient delta, expanded
/// analytically under unit-power independent symbols.
double mse(const Scene &scene, const DftCodebook &codebook, const Window &window,
           const Assignment &assignment, const Precoder &precoder, arma::cx_double delta,
           arma::uword user);

/// Weighted-MMSE objective sum(omega_m e_m - ln omega_m - 1). Natural log;
/// at the optimal auxiliary variables it equals -ln(2) * sum_rate.
double wmmse_objective(const Scene &scene, const DftCodebook &codebook, const Window &window,
                       const Assignment &assignment, const Precoder &precoder,
                       const arma::cx_vec &deltas, const arma::vec &omegas);

double wmmse_objective_from_gains(const arma::cx_mat &gains, double noise_power,
                                  const arma::cx_vec &deltas, const arma::vec &omegas);

} // namespace satbeam
