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
#include "satbeam/metrics.hpp"
#include "satbeam/types.hpp"

namespace satbeam
{

/// Assignment weights rho (N x M): cost of putting user m on DFT row n.
struct CostMatrix
{
    arma::mat rho;

    arma::uword n_rows() const { return rho.n_rows; }
    arma::uword n_users() const { return rho.n_cols; }
};

/// Weight matrix of the beam-selection subproblem for the current solver
/// state. With t_m = W^H h~_m the beam-domain channel,
///   c_n    = sum_m omega_m |delta_m|^2 |t_{m,n}|^2
///   Psi_n  = c_n * sum_j u_j u_j^H
///   f_n    = Re(sum_m omega_m delta_m conj(t_{m,n}) u_m)
///   rho_nm = diag(Psi_n)_m - 2 f_n[m]
/// This drops quadratic cross-row coupling, so it is a separable surrogate
/// of the exact weighted-MSE objective; the solver guards the true objective
/// when applying the result.
CostMatrix assignment_weights(const Scene &scene, const DftCodebook &codebook,
                              const Window &window, const Precoder &precoder,
                              const arma::cx_vec &deltas, const arma::vec &omegas);

/// Min-cost assignment of users to distinct DFT rows (N >= M), Hungarian
/// method on the matrix padded to N x N with a constant so dummy columns
/// never displace real users. O(N^3).
Assignment hungarian(const CostMatrix &cost);

/// Exhaustive oracle over all N!/(N-M)! injections; ties broken by
/// lexicographically smallest row_of. Rejects instances beyond 1e7 cases.
Assignment brute_force_assignment(const CostMatrix &cost);

/// sum_m rho(row_of[m], m)
double assignment_cost(const CostMatrix &cost, const Assignment &assignment);

} // namespace satbeam
