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
#include <stdexcept>
#include <string>
#include <utility>

#include "satbeam/codebook.hpp"
#include "satbeam/geometry.hpp"
#include "satbeam/types.hpp"
#include "satbeam/wmmse.hpp"

namespace satbeam
{

enum class SchemeId
{
    joint_wmmse,
    greedy_zf,
    dft_only,
    mf_fdp,
    mmse_fdp
};

std::string scheme_name(SchemeId id);
SchemeId scheme_from_name(const std::string &name);

struct SchemeResult
{
    SchemeId scheme;
    double sum_rate = 0.0; // bit/s/Hz
    arma::vec per_user_sinr;
    double wall_seconds = 0.0;
    arma::uword iterations = 0; // 0 for one-shot schemes
    std::string flag;           // empty on success
};

struct IllConditionedError : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

/// Greedy beam selection: users in index order, each takes the remaining DFT
/// row with the largest |t_{m,n}|^2; ties go to the smallest index.
Assignment greedy_assignment(const Scene &scene, const DftCodebook &codebook,
                             const Window &window);

/// Zero forcing on the effective channel E = H~^H W A: right inverse scaled
/// to meet the power budget with equality. Throws IllConditionedError when
/// cond(E) exceeds 1e8.
Precoder zf_precoder(const Scene &scene, const DftCodebook &codebook, const Window &window,
                     const Assignment &assignment, double power_budget);

/// Greedy beam selection with equal-power diagonal precoding (no inter-user
/// precoding at all).
std::pair<Assignment, Precoder> dft_only(const Scene &scene, const DftCodebook &codebook,
                                         const Window &window, double power_budget);

/// Fully digital matched filter, one RF chain per element: columns
/// sqrt(P/M) h_m / ||h_m||. Evaluated as y = H^H U x + eta.
arma::cx_mat mf_fdp(const Scene &scene, double power_budget);

/// Fully digital regularized inverse H (H^H H + (M sigma^2 / P) I)^-1,
/// scaled to the power budget.
arma::cx_mat mmse_fdp(const Scene &scene, double power_budget);

/// Run one scheme on a scene and collect rate, per-user SINR and timing.
/// Failures (e.g. ill-conditioned ZF) are reported through the flag field.
SchemeResult run_scheme(SchemeId id, const Scene &scene, const DftCodebook &codebook,
                        const Window &window, const SolverConfig &solver_config);

} // namespace satbeam
