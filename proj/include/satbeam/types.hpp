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

#include "satbeam/rng.hpp"

namespace satbeam
{

/// Beam assignment stored as one DFT row index per user. Distinct indices
/// encode both constraints by construction: every user is mapped to exactly
/// one DFT input and every DFT input carries at most one user.
struct Assignment
{
    std::vector<arma::uword> row_of; // size M, values in [0, N)

    arma::uword n_users() const { return static_cast<arma::uword>(row_of.size()); }

    bool feasible(arma::uword n_rows) const;

    // dense N x M binary matrix (mostly for oracles and debugging)
    arma::mat dense(arma::uword n_rows) const;
};

/// Linear precoding matrix, column m precodes user m's stream.
struct Precoder
{
    arma::cx_mat u; // M x M

    double power() const { return arma::accu(arma::square(arma::abs(u))); }
};

/// Uniformly random feasible assignment: M distinct rows out of N.
Assignment random_assignment(arma::uword n_rows, arma::uword n_users, Rng &rng);

} // namespace satbeam
