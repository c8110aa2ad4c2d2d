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

#include "satbeam/assignment.hpp"

#include <limits>
#include <stdexcept>
#include <vector>

namespace satbeam
{

CostMatrix assignment_weights(const Scene &scene, const DftCodebook &codebook,
                              const Window &window, const Precoder &precoder,
                              const arma::cx_vec &deltas, const arma::vec &omegas)
{
    const arma::uword m = scene.m_users;
    if (precoder.u.n_rows != m || precoder.u.n_cols != m)
        throw std::invalid_argument("assignment_weights: precoder size mismatch");
    if (deltas.n_elem != m || omegas.n_elem != m)
        throw std::invalid_argument("assignment_weights: auxiliary size mismatch");
    if (arma::any(omegas <= 0.0))
        throw std::invalid_argument("assignment_weights: omega must be positive");

    const arma::cx_mat t =
        beam_domain_channel(codebook, effective_channel(scene.h, window, codebook));

    // c_n = sum_m omega_m |delta_m|^2 |t_{m,n}|^2
    const arma::vec user_weight = omegas % arma::square(arma::abs(deltas));
    const arma::vec c = arma::square(arma::abs(t)) * user_weight;

    // diag(sum_j u_j u_j^H)_m = squared norm of row m of U
    const arma::vec diag_gram = arma::sum(arma::square(arma::abs(precoder.u)), 1);

    // f_n[m] = Re(omega_m delta_m conj(t_{m,n}) u_m) stacked over n
    const arma::cx_mat scaled_u = precoder.u * arma::diagmat(omegas % deltas);
    const arma::mat f = arma::real(scaled_u * t.t()); // M x N

    CostMatrix cost;
    cost.rho = c * diag_gram.t() - 2.0 * f.t();
    return cost;
}

// Hungarian method with row/column potentials, O(n^3) on the padded square
// matrix. p[j] holds the row assigned to column j (1-based, 0 is a sentinel).
Assignment hungarian(const CostMatrix &cost)
{
    const arma::uword n = cost.n_rows();
    const arma::uword m = cost.n_users();
    if (m == 0 || n < m)
        throw std::invalid_argument("hungarian: need N >= M >= 1");
    if (!cost.rho.is_finite())
        throw std::invalid_argument("hungarian: costs must be finite");

    // pad dummy user columns with a constant so they can never displace a
    // real user from its optimal row
    const double pad = cost.rho.max();
    const arma::uword dim = n;
    auto entry = [&](arma::uword row, arma::uword col) -> double {
        return col < m ? cost.rho(row, col) : pad;
    };

    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(dim + 1, 0.0), v(dim + 1, 0.0);
    std::vector<arma::uword> p(dim + 1, 0), way(dim + 1, 0);

    for (arma::uword i = 1; i <= dim; ++i)
    {
        p[0] = i;
        arma::uword j0 = 0;
        std::vector<double> minv(dim + 1, inf);
        std::vector<char> used(dim + 1, false);
        do
        {
            used[j0] = true;
            const arma::uword i0 = p[j0];
            double delta = inf;
            arma::uword j1 = 0;
            for (arma::uword j = 1; j <= dim; ++j)
            {
                if (used[j])
                    continue;
                const double cur = entry(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j])
                {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta)
                {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (arma::uword j = 0; j <= dim; ++j)
            {
                if (used[j])
                {
                    u[p[j]] += delta;
                    v[j] -= delta;
                }
                else
                {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do
        {
            const arma::uword j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }

    Assignment a;
    a.row_of.resize(m);
    for (arma::uword j = 1; j <= dim; ++j)
        if (j - 1 < m)
            a.row_of[j - 1] = p[j] - 1;
    return a;
}

namespace
{

void brute_force_recurse(const arma::mat &rho, arma::uword user, std::vector<arma::uword> &current,
                         std::vector<char> &used, double partial, double &best,
                         std::vector<arma::uword> &best_rows)
{
    const arma::uword m = rho.n_cols;
    if (user == m)
    {
        // strict improvement keeps the lexicographically smallest minimizer,
        // since candidates are generated in lexicographic order
        if (partial < best)
        {
            best = partial;
            best_rows = current;
        }
        return;
    }
    for (arma::uword r = 0; r < rho.n_rows; ++r)
    {
        if (used[r])
            continue;
        used[r] = true;
        current[user] = r;
        brute_force_recurse(rho, user + 1, current, used, partial + rho(r, user), best, best_rows);
        used[r] = false;
    }
}

} // namespace

Assignment brute_force_assignment(const CostMatrix &cost)
{
    const arma::uword n = cost.n_rows();
    const arma::uword m = cost.n_users();
    if (m == 0 || n < m)
        throw std::invalid_argument("brute_force_assignment: need N >= M >= 1");

    double count = 1.0;
    for (arma::uword i = 0; i < m; ++i)
        count *= static_cast<double>(n - i);
    if (count > 1e7)
        throw std::invalid_argument("brute_force_assignment: instance too large");

    std::vector<arma::uword> current(m, 0), best_rows;
    std::vector<char> used(n, false);
    double best = std::numeric_limits<double>::infinity();
    brute_force_recurse(cost.rho, 0, current, used, 0.0, best, best_rows);

    Assignment a;
    a.row_of = std::move(best_rows);
    return a;
}

double assignment_cost(const CostMatrix &cost, const Assignment &assignment)
{
    if (assignment.n_users() != cost.n_users())
        throw std::invalid_argument("assignment_cost: size mismatch");
    double total = 0.0;
    for (arma::uword m = 0; m < assignment.n_users(); ++m)
        total += cost.rho(assignment.row_of[m], m);
    return total;
}

} // namespace satbeam
