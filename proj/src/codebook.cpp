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

#include "satbeam/codebook.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

namespace satbeam
{

bool Assignment::feasible(arma::uword n_rows) const
{
    std::unordered_set<arma::uword> seen;
    for (arma::uword r : row_of)
    {
        if (r >= n_rows)
            return false;
        if (!seen.insert(r).second)
            return false;
    }
    return true;
}

arma::mat Assignment::dense(arma::uword n_rows) const
{
    arma::mat a(n_rows, row_of.size(), arma::fill::zeros);
    for (arma::uword m = 0; m < row_of.size(); ++m)
        a(row_of[m], m) = 1.0;
    return a;
}

Assignment random_assignment(arma::uword n_rows, arma::uword n_users, Rng &rng)
{
    if (n_users > n_rows)
        throw std::invalid_argument("random_assignment: more users than rows");
    // partial Fisher-Yates over the row indices
    std::vector<arma::uword> rows(n_rows);
    for (arma::uword i = 0; i < n_rows; ++i)
        rows[i] = i;
    Assignment a;
    a.row_of.resize(n_users);
    for (arma::uword m = 0; m < n_users; ++m)
    {
        arma::uword j = m + static_cast<arma::uword>(rng.uniform_int(n_rows - m));
        std::swap(rows[m], rows[j]);
        a.row_of[m] = rows[m];
    }
    return a;
}

arma::cx_vec DftCodebook::column(arma::uword idx) const
{
    if (idx >= n)
        throw std::invalid_argument("DftCodebook::column: index out of range");
    arma::cx_vec w(n);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (arma::uword k = 0; k < n; ++k)
    {
        double ang = -2.0 * arma::datum::pi * static_cast<double>(k) * static_cast<double>(idx) /
                     static_cast<double>(n);
        w(k) = std::polar(scale, ang);
    }
    return w;
}

arma::cx_mat DftCodebook::dense() const
{
    arma::cx_mat w(n, n);
    for (arma::uword c = 0; c < n; ++c)
        w.col(c) = column(c);
    return w;
}

DftCodebook build_codebook(arma::uword n)
{
    if (n == 0)
        throw std::invalid_argument("build_codebook: n must be positive");
    return DftCodebook{n};
}

Window centered_window(arma::uword n, arma::uword k)
{
    if (k == 0 || k > n)
        throw std::invalid_argument("centered_window: need 0 < k <= n");
    return Window{(n - k) / 2, k};
}

arma::cx_vec apply_codebook(const DftCodebook &codebook, const Assignment &assignment,
                            const arma::cx_vec &s)
{
    const arma::uword n = codebook.n;
    if (assignment.n_users() != s.n_elem)
        throw std::invalid_argument("apply_codebook: assignment/signal size mismatch");
    if (!assignment.feasible(n))
        throw std::invalid_argument("apply_codebook: assignment out of range");

    arma::cx_vec staged(n, arma::fill::zeros);
    for (arma::uword m = 0; m < s.n_elem; ++m)
        staged(assignment.row_of[m]) = s(m);
    // W x = fft(x) / sqrt(N) under the unitary normalization
    return arma::fft(staged) / std::sqrt(static_cast<double>(n));
}

arma::cx_mat effective_channel(const arma::cx_mat &h, const Window &window,
                               const DftCodebook &codebook)
{
    if (window.k != h.n_rows)
        throw std::invalid_argument("effective_channel: window size != channel rows");
    if (window.start + window.k > codebook.n)
        throw std::invalid_argument("effective_channel: window out of range");

    arma::cx_mat lifted(codebook.n, h.n_cols, arma::fill::zeros);
    lifted.rows(window.start, window.start + window.k - 1) = h;
    return lifted;
}

arma::cx_mat beam_domain_channel(const DftCodebook &codebook, const arma::cx_mat &h_tilde)
{
    if (h_tilde.n_rows != codebook.n)
        throw std::invalid_argument("beam_domain_channel: channel rows != N");
    // W^H x = ifft(x) * sqrt(N)
    return arma::ifft(h_tilde) * std::sqrt(static_cast<double>(codebook.n));
}

} // namespace satbeam
