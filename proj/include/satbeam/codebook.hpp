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

#include "satbeam/types.hpp"

namespace satbeam
{

/// N-point DFT beamforming codebook with entries
/// w[k][n] = exp(-j 2 pi k n / N) / sqrt(N), so the matrix is unitary and
/// beam selection preserves radiated power. Column n is the n-th beam.
struct DftCodebook
{
    arma::uword n = 0;

    arma::cx_vec column(arma::uword idx) const;
    arma::cx_mat dense() const;
};

/// Spatial window routing K <= N consecutive DFT outputs to the K antenna
/// elements: rows start .. start+k-1.
struct Window
{
    arma::uword start = 0;
    arma::uword k = 0;
};

DftCodebook build_codebook(arma::uword n);

Window centered_window(arma::uword n, arma::uword k);

/// W * A * s via scatter + FFT. Equivalent to the dense product but
/// O(N log N) instead of O(N^2).
arma::cx_vec apply_codebook(const DftCodebook &codebook, const Assignment &assignment,
                            const arma::cx_vec &s);

/// Lift the K x M antenna-domain channel into the N-dimensional DFT output
/// space: rows of h placed at the window positions, zeros elsewhere.
arma::cx_mat effective_channel(const arma::cx_mat &h, const Window &window,
                               const DftCodebook &codebook);

/// Beam-domain channel T = W^H * h_tilde, column per user. T(n, m) is the
/// gain of beam n towards user m; computed with one inverse FFT per column.
arma::cx_mat beam_domain_channel(const DftCodebook &codebook, const arma::cx_mat &h_tilde);

} // namespace satbeam
