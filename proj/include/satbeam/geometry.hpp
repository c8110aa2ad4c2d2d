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

namespace satbeam
{

constexpr double kEarthRadiusM = 6.378e6;
constexpr double kBoltzmannJperK = 1.380649e-23;
constexpr double kSpeedOfLightMps = 299792458.0;

/// Uniform rectangular array. The K = nx * ny elements feed the spatial
/// window outputs in raster (row-major) order: element (kx, ky) -> kx*ny + ky.
struct ArrayConfig
{
    arma::uword nx = 10;
    arma::uword ny = 10;
    double spacing_over_lambda = 1.0;     // d_A / lambda
    double element_pattern_exponent = 1.0; // cosine power exponent q

    arma::uword elements() const { return nx * ny; }
};

struct GeometryConfig
{
    double altitude_m = 8.0e6;
    double min_elevation_deg = 5.0;
    double carrier_hz = 19.0e9;
    double bandwidth_hz = 500.0e6;
    double user_gain_dbi = 41.45;
    double noise_temp_k = 224.5;
};

/// User direction as seen from the payload: off-nadir angle theta and
/// azimuth phi, both in radians.
struct UserDirection
{
    double theta = 0.0;
    double phi = 0.0;
};

/// Link-budget LOS channel scene shared by every scheme within one trial.
struct Scene
{
    arma::cx_mat h;        // K x M, linear amplitude gain
    double noise_power;    // W
    double power_budget;   // W
    arma::uword m_users;

    // geometry metadata
    double altitude_m;
    double min_elevation_deg;
    double carrier_hz;
    double bandwidth_hz;

    std::uint64_t seed;
};

struct SceneConfig
{
    ArrayConfig array;
    GeometryConfig geometry;
    arma::uword m_users = 45;
    double power_w = 3000.0;
};

/// Largest off-nadir angle at which a user still sees the satellite above
/// the minimum elevation: sin(theta_max) = (Re / (Re + h)) * cos(elev_min).
double max_off_nadir_angle(const GeometryConfig &geometry);

/// Satellite-to-ground distance for a user at off-nadir angle theta.
double slant_range(const GeometryConfig &geometry, double theta);

/// Drop m users uniformly over the spherical cap of Earth visible above the
/// minimum elevation angle. Deterministic given the seed.
std::vector<UserDirection> drop_users(arma::uword m, const GeometryConfig &geometry,
                                      std::uint64_t seed);

/// URA response towards (theta, phi), raster-ordered, with cos^(q/2) element
/// amplitude so the element power pattern is cos^q.
arma::cx_vec steering_vector(const ArrayConfig &array, const UserDirection &direction);

/// Compose user drops, steering vectors, free-space path gain and a uniform
/// random carrier phase per user into the channel matrix H.
Scene build_scene(const SceneConfig &config, std::uint64_t seed);

} // namespace satbeam
