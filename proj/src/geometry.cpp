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

#include "satbeam/geometry.hpp"

#include <cmath>
#include <stdexcept>

#include "satbeam/rng.hpp"

namespace satbeam
{

namespace
{
// independent random streams derived from one scene seed
constexpr std::uint64_t kUserDropStream = 0x5eed05e72d109ULL;
constexpr std::uint64_t kPhaseStream = 0x9a75e0fULL;
} // namespace

double max_off_nadir_angle(const GeometryConfig &geometry)
{
    if (geometry.altitude_m <= 0.0)
        throw std::invalid_argument("max_off_nadir_angle: altitude must be positive");
    const double rs = kEarthRadiusM + geometry.altitude_m;
    const double elev = geometry.min_elevation_deg * arma::datum::pi / 180.0;
    return std::asin((kEarthRadiusM / rs) * std::cos(elev));
}

double slant_range(const GeometryConfig &geometry, double theta)
{
    const double rs = kEarthRadiusM + geometry.altitude_m;
    const double st = std::sin(theta);
    const double disc = kEarthRadiusM * kEarthRadiusM - rs * rs * st * st;
    if (disc < 0.0)
        throw std::invalid_argument("slant_range: direction misses the Earth");
    return rs * std::cos(theta) - std::sqrt(disc);
}

std::vector<UserDirection> drop_users(arma::uword m, const GeometryConfig &geometry,
                                      std::uint64_t seed)
{
    if (m == 0)
        throw std::invalid_argument("drop_users: need at least one user");
    if (geometry.altitude_m <= 0.0 || geometry.min_elevation_deg < 0.0 ||
        geometry.min_elevation_deg > 90.0)
        throw std::invalid_argument("drop_users: degenerate geometry, empty footprint");

    const double rs = kEarthRadiusM + geometry.altitude_m;
    const double elev = geometry.min_elevation_deg * arma::datum::pi / 180.0;
    const double theta_max = max_off_nadir_angle(geometry);
    // Earth-centered half-angle of the visible cap; zero at 90 degrees
    // elevation up to rounding
    const double alpha_max = std::max(0.0, arma::datum::pi / 2.0 - elev - theta_max);

    Rng rng(mix64(seed, kUserDropStream));
    std::vector<UserDirection> users(m);
    for (arma::uword i = 0; i < m; ++i)
    {
        // uniform over the cap surface: cos(alpha) uniform in [cos(alpha_max), 1]
        const double ca = rng.uniform(std::cos(alpha_max), 1.0);
        const double phi = rng.uniform(0.0, 2.0 * arma::datum::pi);
        const double alpha = std::acos(std::min(1.0, ca));
        const double d = std::sqrt(kEarthRadiusM * kEarthRadiusM + rs * rs -
                                   2.0 * kEarthRadiusM * rs * std::cos(alpha));
        const double st = kEarthRadiusM * std::sin(alpha) / d;
        users[i] = UserDirection{std::asin(std::min(1.0, st)), phi};
    }
    return users;
}

arma::cx_vec steering_vector(const ArrayConfig &array, const UserDirection &direction)
{
    if (direction.theta < 0.0 || direction.theta >= arma::datum::pi / 2.0)
        throw std::invalid_argument("steering_vector: theta must be in [0, pi/2)");

    const arma::uword k = array.elements();
    const double st = std::sin(direction.theta);
    const double ux = st * std::cos(direction.phi);
    const double uy = st * std::sin(direction.phi);
    const double amp = std::pow(std::cos(direction.theta), array.element_pattern_exponent / 2.0);
    const double tau = 2.0 * arma::datum::pi * array.spacing_over_lambda;

    arma::cx_vec v(k);
    for (arma::uword kx = 0; kx < array.nx; ++kx)
        for (arma::uword ky = 0; ky < array.ny; ++ky)
            v(kx * array.ny + ky) =
                std::polar(amp, tau * (static_cast<double>(kx) * ux + static_cast<double>(ky) * uy));
    return v;
}

Scene build_scene(const SceneConfig &config, std::uint64_t seed)
{
    if (config.m_users == 0)
        throw std::invalid_argument("build_scene: need at least one user");
    if (config.power_w <= 0.0)
        throw std::invalid_argument("build_scene: power budget must be positive");
    if (config.m_users > config.array.elements())
        throw std::invalid_argument("build_scene: more users than antenna elements");
    if (config.array.spacing_over_lambda < 0.1 || config.array.spacing_over_lambda > 10.0)
        throw std::invalid_argument("build_scene: spacing outside the [0.1, 10] sanity range");

    const GeometryConfig &geo = config.geometry;
    const arma::uword k = config.array.elements();
    const arma::uword m = config.m_users;
    const double lambda = kSpeedOfLightMps / geo.carrier_hz;
    const double g_user = std::pow(10.0, geo.user_gain_dbi / 10.0);

    const auto users = drop_users(m, geo, seed);
    Rng phase_rng(mix64(seed, kPhaseStream));

    Scene scene;
    scene.h.set_size(k, m);
    for (arma::uword j = 0; j < m; ++j)
    {
        const double d = slant_range(geo, users[j].theta);
        const double g_link = std::pow(lambda / (4.0 * arma::datum::pi * d), 2.0) * g_user;
        const double psi = phase_rng.uniform(0.0, 2.0 * arma::datum::pi);
        scene.h.col(j) = std::polar(std::sqrt(g_link), psi) * steering_vector(config.array, users[j]);
    }

    scene.noise_power = kBoltzmannJperK * geo.noise_temp_k * geo.bandwidth_hz;
    scene.power_budget = config.power_w;
    scene.m_users = m;
    scene.altitude_m = geo.altitude_m;
    scene.min_elevation_deg = geo.min_elevation_deg;
    scene.carrier_hz = geo.carrier_hz;
    scene.bandwidth_hz = geo.bandwidth_hz;
    scene.seed = seed;

    if (!scene.h.is_finite())
        throw std::runtime_error("build_scene: non-finite channel entries");
    for (arma::uword j = 0; j < m; ++j)
        if (arma::norm(scene.h.col(j)) <= 0.0)
            throw std::runtime_error("build_scene: user channel with zero norm");
    return scene;
}

} // namespace satbeam
