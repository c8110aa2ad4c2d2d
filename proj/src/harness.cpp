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

#include "satbeam/harness.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <sstream>
#include <stdexcept>

#include "satbeam/metrics.hpp"
#include "satbeam/rng.hpp"

namespace satbeam
{

namespace
{

constexpr std::uint64_t kSolverStream = 0x50f7e12ULL;

std::string trim(const std::string &s)
{
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos)
        return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string &key, const std::string &value)
{
    std::size_t pos = 0;
    double v = 0.0;
    try
    {
        v = std::stod(value, &pos);
    }
    catch (const std::exception &)
    {
        throw std::invalid_argument("config: malformed value for " + key + ": '" + value + "'");
    }
    if (pos != value.size())
        throw std::invalid_argument("config: malformed value for " + key + ": '" + value + "'");
    return v;
}

arma::uword parse_count(const std::string &key, const std::string &value)
{
    const double v = parse_double(key, value);
    if (v < 1.0 || v != std::floor(v))
        throw std::invalid_argument("config: " + key + " must be a positive integer");
    return static_cast<arma::uword>(v);
}

std::vector<std::string> split_list(std::string value)
{
    value = trim(value);
    if (!value.empty() && value.front() == '[')
    {
        if (value.back() != ']')
            throw std::invalid_argument("config: unbalanced brackets in list '" + value + "'");
        value = value.substr(1, value.size() - 2);
    }
    std::vector<std::string> items;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ','))
    {
        item = trim(item);
        if (item.empty())
            throw std::invalid_argument("config: empty list element");
        items.push_back(item);
    }
    return items;
}

std::string fmt_g(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fmt_ms(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return buf;
}

void validate(const SweepConfig &config)
{
    auto check_dims = [](const SceneConfig &sc, arma::uword fft_size, arma::sword window_start) {
        const arma::uword k = sc.array.elements();
        if (k > fft_size)
            throw std::invalid_argument("config: URA elements exceed fft_size");
        if (sc.m_users > k)
            throw std::invalid_argument("config: users exceed antenna elements");
        if (window_start >= 0 &&
            static_cast<arma::uword>(window_start) + k > fft_size)
            throw std::invalid_argument("config: window does not fit in fft_size");
        if (sc.array.spacing_over_lambda < 0.1 || sc.array.spacing_over_lambda > 10.0)
            throw std::invalid_argument("config: spacing outside [0.1, 10]");
    };

    if (config.trials < 1)
        throw std::invalid_argument("config: trials must be >= 1");
    if (config.sweep_values.empty())
        throw std::invalid_argument("config: sweep_values must be non-empty");
    for (std::size_t i = 1; i < config.sweep_values.size(); ++i)
        if (config.sweep_values[i] <= config.sweep_values[i - 1])
            throw std::invalid_argument("config: sweep_values must be strictly increasing");
    if (config.schemes.empty())
        throw std::invalid_argument("config: schemes must be non-empty");

    for (double v : config.sweep_values)
        check_dims(scene_config_for(config, v), config.fft_size, config.window_start);
}

} // namespace

std::string sweep_axis_name(SweepAxis axis)
{
    switch (axis)
    {
    case SweepAxis::power:
        return "power";
    case SweepAxis::users:
        return "users";
    case SweepAxis::ura_size:
        return "ura_size";
    case SweepAxis::spacing:
        return "spacing";
    }
    throw std::logic_error("sweep_axis_name: unknown axis");
}

SweepConfig parse_config_text(const std::string &text)
{
    SweepConfig config;
    std::stringstream lines(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(lines, line))
    {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected key = value");

        if (key == "power_w")
        {
            config.power_w = parse_double(key, value);
            if (config.power_w <= 0.0)
                throw std::invalid_argument("config: power_w must be positive");
        }
        else if (key == "users")
        {
            config.users = parse_count(key, value);
        }
        else if (key == "ura")
        {
            const auto items = split_list(value);
            if (items.size() != 2)
                throw std::invalid_argument("config: ura expects [nx, ny]");
            config.ura_nx = parse_count("ura.nx", items[0]);
            config.ura_ny = parse_count("ura.ny", items[1]);
        }
        else if (key == "spacing")
        {
            config.spacing = parse_double(key, value);
        }
        else if (key == "fft_size")
        {
            config.fft_size = parse_count(key, value);
        }
        else if (key == "window_start")
        {
            const double v = parse_double(key, value);
            if (v < 0.0 || v != std::floor(v))
                throw std::invalid_argument("config: window_start must be a non-negative integer");
            config.window_start = static_cast<arma::sword>(v);
        }
        else if (key == "carrier_hz")
        {
            config.geometry.carrier_hz = parse_double(key, value);
            if (config.geometry.carrier_hz <= 0.0)
                throw std::invalid_argument("config: carrier_hz must be positive");
        }
        else if (key == "bandwidth_hz")
        {
            config.geometry.bandwidth_hz = parse_double(key, value);
            if (config.geometry.bandwidth_hz <= 0.0)
                throw std::invalid_argument("config: bandwidth_hz must be positive");
        }
        else if (key == "altitude_m")
        {
            config.geometry.altitude_m = parse_double(key, value);
            if (config.geometry.altitude_m <= 0.0)
                throw std::invalid_argument("config: altitude_m must be positive");
        }
        else if (key == "min_elevation_deg")
        {
            config.geometry.min_elevation_deg = parse_double(key, value);
            if (config.geometry.min_elevation_deg < 0.0 ||
                config.geometry.min_elevation_deg > 90.0)
                throw std::invalid_argument("config: min_elevation_deg must be in [0, 90]");
        }
        else if (key == "user_gain_dbi")
        {
            config.geometry.user_gain_dbi = parse_double(key, value);
        }
        else if (key == "noise_temp_k")
        {
            config.geometry.noise_temp_k = parse_double(key, value);
            if (config.geometry.noise_temp_k <= 0.0)
                throw std::invalid_argument("config: noise_temp_k must be positive");
        }
        else if (key == "element_pattern_exponent")
        {
            config.element_pattern_exponent = parse_double(key, value);
            if (config.element_pattern_exponent < 0.0)
                throw std::invalid_argument(
                    "config: element_pattern_exponent must be non-negative");
        }
        else if (key == "trials")
        {
            config.trials = parse_count(key, value);
        }
        else if (key == "seed")
        {
            config.seed = static_cast<std::uint64_t>(parse_double(key, value));
        }
        else if (key == "schemes")
        {
            config.schemes.clear();
            for (const auto &item : split_list(value))
                config.schemes.push_back(scheme_from_name(item));
        }
        else if (key == "sweep_axis")
        {
            bool found = false;
            for (SweepAxis axis : {SweepAxis::power, SweepAxis::users, SweepAxis::ura_size,
                                   SweepAxis::spacing})
            {
                if (sweep_axis_name(axis) == value)
                {
                    config.sweep_axis = axis;
                    found = true;
                }
            }
            if (!found)
                throw std::invalid_argument("config: unknown sweep_axis '" + value + "'");
        }
        else if (key == "sweep_values")
        {
            config.sweep_values.clear();
            for (const auto &item : split_list(value))
                config.sweep_values.push_back(parse_double(key, item));
        }
        else if (key == "solver.max_iter")
        {
            config.solver.max_outer_iters = parse_count(key, value);
        }
        else if (key == "solver.tol")
        {
            config.solver.tolerance = parse_double(key, value);
            if (config.solver.tolerance <= 0.0)
                throw std::invalid_argument("config: solver.tol must be positive");
        }
        else if (key == "solver.beta_mode")
        {
            if (value == "bisection")
                config.solver.beta_mode = BetaMode::bisection;
            else if (value == "subgradient")
                config.solver.beta_mode = BetaMode::subgradient;
            else
                throw std::invalid_argument("config: unknown solver.beta_mode '" + value + "'");
        }
        else if (key == "solver.step0")
        {
            config.solver.step0 = parse_double(key, value);
            if (config.solver.step0 <= 0.0)
                throw std::invalid_argument("config: solver.step0 must be positive");
        }
        else if (key == "solver.theta_init")
        {
            config.solver.theta_init = parse_double(key, value);
            if (config.solver.theta_init <= 0.0)
                throw std::invalid_argument("config: solver.theta_init must be positive");
        }
        else
        {
            throw std::invalid_argument("config: unknown key '" + key + "'");
        }
    }

    validate(config);
    return config;
}

SweepConfig parse_config(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("config: cannot open '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str());
}

std::uint64_t derive_seed(std::uint64_t base_seed, double sweep_value, arma::uword trial)
{
    return mix64(base_seed, std::bit_cast<std::uint64_t>(sweep_value),
                 static_cast<std::uint64_t>(trial));
}

SceneConfig base_scene_config(const SweepConfig &config)
{
    SceneConfig sc;
    sc.array.nx = config.ura_nx;
    sc.array.ny = config.ura_ny;
    sc.array.spacing_over_lambda = config.spacing;
    sc.array.element_pattern_exponent = config.element_pattern_exponent;
    sc.geometry = config.geometry;
    sc.m_users = config.users;
    sc.power_w = config.power_w;
    return sc;
}

std::uint64_t solver_seed(std::uint64_t scene_seed)
{
    return mix64(scene_seed, kSolverStream);
}

SceneConfig scene_config_for(const SweepConfig &config, double sweep_value)
{
    SceneConfig sc = base_scene_config(config);

    auto integral = [&](const char *what) {
        if (sweep_value < 1.0 || sweep_value != std::floor(sweep_value))
            throw std::invalid_argument(std::string("config: ") + what +
                                        " sweep values must be positive integers");
        return static_cast<arma::uword>(sweep_value);
    };

    switch (config.sweep_axis)
    {
    case SweepAxis::power:
        if (sweep_value <= 0.0)
            throw std::invalid_argument("config: power sweep values must be positive");
        sc.power_w = sweep_value;
        break;
    case SweepAxis::users:
        sc.m_users = integral("users");
        break;
    case SweepAxis::ura_size:
        sc.array.nx = sc.array.ny = integral("ura_size");
        break;
    case SweepAxis::spacing:
        sc.array.spacing_over_lambda = sweep_value;
        break;
    }
    return sc;
}

arma::uword window_start_for(const SweepConfig &config, arma::uword fft_size, arma::uword k)
{
    if (config.window_start < 0)
        return (fft_size - k) / 2;
    return static_cast<arma::uword>(config.window_start);
}

std::vector<ResultRow> run_sweep(const SweepConfig &config, unsigned threads)
{
    validate(config);

    const arma::uword n_values = config.sweep_values.size();
    const arma::uword n_schemes = config.schemes.size();
    std::vector<ResultRow> rows(n_values * config.trials * n_schemes);

    const DftCodebook codebook = build_codebook(config.fft_size);

    auto run_cell = [&](arma::uword vi, arma::uword trial) {
        const double value = config.sweep_values[vi];
        const SceneConfig sc = scene_config_for(config, value);
        const Window window{window_start_for(config, config.fft_size, sc.array.elements()),
                            sc.array.elements()};
        const std::uint64_t seed = derive_seed(config.seed, value, trial);

        SolverConfig solver = config.solver;
        solver.seed = solver_seed(seed);

        Scene scene;
        std::string scene_flag;
        try
        {
            scene = build_scene(sc, seed);
        }
        catch (const std::exception &ex)
        {
            scene_flag = std::string("scene_error:") + ex.what();
        }

        const double bw = config.geometry.bandwidth_hz;
        for (arma::uword si = 0; si < n_schemes; ++si)
        {
            ResultRow &row = rows[(vi * config.trials + trial) * n_schemes + si];
            row.sweep_value = value;
            row.trial = trial;
            row.scheme = config.schemes[si];
            row.seed = seed;
            if (!scene_flag.empty())
            {
                row.flag = scene_flag;
                continue;
            }
            const SchemeResult res =
                run_scheme(config.schemes[si], scene, codebook, window, solver);
            row.sum_rate_bps = res.sum_rate * bw;
            if (res.per_user_sinr.n_elem > 0)
            {
                row.rate_min_bps = bw * std::log2(1.0 + res.per_user_sinr.min());
                row.rate_max_bps = bw * std::log2(1.0 + res.per_user_sinr.max());
            }
            row.iterations = res.iterations;
            row.wall_ms = res.wall_seconds * 1e3;
            row.flag = res.flag;
        }
    };

    const arma::uword n_cells = n_values * config.trials;
    if (threads <= 1)
    {
        for (arma::uword cell = 0; cell < n_cells; ++cell)
            run_cell(cell / config.trials, cell % config.trials);
    }
    else
    {
        std::vector<std::future<void>> workers;
        for (unsigned w = 0; w < threads; ++w)
        {
            workers.push_back(std::async(std::launch::async, [&, w]() {
                for (arma::uword cell = w; cell < n_cells; cell += threads)
                    run_cell(cell / config.trials, cell % config.trials);
            }));
        }
        for (auto &worker : workers)
            worker.get();
    }

    return rows;
}

std::string format_rows_csv(const std::vector<ResultRow> &rows)
{
    std::ostringstream out;
    out << "sweep_value,trial,scheme,sum_rate_bps,rate_min_bps,rate_max_bps,iterations,"
           "wall_ms,seed,flag\n";
    for (const auto &row : rows)
    {
        out << fmt_g(row.sweep_value) << ',' << row.trial << ',' << scheme_name(row.scheme)
            << ',' << fmt_g(row.sum_rate_bps) << ',' << fmt_g(row.rate_min_bps) << ','
            << fmt_g(row.rate_max_bps) << ',' << row.iterations << ',' << fmt_ms(row.wall_ms)
            << ',' << row.seed << ',' << row.flag << '\n';
    }
    return out.str();
}

std::string format_aggregate_csv(const std::vector<ResultRow> &rows)
{
    std::ostringstream out;
    out << "sweep_value,scheme,trials,mean_sum_rate_bps,stderr_sum_rate_bps\n";

    // group in first-appearance order; rows arrive sorted by (value, trial, scheme)
    std::vector<std::pair<double, SchemeId>> keys;
    for (const auto &row : rows)
    {
        const std::pair<double, SchemeId> key{row.sweep_value, row.scheme};
        if (std::find(keys.begin(), keys.end(), key) == keys.end())
            keys.push_back(key);
    }
    std::stable_sort(keys.begin(), keys.end(), [](const auto &a, const auto &b) {
        if (a.first != b.first)
            return a.first < b.first;
        return static_cast<int>(a.second) < static_cast<int>(b.second);
    });

    for (const auto &[value, scheme] : keys)
    {
        double sum = 0.0, sum_sq = 0.0;
        arma::uword n = 0;
        for (const auto &row : rows)
        {
            if (row.sweep_value != value || row.scheme != scheme || !row.flag.empty())
                continue;
            sum += row.sum_rate_bps;
            sum_sq += row.sum_rate_bps * row.sum_rate_bps;
            ++n;
        }
        const double mean = n > 0 ? sum / static_cast<double>(n) : 0.0;
        double stderr_mean = 0.0;
        if (n > 1)
        {
            const double var =
                std::max(0.0, (sum_sq - static_cast<double>(n) * mean * mean) /
                                  static_cast<double>(n - 1));
            stderr_mean = std::sqrt(var / static_cast<double>(n));
        }
        out << fmt_g(value) << ',' << scheme_name(scheme) << ',' << n << ',' << fmt_g(mean)
            << ',' << fmt_g(stderr_mean) << '\n';
    }
    return out.str();
}

void emit_report(const std::vector<ResultRow> &rows, const std::string &raw_path,
                 const std::string &aggregate_path)
{
    std::ofstream raw(raw_path);
    if (!raw)
        throw std::runtime_error("emit_report: cannot write '" + raw_path + "'");
    raw << format_rows_csv(rows);

    std::ofstream agg(aggregate_path);
    if (!agg)
        throw std::runtime_error("emit_report: cannot write '" + aggregate_path + "'");
    agg << format_aggregate_csv(rows);
}

} // namespace satbeam
