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

#include <cstdint>
#include <string>
#include <vector>

#include "satbeam/baselines.hpp"
#include "satbeam/geometry.hpp"
#include "satbeam/wmmse.hpp"

namespace satbeam
{

enum class SweepAxis
{
    power,
    users,
    ura_size,
    spacing
};

std::string sweep_axis_name(SweepAxis axis);

struct SweepConfig
{
    // base scenario
    double power_w = 3000.0;
    arma::uword users = 45;
    arma::uword ura_nx = 10;
    arma::uword ura_ny = 10;
    double spacing = 1.0;
    double element_pattern_exponent = 1.0;
    arma::uword fft_size = 256;
    arma::sword window_start = -1; // negative selects the centered window
    GeometryConfig geometry;

    SweepAxis sweep_axis = SweepAxis::power;
    std::vector<double> sweep_values = {1000.0, 2000.0, 3000.0};
    arma::uword trials = 50;
    std::vector<SchemeId> schemes = {SchemeId::joint_wmmse, SchemeId::greedy_zf,
                                     SchemeId::dft_only, SchemeId::mf_fdp, SchemeId::mmse_fdp};
    std::uint64_t seed = 1;
    std::string output_path = ".";

    SolverConfig solver;
};

struct ResultRow
{
    double sweep_value = 0.0;
    arma::uword trial = 0;
    SchemeId scheme = SchemeId::joint_wmmse;
    double sum_rate_bps = 0.0;
    double rate_min_bps = 0.0;
    double rate_max_bps = 0.0;
    arma::uword iterations = 0;
    double wall_ms = 0.0;
    std::uint64_t seed = 0;
    std::string flag;
};

/// Strict line-oriented `key = value` parser. Unknown keys and malformed or
/// out-of-range values are errors; omitted keys keep scenario defaults.
SweepConfig parse_config(const std::string &path);
SweepConfig parse_config_text(const std::string &text);

/// Scene seed for one (sweep value, trial) cell: a documented splitmix64
/// combination of the base seed, the IEEE-754 bits of the sweep value and
/// the trial index, so sweeps reproduce across machines.
std::uint64_t derive_seed(std::uint64_t base_seed, double sweep_value, arma::uword trial);

/// Base scenario without any sweep override.
SceneConfig base_scene_config(const SweepConfig &config);

/// Scenario with the sweep axis override applied for one sweep value.
SceneConfig scene_config_for(const SweepConfig &config, double sweep_value);

/// Seed of the solver's random initial assignment for one scene.
std::uint64_t solver_seed(std::uint64_t scene_seed);

arma::uword window_start_for(const SweepConfig &config, arma::uword fft_size, arma::uword k);

/// Run every (sweep value, trial, scheme) cell. All schemes within a trial
/// evaluate the identical scene; rows come back sorted by (value, trial,
/// scheme). Trials run on `threads` workers; ordering is independent of the
/// thread count.
std::vector<ResultRow> run_sweep(const SweepConfig &config, unsigned threads = 1);

/// Raw rows plus a per-(sweep value, scheme) mean/standard-error aggregate.
/// Aggregates cover rows with an empty flag.
void emit_report(const std::vector<ResultRow> &rows, const std::string &raw_path,
                 const std::string &aggregate_path);

std::string format_rows_csv(const std::vector<ResultRow> &rows);
std::string format_aggregate_csv(const std::vector<ResultRow> &rows);

} // namespace satbeam
