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

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "satbeam/assignment.hpp"
#include "satbeam/harness.hpp"
#include "satbeam/metrics.hpp"
#include "satbeam/wmmse.hpp"

namespace
{

int cmd_run(const std::string &config_path, std::uint64_t seed, bool seed_set,
            const std::string &out_dir, arma::uword trials, const std::string &schemes,
            unsigned threads)
{
    satbeam::SweepConfig config = satbeam::parse_config(config_path);
    if (seed_set)
        config.seed = seed;
    if (trials > 0)
        config.trials = trials;
    if (!schemes.empty())
    {
        config.schemes.clear();
        std::stringstream ss(schemes);
        std::string item;
        while (std::getline(ss, item, ','))
            config.schemes.push_back(satbeam::scheme_from_name(item));
    }

    config.output_path = out_dir;

    const auto rows = satbeam::run_sweep(config, threads);
    std::filesystem::create_directories(config.output_path);
    const std::string raw = config.output_path + "/results.csv";
    const std::string agg = config.output_path + "/aggregate.csv";
    satbeam::emit_report(rows, raw, agg);
    std::cerr << "wrote " << rows.size() << " rows to " << raw << " (aggregate: " << agg
              << ")\n";
    return 0;
}

int cmd_solve(const std::string &config_path, std::uint64_t seed, bool seed_set,
              bool dump_trace)
{
    satbeam::SweepConfig config = satbeam::parse_config(config_path);
    if (seed_set)
        config.seed = seed;

    const satbeam::SceneConfig sc = satbeam::base_scene_config(config);
    const satbeam::DftCodebook codebook = satbeam::build_codebook(config.fft_size);
    const satbeam::Window window{
        satbeam::window_start_for(config, config.fft_size, sc.array.elements()),
        sc.array.elements()};

    const satbeam::Scene scene = satbeam::build_scene(sc, config.seed);
    satbeam::SolverConfig solver = config.solver;
    solver.seed = satbeam::solver_seed(config.seed);

    const satbeam::SolverState state = satbeam::solve(scene, codebook, window, solver);

    if (dump_trace)
    {
        std::cout << "iteration,objective,sum_rate_bps,beta,power_w\n";
        for (const auto &it : state.iteration_stats)
        {
            std::printf("%llu,%.17g,%.17g,%.17g,%.17g\n",
                        static_cast<unsigned long long>(it.iter), it.objective,
                        it.sum_rate * scene.bandwidth_hz, it.beta, it.power);
        }
    }

    const double rate = satbeam::sum_rate(scene, codebook, window, state.assignment,
                                          state.precoder);
    std::cerr << "converged=" << (state.converged ? "yes" : "no") << " iters=" << state.iter
              << " sum_rate=" << rate * scene.bandwidth_hz * 1e-9 << " Gbps"
              << " beta=" << state.beta << " power=" << state.precoder.power() << "/"
              << scene.power_budget << " W"
              << " assignment_rejections=" << state.assignment_rejections << "\n";
    return state.converged ? 0 : 2;
}

int cmd_oracle(const std::string &cost_path)
{
    arma::mat rho;
    if (!rho.load(cost_path, arma::csv_ascii))
        throw std::invalid_argument("oracle: cannot parse cost matrix from '" + cost_path +
                                    "'");
    const satbeam::CostMatrix cost{rho};

    auto print = [&](const char *name, const satbeam::Assignment &a) {
        std::cout << name << ": rows=[";
        for (arma::uword m = 0; m < a.n_users(); ++m)
            std::cout << (m ? "," : "") << a.row_of[m];
        std::cout << "] total=" << satbeam::assignment_cost(cost, a) << "\n";
    };

    print("hungarian", satbeam::hungarian(cost));

    double cases = 1.0;
    for (arma::uword i = 0; i < cost.n_users(); ++i)
        cases *= static_cast<double>(cost.n_rows() - i);
    if (cases <= 1e7)
        print("brute_force", satbeam::brute_force_assignment(cost));
    else
        std::cout << "brute_force: skipped (" << cases << " cases exceed budget)\n";
    return 0;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Joint linear precoding and DFT-codebook beam selection for multi-beam "
                 "satellite payloads"};
    app.require_subcommand(1);

    std::string config_path, out_dir = ".", schemes, cost_path;
    std::uint64_t seed = 0;
    arma::uword trials = 0;
    unsigned threads = 1;
    bool dump_trace = false;

    auto *run = app.add_subcommand("run", "Monte Carlo sweep over a scenario config");
    run->add_option("--config", config_path, "scenario config file")->required();
    auto *run_seed = run->add_option("--seed", seed, "override base seed");
    run->add_option("--out", out_dir, "output directory (results.csv, aggregate.csv)");
    run->add_option("--trials", trials, "override trial count");
    run->add_option("--schemes", schemes, "comma-separated scheme list");
    run->add_option("--threads", threads, "worker threads for trials");

    auto *solve = app.add_subcommand("solve", "solve a single scene, optional trace CSV");
    solve->add_option("--config", config_path, "scenario config file")->required();
    auto *solve_seed = solve->add_option("--seed", seed, "override base seed");
    solve->add_flag("--dump-trace", dump_trace, "write per-iteration CSV to stdout");

    auto *oracle = app.add_subcommand("oracle", "cross-check Hungarian vs brute force");
    oracle->add_option("--cost", cost_path, "cost matrix CSV (rows = DFT indices)")
        ->required();

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (run->parsed())
            return cmd_run(config_path, seed, run_seed->count() > 0, out_dir, trials, schemes,
                           threads);
        if (solve->parsed())
            return cmd_solve(config_path, seed, solve_seed->count() > 0, dump_trace);
        if (oracle->parsed())
            return cmd_oracle(cost_path);
    }
    catch (const std::exception &ex)
    {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }
    return 0;
}
