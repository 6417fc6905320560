// SPDX-License-Identifier: Apache-2.0
//
// Copyright (C) 2026 The starris contributors
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

#include "starris/config.hpp"
#include "starris/design.hpp"
#include "starris/experiment.hpp"
#include "starris/rates.hpp"
#include "starris/simulator.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>

using namespace starris;

namespace
{

SystemConfig read_config(const std::string &path)
{
    if (path.empty())
        return baseline_config();
    std::ifstream f(path, std::ios::binary);
    if (!f)
        throw std::runtime_error("cannot read config file " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return load_config(ss.str());
}

void emit(const std::string &text, const std::string &path)
{
    if (path.empty() || path == "-")
    {
        std::cout << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw std::runtime_error("cannot open " + path + " for writing");
    f << text;
    if (!f)
        throw std::runtime_error("write failed: " + path);
}

PhaseDesign parse_phases(const std::string &s)
{
    if (s == "aligned")
        return PhaseDesign::aligned;
    if (s == "random")
        return PhaseDesign::random;
    if (s == "optimized")
        return PhaseDesign::optimized;
    throw std::invalid_argument("unknown phase design " + s);
}

std::string fmt(double v) { return format_number(v); }

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"STAR-RIS full-duplex NOMA rate analysis"};
    app.require_subcommand(1);

    std::string config_path, out, phases = "aligned";
    std::uint64_t seed = 1;
    long long trials = 20000;
    unsigned threads = std::max(1u, std::thread::hardware_concurrency());

    auto common = [&](CLI::App *sub)
    {
        sub->add_option("--config", config_path, "JSON configuration file (baseline when omitted)");
        sub->add_option("--out", out, "Output CSV path (stdout when omitted)");
        sub->add_option("--seed", seed, "Random seed");
    };

    auto *analytic = app.add_subcommand("analytic", "Closed-form ergodic rates of the configured cluster");
    common(analytic);
    analytic->add_option("--phases", phases, "aligned | random | optimized")->capture_default_str();

    auto *simulate_cmd = app.add_subcommand("simulate", "Monte-Carlo ergodic rates of the configured cluster");
    common(simulate_cmd);
    bool fixed_layout = false;
    simulate_cmd->add_option("--trials", trials, "Monte-Carlo trials")->capture_default_str();
    simulate_cmd->add_option("--threads", threads, "Worker threads");
    simulate_cmd->add_option("--phases", phases, "aligned | random | optimized")->capture_default_str();
    simulate_cmd->add_flag("--fixed-layout", fixed_layout, "Keep one user layout for all trials");

    auto *optimize = app.add_subcommand("optimize", "Projected gradient ascent on the weighted sum rate");
    common(optimize);
    PgamSettings pg;
    std::string trace_out;
    optimize->add_option("--trace", trace_out, "Objective trace CSV path");
    optimize->add_option("--max-iters", pg.max_iters, "Iteration cap")->capture_default_str();
    optimize->add_option("--tolerance", pg.tolerance, "Stop below this gain")->capture_default_str();
    optimize->add_option("--restarts", pg.restarts, "Extra random starts")->capture_default_str();

    auto *cluster = app.add_subcommand("cluster", "Sample a layout and print its clustering");
    common(cluster);
    std::string scheme = "cluster", mode = "both";
    cluster->add_option("--scheme", scheme, "cluster | pair")->capture_default_str();
    cluster->add_option("--mode", mode, "dl | ul | both")->capture_default_str();

    auto *sweep = app.add_subcommand("sweep", "Run an experiment sweep");
    common(sweep);
    ExperimentSpec spec;
    std::vector<double> grid;
    sweep->add_option("--experiment", spec.id, "rates-vs-snr | sic-ablation | si-ablation | cluster-vs-pair | "
                                              "rates-vs-N | custom")
        ->capture_default_str();
    sweep->add_option("--grid", grid, "Sweep values")->delimiter(',');
    sweep->add_option("--var", spec.sweep_var, "Sweep variable for custom sweeps");
    sweep->add_option("--trials", trials, "Monte-Carlo trials per point")->capture_default_str();
    sweep->add_option("--threads", threads, "Worker threads");
    sweep->add_option("--phases", phases, "aligned | random | optimized")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try
    {
        SystemConfig cfg = read_config(config_path);
        if (*analytic || *simulate_cmd)
        {
            require_uniform_clusters(cfg);
            StarRisState state = design_state(cfg, parse_phases(phases), seed);
            PowerAllocation power = default_power(cfg);
            if (*analytic)
            {
                RateReport r = analytic_rates(make_rate_inputs(cfg, power, state));
                std::string s = "role,rate\n";
                for (int k = 0; k < 6; ++k)
                    s += std::string(role_names[k]) + "," + fmt(r.rate[k]) + "\n";
                s += "DL_sum," + fmt(r.dl_sum()) + "\nUL_sum," + fmt(r.ul_sum()) + "\nweighted," +
                     fmt(r.weighted(role_weights(cfg))) + "\n";
                emit(s, out);
            }
            else
            {
                RateReport r = simulate({cfg, power, state, trials, seed, fixed_layout, threads});
                std::string s = "role,rate,stderr,trials,seed\n";
                for (int k = 0; k < 6; ++k)
                    s += std::string(role_names[k]) + "," + fmt(r.rate[k]) + "," + fmt(r.std_error[k]) + "," +
                         std::to_string(trials) + "," + std::to_string(seed) + "\n";
                emit(s, out);
            }
        }
        else if (*optimize)
        {
            require_uniform_clusters(cfg);
            pg.seed = seed;
            auto res = pgam_optimize(make_rate_inputs(cfg, default_power(cfg), suboptimal_phases(cfg)), pg);
            std::string s = "element,rho_t,rho_r,phi_t,phi_r\n";
            for (std::size_t n = 0; n < res.state.size(); ++n)
                s += std::to_string(n + 1) + "," + fmt(res.state.rho_t[n]) + "," + fmt(res.state.rho_r[n]) + "," +
                     fmt(res.state.phi_t[n]) + "," + fmt(res.state.phi_r[n]) + "\n";
            std::string t = "iteration,objective\n";
            for (std::size_t i = 0; i < res.trace.size(); ++i)
                t += std::to_string(i) + "," + fmt(res.trace[i]) + "\n";
            if (trace_out.empty() && (out.empty() || out == "-"))
                emit(s + "\n" + t, out);
            else
            {
                emit(s, out);
                emit(t, trace_out.empty() ? out + ".trace.csv" : trace_out);
            }
        }
        else if (*cluster)
        {
            if (scheme != "cluster" && scheme != "pair")
                throw std::invalid_argument("unknown scheme " + scheme);
            if (mode != "dl" && mode != "ul" && mode != "both")
                throw std::invalid_argument("unknown mode " + mode);
            Rng rng(derive_seed(seed, 0, 0));
            UserLayout L = sample_layout(cfg, rng);
            std::string s = "mode,cluster_id,user_id,role,distance\n";
            for (Direction d : {Direction::DL, Direction::UL})
            {
                if ((d == Direction::DL && mode == "ul") || (d == Direction::UL && mode == "dl"))
                    continue;
                ClusterPlan plan = scheme == "cluster" ? cluster_users(L, cfg, d) : pair_users(L, cfg, d);
                for (std::size_t c = 0; c < plan.clusters.size(); ++c)
                    for (const auto &m : plan.clusters[c].members)
                        s += std::string(d == Direction::DL ? "DL" : "UL") + "," + std::to_string(c + 1) + "," +
                             std::to_string(m.user_id) + "," + std::string(role_tag(m.role)) + "," + fmt(m.distance) +
                             "\n";
            }
            emit(s, out);
        }
        else if (*sweep)
        {
            if (spec.id != "custom")
                require_uniform_clusters(cfg);
            spec.grid = grid;
            spec.seed = seed;
            spec.trials = trials;
            spec.threads = threads;
            spec.phases = parse_phases(phases);
            spec.out = out;
            emit(to_csv(run_experiment(cfg, spec)), out);
        }
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
