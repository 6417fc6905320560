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

#ifndef STARRIS_EXPERIMENT_HPP
#define STARRIS_EXPERIMENT_HPP

#include "starris/config.hpp"
#include "starris/design.hpp"
#include "starris/rates.hpp"
#include "starris/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace starris
{

enum class PhaseDesign
{
    aligned,
    random,
    optimized
};

struct ExperimentSpec
{
    std::string id = "rates-vs-snr"; // rates-vs-snr | sic-ablation | si-ablation | cluster-vs-pair | rates-vs-N | custom
    std::vector<double> grid;        // empty selects the experiment's default grid
    std::string sweep_var;           // custom sweeps only
    std::string out;
    std::uint64_t seed = 1;
    long long trials = 20000;
    PhaseDesign phases = PhaseDesign::aligned;
    unsigned threads = 1;
};

inline const std::vector<std::string> &experiment_ids()
{
    static const std::vector<std::string> ids = {"rates-vs-snr", "sic-ablation", "si-ablation",
                                                 "cluster-vs-pair", "rates-vs-N", "custom"};
    return ids;
}

inline const std::vector<std::string> &custom_sweep_vars()
{
    static const std::vector<std::string> v = {"snr_db", "xi", "beta", "lambda", "N", "m", "kappa"};
    return v;
}

struct CsvRow
{
    std::string sweep_var;
    double value = 0.0;
    std::string role;
    std::string method;
    double rate = 0.0;
    double std_error = 0.0;
    std::uint64_t seed = 0;
};

inline std::string format_number(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

inline std::string to_csv(const std::vector<CsvRow> &rows)
{
    std::string s = "sweep_var,value,role,method,rate,stderr,seed\n";
    for (const auto &r : rows)
        s += r.sweep_var + "," + format_number(r.value) + "," + r.role + "," + r.method + "," +
             format_number(r.rate) + "," + format_number(r.std_error) + "," + std::to_string(r.seed) + "\n";
    return s;
}

inline void set_sweep_var(SystemConfig &cfg, const std::string &var, double v)
{
    if (var == "snr_db")
        set_snr_db(cfg, v);
    else if (var == "xi")
        cfg.xi_sic = v;
    else if (var == "beta")
        cfg.beta_si = v;
    else if (var == "lambda")
        cfg.lambda_si = v;
    else if (var == "N")
    {
        if (v < 1 || v != std::floor(v))
            throw std::invalid_argument("sweep: N must be a positive integer");
        set_elements(cfg, static_cast<int>(v));
    }
    else if (var == "m")
        cfg.m = v;
    else if (var == "kappa")
        cfg.kappa.fill(v);
    else
        throw std::invalid_argument("sweep: unknown sweep variable " + var);
    validate(cfg);
}

inline StarRisState design_state(const SystemConfig &cfg, PhaseDesign d, std::uint64_t seed,
                                 const GeometryTerms *geo = nullptr)
{
    if (d == PhaseDesign::random)
    {
        Rng rng(derive_seed(seed, 0, 9));
        auto s = random_state(cfg.N, rng);
        for (std::size_t n = 0; n < s.size(); ++n)
        {
            s.rho_t[n] = 0.5;
            s.rho_r[n] = 0.5;
        }
        return s;
    }
    StarRisState s = suboptimal_phases(cfg);
    if (d == PhaseDesign::optimized)
        s = pgam_optimize(make_rate_inputs(cfg, default_power(cfg), s, geo)).state;
    return s;
}

// Analytic and simulated rates of the six roles at one configuration
inline void rate_rows(const SystemConfig &cfg, const ExperimentSpec &spec, const std::string &var, double value,
                      std::vector<CsvRow> &rows, const GeometryTerms *geo = nullptr)
{
    StarRisState state = design_state(cfg, spec.phases, spec.seed, geo);
    PowerAllocation power = default_power(cfg);
    RateReport a = analytic_rates(make_rate_inputs(cfg, power, state, geo));
    RateReport s = simulate({cfg, power, state, spec.trials, spec.seed, false, spec.threads});
    for (int k = 0; k < 6; ++k)
        rows.push_back({var, value, std::string(role_names[k]), "analytic", a.rate[k], 0.0, spec.seed});
    for (int k = 0; k < 6; ++k)
        rows.push_back({var, value, std::string(role_names[k]), "simulated", s.rate[k], s.std_error[k], spec.seed});
}

// Per-group powers of the clustering / pairing comparison
struct GroupPower
{
    std::vector<double> alpha;
    std::vector<double> p;
};

struct SchemePlan
{
    std::vector<Group> dl, ul;
    std::vector<GroupPower> power;
};

enum class Scheme
{
    clustering,
    pairing
};

namespace detail
{
inline double group_dl_sum(const AnalyticModel &am, const Group &dl, const std::vector<double> &alpha, const Group &ul,
                           const std::vector<double> &p, int M)
{
    double s = 0.0;
    for (double v : am.dl_sinr(dl, alpha, ul, p))
        s += rate_of_sinr(v, M);
    return s;
}
} // namespace detail

// Edge users get the minimum power for half their single-user rate; UL centre users send at p_um;
// the remaining DL power is split between centre users to maximize the group's DL sum rate
inline SchemePlan shared_power_policy(const SystemConfig &cfg, const AnalyticModel &am, Scheme scheme)
{
    SchemePlan plan;
    if (scheme == Scheme::clustering)
    {
        plan.dl = cluster_groups(cfg, Direction::DL);
        plan.ul = cluster_groups(cfg, Direction::UL);
    }
    else
    {
        plan.dl = pair_groups(cfg, Direction::DL);
        plan.ul = pair_groups(cfg, Direction::UL);
    }
    const std::size_t G = std::max(plan.dl.size(), plan.ul.size());
    plan.dl.resize(G);
    plan.ul.resize(G);
    const int M = static_cast<int>(G);
    const double n0 = am.ul_noise();

    for (std::size_t g = 0; g < G; ++g)
    {
        const Group &dl = plan.dl[g], &ul = plan.ul[g];
        GroupPower gp;
        gp.p.assign(ul.size(), cfg.p_um);
        for (std::size_t i = 0; i < ul.size(); ++i)
        {
            if (ul[i].zone != Zone::edge)
                continue;
            const double gain = am.ul_gain(ul[i]);
            if (!(gain > 0.0))
                continue;
            double target = std::sqrt(1.0 + cfg.p_um * gain / n0) - 1.0, interf = n0;
            for (std::size_t j = 0; j < ul.size(); ++j)
                if (j != i)
                    interf += (j < i ? cfg.xi_sic : 1.0) * gp.p[j] * am.ul_gain(ul[j]);
            gp.p[i] = std::min(cfg.p_um, target * interf / gain);
        }

        gp.alpha.assign(dl.size(), 0.0);
        double residual = 1.0;
        std::vector<std::size_t> centre;
        for (std::size_t i = 0; i < dl.size(); ++i)
        {
            if (dl[i].zone == Zone::center)
            {
                centre.push_back(i);
                continue;
            }
            double noise = cfg.sigma2;
            for (std::size_t v = 0; v < ul.size(); ++v)
                noise += gp.p[v] * am.cross_gain(dl[i], ul[v]);
            const double s = cfg.P_b * am.dl_gain(dl[i]) / noise;
            gp.alpha[i] = s > 1e-12 ? ((1.0 + s) - std::sqrt(1.0 + s)) / s : 0.5;
            residual -= gp.alpha[i];
        }
        if (centre.size() == 1)
            gp.alpha[centre[0]] = residual;
        else if (centre.size() == 2)
        {
            auto sum_at = [&](double f)
            {
                auto a = gp.alpha;
                a[centre[0]] = f * residual;
                a[centre[1]] = (1.0 - f) * residual;
                return detail::group_dl_sum(am, dl, a, ul, gp.p, M);
            };
            constexpr int n_grid = 200;
            int best = 0;
            double fbest = sum_at(0.0);
            for (int k = 1; k <= n_grid; ++k)
            {
                double v = sum_at(static_cast<double>(k) / n_grid);
                if (v > fbest)
                {
                    fbest = v;
                    best = k;
                }
            }
            double lo = std::max(0.0, (best - 1.0) / n_grid), hi = std::min(1.0, (best + 1.0) / n_grid);
            const double r = (std::sqrt(5.0) - 1.0) / 2.0;
            for (int it = 0; it < 60; ++it)
            {
                double x1 = hi - r * (hi - lo), x2 = lo + r * (hi - lo);
                if (sum_at(x1) >= sum_at(x2))
                    hi = x2;
                else
                    lo = x1;
            }
            double f = 0.5 * (lo + hi);
            if (sum_at(f) < fbest)
                f = static_cast<double>(best) / n_grid;
            gp.alpha[centre[0]] = f * residual;
            gp.alpha[centre[1]] = (1.0 - f) * residual;
        }
        else if (!centre.empty())
            throw std::invalid_argument("shared_power_policy: groups with more than two centre users");
        plan.power.push_back(std::move(gp));
    }
    return plan;
}

struct SchemeSums
{
    double dl = 0.0, ul = 0.0;
};

inline SchemeSums analytic_scheme_sums(const AnalyticModel &am, const SchemePlan &plan)
{
    SchemeSums s;
    const int M = static_cast<int>(plan.power.size());
    for (std::size_t g = 0; g < plan.power.size(); ++g)
    {
        s.dl += detail::group_dl_sum(am, plan.dl[g], plan.power[g].alpha, plan.ul[g], plan.power[g].p, M);
        for (double v : am.ul_sinr(plan.ul[g], plan.power[g].p))
            s.ul += rate_of_sinr(v, M);
    }
    return s;
}

// Simulated DL and UL sum rates of both schemes over the same layouts and channels
inline std::array<Estimate, 4> simulate_schemes(const SystemConfig &cfg, const StarRisState &state,
                                                const SchemePlan &cl, const SchemePlan &pr, long long trials,
                                                std::uint64_t seed, unsigned threads)
{
    std::array<RicianLink, n_links> links;
    for (std::size_t i = 0; i < n_links; ++i)
        links[i] = make_link(cfg, static_cast<Link>(i));
    const SurfaceSide st = surface_side(state, Side::t), sr = surface_side(state, Side::r);
    BlockControl ctl{trials, seed, 1024, threads};
    auto est = run_blocks(ctl, 4, [&](std::uint64_t b, long long n, std::vector<double> &sum, std::vector<double> &sq)
                          {
        Rng lay(derive_seed(seed, b, 0)), chan(derive_seed(seed, b, 1));
        std::vector<double> sd, su;
        for (long long t = 0; t < n; ++t)
        {
            UserLayout L = sample_layout(cfg, lay);
            TrialChannels ch(cfg, links, st, sr, L, chan);
            const SchemePlan *plans[2] = {&cl, &pr};
            for (int s = 0; s < 2; ++s)
            {
                auto dl = realize(L, s == 0 ? cluster_users(L, cfg, Direction::DL) : pair_users(L, cfg, Direction::DL));
                auto ul = realize(L, s == 0 ? cluster_users(L, cfg, Direction::UL) : pair_users(L, cfg, Direction::UL));
                const auto &pl = *plans[s];
                const int M = static_cast<int>(pl.power.size());
                dl.resize(M);
                ul.resize(M);
                double rdl = 0.0, rul = 0.0;
                for (int g = 0; g < M; ++g)
                {
                    group_sinr(cfg, ch, dl[g], pl.power[g].alpha, ul[g], pl.power[g].p, sd, su);
                    for (double v : sd)
                        rdl += rate_of_sinr(v, M);
                    for (double v : su)
                        rul += rate_of_sinr(v, M);
                }
                sum[2 * s] += rdl;
                sq[2 * s] += rdl * rdl;
                sum[2 * s + 1] += rul;
                sq[2 * s + 1] += rul * rul;
            }
        } });
    return {est[0], est[1], est[2], est[3]};
}

inline void scheme_rows(const SystemConfig &cfg, const ExperimentSpec &spec, const std::string &var, double value,
                        std::vector<CsvRow> &rows, const GeometryTerms &geo)
{
    StarRisState state = design_state(cfg, spec.phases, spec.seed, &geo);
    ChannelTerms ch = channel_terms(cfg, state);
    AnalyticModel am{&cfg, &geo, &ch};
    SchemePlan cl = shared_power_policy(cfg, am, Scheme::clustering);
    SchemePlan pr = shared_power_policy(cfg, am, Scheme::pairing);
    SchemeSums a_cl = analytic_scheme_sums(am, cl), a_pr = analytic_scheme_sums(am, pr);
    auto sim = simulate_schemes(cfg, state, cl, pr, spec.trials, spec.seed, spec.threads);
    const char *roles[4] = {"DL_sum_cluster", "UL_sum_cluster", "DL_sum_pair", "UL_sum_pair"};
    const double an[4] = {a_cl.dl, a_cl.ul, a_pr.dl, a_pr.ul};
    for (int k = 0; k < 4; ++k)
        rows.push_back({var, value, roles[k], "analytic", an[k], 0.0, spec.seed});
    for (int k = 0; k < 4; ++k)
        rows.push_back({var, value, roles[k], "simulated", sim[k].mean, sim[k].std_error, spec.seed});
}

inline std::vector<CsvRow> run_experiment(const SystemConfig &base, const ExperimentSpec &spec)
{
    validate(base);
    const auto &ids = experiment_ids();
    if (std::find(ids.begin(), ids.end(), spec.id) == ids.end())
        throw std::invalid_argument("run_experiment: unknown experiment id " + spec.id);
    if (spec.trials < 1)
        throw std::invalid_argument("run_experiment: trials must be >= 1");

    std::vector<double> grid = spec.grid;
    if (grid.empty())
    {
        if (spec.id == "rates-vs-N")
            grid = {4, 16, 36, 64};
        else if (spec.id == "custom")
            throw std::invalid_argument("run_experiment: custom sweeps need a grid");
        else
            grid = {0, 10, 20, 30, 40, 50};
    }

    std::vector<CsvRow> rows;
    const GeometryTerms geo = geometry_terms(base);
    auto label = [](const std::string &v, const std::string &tag) { return tag.empty() ? v : v + "[" + tag + "]"; };

    if (spec.id == "rates-vs-snr" || spec.id == "sic-ablation" || spec.id == "si-ablation" ||
        spec.id == "cluster-vs-pair")
    {
        struct Variant
        {
            std::string tag;
            SystemConfig cfg;
        };
        std::vector<Variant> variants;
        if (spec.id == "rates-vs-snr")
            variants.push_back({"", base});
        else if (spec.id == "si-ablation")
        {
            SystemConfig high = base;
            high.beta_si = 1.0;
            high.lambda_si = 0.4;
            for (const SystemConfig *c : {&base, static_cast<const SystemConfig *>(&high)})
                variants.push_back({"beta=" + format_number(c->beta_si) + ",lambda=" + format_number(c->lambda_si), *c});
        }
        else
        {
            std::vector<double> xis{0.0};
            if (base.xi_sic != 0.0)
                xis.push_back(base.xi_sic);
            if (spec.id == "sic-ablation" && base.xi_sic != 0.1)
                xis.push_back(0.1);
            for (double xi : xis)
            {
                SystemConfig c = base;
                c.xi_sic = xi;
                variants.push_back({"xi=" + format_number(xi), c});
            }
        }
        for (const auto &v : variants)
            for (double x : grid)
            {
                SystemConfig c = v.cfg;
                set_sweep_var(c, "snr_db", x);
                if (spec.id == "cluster-vs-pair")
                    scheme_rows(c, spec, label("snr_db", v.tag), x, rows, geo);
                else
                    rate_rows(c, spec, label("snr_db", v.tag), x, rows, &geo);
            }
        return rows;
    }

    const std::string var = spec.id == "rates-vs-N" ? "N" : spec.sweep_var;
    if (std::find(custom_sweep_vars().begin(), custom_sweep_vars().end(), var) == custom_sweep_vars().end())
        throw std::invalid_argument("run_experiment: unknown sweep variable '" + var + "'");
    const bool geometry_changes = var == "m";
    for (double x : grid)
    {
        SystemConfig c = base;
        set_sweep_var(c, var, x);
        if (geometry_changes)
            rate_rows(c, spec, var, x, rows);
        else
            rate_rows(c, spec, var, x, rows, &geo);
    }
    return rows;
}

inline void write_csv(const std::vector<CsvRow> &rows, const std::string &path)
{
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw std::runtime_error("cannot open " + path + " for writing");
    f << to_csv(rows);
    if (!f)
        throw std::runtime_error("write failed: " + path);
}

} // namespace starris

#endif
