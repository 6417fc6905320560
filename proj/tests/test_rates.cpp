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

#include <catch_amalgamated.hpp>

#include "starris/design.hpp"
#include "starris/rates.hpp"

#include <cmath>

using namespace starris;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace
{
RateInputs baseline_inputs(const SystemConfig &cfg, const PowerAllocation &p)
{
    return make_rate_inputs(cfg, p, suboptimal_phases(cfg));
}

RateInputs baseline_inputs(const SystemConfig &cfg) { return baseline_inputs(cfg, default_power(cfg)); }

double sinr_of(double rate, int M) { return std::exp2(rate * M) - 1.0; }
} // namespace

TEST_CASE("zero coefficients give zero rates")
{
    auto cfg = baseline_config();
    PowerAllocation p = default_power(cfg);
    p.alpha = {0.0, 0.0, 0.0};
    p.p_ul = {0.0, 0.0, 0.0};
    auto r = analytic_rates(baseline_inputs(cfg, p));
    for (double v : r.rate)
        CHECK(v == 0.0);

    p = default_power(cfg);
    p.alpha[0] = 0.0;
    CHECK(dl_rate_strong(baseline_inputs(cfg, p)) == 0.0);
    p = default_power(cfg);
    p.alpha[1] = 0.0;
    CHECK(dl_rate_mid(baseline_inputs(cfg, p)) == 0.0);
    p = default_power(cfg);
    p.alpha[2] = 0.0;
    CHECK(dl_rate_edge(baseline_inputs(cfg, p)) == 0.0);
    p = default_power(cfg);
    p.p_ul[2] = 0.0;
    CHECK(ul_rate_edge(baseline_inputs(cfg, p)) == 0.0);
}

TEST_CASE("DL1 ceiling under imperfect SIC")
{
    auto cfg = baseline_config();
    PowerAllocation p = default_power(cfg);
    p.p_ul = {0.0, 0.0, 0.0};
    const double cap = std::log2(1.0 + p.alpha[0] / (cfg.xi_sic * (p.alpha[1] + p.alpha[2]))) / cfg.M_d;
    double prev = 0.0;
    for (double snr : {0.0, 20.0, 40.0, 60.0, 80.0, 120.0})
    {
        set_snr_db(cfg, snr);
        double r = dl_rate_strong(baseline_inputs(cfg, p));
        CHECK(r <= cap);
        CHECK(r >= prev);
        prev = r;
    }
    CHECK_THAT(prev, WithinRel(cap, 1e-6));

    cfg.xi_sic = 0.0;
    set_snr_db(cfg, 60.0);
    double r60 = dl_rate_strong(baseline_inputs(cfg, p));
    set_snr_db(cfg, 120.0);
    double r120 = dl_rate_strong(baseline_inputs(cfg, p));
    CHECK(r120 > r60 + 1.0);
}

TEST_CASE("DL2 reduces to the single-user form")
{
    auto cfg = baseline_config();
    cfg.xi_sic = 0.0;
    PowerAllocation p = default_power(cfg);
    p.alpha[0] = 0.0;
    p.p_ul = {0.0, 0.0, 0.0};
    auto in = baseline_inputs(cfg, p);
    double single = std::log2(1.0 + p.alpha[1] * cfg.P_b * in.term("x1_u2d") / cfg.sigma2) / cfg.M_d;
    CHECK_THAT(dl_rate_mid(in), WithinRel(single, 1e-14));
}

TEST_CASE("DL3 stays below its interference ceiling")
{
    auto cfg = baseline_config();
    Rng rng(3);
    for (int rep = 0; rep < 200; ++rep)
    {
        PowerAllocation p;
        double a = rng.uniform(), b = rng.uniform(), c = rng.uniform(), s = a + b + c;
        p.alpha = {a / s, b / s, c / s};
        for (auto &v : p.p_ul)
            v = cfg.p_um * rng.uniform();
        set_snr_db(cfg, 60.0 * rng.uniform());
        auto in = make_rate_inputs(cfg, p, random_state(cfg.N, rng));
        CHECK(sinr_of(dl_rate_edge(in), cfg.M_d) < p.alpha[2] / (p.alpha[0] + p.alpha[1]));
        CHECK(sinr_of(dl_rate_strong(in), cfg.M_d) <= p.alpha[0] / (cfg.xi_sic * (p.alpha[1] + p.alpha[2])) + 1e-12);
    }
}

TEST_CASE("edge rates grow with the surface size under aligned phases")
{
    auto cfg = baseline_config();
    double dl3 = 0.0, ul3 = 0.0;
    for (int N : {4, 16, 36, 64})
    {
        set_elements(cfg, N);
        cfg.angles = default_angles(cfg);
        auto in = baseline_inputs(cfg);
        CHECK(dl_rate_edge(in) > dl3);
        CHECK(ul_rate_edge(in) > ul3);
        dl3 = dl_rate_edge(in);
        ul3 = ul_rate_edge(in);
    }
}

TEST_CASE("UL3 noise floor without SIC residue")
{
    auto cfg = baseline_config();
    cfg.xi_sic = 0.0;
    auto in = baseline_inputs(cfg);
    double s3 = in.power.p_ul[2] * in.term("l_br") * in.term("omega_7") * in.term("x1_u3u");
    double n0 = cfg.P_b * in.term("y3") + cfg.self_interference() + cfg.sigma2;
    CHECK_THAT(ul_rate_edge(in), WithinRel(std::log2(1.0 + s3 / n0) / cfg.M_u, 1e-14));
    CHECK_THAT(in.term("y3"), WithinRel(in.term("l_br") * in.term("l_br") * in.term("self_reflection"), 1e-15));
}

TEST_CASE("high self-interference lowers every UL rate")
{
    for (double snr : {0.0, 10.0, 20.0, 30.0, 40.0, 50.0})
    {
        auto base = baseline_config();
        set_snr_db(base, snr);
        auto high = base;
        high.beta_si = 1.0;
        high.lambda_si = 0.4;
        auto a = analytic_rates(baseline_inputs(base)), b = analytic_rates(baseline_inputs(high));
        for (int k = 3; k < 6; ++k)
        {
            CAPTURE(snr, k);
            CHECK(b.rate[k] < a.rate[k]);
        }
    }
}

TEST_CASE("monotonicity in the impairments")
{
    auto cfg = baseline_config();
    RateReport prev = analytic_rates(baseline_inputs(cfg));
    for (double xi : {0.0, 0.05, 0.1, 0.3, 0.7, 1.0})
    {
        cfg.xi_sic = xi;
        auto r = analytic_rates(baseline_inputs(cfg));
        if (xi > 0.0)
        {
            CHECK(r[Role::DL1] <= prev[Role::DL1]);
            CHECK(r[Role::UL2] <= prev[Role::UL2]);
            CHECK(r[Role::UL3] <= prev[Role::UL3]);
        }
        prev = r;
    }
    cfg = baseline_config();
    prev = analytic_rates(baseline_inputs(cfg));
    for (double beta : {0.01, 0.1, 1.0, 10.0})
    {
        cfg.beta_si = beta;
        auto r = analytic_rates(baseline_inputs(cfg));
        for (int k = 3; k < 6; ++k)
            CHECK(r.rate[k] <= prev.rate[k]);
        prev = r;
    }
}

TEST_CASE("weighted sum rate")
{
    auto cfg = baseline_config();
    auto in = baseline_inputs(cfg);
    auto r = analytic_rates(in);
    CHECK(weighted_sum_rate(in, {0, 0, 0, 0, 0, 0}) == 0.0);
    CHECK_THAT(weighted_sum_rate(in), WithinRel(r.dl_sum() + r.ul_sum(), 1e-15));
    const std::array<double, 6> w{0.3, 1.7, 2.0, 0.1, 0.0, 5.5};
    double hand = 0.3 * dl_rate_strong(in) + 1.7 * dl_rate_mid(in) + 2.0 * dl_rate_edge(in) + 0.1 * ul_rate_strong(in) +
                  5.5 * ul_rate_edge(in);
    CHECK_THAT(weighted_sum_rate(in, w), WithinRel(hand, 1e-14));
    CHECK_THROWS(weighted_sum_rate(in, {1, 1, -1, 1, 1, 1}));
}

TEST_CASE("closed-form rates equal the generic group engine")
{
    auto cfg = baseline_config();
    Rng rng(17);
    for (int rep = 0; rep < 20; ++rep)
    {
        cfg.cluster = 1 + rep % 3;
        cfg.xi_sic = rng.uniform();
        set_snr_db(cfg, 50.0 * rng.uniform());
        PowerAllocation p = default_power(cfg);
        for (auto &v : p.p_ul)
            v = cfg.p_um * rng.uniform();
        auto in = make_rate_inputs(cfg, p, random_state(cfg.N, rng));
        auto am = in.model();
        const Group dl = dl_cluster_group(cfg, cfg.cluster), ul = ul_cluster_group(cfg, cfg.cluster);
        std::vector<double> alpha(p.alpha.begin(), p.alpha.end()), pu(p.p_ul.begin(), p.p_ul.end());
        auto sd = am.dl_sinr(dl, alpha, ul, pu);
        auto su = am.ul_sinr(ul, pu);
        auto r = analytic_rates(in);
        for (int k = 0; k < 3; ++k)
        {
            CHECK_THAT(r.rate[k], WithinRel(rate_of_sinr(sd[k], cfg.M_d), 1e-12));
            CHECK_THAT(r.rate[3 + k], WithinRel(rate_of_sinr(su[k], cfg.M_u), 1e-12));
        }
    }
}

TEST_CASE("rate inputs reject missing clusters")
{
    auto cfg = baseline_config();
    cfg.cluster = 4;
    CHECK_THROWS_AS(make_rate_inputs(cfg, default_power(cfg), suboptimal_phases(cfg)), config_error);
    cfg = baseline_config();
    CHECK_THROWS(make_rate_inputs(cfg, default_power(cfg), StarRisState::uniform(4)));
    auto in = baseline_inputs(cfg);
    CHECK_THROWS_AS(in.term("omega_9"), std::out_of_range);
}

TEST_CASE("group constructors")
{
    auto cfg = baseline_config();
    CHECK(cluster_groups(cfg, Direction::DL).size() == 3);
    auto pairs = pair_groups(cfg, Direction::DL);
    REQUIRE(pairs.size() == 5);
    CHECK(pairs[0][0].zone == Zone::center);
    CHECK(pairs[0][1].zone == Zone::edge);
    CHECK(pairs[0][1].order == 3);
    CHECK(pairs[4].size() == 1);
    auto g = dl_cluster_group(cfg, 1);
    CHECK(g[2].order == 3);
    CHECK(ul_cluster_group(cfg, 1)[2].order == 1);
}
