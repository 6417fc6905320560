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

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace starris;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace
{
double los_gain(const SystemConfig &cfg, const StarRisState &s, Link out, Side side, Link in)
{
    return std::norm(cascade(make_link(cfg, out).los, s, side, make_link(cfg, in).los));
}

// Random allocation inside the feasible set and its analytic rates
std::array<double, 6> reachable_targets(const SystemConfig &cfg, const StarRisState &s, Rng &rng)
{
    PowerAllocation p;
    double a = rng.uniform(), b = rng.uniform(), c = rng.uniform(), sum = a + b + c + rng.uniform();
    p.alpha = {a / sum, b / sum, c / sum};
    for (auto &v : p.p_ul)
        v = cfg.p_um * (0.05 + 0.95 * rng.uniform());
    return analytic_rates(make_rate_inputs(cfg, p, s)).rate;
}
} // namespace

TEST_CASE("phase projection")
{
    cvec unit{std::polar(1.0, 0.3), std::polar(1.0, -2.0), cplx(1.0, 0.0)};
    auto p = project_phases(unit);
    for (std::size_t n = 0; n < unit.size(); ++n)
        CHECK(std::abs(p[n] - unit[n]) < 1e-15);
    auto q = project_phases(cvec{cplx(3.0, 4.0), cplx(0.0, 0.0)});
    CHECK(std::abs(q[0] - cplx(0.6, 0.8)) < 1e-15);
    CHECK(q[1] == cplx(1.0, 0.0));
}

TEST_CASE("amplitude projection examples")
{
    auto [a, b] = project_amplitudes({0.3, 2.0, 1.6}, {0.7, 2.0, -0.2});
    CHECK_THAT(a[0], WithinAbs(0.3, 1e-15));
    CHECK_THAT(b[0], WithinAbs(0.7, 1e-15));
    CHECK(a[1] == 0.5);
    CHECK(b[1] == 0.5);
    CHECK(a[2] == 1.0);
    CHECK(b[2] == 0.0);
}

TEST_CASE("amplitude projection matches a grid search")
{
    Rng rng(1);
    for (int rep = 0; rep < 200; ++rep)
    {
        double t = 4.0 * rng.uniform() - 2.0, r = 4.0 * rng.uniform() - 2.0;
        double best = 0.0, best_d = 1e300;
        for (int i = 0; i <= 100000; ++i)
        {
            double x = i / 100000.0, d = (x - t) * (x - t) + (1.0 - x - r) * (1.0 - x - r);
            if (d < best_d)
            {
                best_d = d;
                best = x;
            }
        }
        auto [a, b] = project_amplitudes({t}, {r});
        CHECK_THAT(a[0], WithinAbs(best, 1e-5));
    }
}

TEST_CASE("projections are idempotent and feasible")
{
    Rng rng(2);
    cvec raw(10000);
    std::vector<double> t(10000), r(10000);
    for (std::size_t n = 0; n < raw.size(); ++n)
    {
        raw[n] = {10.0 * rng.normal(), 10.0 * rng.normal()};
        t[n] = 3.0 * rng.normal();
        r[n] = 3.0 * rng.normal();
    }
    auto p = project_phases(raw);
    auto pp = project_phases(p);
    auto [a, b] = project_amplitudes(t, r);
    auto [aa, bb] = project_amplitudes(a, b);
    for (std::size_t n = 0; n < raw.size(); ++n)
    {
        CHECK_THAT(std::abs(p[n]), WithinAbs(1.0, 1e-15));
        CHECK(std::abs(pp[n] - p[n]) < 1e-15);
        CHECK(a[n] >= 0.0);
        CHECK(b[n] >= 0.0);
        CHECK_THAT(a[n] + b[n], WithinAbs(1.0, 1e-15));
        CHECK_THAT(aa[n], WithinAbs(a[n], 1e-15));
        CHECK_THAT(bb[n], WithinAbs(b[n], 1e-15));
    }
}

TEST_CASE("aligned phases")
{
    auto cfg = baseline_config();
    auto same = cfg;
    same.angles[static_cast<int>(Link::r_u3d)] = same.angle_of(Link::b_r);
    for (double phi : aligned_phases(same, Link::r_u3d))
        CHECK(phi == 0.0);

    for (int N : {10, 16, 64})
    {
        set_elements(cfg, N);
        cfg.angles = default_angles(cfg);
        auto s = suboptimal_phases(cfg, StarRisState::uniform(N, 1.0));
        for (std::size_t n = 0; n < s.size(); ++n)
        {
            CHECK(s.phi_t[n] >= 0.0);
            CHECK(s.phi_t[n] < 2.0 * std::numbers::pi);
            CHECK(s.phi_r[n] >= 0.0);
            CHECK(s.phi_r[n] < 2.0 * std::numbers::pi);
        }
        auto r = s;
        r.rho_t.assign(N, 0.0);
        r.rho_r.assign(N, 1.0);
        CHECK_THAT(los_gain(cfg, r, Link::r_u3d, Side::r, Link::b_r), WithinAbs(double(N) * N, 1e-9));
        CHECK_THAT(los_gain(cfg, s, Link::b_r, Side::t, Link::r_u3u), WithinAbs(double(N) * N, 1e-9));
    }
}

TEST_CASE("PGAM contracts")
{
    auto cfg = baseline_config();
    auto in = make_rate_inputs(cfg, default_power(cfg), suboptimal_phases(cfg));
    const double f0 = weighted_sum_rate(in);

    PgamSettings bad;
    bad.max_iters = 0;
    CHECK_THROWS_AS(pgam_optimize(in, bad), std::invalid_argument);

    PgamSettings one;
    one.max_iters = 1;
    auto r1 = pgam_optimize(in, one);
    CHECK(r1.objective >= f0);
    CHECK_NOTHROW(validate(r1.state));

    auto r = pgam_optimize(in);
    REQUIRE(r.trace.size() >= 2);
    CHECK(r.trace.front() == f0);
    for (std::size_t i = 1; i < r.trace.size(); ++i)
        CHECK(r.trace[i] >= r.trace[i - 1]);
    CHECK(r.objective == r.trace.back());
    auto check = in;
    set_state(check, r.state);
    CHECK_THAT(weighted_sum_rate(check), WithinRel(r.objective, 1e-9));
}

TEST_CASE("PGAM beats random search")
{
    auto cfg = baseline_config();
    auto in = make_rate_inputs(cfg, default_power(cfg), suboptimal_phases(cfg));
    auto r = pgam_optimize(in);
    Rng rng(99);
    double best = 0.0;
    for (int k = 0; k < 100; ++k)
    {
        set_state(in, random_state(cfg.N, rng));
        best = std::max(best, weighted_sum_rate(in));
    }
    CHECK(r.objective >= best);
}

TEST_CASE("minimum power allocation examples")
{
    auto cfg = baseline_config();
    auto s = suboptimal_phases(cfg);
    auto zero = min_power_allocation({0, 0, 0, 0, 0, 0}, cfg, s);
    for (int i = 0; i < 3; ++i)
    {
        CHECK(zero.alpha[i] == 0.0);
        CHECK(zero.p_ul[i] == 0.0);
    }

    auto in = make_rate_inputs(cfg, default_power(cfg), s);
    double G = in.term("l_br") * in.term("omega_3") * in.term("x1_u3d");
    const double t3 = std::log2(1.0 + 0.3 * cfg.P_b * G / cfg.sigma2) / cfg.M_d;
    auto p = min_power_allocation({0, 0, t3, 0, 0, 0}, cfg, s);
    double want = (std::exp2(cfg.M_d * t3) - 1.0) * cfg.sigma2 / (cfg.P_b * G);
    CHECK_THAT(want, WithinRel(0.3, 1e-9));
    CHECK_THAT(p.alpha[2], WithinRel(want, 1e-9));
    CHECK(p.alpha[0] == 0.0);
    CHECK(p.alpha[1] == 0.0);
}

TEST_CASE("minimum power allocation reproduces reachable targets")
{
    auto cfg = baseline_config();
    Rng rng(5);
    auto s = suboptimal_phases(cfg);
    for (int rep = 0; rep < 20; ++rep)
    {
        auto targets = reachable_targets(cfg, s, rng);
        auto p = min_power_allocation(targets, cfg, s);
        auto got = analytic_rates(make_rate_inputs(cfg, p, s));
        for (int k = 0; k < 6; ++k)
            CHECK_THAT(got.rate[k], WithinAbs(targets[k], 1e-6));
        CHECK(p.alpha[0] + p.alpha[1] + p.alpha[2] <= 1.0 + 1e-12);
        for (double v : p.p_ul)
            CHECK(v <= cfg.p_um * (1.0 + 1e-12));
    }
}

TEST_CASE("minimum power allocation names the binding constraint")
{
    auto cfg = baseline_config();
    auto s = suboptimal_phases(cfg);
    // noise-free DL feasibility: Perron root of the SINR-weighted interference matrix below 1
    const double xi = cfg.xi_sic;
    auto perron = [&](double g1, double g2, double g3)
    {
        const double g[3] = {g1, g2, g3};
        const double c[3][3] = {{0.0, xi, xi}, {1.0, 0.0, xi}, {1.0, 1.0, 0.0}};
        double v[3] = {1.0, 1.0, 1.0}, lambda = 0.0;
        for (int it = 0; it < 2000; ++it)
        {
            double w[3] = {}, norm = 0.0;
            for (int i = 0; i < 3; ++i)
            {
                for (int j = 0; j < 3; ++j)
                    w[i] += g[i] * c[i][j] * v[j];
                norm = std::max(norm, w[i]);
            }
            lambda = norm;
            for (int i = 0; i < 3; ++i)
                v[i] = w[i] / norm;
        }
        return lambda;
    };
    const double other = 0.005, g_other = std::exp2(cfg.M_d * other) - 1.0;
    double lo = 0.0, hi = 1e9;
    for (int it = 0; it < 200; ++it)
    {
        double mid = 0.5 * (lo + hi);
        (perron(mid, g_other, g_other) < 1.0 ? lo : hi) = mid;
    }
    const double ceiling = std::log2(1.0 + lo) / cfg.M_d;
    try
    {
        min_power_allocation({ceiling + 0.01, other, other, 0, 0, 0}, cfg, s);
        FAIL("expected infeasible_error");
    }
    catch (const infeasible_error &e)
    {
        CHECK(e.binding() == "dl_sic_ceiling:DL1");
    }

    try
    {
        min_power_allocation({0, 0, 0, 5.0, 0, 0}, cfg, s);
        FAIL("expected infeasible_error");
    }
    catch (const infeasible_error &e)
    {
        CHECK(e.binding() == "ul_power_limit:UL1");
    }

    try
    {
        min_power_allocation({0.5, 0.5, 0.0, 0, 0, 0}, cfg, s);
        FAIL("expected infeasible_error");
    }
    catch (const infeasible_error &e)
    {
        CHECK(e.binding().rfind("dl_", 0) == 0);
    }

    CHECK_THROWS_AS(min_power_allocation({-1, 0, 0, 0, 0, 0}, cfg, s), std::invalid_argument);
}
