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

#include "oracles.hpp"
#include "starris/specfun.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <cmath>
#include <numbers>

using namespace starris;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("gamma known values")
{
    CHECK_THAT(starris::gamma(1.0), WithinRel(1.0, 1e-15));
    CHECK_THAT(starris::gamma(0.5), WithinRel(std::sqrt(std::numbers::pi), 1e-14));
    CHECK_THAT(starris::gamma(0.5), WithinAbs(1.7724538509, 1e-10));
    CHECK_THAT(starris::gamma(5.0), WithinRel(24.0, 1e-14));
    CHECK_THROWS_AS(starris::gamma(0.0), std::domain_error);
    CHECK_THROWS_AS(starris::gamma(-3.0), std::domain_error);
    CHECK(std::isfinite(starris::gamma(-2.5)));
}

TEST_CASE("hyp_pfq elementary cases")
{
    CHECK_THAT(hyp_pfq<double>({1.0}, {1.0}, 0.7), WithinAbs(2.0137527075, 1e-10));
    CHECK_THAT(hyp_pfq<double>({1.0}, {1.0}, 0.7), WithinRel(std::exp(0.7), 1e-13));
    CHECK(hyp_pfq<double>({1.5, 1.85, 1.35}, {0.5, 7.0}, 0.0) == 1.0);
    CHECK(hyp_pfq<double>({}, {}, 0.0) == 1.0);
    // 0F0 is the exponential, 2F1(1,1;2;x) = -log(1-x)/x
    CHECK_THAT(hyp_pfq<double>({}, {}, -1.3), WithinRel(std::exp(-1.3), 1e-13));
    CHECK_THAT(hyp_pfq<double>({1.0, 1.0}, {2.0}, 0.5), WithinRel(-std::log(0.5) / 0.5, 1e-12));
    // terminating series: 2F1(-2, b; c; x) is a quadratic
    double b = 1.5, c = 2.5, x = 3.0;
    double poly = 1.0 - 2.0 * b / c * x + b * (b + 1.0) / (c * (c + 1.0)) * x * x;
    CHECK_THAT(hyp_pfq<double>({-2.0, b}, {c}, x), WithinRel(poly, 1e-14));
}

TEST_CASE("hyp_pfq error paths")
{
    CHECK_THROWS_AS(hyp_pfq<double>({1.0}, {-2.0}, 0.5), std::domain_error);
    CHECK_THROWS_AS(hyp_pfq<double>({1.0, 1.0, 1.0}, {2.0}, 0.1), convergence_error);
    // a terminating upper parameter that reaches zero before the pole keeps the sum finite
    CHECK_NOTHROW(hyp_pfq<double>({-1.0, 1.0}, {-3.0}, 0.5));
    CHECK_THAT(hyp_pfq<double>({-1.0, 1.0}, {-3.0}, 0.5), WithinRel(1.0 + 0.5 / 3.0, 1e-14));
}

TEST_CASE("hyp_pfq outside the unit disk does not converge")
{
    CHECK_THROWS_AS(hyp_pfq<double>({1.5, 1.85, 1.35}, {0.5, 7.0}, 4.0), convergence_error);
    CHECK_THROWS_AS(hyp_pfq<double>({1.5, 1.85, 1.35}, {0.5, 7.0}, -1.5), convergence_error);
}

TEST_CASE("hyp_pfq against the extended-precision oracle")
{
    // frozen reference from an independent arbitrary-precision run
    CHECK_THAT(hyp_pfq<double>({1.5, 1.85, 1.35}, {0.5, 7.0}, 0.4), WithinRel(1.59164123798596593618301168895, 1e-12));
    CHECK_THAT(oracle::hyp_series({1.5, 1.85, 1.35}, {0.5, 7.0}, 0.4),
               WithinRel(1.59164123798596593618301168895, 1e-15));

    struct Case
    {
        std::vector<double> a, b;
    };
    const std::vector<Case> cases = {
        {{1.5, 1.85, 1.35}, {0.5, 7.0}}, {{2.0, 1.35, 1.85}, {1.5, 4.5}}, {{0.5, 0.35, 0.85}, {-0.5, 1.0}},
        {{1.5, 1.85, 1.35}, {0.5, 3.0}}, {{0.75, 2.5}, {1.25}},           {{1.0}, {2.5}},
        {{}, {1.5}}};
    for (const auto &c : cases)
        for (double x : {-0.9, -0.5, -0.1, 0.05, 0.3, 0.6, 0.9})
        {
            CAPTURE(c.a, c.b, x);
            double want = oracle::hyp_series(c.a, c.b, x);
            CHECK_THAT(hyp_pfq<double>(c.a, c.b, x), WithinRel(want, 1e-9));
        }
}

TEST_CASE("Gauss-Legendre small rules")
{
    auto q1 = gauss_legendre(1);
    REQUIRE(q1.nodes.size() == 1);
    CHECK(q1.nodes[0] == 0.0);
    CHECK_THAT(q1.weights[0], WithinAbs(2.0, 1e-15));

    auto q2 = gauss_legendre(2);
    CHECK_THAT(q2.nodes[0], WithinAbs(-1.0 / std::sqrt(3.0), 1e-15));
    CHECK_THAT(q2.nodes[1], WithinAbs(1.0 / std::sqrt(3.0), 1e-15));
    CHECK_THAT(q2.weights[0], WithinAbs(1.0, 1e-15));
    CHECK_THAT(q2.weights[1], WithinAbs(1.0, 1e-15));

    CHECK_THROWS(gauss_legendre(0));
    CHECK_THROWS(gauss_legendre(129));
}

TEST_CASE("Gauss-Legendre exactness up to degree 2C-1")
{
    CHECK_THAT(integrate_gauss_legendre([](double x) { return std::pow(x, 30); }, -1.0, 1.0, 16),
               WithinAbs(2.0 / 31.0, 1e-12));
    for (int C = 1; C <= 40; ++C)
        for (int d = 0; d <= 2 * C - 1; ++d)
        {
            double want = d % 2 ? 0.0 : 2.0 / (d + 1);
            CAPTURE(C, d);
            CHECK_THAT(integrate_gauss_legendre([d](double x) { return std::pow(x, d); }, -1.0, 1.0, C),
                       WithinAbs(want, 1e-12));
        }
    // degree 2C is no longer exact
    CHECK(std::abs(integrate_gauss_legendre([](double x) { return std::pow(x, 8); }, -1.0, 1.0, 4) - 2.0 / 9.0) >
          1e-6);
}

TEST_CASE("Gauss-Legendre nodes agree with Boost tables")
{
    using rule = boost::math::quadrature::gauss<double, 20>;
    auto q = gauss_legendre(20);
    const auto &abs = rule::abscissa();
    const auto &w = rule::weights();
    for (std::size_t i = 0; i < abs.size(); ++i)
    {
        CHECK_THAT(q.nodes[10 + i], WithinAbs(abs[i], 1e-14));
        CHECK_THAT(q.nodes[9 - i], WithinAbs(-abs[i], 1e-14));
        CHECK_THAT(q.weights[10 + i], WithinAbs(w[i], 1e-14));
    }
}

TEST_CASE("adaptive integration")
{
    CHECK_THAT(integrate_adaptive([](double x) { return std::exp(-x); }, 0.0, 5.0),
               WithinRel(1.0 - std::exp(-5.0), 1e-13));
    CHECK(integrate_adaptive([](double) { return 1.0; }, 2.0, 2.0) == 0.0);
}
