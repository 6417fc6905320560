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

#ifndef STARRIS_SPECFUN_HPP
#define STARRIS_SPECFUN_HPP

#include "starris/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace starris
{

inline bool is_nonpositive_integer(double x) { return x <= 0.0 && x == std::floor(x); }

inline double gamma(double x)
{
    if (is_nonpositive_integer(x))
        throw std::domain_error("gamma: pole at x = " + std::to_string(x));
    return std::tgamma(x);
}

struct HypParams
{
    std::vector<double> upper;
    std::vector<double> lower;
    double x = 0.0;
};

struct SeriesControl
{
    double rel_tol = 1e-12;
    int max_terms = 10000;
};

// Generalized hypergeometric series pFq by direct term recurrence
template <typename Real = double>
Real hyp_pfq(const std::vector<Real> &a, const std::vector<Real> &b, Real x, SeriesControl ctl = {})
{
    using std::abs;
    for (std::size_t j = 0; j < b.size(); ++j)
        if (is_nonpositive_integer(static_cast<double>(b[j])))
        {
            // a terminating upper parameter cancels the pole only if it hits zero first
            bool cancels = false;
            for (const Real &ai : a)
                if (is_nonpositive_integer(static_cast<double>(ai)) && ai > b[j])
                    cancels = true;
            if (!cancels)
                throw std::domain_error("hyp_pfq: lower parameter " + std::to_string(j) + " is a pole");
        }

    bool terminates = false;
    for (const Real &ai : a)
        if (is_nonpositive_integer(static_cast<double>(ai)))
            terminates = true;
    if (x == Real(0))
        return Real(1);
    if (!terminates)
    {
        if (a.size() > b.size() + 1)
            throw convergence_error("hyp_pfq: series with p > q + 1 diverges for x != 0");
        if (a.size() == b.size() + 1 && abs(x) > Real(1))
            throw convergence_error("hyp_pfq: |x| > 1 is outside the radius of convergence");
    }

    Real sum = 1, term = 1;
    int small = 0;
    for (int n = 0; n < ctl.max_terms; ++n)
    {
        Real ratio = x / Real(n + 1);
        for (const Real &ai : a)
            ratio *= ai + Real(n);
        for (const Real &bj : b)
            ratio /= bj + Real(n);
        term *= ratio;
        if (term == Real(0))
            return sum;
        sum += term;
        using std::isfinite;
        if (!isfinite(static_cast<double>(sum)))
            throw convergence_error("hyp_pfq: partial sum overflowed");
        if (abs(term) < Real(ctl.rel_tol) * abs(sum))
        {
            if (++small == 3)
                return sum;
        }
        else
            small = 0;
    }
    throw convergence_error("hyp_pfq: no convergence within " + std::to_string(ctl.max_terms) + " terms");
}

inline double hyp_pfq(const HypParams &p, SeriesControl ctl = {}) { return hyp_pfq<double>(p.upper, p.lower, p.x, ctl); }

struct QuadratureRule
{
    std::vector<double> nodes;
    std::vector<double> weights;
};

// C-point Gauss-Legendre rule on [-1, 1], nodes ascending
inline QuadratureRule gauss_legendre(int C)
{
    if (C < 1 || C > 128)
        throw std::invalid_argument("gauss_legendre: C must be in [1, 128]");
    QuadratureRule q;
    q.nodes.assign(C, 0.0);
    q.weights.assign(C, 0.0);
    const int half = (C + 1) / 2;
    for (int i = 0; i < half; ++i)
    {
        long double z = std::cos(std::numbers::pi * (i + 0.75) / (C + 0.5));
        long double dp = 0;
        for (int it = 0; it < 100; ++it)
        {
            long double p0 = 1, p1 = 0;
            for (int k = 1; k <= C; ++k)
            {
                long double p2 = p1;
                p1 = p0;
                p0 = ((2 * k - 1) * z * p1 - (k - 1) * p2) / k;
            }
            dp = C * (z * p0 - p1) / (z * z - 1);
            long double dz = p0 / dp;
            z -= dz;
            if (std::fabs(static_cast<double>(dz)) < 1e-18)
                break;
        }
        // recompute the derivative at the converged node
        long double p0 = 1, p1 = 0;
        for (int k = 1; k <= C; ++k)
        {
            long double p2 = p1;
            p1 = p0;
            p0 = ((2 * k - 1) * z * p1 - (k - 1) * p2) / k;
        }
        dp = C * (z * p0 - p1) / (z * z - 1);
        double w = static_cast<double>(2.0L / ((1 - z * z) * dp * dp));
        q.nodes[i] = -static_cast<double>(z);
        q.nodes[C - 1 - i] = static_cast<double>(z);
        q.weights[i] = q.weights[C - 1 - i] = w;
    }
    if (C % 2 == 1)
        q.nodes[C / 2] = 0.0;
    return q;
}

// Integral of f over [a, b] with a C-point Gauss-Legendre rule
template <typename F>
double integrate_gauss_legendre(F &&f, double a, double b, int C)
{
    auto q = gauss_legendre(C);
    double half = 0.5 * (b - a), mid = 0.5 * (a + b), s = 0.0;
    for (int i = 0; i < C; ++i)
        s += q.weights[i] * f(mid + half * q.nodes[i]);
    return half * s;
}

struct IntegrationControl
{
    double abs_tol = 1e-10;
    double rel_tol = 1e-8; // accepted when either bound holds
    unsigned max_depth = 20;
};

// Adaptive Gauss-Kronrod (61 point); raises if the error estimate exceeds both tolerances
template <typename F>
double integrate_adaptive(F &&f, double a, double b, IntegrationControl ctl = {})
{
    if (a == b)
        return 0.0;
    double err = 0.0;
    double v = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, ctl.max_depth, 1e-14, &err);
    if (!std::isfinite(v) || (err > ctl.abs_tol && err > ctl.rel_tol * std::abs(v)))
        throw convergence_error("integrate_adaptive: error estimate " + std::to_string(err) + " above tolerance");
    return v;
}

} // namespace starris

#endif
