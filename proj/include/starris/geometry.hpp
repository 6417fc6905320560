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

#ifndef STARRIS_GEOMETRY_HPP
#define STARRIS_GEOMETRY_HPP

#include "starris/config.hpp"
#include "starris/random.hpp"
#include "starris/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace starris
{

struct Point
{
    double x = 0.0, y = 0.0;
    bool operator==(const Point &) const = default;
};

inline double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

// Large-scale attenuation (1 + d)^-m
inline double pathloss(double d, double m) { return std::pow(1.0 + d, -m); }

enum class Direction
{
    DL,
    UL
};

enum class Zone
{
    center,
    edge
};

struct User
{
    int id = 0;
    Direction dir = Direction::DL;
    Zone zone = Zone::center;
    Point pos;
    double d_bs = 0.0;
    double d_surface = 0.0;
};

struct UserLayout
{
    Point bs;
    Point surface;
    std::vector<User> center; // DL users first, then UL
    std::vector<User> edge;   // DL users first, then UL
};

inline Point uniform_in_disk(Point c, double radius, Rng &rng)
{
    double r = radius * std::sqrt(rng.uniform());
    double t = 2.0 * std::numbers::pi * rng.uniform();
    return {c.x + r * std::cos(t), c.y + r * std::sin(t)};
}

inline UserLayout sample_layout(const SystemConfig &cfg, Rng &rng)
{
    UserLayout L;
    L.surface = {cfg.d_br, 0.0};
    int id = 0;
    auto add = [&](std::vector<User> &dst, int count, Direction dir, Zone zone, Point c, double radius)
    {
        for (int i = 0; i < count; ++i)
        {
            User u;
            u.id = id++;
            u.dir = dir;
            u.zone = zone;
            u.pos = uniform_in_disk(c, radius, rng);
            u.d_bs = distance(u.pos, L.bs);
            u.d_surface = distance(u.pos, L.surface);
            dst.push_back(u);
        }
    };
    L.center.reserve(cfg.K_cd + cfg.K_cu);
    L.edge.reserve(cfg.K_ed + cfg.K_eu);
    add(L.center, cfg.K_cd, Direction::DL, Zone::center, L.bs, cfg.R);
    add(L.center, cfg.K_cu, Direction::UL, Zone::center, L.bs, cfg.R);
    add(L.edge, cfg.K_ed, Direction::DL, Zone::edge, L.surface, cfg.R_r);
    add(L.edge, cfg.K_eu, Direction::UL, Zone::edge, L.surface, cfg.R_r);
    return L;
}

struct OrderSpec
{
    int k = 1;
    int K = 1;
    double radius = 1.0;
};

namespace detail
{
inline void check(const OrderSpec &s)
{
    if (s.K < 1 || s.k < 1 || s.k > s.K)
        throw std::invalid_argument("OrderSpec: need 1 <= k <= K");
    if (!(s.radius > 0.0))
        throw std::invalid_argument("OrderSpec: radius must be > 0");
}
} // namespace detail

// Density of the k-th smallest of K i.i.d. radii with density 2r/R^2
inline double ordered_pathloss_density(const OrderSpec &s, double r)
{
    detail::check(s);
    if (r < 0.0 || r > s.radius)
        throw std::out_of_range("ordered_pathloss_density: r outside [0, R]");
    const double R = s.radius, u = (r / R) * (r / R);
    double lc = std::lgamma(s.K + 1.0) - std::lgamma(static_cast<double>(s.k)) - std::lgamma(s.K - s.k + 1.0);
    double v = std::exp(lc) * (2.0 * r / (R * R));
    if (s.k > 1)
        v *= std::pow(u, s.k - 1);
    if (s.K > s.k)
        v *= std::pow(1.0 - u, s.K - s.k);
    return v;
}

// E[(1 + r_(k))^-m] by adaptive integration of the order-statistic density
inline double ordered_pathloss_mean(const OrderSpec &s, double m)
{
    detail::check(s);
    if (m < 0.0)
        throw std::invalid_argument("ordered_pathloss_mean: m must be >= 0");
    if (m == 0.0)
        return 1.0;
    return integrate_adaptive([&](double r) { return pathloss(r, m) * ordered_pathloss_density(s, r); }, 0.0,
                              s.radius);
}

// Hypergeometric closed form of ordered_pathloss_mean; converges only for radius < 1
inline double ordered_pathloss_mean_series(const OrderSpec &s, double m)
{
    detail::check(s);
    const double R = s.radius, k = s.k, K = s.K, x = R * R;
    double even = hyp_pfq<double>({k, m / 2.0, (m + 1.0) / 2.0}, {0.5, K + 1.0}, x);
    double c = std::exp(std::lgamma(k + 0.5) + std::lgamma(K + 1.0) - std::lgamma(k) - std::lgamma(K + 1.5));
    double odd = hyp_pfq<double>({k + 0.5, (m + 1.0) / 2.0, (m + 2.0) / 2.0}, {1.5, K + 1.5}, x);
    return even - m * R * c * odd;
}

// Density of the distance between two independent uniform points in a disk
inline double pair_distance_density(double R, double d)
{
    if (d < 0.0 || d > 2.0 * R)
        return 0.0;
    double t = std::min(1.0, d / (2.0 * R));
    return 4.0 * d / (std::numbers::pi * R * R) * (std::acos(t) - t * std::sqrt(1.0 - t * t));
}

inline double pair_pathloss_mean(double R, double m)
{
    if (!(R > 0.0) || m < 0.0)
        throw std::invalid_argument("pair_pathloss_mean: need R > 0 and m >= 0");
    if (m == 0.0)
        return 1.0;
    return integrate_adaptive([&](double d) { return pathloss(d, m) * pair_distance_density(R, d); }, 0.0,
                              2.0 * R);
}

// Closed form of pair_pathloss_mean; converges for 4R^2 < 1, undefined at m = 1, 2
inline double pair_pathloss_mean_series(double R, double m)
{
    const double x = 4.0 * R * R, q = (2.0 - 3.0 * m + m * m) * R * R, pi = std::numbers::pi;
    double t1 = 2.0 / q;
    double t2 = -2.0 * hyp_pfq<double>({0.5, -1.0 + m / 2.0, -0.5 + m / 2.0}, {-0.5, 1.0}, x) / q;
    double t3 = -hyp_pfq<double>({1.5, 0.5 + m / 2.0, m / 2.0}, {0.5, 3.0}, x);
    double t4 = 64.0 * m * R * hyp_pfq<double>({2.0, 0.5 + m / 2.0, 1.0 + m / 2.0}, {1.5, 3.5}, x) / (15.0 * pi);
    double t5 = -64.0 * m * R * hyp_pfq<double>({2.0, 0.5 + m / 2.0, 1.0 + m / 2.0}, {2.5, 2.5}, x) / (9.0 * pi);
    return t1 + t2 + t3 + t4 + t5;
}

// Density of the distance from an external point at clearance r1 to a uniform point in the disk
inline double outside_point_density(double R, double r1, double r)
{
    if (r < r1 || r > r1 + 2.0 * R)
        return 0.0;
    double D = R + r1;
    double c = (r * r + D * D - R * R) / (2.0 * r * D);
    c = std::clamp(c, -1.0, 1.0);
    return 2.0 * r / (std::numbers::pi * R * R) * std::acos(c);
}

inline void check_outside(double R, double r1, double m)
{
    if (!(R > 0.0))
        throw std::invalid_argument("outside_point_pathloss_mean: R must be > 0");
    if (!(r1 > 0.0))
        throw std::invalid_argument("outside_point_pathloss_mean: clearance r1 must be > 0");
    if (m < 0.0)
        throw std::invalid_argument("outside_point_pathloss_mean: m must be >= 0");
}

// E[(1 + d)^-m] by C-point Gauss-Legendre on [r1, r1 + 2R]
inline double outside_point_pathloss_mean(double R, double r1, double m, int C = 32)
{
    check_outside(R, r1, m);
    if (m == 0.0)
        return 1.0;
    return integrate_gauss_legendre([&](double r) { return pathloss(r, m) * outside_point_density(R, r1, r); }, r1,
                                    r1 + 2.0 * R, C);
}

inline double outside_point_pathloss_mean_adaptive(double R, double r1, double m)
{
    check_outside(R, r1, m);
    if (m == 0.0)
        return 1.0;
    return integrate_adaptive([&](double r) { return pathloss(r, m) * outside_point_density(R, r1, r); }, r1,
                              r1 + 2.0 * R);
}

} // namespace starris

#endif
