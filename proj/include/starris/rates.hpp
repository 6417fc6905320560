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

#ifndef STARRIS_RATES_HPP
#define STARRIS_RATES_HPP

#include "starris/channel.hpp"
#include "starris/clustering.hpp"
#include "starris/config.hpp"
#include "starris/geometry.hpp"

#include <array>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace starris
{

enum class Role : int
{
    DL1 = 0,
    DL2,
    DL3,
    UL1,
    UL2,
    UL3
};

inline constexpr std::array<std::string_view, 6> role_names = {"DL1", "DL2", "DL3", "UL1", "UL2", "UL3"};
inline constexpr std::array<Role, 6> all_roles = {Role::DL1, Role::DL2, Role::DL3, Role::UL1, Role::UL2, Role::UL3};

enum class Method
{
    analytic,
    simulated
};

struct RateReport
{
    std::array<double, 6> rate{};
    std::array<double, 6> std_error{};
    Method method = Method::analytic;
    long long trials = 0;

    double operator[](Role r) const { return rate[static_cast<int>(r)]; }
    double dl_sum() const { return rate[0] + rate[1] + rate[2]; }
    double ul_sum() const { return rate[3] + rate[4] + rate[5]; }
    double weighted(const std::array<double, 6> &w) const
    {
        double s = 0.0;
        for (int i = 0; i < 6; ++i)
            s += w[i] * rate[i];
        return s;
    }
};

inline std::array<double, 6> role_weights(const SystemConfig &cfg)
{
    return {cfg.weights_dl[0], cfg.weights_dl[1], cfg.weights_dl[2],
            cfg.weights_ul[0], cfg.weights_ul[1], cfg.weights_ul[2]};
}

// Statistical identity of a group member: zone, order index (1-based) and surface link
struct GroupMember
{
    Zone zone = Zone::center;
    int order = 1;
    Link link = Link::r_u1d;
};

using Group = std::vector<GroupMember>; // decoding order, nearest to the BS first

// Role members of cluster j (1-based); edge users take the BS-distance rank as their surface order
inline Group dl_cluster_group(const SystemConfig &cfg, int j)
{
    return {{Zone::center, j, Link::r_u1d}, {Zone::center, cfg.K_d1 + j, Link::r_u2d},
            {Zone::edge, cfg.K_ed + 1 - j, Link::r_u3d}};
}

inline Group ul_cluster_group(const SystemConfig &cfg, int j)
{
    return {{Zone::center, j, Link::r_u1u}, {Zone::center, cfg.K_u1 + j, Link::r_u2u},
            {Zone::edge, j, Link::r_u3u}};
}

inline std::vector<Group> cluster_groups(const SystemConfig &cfg, Direction mode)
{
    require_uniform_clusters(cfg);
    std::vector<Group> g;
    const int M = mode == Direction::DL ? cfg.M_d : cfg.M_u;
    for (int j = 1; j <= M; ++j)
        g.push_back(mode == Direction::DL ? dl_cluster_group(cfg, j) : ul_cluster_group(cfg, j));
    return g;
}

// Pairing of the BS-distance ranking; centre users precede edge users in that ranking
inline std::vector<Group> pair_groups(const SystemConfig &cfg, Direction mode)
{
    const bool dl = mode == Direction::DL;
    const int Kc = dl ? cfg.K_cd : cfg.K_cu, Ke = dl ? cfg.K_ed : cfg.K_eu, K1 = dl ? cfg.K_d1 : cfg.K_u1;
    const int n = Kc + Ke;
    if (n < 2)
        throw std::invalid_argument("pair_groups: fewer than 2 users");
    auto member = [&](int i)
    {
        if (i < Kc)
            return GroupMember{Zone::center, i + 1,
                               i < K1 ? (dl ? Link::r_u1d : Link::r_u1u) : (dl ? Link::r_u2d : Link::r_u2u)};
        return GroupMember{Zone::edge, i - Kc + 1, dl ? Link::r_u3d : Link::r_u3u};
    };
    std::vector<Group> g;
    for (int j = 0; j < n / 2; ++j)
        g.push_back({member(j), member(n - 1 - j)});
    if (n % 2 == 1)
        g.push_back({member(n / 2)});
    return g;
}

// State-independent expectation terms
struct GeometryTerms
{
    double l_br = 0.0;
    std::vector<double> x_cd, x_cu, x_ed, x_eu; // E[(1 + r_(k))^-m], index k - 1
    double y_pair = 0.0;                        // centre-centre user distance
    double y_out = 0.0;                         // surface to a centre user
};

inline std::vector<double> ordered_means(int K, double radius, double m)
{
    std::vector<double> x(K);
    for (int k = 1; k <= K; ++k)
        x[k - 1] = ordered_pathloss_mean({k, K, radius}, m);
    return x;
}

inline GeometryTerms geometry_terms(const SystemConfig &cfg)
{
    GeometryTerms g;
    g.l_br = pathloss(cfg.d_br, cfg.m);
    g.x_cd = ordered_means(cfg.K_cd, cfg.R, cfg.m);
    g.x_cu = ordered_means(cfg.K_cu, cfg.R, cfg.m);
    g.x_ed = ordered_means(cfg.K_ed, cfg.R_r, cfg.m);
    g.x_eu = ordered_means(cfg.K_eu, cfg.R_r, cfg.m);
    g.y_pair = pair_pathloss_mean(cfg.R, cfg.m);
    g.y_out = outside_point_pathloss_mean(cfg.R, cfg.r1(), cfg.m);
    return g;
}

// State-dependent terms: LoS of every link and both surface sides
struct ChannelTerms
{
    std::array<RicianLink, n_links> links;
    SurfaceSide t, r;

    const RicianLink &link(Link l) const { return links[static_cast<std::size_t>(l)]; }
    const SurfaceSide &side(Side s) const { return s == Side::t ? t : r; }

    double omega(Link out, Side s, Link in) const { return cascaded_power_mean(link(out), side(s), link(in)); }
    double self_reflection() const { return self_reflection_power_mean(link(Link::b_r), t); }
};

inline ChannelTerms channel_terms(const SystemConfig &cfg, const SurfaceSide &t, const SurfaceSide &r)
{
    ChannelTerms c;
    for (std::size_t i = 0; i < n_links; ++i)
        c.links[i] = make_link(cfg, static_cast<Link>(i));
    c.t = t;
    c.r = r;
    return c;
}

inline ChannelTerms channel_terms(const SystemConfig &cfg, const StarRisState &s)
{
    if (s.size() != static_cast<std::size_t>(cfg.N))
        throw std::invalid_argument("channel_terms: state size differs from N");
    return channel_terms(cfg, surface_side(s, Side::t), surface_side(s, Side::r));
}

// Jensen-approximated SINR model for arbitrary NOMA groups
struct AnalyticModel
{
    const SystemConfig *cfg = nullptr;
    const GeometryTerms *geo = nullptr;
    const ChannelTerms *ch = nullptr;

    double x_of(Direction d, const GroupMember &u) const
    {
        const auto &v = u.zone == Zone::center ? (d == Direction::DL ? geo->x_cd : geo->x_cu)
                                               : (d == Direction::DL ? geo->x_ed : geo->x_eu);
        if (u.order < 1 || u.order > static_cast<int>(v.size()))
            throw std::out_of_range("AnalyticModel: order index out of range");
        return v[u.order - 1];
    }

    // Mean received power per unit transmit power
    double dl_gain(const GroupMember &u) const
    {
        if (u.zone == Zone::center)
            return x_of(Direction::DL, u);
        return geo->l_br * ch->omega(u.link, Side::r, Link::b_r) * x_of(Direction::DL, u);
    }

    double ul_gain(const GroupMember &u) const
    {
        if (u.zone == Zone::center)
            return x_of(Direction::UL, u);
        return geo->l_br * ch->omega(Link::b_r, Side::t, u.link) * x_of(Direction::UL, u);
    }

    // Mean user-to-user interference gain from UL member v at DL member u
    double cross_gain(const GroupMember &u, const GroupMember &v) const
    {
        if (u.zone == Zone::center && v.zone == Zone::center)
            return geo->y_pair;
        if (u.zone == Zone::center)
            return ch->omega(u.link, Side::t, v.link) * geo->y_out * x_of(Direction::UL, v);
        if (v.zone == Zone::center)
            return ch->omega(u.link, Side::r, v.link) * x_of(Direction::DL, u) * geo->y_out;
        return ch->omega(u.link, Side::r, v.link) * x_of(Direction::DL, u) * x_of(Direction::UL, v);
    }

    double y3() const { return geo->l_br * geo->l_br * ch->self_reflection(); }

    double ul_noise() const { return cfg->P_b * y3() + cfg->self_interference() + cfg->sigma2; }

    std::vector<double> dl_sinr(const Group &dl, const std::vector<double> &alpha, const Group &ul,
                                const std::vector<double> &p) const
    {
        std::vector<double> s(dl.size());
        for (std::size_t i = 0; i < dl.size(); ++i)
        {
            double g = dl_gain(dl[i]), own = 0.0;
            for (std::size_t j = 0; j < dl.size(); ++j)
                if (j < i)
                    own += alpha[j];
                else if (j > i)
                    own += cfg->xi_sic * alpha[j];
            double iul = 0.0;
            for (std::size_t v = 0; v < ul.size(); ++v)
                iul += p[v] * cross_gain(dl[i], ul[v]);
            s[i] = alpha[i] * cfg->P_b * g / (cfg->P_b * g * own + iul + cfg->sigma2);
        }
        return s;
    }

    std::vector<double> ul_sinr(const Group &ul, const std::vector<double> &p) const
    {
        std::vector<double> rx(ul.size()), s(ul.size());
        for (std::size_t i = 0; i < ul.size(); ++i)
            rx[i] = p[i] * ul_gain(ul[i]);
        const double n0 = ul_noise();
        for (std::size_t i = 0; i < ul.size(); ++i)
        {
            double interf = 0.0;
            for (std::size_t j = 0; j < ul.size(); ++j)
                if (j < i)
                    interf += cfg->xi_sic * rx[j];
                else if (j > i)
                    interf += rx[j];
            s[i] = rx[i] / (interf + n0);
        }
        return s;
    }
};

inline double rate_of_sinr(double sinr, int M) { return std::log2(1.0 + sinr) / M; }

struct RateInputs
{
    SystemConfig cfg;
    PowerAllocation power;
    StarRisState state;
    int cluster = 1;
    GeometryTerms geo;
    ChannelTerms ch;
    std::map<std::string, double> terms;

    AnalyticModel model() const { return {&cfg, &geo, &ch}; }
    double term(const std::string &key) const
    {
        auto it = terms.find(key);
        if (it == terms.end())
            throw std::out_of_range("RateInputs: unknown term " + key);
        return it->second;
    }
};

// Fills the keyed symbols of the six closed-form rates for cluster j
inline void refresh_terms(RateInputs &in)
{
    const auto &cfg = in.cfg;
    const auto &g = in.geo;
    const auto &c = in.ch;
    const int j = in.cluster;
    const double x_u3d = g.x_ed.at(cfg.K_ed - j), x_u3u = g.x_eu.at(j - 1);
    auto &t = in.terms;
    t["l_br"] = g.l_br;
    t["x1_u1d"] = g.x_cd.at(j - 1);
    t["x1_u2d"] = g.x_cd.at(cfg.K_d1 + j - 1);
    t["x1_u3d"] = x_u3d;
    t["x1_u3u"] = x_u3u;
    t["chi_u1u"] = g.x_cu.at(j - 1);
    t["chi_u2u"] = g.x_cu.at(cfg.K_u1 + j - 1);
    t["y1_u1d"] = g.y_pair;
    t["y2_u1d"] = x_u3u * g.y_out;
    t["y1_u2d"] = g.y_pair;
    t["y2_u2d"] = x_u3u * g.y_out;
    t["y1_u3d"] = x_u3d * g.y_out;
    t["y2_u3d"] = x_u3d * x_u3u;
    t["omega_1"] = c.omega(Link::r_u1d, Side::t, Link::r_u3u);
    t["omega_2"] = c.omega(Link::r_u2d, Side::t, Link::r_u3u);
    t["omega_3"] = c.omega(Link::r_u3d, Side::r, Link::b_r);
    t["omega_4"] = c.omega(Link::r_u3d, Side::r, Link::r_u1u);
    t["omega_5"] = c.omega(Link::r_u3d, Side::r, Link::r_u2u);
    t["omega_6"] = c.omega(Link::r_u3d, Side::r, Link::r_u3u);
    t["omega_7"] = c.omega(Link::b_r, Side::t, Link::r_u3u);
    t["self_reflection"] = c.self_reflection();
    t["y3"] = g.l_br * g.l_br * t["self_reflection"];
}

inline void set_surface(RateInputs &in, const SurfaceSide &t, const SurfaceSide &r)
{
    in.ch.t = t;
    in.ch.r = r;
    refresh_terms(in);
}

inline void set_state(RateInputs &in, const StarRisState &s)
{
    validate(s);
    in.state = s;
    set_surface(in, surface_side(s, Side::t), surface_side(s, Side::r));
}

inline RateInputs make_rate_inputs(const SystemConfig &cfg, const PowerAllocation &power, const StarRisState &state,
                                   const GeometryTerms *geo = nullptr)
{
    validate(cfg);
    validate(state);
    if (cfg.cluster > cfg.M_d || cfg.cluster > cfg.M_u || cfg.cluster > cfg.K_d1 || cfg.cluster > cfg.K_u1 ||
        cfg.cluster > cfg.K_ed || cfg.cluster > cfg.K_eu || cfg.K_d1 + cfg.cluster > cfg.K_cd ||
        cfg.K_u1 + cfg.cluster > cfg.K_cu)
        throw config_error("objective.cluster", "no such cluster for the configured user counts");
    RateInputs in;
    in.cfg = cfg;
    in.power = power;
    in.state = state;
    in.cluster = cfg.cluster;
    in.geo = geo ? *geo : geometry_terms(cfg);
    in.ch = channel_terms(cfg, state);
    refresh_terms(in);
    return in;
}

inline double dl_rate_strong(const RateInputs &in)
{
    const auto &c = in.cfg;
    const auto &a = in.power.alpha;
    const auto &p = in.power.p_ul;
    const double x = in.term("x1_u1d"), P = c.P_b;
    double den = c.xi_sic * P * (a[1] + a[2]) * x + (p[0] + p[1]) * in.term("y1_u1d") +
                 p[2] * in.term("omega_1") * in.term("y2_u1d") + c.sigma2;
    return rate_of_sinr(a[0] * P * x / den, c.M_d);
}

inline double dl_rate_mid(const RateInputs &in)
{
    const auto &c = in.cfg;
    const auto &a = in.power.alpha;
    const auto &p = in.power.p_ul;
    const double x = in.term("x1_u2d"), P = c.P_b;
    double den = P * x * (c.xi_sic * a[2] + a[0]) + (p[0] + p[1]) * in.term("y1_u2d") +
                 p[2] * in.term("omega_2") * in.term("y2_u2d") + c.sigma2;
    return rate_of_sinr(a[1] * P * x / den, c.M_d);
}

inline double dl_rate_edge(const RateInputs &in)
{
    const auto &c = in.cfg;
    const auto &a = in.power.alpha;
    const auto &p = in.power.p_ul;
    const double G = in.term("l_br") * in.term("omega_3") * in.term("x1_u3d"), P = c.P_b;
    double b1 = p[0] * in.term("omega_4") + p[1] * in.term("omega_5");
    double b2 = p[2] * in.term("omega_6");
    double den = (a[0] + a[1]) * P * G + b1 * in.term("y1_u3d") + b2 * in.term("y2_u3d") + c.sigma2;
    return rate_of_sinr(a[2] * P * G / den, c.M_d);
}

namespace detail
{
struct UlTerms
{
    double s1, s2, s3, n0;
};

inline UlTerms ul_terms(const RateInputs &in)
{
    const auto &c = in.cfg;
    const auto &p = in.power.p_ul;
    return {p[0] * in.term("chi_u1u"), p[1] * in.term("chi_u2u"),
            p[2] * in.term("l_br") * in.term("omega_7") * in.term("x1_u3u"),
            c.P_b * in.term("y3") + c.self_interference() + c.sigma2};
}
} // namespace detail

inline double ul_rate_strong(const RateInputs &in)
{
    auto u = detail::ul_terms(in);
    return rate_of_sinr(u.s1 / (u.s2 + u.s3 + u.n0), in.cfg.M_u);
}

inline double ul_rate_mid(const RateInputs &in)
{
    auto u = detail::ul_terms(in);
    return rate_of_sinr(u.s2 / (in.cfg.xi_sic * u.s1 + u.s3 + u.n0), in.cfg.M_u);
}

inline double ul_rate_edge(const RateInputs &in)
{
    auto u = detail::ul_terms(in);
    return rate_of_sinr(u.s3 / (in.cfg.xi_sic * (u.s1 + u.s2) + u.n0), in.cfg.M_u);
}

inline RateReport analytic_rates(const RateInputs &in)
{
    RateReport r;
    r.method = Method::analytic;
    r.rate = {dl_rate_strong(in), dl_rate_mid(in), dl_rate_edge(in),
              ul_rate_strong(in), ul_rate_mid(in), ul_rate_edge(in)};
    return r;
}

inline double weighted_sum_rate(const RateInputs &in, const std::array<double, 6> &weights)
{
    for (double w : weights)
        if (w < 0.0)
            throw std::invalid_argument("weighted_sum_rate: weights must be >= 0");
    return analytic_rates(in).weighted(weights);
}

inline double weighted_sum_rate(const RateInputs &in) { return weighted_sum_rate(in, role_weights(in.cfg)); }

} // namespace starris

#endif
