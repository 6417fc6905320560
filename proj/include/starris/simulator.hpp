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

#ifndef STARRIS_SIMULATOR_HPP
#define STARRIS_SIMULATOR_HPP

#include "starris/channel.hpp"
#include "starris/clustering.hpp"
#include "starris/config.hpp"
#include "starris/geometry.hpp"
#include "starris/random.hpp"
#include "starris/rates.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

namespace starris
{

struct Estimate
{
    double mean = 0.0;
    double std_error = 0.0;
};

struct BlockControl
{
    long long trials = 10000;
    std::uint64_t seed = 1;
    int block_size = 1024;
    unsigned threads = 1;
};

// Runs fn(block_index, n, out_sums, out_squares) over fixed-size blocks and reduces in block order
template <typename BlockFn>
std::vector<Estimate> run_blocks(const BlockControl &ctl, std::size_t n_out, BlockFn &&fn)
{
    if (ctl.trials < 1)
        throw std::invalid_argument("trials must be >= 1");
    const long long bs = std::max(1, ctl.block_size);
    const long long n_blocks = (ctl.trials + bs - 1) / bs;
    std::vector<std::vector<double>> sum(n_blocks, std::vector<double>(n_out)), sq = sum;
    auto work = [&](unsigned tid, unsigned nt)
    {
        for (long long b = tid; b < n_blocks; b += nt)
        {
            long long n = std::min(bs, ctl.trials - b * bs);
            fn(static_cast<std::uint64_t>(b), n, sum[b], sq[b]);
        }
    };
    const unsigned nt = std::max(1u, std::min<unsigned>(ctl.threads, static_cast<unsigned>(n_blocks)));
    if (nt == 1)
        work(0, 1);
    else
    {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < nt; ++t)
            pool.emplace_back(work, t, nt);
        for (auto &t : pool)
            t.join();
    }
    std::vector<Estimate> out(n_out);
    const double n = static_cast<double>(ctl.trials);
    for (std::size_t k = 0; k < n_out; ++k)
    {
        double s = 0.0, q = 0.0;
        for (long long b = 0; b < n_blocks; ++b)
        {
            s += sum[b][k];
            q += sq[b][k];
        }
        double mean = s / n;
        double var = n > 1 ? std::max(0.0, (q - n * mean * mean) / (n - 1.0)) : 0.0;
        out[k] = {mean, std::sqrt(var / n)};
    }
    return out;
}

// Per-trial channel state shared by every NOMA group of that trial
class TrialChannels
{
public:
    TrialChannels(const SystemConfig &cfg, const std::array<RicianLink, n_links> &links, const SurfaceSide &t,
                  const SurfaceSide &r, const UserLayout &layout, Rng &rng)
        : cfg_(cfg), links_(links), t_(t), r_(r), layout_(layout), rng_(rng)
    {
        sample_rician(links_[0], rng_, g_br_);
        cplx z = rng_.cn();
        double self = 0.0;
        cplx acc = 0.0;
        for (std::size_t n = 0; n < g_br_.size(); ++n)
            acc += t_.c[n] * std::norm(g_br_[n]);
        self = std::norm(acc);
        l_br_ = pathloss(cfg.d_br, cfg.m);
        ul_noise_ = cfg.P_b * l_br_ * l_br_ * self + cfg.self_interference() * std::norm(z) + cfg.sigma2;
    }

    double ul_noise() const { return ul_noise_; }

    // Received power gain at the BS (UL) or at the user (DL), per unit transmit power
    double dl_gain(const User &u, Link l)
    {
        if (u.zone == Zone::center)
            return pathloss(u.d_bs, cfg_.m) * std::norm(direct(u));
        return l_br_ * pathloss(u.d_surface, cfg_.m) * std::norm(cascade(surface(u, l), r_.c, g_br_));
    }

    double ul_gain(const User &u, Link l)
    {
        if (u.zone == Zone::center)
            return pathloss(u.d_bs, cfg_.m) * std::norm(direct(u));
        return l_br_ * pathloss(u.d_surface, cfg_.m) * std::norm(cascade(g_br_, t_.c, surface(u, l)));
    }

    // Interference gain from UL user v at DL user u
    double cross_gain(const User &u, Link lu, const User &v, Link lv)
    {
        if (u.zone == Zone::center && v.zone == Zone::center)
            return pathloss(distance(u.pos, v.pos), cfg_.m) * std::norm(rng_.cn());
        const auto &c = u.zone == Zone::center ? t_.c : r_.c;
        return pathloss(u.d_surface, cfg_.m) * pathloss(v.d_surface, cfg_.m) *
               std::norm(cascade(surface(u, lu), c, surface(v, lv)));
    }

private:
    const cplx &direct(const User &u)
    {
        auto it = h_.find(u.id);
        if (it == h_.end())
            it = h_.emplace(u.id, rng_.cn()).first;
        return it->second;
    }

    const cvec &surface(const User &u, Link l)
    {
        auto it = g_.find(u.id);
        if (it == g_.end())
        {
            cvec g;
            sample_rician(links_[static_cast<std::size_t>(l)], rng_, g);
            it = g_.emplace(u.id, std::move(g)).first;
        }
        return it->second;
    }

    const SystemConfig &cfg_;
    const std::array<RicianLink, n_links> &links_;
    const SurfaceSide &t_, &r_;
    const UserLayout &layout_;
    Rng &rng_;
    cvec g_br_;
    double l_br_ = 0.0, ul_noise_ = 0.0;
    std::unordered_map<int, cplx> h_;
    std::unordered_map<int, cvec> g_;
};

struct RealMember
{
    const User *user = nullptr;
    Link link = Link::r_u1d;
};

using RealGroup = std::vector<RealMember>;

// Exact instantaneous SINRs of one DL group under UL interference, decoding order nearest first
inline void group_sinr(const SystemConfig &cfg, TrialChannels &ch, const RealGroup &dl, const std::vector<double> &alpha,
                       const RealGroup &ul, const std::vector<double> &p, std::vector<double> &dl_sinr,
                       std::vector<double> &ul_sinr)
{
    dl_sinr.assign(dl.size(), 0.0);
    ul_sinr.assign(ul.size(), 0.0);
    std::vector<double> rx(ul.size());
    for (std::size_t i = 0; i < ul.size(); ++i)
        rx[i] = p[i] * ch.ul_gain(*ul[i].user, ul[i].link);
    for (std::size_t i = 0; i < dl.size(); ++i)
    {
        double g = ch.dl_gain(*dl[i].user, dl[i].link), own = 0.0;
        for (std::size_t j = 0; j < dl.size(); ++j)
            if (j < i)
                own += alpha[j];
            else if (j > i)
                own += cfg.xi_sic * alpha[j];
        double iul = 0.0;
        for (std::size_t v = 0; v < ul.size(); ++v)
            iul += p[v] * ch.cross_gain(*dl[i].user, dl[i].link, *ul[v].user, ul[v].link);
        dl_sinr[i] = alpha[i] * cfg.P_b * g / (cfg.P_b * g * own + iul + cfg.sigma2);
    }
    for (std::size_t i = 0; i < ul.size(); ++i)
    {
        double interf = 0.0;
        for (std::size_t j = 0; j < ul.size(); ++j)
            if (j < i)
                interf += cfg.xi_sic * rx[j];
            else if (j > i)
                interf += rx[j];
        ul_sinr[i] = rx[i] / (interf + ch.ul_noise());
    }
}

inline const User &find_user(const UserLayout &L, int id)
{
    for (const auto &u : L.center)
        if (u.id == id)
            return u;
    for (const auto &u : L.edge)
        if (u.id == id)
            return u;
    throw std::out_of_range("find_user: no such id");
}

// Concrete users of a plan's groups; centre links follow the G1/G2 role, edge links the direction
inline std::vector<RealGroup> realize(const UserLayout &L, const ClusterPlan &plan)
{
    const bool dl = plan.mode == Direction::DL;
    std::vector<RealGroup> out;
    for (const auto &c : plan.clusters)
    {
        RealGroup g;
        for (const auto &m : c.members)
        {
            Link l = m.role == GroupRole::G1 ? (dl ? Link::r_u1d : Link::r_u1u)
                     : m.role == GroupRole::G2 ? (dl ? Link::r_u2d : Link::r_u2u)
                                               : (dl ? Link::r_u3d : Link::r_u3u);
            g.push_back({&find_user(L, m.user_id), l});
        }
        out.push_back(std::move(g));
    }
    return out;
}

struct SimPlan
{
    SystemConfig cfg;
    PowerAllocation power;
    StarRisState state;
    long long trials = 10000;
    std::uint64_t seed = 1;
    bool fixed_layout = false;
    unsigned threads = 1;
};

namespace detail
{
// Layout for block b: a fresh layout stream per block unless the layout is pinned
struct LayoutSource
{
    const SystemConfig &cfg;
    std::uint64_t seed;
    bool fixed;
    UserLayout pinned;

    LayoutSource(const SystemConfig &c, std::uint64_t s, bool f) : cfg(c), seed(s), fixed(f)
    {
        if (fixed)
        {
            Rng r(derive_seed(seed, ~0ull, 0));
            pinned = sample_layout(cfg, r);
        }
    }
};
} // namespace detail

// Monte-Carlo ergodic rates of the six roles of the configured cluster
inline RateReport simulate(const SimPlan &plan)
{
    const auto &cfg = plan.cfg;
    validate(cfg);
    validate(plan.state);
    if (plan.state.size() != static_cast<std::size_t>(cfg.N))
        throw std::invalid_argument("simulate: state size differs from N");
    const int j = cfg.cluster;
    std::array<RicianLink, n_links> links;
    for (std::size_t i = 0; i < n_links; ++i)
        links[i] = make_link(cfg, static_cast<Link>(i));
    const SurfaceSide st = surface_side(plan.state, Side::t), sr = surface_side(plan.state, Side::r);
    const std::vector<double> alpha(plan.power.alpha.begin(), plan.power.alpha.end());
    const std::vector<double> p(plan.power.p_ul.begin(), plan.power.p_ul.end());
    detail::LayoutSource src(cfg, plan.seed, plan.fixed_layout);

    BlockControl ctl{plan.trials, plan.seed, 1024, plan.threads};
    auto est = run_blocks(ctl, 6, [&](std::uint64_t b, long long n, std::vector<double> &sum, std::vector<double> &sq)
                          {
        Rng lay(derive_seed(plan.seed, b, 0)), chan(derive_seed(plan.seed, b, 1));
        std::vector<double> sd, su;
        for (long long t = 0; t < n; ++t)
        {
            UserLayout L = src.fixed ? src.pinned : sample_layout(cfg, lay);
            auto dl = realize(L, cluster_users(L, cfg, Direction::DL));
            auto ul = realize(L, cluster_users(L, cfg, Direction::UL));
            if (static_cast<int>(dl.size()) < j || static_cast<int>(ul.size()) < j)
                throw std::invalid_argument("simulate: configured cluster does not exist");
            TrialChannels ch(cfg, links, st, sr, L, chan);
            group_sinr(cfg, ch, dl[j - 1], alpha, ul[j - 1], p, sd, su);
            for (int k = 0; k < 3; ++k)
            {
                double rd = rate_of_sinr(sd.at(k), cfg.M_d), ru = rate_of_sinr(su.at(k), cfg.M_u);
                sum[k] += rd;
                sq[k] += rd * rd;
                sum[3 + k] += ru;
                sq[3 + k] += ru * ru;
            }
        } });
    RateReport r;
    r.method = Method::simulated;
    r.trials = plan.trials;
    for (int k = 0; k < 6; ++k)
    {
        r.rate[k] = est[k].mean;
        r.std_error[k] = est[k].std_error;
    }
    return r;
}

inline const std::vector<std::string> &expectation_keys()
{
    static const std::vector<std::string> keys = {
        "x1_u1d", "y1_u1d", "y2_u1d", "x1_u2d", "y1_u2d", "y2_u2d", "x1_u3d", "y1_u3d", "y2_u3d",
        "x1_u3u", "chi_u1u", "chi_u2u", "omega_1", "omega_2", "omega_3", "omega_4", "omega_5", "omega_6",
        "omega_7", "self_reflection", "y3"};
    return keys;
}

namespace detail
{
inline double sample_order(int k, int K, double radius, double m, Rng &rng, std::vector<double> &buf)
{
    buf.resize(K);
    for (auto &r : buf)
        r = radius * std::sqrt(rng.uniform());
    std::nth_element(buf.begin(), buf.begin() + (k - 1), buf.end());
    return pathloss(buf[k - 1], m);
}

inline double sample_pair(double R, double m, Rng &rng)
{
    Point a = uniform_in_disk({0.0, 0.0}, R, rng), b = uniform_in_disk({0.0, 0.0}, R, rng);
    return pathloss(distance(a, b), m);
}

inline double sample_outside(double R, double d_br, double m, Rng &rng)
{
    Point a = uniform_in_disk({0.0, 0.0}, R, rng);
    return pathloss(distance(a, {d_br, 0.0}), m);
}
} // namespace detail

// Monte-Carlo estimate of the random quantity behind one closed-form term (cluster cfg.cluster)
inline Estimate estimate_expectation(const std::string &key, const SystemConfig &cfg, const StarRisState &state,
                                     long long trials, std::uint64_t seed)
{
    const auto &keys = expectation_keys();
    if (std::find(keys.begin(), keys.end(), key) == keys.end())
        throw std::invalid_argument("estimate_expectation: unknown key " + key);
    validate(cfg);
    const int j = cfg.cluster;
    const double m = cfg.m, R = cfg.R, Rr = cfg.R_r;
    std::array<RicianLink, n_links> links;
    for (std::size_t i = 0; i < n_links; ++i)
        links[i] = make_link(cfg, static_cast<Link>(i));
    const SurfaceSide st = surface_side(state, Side::t), sr = surface_side(state, Side::r);
    const double l_br = pathloss(cfg.d_br, m);

    struct OmegaSpec
    {
        Link out;
        Side side;
        Link in;
    };
    static const std::map<std::string, OmegaSpec> omegas = {
        {"omega_1", {Link::r_u1d, Side::t, Link::r_u3u}}, {"omega_2", {Link::r_u2d, Side::t, Link::r_u3u}},
        {"omega_3", {Link::r_u3d, Side::r, Link::b_r}},   {"omega_4", {Link::r_u3d, Side::r, Link::r_u1u}},
        {"omega_5", {Link::r_u3d, Side::r, Link::r_u2u}}, {"omega_6", {Link::r_u3d, Side::r, Link::r_u3u}},
        {"omega_7", {Link::b_r, Side::t, Link::r_u3u}}};

    std::function<double(Rng &, std::vector<double> &)> draw;
    auto x_ed = [&](Rng &g, std::vector<double> &b) { return detail::sample_order(cfg.K_ed + 1 - j, cfg.K_ed, Rr, m, g, b); };
    auto x_eu = [&](Rng &g, std::vector<double> &b) { return detail::sample_order(j, cfg.K_eu, Rr, m, g, b); };
    if (key == "x1_u1d")
        draw = [&](Rng &g, std::vector<double> &b) { return detail::sample_order(j, cfg.K_cd, R, m, g, b); };
    else if (key == "x1_u2d")
        draw = [&](Rng &g, std::vector<double> &b) { return detail::sample_order(cfg.K_d1 + j, cfg.K_cd, R, m, g, b); };
    else if (key == "chi_u1u")
        draw = [&](Rng &g, std::vector<double> &b) { return detail::sample_order(j, cfg.K_cu, R, m, g, b); };
    else if (key == "chi_u2u")
        draw = [&](Rng &g, std::vector<double> &b) { return detail::sample_order(cfg.K_u1 + j, cfg.K_cu, R, m, g, b); };
    else if (key == "x1_u3d")
        draw = x_ed;
    else if (key == "x1_u3u")
        draw = x_eu;
    else if (key == "y1_u1d" || key == "y1_u2d")
        draw = [&](Rng &g, std::vector<double> &) { return detail::sample_pair(R, m, g); };
    else if (key == "y2_u1d" || key == "y2_u2d")
        draw = [&](Rng &g, std::vector<double> &b) { return x_eu(g, b) * detail::sample_outside(R, cfg.d_br, m, g); };
    else if (key == "y1_u3d")
        draw = [&](Rng &g, std::vector<double> &b) { return x_ed(g, b) * detail::sample_outside(R, cfg.d_br, m, g); };
    else if (key == "y2_u3d")
        draw = [&](Rng &g, std::vector<double> &b) { return x_ed(g, b) * x_eu(g, b); };
    else if (auto it = omegas.find(key); it != omegas.end())
    {
        const OmegaSpec o = it->second;
        draw = [&, o](Rng &g, std::vector<double> &)
        {
            cvec a, c;
            sample_rician(links[static_cast<std::size_t>(o.out)], g, a);
            sample_rician(links[static_cast<std::size_t>(o.in)], g, c);
            return std::norm(cascade(a, (o.side == Side::t ? st : sr).c, c));
        };
    }
    else
    {
        const double scale = key == "y3" ? l_br * l_br : 1.0;
        draw = [&, scale](Rng &g, std::vector<double> &)
        {
            cvec a;
            sample_rician(links[0], g, a);
            cplx s = 0.0;
            for (std::size_t n = 0; n < a.size(); ++n)
                s += std::conj(a[n]) * st.c[n] * a[n];
            return scale * std::norm(s);
        };
    }

    BlockControl ctl{trials, seed, 4096, 1};
    auto est = run_blocks(ctl, 1, [&](std::uint64_t b, long long n, std::vector<double> &sum, std::vector<double> &sq)
                          {
        Rng g(derive_seed(seed, b, 2));
        std::vector<double> buf;
        for (long long t = 0; t < n; ++t)
        {
            double v = draw(g, buf);
            sum[0] += v;
            sq[0] += v * v;
        } });
    return est[0];
}

} // namespace starris

#endif
