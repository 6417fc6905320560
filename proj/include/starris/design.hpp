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

#ifndef STARRIS_DESIGN_HPP
#define STARRIS_DESIGN_HPP

#include "starris/channel.hpp"
#include "starris/config.hpp"
#include "starris/errors.hpp"
#include "starris/random.hpp"
#include "starris/rates.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

namespace starris
{

// Entrywise projection onto the unit circle; zero maps to phase 0
inline cvec project_phases(const cvec &raw)
{
    cvec out(raw.size());
    for (std::size_t n = 0; n < raw.size(); ++n)
    {
        double a = std::abs(raw[n]);
        out[n] = a > 0.0 ? raw[n] / a : cplx(1.0, 0.0);
    }
    return out;
}

inline std::pair<cvec, cvec> project_phases(const cvec &t, const cvec &r) { return {project_phases(t), project_phases(r)}; }

// Euclidean projection of each (rho_t, rho_r) onto {rho_t + rho_r = 1, rho >= 0}
inline std::pair<std::vector<double>, std::vector<double>> project_amplitudes(const std::vector<double> &t,
                                                                             const std::vector<double> &r)
{
    std::vector<double> pt(t.size()), pr(t.size());
    for (std::size_t n = 0; n < t.size(); ++n)
    {
        pt[n] = std::clamp(0.5 * (t[n] - r[n] + 1.0), 0.0, 1.0);
        pr[n] = 1.0 - pt[n];
    }
    return {pt, pr};
}

// Closed-form alignment of one side toward the surface-user link `toward`
inline std::vector<double> aligned_phases(const SystemConfig &cfg, Link toward)
{
    const auto &b = cfg.angle_of(Link::b_r);
    const auto &u = cfg.angle_of(toward);
    const double ups = std::sin(b.azimuth) * std::sin(b.elevation) - std::sin(u.azimuth) * std::sin(u.elevation);
    const double l = std::cos(b.elevation) - std::cos(u.elevation);
    const double k = 2.0 * std::numbers::pi * cfg.element_spacing / cfg.carrier_wavelength;
    const int W = cfg.array_columns;
    std::vector<double> phi(cfg.N);
    for (int n = 0; n < cfg.N; ++n)
        phi[n] = wrap_phase(-k * ((n % W) * ups + (n / W) * l));
    return phi;
}

// Transmission side aligned to the UL edge user, reflection side to the DL edge user
inline StarRisState suboptimal_phases(const SystemConfig &cfg, const StarRisState &amplitudes)
{
    StarRisState s = amplitudes;
    s.phi_t = aligned_phases(cfg, Link::r_u3u);
    s.phi_r = aligned_phases(cfg, Link::r_u3d);
    return s;
}

inline StarRisState suboptimal_phases(const SystemConfig &cfg)
{
    return suboptimal_phases(cfg, StarRisState::uniform(cfg.N, 0.5));
}

inline StarRisState random_state(std::size_t N, Rng &rng)
{
    StarRisState s;
    s.rho_t.resize(N);
    s.rho_r.resize(N);
    s.phi_t.resize(N);
    s.phi_r.resize(N);
    for (std::size_t n = 0; n < N; ++n)
    {
        s.rho_t[n] = rng.uniform();
        s.rho_r[n] = 1.0 - s.rho_t[n];
        s.phi_t[n] = wrap_phase(2.0 * std::numbers::pi * rng.uniform());
        s.phi_r[n] = wrap_phase(2.0 * std::numbers::pi * rng.uniform());
    }
    return s;
}

struct PgamSettings
{
    int max_iters = 200;
    double tolerance = 1e-9; // stop when an accepted step gains less than this
    double nu = 0.5;         // phase step (max entry change of theta)
    double vartheta = 0.25;  // amplitude step (max entry change of rho)
    double decay = 1.0;      // per-iteration step multiplier
    double fd_step = 1e-6;
    int max_backtracks = 40;
    int restarts = 0; // extra random starts
    std::uint64_t seed = 1;
};

inline void validate(const PgamSettings &s)
{
    if (s.max_iters < 1)
        throw std::invalid_argument("PgamSettings: max_iters must be >= 1");
    if (!(s.tolerance > 0.0) || !(s.nu > 0.0) || !(s.vartheta > 0.0) || !(s.decay > 0.0) || !(s.fd_step > 0.0))
        throw std::invalid_argument("PgamSettings: tolerance, steps and decay must be > 0");
}

struct PgamResult
{
    StarRisState state;
    std::vector<double> trace;
    double objective = 0.0;
};

namespace detail
{
struct SurfaceVars
{
    cvec theta_t, theta_r;
    std::vector<double> rho_t, rho_r;
};

inline SurfaceVars to_vars(const StarRisState &s)
{
    SurfaceVars v{cvec(s.size()), cvec(s.size()), s.rho_t, s.rho_r};
    for (std::size_t n = 0; n < s.size(); ++n)
    {
        v.theta_t[n] = std::polar(1.0, s.phi_t[n]);
        v.theta_r[n] = std::polar(1.0, s.phi_r[n]);
    }
    return v;
}

inline StarRisState to_state(const SurfaceVars &v)
{
    StarRisState s;
    s.rho_t = v.rho_t;
    s.rho_r = v.rho_r;
    s.phi_t.resize(v.rho_t.size());
    s.phi_r.resize(v.rho_t.size());
    for (std::size_t n = 0; n < v.rho_t.size(); ++n)
    {
        s.phi_t[n] = wrap_phase(std::arg(v.theta_t[n]));
        s.phi_r[n] = wrap_phase(std::arg(v.theta_r[n]));
    }
    return s;
}

inline double objective(RateInputs &in, const SurfaceVars &v, const std::array<double, 6> &w)
{
    set_surface(in, surface_side(v.rho_t, v.theta_t), surface_side(v.rho_r, v.theta_r));
    return analytic_rates(in).weighted(w);
}

inline PgamResult pgam_run(RateInputs in, const StarRisState &start, const PgamSettings &st)
{
    const auto w = role_weights(in.cfg);
    SurfaceVars x = to_vars(start);
    const std::size_t N = x.rho_t.size();
    double fx = objective(in, x, w);
    PgamResult res;
    res.trace.push_back(fx);

    double nu = st.nu, vt = st.vartheta;
    for (int it = 0; it < st.max_iters; ++it)
    {
        // central differences on Re/Im of theta and on rho
        cvec gt(N), gr(N);
        std::vector<double> grt(N), grr(N);
        auto diff = [&](double &var)
        {
            const double h = st.fd_step * std::max(1.0, std::abs(var)), keep = var;
            var = keep + h;
            double fp = objective(in, x, w);
            var = keep - h;
            double fm = objective(in, x, w);
            var = keep;
            return (fp - fm) / (2.0 * h);
        };
        for (std::size_t n = 0; n < N; ++n)
        {
            for (auto [th, g] : {std::pair{&x.theta_t, &gt}, std::pair{&x.theta_r, &gr}})
            {
                double *re = reinterpret_cast<double *>(&(*th)[n]);
                double dre = diff(re[0]), dim = diff(re[1]);
                (*g)[n] = {dre, dim};
            }
            grt[n] = diff(x.rho_t[n]);
            grr[n] = diff(x.rho_r[n]);
        }
        double gmax_th = 0.0, gmax_rho = 0.0;
        for (std::size_t n = 0; n < N; ++n)
        {
            gmax_th = std::max({gmax_th, std::abs(gt[n]), std::abs(gr[n])});
            gmax_rho = std::max({gmax_rho, std::abs(grt[n]), std::abs(grr[n])});
        }
        if (gmax_th == 0.0 && gmax_rho == 0.0)
            break;
        const double sth = gmax_th > 0.0 ? nu / gmax_th : 0.0, srho = gmax_rho > 0.0 ? vt / gmax_rho : 0.0;

        bool accepted = false;
        SurfaceVars cand;
        double fc = fx;
        double scale = 1.0;
        for (int bt = 0; bt <= st.max_backtracks; ++bt, scale *= 0.5)
        {
            cvec tt(N), tr(N);
            std::vector<double> rt(N), rr(N);
            for (std::size_t n = 0; n < N; ++n)
            {
                tt[n] = x.theta_t[n] + scale * sth * gt[n];
                tr[n] = x.theta_r[n] + scale * sth * gr[n];
                rt[n] = x.rho_t[n] + scale * srho * grt[n];
                rr[n] = x.rho_r[n] + scale * srho * grr[n];
            }
            auto [pt, pr] = project_phases(tt, tr);
            auto [qt, qr] = project_amplitudes(rt, rr);
            cand = SurfaceVars{std::move(pt), std::move(pr), std::move(qt), std::move(qr)};
            fc = objective(in, cand, w);
            if (fc >= fx)
            {
                accepted = true;
                break;
            }
        }
        if (!accepted)
            break;
        const double gain = fc - fx;
        x = std::move(cand);
        fx = fc;
        res.trace.push_back(fx);
        if (gain < st.tolerance)
            break;
        nu *= st.decay;
        vt *= st.decay;
    }
    res.state = to_state(x);
    res.objective = fx;
    return res;
}
} // namespace detail

// Projected gradient ascent on the weighted sum rate; returns the best state seen
inline PgamResult pgam_optimize(const RateInputs &inputs, const PgamSettings &settings = {})
{
    validate(settings);
    PgamResult best = detail::pgam_run(inputs, inputs.state, settings);
    Rng rng(derive_seed(settings.seed, 0, 7));
    for (int k = 0; k < settings.restarts; ++k)
    {
        auto r = detail::pgam_run(inputs, random_state(inputs.state.size(), rng), settings);
        if (r.objective > best.objective)
            best = std::move(r);
    }
    return best;
}

namespace detail
{
using Mat3 = std::array<std::array<double, 3>, 3>;

// Nonsingular M-matrix test via leading principal minors
inline bool is_m_matrix(const Mat3 &A)
{
    double m1 = A[0][0];
    double m2 = A[0][0] * A[1][1] - A[0][1] * A[1][0];
    double m3 = A[0][0] * (A[1][1] * A[2][2] - A[1][2] * A[2][1]) - A[0][1] * (A[1][0] * A[2][2] - A[1][2] * A[2][0]) +
                A[0][2] * (A[1][0] * A[2][1] - A[1][1] * A[2][0]);
    return m1 > 0.0 && m2 > 0.0 && m3 > 0.0;
}

inline std::array<double, 3> solve3(Mat3 A, std::array<double, 3> b)
{
    for (int c = 0; c < 3; ++c)
    {
        int piv = c;
        for (int r = c + 1; r < 3; ++r)
            if (std::abs(A[r][c]) > std::abs(A[piv][c]))
                piv = r;
        std::swap(A[c], A[piv]);
        std::swap(b[c], b[piv]);
        for (int r = c + 1; r < 3; ++r)
        {
            double f = A[r][c] / A[c][c];
            for (int k = c; k < 3; ++k)
                A[r][k] -= f * A[c][k];
            b[r] -= f * b[c];
        }
    }
    std::array<double, 3> x{};
    for (int r = 2; r >= 0; --r)
    {
        double s = b[r];
        for (int k = r + 1; k < 3; ++k)
            s -= A[r][k] * x[k];
        x[r] = s / A[r][r];
    }
    return x;
}

// SINR coupling matrix: row i reads x_i - gamma_i * sum_j c_ij x_j
inline Mat3 coupling(const std::array<double, 3> &gamma, const Mat3 &c)
{
    Mat3 A{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            A[i][j] = i == j ? 1.0 : -gamma[i] * c[i][j];
    return A;
}

// Index of the target that most exceeds, in rate, its attainable maximum with the others fixed
inline int ceiling_culprit(const std::array<double, 3> &gamma, const Mat3 &c)
{
    int worst = 0;
    double worst_gap = -1.0;
    for (int i = 0; i < 3; ++i)
    {
        if (gamma[i] <= 0.0)
            continue;
        auto g = gamma;
        g[i] = 0.0;
        if (!is_m_matrix(coupling(g, c)))
            continue;
        double lo = 0.0, hi = gamma[i];
        for (int it = 0; it < 200; ++it)
        {
            double mid = 0.5 * (lo + hi);
            g[i] = mid;
            (is_m_matrix(coupling(g, c)) ? lo : hi) = mid;
        }
        double gap = std::log2(1.0 + gamma[i]) - std::log2(1.0 + lo);
        if (gap > worst_gap)
        {
            worst_gap = gap;
            worst = i;
        }
    }
    return worst;
}
} // namespace detail

// Minimum powers meeting six per-role target rates (bits/s/Hz) with equality
inline PowerAllocation min_power_allocation(const std::array<double, 6> &targets, const SystemConfig &cfg,
                                            const StarRisState &state)
{
    for (double t : targets)
        if (!(t >= 0.0) || !std::isfinite(t))
            throw std::invalid_argument("min_power_allocation: targets must be finite and >= 0");
    PowerAllocation seed_power{{0.0, 0.0, 0.0}, {0.0, 0.0, 0.0}};
    RateInputs in = make_rate_inputs(cfg, seed_power, state);
    const double xi = cfg.xi_sic, P = cfg.P_b;

    std::array<double, 3> gd{}, gu{};
    for (int i = 0; i < 3; ++i)
    {
        gd[i] = std::exp2(cfg.M_d * targets[i]) - 1.0;
        gu[i] = std::exp2(cfg.M_u * targets[3 + i]) - 1.0;
    }

    // UL: unknowns are the received powers of UL1, UL2, UL3
    const std::array<double, 3> ul_gain{in.term("chi_u1u"), in.term("chi_u2u"),
                                        in.term("l_br") * in.term("omega_7") * in.term("x1_u3u")};
    const double n0 = P * in.term("y3") + cfg.self_interference() + cfg.sigma2;
    const detail::Mat3 cu{{{0.0, 1.0, 1.0}, {xi, 0.0, 1.0}, {xi, xi, 0.0}}};
    std::array<double, 3> p{};
    for (int i = 0; i < 3; ++i)
        if (gu[i] > 0.0 && ul_gain[i] <= 0.0)
            throw infeasible_error("ul_zero_gain:UL" + std::to_string(i + 1), "role has no channel gain");
    if (gu[0] > 0.0 || gu[1] > 0.0 || gu[2] > 0.0)
    {
        auto A = detail::coupling(gu, cu);
        if (!detail::is_m_matrix(A))
        {
            int i = detail::ceiling_culprit(gu, cu);
            throw infeasible_error("ul_sic_ceiling:UL" + std::to_string(i + 1),
                                   "target exceeds the interference-limited ceiling");
        }
        auto rx = detail::solve3(A, {gu[0] * n0, gu[1] * n0, gu[2] * n0});
        int worst = -1;
        for (int i = 0; i < 3; ++i)
        {
            p[i] = gu[i] > 0.0 ? std::max(0.0, rx[i]) / ul_gain[i] : 0.0;
            if (p[i] > cfg.p_um * (1.0 + 1e-12) && (worst < 0 || p[i] > p[worst]))
                worst = i;
        }
        if (worst >= 0)
            throw infeasible_error("ul_power_limit:UL" + std::to_string(worst + 1),
                                   "required power " + std::to_string(p[worst]) + " W exceeds p_um");
    }

    // DL given the UL interference
    const std::array<double, 3> dl_gain{in.term("x1_u1d"), in.term("x1_u2d"),
                                        in.term("l_br") * in.term("omega_3") * in.term("x1_u3d")};
    const std::array<double, 3> iul{
        (p[0] + p[1]) * in.term("y1_u1d") + p[2] * in.term("omega_1") * in.term("y2_u1d"),
        (p[0] + p[1]) * in.term("y1_u2d") + p[2] * in.term("omega_2") * in.term("y2_u2d"),
        (p[0] * in.term("omega_4") + p[1] * in.term("omega_5")) * in.term("y1_u3d") +
            p[2] * in.term("omega_6") * in.term("y2_u3d")};
    std::array<double, 3> a{};
    if (gd[0] > 0.0 || gd[1] > 0.0 || gd[2] > 0.0)
    {
        for (int i = 0; i < 3; ++i)
            if (gd[i] > 0.0 && !(P * dl_gain[i] > 0.0))
                throw infeasible_error("dl_power_budget", "DL" + std::to_string(i + 1) + " has no received power");
        std::array<double, 3> n{};
        for (int i = 0; i < 3; ++i)
            n[i] = gd[i] > 0.0 ? (iul[i] + cfg.sigma2) / (P * dl_gain[i]) : 0.0;
        const detail::Mat3 cd{{{0.0, xi, xi}, {1.0, 0.0, xi}, {1.0, 1.0, 0.0}}};
        auto A = detail::coupling(gd, cd);
        if (!detail::is_m_matrix(A))
        {
            int i = detail::ceiling_culprit(gd, cd);
            throw infeasible_error("dl_sic_ceiling:DL" + std::to_string(i + 1),
                                   "target exceeds the interference-limited ceiling");
        }
        a = detail::solve3(A, {gd[0] * n[0], gd[1] * n[1], gd[2] * n[2]});
        for (auto &v : a)
            v = std::max(0.0, v);
        double sum = a[0] + a[1] + a[2];
        if (sum > 1.0 + 1e-12)
            throw infeasible_error("dl_power_budget", "coefficients sum to " + std::to_string(sum) + " > 1");
    }

    PowerAllocation out{a, p};
    in.power = out;
    auto got = analytic_rates(in);
    for (int i = 0; i < 6; ++i)
        if (std::abs(got.rate[i] - targets[i]) > 1e-6)
            throw convergence_error("min_power_allocation: residual above 1e-6 for " + std::string(role_names[i]));
    return out;
}

} // namespace starris

#endif
