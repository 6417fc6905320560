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

#ifndef STARRIS_CHANNEL_HPP
#define STARRIS_CHANNEL_HPP

#include "starris/config.hpp"
#include "starris/random.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace starris
{

using cplx = std::complex<double>;
using cvec = std::vector<cplx>;

enum class Side
{
    t, // transmission
    r  // reflection
};

inline double wrap_phase(double phi)
{
    double w = std::fmod(phi, 2.0 * std::numbers::pi);
    if (w < 0.0)
        w += 2.0 * std::numbers::pi;
    if (w >= 2.0 * std::numbers::pi)
        w = 0.0;
    return w;
}

// Energy-splitting surface: per element rho_t + rho_r = 1
struct StarRisState
{
    std::vector<double> rho_t, rho_r, phi_t, phi_r;

    std::size_t size() const { return rho_t.size(); }

    const std::vector<double> &rho(Side s) const { return s == Side::t ? rho_t : rho_r; }
    const std::vector<double> &phi(Side s) const { return s == Side::t ? phi_t : phi_r; }

    static StarRisState uniform(std::size_t N, double rho_t = 0.5)
    {
        StarRisState s;
        s.rho_t.assign(N, rho_t);
        s.rho_r.assign(N, 1.0 - rho_t);
        s.phi_t.assign(N, 0.0);
        s.phi_r.assign(N, 0.0);
        return s;
    }
};

inline void validate(const StarRisState &s)
{
    const std::size_t N = s.rho_t.size();
    if (s.rho_r.size() != N || s.phi_t.size() != N || s.phi_r.size() != N)
        throw std::invalid_argument("StarRisState: sequence lengths differ");
    for (std::size_t n = 0; n < N; ++n)
    {
        if (s.rho_t[n] < 0.0 || s.rho_r[n] < 0.0 || std::abs(s.rho_t[n] + s.rho_r[n] - 1.0) > 1e-12)
            throw std::invalid_argument("StarRisState: element " + std::to_string(n) +
                                        " violates rho_t + rho_r = 1, rho >= 0");
        for (double p : {s.phi_t[n], s.phi_r[n]})
            if (!(p >= 0.0 && p < 2.0 * std::numbers::pi))
                throw std::invalid_argument("StarRisState: element " + std::to_string(n) +
                                            " phase outside [0, 2pi)");
    }
}

// Diagonal of Theta for one side, plus sum of squared amplitudes
struct SurfaceSide
{
    cvec c;
    double rho_sq = 0.0;
};

inline SurfaceSide surface_side(const StarRisState &s, Side side)
{
    const auto &rho = s.rho(side);
    const auto &phi = s.phi(side);
    SurfaceSide out;
    out.c.resize(rho.size());
    for (std::size_t n = 0; n < rho.size(); ++n)
    {
        out.c[n] = std::polar(rho[n], phi[n]);
        out.rho_sq += rho[n] * rho[n];
    }
    return out;
}

// Same from amplitudes and arbitrary complex phase factors theta
inline SurfaceSide surface_side(const std::vector<double> &rho, const cvec &theta)
{
    SurfaceSide out;
    out.c.resize(rho.size());
    for (std::size_t n = 0; n < rho.size(); ++n)
    {
        out.c[n] = rho[n] * theta[n];
        out.rho_sq += rho[n] * rho[n];
    }
    return out;
}

// Planar array response with W columns; element n sits at column n mod W, row n / W
inline cvec steering_vector(int N, int W, double azimuth, double elevation, double spacing, double wavelength)
{
    if (N < 1 || W < 1)
        throw std::invalid_argument("steering_vector: N and W must be >= 1");
    if (!(wavelength > 0.0))
        throw std::invalid_argument("steering_vector: wavelength must be > 0");
    const double k = 2.0 * std::numbers::pi * spacing / wavelength;
    const double u = std::sin(azimuth) * std::sin(elevation), v = std::cos(elevation);
    cvec a(N);
    for (int n = 0; n < N; ++n)
        a[n] = std::polar(1.0, k * ((n % W) * u + (n / W) * v));
    return a;
}

inline cvec steering_vector(int N, double azimuth, double elevation, double spacing, double wavelength)
{
    if (!is_perfect_square(N))
        throw std::invalid_argument("steering_vector: N = " + std::to_string(N) + " is not a perfect square");
    return steering_vector(N, default_array_columns(N), azimuth, elevation, spacing, wavelength);
}

struct RicianLink
{
    Link label = Link::b_r;
    double kappa = 0.0;
    cvec los;
};

// LoS of the BS-surface link is the arrival response, surface-user links use the conjugate response
inline RicianLink make_link(const SystemConfig &cfg, Link l)
{
    RicianLink out;
    out.label = l;
    out.kappa = cfg.kappa_of(l);
    const auto &a = cfg.angle_of(l);
    out.los = steering_vector(cfg.N, cfg.array_columns, a.azimuth, a.elevation, cfg.element_spacing,
                              cfg.carrier_wavelength);
    if (l != Link::b_r)
        for (auto &x : out.los)
            x = std::conj(x);
    return out;
}

inline double los_weight(double kappa) { return std::isinf(kappa) ? 1.0 : kappa / (kappa + 1.0); }
inline double scatter_weight(double kappa) { return std::isinf(kappa) ? 0.0 : 1.0 / (kappa + 1.0); }

inline void sample_rician(const RicianLink &link, Rng &rng, cvec &out)
{
    const double a = std::sqrt(los_weight(link.kappa)), b = std::sqrt(scatter_weight(link.kappa));
    out.resize(link.los.size());
    for (std::size_t n = 0; n < out.size(); ++n)
    {
        cplx w = rng.cn();
        out[n] = a * link.los[n] + b * w;
    }
}

inline cvec sample_rician(const RicianLink &link, Rng &rng)
{
    cvec g;
    sample_rician(link, rng, g);
    return g;
}

inline cplx cascade(const cvec &g_out, const cvec &c, const cvec &g_in)
{
    if (g_out.size() != c.size() || g_in.size() != c.size())
        throw std::invalid_argument("cascade: length mismatch");
    cplx s = 0.0;
    for (std::size_t n = 0; n < c.size(); ++n)
        s += g_out[n] * c[n] * g_in[n];
    return s;
}

inline cplx cascade(const cvec &g_out, const StarRisState &s, Side side, const cvec &g_in)
{
    return cascade(g_out, surface_side(s, side).c, g_in);
}

// E|g_out Theta g_in|^2 for independent Rician links
inline double cascaded_power_mean(const RicianLink &out, const SurfaceSide &sd, const RicianLink &in)
{
    const double wo = los_weight(out.kappa), wi = los_weight(in.kappa);
    const double so = scatter_weight(out.kappa), si = scatter_weight(in.kappa);
    double xi = std::norm(cascade(out.los, sd.c, in.los));
    return wo * wi * xi + (wo * si + so * wi + so * si) * sd.rho_sq;
}

inline double cascaded_power_mean(const RicianLink &out, const StarRisState &s, Side side, const RicianLink &in)
{
    return cascaded_power_mean(out, surface_side(s, side), in);
}

// E|g^H Theta g|^2 with the same Rician vector on both sides
inline double self_reflection_power_mean(const RicianLink &link, const SurfaceSide &sd)
{
    const double a = los_weight(link.kappa), b = scatter_weight(link.kappa);
    cplx zeta = 0.0, sum_c = 0.0;
    for (std::size_t n = 0; n < sd.c.size(); ++n)
    {
        zeta += std::conj(link.los[n]) * sd.c[n] * link.los[n];
        sum_c += sd.c[n];
    }
    double off_diag = std::norm(sum_c);
    for (const auto &c : sd.c)
        off_diag -= std::norm(c);
    return a * a * std::norm(zeta) + 2.0 * a * b * sd.rho_sq + b * b * (2.0 * sd.rho_sq + off_diag) +
           2.0 * a * b * std::real(zeta * std::conj(sum_c));
}

inline double self_reflection_power_mean(const RicianLink &link, const StarRisState &s, Side side)
{
    return self_reflection_power_mean(link, surface_side(s, side));
}

} // namespace starris

#endif
