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

#ifndef STARRIS_CONFIG_HPP
#define STARRIS_CONFIG_HPP

#include "starris/errors.hpp"

#include <json.hpp>

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <string_view>

namespace starris
{

// Surface links: BS-surface and surface-user, one per cluster role
enum class Link : int
{
    b_r = 0,
    r_u1d,
    r_u2d,
    r_u3d,
    r_u1u,
    r_u2u,
    r_u3u
};

inline constexpr std::size_t n_links = 7;

inline constexpr std::array<std::string_view, n_links> link_names = {
    "b_r", "r_u1d", "r_u2d", "r_u3d", "r_u1u", "r_u2u", "r_u3u"};

inline constexpr std::string_view link_name(Link l) { return link_names[static_cast<std::size_t>(l)]; }

struct AnglePair
{
    double azimuth = 0.0;
    double elevation = 0.0;
    bool operator==(const AnglePair &) const = default;
};

struct SystemConfig
{
    // Geometry (m)
    double R = 50.0;
    double R_r = 30.0;
    double d_br = 80.0;
    double surface_height = 10.0;

    // Surface array
    int N = 10;
    int array_columns = 4;
    double carrier_wavelength = 0.1;
    double element_spacing = 0.05;

    // Propagation
    double m = 2.7;
    std::array<double, n_links> kappa{3.0, 3.0, 3.0, 3.0, 3.0, 3.0, 3.0};
    std::array<AnglePair, n_links> angles{};

    // Powers (W)
    double sigma2 = 1.0;
    double P_b = 1000.0;
    double p_um = 100.0;
    std::array<double, 3> alpha{0.1, 0.3, 0.6};
    std::array<double, 3> p_ul_fraction{1.0, 1.0, 1.0};

    // Impairments
    double xi_sic = 0.1;
    double beta_si = 0.001;
    double lambda_si = 0.1;

    // Users
    int K_cd = 6, K_d1 = 3, K_d2 = 3, K_ed = 3;
    int K_cu = 6, K_u1 = 3, K_u2 = 3, K_eu = 3;
    int M_d = 3, M_u = 3;

    // Objective
    std::array<double, 3> weights_dl{1.0, 1.0, 1.0};
    std::array<double, 3> weights_ul{1.0, 1.0, 1.0};
    int cluster = 1;

    bool operator==(const SystemConfig &) const = default;

    double kappa_of(Link l) const { return kappa[static_cast<std::size_t>(l)]; }
    const AnglePair &angle_of(Link l) const { return angles[static_cast<std::size_t>(l)]; }
    double r1() const { return d_br - R; }
    double self_interference() const { return beta_si * std::pow(P_b, lambda_si); }
    double snr_db() const { return 10.0 * std::log10(P_b / sigma2); }
};

// DL coefficients and UL transmit powers of one cluster
struct PowerAllocation
{
    std::array<double, 3> alpha{};
    std::array<double, 3> p_ul{};
    bool operator==(const PowerAllocation &) const = default;
};

inline int default_array_columns(int N)
{
    int w = static_cast<int>(std::lround(std::sqrt(static_cast<double>(N))));
    while (w * w < N)
        ++w;
    while (w > 1 && (w - 1) * (w - 1) >= N)
        --w;
    return w;
}

inline bool is_perfect_square(int N)
{
    if (N < 0)
        return false;
    int w = default_array_columns(N);
    return w * w == N;
}

// Angles seen from the surface centre toward one representative point per link
inline std::array<AnglePair, n_links> default_angles(const SystemConfig &cfg)
{
    const double sx = cfg.d_br, h = cfg.surface_height;
    const double c45 = std::numbers::sqrt2 / 2.0, half = cfg.R_r / 2.0;
    auto toward = [&](double x, double y)
    {
        double dx = x - sx, dy = y;
        double az = std::atan2(dy, dx);
        if (az < 0.0)
            az += 2.0 * std::numbers::pi;
        return AnglePair{az, std::atan2(std::hypot(dx, dy), h)};
    };
    std::array<AnglePair, n_links> a{};
    a[0] = toward(0.0, 0.0);
    a[1] = a[2] = toward(0.0, cfg.R / 2.0);
    a[3] = toward(sx + half * c45, half * c45);
    a[4] = a[5] = toward(0.0, -cfg.R / 2.0);
    a[6] = toward(sx + half * c45, -half * c45);
    return a;
}

inline PowerAllocation default_power(const SystemConfig &cfg)
{
    PowerAllocation p;
    p.alpha = cfg.alpha;
    for (std::size_t i = 0; i < 3; ++i)
        p.p_ul[i] = cfg.p_ul_fraction[i] * cfg.p_um;
    return p;
}

// Sets P_b for the given transmit SNR and keeps the p_um / P_b ratio
inline void set_snr_db(SystemConfig &cfg, double snr_db)
{
    double ratio = cfg.P_b > 0.0 ? cfg.p_um / cfg.P_b : 0.1;
    cfg.P_b = cfg.sigma2 * std::pow(10.0, snr_db / 10.0);
    cfg.p_um = ratio * cfg.P_b;
}

inline void set_elements(SystemConfig &cfg, int N)
{
    cfg.N = N;
    cfg.array_columns = default_array_columns(N);
}

namespace detail
{
inline void require(bool ok, const char *field, const std::string &what)
{
    if (!ok)
        throw config_error(field, what);
}
} // namespace detail

inline void validate(const SystemConfig &c)
{
    using detail::require;
    require(std::isfinite(c.R) && c.R > 0.0, "geometry.R", "must be > 0");
    require(std::isfinite(c.R_r) && c.R_r > 0.0, "geometry.R_r", "must be > 0");
    require(std::isfinite(c.d_br) && c.d_br > c.R, "geometry.d_br", "must exceed geometry.R");
    require(std::isfinite(c.surface_height) && c.surface_height > 0.0, "geometry.surface_height", "must be > 0");
    require(c.N >= 1, "surface.N", "must be >= 1");
    require(c.array_columns >= 1 && c.array_columns <= c.N, "surface.array_columns", "must be in [1, N]");
    require(std::isfinite(c.carrier_wavelength) && c.carrier_wavelength > 0.0, "surface.wavelength", "must be > 0");
    require(std::isfinite(c.element_spacing) && c.element_spacing > 0.0, "surface.spacing", "must be > 0");
    require(std::isfinite(c.m) && c.m >= 0.0, "channel.m", "must be >= 0");
    for (std::size_t i = 0; i < n_links; ++i)
    {
        std::string f = "channel.kappa." + std::string(link_names[i]);
        if (!(c.kappa[i] >= 0.0))
            throw config_error(f, "must be >= 0");
        std::string g = "channel.angles." + std::string(link_names[i]);
        if (!std::isfinite(c.angles[i].azimuth) || !std::isfinite(c.angles[i].elevation))
            throw config_error(g, "must be finite");
    }
    require(std::isfinite(c.sigma2) && c.sigma2 > 0.0, "power.sigma2", "must be > 0");
    require(std::isfinite(c.P_b) && c.P_b >= 0.0, "power.P_b", "must be >= 0");
    require(std::isfinite(c.p_um) && c.p_um >= 0.0, "power.p_um", "must be >= 0");
    require(c.p_um <= c.P_b, "power.p_um", "must not exceed power.P_b");
    require(c.alpha[0] >= 0.0 && c.alpha[0] < c.alpha[1] && c.alpha[1] < c.alpha[2], "power.alpha",
            "must satisfy 0 <= alpha1 < alpha2 < alpha3");
    require(c.alpha[0] + c.alpha[1] + c.alpha[2] <= 1.0 + 1e-12, "power.alpha", "sum must not exceed 1");
    for (double f : c.p_ul_fraction)
        require(f > 0.0 && f <= 1.0, "power.p_ul_fraction", "entries must be in (0, 1]");
    require(c.xi_sic >= 0.0 && c.xi_sic <= 1.0, "impairments.xi", "must be in [0, 1]");
    require(std::isfinite(c.beta_si) && c.beta_si >= 0.0, "impairments.beta", "must be >= 0");
    require(c.lambda_si >= 0.0 && c.lambda_si <= 1.0, "impairments.lambda", "must be in [0, 1]");
    require(c.K_cd >= 0, "users.K_cd", "must be >= 0");
    require(c.K_cu >= 0, "users.K_cu", "must be >= 0");
    require(c.K_ed >= 0, "users.K_ed", "must be >= 0");
    require(c.K_eu >= 0, "users.K_eu", "must be >= 0");
    require(c.K_d1 >= 0 && c.K_d2 >= 0 && c.K_d1 + c.K_d2 == c.K_cd, "users.K_d1", "K_d1 + K_d2 must equal K_cd");
    require(c.K_u1 >= 0 && c.K_u2 >= 0 && c.K_u1 + c.K_u2 == c.K_cu, "users.K_u1", "K_u1 + K_u2 must equal K_cu");
    require(c.M_d >= 1, "users.M_d", "must be >= 1");
    require(c.M_u >= 1, "users.M_u", "must be >= 1");
    for (double w : c.weights_dl)
        require(w >= 0.0, "objective.weights_dl", "must be >= 0");
    for (double w : c.weights_ul)
        require(w >= 0.0, "objective.weights_ul", "must be >= 0");
    require(c.cluster >= 1, "objective.cluster", "must be >= 1");
}

inline void validate(const PowerAllocation &p, const SystemConfig &cfg)
{
    using detail::require;
    require(p.alpha[0] >= 0.0 && p.alpha[0] < p.alpha[1] && p.alpha[1] < p.alpha[2], "power.alpha",
            "must satisfy 0 <= alpha1 < alpha2 < alpha3");
    require(p.alpha[0] + p.alpha[1] + p.alpha[2] <= 1.0 + 1e-12, "power.alpha", "sum must not exceed 1");
    for (double v : p.p_ul)
        require(v > 0.0 && v <= cfg.p_um * (1.0 + 1e-12), "power.p_ul", "entries must be in (0, p_um]");
}

// Counts that give M identical three-member clusters in both directions
inline void require_uniform_clusters(const SystemConfig &c)
{
    using detail::require;
    require(c.K_d1 == c.M_d && c.K_d2 == c.M_d && c.K_ed == c.M_d, "users.M_d",
            "K_d1, K_d2 and K_ed must all equal M_d (three-member DL clusters)");
    require(c.K_u1 == c.M_u && c.K_u2 == c.M_u && c.K_eu == c.M_u, "users.M_u",
            "K_u1, K_u2 and K_eu must all equal M_u (three-member UL clusters)");
    require(c.cluster <= c.M_d && c.cluster <= c.M_u, "objective.cluster", "must not exceed M_d or M_u");
}

namespace detail
{
using nlohmann::json;

inline const json *find(const json &doc, std::string_view section, std::string_view key)
{
    auto s = doc.find(std::string(section));
    if (s == doc.end() || !s->is_object())
        return nullptr;
    auto k = s->find(std::string(key));
    return k == s->end() ? nullptr : &*k;
}

inline double as_number(const json &v, const std::string &field)
{
    if (v.is_number())
        return v.get<double>();
    if (v.is_string())
    {
        auto s = v.get<std::string>();
        if (s == "inf" || s == "Infinity")
            return std::numeric_limits<double>::infinity();
    }
    throw config_error(field, "expected a number");
}

inline int as_count(const json &v, const std::string &field)
{
    if (!v.is_number_integer())
        throw config_error(field, "expected an integer");
    return v.get<int>();
}

template <typename T, typename Conv>
void read(const json &doc, std::string_view section, std::string_view key, T &out, bool required, Conv conv)
{
    std::string field = std::string(section) + "." + std::string(key);
    const json *v = find(doc, section, key);
    if (!v)
    {
        if (required)
            throw config_error(field, "required field missing");
        return;
    }
    out = conv(*v, field);
}

inline void read_number(const json &d, std::string_view s, std::string_view k, double &out, bool req = false)
{
    read(d, s, k, out, req, as_number);
}

inline void read_count(const json &d, std::string_view s, std::string_view k, int &out, bool req = false)
{
    read(d, s, k, out, req, as_count);
}

inline void read_triple(const json &d, std::string_view s, std::string_view k, std::array<double, 3> &out)
{
    read(d, s, k, out, false, [](const json &v, const std::string &field)
         {
             if (!v.is_array() || v.size() != 3)
                 throw config_error(field, "expected an array of 3 numbers");
             std::array<double, 3> a{};
             for (std::size_t i = 0; i < 3; ++i)
                 a[i] = as_number(v[i], field);
             return a; });
}

inline json number_out(double v)
{
    if (std::isinf(v))
        return "inf";
    return v;
}
} // namespace detail

// Parses a JSON document; missing optional fields keep the baseline defaults
inline SystemConfig load_config(std::string_view text)
{
    using namespace detail;
    json doc;
    try
    {
        doc = json::parse(text.begin(), text.end());
    }
    catch (const json::parse_error &e)
    {
        throw config_error("document", std::string("parse failure: ") + e.what());
    }
    if (!doc.is_object())
        throw config_error("document", "top level must be an object");

    SystemConfig c;
    read_number(doc, "geometry", "R", c.R, true);
    read_number(doc, "geometry", "R_r", c.R_r, true);
    c.d_br = c.R + c.R_r;
    read_number(doc, "geometry", "d_br", c.d_br);
    read_number(doc, "geometry", "surface_height", c.surface_height);

    read_count(doc, "surface", "N", c.N, true);
    c.array_columns = default_array_columns(c.N);
    read_count(doc, "surface", "array_columns", c.array_columns);
    read_number(doc, "surface", "wavelength", c.carrier_wavelength);
    read_number(doc, "surface", "spacing", c.element_spacing);

    read_number(doc, "channel", "m", c.m, true);
    if (const json *k = find(doc, "channel", "kappa"))
    {
        if (k->is_object())
        {
            for (auto it = k->begin(); it != k->end(); ++it)
            {
                std::size_t i = 0;
                while (i < n_links && link_names[i] != it.key())
                    ++i;
                if (i == n_links)
                    throw config_error("channel.kappa." + it.key(), "unknown link label");
                c.kappa[i] = as_number(*it, "channel.kappa." + it.key());
            }
        }
        else
        {
            double v = as_number(*k, "channel.kappa");
            c.kappa.fill(v);
        }
    }

    const json *snr = find(doc, "power", "snr_db");
    if (snr)
    {
        read_number(doc, "power", "sigma2", c.sigma2);
        c.P_b = c.sigma2 * std::pow(10.0, as_number(*snr, "power.snr_db") / 10.0);
    }
    else
    {
        read_number(doc, "power", "sigma2", c.sigma2);
        read_number(doc, "power", "P_b", c.P_b, true);
    }
    c.p_um = 0.1 * c.P_b;
    read_number(doc, "power", "p_um", c.p_um);
    read_triple(doc, "power", "alpha", c.alpha);
    read_triple(doc, "power", "p_ul_fraction", c.p_ul_fraction);

    read_number(doc, "impairments", "xi", c.xi_sic);
    read_number(doc, "impairments", "beta", c.beta_si);
    read_number(doc, "impairments", "lambda", c.lambda_si);

    read_count(doc, "users", "K_cd", c.K_cd, true);
    read_count(doc, "users", "K_ed", c.K_ed, true);
    read_count(doc, "users", "K_cu", c.K_cu, true);
    read_count(doc, "users", "K_eu", c.K_eu, true);
    c.K_d1 = c.K_cd / 2;
    c.K_u1 = c.K_cu / 2;
    read_count(doc, "users", "K_d1", c.K_d1);
    read_count(doc, "users", "K_u1", c.K_u1);
    c.K_d2 = c.K_cd - c.K_d1;
    c.K_u2 = c.K_cu - c.K_u1;
    read_count(doc, "users", "K_d2", c.K_d2);
    read_count(doc, "users", "K_u2", c.K_u2);
    c.M_d = std::max(1, c.K_ed);
    c.M_u = std::max(1, c.K_eu);
    read_count(doc, "users", "M_d", c.M_d);
    read_count(doc, "users", "M_u", c.M_u);

    read_triple(doc, "objective", "weights_dl", c.weights_dl);
    read_triple(doc, "objective", "weights_ul", c.weights_ul);
    read_count(doc, "objective", "cluster", c.cluster);

    validate(c);

    c.angles = default_angles(c);
    if (const json *a = find(doc, "channel", "angles"))
    {
        if (!a->is_object())
            throw config_error("channel.angles", "expected an object");
        for (auto it = a->begin(); it != a->end(); ++it)
        {
            std::size_t i = 0;
            while (i < n_links && link_names[i] != it.key())
                ++i;
            std::string field = "channel.angles." + it.key();
            if (i == n_links)
                throw config_error(field, "unknown link label");
            if (!it->is_object() || !it->contains("azimuth") || !it->contains("elevation"))
                throw config_error(field, "expected {azimuth, elevation}");
            c.angles[i].azimuth = as_number(it->at("azimuth"), field + ".azimuth");
            c.angles[i].elevation = as_number(it->at("elevation"), field + ".elevation");
        }
    }
    validate(c);
    return c;
}

inline nlohmann::json to_json(const SystemConfig &c)
{
    using detail::number_out;
    nlohmann::json j;
    j["geometry"] = {{"R", c.R}, {"R_r", c.R_r}, {"d_br", c.d_br}, {"surface_height", c.surface_height}};
    j["surface"] = {{"N", c.N},
                    {"array_columns", c.array_columns},
                    {"wavelength", c.carrier_wavelength},
                    {"spacing", c.element_spacing}};
    nlohmann::json kappa, angles;
    for (std::size_t i = 0; i < n_links; ++i)
    {
        std::string k(link_names[i]);
        kappa[k] = number_out(c.kappa[i]);
        angles[k] = {{"azimuth", c.angles[i].azimuth}, {"elevation", c.angles[i].elevation}};
    }
    j["channel"] = {{"m", c.m}, {"kappa", kappa}, {"angles", angles}};
    j["power"] = {{"sigma2", c.sigma2},
                  {"P_b", c.P_b},
                  {"p_um", c.p_um},
                  {"alpha", c.alpha},
                  {"p_ul_fraction", c.p_ul_fraction}};
    j["impairments"] = {{"xi", c.xi_sic}, {"beta", c.beta_si}, {"lambda", c.lambda_si}};
    j["users"] = {{"K_cd", c.K_cd}, {"K_d1", c.K_d1}, {"K_d2", c.K_d2}, {"K_ed", c.K_ed},
                  {"K_cu", c.K_cu}, {"K_u1", c.K_u1}, {"K_u2", c.K_u2}, {"K_eu", c.K_eu},
                  {"M_d", c.M_d}, {"M_u", c.M_u}};
    j["objective"] = {{"weights_dl", c.weights_dl}, {"weights_ul", c.weights_ul}, {"cluster", c.cluster}};
    return j;
}

inline std::string dump_config(const SystemConfig &c) { return to_json(c).dump(2) + "\n"; }

// Baseline deployment: R=50, R_r=30, N=10, m=2.7, all Rician factors 3, 30 dB
inline SystemConfig baseline_config()
{
    SystemConfig c;
    c.d_br = c.R + c.R_r;
    c.array_columns = default_array_columns(c.N);
    c.angles = default_angles(c);
    return c;
}

} // namespace starris

#endif
