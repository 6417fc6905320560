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

#ifndef STARRIS_CLUSTERING_HPP
#define STARRIS_CLUSTERING_HPP

#include "starris/config.hpp"
#include "starris/geometry.hpp"

#include <algorithm>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace starris
{

enum class GroupRole
{
    G1,
    G2,
    G3
};

inline std::string_view role_tag(GroupRole r)
{
    switch (r)
    {
    case GroupRole::G1:
        return "G1";
    case GroupRole::G2:
        return "G2";
    default:
        return "G3";
    }
}

struct ClusterMember
{
    int user_id = 0;
    GroupRole role = GroupRole::G1;
    double distance = 0.0; // to the BS
};

struct Cluster
{
    std::vector<ClusterMember> members; // ordered nearest to farthest from the BS
};

struct ClusterPlan
{
    Direction mode = Direction::DL;
    std::vector<Cluster> clusters;
    std::size_t M() const { return clusters.size(); }
};

namespace detail
{
inline std::vector<const User *> select_sorted(const std::vector<User> &src, Direction mode)
{
    std::vector<const User *> out;
    for (const auto &u : src)
        if (u.dir == mode)
            out.push_back(&u);
    std::sort(out.begin(), out.end(), [](const User *a, const User *b)
              { return a->d_bs != b->d_bs ? a->d_bs < b->d_bs : a->id < b->id; });
    return out;
}

inline void sort_members(Cluster &c)
{
    std::sort(c.members.begin(), c.members.end(), [](const ClusterMember &a, const ClusterMember &b)
              { return a.distance != b.distance ? a.distance < b.distance : a.user_id < b.user_id; });
}
} // namespace detail

// Near-far clustering: G1 and G2 split the sorted centre users, G3 holds the edge users
inline ClusterPlan cluster_users(const UserLayout &layout, const SystemConfig &cfg, Direction mode)
{
    auto centre = detail::select_sorted(layout.center, mode);
    auto edge = detail::select_sorted(layout.edge, mode);
    const std::size_t k1 = static_cast<std::size_t>(mode == Direction::DL ? cfg.K_d1 : cfg.K_u1);
    if (k1 > centre.size())
        throw std::invalid_argument("cluster_users: G1 size exceeds the number of centre users");
    std::vector<const User *> g1(centre.begin(), centre.begin() + k1), g2(centre.begin() + k1, centre.end());
    if (g1.empty() || g2.empty() || edge.empty())
        throw std::invalid_argument("cluster_users: empty group");
    // DL pairs the strongest centre users with the weakest edge users
    if (mode == Direction::DL)
        std::reverse(edge.begin(), edge.end());

    const std::size_t M = std::min({g1.size(), g2.size(), edge.size()});
    ClusterPlan plan;
    plan.mode = mode;
    plan.clusters.resize(M);
    auto place = [&](const std::vector<const User *> &g, GroupRole role)
    {
        for (std::size_t i = 0; i < g.size(); ++i)
            plan.clusters[std::min(i, M - 1)].members.push_back({g[i]->id, role, g[i]->d_bs});
    };
    place(g1, GroupRole::G1);
    place(g2, GroupRole::G2);
    place(edge, GroupRole::G3);
    for (auto &c : plan.clusters)
        detail::sort_members(c);
    return plan;
}

// Baseline pairing: j-th nearest with j-th farthest; an odd count leaves the median user alone
inline ClusterPlan pair_users(const UserLayout &layout, const SystemConfig &cfg, Direction mode)
{
    auto all = detail::select_sorted(layout.center, mode);
    const std::size_t k1 = static_cast<std::size_t>(mode == Direction::DL ? cfg.K_d1 : cfg.K_u1);
    std::vector<int> g1;
    for (std::size_t i = 0; i < all.size() && i < k1; ++i)
        g1.push_back(all[i]->id);
    auto edge = detail::select_sorted(layout.edge, mode);
    all.insert(all.end(), edge.begin(), edge.end());
    std::sort(all.begin(), all.end(), [](const User *a, const User *b)
              { return a->d_bs != b->d_bs ? a->d_bs < b->d_bs : a->id < b->id; });
    if (all.size() < 2)
        throw std::invalid_argument("pair_users: fewer than 2 users");

    auto role_of = [&](const User *u)
    {
        if (u->zone == Zone::edge)
            return GroupRole::G3;
        return std::find(g1.begin(), g1.end(), u->id) != g1.end() ? GroupRole::G1 : GroupRole::G2;
    };
    ClusterPlan plan;
    plan.mode = mode;
    const std::size_t n = all.size();
    for (std::size_t j = 0; j < n / 2; ++j)
    {
        Cluster c;
        c.members.push_back({all[j]->id, role_of(all[j]), all[j]->d_bs});
        c.members.push_back({all[n - 1 - j]->id, role_of(all[n - 1 - j]), all[n - 1 - j]->d_bs});
        plan.clusters.push_back(c);
    }
    if (n % 2 == 1)
    {
        const User *u = all[n / 2];
        plan.clusters.push_back(Cluster{{{u->id, role_of(u), u->d_bs}}});
    }
    return plan;
}

} // namespace starris

#endif
