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

#ifndef STARRIS_RANDOM_HPP
#define STARRIS_RANDOM_HPP

#include <complex>
#include <cstdint>
#include <numbers>
#include <random>

namespace starris
{

inline std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// Seed of an independent sub-stream identified by (block, stream)
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t block, std::uint64_t stream = 0)
{
    return splitmix64(splitmix64(splitmix64(seed) ^ block) + stream * 0xD1B54A32D192ED03ull);
}

class Rng
{
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform() { return uni_(engine_); }
    double normal() { return norm_(engine_); }

    // Circularly-symmetric CN(0, 1)
    std::complex<double> cn()
    {
        double re = norm_(engine_), im = norm_(engine_);
        return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
    }

    std::mt19937_64 &engine() { return engine_; }

private:
    std::mt19937_64 engine_;
    std::uniform_real_distribution<double> uni_{0.0, 1.0};
    std::normal_distribution<double> norm_{0.0, 1.0};
};

} // namespace starris

#endif
