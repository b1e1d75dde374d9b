// SPDX-License-Identifier: Apache-2.0
//
// holo - holographic MIMO channel synthesis and capacity evaluation
// Copyright (C) 2026 The holo authors
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

#ifndef HOLO_PHILOX_HPP
#define HOLO_PHILOX_HPP

// Philox4x32-10 counter-based generator (Salmon et al., SC'11). Stateless: every
// output block is a pure function of (counter, key), so draws can be addressed
// directly instead of consumed in sequence.

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>

namespace holo
{
    using PhiloxCounter = std::array<std::uint32_t, 4>;
    using PhiloxKey = std::array<std::uint32_t, 2>;

    inline PhiloxCounter philox4x32(PhiloxCounter ctr, PhiloxKey key)
    {
        constexpr std::uint32_t M0 = 0xD2511F53u, M1 = 0xCD9E8D57u;
        constexpr std::uint32_t W0 = 0x9E3779B9u, W1 = 0xBB67AE85u;
        for (int round = 0; round < 10; ++round)
        {
            const std::uint64_t p0 = std::uint64_t(M0) * ctr[0];
            const std::uint64_t p1 = std::uint64_t(M1) * ctr[2];
            ctr = {std::uint32_t(p1 >> 32) ^ ctr[1] ^ key[0], std::uint32_t(p1),
                   std::uint32_t(p0 >> 32) ^ ctr[3] ^ key[1], std::uint32_t(p0)};
            key[0] += W0;
            key[1] += W1;
        }
        return ctr;
    }

    inline PhiloxKey philox_key(std::uint64_t seed)
    {
        return {std::uint32_t(seed), std::uint32_t(seed >> 32)};
    }

    // splitmix64 finaliser; used to derive child seeds.
    inline std::uint64_t mix_seed(std::uint64_t x)
    {
        x += 0x9E3779B97F4A7C15ull;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
        return x ^ (x >> 31);
    }

    // Domain tags keep streams of different consumers disjoint under the same seed.
    enum class StreamDomain : std::uint32_t
    {
        ChannelCoefficients = 1,
        UserDrop = 2,
        ClusterAzimuth = 3
    };

    // Counter layout: [entry lo, entry hi, stream lo, domain << 16 | stream hi (16 bits)]
    inline PhiloxCounter philox_counter(StreamDomain domain, std::uint64_t stream, std::uint64_t entry)
    {
        return {std::uint32_t(entry), std::uint32_t(entry >> 32), std::uint32_t(stream),
                (std::uint32_t(domain) << 16) | (std::uint32_t(stream >> 32) & 0xFFFFu)};
    }

    // Open-interval (0, 1) double from 52 random bits; (k + 1/2) 2^-52 is exact, so 1 is never hit.
    inline double uniform_open(std::uint32_t hi, std::uint32_t lo)
    {
        const std::uint64_t bits = (std::uint64_t(hi) << 20) | (lo >> 12);
        return (double(bits) + 0.5) * 0x1p-52;
    }

    // Two uniforms in (0, 1) from one block.
    inline std::array<double, 2> philox_uniform2(StreamDomain domain, std::uint64_t seed, std::uint64_t stream,
                                                 std::uint64_t entry)
    {
        const auto r = philox4x32(philox_counter(domain, stream, entry), philox_key(seed));
        return {uniform_open(r[0], r[1]), uniform_open(r[2], r[3])};
    }

    // Standard circularly-symmetric complex normal CN(0, 1) (Box-Muller on one block):
    // real and imaginary parts are independent N(0, 1/2).
    inline std::complex<double> philox_complex_normal(StreamDomain domain, std::uint64_t seed, std::uint64_t stream,
                                                      std::uint64_t entry)
    {
        const auto u = philox_uniform2(domain, seed, stream, entry);
        const double r = std::sqrt(-std::log(u[0])); // sqrt(-2 log u) / sqrt(2)
        const double t = 2.0 * std::numbers::pi * u[1];
        return {r * std::cos(t), r * std::sin(t)};
    }
}

#endif
