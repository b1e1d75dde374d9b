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

#ifndef HOLO_CAPACITY_HPP
#define HOLO_CAPACITY_HPP

#include "holo/error.hpp"

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

namespace holo
{
    template <typename Scalar = double>
    struct PowerAllocation
    {
        Eigen::Matrix<Scalar, Eigen::Dynamic, 1> powers; // same order as the input gains
        Scalar water_level = 0;
        Scalar capacity_bits = 0;
    };

    // p_i = max(0, mu - 1/g_i) with sum p_i = total_power. Gains are sorted once; the
    // active set is the largest k for which the closed-form level exceeds 1/g_k.
    // Non-positive gains are never active. Throws EmptyGains, NonPositiveInput.
    template <typename Scalar = double>
    PowerAllocation<Scalar> waterfill(const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> &gains, Scalar total_power)
    {
        if (gains.size() == 0)
            throw Error(ErrorCode::EmptyGains, "waterfill needs at least one gain");
        if (!(total_power > Scalar(0)) || !std::isfinite(double(total_power)))
            throw Error(ErrorCode::NonPositiveInput, "total power must be positive and finite");
        if (!gains.allFinite())
            throw Error(ErrorCode::NonPositiveInput, "gains must be finite");

        std::vector<Eigen::Index> order(std::size_t(gains.size()));
        std::iota(order.begin(), order.end(), Eigen::Index(0));
        std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return gains(a) > gains(b); });

        PowerAllocation<Scalar> out;
        out.powers = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(gains.size());
        if (!(gains(order.front()) > Scalar(0)))
            throw Error(ErrorCode::ZeroChannel, "no mode has positive gain");

        Scalar inv_sum = 0;
        Scalar level = 0;
        std::size_t active = 0;
        for (std::size_t k = 0; k < order.size(); ++k)
        {
            const Scalar g = gains(order[k]);
            if (!(g > Scalar(0)))
                break;
            const Scalar trial = (total_power + inv_sum + Scalar(1) / g) / Scalar(k + 1);
            if (!(trial > Scalar(1) / g))
                break;
            inv_sum += Scalar(1) / g;
            level = trial;
            active = k + 1;
        }
        out.water_level = level;
        for (std::size_t k = 0; k < active; ++k)
        {
            const Scalar g = gains(order[k]);
            const Scalar p = std::max(Scalar(0), level - Scalar(1) / g);
            out.powers(order[k]) = p;
            out.capacity_bits += std::log2(Scalar(1) + p * g);
        }
        return out;
    }

    struct CapacityReport
    {
        double value_bits = 0.0;
        std::vector<PowerAllocation<double>> allocations; // one per user (single entry for SU)
        std::vector<double> history;                      // sum rate after each iteration (MU)
        int iterations = 0;
        bool converged = true;
        double gap_bits = 0.0; // MU: certified bound on the distance to the optimum
    };

    // Water-filling over the squared singular values of H with P = 10^(snr_db / 10).
    // Throws ZeroChannel when every singular value is below 1e-300.
    CapacityReport su_capacity(const Eigen::MatrixXcd &h, double snr_db);

    // -39.08 log10(d / 50), the distance term of the UMa NLOS law relative to 50 m.
    // Throws NonPositiveDistance.
    double uma_pathloss_delta_db(double distance_m);

    struct UserDrop
    {
        double distance_m = 50.0;
        double azimuth_deg = 0.0;     // position in the sector, [-120, 120]
        double orientation_deg = 0.0; // UE array rotation, [-180, 180)
        double snr_db = 0.0;
    };

    // Uniform drops in the [25, 100] m x [-120, 120] deg sector; deterministic per (seed, user).
    std::vector<UserDrop> drop_users(int users, std::uint64_t seed);

    struct MultiUserOptions
    {
        double tolerance_bits = 1e-6;
        int max_iterations = 1000;
    };

    // Downlink sum capacity through the dual multiple-access channel with sum-power
    // iterative water-filling (averaged update). Channels are [N_R,k, N_S] with per-user
    // SNR scaling already applied. Stops once the sum-rate change and the Frank-Wolfe
    // duality gap are both below the tolerance. Throws EmptyGains (no users), DimensionMismatch.
    CapacityReport mu_sum_capacity(const std::vector<Eigen::MatrixXcd> &channels, double total_power,
                                   const MultiUserOptions &options = {});

    // log2 det(I + sum_k H_k^H Q_k H_k) for given dual-MAC covariances Q_k ([N_R,k, N_R,k]).
    double dual_mac_sum_rate(const std::vector<Eigen::MatrixXcd> &channels,
                             const std::vector<Eigen::MatrixXcd> &covariances);
}

#endif
