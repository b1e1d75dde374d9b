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

#ifndef HOLO_QUADRATURE_HPP
#define HOLO_QUADRATURE_HPP

#include <Eigen/Core>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace holo
{
    template <typename Scalar>
    struct GaussLegendreRule
    {
        Eigen::Array<Scalar, Eigen::Dynamic, 1> nodes;   // ascending, on [-1, 1]
        Eigen::Array<Scalar, Eigen::Dynamic, 1> weights; // sum to 2
    };

    // n-point Gauss-Legendre rule on [-1, 1], Newton iteration on P_n from the Chebyshev guess.
    template <typename Scalar = double>
    GaussLegendreRule<Scalar> gauss_legendre(int n)
    {
        if (n < 1)
            throw std::invalid_argument("gauss_legendre: n must be >= 1");
        GaussLegendreRule<Scalar> rule;
        rule.nodes.resize(n);
        rule.weights.resize(n);
        const int half = (n + 1) / 2;
        // Returns (P_n(x), P_n'(x)) from the three-term recurrence.
        auto legendre = [n](Scalar x)
        {
            Scalar p0 = 1, p1 = x;
            for (int k = 2; k <= n; ++k)
            {
                const Scalar p2 = (Scalar(2 * k - 1) * x * p1 - Scalar(k - 1) * p0) / Scalar(k);
                p0 = p1;
                p1 = p2;
            }
            return std::pair<Scalar, Scalar>{p1, Scalar(n) * (x * p1 - p0) / (x * x - Scalar(1))};
        };
        for (int i = 0; i < half; ++i)
        {
            Scalar x = std::cos(std::numbers::pi_v<Scalar> * (Scalar(i) + Scalar(0.75)) / (Scalar(n) + Scalar(0.5)));
            for (int iter = 0; iter < 100; ++iter)
            {
                const auto [pn, dp] = legendre(x);
                const Scalar dx = pn / dp;
                x -= dx;
                if (std::abs(dx) < Scalar(1e-16))
                    break;
            }
            const Scalar dp = legendre(x).second;
            const Scalar w = Scalar(2) / ((Scalar(1) - x * x) * dp * dp);
            rule.nodes(i) = -x;
            rule.nodes(n - 1 - i) = x;
            rule.weights(i) = w;
            rule.weights(n - 1 - i) = w;
        }
        return rule;
    }

    // Integral over the unit sphere of f(elevation, azimuth) sin(elevation), tensor Gauss-Legendre.
    template <typename Func>
    double sphere_integral(Func &&f, int n_elevation, int n_azimuth)
    {
        const auto re = gauss_legendre<double>(n_elevation);
        const auto ra = gauss_legendre<double>(n_azimuth);
        const double pi = std::numbers::pi;
        double total = 0.0;
        for (int i = 0; i < n_elevation; ++i)
        {
            const double theta = 0.5 * pi * (re.nodes(i) + 1.0);
            const double wt = 0.5 * pi * re.weights(i) * std::sin(theta);
            double row = 0.0;
            for (int j = 0; j < n_azimuth; ++j)
                row += ra.weights(j) * f(theta, pi * ra.nodes(j));
            total += wt * pi * row;
        }
        return total;
    }
}

#endif
