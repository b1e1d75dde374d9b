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

#include "holo/capacity.hpp"
#include "holo/philox.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>
#include <numbers>

namespace holo
{
    namespace
    {
        // Relative eigenvalue floor below which a mode is treated as absent.
        constexpr double rank_floor = 1e-13;

        double log2_det_hpd(const Eigen::MatrixXcd &t)
        {
            Eigen::LLT<Eigen::MatrixXcd> llt(t);
            if (llt.info() != Eigen::Success)
                throw Error(ErrorCode::ZeroChannel, "sum-rate matrix is not positive definite");
            return 2.0 * llt.matrixLLT().diagonal().real().array().log().sum() / std::numbers::ln2;
        }

        // Rows of the returned matrix span the row space of H; G^H G = H^H H.
        Eigen::MatrixXcd compress_rows(const Eigen::MatrixXcd &h)
        {
            if (h.size() == 0)
                return Eigen::MatrixXcd(0, h.cols());
            const Eigen::MatrixXcd gram = h * h.adjoint();
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram);
            const Eigen::VectorXd &ev = es.eigenvalues(); // ascending
            const double top = ev(ev.size() - 1);
            if (!(top > 1e-300))
                return Eigen::MatrixXcd(0, h.cols());
            Eigen::Index keep = 0;
            while (keep < ev.size() && ev(ev.size() - 1 - keep) > rank_floor * top)
                ++keep;
            return es.eigenvectors().rightCols(keep).adjoint() * h;
        }
    }

    CapacityReport su_capacity(const Eigen::MatrixXcd &h, double snr_db)
    {
        if (h.size() == 0 || !h.allFinite())
            throw Error(ErrorCode::ZeroChannel, "channel matrix is empty or not finite");
        Eigen::BDCSVD<Eigen::MatrixXcd> svd(h);
        const Eigen::VectorXd s = svd.singularValues();
        if (!(s.size() > 0 && s(0) >= 1e-300))
            throw Error(ErrorCode::ZeroChannel, "all singular values vanish");
        const Eigen::VectorXd gains = s.array().square();
        CapacityReport r;
        r.allocations.push_back(waterfill<double>(gains, std::pow(10.0, snr_db / 10.0)));
        r.value_bits = r.allocations.front().capacity_bits;
        r.iterations = 1;
        return r;
    }

    double uma_pathloss_delta_db(double distance_m)
    {
        if (!(distance_m > 0.0) || !std::isfinite(distance_m))
            throw Error(ErrorCode::NonPositiveDistance, "distance must be positive");
        return -39.08 * std::log10(distance_m / 50.0);
    }

    std::vector<UserDrop> drop_users(int users, std::uint64_t seed)
    {
        if (users < 1)
            throw Error(ErrorCode::NonPositiveInput, "at least one user is required");
        std::vector<UserDrop> drops(std::size_t(users), UserDrop{});
        for (int k = 0; k < users; ++k)
        {
            const auto a = philox_uniform2(StreamDomain::UserDrop, seed, std::uint64_t(k), 0);
            const auto b = philox_uniform2(StreamDomain::UserDrop, seed, std::uint64_t(k), 1);
            auto &d = drops[std::size_t(k)];
            d.distance_m = 25.0 + 75.0 * a[0];
            d.azimuth_deg = -120.0 + 240.0 * a[1];
            d.orientation_deg = -180.0 + 360.0 * b[0];
            d.snr_db = uma_pathloss_delta_db(d.distance_m);
        }
        return drops;
    }

    double dual_mac_sum_rate(const std::vector<Eigen::MatrixXcd> &channels,
                             const std::vector<Eigen::MatrixXcd> &covariances)
    {
        if (channels.empty() || channels.size() != covariances.size())
            throw Error(ErrorCode::DimensionMismatch, "one covariance per channel is required");
        const Eigen::Index n = channels.front().cols();
        Eigen::MatrixXcd t = Eigen::MatrixXcd::Identity(n, n);
        for (std::size_t k = 0; k < channels.size(); ++k)
        {
            const auto &h = channels[k];
            if (h.cols() != n || covariances[k].rows() != h.rows() || covariances[k].cols() != h.rows())
                throw Error(ErrorCode::DimensionMismatch, "inconsistent channel or covariance dimensions");
            t.noalias() += h.adjoint() * covariances[k] * h;
        }
        return log2_det_hpd(t);
    }

    CapacityReport mu_sum_capacity(const std::vector<Eigen::MatrixXcd> &channels, double total_power,
                                   const MultiUserOptions &options)
    {
        if (channels.empty())
            throw Error(ErrorCode::EmptyGains, "no users");
        if (!(total_power > 0.0))
            throw Error(ErrorCode::NonPositiveInput, "total power must be positive");
        const Eigen::Index n_tx = channels.front().cols();
        for (const auto &h : channels)
            if (h.cols() != n_tx)
                throw Error(ErrorCode::DimensionMismatch, "users disagree on the transmit dimension");
            else if (!h.allFinite())
                throw Error(ErrorCode::ZeroChannel, "channel entries are not finite");

        // Exact reduction: each user to its row space, then all users to the joint row space.
        const std::size_t n_users = channels.size();
        std::vector<Eigen::MatrixXcd> g(n_users);
        Eigen::Index total_rank = 0;
        for (std::size_t k = 0; k < n_users; ++k)
        {
            g[k] = compress_rows(channels[k]);
            total_rank += g[k].rows();
        }
        if (total_rank == 0)
            throw Error(ErrorCode::ZeroChannel, "every user channel vanishes");

        Eigen::MatrixXcd stacked(n_tx, total_rank);
        for (std::size_t k = 0, col = 0; k < n_users; ++k)
        {
            stacked.middleCols(Eigen::Index(col), g[k].rows()) = g[k].adjoint();
            col += std::size_t(g[k].rows());
        }
        Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(stacked);
        qr.setThreshold(1e-13);
        const Eigen::Index d = std::max<Eigen::Index>(qr.rank(), 1);
        const Eigen::MatrixXcd w = qr.householderQ() * Eigen::MatrixXcd::Identity(n_tx, d);
        for (auto &gk : g)
            gk = gk * w; // [r_k, d]

        std::vector<Eigen::MatrixXcd> q(n_users);
        for (std::size_t k = 0; k < n_users; ++k)
            q[k] = Eigen::MatrixXcd::Zero(g[k].rows(), g[k].rows());

        const double inv_k = 1.0 / double(n_users);
        CapacityReport report;
        report.converged = false;
        double previous = 0.0;
        PowerAllocation<double> last;

        for (int it = 1; it <= options.max_iterations; ++it)
        {
            Eigen::MatrixXcd t = Eigen::MatrixXcd::Identity(d, d);
            std::vector<Eigen::MatrixXcd> contribution(n_users);
            for (std::size_t k = 0; k < n_users; ++k)
            {
                contribution[k] = g[k].adjoint() * q[k] * g[k];
                t += contribution[k];
            }

            // Effective single-user channels against the other users' interference.
            std::vector<Eigen::MatrixXcd> modes(n_users);
            std::vector<Eigen::Index> offsets(n_users + 1, 0);
            std::vector<double> all_gains;
            for (std::size_t k = 0; k < n_users; ++k)
            {
                offsets[k + 1] = offsets[k] + g[k].rows();
                if (g[k].rows() == 0)
                    continue;
                // Gains and modes of G_k Z_k^-1 G_k^H, with Z_k = L L^H.
                const Eigen::LLT<Eigen::MatrixXcd> z(t - contribution[k]);
                const Eigen::MatrixXcd e = z.matrixL().solve(g[k].adjoint()); // L^-1 G_k^H
                Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(e.adjoint() * e);
                modes[k] = es.eigenvectors();
                for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
                    all_gains.push_back(std::max(es.eigenvalues()(i), 0.0));
            }
            const Eigen::VectorXd gains = Eigen::Map<const Eigen::VectorXd>(all_gains.data(), Eigen::Index(all_gains.size()));
            last = waterfill<double>(gains, total_power);

            for (std::size_t k = 0; k < n_users; ++k)
            {
                if (g[k].rows() == 0)
                    continue;
                const Eigen::VectorXd p = last.powers.segment(offsets[k], g[k].rows());
                const Eigen::MatrixXcd s = modes[k] * p.asDiagonal() * modes[k].adjoint();
                q[k] = inv_k * s + (1.0 - inv_k) * q[k];
            }

            Eigen::MatrixXcd t_new = Eigen::MatrixXcd::Identity(d, d);
            for (std::size_t k = 0; k < n_users; ++k)
                t_new.noalias() += g[k].adjoint() * q[k] * g[k];
            const double rate = log2_det_hpd(t_new);

            // Frank-Wolfe gap: with D_k = G_k T^-1 G_k^H (the gradient up to 1/ln 2), the optimum
            // is at most rate + (P max_k lambda_max(D_k) - sum_k tr(D_k Q_k)) / ln 2.
            const Eigen::LLT<Eigen::MatrixXcd> tl(t_new);
            double top = 0.0, inner = 0.0;
            for (std::size_t k = 0; k < n_users; ++k)
            {
                if (g[k].rows() == 0)
                    continue;
                const Eigen::MatrixXcd x = tl.matrixL().solve(g[k].adjoint());
                const Eigen::MatrixXcd dk = x.adjoint() * x;
                top = std::max(top, Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(dk, Eigen::EigenvaluesOnly)
                                        .eigenvalues()
                                        .maxCoeff());
                inner += (dk * q[k]).trace().real();
            }
            report.gap_bits = std::max(0.0, total_power * top - inner) / std::numbers::ln2;

            report.history.push_back(rate);
            report.iterations = it;
            report.value_bits = rate;
            if (it > 1 && std::abs(rate - previous) < options.tolerance_bits && report.gap_bits < options.tolerance_bits)
            {
                report.converged = true;
                break;
            }
            previous = rate;
        }

        for (std::size_t k = 0; k < n_users; ++k)
        {
            PowerAllocation<double> a;
            a.water_level = last.water_level;
            if (q[k].rows() > 0)
            {
                Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(q[k], Eigen::EigenvaluesOnly);
                a.powers = es.eigenvalues().cwiseMax(0.0);
            }
            report.allocations.push_back(std::move(a));
        }
        return report;
    }
}
