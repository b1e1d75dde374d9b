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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "test_support.hpp"

#include "holo/channel_synth.hpp"
#include "holo/philox.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <numbers>
#include <thread>

using holo::ErrorCode;
using std::numbers::pi;

namespace
{
    struct Link
    {
        holo::ArrayGeometry bs, ue;
        holo::CouplingProfile bs_c, ue_c;
    };

    Link make_link(double bs_aperture, double ue_aperture, double spacing, double efficiency = 1.0)
    {
        Link k{holo::build_planar_array(bs_aperture, spacing), holo::build_planar_array(ue_aperture, spacing), {}, {}};
        k.bs_c = holo::build_coupling_profile(k.bs, {}, holo::RelativeEta{1.0});
        k.ue_c = holo::build_coupling_profile(k.ue, {}, holo::RelativeEta{1.0});
        k.bs_c.efficiencies.setConstant(efficiency);
        k.ue_c.efficiencies.setConstant(efficiency);
        return k;
    }

    holo::SynthesisPlan isotropic_plan(const Link &k)
    {
        const auto iso = holo::AngularPowerSpectrum::isotropic();
        return holo::build_plan(k.bs, k.ue, iso, iso, k.bs_c, k.ue_c);
    }

    // Harmonic entry written out from the definition, independent of the library helper.
    std::complex<double> harmonic_entry(const holo::ArrayGeometry &g, holo::HarmonicIndex h, Eigen::Index p, double sign)
    {
        const double phase = 2 * pi * (h.ix * g.elements(0, p) / g.aperture_x + h.iy * g.elements(1, p) / g.aperture_y);
        return std::polar(1.0 / std::sqrt(double(g.size())), sign * phase);
    }
}

TEST_CASE("philox known answers")
{
    using holo::philox4x32;
    CHECK(philox4x32({0, 0, 0, 0}, {0, 0}) == holo::PhiloxCounter{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
    CHECK(philox4x32({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu}) ==
          holo::PhiloxCounter{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
    CHECK(philox4x32({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u}) ==
          holo::PhiloxCounter{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});

    CHECK(holo::uniform_open(0, 0) > 0.0);
    CHECK(holo::uniform_open(0xffffffffu, 0xffffffffu) < 1.0);
    CHECK(holo::uniform_open(0x80000000u, 0) == 0.5 + 0x1p-53);

    // domains and streams do not collide
    const auto a = holo::philox_counter(holo::StreamDomain::ChannelCoefficients, 5, 9);
    const auto b = holo::philox_counter(holo::StreamDomain::UserDrop, 5, 9);
    const auto c = holo::philox_counter(holo::StreamDomain::ChannelCoefficients, 5ull << 32, 9);
    CHECK(a != b);
    CHECK(a != c);
}

TEST_CASE("complex normal moments")
{
    const int n = 200000;
    double re = 0, im = 0, re2 = 0, im2 = 0, cross = 0;
    for (int k = 0; k < n; ++k)
    {
        const auto z = holo::philox_complex_normal(holo::StreamDomain::ChannelCoefficients, 7, 3, std::uint64_t(k));
        re += z.real();
        im += z.imag();
        re2 += z.real() * z.real();
        im2 += z.imag() * z.imag();
        cross += z.real() * z.imag();
    }
    CHECK(std::abs(re / n) < 0.01);
    CHECK(std::abs(im / n) < 0.01);
    CHECK(re2 / n == doctest::Approx(0.5).epsilon(0.02));
    CHECK(im2 / n == doctest::Approx(0.5).epsilon(0.02));
    CHECK(std::abs(cross / n) < 0.01);
}

TEST_CASE("plan structure")
{
    const auto k = make_link(4.0, 1.0, 0.5);
    const auto plan = isotropic_plan(k);
    CHECK(plan.bs_basis.rows() == 64);
    CHECK(plan.bs_basis.cols() == 49);
    CHECK(plan.ue_basis.rows() == 4);
    CHECK(plan.ue_basis.cols() == 5);
    CHECK(plan.deviation.rows() == 5);
    CHECK(plan.deviation.cols() == 49);
    CHECK(std::abs(plan.variance_table.variances().sum() - 1.0) < 1e-9);
    CHECK(!plan.geometry_digest.empty());
    CHECK(!plan.spectrum_digest.empty());

    // uniform patterns give the plain harmonic matrix
    const Eigen::MatrixXcd plain = holo::harmonic_matrix(plan.variance_table.bs_lattice.indices, k.bs, holo::LinkEnd::Transmit);
    CHECK((plan.bs_basis - plain).cwiseAbs().maxCoeff() < 1e-12);

    const auto small = isotropic_plan(make_link(0.5, 0.5, 0.5));
    CHECK(small.bs_basis.cols() == 1);
    CHECK(small.ue_basis.cols() == 1);

    const auto other = isotropic_plan(make_link(4.0, 1.0, 0.25));
    CHECK(other.geometry_digest != plan.geometry_digest);
}

TEST_CASE("pattern-modified basis")
{
    const auto g = holo::build_planar_array(1.0, 0.25);
    const auto lattice = holo::build_spectral_lattice(1.0, 1.0, holo::AngularPowerSpectrum::isotropic());
    const auto dip = holo::build_coupling_profile(g, {holo::ElementPattern::dipole()}, holo::RelativeEta{1.0});
    const Eigen::MatrixXcd m = holo::modified_harmonic_matrix(lattice, g, dip, holo::LinkEnd::Receive);
    for (std::size_t c = 0; c < lattice.size(); ++c)
    {
        const auto h = lattice.indices[c];
        const double theta = holo::harmonic_angles(h, 1.0, 1.0).elevation;
        for (Eigen::Index p = 0; p < Eigen::Index(g.size()); ++p)
        {
            const auto want = harmonic_entry(g, h, p, +1.0) * std::sqrt(1.5) * std::sin(theta);
            CHECK(std::abs(m(p, Eigen::Index(c)) - want) < 1e-12);
        }
        if (h == holo::HarmonicIndex{0, 0})
            CHECK(m.col(Eigen::Index(c)).norm() == 0.0);
    }
}

TEST_CASE("channel draws")
{
    const auto k = make_link(4.0, 1.0, 0.5);
    const auto plan = isotropic_plan(k);

    const auto h = holo::sample_channel(plan, 11, 4);
    CHECK(h.matrix.rows() == 4);
    CHECK(h.matrix.cols() == 64);
    CHECK(h.seed == 11);
    CHECK(h.realization_index == 4);
    CHECK(h.matrix.allFinite());

    // bitwise determinism, also when drawn concurrently
    CHECK(holo::sample_channel(plan, 11, 4).matrix == h.matrix);
    std::vector<Eigen::MatrixXcd> par(8);
    {
        std::vector<std::thread> pool;
        for (int t = 7; t >= 0; --t)
            pool.emplace_back([&, t] { par[std::size_t(t)] = holo::sample_channel(plan, 11, std::uint64_t(t)).matrix; });
        for (auto &t : pool)
            t.join();
    }
    for (int t = 0; t < 8; ++t)
        CHECK(par[std::size_t(t)] == holo::sample_channel(plan, 11, std::uint64_t(t)).matrix);
    CHECK(holo::sample_channel(plan, 11, 5).matrix != h.matrix);
    CHECK(holo::sample_channel(plan, 12, 4).matrix != h.matrix);

    // coefficient draw matches the counter layout
    const Eigen::MatrixXcd ha = holo::sample_coefficients(plan, 11, 4);
    const auto n_s = ha.cols();
    const auto z = holo::philox_complex_normal(holo::StreamDomain::ChannelCoefficients, 11, 4, std::uint64_t(2 * n_s + 3));
    CHECK(ha(2, 3) == z * plan.deviation(2, 3));

    // H = left H_a right
    const Eigen::MatrixXcd rebuilt = plan.left * ha * plan.right;
    CHECK((rebuilt - h.matrix).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("degenerate links")
{
    auto k = make_link(1.0, 1.0, 0.5, 0.0);
    const auto zero = holo::sample_channel(isotropic_plan(k), 3, 0);
    CHECK(zero.matrix.cwiseAbs().maxCoeff() == 0.0);
    CHECK(holo::expected_frobenius(isotropic_plan(k)) == 0.0);

    k.bs_c.efficiencies.setOnes();
    CHECK(holo::expected_frobenius(isotropic_plan(k)) == 0.0);

    const auto single = isotropic_plan(make_link(0.5, 0.5, 0.125));
    for (std::uint64_t r = 0; r < 5; ++r)
    {
        const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(holo::sample_channel(single, 8, r).matrix);
        const auto &s = svd.singularValues();
        CHECK(s(0) > 0.0);
        CHECK(s(1) < 1e-12 * s(0));
    }
}

TEST_CASE("expected frobenius norm")
{
    for (double spacing : {0.5, 0.25})
    {
        const auto k = make_link(4.0, 1.0, spacing);
        const auto plan = isotropic_plan(k);
        const double n = double(k.bs.size() * k.ue.size());
        CHECK(holo::expected_frobenius(plan) == doctest::Approx(n).epsilon(1e-9));

        const auto quarter = isotropic_plan(make_link(4.0, 1.0, spacing, 0.25));
        CHECK(holo::expected_frobenius(quarter) == doctest::Approx(n * 0.0625).epsilon(1e-9));
    }

    // with a CDL spectrum and dipoles the closed form still matches brute force
    const auto &table = holo::cdl_b_table();
    const auto [bs_s, ue_s] = holo::spectra_from_cdl(table.rows, 10.0, 20.0);
    const auto g_bs = holo::build_planar_array(2.0, 0.25), g_ue = holo::build_planar_array(1.0, 0.25);
    const auto c_bs = holo::build_coupling_profile(g_bs, {holo::ElementPattern::dipole()}, holo::RelativeEta{0.8});
    const auto c_ue = holo::build_coupling_profile(g_ue, {}, holo::HannanLimited{});
    const auto plan = holo::build_plan(g_bs, g_ue, bs_s, ue_s, c_bs, c_ue);
    const Eigen::MatrixXd v = plan.variance_table.variances();
    double oracle = 0;
    for (Eigen::Index l = 0; l < v.rows(); ++l)
        for (Eigen::Index m = 0; m < v.cols(); ++m)
            oracle += v(l, m) * (plan.left.col(l)).squaredNorm() * (plan.right.row(m)).squaredNorm();
    CHECK(holo::expected_frobenius(plan) == doctest::Approx(oracle).epsilon(1e-12));
}

TEST_CASE("sample mean of the frobenius norm")
{
    for (double spacing : {0.5, 0.25})
    {
        const auto plan = isotropic_plan(make_link(4.0, 1.0, spacing));
        double acc = 0;
        const int draws = 2000;
        for (int r = 0; r < draws; ++r)
            acc += holo::sample_channel(plan, 99, std::uint64_t(r)).matrix.squaredNorm();
        CAPTURE(spacing);
        CHECK(std::abs(acc / draws / holo::expected_frobenius(plan) - 1) < 0.05);
    }
}

TEST_CASE("amplitude linearity")
{
    auto k = make_link(2.0, 1.0, 0.25, 0.64);
    const auto base = isotropic_plan(k);
    k.bs_c.efficiencies *= 0.25;
    k.ue_c.efficiencies *= 0.25;
    const auto scaled = isotropic_plan(k);
    // amplitude sqrt(e) at each end: c = 0.5 per end
    for (std::uint64_t r = 0; r < 3; ++r)
    {
        const Eigen::MatrixXcd a = holo::sample_channel(base, 5, r).matrix;
        const Eigen::MatrixXcd b = holo::sample_channel(scaled, 5, r).matrix;
        CHECK((b - 0.25 * a).cwiseAbs().maxCoeff() <= 1e-15 * a.cwiseAbs().maxCoeff());
        CHECK(holo::sample_channel(scaled, 5, r).matrix == b);
    }
}

TEST_CASE("toy covariance against direct expansion")
{
    const auto g = holo::build_planar_array(1.0, 0.5);
    const auto &table = holo::cdl_b_table();
    const auto [bs_s, ue_s] = holo::spectra_from_cdl(table.rows, 10.0, 20.0);
    auto c_bs = holo::build_coupling_profile(g, {}, holo::RelativeEta{1.0});
    auto c_ue = holo::build_coupling_profile(g, {}, holo::RelativeEta{0.8});
    const auto plan = holo::build_plan(g, g, bs_s, ue_s, c_bs, c_ue);

    const Eigen::MatrixXd sigma2 = plan.variance_table.variances();
    const auto &ue_idx = plan.variance_table.ue_lattice.indices;
    const auto &bs_idx = plan.variance_table.bs_lattice.indices;
    const double scale = 4.0; // sqrt(N_R N_S)
    const double gr = std::sqrt(0.8 * pi / 4), gs = std::sqrt(pi / 4);

    // vec(H) with i + 4 j; E[H_ij conj(H_kl)] summed over the harmonic pairs
    Eigen::MatrixXcd oracle = Eigen::MatrixXcd::Zero(16, 16);
    for (std::size_t l = 0; l < ue_idx.size(); ++l)
        for (std::size_t m = 0; m < bs_idx.size(); ++m)
        {
            Eigen::VectorXcd v(16);
            for (Eigen::Index j = 0; j < 4; ++j)
                for (Eigen::Index i = 0; i < 4; ++i)
                    v(i + 4 * j) = scale * gr * harmonic_entry(g, ue_idx[l], i, +1.0) *
                                   std::conj(gs * harmonic_entry(g, bs_idx[m], j, -1.0));
            oracle += sigma2(Eigen::Index(l), Eigen::Index(m)) * v * v.adjoint();
        }

    const int draws = 20000;
    Eigen::MatrixXcd empirical = Eigen::MatrixXcd::Zero(16, 16);
    for (int r = 0; r < draws; ++r)
    {
        const Eigen::MatrixXcd h = holo::sample_channel(plan, 2024, std::uint64_t(r)).matrix;
        const Eigen::Map<const Eigen::VectorXcd> v(h.data(), 16);
        empirical += v * v.adjoint();
    }
    empirical /= double(draws);

    CHECK((empirical - oracle).norm() / oracle.norm() < 0.1);
    for (Eigen::Index i = 0; i < 16; ++i)
        CHECK(std::abs(empirical(i, i).real() / oracle(i, i).real() - 1) < 0.1);
    // a few cross-entry pairs, relative to the entry scale
    const double unit = oracle.diagonal().real().mean();
    for (auto [a, b] : {std::pair{0, 1}, {0, 5}, {3, 12}, {6, 9}})
        CHECK(std::abs(empirical(a, b) - oracle(a, b)) < 0.1 * unit);
}

TEST_CASE("compact channel keeps the singular values")
{
    const auto &table = holo::cdl_b_table();
    const auto [bs_s, ue_s] = holo::spectra_from_cdl(table.rows, 10.0, 20.0);
    for (double spacing : {0.5, 0.25, 0.125})
    {
        const auto k = make_link(4.0, 1.0, spacing, 0.5);
        const auto plan = holo::build_plan(k.bs, k.ue, bs_s, ue_s, k.bs_c, k.ue_c);
        CHECK(plan.left_core.rows() == std::min<Eigen::Index>(Eigen::Index(k.ue.size()), 5));
        CHECK(plan.right_core.cols() == std::min<Eigen::Index>(Eigen::Index(k.bs.size()), 49));
        for (std::uint64_t r = 0; r < 3; ++r)
        {
            const Eigen::MatrixXcd full = holo::sample_channel(plan, 17, r).matrix;
            const Eigen::MatrixXcd compact = holo::sample_compact_channel(plan, plan.deviation, 17, r);
            const Eigen::VectorXd s_full = Eigen::JacobiSVD<Eigen::MatrixXcd>(full).singularValues();
            const Eigen::VectorXd s_comp = Eigen::JacobiSVD<Eigen::MatrixXcd>(compact).singularValues();
            const Eigen::Index n = std::min(s_full.size(), s_comp.size());
            CHECK((s_full.head(n) - s_comp.head(n)).cwiseAbs().maxCoeff() < 1e-10 * s_full(0));
            for (Eigen::Index i = n; i < s_full.size(); ++i)
                CHECK(s_full(i) < 1e-10 * s_full(0));
        }
    }
}

TEST_CASE("channel csv")
{
    holo_test::TempDir dir;
    Eigen::MatrixXcd h(2, 2);
    h << std::complex<double>(0.1, -2.5), 3.0, std::complex<double>(0, 1e-17), -0.25;
    const auto path = dir.file("h.csv");
    holo::save_channel_csv(h, path);
    CHECK(holo_test::read_file(path) == "row,col,re,im\n0,0,0.1,-2.5\n0,1,3,0\n1,0,0,1e-17\n1,1,-0.25,0\n");
    CHECK(holo_test::throws_code([&] { holo::save_channel_csv(h, dir.file("no/such/dir.csv")); }, ErrorCode::IoError));
}
