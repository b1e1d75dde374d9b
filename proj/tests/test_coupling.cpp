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

#include "holo/coupling.hpp"

#include <cmath>
#include <numbers>

using holo::ErrorCode;
using holo::ElementPattern;
using holo_test::throws_code;
using std::numbers::pi;

namespace
{
    constexpr double deg = pi / 180;

    // (1/4pi) times the midpoint sum of |F|^2 sin(theta) on a 128 x 256 grid.
    double power_oracle(const ElementPattern &p)
    {
        const int nt = 128, np = 256;
        const double dt = pi / nt, dp = 2 * pi / np;
        double total = 0;
        for (int i = 0; i < nt; ++i)
            for (int j = 0; j < np; ++j)
            {
                const double t = (i + 0.5) * dt, ph = -pi + (j + 0.5) * dp;
                total += std::norm(p.gain(t, ph)) * std::sin(t);
            }
        return total * dt * dp / (4 * pi);
    }

    std::vector<double> range(double first, double last, double step)
    {
        std::vector<double> v;
        for (double x = first; x <= last + 1e-9; x += step)
            v.push_back(x);
        return v;
    }

    ElementPattern sampled_dipole(double scale)
    {
        const auto el = range(0, 180, 1), az = range(-180, 178, 2);
        Eigen::MatrixXcd s(Eigen::Index(el.size()), Eigen::Index(az.size()));
        for (std::size_t i = 0; i < el.size(); ++i)
            s.row(Eigen::Index(i)).setConstant(scale * std::sin(el[i] * deg));
        return ElementPattern::gridded(el, az, s);
    }
}

TEST_CASE("analytic patterns")
{
    const auto u = ElementPattern::uniform();
    CHECK(u.gain(0.3, 1.0) == std::complex<double>(1.0));
    CHECK(holo::pattern_gain({u}, 7, 2.0, -1.0) == std::complex<double>(1.0));

    const auto d = ElementPattern::dipole();
    CHECK(std::abs(d.gain(0.0, 0.0)) == 0.0);
    CHECK(d.gain(pi / 2, 0.4).real() == doctest::Approx(std::sqrt(1.5)).epsilon(1e-15));
    CHECK(d.gain(pi / 2, 0.4).real() == doctest::Approx(1.22474).epsilon(1e-5));

    CHECK(u.power_integral() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(d.power_integral() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(power_oracle(d) == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("gridded interpolation")
{
    // one cell with corner magnitudes 1, 1 (theta = 0) and 3, 3 (theta = 90)
    Eigen::MatrixXcd s(2, 2);
    s << 1.0, 1.0, 3.0, 3.0;
    const auto p = ElementPattern::gridded({0.0, 90.0}, {0.0, 90.0}, s, false);
    CHECK(std::abs(p.gain(45 * deg, 45 * deg)) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(std::abs(p.gain(0.0, 0.0)) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(p.gain(90 * deg, 90 * deg)) == doctest::Approx(3.0).epsilon(1e-14));
    // beyond the last elevation the pattern is zero
    CHECK(std::abs(p.gain(120 * deg, 0.0)) == 0.0);

    // azimuth wraps from the last column (90 deg) back to the first (0 deg = 360 deg)
    Eigen::MatrixXcd w(2, 2);
    w << 2.0, 4.0, 2.0, 4.0;
    const auto q = ElementPattern::gridded({0.0, 90.0}, {0.0, 90.0}, w, false);
    CHECK(q.gain(30 * deg, 225 * deg).real() == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(q.gain(30 * deg, -135 * deg).real() == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(q.gain(30 * deg, 45 * deg).real() == doctest::Approx(3.0).epsilon(1e-14));

    // nodes are reproduced after normalisation
    const auto d = sampled_dipole(1.0);
    const double c = std::abs(d.samples()(90, 0));
    CHECK(std::abs(d.gain(90 * deg, -180 * deg)) == doctest::Approx(c).epsilon(1e-14));
    CHECK(std::abs(d.gain(30 * deg, 10 * deg)) == doctest::Approx(std::abs(d.samples()(30, 95))).epsilon(1e-14));
}

TEST_CASE("gridded normalisation")
{
    for (double scale : {1.0, 7.5})
    {
        const auto d = sampled_dipole(scale);
        CHECK(power_oracle(d) == doctest::Approx(1.0).epsilon(0.02));
        CHECK(d.power_integral() == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(std::abs(d.gain(pi / 2, 0.0)) == doctest::Approx(std::sqrt(1.5)).epsilon(0.02));
    }

    // constant magnitude 2 renormalises to 1
    const auto el = range(0, 180, 10), az = range(-180, 170, 10);
    const Eigen::MatrixXcd flat = Eigen::MatrixXcd::Constant(Eigen::Index(el.size()), Eigen::Index(az.size()), 2.0);
    const auto p = ElementPattern::gridded(el, az, flat);
    CHECK(std::abs(p.gain(1.0, 2.0)) == doctest::Approx(1.0).epsilon(1e-12));

    const Eigen::MatrixXcd zero = Eigen::MatrixXcd::Zero(Eigen::Index(el.size()), Eigen::Index(az.size()));
    CHECK(throws_code([&] { ElementPattern::gridded(el, az, zero); }, ErrorCode::DegenerateSpectrum));
}

TEST_CASE("gridded grid validation")
{
    Eigen::MatrixXcd s = Eigen::MatrixXcd::Ones(2, 2);
    auto bad = [&](std::vector<double> el, std::vector<double> az)
    { return throws_code([&] { ElementPattern::gridded(el, az, s); }, ErrorCode::MalformedPatternFile); };
    CHECK(bad({10.0, 90.0}, {0.0, 90.0}));   // does not start at 0
    CHECK(bad({0.0, 80.0}, {0.0, 90.0}));    // misses the horizon
    CHECK(bad({0.0, 190.0}, {0.0, 90.0}));   // beyond the sphere
    CHECK(bad({90.0, 0.0}, {0.0, 90.0}));    // not increasing
    CHECK(bad({0.0, 90.0}, {-190.0, 0.0}));  // starts before -180
    CHECK(bad({0.0, 90.0}, {-180.0, 180.0})); // a full turn duplicates the seam
    CHECK(bad({0.0, 45.0, 90.0}, {0.0, 90.0}));
}

TEST_CASE("pattern files")
{
    holo_test::TempDir dir;
    const auto d = sampled_dipole(1.0);
    const auto path = dir.file("patterns.csv");
    holo::save_pattern_file({d, d}, path);
    const auto back = holo::load_pattern_file(path);
    REQUIRE(back.size() == 2);
    CHECK(back[1].samples().rows() == d.samples().rows());
    CHECK((back[1].samples() - d.samples()).cwiseAbs().maxCoeff() < 1e-12);

    const auto one = dir.file("one.csv");
    std::string text = "element_index,theta_deg,phi_deg,re,im\n";
    for (double t : {0.0, 90.0, 180.0})
        for (double p : {-180.0, 0.0})
            text += "0," + std::to_string(t) + "," + std::to_string(p) + ",2,0\n";
    holo_test::write_file(one, text);
    const auto loaded = holo::load_pattern_file(one);
    REQUIRE(loaded.size() == 1);
    // 90 deg cells: the 4-point rule integrates sin(theta) to about 1e-8
    CHECK(std::abs(loaded[0].gain(0.7, 0.1)) == doctest::Approx(1.0).epsilon(1e-6));

    const auto missing = dir.file("missing.csv");
    holo_test::write_file(missing, "element_index,theta_deg,phi_deg,re,im\n0,0,0,1,0\n0,90,0,1,0\n0,90,90,1,0\n");
    CHECK(throws_code([&] { holo::load_pattern_file(missing); }, ErrorCode::MalformedPatternFile));

    const auto gap = dir.file("gap.csv");
    holo_test::write_file(gap, "element_index,theta_deg,phi_deg,re,im\n1,0,0,1,0\n1,90,0,1,0\n");
    CHECK(throws_code([&] { holo::load_pattern_file(gap); }, ErrorCode::MalformedPatternFile));

    const auto dup = dir.file("dup.csv");
    holo_test::write_file(dup, "element_index,theta_deg,phi_deg,re,im\n0,0,0,1,0\n0,0,0,1,0\n0,90,0,1,0\n");
    CHECK(throws_code([&] { holo::load_pattern_file(dup); }, ErrorCode::MalformedPatternFile));

    const auto header = dir.file("header.csv");
    holo_test::write_file(header, "element,theta,phi,re,im\n0,0,0,1,0\n");
    CHECK(throws_code([&] { holo::load_pattern_file(header); }, ErrorCode::MalformedPatternFile));

    const auto empty = dir.file("empty.csv");
    holo_test::write_file(empty, "element_index,theta_deg,phi_deg,re,im\n");
    CHECK(throws_code([&] { holo::load_pattern_file(empty); }, ErrorCode::EmptyFile));
}

TEST_CASE("efficiency from s-parameters")
{
    CHECK(holo::efficiency_from_sparams(Eigen::MatrixXcd::Zero(3, 3)).isApproxToConstant(1.0));

    const Eigen::MatrixXcd diag = Eigen::VectorXcd::Constant(4, std::complex<double>(0.0, 0.5)).asDiagonal();
    CHECK((holo::efficiency_from_sparams(diag).array() - 0.75).abs().maxCoeff() < 1e-15);

    Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(2, 2);
    s(0, 0) = std::sqrt(0.6);
    s(0, 1) = std::sqrt(0.6);
    CHECK(throws_code([&] { holo::efficiency_from_sparams(s); }, ErrorCode::NonPassive));

    // lossless row gives exactly zero, never negative
    s(0, 0) = std::sqrt(0.5);
    s(0, 1) = std::complex<double>(0.0, std::sqrt(0.5));
    const auto e = holo::efficiency_from_sparams(s);
    CHECK(e(0) >= 0.0);
    CHECK(e(0) < 1e-15);
    CHECK(e(1) == 1.0);

    holo_test::TempDir dir;
    Eigen::MatrixXcd r(3, 3);
    r << std::complex<double>(0.1, 0.2), 0.05, std::complex<double>(0, -0.1), 0.05, std::complex<double>(-0.3, 0.1), 0.02,
        std::complex<double>(0, -0.1), 0.02, 0.25;
    const auto path = dir.file("s.csv");
    holo::save_sparams_file(r, path);
    CHECK(holo::load_sparams_file(path) == r);

    const auto partial = dir.file("partial.csv");
    holo_test::write_file(partial, "row,col,re,im\n0,0,0.1,0\n1,1,0.1,0\n");
    CHECK(throws_code([&] { holo::load_sparams_file(partial); }, ErrorCode::MalformedInputFile));
    const auto dup = dir.file("dup.csv");
    holo_test::write_file(dup, "row,col,re,im\n0,0,0.1,0\n0,0,0.1,0\n");
    CHECK(throws_code([&] { holo::load_sparams_file(dup); }, ErrorCode::MalformedInputFile));
    const auto empty = dir.file("empty.csv");
    holo_test::write_file(empty, "row,col,re,im\n");
    CHECK(throws_code([&] { holo::load_sparams_file(empty); }, ErrorCode::EmptyFile));
}

TEST_CASE("hannan limit")
{
    CHECK(holo::hannan_limit(0.5, 0.5) == doctest::Approx(pi / 4).epsilon(1e-15));
    CHECK(holo::hannan_limit(0.125, 0.125) == doctest::Approx(pi / 64).epsilon(1e-15));
    CHECK(holo::hannan_limit(1.0, 1.0) == 1.0);
    CHECK(holo::reference_efficiency() == doctest::Approx(0.785398).epsilon(1e-6));

    double prev = 0;
    for (double d = 0.05; d < 1.2; d += 0.05)
    {
        const double h = holo::hannan_limit(d, 0.3);
        CHECK(h >= prev);
        prev = h;
    }

    // N e is fixed by the aperture under the bound
    for (double spacing : {0.5, 0.25, 0.125})
    {
        const auto g = holo::build_planar_array(4.0, spacing);
        const double total = double(g.size()) * holo::hannan_limit(spacing, spacing);
        CHECK(std::abs(total / (pi * 16.0) - 1) < 1e-12);
    }
}

TEST_CASE("coupling profiles")
{
    const auto g = holo::build_planar_array(1.0, 0.125);

    const auto unit = holo::build_coupling_profile(g, {}, holo::RelativeEta{1.0});
    CHECK(unit.efficiencies.size() == 64);
    CHECK((unit.efficiencies.array() - pi / 4).abs().maxCoeff() < 1e-15);
    CHECK(unit.pattern(5).kind() == ElementPattern::Kind::Uniform);

    const auto eighty = holo::build_coupling_profile(g, {}, holo::RelativeEta{0.8});
    CHECK((eighty.efficiencies.array() - 0.628319).abs().maxCoeff() < 1e-6);
    CHECK((eighty.relative_efficiencies.array() - 0.8).abs().maxCoeff() < 1e-15);

    const auto hannan = holo::build_coupling_profile(g, {ElementPattern::dipole()}, holo::HannanLimited{});
    CHECK((hannan.relative_efficiencies.array() - 1.0 / 16).abs().maxCoeff() < 1e-15);
    CHECK(hannan.pattern(63).kind() == ElementPattern::Kind::AnalyticDipole);

    const Eigen::MatrixXcd s = Eigen::MatrixXcd::Identity(64, 64) * 0.5;
    const auto fromS = holo::build_coupling_profile(g, {}, holo::FromSParams{s});
    CHECK((fromS.efficiencies.array() - 0.75).abs().maxCoeff() < 1e-15);
    CHECK((fromS.relative_efficiencies.array() - 0.75 / (pi / 4)).abs().maxCoeff() < 1e-15);

    CHECK(throws_code([&] { holo::build_coupling_profile(g, {}, holo::FromSParams{Eigen::MatrixXcd::Zero(4, 4)}); },
                      ErrorCode::DimensionMismatch));
    CHECK(throws_code([&] { holo::build_coupling_profile(g, {ElementPattern::uniform(), ElementPattern::dipole()},
                                                         holo::RelativeEta{1.0}); },
                      ErrorCode::DimensionMismatch));
    CHECK(throws_code([&] { holo::build_coupling_profile(g, {}, holo::RelativeEta{1.2}); }, ErrorCode::InvalidConfig));
    Eigen::MatrixXcd active = Eigen::MatrixXcd::Zero(64, 64);
    active(3, 0) = 1.1;
    CHECK(throws_code([&] { holo::build_coupling_profile(g, {}, holo::FromSParams{active}); }, ErrorCode::NonPassive));
}

TEST_CASE("efficiency amplitudes")
{
    const auto g = holo::build_planar_array(1.0, 0.5);
    auto p = holo::build_coupling_profile(g, {}, holo::RelativeEta{1.0});
    CHECK((holo::efficiency_amplitude_matrix(p).diagonal().array() - 0.886227).abs().maxCoeff() < 1e-6);

    p.efficiencies.setOnes();
    CHECK(holo::efficiency_amplitude_matrix(p).diagonal().isApproxToConstant(1.0));
    p.efficiencies.setConstant(0.25);
    CHECK((holo::efficiency_amplitude_matrix(p).diagonal().array() - 0.5).abs().maxCoeff() < 1e-15);
}
