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

#include "holo/coupling.hpp"
#include "holo/error.hpp"
#include "holo/quadrature.hpp"
#include "csv.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <set>

namespace holo
{
    namespace
    {
        constexpr double rad2deg = 180.0 / std::numbers::pi;

        // Index i with v[i] <= x <= v[i+1]; v strictly increasing, x inside [v.front(), v.back()].
        std::size_t bracket(const std::vector<double> &v, double x)
        {
            auto it = std::upper_bound(v.begin(), v.end(), x);
            std::size_t i = std::size_t(it - v.begin());
            if (i == 0)
                return 0;
            return std::min(i - 1, v.size() - 2);
        }

        void check_grid(const std::vector<double> &el, const std::vector<double> &az, const Eigen::MatrixXcd &samples)
        {
            auto bad = [](const std::string &msg) { throw Error(ErrorCode::MalformedPatternFile, msg); };
            if (el.size() < 2 || az.empty())
                bad("pattern grid needs at least two elevations and one azimuth");
            if (samples.rows() != Eigen::Index(el.size()) || samples.cols() != Eigen::Index(az.size()))
                bad("pattern sample matrix does not match the grid");
            for (std::size_t i = 1; i < el.size(); ++i)
                if (!(el[i] > el[i - 1]))
                    bad("elevations must be strictly increasing");
            for (std::size_t i = 1; i < az.size(); ++i)
                if (!(az[i] > az[i - 1]))
                    bad("azimuths must be strictly increasing");
            if (el.front() < 0.0 || el.front() > 0.0 || el.back() < 90.0 || el.back() > 180.0)
                bad("elevations must start at 0 deg and cover [0, 90] within [0, 180]");
            if (az.front() < -180.0 || !(az.back() < az.front() + 360.0))
                bad("azimuths must lie within one turn starting at or after -180 deg");
            if (!samples.allFinite())
                bad("pattern samples must be finite");
        }
    }

    ElementPattern ElementPattern::uniform()
    {
        return ElementPattern{};
    }

    ElementPattern ElementPattern::dipole()
    {
        ElementPattern p;
        p.kind_ = Kind::AnalyticDipole;
        return p;
    }

    ElementPattern ElementPattern::gridded(std::vector<double> elevations_deg, std::vector<double> azimuths_deg,
                                           Eigen::MatrixXcd samples, bool normalise)
    {
        check_grid(elevations_deg, azimuths_deg, samples);
        ElementPattern p;
        p.kind_ = Kind::Gridded;
        p.elevations_deg_ = std::move(elevations_deg);
        p.azimuths_deg_ = std::move(azimuths_deg);
        p.samples_ = std::move(samples);
        if (normalise)
        {
            const double power = p.power_integral();
            if (!(power > 0.0))
                throw Error(ErrorCode::DegenerateSpectrum, "pattern is identically zero");
            p.samples_ /= std::sqrt(power);
        }
        return p;
    }

    std::complex<double> ElementPattern::gain(double elevation, double azimuth) const
    {
        switch (kind_)
        {
        case Kind::Uniform:
            return {1.0, 0.0};
        case Kind::AnalyticDipole:
            return {std::sqrt(1.5) * std::sin(elevation), 0.0};
        case Kind::Gridded:
            break;
        }

        const double theta = elevation * rad2deg;
        const auto &el = elevations_deg_;
        if (theta < el.front() || theta > el.back())
            return {0.0, 0.0};
        const std::size_t i = bracket(el, theta);
        const double tt = (theta - el[i]) / (el[i + 1] - el[i]);

        const auto &az = azimuths_deg_;
        double phi = azimuth * rad2deg;
        phi = az.front() + std::fmod(std::fmod(phi - az.front(), 360.0) + 360.0, 360.0);
        if (phi >= az.front() + 360.0)
            phi = az.front();
        std::size_t j0, j1;
        double a0, a1;
        if (phi >= az.back())
        {
            j0 = az.size() - 1;
            j1 = 0;
            a0 = az.back();
            a1 = az.front() + 360.0;
        }
        else
        {
            j0 = bracket(az, phi);
            j1 = j0 + 1;
            a0 = az[j0];
            a1 = az[j1];
        }
        const double tp = a1 > a0 ? (phi - a0) / (a1 - a0) : 0.0;

        const auto &s = samples_;
        const auto i0 = Eigen::Index(i), i1 = Eigen::Index(i + 1);
        const auto c0 = Eigen::Index(j0), c1 = Eigen::Index(j1);
        return (1.0 - tt) * ((1.0 - tp) * s(i0, c0) + tp * s(i0, c1)) + tt * ((1.0 - tp) * s(i1, c0) + tp * s(i1, c1));
    }

    double ElementPattern::power_integral() const
    {
        switch (kind_)
        {
        case Kind::Uniform:
        case Kind::AnalyticDipole:
            return 1.0;
        case Kind::Gridded:
            break;
        }

        // |F|^2 is piecewise bi-quadratic on the grid; 4x4 Gauss-Legendre per cell is enough.
        const auto rule = gauss_legendre<double>(4);
        const double d2r = std::numbers::pi / 180.0;
        const auto &el = elevations_deg_;
        const auto &az = azimuths_deg_;
        std::vector<double> az_edges = az;
        az_edges.push_back(az.front() + 360.0);

        double total = 0.0;
        for (std::size_t i = 0; i + 1 < el.size(); ++i)
        {
            const double t0 = el[i] * d2r, t1 = el[i + 1] * d2r;
            for (std::size_t j = 0; j + 1 < az_edges.size(); ++j)
            {
                const double p0 = az_edges[j] * d2r, p1 = az_edges[j + 1] * d2r;
                double cell = 0.0;
                for (int a = 0; a < 4; ++a)
                {
                    const double t = 0.5 * (t0 + t1) + 0.5 * (t1 - t0) * rule.nodes(a);
                    for (int b = 0; b < 4; ++b)
                    {
                        const double p = 0.5 * (p0 + p1) + 0.5 * (p1 - p0) * rule.nodes(b);
                        cell += rule.weights(a) * rule.weights(b) * std::norm(gain(t, p)) * std::sin(t);
                    }
                }
                total += cell * 0.25 * (t1 - t0) * (p1 - p0);
            }
        }
        return total / (4.0 * std::numbers::pi);
    }

    std::vector<ElementPattern> load_pattern_file(const std::string &path)
    {
        const auto csv = detail::read_numeric_csv(path, "element_index,theta_deg,phi_deg,re,im",
                                                  ErrorCode::MalformedPatternFile);
        if (csv.rows.empty())
            throw Error(ErrorCode::EmptyFile, path + " has no pattern samples");

        struct Samples
        {
            std::map<std::pair<double, double>, std::complex<double>> values;
            std::set<double> el, az;
        };
        std::map<long long, Samples> by_element;
        for (std::size_t k = 0; k < csv.rows.size(); ++k)
        {
            const auto &r = csv.rows[k];
            if (!detail::is_integral(r[0]) || r[0] < 0.0)
                throw Error(ErrorCode::MalformedPatternFile,
                            path + ":" + std::to_string(csv.line_numbers[k]) + ": bad element_index");
            auto &s = by_element[(long long)r[0]];
            if (!s.values.emplace(std::pair{r[1], r[2]}, std::complex<double>(r[3], r[4])).second)
                throw Error(ErrorCode::MalformedPatternFile,
                            path + ":" + std::to_string(csv.line_numbers[k]) + ": duplicate grid node");
            s.el.insert(r[1]);
            s.az.insert(r[2]);
        }

        std::vector<ElementPattern> out;
        long long expected = 0;
        for (auto &[index, s] : by_element)
        {
            if (index != expected++)
                throw Error(ErrorCode::MalformedPatternFile, path + ": element indices must run 0..M-1");
            std::vector<double> el(s.el.begin(), s.el.end()), az(s.az.begin(), s.az.end());
            if (s.values.size() != el.size() * az.size())
                throw Error(ErrorCode::MalformedPatternFile,
                            path + ": element " + std::to_string(index) + " is missing grid samples");
            Eigen::MatrixXcd m(Eigen::Index(el.size()), Eigen::Index(az.size()));
            for (std::size_t i = 0; i < el.size(); ++i)
                for (std::size_t j = 0; j < az.size(); ++j)
                    m(Eigen::Index(i), Eigen::Index(j)) = s.values.at({el[i], az[j]});
            out.push_back(ElementPattern::gridded(std::move(el), std::move(az), std::move(m)));
        }
        return out;
    }

    void save_pattern_file(const std::vector<ElementPattern> &patterns, const std::string &path)
    {
        std::ofstream out(path, std::ios::binary);
        if (!out)
            throw Error(ErrorCode::IoError, "cannot write '" + path + "'");
        out << "element_index,theta_deg,phi_deg,re,im\n";
        using detail::format_shortest;
        for (std::size_t k = 0; k < patterns.size(); ++k)
        {
            const auto &p = patterns[k];
            if (p.kind() != ElementPattern::Kind::Gridded)
                throw Error(ErrorCode::InvalidConfig, "only gridded patterns can be written");
            for (std::size_t i = 0; i < p.elevations_deg().size(); ++i)
                for (std::size_t j = 0; j < p.azimuths_deg().size(); ++j)
                {
                    const auto g = p.samples()(Eigen::Index(i), Eigen::Index(j));
                    out << k << ',' << format_shortest(p.elevations_deg()[i]) << ','
                        << format_shortest(p.azimuths_deg()[j]) << ',' << format_shortest(g.real()) << ','
                        << format_shortest(g.imag()) << '\n';
                }
        }
    }

    Eigen::MatrixXcd load_sparams_file(const std::string &path)
    {
        const auto csv = detail::read_numeric_csv(path, "row,col,re,im", ErrorCode::MalformedInputFile);
        if (csv.rows.empty())
            throw Error(ErrorCode::EmptyFile, path + " has no S-parameter entries");
        long long n = 0;
        for (std::size_t k = 0; k < csv.rows.size(); ++k)
        {
            const auto &r = csv.rows[k];
            if (!detail::is_integral(r[0]) || !detail::is_integral(r[1]) || r[0] < 0.0 || r[1] < 0.0)
                throw Error(ErrorCode::MalformedInputFile,
                            path + ":" + std::to_string(csv.line_numbers[k]) + ": bad row/col index");
            n = std::max({n, (long long)r[0] + 1, (long long)r[1] + 1});
        }
        if ((long long)csv.rows.size() != n * n)
            throw Error(ErrorCode::MalformedInputFile, path + ": expected all " + std::to_string(n * n) + " entries");
        Eigen::MatrixXcd s(n, n);
        Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> seen = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>::Constant(n, n, false);
        for (std::size_t k = 0; k < csv.rows.size(); ++k)
        {
            const auto &r = csv.rows[k];
            const auto i = Eigen::Index(r[0]), j = Eigen::Index(r[1]);
            if (seen(i, j))
                throw Error(ErrorCode::MalformedInputFile,
                            path + ":" + std::to_string(csv.line_numbers[k]) + ": duplicate entry");
            seen(i, j) = true;
            s(i, j) = {r[2], r[3]};
        }
        return s;
    }

    void save_sparams_file(const Eigen::MatrixXcd &s, const std::string &path)
    {
        std::ofstream out(path, std::ios::binary);
        if (!out)
            throw Error(ErrorCode::IoError, "cannot write '" + path + "'");
        out << "row,col,re,im\n";
        for (Eigen::Index i = 0; i < s.rows(); ++i)
            for (Eigen::Index j = 0; j < s.cols(); ++j)
                out << i << ',' << j << ',' << detail::format_shortest(s(i, j).real()) << ','
                    << detail::format_shortest(s(i, j).imag()) << '\n';
    }

    Eigen::VectorXd efficiency_from_sparams(const Eigen::MatrixXcd &s)
    {
        if (s.rows() != s.cols())
            throw Error(ErrorCode::DimensionMismatch, "S-parameter matrix must be square");
        const Eigen::VectorXd row_power = s.cwiseAbs2().rowwise().sum();
        for (Eigen::Index p = 0; p < row_power.size(); ++p)
            if (row_power(p) > 1.0 + 1e-9)
                throw Error(ErrorCode::NonPassive, "row " + std::to_string(p) + " power sum " +
                                                       std::to_string(row_power(p)) + " exceeds 1");
        return (1.0 - row_power.array()).max(0.0).matrix();
    }

    double hannan_limit(double spacing_x, double spacing_y)
    {
        return std::min(1.0, std::numbers::pi * spacing_x * spacing_y);
    }

    double reference_efficiency()
    {
        return hannan_limit(0.5, 0.5);
    }

    CouplingProfile build_coupling_profile(const ArrayGeometry &geometry, std::vector<ElementPattern> patterns,
                                           const EfficiencyMode &mode)
    {
        const auto n = Eigen::Index(geometry.size());
        if (patterns.empty())
            patterns.push_back(ElementPattern::uniform());
        if (patterns.size() != 1 && Eigen::Index(patterns.size()) != n)
            throw Error(ErrorCode::DimensionMismatch, "pattern count " + std::to_string(patterns.size()) +
                                                          " does not match " + std::to_string(n) + " elements");

        CouplingProfile profile;
        profile.patterns = std::move(patterns);
        const double e_ref = reference_efficiency();

        std::visit(
            [&](const auto &m)
            {
                using M = std::decay_t<decltype(m)>;
                if constexpr (std::is_same_v<M, RelativeEta>)
                {
                    if (!(m.eta >= 0.0 && m.eta <= 1.0))
                        throw Error(ErrorCode::InvalidConfig, "relative efficiency must lie in [0, 1]");
                    profile.efficiencies = Eigen::VectorXd::Constant(n, m.eta * e_ref);
                }
                else if constexpr (std::is_same_v<M, HannanLimited>)
                {
                    profile.efficiencies =
                        Eigen::VectorXd::Constant(n, hannan_limit(geometry.spacing_x, geometry.spacing_y));
                }
                else
                {
                    if (m.s.rows() != n || m.s.cols() != n)
                        throw Error(ErrorCode::DimensionMismatch, "S-parameter order " + std::to_string(m.s.rows()) +
                                                                      " does not match " + std::to_string(n) +
                                                                      " elements");
                    profile.efficiencies = efficiency_from_sparams(m.s);
                }
            },
            mode);

        profile.relative_efficiencies = profile.efficiencies / e_ref;
        return profile;
    }

    Eigen::DiagonalMatrix<double, Eigen::Dynamic> efficiency_amplitude_matrix(const CouplingProfile &profile)
    {
        return Eigen::DiagonalMatrix<double, Eigen::Dynamic>(
            profile.efficiencies.array().pow(efficiency_amplitude_exponent).matrix());
    }
}
