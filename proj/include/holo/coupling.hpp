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

#ifndef HOLO_COUPLING_HPP
#define HOLO_COUPLING_HPP

#include "holo/array_geometry.hpp"

#include <Eigen/Core>
#include <complex>
#include <string>
#include <variant>
#include <vector>

namespace holo
{
    // Embedded element pattern, power-normalised so that (1/4pi) ∫ |F|^2 dOmega = 1.
    class ElementPattern
    {
    public:
        enum class Kind
        {
            Uniform,
            AnalyticDipole, // sqrt(3/2) sin(theta), null along the array normal
            Gridded
        };

        static ElementPattern uniform();
        static ElementPattern dipole();

        // Samples are indexed [elevation, azimuth]. Elevations (deg) must be strictly increasing
        // inside [0, 180] and cover [0, 90]; azimuths (deg) strictly increasing within one turn
        // starting at or after -180. The pattern is zero outside the elevation coverage.
        // Throws MalformedPatternFile on grid violations and DegenerateSpectrum on an all-zero pattern.
        static ElementPattern gridded(std::vector<double> elevations_deg, std::vector<double> azimuths_deg,
                                      Eigen::MatrixXcd samples, bool normalise = true);

        Kind kind() const { return kind_; }
        const std::vector<double> &elevations_deg() const { return elevations_deg_; }
        const std::vector<double> &azimuths_deg() const { return azimuths_deg_; }
        const Eigen::MatrixXcd &samples() const { return samples_; }

        // Complex gain at (elevation, azimuth) in radians. Gridded patterns use bilinear
        // interpolation with azimuth wraparound.
        std::complex<double> gain(double elevation, double azimuth) const;

        // (1/4pi) ∫ |F|^2 sin(theta) dtheta dphi; 1 for every normalised pattern.
        double power_integral() const;

    private:
        Kind kind_ = Kind::Uniform;
        std::vector<double> elevations_deg_;
        std::vector<double> azimuths_deg_;
        Eigen::MatrixXcd samples_;
    };

    inline std::complex<double> pattern_gain(const std::vector<ElementPattern> &patterns, std::size_t element_index,
                                             double elevation, double azimuth)
    {
        const auto &p = patterns.size() == 1 ? patterns.front() : patterns.at(element_index);
        return p.gain(elevation, azimuth);
    }

    // CSV with header element_index,theta_deg,phi_deg,re,im. Each element must provide the full
    // cartesian grid; element indices must run 0..M-1. Patterns are renormalised on load.
    // Throws IoError, EmptyFile, MalformedPatternFile.
    std::vector<ElementPattern> load_pattern_file(const std::string &path);

    void save_pattern_file(const std::vector<ElementPattern> &patterns, const std::string &path);

    // CSV with header row,col,re,im and all N^2 entries. Throws IoError, EmptyFile, MalformedInputFile.
    Eigen::MatrixXcd load_sparams_file(const std::string &path);

    void save_sparams_file(const Eigen::MatrixXcd &s, const std::string &path);

    // e_p = 1 - sum_q |S_pq|^2. Throws NonPassive if any row sum exceeds 1 + 1e-9.
    Eigen::VectorXd efficiency_from_sparams(const Eigen::MatrixXcd &s);

    // Hannan's dense-array bound pi dx dy / lambda^2 (spacings in wavelengths), clamped at 1.
    double hannan_limit(double spacing_x, double spacing_y);

    // Hannan bound of the half-wavelength reference array, pi / 4.
    double reference_efficiency();

    struct RelativeEta
    {
        double eta = 1.0;
    };
    struct HannanLimited
    {
    };
    struct FromSParams
    {
        Eigen::MatrixXcd s;
    };
    using EfficiencyMode = std::variant<RelativeEta, HannanLimited, FromSParams>;

    struct CouplingProfile
    {
        std::vector<ElementPattern> patterns; // one shared pattern, or one per element
        Eigen::VectorXd efficiencies;         // e_p in [0, 1]
        Eigen::VectorXd relative_efficiencies; // eta_p = e_p / (pi / 4)

        const ElementPattern &pattern(std::size_t p) const { return patterns.size() == 1 ? patterns.front() : patterns[p]; }
    };

    // Throws DimensionMismatch, NonPassive, InvalidConfig (eta outside [0, 1]).
    CouplingProfile build_coupling_profile(const ArrayGeometry &geometry, std::vector<ElementPattern> patterns,
                                           const EfficiencyMode &mode);

    // Efficiencies are power ratios; the channel applies them in the amplitude domain.
    inline constexpr double efficiency_amplitude_exponent = 0.5;

    // diag(e_p ^ efficiency_amplitude_exponent)
    Eigen::DiagonalMatrix<double, Eigen::Dynamic> efficiency_amplitude_matrix(const CouplingProfile &profile);
}

#endif
