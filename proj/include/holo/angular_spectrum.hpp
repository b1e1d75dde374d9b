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

#ifndef HOLO_ANGULAR_SPECTRUM_HPP
#define HOLO_ANGULAR_SPECTRUM_HPP

#include <Eigen/Core>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace holo
{
    // Angles: elevation is measured from the array normal (+z), azimuth from +x in the array plane.
    template <typename Scalar>
    Eigen::Matrix<Scalar, 3, 1> unit_direction(Scalar elevation, Scalar azimuth)
    {
        using std::cos;
        using std::sin;
        return {sin(elevation) * cos(azimuth), sin(elevation) * sin(azimuth), cos(elevation)};
    }

    // Wraps an angle into (-pi, pi].
    double wrap_azimuth(double azimuth);

    struct VmfComponent
    {
        double weight = 1.0;
        double mean_azimuth = 0.0;   // rad, (-pi, pi]
        double mean_elevation = 0.0; // rad, [0, pi]
        double concentration = 0.0;  // alpha >= 0

        Eigen::Vector3d mean_direction() const { return unit_direction(mean_elevation, mean_azimuth); }
    };

    // Below this concentration the density is replaced by its isotropic limit.
    inline constexpr double vmf_isotropic_threshold = 1e-6;

    // Density of a 3-D von Mises-Fisher distribution, given the cosine between the
    // evaluation direction and the mean direction. Written in the overflow-free form
    //   alpha / (2 pi (1 - exp(-2 alpha))) * exp(alpha (cos_angle - 1))
    // which is algebraically equal to alpha / (4 pi sinh alpha) * exp(alpha cos_angle).
    template <typename Scalar>
    Scalar vmf_density_from_cosine(Scalar concentration, Scalar cos_angle)
    {
        using std::exp;
        using std::expm1;
        constexpr Scalar four_pi = Scalar(4) * std::numbers::pi_v<Scalar>;
        if (concentration < Scalar(vmf_isotropic_threshold))
            return Scalar(1) / four_pi;
        const Scalar norm = concentration / (Scalar(2) * std::numbers::pi_v<Scalar> * -expm1(Scalar(-2) * concentration));
        return norm * exp(concentration * (cos_angle - Scalar(1)));
    }

    // Density per steradian at (elevation, azimuth).
    template <typename Scalar = double>
    Scalar vmf_density(const VmfComponent &component, Scalar elevation, Scalar azimuth)
    {
        using std::cos;
        using std::sin;
        const Scalar cos_angle = sin(elevation) * Scalar(std::sin(component.mean_elevation)) *
                                     cos(azimuth - Scalar(component.mean_azimuth)) +
                                 cos(elevation) * Scalar(std::cos(component.mean_elevation));
        return vmf_density_from_cosine(Scalar(component.concentration), cos_angle);
    }

    class AngularPowerSpectrum
    {
    public:
        enum class Kind
        {
            Isotropic,
            VmfMixture
        };

        // A^2 = 1 everywhere.
        static AngularPowerSpectrum isotropic();

        // Weights are required to sum to one within 1e-9; throws NonPositiveInput otherwise.
        static AngularPowerSpectrum mixture(std::vector<VmfComponent> components);

        Kind kind() const { return kind_; }
        const std::vector<VmfComponent> &components() const { return components_; }

        double value(double elevation, double azimuth) const;

        // Same as value() but for a unit direction; avoids the arccos round trip.
        double value_at(const Eigen::Vector3d &direction) const;

        // Rigid rotation of the spectrum about the array normal.
        AngularPowerSpectrum rotated(double azimuth_offset) const;

        // Short stable description, used in plan digests.
        std::string describe() const;

    private:
        Kind kind_ = Kind::Isotropic;
        std::vector<VmfComponent> components_;
        std::vector<Eigen::Vector3d> mean_directions_;
    };

    inline double spectrum_value(const AngularPowerSpectrum &spectrum, double elevation, double azimuth)
    {
        return spectrum.value(elevation, azimuth);
    }

    // alpha = 212.9^2 / spread^2, valid for 0 < spread_deg < 21. Throws SpreadOutOfRange.
    double concentration_from_spread(double spread_deg);

    struct CdlClusterRow
    {
        int cluster_id = 0;
        double power_db = 0.0;
        double aod_deg = 0.0;
        double zod_deg = 0.0;
        double aoa_deg = 0.0;
        double zoa_deg = 0.0;
    };

    struct CdlTable
    {
        std::string name;
        std::vector<CdlClusterRow> rows;
        std::optional<double> asd_deg;
        std::optional<double> asa_deg;
    };

    // Clustered delay line CDL-B angles and powers (TR 38.901 Table 7.7.1-2), with
    // its nominal per-cluster spreads ASD = 10 deg, ASA = 22 deg.
    const CdlTable &cdl_b_table();

    // CSV with header cluster_id,power_db,aod_deg,zod_deg,aoa_deg,zoa_deg. If a sidecar
    // with the same stem and a .json extension exists, asd_deg / asa_deg are read from it.
    // Throws IoError, MalformedInputFile, EmptyTable.
    CdlTable load_cdl_table(const std::string &csv_path);

    // Writes the CSV (and sidecar, when spreads are present) in the format load_cdl_table reads.
    void save_cdl_table(const CdlTable &table, const std::string &csv_path);

    // BS spectrum from (AoD, ZoD), UE spectrum from (AoA, ZoA); weights from linear cluster power.
    std::pair<AngularPowerSpectrum, AngularPowerSpectrum> spectra_from_cdl(const std::vector<CdlClusterRow> &rows,
                                                                           double asd_deg, double asa_deg);
}

#endif
