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

#include "holo/angular_spectrum.hpp"
#include "holo/error.hpp"
#include "csv.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace holo
{
    namespace
    {
        constexpr double deg = std::numbers::pi / 180.0;
    }

    double wrap_azimuth(double azimuth)
    {
        constexpr double two_pi = 2.0 * std::numbers::pi;
        double a = std::remainder(azimuth, two_pi); // [-pi, pi]
        if (a <= -std::numbers::pi)
            a += two_pi;
        return a;
    }

    AngularPowerSpectrum AngularPowerSpectrum::isotropic()
    {
        return AngularPowerSpectrum{};
    }

    AngularPowerSpectrum AngularPowerSpectrum::mixture(std::vector<VmfComponent> components)
    {
        if (components.empty())
            throw Error(ErrorCode::EmptyTable, "VMF mixture needs at least one component");
        double total = 0.0;
        for (auto &c : components)
        {
            if (!(c.weight > 0.0) || !(c.concentration >= 0.0) || !std::isfinite(c.concentration))
                throw Error(ErrorCode::NonPositiveInput, "VMF weights must be > 0 and concentrations >= 0");
            if (!(c.mean_elevation >= 0.0 && c.mean_elevation <= std::numbers::pi))
                throw Error(ErrorCode::NonPositiveInput, "VMF mean elevation must lie in [0, pi]");
            c.mean_azimuth = wrap_azimuth(c.mean_azimuth);
            total += c.weight;
        }
        if (std::abs(total - 1.0) > 1e-9)
            throw Error(ErrorCode::NonPositiveInput, "VMF mixture weights must sum to 1");

        AngularPowerSpectrum s;
        s.kind_ = Kind::VmfMixture;
        s.components_ = std::move(components);
        s.mean_directions_.reserve(s.components_.size());
        for (const auto &c : s.components_)
            s.mean_directions_.push_back(c.mean_direction());
        return s;
    }

    double AngularPowerSpectrum::value(double elevation, double azimuth) const
    {
        if (kind_ == Kind::Isotropic)
            return 1.0;
        double sum = 0.0;
        for (const auto &c : components_)
            sum += c.weight * vmf_density(c, elevation, azimuth);
        return sum;
    }

    double AngularPowerSpectrum::value_at(const Eigen::Vector3d &direction) const
    {
        if (kind_ == Kind::Isotropic)
            return 1.0;
        double sum = 0.0;
        for (std::size_t i = 0; i < components_.size(); ++i)
            sum += components_[i].weight *
                   vmf_density_from_cosine(components_[i].concentration, direction.dot(mean_directions_[i]));
        return sum;
    }

    AngularPowerSpectrum AngularPowerSpectrum::rotated(double azimuth_offset) const
    {
        if (kind_ == Kind::Isotropic)
            return *this;
        auto comps = components_;
        for (auto &c : comps)
            c.mean_azimuth += azimuth_offset;
        return mixture(std::move(comps));
    }

    std::string AngularPowerSpectrum::describe() const
    {
        if (kind_ == Kind::Isotropic)
            return "isotropic";
        std::ostringstream os;
        os << std::setprecision(17) << "vmf[" << components_.size() << "]";
        for (const auto &c : components_)
            os << ";" << c.weight << "," << c.mean_azimuth << "," << c.mean_elevation << "," << c.concentration;
        return os.str();
    }

    double concentration_from_spread(double spread_deg)
    {
        if (!(spread_deg > 0.0) || !(spread_deg < 21.0))
            throw Error(ErrorCode::SpreadOutOfRange,
                        "angular spread " + std::to_string(spread_deg) + " deg outside (0, 21) deg");
        return 212.9 * 212.9 / (spread_deg * spread_deg);
    }

    const CdlTable &cdl_b_table()
    {
        static const CdlTable table = []
        {
            CdlTable t;
            t.name = "CDL-B";
            t.asd_deg = 10.0;
            t.asa_deg = 22.0;
            // cluster, power dB, AoD, ZoD, AoA, ZoA
            t.rows = {
                {1, 0.0, 9.3, 105.8, -173.3, 78.9},
                {2, -2.2, 9.3, 105.8, -173.3, 78.9},
                {3, -4.0, 9.3, 105.8, -173.3, 78.9},
                {4, -3.2, -34.1, 115.3, 125.5, 63.3},
                {5, -9.8, -65.4, 119.3, -88.0, 59.9},
                {6, -1.2, -11.4, 103.2, 155.1, 67.5},
                {7, -3.4, -11.4, 103.2, 155.1, 67.5},
                {8, -5.2, -11.4, 103.2, 155.1, 67.5},
                {9, -7.6, -67.2, 118.2, -89.8, 82.6},
                {10, -3.0, 52.5, 102.0, 132.1, 66.3},
                {11, -8.9, -72.0, 100.4, -83.6, 61.6},
                {12, -9.0, 74.3, 98.3, 95.3, 58.0},
                {13, -4.8, -52.2, 103.4, 103.7, 78.2},
                {14, -5.7, -50.5, 102.5, -87.8, 82.0},
                {15, -7.5, 61.4, 101.4, -92.5, 62.4},
                {16, -1.9, 30.6, 103.0, -139.1, 78.0},
                {17, -7.6, -72.5, 100.0, -90.6, 60.9},
                {18, -12.2, -90.6, 115.2, 58.6, 82.9},
                {19, -9.8, -77.6, 100.5, -79.0, 60.8},
                {20, -11.4, -82.6, 119.6, 65.8, 57.3},
                {21, -14.9, -103.6, 118.7, 52.7, 59.9},
                {22, -9.2, 75.6, 117.8, 88.7, 60.1},
                {23, -11.3, -77.6, 115.7, -60.4, 62.3},
            };
            return t;
        }();
        return table;
    }

    namespace
    {
        constexpr const char *cdl_header = "cluster_id,power_db,aod_deg,zod_deg,aoa_deg,zoa_deg";

        std::filesystem::path sidecar_path(const std::string &csv_path)
        {
            std::filesystem::path p(csv_path);
            p.replace_extension(".json");
            return p;
        }
    }

    CdlTable load_cdl_table(const std::string &csv_path)
    {
        const auto csv = detail::read_numeric_csv(csv_path, cdl_header, ErrorCode::MalformedInputFile);
        CdlTable t;
        t.name = std::filesystem::path(csv_path).stem().string();
        for (std::size_t i = 0; i < csv.rows.size(); ++i)
        {
            const auto &r = csv.rows[i];
            if (!detail::is_integral(r[0]))
                throw Error(ErrorCode::MalformedInputFile,
                            csv_path + ":" + std::to_string(csv.line_numbers[i]) + ": cluster_id must be an integer");
            if (r[3] < 0.0 || r[3] > 180.0 || r[5] < 0.0 || r[5] > 180.0)
                throw Error(ErrorCode::MalformedInputFile,
                            csv_path + ":" + std::to_string(csv.line_numbers[i]) + ": zenith angle outside [0, 180]");
            t.rows.push_back({int(r[0]), r[1], r[2], r[3], r[4], r[5]});
        }
        if (t.rows.empty())
            throw Error(ErrorCode::EmptyTable, csv_path + " has no cluster rows");

        const auto side = sidecar_path(csv_path);
        if (std::filesystem::exists(side))
        {
            std::ifstream in(side);
            nlohmann::json j;
            try
            {
                in >> j;
            }
            catch (const nlohmann::json::exception &e)
            {
                throw Error(ErrorCode::MalformedInputFile, side.string() + ": " + e.what());
            }
            if (j.contains("asd_deg"))
                t.asd_deg = j.at("asd_deg").get<double>();
            if (j.contains("asa_deg"))
                t.asa_deg = j.at("asa_deg").get<double>();
            if (j.contains("name"))
                t.name = j.at("name").get<std::string>();
        }
        return t;
    }

    void save_cdl_table(const CdlTable &table, const std::string &csv_path)
    {
        std::ofstream out(csv_path, std::ios::binary);
        if (!out)
            throw Error(ErrorCode::IoError, "cannot write '" + csv_path + "'");
        out << cdl_header << '\n';
        using detail::format_shortest;
        for (const auto &r : table.rows)
            out << r.cluster_id << ',' << format_shortest(r.power_db) << ',' << format_shortest(r.aod_deg) << ','
                << format_shortest(r.zod_deg) << ',' << format_shortest(r.aoa_deg) << ','
                << format_shortest(r.zoa_deg) << '\n';
        if (table.asd_deg || table.asa_deg)
        {
            nlohmann::json j;
            j["name"] = table.name;
            if (table.asd_deg)
                j["asd_deg"] = *table.asd_deg;
            if (table.asa_deg)
                j["asa_deg"] = *table.asa_deg;
            std::ofstream side(sidecar_path(csv_path), std::ios::binary);
            side << j.dump(2) << '\n';
        }
    }

    std::pair<AngularPowerSpectrum, AngularPowerSpectrum> spectra_from_cdl(const std::vector<CdlClusterRow> &rows,
                                                                           double asd_deg, double asa_deg)
    {
        if (rows.empty())
            throw Error(ErrorCode::EmptyTable, "CDL table has no rows");
        const double alpha_bs = concentration_from_spread(asd_deg);
        const double alpha_ue = concentration_from_spread(asa_deg);

        double total = 0.0;
        for (const auto &r : rows)
            total += std::pow(10.0, r.power_db / 10.0);

        std::vector<VmfComponent> bs, ue;
        bs.reserve(rows.size());
        ue.reserve(rows.size());
        for (const auto &r : rows)
        {
            const double w = std::pow(10.0, r.power_db / 10.0) / total;
            bs.push_back({w, r.aod_deg * deg, r.zod_deg * deg, alpha_bs});
            ue.push_back({w, r.aoa_deg * deg, r.zoa_deg * deg, alpha_ue});
        }

        // Re-normalise so rounding in the division above cannot trip the 1e-9 sum check.
        auto renormalise = [](std::vector<VmfComponent> &v)
        {
            double s = 0.0;
            for (const auto &c : v)
                s += c.weight;
            for (auto &c : v)
                c.weight /= s;
        };
        renormalise(bs);
        renormalise(ue);
        return {AngularPowerSpectrum::mixture(std::move(bs)), AngularPowerSpectrum::mixture(std::move(ue))};
    }
}
