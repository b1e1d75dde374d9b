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

#ifndef HOLO_EXPERIMENTS_HPP
#define HOLO_EXPERIMENTS_HPP

#include "holo/angular_spectrum.hpp"
#include "holo/array_geometry.hpp"
#include "holo/channel_synth.hpp"
#include "holo/coupling.hpp"

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace holo
{
    struct SpectrumSpec
    {
        enum class Kind
        {
            Isotropic,
            Cdl
        };
        Kind kind = Kind::Isotropic;
        std::string path; // CSV path, or "builtin:CDL-B"
        double asd_deg = 0.0;
        double asa_deg = 0.0;

        std::string label() const;
    };

    struct PatternSpec
    {
        enum class Kind
        {
            Uniform,
            Dipole,
            File
        };
        Kind kind = Kind::Uniform;
        std::string bs_path; // File only
        std::string ue_path;

        std::string label() const;
    };

    struct EfficiencySpec
    {
        enum class Kind
        {
            RelativeEta,
            Hannan,
            SParams
        };
        Kind kind = Kind::RelativeEta;
        double eta = 1.0;
        std::string bs_path; // SParams only
        std::string ue_path;

        std::string label() const;
    };

    // Lengths in wavelengths. Each *_spec list is swept as a cartesian product.
    struct ScenarioConfig
    {
        double carrier_ghz = 3.5;
        std::array<double, 2> bs_aperture{4.0, 4.0};
        std::array<double, 2> ue_aperture{1.0, 1.0};
        std::vector<double> spacing_list{0.5, 0.25, 0.125};
        std::vector<SpectrumSpec> spectrum_spec{SpectrumSpec{}};
        std::vector<PatternSpec> pattern_spec{PatternSpec{}};
        std::vector<EfficiencySpec> efficiency_spec{EfficiencySpec{}};
        double snr_db = 0.0;
        int realizations = 1000;
        int users = 1;
        std::uint64_t seed = 1;
        bool rerandomize_cluster_azimuths = false; // multi-user only
    };

    // fig3-isotropic, fig3-cdlb, fig3-hannan, fig3-dipole, fig4-multiuser. Throws UnknownPreset.
    ScenarioConfig preset(const std::string &name);
    std::vector<std::string> preset_names();

    // JSON with the ScenarioConfig field names; unknown keys are rejected. Throws InvalidConfig.
    ScenarioConfig parse_config(const std::string &json_text);
    ScenarioConfig load_config(const std::string &path);
    std::string config_to_json(const ScenarioConfig &config);

    // Checks ranges and that every spacing divides both apertures. Throws InvalidConfig / NonIntegerGrid.
    void validate_config(const ScenarioConfig &config);

    // BS and UE spectra in their own array frames.
    std::pair<AngularPowerSpectrum, AngularPowerSpectrum> resolve_spectra(const SpectrumSpec &spec);

    // Builds the coupling profiles for one link. Throws on file or dimension errors.
    std::pair<CouplingProfile, CouplingProfile> resolve_coupling(const PatternSpec &pattern,
                                                                 const EfficiencySpec &efficiency,
                                                                 const ArrayGeometry &bs, const ArrayGeometry &ue);

    // Plan of the first (spacing, spectrum, pattern, efficiency) combination of the config.
    SynthesisPlan plan_from_config(const ScenarioConfig &config);

    struct SweepRow
    {
        double spacing_wl = 0.0;
        std::string efficiency_mode;
        std::string spectrum;
        std::string pattern;
        double mean_bits = 0.0;
        double std_bits = 0.0;
        int realizations = 0;
        std::uint64_t seed = 0;
        int not_converged = 0;
    };

    struct SweepResult
    {
        ScenarioConfig config;
        std::vector<SweepRow> rows; // spacing-major, then spectrum, pattern, efficiency
    };

    // Per-user seed for channel coefficients; user 0 uses the run seed itself.
    std::uint64_t user_seed(std::uint64_t seed, int user);

    // Seed of the user drop of one realization.
    std::uint64_t drop_seed(std::uint64_t seed, std::uint64_t realization);

    // Sample mean and standard deviation (n - 1), pairwise summation.
    std::pair<double, double> mean_and_std(std::span<const double> values);

    SweepResult run_single_user_sweep(const ScenarioConfig &config, int jobs = 1);
    SweepResult run_multi_user_sweep(const ScenarioConfig &config, int jobs = 1);

    // Dispatches on config.users.
    SweepResult run_sweep(const ScenarioConfig &config, int jobs = 1);

    enum class OutputFormat
    {
        Csv,
        Json
    };

    inline constexpr const char *sweep_csv_header = "spacing_wl,efficiency_mode,spectrum,pattern,mean_bits,std_bits,realizations,seed";

    std::string format_csv(const SweepResult &result);
    std::string format_json(const SweepResult &result);

    // Throws IoError.
    void emit(const SweepResult &result, const std::string &path, OutputFormat format);

    // Inverse of the JSON emitter. Throws IoError, MalformedInputFile.
    SweepResult load_result_json(const std::string &path);
}

#endif
