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

// holo command line: lattice tables, channel dumps, capacity runs and preset sweeps.
// Exit codes: 0 ok, 2 configuration error, 3 input-file error, 4 numerical failure.

#include "holo/error.hpp"
#include "holo/experiments.hpp"
#include "holo/plane_wave_lattice.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>

namespace
{
    constexpr int exit_config = 2;
    constexpr int exit_input = 3;
    constexpr int exit_numerical = 4;

    int exit_code(holo::ErrorCategory c)
    {
        switch (c)
        {
        case holo::ErrorCategory::Config:
            return exit_config;
        case holo::ErrorCategory::InputFile:
            return exit_input;
        case holo::ErrorCategory::Numerical:
            return exit_numerical;
        }
        return exit_config;
    }

    void write_text(const std::string &text, const std::string &path)
    {
        if (path.empty() || path == "-")
        {
            std::cout << text;
            return;
        }
        std::FILE *f = std::fopen(path.c_str(), "wb");
        if (!f)
            throw holo::Error(holo::ErrorCode::IoError, "cannot write '" + path + "'");
        const bool ok = std::fwrite(text.data(), 1, text.size(), f) == text.size();
        if (std::fclose(f) != 0 || !ok)
            throw holo::Error(holo::ErrorCode::IoError, "write to '" + path + "' failed");
    }

    holo::OutputFormat pick_format(const std::string &format, const std::string &out)
    {
        if (format == "json")
            return holo::OutputFormat::Json;
        if (format == "csv")
            return holo::OutputFormat::Csv;
        const bool json_ext = out.size() >= 5 && out.compare(out.size() - 5, 5, ".json") == 0;
        return json_ext ? holo::OutputFormat::Json : holo::OutputFormat::Csv;
    }

    std::string render(const holo::SweepResult &r, holo::OutputFormat f)
    {
        return f == holo::OutputFormat::Json ? holo::format_json(r) : holo::format_csv(r);
    }

    void run_lattice(const std::string &config_path, const std::string &end)
    {
        const auto c = holo::load_config(config_path);
        holo::validate_config(c);
        const auto spectra = holo::resolve_spectra(c.spectrum_spec.front());
        const bool bs = end == "bs";
        const auto &aperture = bs ? c.bs_aperture : c.ue_aperture;
        const auto lattice = holo::build_spectral_lattice(aperture[0], aperture[1], bs ? spectra.first : spectra.second);
        std::string out = "ix,iy,integral\n";
        char buf[64];
        for (std::size_t k = 0; k < lattice.size(); ++k)
        {
            std::snprintf(buf, sizeof buf, "%.17g", lattice.marginal_integrals(Eigen::Index(k)));
            out += std::to_string(lattice.indices[k].ix) + "," + std::to_string(lattice.indices[k].iy) + "," + buf + "\n";
        }
        write_text(out, "-");
    }

    void run_synth(const std::string &config_path, const std::string &out, std::uint64_t realization)
    {
        const auto c = holo::load_config(config_path);
        const auto plan = holo::plan_from_config(c);
        const auto h = holo::sample_channel(plan, c.seed, realization);
        holo::save_channel_csv(h.matrix, out);
    }

    void run_capacity(const std::string &mode, const std::string &config_path, int jobs, const std::string &out,
                      const std::string &format)
    {
        auto c = holo::load_config(config_path);
        holo::SweepResult r;
        if (mode == "su")
        {
            c.users = 1;
            r = holo::run_single_user_sweep(c, jobs);
        }
        else
        {
            if (c.users < 2)
                throw holo::Error(holo::ErrorCode::InvalidConfig, "'capacity mu' needs users >= 2 in the config");
            r = holo::run_multi_user_sweep(c, jobs);
        }
        write_text(render(r, pick_format(format, out)), out);
    }

    void run_sweep(const std::string &preset, const std::string &config_path, std::optional<std::uint64_t> seed,
                   std::optional<int> realizations, int jobs, const std::string &out, const std::string &format)
    {
        if (preset.empty() == config_path.empty())
            throw holo::Error(holo::ErrorCode::InvalidConfig, "give exactly one of --preset or --config");
        auto c = preset.empty() ? holo::load_config(config_path) : holo::preset(preset);
        if (seed)
            c.seed = *seed;
        if (realizations)
            c.realizations = *realizations;
        const auto r = holo::run_sweep(c, jobs);
        write_text(render(r, pick_format(format, out)), out);
    }
}

int main(int argc, char **argv)
{
    CLI::App app{"holo: holographic MIMO channel synthesis and capacity evaluation"};
    app.require_subcommand(1);

    std::string config_path, out = "-", end = "bs", format, preset, cap_mode;
    int jobs = 1;
    std::uint64_t realization = 0;
    std::optional<std::uint64_t> seed;
    std::optional<int> realizations;

    auto *lattice = app.add_subcommand("lattice", "Print the spectral lattice integrals (ix,iy,integral)");
    lattice->add_option("--config", config_path, "Scenario JSON")->required();
    lattice->add_option("--end", end, "Link end")->check(CLI::IsMember({"bs", "ue"}));

    auto *synth = app.add_subcommand("synth", "Draw one channel realization to CSV (row,col,re,im)");
    synth->add_option("--config", config_path, "Scenario JSON")->required();
    synth->add_option("--out", out, "Output CSV")->required();
    synth->add_option("--realization", realization, "Realization index");

    auto *capacity = app.add_subcommand("capacity", "Ergodic capacity of a scenario");
    capacity->add_option("mode", cap_mode, "su or mu")->required()->check(CLI::IsMember({"su", "mu"}));
    capacity->add_option("--config", config_path, "Scenario JSON")->required();
    capacity->add_option("--out", out, "Output file ('-' for stdout)");
    capacity->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    capacity->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);

    auto *sweep = app.add_subcommand("sweep", "Monte Carlo spacing sweep from a preset or config");
    sweep->add_option("--preset", preset, "Preset name")->check(CLI::IsMember(holo::preset_names()));
    sweep->add_option("--config", config_path, "Scenario JSON");
    sweep->add_option("--seed", seed, "Override the seed");
    sweep->add_option("--realizations", realizations, "Override the realization count")->check(CLI::PositiveNumber);
    sweep->add_option("--out", out, "Output file ('-' for stdout)");
    sweep->add_option("--format", format, "csv or json (default: from --out extension)")
        ->check(CLI::IsMember({"csv", "json"}));
    sweep->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int code = app.exit(e);
        return code == 0 ? 0 : exit_config;
    }

    try
    {
        if (*lattice)
            run_lattice(config_path, end);
        else if (*synth)
            run_synth(config_path, out, realization);
        else if (*capacity)
            run_capacity(cap_mode, config_path, jobs, out, format);
        else if (*sweep)
            run_sweep(preset, config_path, seed, realizations, jobs, out, format);
    }
    catch (const holo::Error &e)
    {
        std::cerr << "holo: " << e.what() << "\n";
        return exit_code(e.category());
    }
    catch (const std::exception &e)
    {
        std::cerr << "holo: " << e.what() << "\n";
        return exit_numerical;
    }
    return 0;
}
