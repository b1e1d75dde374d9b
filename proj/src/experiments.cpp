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

#include "holo/experiments.hpp"
#include "holo/capacity.hpp"
#include "holo/error.hpp"
#include "holo/philox.hpp"
#include "parallel.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

namespace holo
{
    using nlohmann::json;

    namespace
    {
        std::string fmt9(double v)
        {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.9g", v);
            return buf;
        }

        [[noreturn]] void config_error(const std::string &msg)
        {
            throw Error(ErrorCode::InvalidConfig, msg);
        }

        void reject_unknown(const json &j, const std::set<std::string> &allowed, const std::string &where)
        {
            for (const auto &[key, value] : j.items())
                if (!allowed.count(key))
                    config_error("unknown key '" + key + "' in " + where);
        }

        double get_number(const json &j, const std::string &key)
        {
            if (!j.at(key).is_number())
                config_error("'" + key + "' must be a number");
            return j.at(key).get<double>();
        }

        std::string get_string(const json &j, const std::string &key)
        {
            if (!j.at(key).is_string())
                config_error("'" + key + "' must be a string");
            return j.at(key).get<std::string>();
        }

        std::array<double, 2> get_aperture(const json &j, const std::string &key)
        {
            const auto &v = j.at(key);
            if (v.is_number())
                return {v.get<double>(), v.get<double>()};
            if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
                return {v[0].get<double>(), v[1].get<double>()};
            config_error("'" + key + "' must be a number or a [x, y] pair");
        }

        SpectrumSpec parse_spectrum(const json &j)
        {
            SpectrumSpec s;
            if (j.is_string() && j.get<std::string>() == "isotropic")
                return s;
            if (!j.is_object())
                config_error("spectrum_spec entries are \"isotropic\" or {\"kind\": \"cdl\", ...}");
            reject_unknown(j, {"kind", "path", "asd_deg", "asa_deg"}, "spectrum_spec");
            const auto kind = get_string(j, "kind");
            if (kind == "isotropic")
                return s;
            if (kind != "cdl")
                config_error("unknown spectrum kind '" + kind + "'");
            s.kind = SpectrumSpec::Kind::Cdl;
            s.path = j.contains("path") ? get_string(j, "path") : std::string("builtin:CDL-B");
            if (j.contains("asd_deg"))
                s.asd_deg = get_number(j, "asd_deg");
            if (j.contains("asa_deg"))
                s.asa_deg = get_number(j, "asa_deg");
            return s;
        }

        PatternSpec parse_pattern(const json &j)
        {
            PatternSpec p;
            if (j.is_string())
            {
                const auto name = j.get<std::string>();
                if (name == "uniform")
                    return p;
                if (name == "dipole")
                {
                    p.kind = PatternSpec::Kind::Dipole;
                    return p;
                }
                config_error("unknown pattern '" + name + "'");
            }
            if (!j.is_object())
                config_error("pattern_spec entries are \"uniform\", \"dipole\" or {\"kind\": \"file\", ...}");
            reject_unknown(j, {"kind", "bs", "ue"}, "pattern_spec");
            const auto kind = get_string(j, "kind");
            if (kind == "uniform")
                return p;
            if (kind == "dipole")
            {
                p.kind = PatternSpec::Kind::Dipole;
                return p;
            }
            if (kind != "file")
                config_error("unknown pattern kind '" + kind + "'");
            p.kind = PatternSpec::Kind::File;
            if (j.contains("bs"))
                p.bs_path = get_string(j, "bs");
            if (j.contains("ue"))
                p.ue_path = get_string(j, "ue");
            if (p.bs_path.empty() && p.ue_path.empty())
                config_error("file pattern needs a 'bs' or 'ue' path");
            return p;
        }

        EfficiencySpec parse_efficiency(const json &j)
        {
            EfficiencySpec e;
            if (j.is_string())
            {
                if (j.get<std::string>() != "hannan")
                    config_error("unknown efficiency mode '" + j.get<std::string>() + "'");
                e.kind = EfficiencySpec::Kind::Hannan;
                return e;
            }
            if (!j.is_object() || j.size() != 1)
                config_error("efficiency_spec entries are {\"relative_eta\": x}, \"hannan\" or {\"sparams\": {...}}");
            reject_unknown(j, {"relative_eta", "sparams", "hannan"}, "efficiency_spec");
            if (j.contains("relative_eta"))
            {
                e.eta = get_number(j, "relative_eta");
                return e;
            }
            if (j.contains("hannan"))
            {
                e.kind = EfficiencySpec::Kind::Hannan;
                return e;
            }
            const auto &s = j.at("sparams");
            if (!s.is_object())
                config_error("'sparams' must be an object with 'bs' / 'ue' paths");
            reject_unknown(s, {"bs", "ue"}, "sparams");
            e.kind = EfficiencySpec::Kind::SParams;
            if (s.contains("bs"))
                e.bs_path = get_string(s, "bs");
            if (s.contains("ue"))
                e.ue_path = get_string(s, "ue");
            if (e.bs_path.empty() && e.ue_path.empty())
                config_error("'sparams' needs a 'bs' or 'ue' path");
            return e;
        }

        template <typename T, typename Parse>
        std::vector<T> parse_list(const json &j, Parse parse)
        {
            std::vector<T> out;
            if (j.is_array())
            {
                for (const auto &item : j)
                    out.push_back(parse(item));
                if (out.empty())
                    config_error("spec lists must not be empty");
            }
            else
                out.push_back(parse(j));
            return out;
        }

        json spectrum_json(const SpectrumSpec &s)
        {
            if (s.kind == SpectrumSpec::Kind::Isotropic)
                return "isotropic";
            json j{{"kind", "cdl"}, {"path", s.path}};
            if (s.asd_deg > 0.0)
                j["asd_deg"] = s.asd_deg;
            if (s.asa_deg > 0.0)
                j["asa_deg"] = s.asa_deg;
            return j;
        }

        json pattern_json(const PatternSpec &p)
        {
            switch (p.kind)
            {
            case PatternSpec::Kind::Uniform:
                return "uniform";
            case PatternSpec::Kind::Dipole:
                return "dipole";
            case PatternSpec::Kind::File:
                break;
            }
            json j{{"kind", "file"}};
            if (!p.bs_path.empty())
                j["bs"] = p.bs_path;
            if (!p.ue_path.empty())
                j["ue"] = p.ue_path;
            return j;
        }

        json efficiency_json(const EfficiencySpec &e)
        {
            switch (e.kind)
            {
            case EfficiencySpec::Kind::RelativeEta:
                return json{{"relative_eta", e.eta}};
            case EfficiencySpec::Kind::Hannan:
                return "hannan";
            case EfficiencySpec::Kind::SParams:
                break;
            }
            json s = json::object();
            if (!e.bs_path.empty())
                s["bs"] = e.bs_path;
            if (!e.ue_path.empty())
                s["ue"] = e.ue_path;
            return json{{"sparams", s}};
        }

        json config_json(const ScenarioConfig &c)
        {
            json j;
            j["carrier_ghz"] = c.carrier_ghz;
            j["bs_aperture"] = {c.bs_aperture[0], c.bs_aperture[1]};
            j["ue_aperture"] = {c.ue_aperture[0], c.ue_aperture[1]};
            j["spacing_list"] = c.spacing_list;
            j["spectrum_spec"] = json::array();
            for (const auto &s : c.spectrum_spec)
                j["spectrum_spec"].push_back(spectrum_json(s));
            j["pattern_spec"] = json::array();
            for (const auto &p : c.pattern_spec)
                j["pattern_spec"].push_back(pattern_json(p));
            j["efficiency_spec"] = json::array();
            for (const auto &e : c.efficiency_spec)
                j["efficiency_spec"].push_back(efficiency_json(e));
            j["snr_db"] = c.snr_db;
            j["realizations"] = c.realizations;
            j["users"] = c.users;
            j["seed"] = c.seed;
            j["rerandomize_cluster_azimuths"] = c.rerandomize_cluster_azimuths;
            return j;
        }

        ScenarioConfig config_from_json(const json &j)
        {
            if (!j.is_object())
                config_error("config must be a JSON object");
            reject_unknown(j,
                           {"carrier_ghz", "bs_aperture", "ue_aperture", "spacing_list", "spectrum_spec",
                            "pattern_spec", "efficiency_spec", "snr_db", "realizations", "users", "seed",
                            "rerandomize_cluster_azimuths"},
                           "config");
            ScenarioConfig c;
            try
            {
                if (j.contains("carrier_ghz"))
                    c.carrier_ghz = get_number(j, "carrier_ghz");
                if (j.contains("bs_aperture"))
                    c.bs_aperture = get_aperture(j, "bs_aperture");
                if (j.contains("ue_aperture"))
                    c.ue_aperture = get_aperture(j, "ue_aperture");
                if (j.contains("spacing_list"))
                {
                    c.spacing_list.clear();
                    for (const auto &v : j.at("spacing_list"))
                    {
                        if (!v.is_number())
                            config_error("'spacing_list' entries must be numbers");
                        c.spacing_list.push_back(v.get<double>());
                    }
                }
                if (j.contains("spectrum_spec"))
                    c.spectrum_spec = parse_list<SpectrumSpec>(j.at("spectrum_spec"), parse_spectrum);
                if (j.contains("pattern_spec"))
                    c.pattern_spec = parse_list<PatternSpec>(j.at("pattern_spec"), parse_pattern);
                if (j.contains("efficiency_spec"))
                    c.efficiency_spec = parse_list<EfficiencySpec>(j.at("efficiency_spec"), parse_efficiency);
                if (j.contains("snr_db"))
                    c.snr_db = get_number(j, "snr_db");
                if (j.contains("realizations"))
                {
                    if (!j.at("realizations").is_number_integer())
                        config_error("'realizations' must be an integer");
                    c.realizations = j.at("realizations").get<int>();
                }
                if (j.contains("users"))
                {
                    if (!j.at("users").is_number_integer())
                        config_error("'users' must be an integer");
                    c.users = j.at("users").get<int>();
                }
                if (j.contains("seed"))
                {
                    if (!j.at("seed").is_number_unsigned())
                        config_error("'seed' must be a non-negative integer");
                    c.seed = j.at("seed").get<std::uint64_t>();
                }
                if (j.contains("rerandomize_cluster_azimuths"))
                {
                    if (!j.at("rerandomize_cluster_azimuths").is_boolean())
                        config_error("'rerandomize_cluster_azimuths' must be a boolean");
                    c.rerandomize_cluster_azimuths = j.at("rerandomize_cluster_azimuths").get<bool>();
                }
            }
            catch (const json::exception &e)
            {
                config_error(std::string("config: ") + e.what());
            }
            return c;
        }

        std::string resolve_path(const std::string &path, const std::filesystem::path &base)
        {
            if (path.empty() || path.rfind("builtin:", 0) == 0)
                return path;
            const std::filesystem::path p(path);
            return p.is_absolute() ? path : (base / p).lexically_normal().string();
        }

        CdlTable resolve_table(const SpectrumSpec &spec)
        {
            if (spec.path == "builtin:CDL-B")
                return cdl_b_table();
            if (spec.path.rfind("builtin:", 0) == 0)
                config_error("unknown builtin table '" + spec.path + "'");
            return load_cdl_table(spec.path);
        }

        std::pair<double, double> resolve_spreads(const SpectrumSpec &spec, const CdlTable &table)
        {
            const double asd = spec.asd_deg > 0.0 ? spec.asd_deg : table.asd_deg.value_or(0.0);
            const double asa = spec.asa_deg > 0.0 ? spec.asa_deg : table.asa_deg.value_or(0.0);
            if (!(asd > 0.0) || !(asa > 0.0))
                config_error("CDL spectrum needs asd_deg and asa_deg (config or table sidecar)");
            return {asd, asa};
        }

        std::vector<ElementPattern> patterns_for(const PatternSpec &p, const std::string &path)
        {
            switch (p.kind)
            {
            case PatternSpec::Kind::Uniform:
                return {ElementPattern::uniform()};
            case PatternSpec::Kind::Dipole:
                return {ElementPattern::dipole()};
            case PatternSpec::Kind::File:
                break;
            }
            if (path.empty())
                return {ElementPattern::uniform()};
            return load_pattern_file(path);
        }

        EfficiencyMode mode_for(const EfficiencySpec &e, const std::string &path)
        {
            switch (e.kind)
            {
            case EfficiencySpec::Kind::RelativeEta:
                return RelativeEta{e.eta};
            case EfficiencySpec::Kind::Hannan:
                return HannanLimited{};
            case EfficiencySpec::Kind::SParams:
                break;
            }
            if (path.empty())
                return RelativeEta{1.0};
            return FromSParams{load_sparams_file(path)};
        }

        double pairwise_sum(std::span<const double> v)
        {
            if (v.size() <= 8)
            {
                double s = 0.0;
                for (double x : v)
                    s += x;
                return s;
            }
            const std::size_t half = v.size() / 2;
            return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
        }

        std::size_t combination_count(const ScenarioConfig &c)
        {
            return c.spectrum_spec.size() * c.pattern_spec.size() * c.efficiency_spec.size();
        }

        // Row index in canonical order (spacing, spectrum, pattern, efficiency).
        std::size_t row_index(const ScenarioConfig &c, std::size_t sp, std::size_t s, std::size_t p, std::size_t e)
        {
            return ((sp * c.spectrum_spec.size() + s) * c.pattern_spec.size() + p) * c.efficiency_spec.size() + e;
        }

        SweepRow make_row(const ScenarioConfig &c, std::size_t sp, std::size_t s, std::size_t p, std::size_t e,
                          std::span<const double> caps, int not_converged)
        {
            SweepRow row;
            row.spacing_wl = c.spacing_list[sp];
            row.spectrum = c.spectrum_spec[s].label();
            row.pattern = c.pattern_spec[p].label();
            row.efficiency_mode = c.efficiency_spec[e].label();
            std::tie(row.mean_bits, row.std_bits) = mean_and_std(caps);
            row.realizations = int(caps.size());
            row.seed = c.seed;
            row.not_converged = not_converged;
            return row;
        }

        struct Geometries
        {
            ArrayGeometry bs;
            ArrayGeometry ue;
        };

        Geometries geometries_for(const ScenarioConfig &c, double spacing)
        {
            return {build_planar_array(c.bs_aperture[0], c.bs_aperture[1], spacing, spacing),
                    build_planar_array(c.ue_aperture[0], c.ue_aperture[1], spacing, spacing)};
        }
    }

    std::string SpectrumSpec::label() const
    {
        if (kind == Kind::Isotropic)
            return "isotropic";
        std::string name = path == "builtin:CDL-B" ? std::string("CDL-B") : std::filesystem::path(path).stem().string();
        std::string out = "cdl:" + name;
        if (asd_deg > 0.0)
            out += ":asd" + fmt9(asd_deg);
        if (asa_deg > 0.0)
            out += ":asa" + fmt9(asa_deg);
        return out;
    }

    std::string PatternSpec::label() const
    {
        switch (kind)
        {
        case Kind::Uniform:
            return "uniform";
        case Kind::Dipole:
            return "dipole";
        case Kind::File:
            break;
        }
        return "file";
    }

    std::string EfficiencySpec::label() const
    {
        switch (kind)
        {
        case Kind::RelativeEta:
            return "eta=" + fmt9(eta);
        case Kind::Hannan:
            return "hannan";
        case Kind::SParams:
            break;
        }
        return "sparams";
    }

    std::vector<std::string> preset_names()
    {
        return {"fig3-isotropic", "fig3-cdlb", "fig3-hannan", "fig3-dipole", "fig4-multiuser"};
    }

    ScenarioConfig preset(const std::string &name)
    {
        ScenarioConfig c; // 3.5 GHz, BS 4x4, UE 1x1 wavelengths, 0 dB, 1000 draws, {1/2, 1/4, 1/8}
        c.seed = 1;
        const EfficiencySpec eta1{EfficiencySpec::Kind::RelativeEta, 1.0, {}, {}};
        const EfficiencySpec eta08{EfficiencySpec::Kind::RelativeEta, 0.8, {}, {}};
        const EfficiencySpec hannan{EfficiencySpec::Kind::Hannan, 1.0, {}, {}};
        const SpectrumSpec isotropic{};
        // ASA 22 deg of the table lies outside the (0, 21) deg validity range of the spread mapping.
        const SpectrumSpec cdlb{SpectrumSpec::Kind::Cdl, "builtin:CDL-B", 10.0, 20.0};

        if (name == "fig3-isotropic")
        {
            c.spectrum_spec = {isotropic};
            c.efficiency_spec = {eta1, eta08, hannan};
        }
        else if (name == "fig3-cdlb")
        {
            c.spectrum_spec = {cdlb};
            c.efficiency_spec = {eta1, eta08, hannan};
        }
        else if (name == "fig3-hannan")
        {
            c.spectrum_spec = {isotropic};
            c.efficiency_spec = {hannan};
        }
        else if (name == "fig3-dipole")
        {
            c.spectrum_spec = {isotropic};
            c.pattern_spec = {PatternSpec{}, PatternSpec{PatternSpec::Kind::Dipole, {}, {}}};
            c.efficiency_spec = {eta1};
        }
        else if (name == "fig4-multiuser")
        {
            c.users = 10;
            c.spectrum_spec = {isotropic, cdlb};
            c.efficiency_spec = {eta1, eta08, hannan};
        }
        else
            throw Error(ErrorCode::UnknownPreset, "unknown preset '" + name + "'");
        return c;
    }

    ScenarioConfig parse_config(const std::string &json_text)
    {
        json j;
        try
        {
            j = json::parse(json_text);
        }
        catch (const json::parse_error &e)
        {
            config_error(std::string("config is not valid JSON: ") + e.what());
        }
        return config_from_json(j);
    }

    ScenarioConfig load_config(const std::string &path)
    {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw Error(ErrorCode::IoError, "cannot open config '" + path + "'");
        std::stringstream ss;
        ss << in.rdbuf();
        auto c = parse_config(ss.str());
        const auto base = std::filesystem::path(path).parent_path();
        for (auto &s : c.spectrum_spec)
            s.path = resolve_path(s.path, base);
        for (auto &p : c.pattern_spec)
        {
            p.bs_path = resolve_path(p.bs_path, base);
            p.ue_path = resolve_path(p.ue_path, base);
        }
        for (auto &e : c.efficiency_spec)
        {
            e.bs_path = resolve_path(e.bs_path, base);
            e.ue_path = resolve_path(e.ue_path, base);
        }
        return c;
    }

    std::string config_to_json(const ScenarioConfig &config)
    {
        return config_json(config).dump(2);
    }

    void validate_config(const ScenarioConfig &c)
    {
        if (!(c.carrier_ghz > 0.0))
            config_error("carrier_ghz must be positive");
        if (c.realizations < 1)
            config_error("realizations must be >= 1");
        if (c.users < 1)
            config_error("users must be >= 1");
        if (c.spacing_list.empty() || c.spectrum_spec.empty() || c.pattern_spec.empty() || c.efficiency_spec.empty())
            config_error("spacing_list and every *_spec list must be non-empty");
        if (!std::isfinite(c.snr_db))
            config_error("snr_db must be finite");
        for (double s : c.spacing_list)
            geometries_for(c, s);
        for (const auto &e : c.efficiency_spec)
            if (e.kind == EfficiencySpec::Kind::RelativeEta && !(e.eta >= 0.0 && e.eta <= 1.0))
                config_error("relative_eta must lie in [0, 1]");
        for (const auto &s : c.spectrum_spec)
            if (s.kind == SpectrumSpec::Kind::Cdl && s.path.empty())
                config_error("CDL spectrum needs a path");
    }

    std::pair<AngularPowerSpectrum, AngularPowerSpectrum> resolve_spectra(const SpectrumSpec &spec)
    {
        if (spec.kind == SpectrumSpec::Kind::Isotropic)
            return {AngularPowerSpectrum::isotropic(), AngularPowerSpectrum::isotropic()};
        const auto table = resolve_table(spec);
        const auto [asd, asa] = resolve_spreads(spec, table);
        return spectra_from_cdl(table.rows, asd, asa);
    }

    std::pair<CouplingProfile, CouplingProfile> resolve_coupling(const PatternSpec &pattern,
                                                                 const EfficiencySpec &efficiency,
                                                                 const ArrayGeometry &bs, const ArrayGeometry &ue)
    {
        return {build_coupling_profile(bs, patterns_for(pattern, pattern.bs_path), mode_for(efficiency, efficiency.bs_path)),
                build_coupling_profile(ue, patterns_for(pattern, pattern.ue_path), mode_for(efficiency, efficiency.ue_path))};
    }

    SynthesisPlan plan_from_config(const ScenarioConfig &c)
    {
        validate_config(c);
        const auto g = geometries_for(c, c.spacing_list.front());
        const auto [bs_spectrum, ue_spectrum] = resolve_spectra(c.spectrum_spec.front());
        const auto [bs_coupling, ue_coupling] = resolve_coupling(c.pattern_spec.front(), c.efficiency_spec.front(), g.bs, g.ue);
        return build_plan(g.bs, g.ue, bs_spectrum, ue_spectrum, bs_coupling, ue_coupling);
    }

    std::uint64_t user_seed(std::uint64_t seed, int user)
    {
        return user == 0 ? seed : mix_seed(seed ^ mix_seed(std::uint64_t(user)));
    }

    std::uint64_t drop_seed(std::uint64_t seed, std::uint64_t realization)
    {
        return mix_seed(mix_seed(seed) + realization);
    }

    std::pair<double, double> mean_and_std(std::span<const double> values)
    {
        if (values.empty())
            return {0.0, 0.0};
        const double n = double(values.size());
        const double mean = pairwise_sum(values) / n;
        if (values.size() == 1)
            return {mean, 0.0};
        std::vector<double> dev(values.size());
        for (std::size_t i = 0; i < values.size(); ++i)
            dev[i] = (values[i] - mean) * (values[i] - mean);
        return {mean, std::sqrt(pairwise_sum(dev) / (n - 1.0))};
    }

    SweepResult run_single_user_sweep(const ScenarioConfig &c, int jobs)
    {
        validate_config(c);
        const auto n_real = std::size_t(c.realizations);
        SweepResult result;
        result.config = c;
        result.rows.resize(c.spacing_list.size() * combination_count(c));

        for (std::size_t s = 0; s < c.spectrum_spec.size(); ++s)
        {
            const auto [bs_spectrum, ue_spectrum] = resolve_spectra(c.spectrum_spec[s]);
            const auto bs_lattice = build_spectral_lattice(c.bs_aperture[0], c.bs_aperture[1], bs_spectrum);
            const auto ue_lattice = build_spectral_lattice(c.ue_aperture[0], c.ue_aperture[1], ue_spectrum);
            for (std::size_t sp = 0; sp < c.spacing_list.size(); ++sp)
            {
                const auto g = geometries_for(c, c.spacing_list[sp]);
                for (std::size_t p = 0; p < c.pattern_spec.size(); ++p)
                    for (std::size_t e = 0; e < c.efficiency_spec.size(); ++e)
                    {
                        const auto [bs_coupling, ue_coupling] =
                            resolve_coupling(c.pattern_spec[p], c.efficiency_spec[e], g.bs, g.ue);
                        const auto plan = build_plan(g.bs, g.ue, bs_lattice, ue_lattice, bs_coupling, ue_coupling);
                        std::vector<double> caps(n_real);
                        detail::parallel_for(n_real, jobs,
                                             [&](std::size_t r)
                                             {
                                                 const auto h = sample_compact_channel(plan, plan.deviation, c.seed, r);
                                                 caps[r] = su_capacity(h, c.snr_db).value_bits;
                                             });
                        result.rows[row_index(c, sp, s, p, e)] = make_row(c, sp, s, p, e, caps, 0);
                    }
            }
        }
        return result;
    }

    SweepResult run_multi_user_sweep(const ScenarioConfig &c, int jobs)
    {
        validate_config(c);
        const auto n_real = std::size_t(c.realizations);
        const auto n_users = std::size_t(c.users);
        const double total_power = std::pow(10.0, c.snr_db / 10.0);
        SweepResult result;
        result.config = c;
        result.rows.resize(c.spacing_list.size() * combination_count(c));

        for (std::size_t s = 0; s < c.spectrum_spec.size(); ++s)
        {
            const auto &spec = c.spectrum_spec[s];
            const auto [bs_spectrum, ue_spectrum] = resolve_spectra(spec);
            const auto bs_lattice = build_spectral_lattice(c.bs_aperture[0], c.bs_aperture[1], bs_spectrum);
            const auto ue_lattice = build_spectral_lattice(c.ue_aperture[0], c.ue_aperture[1], ue_spectrum);
            std::optional<CdlTable> table;
            std::pair<double, double> spreads{0.0, 0.0};
            if (spec.kind == SpectrumSpec::Kind::Cdl)
            {
                table = resolve_table(spec);
                spreads = resolve_spreads(spec, *table);
            }

            // Shared plans per (spacing, pattern, efficiency); users differ only in sigma^2.
            struct Slot
            {
                std::size_t row;
                SynthesisPlan plan;
            };
            std::vector<Slot> slots;
            for (std::size_t sp = 0; sp < c.spacing_list.size(); ++sp)
            {
                const auto g = geometries_for(c, c.spacing_list[sp]);
                for (std::size_t p = 0; p < c.pattern_spec.size(); ++p)
                    for (std::size_t e = 0; e < c.efficiency_spec.size(); ++e)
                    {
                        const auto [bs_coupling, ue_coupling] =
                            resolve_coupling(c.pattern_spec[p], c.efficiency_spec[e], g.bs, g.ue);
                        slots.push_back({row_index(c, sp, s, p, e),
                                         build_plan(g.bs, g.ue, bs_lattice, ue_lattice, bs_coupling, ue_coupling)});
                    }
            }

            std::vector<std::vector<double>> caps(slots.size(), std::vector<double>(n_real));
            std::vector<std::vector<char>> stalled(slots.size(), std::vector<char>(n_real, 0));
            detail::parallel_for(
                n_real, jobs,
                [&](std::size_t r)
                {
                    const auto drops = drop_users(c.users, drop_seed(c.seed, r));
                    std::vector<Eigen::MatrixXd> deviation(n_users);
                    std::vector<double> amplitude(n_users);
                    for (std::size_t k = 0; k < n_users; ++k)
                    {
                        const double rotation = drops[k].orientation_deg * std::numbers::pi / 180.0;
                        const SpectralLattice *lattice = &ue_lattice;
                        SpectralLattice rotated;
                        if (table)
                        {
                            AngularPowerSpectrum ue = ue_spectrum;
                            if (c.rerandomize_cluster_azimuths)
                            {
                                auto rows = table->rows;
                                for (std::size_t q = 0; q < rows.size(); ++q)
                                    rows[q].aoa_deg = -180.0 + 360.0 * philox_uniform2(StreamDomain::ClusterAzimuth,
                                                                                        drop_seed(c.seed, r), k, q)[0];
                                ue = spectra_from_cdl(rows, spreads.first, spreads.second).second;
                            }
                            rotated = build_spectral_lattice(c.ue_aperture[0], c.ue_aperture[1], ue.rotated(rotation));
                            lattice = &rotated;
                        }
                        deviation[k] = build_variance_table(bs_lattice, *lattice).variances().cwiseSqrt();
                        amplitude[k] = std::pow(10.0, drops[k].snr_db / 20.0);
                    }
                    std::vector<Eigen::MatrixXcd> channels(n_users);
                    for (std::size_t i = 0; i < slots.size(); ++i)
                    {
                        for (std::size_t k = 0; k < n_users; ++k)
                            channels[k] = amplitude[k] * sample_compact_channel(slots[i].plan, deviation[k],
                                                                                user_seed(c.seed, int(k)), r);
                        const auto report = mu_sum_capacity(channels, total_power);
                        caps[i][r] = report.value_bits;
                        stalled[i][r] = report.converged ? 0 : 1;
                    }
                });

            for (std::size_t i = 0; i < slots.size(); ++i)
            {
                const std::size_t row = slots[i].row;
                const std::size_t e = row % c.efficiency_spec.size();
                const std::size_t p = (row / c.efficiency_spec.size()) % c.pattern_spec.size();
                const std::size_t sp = row / combination_count(c);
                int not_converged = 0;
                for (char f : stalled[i])
                    not_converged += f;
                result.rows[row] = make_row(c, sp, s, p, e, caps[i], not_converged);
            }
        }
        return result;
    }

    SweepResult run_sweep(const ScenarioConfig &config, int jobs)
    {
        return config.users > 1 ? run_multi_user_sweep(config, jobs) : run_single_user_sweep(config, jobs);
    }

    std::string format_csv(const SweepResult &result)
    {
        std::string out = std::string(sweep_csv_header) + "\n";
        for (const auto &r : result.rows)
            out += fmt9(r.spacing_wl) + "," + r.efficiency_mode + "," + r.spectrum + "," + r.pattern + "," +
                   fmt9(r.mean_bits) + "," + fmt9(r.std_bits) + "," + std::to_string(r.realizations) + "," +
                   std::to_string(r.seed) + "\n";
        return out;
    }

    std::string format_json(const SweepResult &result)
    {
        json j;
        j["config"] = config_json(result.config);
        j["rows"] = json::array();
        for (const auto &r : result.rows)
            j["rows"].push_back({{"spacing_wl", r.spacing_wl},
                                 {"efficiency_mode", r.efficiency_mode},
                                 {"spectrum", r.spectrum},
                                 {"pattern", r.pattern},
                                 {"mean_bits", r.mean_bits},
                                 {"std_bits", r.std_bits},
                                 {"realizations", r.realizations},
                                 {"seed", r.seed},
                                 {"not_converged", r.not_converged}});
        return j.dump(2) + "\n";
    }

    void emit(const SweepResult &result, const std::string &path, OutputFormat format)
    {
        const std::string text = format == OutputFormat::Csv ? format_csv(result) : format_json(result);
        std::ofstream out(path, std::ios::binary);
        if (!out)
            throw Error(ErrorCode::IoError, "cannot write '" + path + "'");
        out << text;
        out.flush();
        if (!out)
            throw Error(ErrorCode::IoError, "write to '" + path + "' failed");
    }

    SweepResult load_result_json(const std::string &path)
    {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw Error(ErrorCode::IoError, "cannot open '" + path + "'");
        SweepResult result;
        try
        {
            const json j = json::parse(in);
            result.config = config_from_json(j.at("config"));
            for (const auto &r : j.at("rows"))
            {
                SweepRow row;
                row.spacing_wl = r.at("spacing_wl").get<double>();
                row.efficiency_mode = r.at("efficiency_mode").get<std::string>();
                row.spectrum = r.at("spectrum").get<std::string>();
                row.pattern = r.at("pattern").get<std::string>();
                row.mean_bits = r.at("mean_bits").get<double>();
                row.std_bits = r.at("std_bits").get<double>();
                row.realizations = r.at("realizations").get<int>();
                row.seed = r.at("seed").get<std::uint64_t>();
                row.not_converged = r.value("not_converged", 0);
                result.rows.push_back(std::move(row));
            }
        }
        catch (const json::exception &e)
        {
            throw Error(ErrorCode::MalformedInputFile, path + ": " + e.what());
        }
        catch (const Error &e)
        {
            throw Error(ErrorCode::MalformedInputFile, path + ": " + e.what());
        }
        return result;
    }
}
