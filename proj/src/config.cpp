/*
 * Copyright 2026 The bsmc developers
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "bsmc/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "bsmc/errors.hpp"

namespace bsmc {

using json = nlohmann::ordered_json;

GramMatrix GramSpec::build(int n) const {
    switch (kind) {
        case Kind::homogeneous:
            return GramMatrix::homogeneous(n, s);
        case Kind::matrix: {
            if (entries.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(n))
                throw config_error("gram matrix entries must be n x n row-major");
            RealMatrix m(n, n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    m(i, j) = entries[static_cast<std::size_t>(i) * n + static_cast<std::size_t>(j)];
            return GramMatrix(std::move(m));
        }
        case Kind::visibilities:
            return GramMatrix::from_visibilities(n, visibilities);
    }
    throw config_error("gram spec has unknown kind");
}

std::string GramSpec::describe() const {
    std::ostringstream os;
    switch (kind) {
        case Kind::homogeneous:
            os << "s=" << s;
            break;
        case Kind::matrix:
            os << "matrix";
            break;
        case Kind::visibilities: {
            os << "visibilities=";
            for (std::size_t i = 0; i < visibilities.size(); ++i)
                os << (i ? "/" : "") << visibilities[i];
            break;
        }
    }
    return os.str();
}

GramSpec GramSpec::homogeneous_spec(double s) {
    GramSpec spec;
    spec.kind = Kind::homogeneous;
    spec.s = s;
    spec.visibilities.clear();
    return spec;
}

void InstanceConfig::validate() const {
    if (photons < 1) throw config_error("photons must be >= 1");
    if (modes < 2) throw config_error("modes must be >= 2");
    if (photons > modes) throw config_error("photons must not exceed modes");
    if (static_cast<int>(orbitals.size()) != photons)
        throw config_error("need one orbital index per photon");
    for (int i : orbitals)
        if (i < 0 || i > 50) throw config_error("orbital indices must lie in [0, 50]");
    if (!(grid_half_range > 0.0)) throw config_error("grid half_range must be > 0");
    if (reference_modes < modes) throw config_error("reference_modes must be >= modes");
    if (efimov_constant < 0.0) throw config_error("potential constant must be >= 0");
    if (hard_shell_radius && !(*hard_shell_radius > 0.0))
        throw config_error("hard-shell radius must be > 0");
    if (jitter_enabled && jitter_samples < 1)
        throw config_error("jitter samples must be >= 1 when jitter is enabled");
    if (noise.epsilon < 0.0) throw config_error("noise epsilon must be >= 0");
    if (noise.target_fidelity &&
        (*noise.target_fidelity <= 0.0 || *noise.target_fidelity > 1.0))
        throw config_error("target fidelity must lie in (0, 1]");
    if (noise.realizations < 1) throw config_error("noise realizations must be >= 1");
    gram.build(photons); // validates the spec
}

namespace {

json to_json(const InstanceConfig& cfg) {
    json j;
    j["photons"] = cfg.photons;
    j["modes"] = cfg.modes;
    j["orbitals"] = cfg.orbitals;
    j["grid"] = {{"half_range", cfg.grid_half_range}, {"reference_modes", cfg.reference_modes}};
    json potential = {{"constant", cfg.efimov_constant}};
    if (cfg.hard_shell_radius)
        potential["hard_shell_radius"] = *cfg.hard_shell_radius;
    else
        potential["hard_shell_radius"] = nullptr;
    j["potential"] = potential;
    j["boundary_rule"] = cfg.boundary_rule == BoundaryRule::include ? "include" : "exclude";

    json gram;
    switch (cfg.gram.kind) {
        case GramSpec::Kind::homogeneous:
            gram["type"] = "homogeneous";
            gram["s"] = cfg.gram.s;
            break;
        case GramSpec::Kind::matrix:
            gram["type"] = "matrix";
            gram["entries"] = cfg.gram.entries;
            break;
        case GramSpec::Kind::visibilities:
            gram["type"] = "visibilities";
            gram["values"] = cfg.gram.visibilities;
            break;
    }
    j["gram"] = gram;

    json noise;
    noise["epsilon"] = cfg.noise.epsilon;
    if (cfg.noise.target_fidelity)
        noise["target_fidelity"] = *cfg.noise.target_fidelity;
    else
        noise["target_fidelity"] = nullptr;
    noise["realizations"] = cfg.noise.realizations;
    j["noise"] = noise;

    j["jitter"] = {{"enabled", cfg.jitter_enabled}, {"samples", cfg.jitter_samples}};
    j["seed"] = cfg.seed;
    j["output_dir"] = cfg.output_dir;
    return j;
}

InstanceConfig from_json(const json& j) {
    InstanceConfig cfg;
    try {
        if (j.contains("photons")) cfg.photons = j.at("photons").get<int>();
        if (j.contains("modes")) cfg.modes = j.at("modes").get<int>();
        if (j.contains("orbitals")) cfg.orbitals = j.at("orbitals").get<std::vector<int>>();
        if (j.contains("grid")) {
            const auto& g = j.at("grid");
            if (g.contains("half_range")) cfg.grid_half_range = g.at("half_range").get<double>();
            if (g.contains("reference_modes"))
                cfg.reference_modes = g.at("reference_modes").get<int>();
        }
        if (j.contains("potential")) {
            const auto& p = j.at("potential");
            if (p.contains("constant")) cfg.efimov_constant = p.at("constant").get<double>();
            if (p.contains("hard_shell_radius") && !p.at("hard_shell_radius").is_null())
                cfg.hard_shell_radius = p.at("hard_shell_radius").get<double>();
        }
        if (j.contains("boundary_rule")) {
            const std::string rule = j.at("boundary_rule").get<std::string>();
            if (rule == "include")
                cfg.boundary_rule = BoundaryRule::include;
            else if (rule == "exclude")
                cfg.boundary_rule = BoundaryRule::exclude;
            else
                throw config_error("boundary_rule must be \"include\" or \"exclude\"");
        }
        if (j.contains("gram")) {
            const auto& g = j.at("gram");
            const std::string type = g.at("type").get<std::string>();
            if (type == "homogeneous") {
                cfg.gram.kind = GramSpec::Kind::homogeneous;
                cfg.gram.s = g.at("s").get<double>();
                cfg.gram.visibilities.clear();
            } else if (type == "matrix") {
                cfg.gram.kind = GramSpec::Kind::matrix;
                cfg.gram.entries = g.at("entries").get<std::vector<double>>();
                cfg.gram.visibilities.clear();
            } else if (type == "visibilities") {
                cfg.gram.kind = GramSpec::Kind::visibilities;
                cfg.gram.visibilities = g.at("values").get<std::vector<double>>();
            } else {
                throw config_error("gram type must be homogeneous, matrix or visibilities");
            }
        }
        if (j.contains("noise")) {
            const auto& n = j.at("noise");
            if (n.contains("epsilon")) cfg.noise.epsilon = n.at("epsilon").get<double>();
            if (n.contains("target_fidelity") && !n.at("target_fidelity").is_null())
                cfg.noise.target_fidelity = n.at("target_fidelity").get<double>();
            if (n.contains("realizations")) cfg.noise.realizations = n.at("realizations").get<int>();
        }
        if (j.contains("jitter")) {
            const auto& jt = j.at("jitter");
            if (jt.contains("enabled")) cfg.jitter_enabled = jt.at("enabled").get<bool>();
            if (jt.contains("samples")) cfg.jitter_samples = jt.at("samples").get<std::int64_t>();
        }
        if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("output_dir")) cfg.output_dir = j.at("output_dir").get<std::string>();
    } catch (const json::exception& err) {
        throw config_error(std::string("config parse error: ") + err.what());
    }
    cfg.validate();
    return cfg;
}

} // namespace

std::string InstanceConfig::to_json_string() const {
    return to_json(*this).dump(2) + "\n";
}

InstanceConfig InstanceConfig::from_json_string(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& err) {
        throw config_error(std::string("config is not valid JSON: ") + err.what());
    }
    return from_json(j);
}

InstanceConfig InstanceConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json_string(ss.str());
}

void InstanceConfig::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw config_error("cannot write config file: " + path);
    out << to_json_string();
}

} // namespace bsmc
