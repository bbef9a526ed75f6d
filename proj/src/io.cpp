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

#include "bsmc/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "bsmc/errors.hpp"

namespace bsmc {

using json = nlohmann::ordered_json;

std::string format_double(double v) {
    char buf[40];
    // try increasing precision until the value round-trips
    for (int prec = 15; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

namespace {

json meta_json(const DistributionMeta& meta) {
    json j;
    j["u_fingerprint"] = meta.u_fingerprint;
    j["mu_in"] = meta.mu_in.counts.empty() ? "" : meta.mu_in.to_string();
    if (meta.gram) {
        json g;
        g["mean_overlap"] = meta.gram->mean_overlap();
        g["all_ones"] = meta.gram->is_all_ones();
        g["identity"] = meta.gram->is_identity();
        j["gram"] = g;
    } else {
        j["gram"] = nullptr;
    }
    j["collision_free"] = meta.collision_free;
    j["postselection_mass"] = meta.postselection_mass;
    return j;
}

json provenance_json(const Provenance& p) {
    json j;
    j["modes"] = p.modes;
    j["gram"] = p.gram;
    j["mean_overlap"] = p.mean_overlap;
    j["epsilon"] = p.epsilon;
    j["fidelity"] = p.fidelity;
    j["jitter_enabled"] = p.jitter_enabled;
    j["jitter_samples"] = p.jitter_samples;
    j["boundary_rule"] = p.boundary_rule;
    j["efimov_constant"] = p.efimov_constant;
    j["half_range"] = p.half_range;
    j["hard_shell_radius"] = p.hard_shell_radius;
    j["seed"] = p.seed;
    j["jitter_seed"] = p.jitter_seed;
    j["sample_seed"] = p.sample_seed;
    j["noise_seed"] = p.noise_seed;
    j["u_fingerprint"] = p.u_fingerprint;
    return j;
}

const char* kProvenanceHeader =
    "modes,gram,mean_overlap,epsilon,fidelity,jitter_enabled,jitter_samples,"
    "boundary_rule,efimov_constant,half_range,hard_shell_radius,seed,jitter_seed,"
    "sample_seed,noise_seed,u_fingerprint";

void provenance_row(std::ostringstream& os, const Provenance& p) {
    os << p.modes << ',' << p.gram << ',' << format_double(p.mean_overlap) << ','
       << format_double(p.epsilon) << ',' << format_double(p.fidelity) << ','
       << (p.jitter_enabled ? 1 : 0) << ',' << p.jitter_samples << ',' << p.boundary_rule << ','
       << format_double(p.efimov_constant) << ',' << format_double(p.half_range) << ','
       << format_double(p.hard_shell_radius) << ',' << p.seed << ',' << p.jitter_seed << ','
       << p.sample_seed << ',' << p.noise_seed << ',' << p.u_fingerprint;
}

json energy_json_value(const EnergyEstimate& est) {
    json j;
    j["e1"] = est.e1;
    j["stderr"] = est.stderr_;
    j["i0"] = est.i0;
    j["n_samples"] = est.n_samples;
    j["provenance"] = provenance_json(est.provenance);
    return j;
}

} // namespace

std::string distribution_csv(const OutputDistribution& dist) {
    std::ostringstream os;
    const bool with_stderr = !dist.prob_stderr.empty();
    os << "pattern,probability" << (with_stderr ? ",stderr" : "") << '\n';
    for (std::size_t i = 0; i < dist.size(); ++i) {
        os << dist.patterns[i].to_string() << ',' << format_double(dist.probs[i]);
        if (with_stderr) os << ',' << format_double(dist.prob_stderr[i]);
        os << '\n';
    }
    return os.str();
}

std::string distribution_json(const OutputDistribution& dist) {
    json j;
    j["meta"] = meta_json(dist.meta);
    json rows = json::array();
    for (std::size_t i = 0; i < dist.size(); ++i) {
        json row;
        row["pattern"] = dist.patterns[i].to_string();
        row["probability"] = dist.probs[i];
        if (!dist.prob_stderr.empty()) row["stderr"] = dist.prob_stderr[i];
        rows.push_back(std::move(row));
    }
    j["distribution"] = std::move(rows);
    return j.dump(2) + "\n";
}

std::string unitary_csv(const ComplexMatrix& u) {
    std::ostringstream os;
    os << "row,col,re,im\n";
    for (Eigen::Index i = 0; i < u.rows(); ++i)
        for (Eigen::Index j = 0; j < u.cols(); ++j)
            os << i << ',' << j << ',' << format_double(u(i, j).real()) << ','
               << format_double(u(i, j).imag()) << '\n';
    return os.str();
}

std::string unitary_json(const EncodedUnitary& encoded) {
    json j;
    j["dim"] = encoded.unitary.dim();
    j["unitarity_defect"] = encoded.unitary.defect();
    j["raw_deviation"] = encoded.raw_deviation;
    j["fingerprint"] = fingerprint(encoded.unitary.matrix());
    json rows = json::array();
    for (Eigen::Index i = 0; i < encoded.unitary.dim(); ++i) {
        json row = json::array();
        for (Eigen::Index k = 0; k < encoded.unitary.dim(); ++k) {
            row.push_back(json::array(
                {encoded.unitary.matrix()(i, k).real(), encoded.unitary.matrix()(i, k).imag()}));
        }
        rows.push_back(std::move(row));
    }
    j["entries"] = std::move(rows);
    return j.dump(2) + "\n";
}

std::string energy_csv(const EnergyEstimate& est) {
    std::ostringstream os;
    os << "e1,stderr,i0,n_samples," << kProvenanceHeader << '\n';
    os << format_double(est.e1) << ',' << format_double(est.stderr_) << ','
       << format_double(est.i0) << ',' << est.n_samples << ',';
    provenance_row(os, est.provenance);
    os << '\n';
    return os.str();
}

std::string energy_json(const EnergyEstimate& est) {
    return energy_json_value(est).dump(2) + "\n";
}

std::string sweep_csv(const SweepResult& sweep) {
    std::ostringstream os;
    os << "series,abscissa,e1,stderr,i0,ensemble_stddev," << kProvenanceHeader << '\n';
    for (const SweepSeries& series : sweep.series)
        for (const SweepPoint& point : series.points) {
            os << series.name << ',' << format_double(point.abscissa) << ','
               << format_double(point.estimate.e1) << ',' << format_double(point.estimate.stderr_)
               << ',' << format_double(point.estimate.i0) << ','
               << format_double(point.ensemble_stddev) << ',';
            provenance_row(os, point.estimate.provenance);
            os << '\n';
        }
    return os.str();
}

std::string sweep_json(const SweepResult& sweep) {
    json j;
    j["axis"] = sweep.axis;
    json series = json::array();
    for (const SweepSeries& s : sweep.series) {
        json sj;
        sj["name"] = s.name;
        json points = json::array();
        for (const SweepPoint& p : s.points) {
            json pj;
            pj["abscissa"] = p.abscissa;
            pj["ensemble_stddev"] = p.ensemble_stddev;
            pj["estimate"] = energy_json_value(p.estimate);
            points.push_back(std::move(pj));
        }
        sj["points"] = std::move(points);
        series.push_back(std::move(sj));
    }
    j["series"] = std::move(series);
    return j.dump(2) + "\n";
}

std::string budget_csv(const std::vector<BudgetRow>& rows) {
    std::ostringstream os;
    os << "system,e1,stderr,i0,ensemble_stddev,realizations," << kProvenanceHeader << '\n';
    for (const BudgetRow& row : rows) {
        os << row.system << ',' << format_double(row.estimate.e1) << ','
           << format_double(row.estimate.stderr_) << ',' << format_double(row.estimate.i0) << ','
           << format_double(row.ensemble_stddev) << ',' << row.realizations << ',';
        provenance_row(os, row.estimate.provenance);
        os << '\n';
    }
    return os.str();
}

std::string budget_json(const std::vector<BudgetRow>& rows) {
    json j = json::array();
    for (const BudgetRow& row : rows) {
        json rj;
        rj["system"] = row.system;
        rj["ensemble_stddev"] = row.ensemble_stddev;
        rj["realizations"] = row.realizations;
        rj["estimate"] = energy_json_value(row.estimate);
        j.push_back(std::move(rj));
    }
    return j.dump(2) + "\n";
}

std::string samples_csv(const std::vector<OccupationPattern>& samples) {
    std::ostringstream os;
    os << "index,pattern\n";
    for (std::size_t i = 0; i < samples.size(); ++i)
        os << i << ',' << samples[i].to_string() << '\n';
    return os.str();
}

std::string samples_json(const std::vector<OccupationPattern>& samples) {
    json j = json::array();
    for (const OccupationPattern& p : samples) j.push_back(p.to_string());
    return j.dump(2) + "\n";
}

std::string compare_json(const CompareReport& report) {
    json j;
    j["tvd_ideal"] = report.tvd_ideal;
    j["tvd_noisy"] = report.tvd_noisy;
    j["e1_ingested"] = energy_json_value(report.e1_ingested);
    j["e1_ideal"] = energy_json_value(report.e1_ideal);
    j["n_patterns"] = report.ingested.size();
    return j.dump(2) + "\n";
}

std::string residuals_csv(const CompareReport& report) {
    std::ostringstream os;
    os << "pattern,ingested,ideal,noisy,residual_ideal,residual_noisy,stderr\n";
    for (std::size_t i = 0; i < report.ingested.size(); ++i) {
        const double pi = report.ingested.probs[i];
        const double pd = report.ideal.probs[i];
        const double pn = report.noisy.probs[i];
        os << report.ingested.patterns[i].to_string() << ',' << format_double(pi) << ','
           << format_double(pd) << ',' << format_double(pn) << ',' << format_double(pi - pd)
           << ',' << format_double(pi - pn) << ','
           << format_double(report.ingested.prob_stderr.empty() ? 0.0
                                                                : report.ingested.prob_stderr[i])
           << '\n';
    }
    return os.str();
}

std::string calibration_json(const CalibrationReport& report) {
    json j;
    j["target_reference"] = report.target_reference;
    j["target_base"] = report.target_base;
    j["tolerance"] = report.tolerance;
    j["gap_limit"] = report.gap_limit;
    j["matched"] = report.matched;
    auto point_json = [](const CalibrationPoint& p) {
        json pj;
        pj["half_range"] = p.half_range;
        pj["constant"] = p.constant;
        pj["e1_reference"] = p.e1_reference;
        pj["e1_base"] = p.e1_base;
        pj["gap_fraction"] = p.gap_fraction;
        pj["feasible"] = p.feasible;
        pj["matched"] = p.matched;
        return pj;
    };
    j["best"] = point_json(report.best);
    json points = json::array();
    for (const CalibrationPoint& p : report.points) points.push_back(point_json(p));
    j["points"] = std::move(points);
    return j.dump(2) + "\n";
}

void write_file(const std::string& path, const std::string& text) {
    const std::filesystem::path p(path);
    if (p.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(p.parent_path(), ec);
        if (ec) throw data_error("cannot create directory: " + p.parent_path().string());
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw data_error("cannot open for writing: " + path);
    out << text;
    if (!out) throw data_error("write failed: " + path);
}

} // namespace bsmc
