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

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bsmc/config.hpp"
#include "bsmc/errors.hpp"
#include "bsmc/io.hpp"
#include "bsmc/rng.hpp"
#include "bsmc/workbench.hpp"

namespace {

struct CommonOptions {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
    std::string format = "csv";
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
    cmd->add_option("--config", opts.config_path, "Instance config JSON file");
    cmd->add_option("--seed", opts.seed, "Override the config seed");
    cmd->add_option("--out", opts.out_dir, "Output directory");
    cmd->add_option("--format", opts.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}));
}

bsmc::InstanceConfig load_config(const CommonOptions& opts) {
    bsmc::InstanceConfig cfg;
    if (!opts.config_path.empty()) cfg = bsmc::InstanceConfig::load(opts.config_path);
    if (opts.seed) cfg.seed = *opts.seed;
    if (opts.out_dir) cfg.output_dir = *opts.out_dir;
    cfg.validate();
    return cfg;
}

std::string out_path(const bsmc::InstanceConfig& cfg, const std::string& name) {
    return (std::filesystem::path(cfg.output_dir) / name).string();
}

void emit(const bsmc::InstanceConfig& cfg, const std::string& stem, const std::string& format,
          const std::string& csv, const std::string& json_text) {
    const std::string path = out_path(cfg, stem + "." + format);
    bsmc::write_file(path, format == "csv" ? csv : json_text);
    std::cout << "wrote " << path << "\n";
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    std::size_t pos = 0;
    while (pos < text.size()) {
        const std::size_t comma = text.find(',', pos);
        const std::string tok = text.substr(pos, comma == std::string::npos ? comma : comma - pos);
        out.push_back(std::stoi(tok));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos < text.size()) {
        const std::size_t comma = text.find(',', pos);
        const std::string tok = text.substr(pos, comma == std::string::npos ? comma : comma - pos);
        out.push_back(std::stod(tok));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"boson-sampling Monte Carlo integration workbench"};
    app.require_subcommand(1);

    CommonOptions opts;

    // error-budget
    auto* budget_cmd = app.add_subcommand(
        "error-budget", "Energy-correction table under progressively stronger noise");
    add_common(budget_cmd, opts);

    // sweep
    auto* sweep_cmd = app.add_subcommand("sweep", "Parameter sweeps (modes, jitter, s, fidelity)");
    add_common(sweep_cmd, opts);
    std::string axis;
    sweep_cmd->add_option("--axis", axis, "Sweep axis")
        ->required()
        ->check(CLI::IsMember({"modes", "jitter", "s", "fidelity"}));
    std::string modes_list = "12,23,34,45,56";
    std::string jitter_list = "10,100,1000";
    std::string s_list = "0,0.25,0.5,0.75,1";
    std::string epsilon_list = "0,0.02,0.05,0.1,0.2";
    int repeats = 20;
    int realizations = 100;
    sweep_cmd->add_option("--modes-list", modes_list, "Mode counts for the modes/jitter axes");
    sweep_cmd->add_option("--jitter-list", jitter_list, "Jitter sample counts for the jitter axis");
    sweep_cmd->add_option("--s-list", s_list, "Overlap grid for the s axis");
    sweep_cmd->add_option("--epsilon-list", epsilon_list, "Noise scales for the fidelity axis");
    sweep_cmd->add_option("--repeats", repeats, "Seeds per point for the jitter axis");
    sweep_cmd->add_option("--realizations", realizations,
                          "Noise realizations per point for the fidelity axis");

    // compare
    auto* compare_cmd =
        app.add_subcommand("compare", "Compare a measured count file against simulations");
    add_common(compare_cmd, opts);
    std::string counts_path;
    compare_cmd->add_option("counts", counts_path, "CSV file of pattern,count rows")->required();

    // sample
    auto* sample_cmd = app.add_subcommand("sample", "Draw output patterns from the instance");
    add_common(sample_cmd, opts);
    std::int64_t num_samples = 1000;
    sample_cmd->add_option("-n,--num", num_samples, "Number of samples");

    // encode
    auto* encode_cmd = app.add_subcommand("encode", "Dump the encoding unitary");
    add_common(encode_cmd, opts);

    // distribution
    auto* dist_cmd = app.add_subcommand("distribution", "Dump the enumerated output distribution");
    add_common(dist_cmd, opts);
    bool with_collisions = false;
    dist_cmd->add_flag("--full", with_collisions,
                       "Keep collision patterns instead of postselecting");

    // calibrate
    auto* cal_cmd = app.add_subcommand(
        "calibrate", "Search (potential constant, grid range) against reference targets");
    add_common(cal_cmd, opts);
    double target_reference = -0.2453;
    double target_base = -0.2467;
    std::string range_list = "2.6,2.8,3.0,3.2,3.4,3.6,3.8";
    cal_cmd->add_option("--target-reference", target_reference, "Fine-grid target value");
    cal_cmd->add_option("--target-base", target_base, "Base-grid target value");
    cal_cmd->add_option("--range-list", range_list, "Half-range grid to scan");

    CLI11_PARSE(app, argc, argv);

    try {
        const bsmc::InstanceConfig cfg = load_config(opts);

        if (*budget_cmd) {
            const auto rows = bsmc::error_budget(cfg);
            emit(cfg, "error_budget", opts.format, bsmc::budget_csv(rows),
                 bsmc::budget_json(rows));
            for (const auto& row : rows)
                std::cout << row.system << ": E1 = " << bsmc::format_double(row.estimate.e1)
                          << " (I0 = " << bsmc::format_double(row.estimate.i0) << ")\n";
        } else if (*sweep_cmd) {
            bsmc::SweepResult sweep;
            if (axis == "modes") {
                sweep = bsmc::refine_modes_sweep(cfg, parse_int_list(modes_list));
            } else if (axis == "jitter") {
                std::vector<std::int64_t> n_list;
                for (int v : parse_int_list(jitter_list)) n_list.push_back(v);
                sweep = bsmc::jitter_convergence_sweep(cfg, parse_int_list(modes_list), n_list,
                                                       repeats);
            } else if (axis == "s") {
                sweep = bsmc::distinguishability_sweep(cfg, parse_double_list(s_list));
            } else {
                sweep = bsmc::fidelity_sweep(cfg, parse_double_list(epsilon_list), realizations);
            }
            const std::string stem = "sweep_" + axis;
            bsmc::write_file(out_path(cfg, stem + ".csv"), bsmc::sweep_csv(sweep));
            bsmc::write_file(out_path(cfg, stem + ".json"), bsmc::sweep_json(sweep));
            std::cout << "wrote " << out_path(cfg, stem + ".csv") << " and .json\n";
        } else if (*compare_cmd) {
            const bsmc::CompareReport report = bsmc::compare_counts(cfg, counts_path);
            bsmc::write_file(out_path(cfg, "compare.json"), bsmc::compare_json(report));
            bsmc::write_file(out_path(cfg, "residuals.csv"), bsmc::residuals_csv(report));
            std::cout << "tvd_ideal = " << bsmc::format_double(report.tvd_ideal)
                      << "\ntvd_noisy = " << bsmc::format_double(report.tvd_noisy)
                      << "\ne1_ingested = " << bsmc::format_double(report.e1_ingested.e1)
                      << "\nwrote " << out_path(cfg, "compare.json") << " and residuals.csv\n";
        } else if (*sample_cmd) {
            const bsmc::InstanceContext ctx = bsmc::build_context(cfg);
            const bsmc::OutputDistribution dist =
                bsmc::instance_distribution(cfg, ctx.encoded.unitary, ctx.gram);
            const auto samples = bsmc::sample_patterns(
                dist, num_samples, bsmc::derive_seed(cfg.seed, bsmc::kSeedSampling));
            emit(cfg, "samples", opts.format, bsmc::samples_csv(samples),
                 bsmc::samples_json(samples));
        } else if (*encode_cmd) {
            const bsmc::InstanceContext ctx = bsmc::build_context(cfg);
            emit(cfg, "encoding_unitary", opts.format,
                 bsmc::unitary_csv(ctx.encoded.unitary.matrix()), bsmc::unitary_json(ctx.encoded));
            std::cout << "raw_deviation = " << bsmc::format_double(ctx.encoded.raw_deviation)
                      << "\nunitarity_defect = "
                      << bsmc::format_double(ctx.encoded.unitary.defect()) << "\n";
        } else if (*dist_cmd) {
            const bsmc::InstanceContext ctx = bsmc::build_context(cfg);
            bsmc::OutputDistribution dist;
            if (with_collisions) {
                dist = bsmc::enumerate_distribution(ctx.encoded.unitary, ctx.input_pattern(),
                                                    ctx.gram, false);
            } else {
                dist = bsmc::instance_distribution(cfg, ctx.encoded.unitary, ctx.gram);
            }
            emit(cfg, "distribution", opts.format, bsmc::distribution_csv(dist),
                 bsmc::distribution_json(dist));
        } else if (*cal_cmd) {
            const bsmc::CalibrationReport report = bsmc::calibrate(
                cfg, target_reference, target_base, parse_double_list(range_list));
            bsmc::write_file(out_path(cfg, "calibration.json"), bsmc::calibration_json(report));
            std::cout << (report.matched ? "matched" : "no exact match; closest fit reported")
                      << ": half_range = " << bsmc::format_double(report.best.half_range)
                      << ", constant = " << bsmc::format_double(report.best.constant)
                      << "\nwrote " << out_path(cfg, "calibration.json") << "\n";
        }
    } catch (const bsmc::config_error& err) {
        std::cerr << "config error: " << err.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& err) {
        std::cerr << "config error: " << err.what() << "\n";
        return 1;
    } catch (const bsmc::data_error& err) {
        std::cerr << "data error: " << err.what() << "\n";
        return 2;
    } catch (const bsmc::degenerate_error& err) {
        std::cerr << "degenerate instance: " << err.what() << "\n";
        return 3;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    }
    return 0;
}
