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

#ifndef BSMC_CONFIG_HPP
#define BSMC_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bsmc/integrator.hpp"
#include "bsmc/physics.hpp"
#include "bsmc/sampler.hpp"

namespace bsmc {

/// Default problem-instance calibration. The grid half-range and the
/// potential constant are the two knobs that fix the absolute scale of
/// the energy correction; these values come from the calibration search
/// (see `bsmc calibrate` output in the repository docs).
inline constexpr double kDefaultHalfRange = 3.13;
inline constexpr double kDefaultEfimovConstant = 0.0906;
inline constexpr int kDefaultReferenceModes = 96;

/// How the photon Gram matrix is specified.
struct GramSpec {
    enum class Kind { homogeneous, matrix, visibilities };

    Kind kind = Kind::visibilities;
    double s = 1.0;                   // homogeneous overlap
    std::vector<double> entries;      // row-major n x n, kind == matrix
    std::vector<double> visibilities{0.98, 0.95, 0.90}; // upper triangle, kind == visibilities

    GramMatrix build(int n) const;
    std::string describe() const;

    static GramSpec homogeneous_spec(double s);
};

/// Unitary-noise model: element-wise Gaussian noise with either a fixed
/// scale or a scale solved to hit a target ensemble-mean fidelity.
struct NoiseSpec {
    double epsilon = 0.0;
    std::optional<double> target_fidelity;
    int realizations = 100;
};

/// Full problem-instance configuration; round-trips losslessly through
/// JSON.
struct InstanceConfig {
    int photons = 3;
    int modes = 12;
    std::vector<int> orbitals{0, 1, 2};
    double grid_half_range = kDefaultHalfRange;
    int reference_modes = kDefaultReferenceModes;
    double efimov_constant = kDefaultEfimovConstant;
    std::optional<double> hard_shell_radius; // default: base-grid spacing
    BoundaryRule boundary_rule = BoundaryRule::include;
    GramSpec gram;
    NoiseSpec noise;
    bool jitter_enabled = true;
    std::int64_t jitter_samples = 1000;
    std::uint64_t seed = 12345;
    std::string output_dir = "out";

    void validate() const;

    /// Base-grid spacing, which is also the default hard-shell radius.
    double base_spacing() const { return 2.0 * grid_half_range / (modes - 1); }
    double resolved_hard_shell() const {
        return hard_shell_radius ? *hard_shell_radius : base_spacing();
    }

    std::string to_json_string() const;
    static InstanceConfig from_json_string(const std::string& text);
    static InstanceConfig load(const std::string& path);
    void save(const std::string& path) const;
};

} // namespace bsmc

#endif // BSMC_CONFIG_HPP
