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

#ifndef BSMC_WORKBENCH_HPP
#define BSMC_WORKBENCH_HPP

#include <string>
#include <vector>

#include "bsmc/config.hpp"
#include "bsmc/diagnostics.hpp"
#include "bsmc/integrator.hpp"

namespace bsmc {

/// Fixed stream tags for deriving independent seeds from the config seed.
enum SeedStream : std::uint64_t {
    kSeedJitter = 1,
    kSeedSampling = 2,
    kSeedNoise = 3,
    kSeedEnsemble = 4,
    kSeedPartition = 5,
};

/// Assembled problem instance: grid, encoding unitary, Gram matrix and
/// potential parameters, all derived from one InstanceConfig.
struct InstanceContext {
    InstanceConfig config;
    SpatialGrid grid;
    EncodedUnitary encoded;
    GramMatrix gram;
    EfimovParams efimov;
    JitterConfig jitter;

    OccupationPattern input_pattern() const;
};

InstanceContext build_context(const InstanceConfig& cfg);

/// Grid for an arbitrary mode count anchored to the config's base grid:
/// the Appendix-style nested refinement when (m - base) is a multiple of
/// the gap count, otherwise a uniform grid over the same position span.
/// The hard-shell radius always stays at the base-grid spacing.
SpatialGrid grid_for_modes(const InstanceConfig& cfg, int modes);

/// Collision-free postselected distribution of the instance for a given
/// unitary and Gram matrix.
OutputDistribution instance_distribution(const InstanceConfig& cfg, const UnitaryMatrix& u,
                                         const GramMatrix& gram);

/// Exact de-biased estimate on the ideal instance (indistinguishable
/// photons, exact encoding unitary, base grid).
EnergyEstimate ideal_estimate(const InstanceConfig& cfg);

/// One row of the noise error budget.
struct BudgetRow {
    std::string system;
    EnergyEstimate estimate;      // ensemble mean for noisy-unitary rows
    double ensemble_stddev = 0.0; // across noise realizations
    int realizations = 1;
};

/// Error-budget table: fine-grid reference, ideal instance, then rows
/// with distinguishability and unitary noise switched on one at a time
/// and together, ending with fully distinguishable photons.
std::vector<BudgetRow> error_budget(const InstanceConfig& cfg);

/// Grid-refinement sweep with three curves: deterministic evaluation
/// including boundary points, deterministic excluding them, and the
/// jittered de-biased estimator.
SweepResult refine_modes_sweep(const InstanceConfig& cfg, const std::vector<int>& m_list);

/// Ensemble spread of the jittered estimator as a function of mode count
/// for several jitter sample counts; one curve per sample count with
/// mean and stddev over repeated seeds.
SweepResult jitter_convergence_sweep(const InstanceConfig& cfg, const std::vector<int>& m_list,
                                     const std::vector<std::int64_t>& n_list, int repeats);

/// Energy correction vs homogeneous photon overlap s.
SweepResult distinguishability_sweep(const InstanceConfig& cfg, const std::vector<double>& s_grid);

/// Energy correction vs mean amplitude fidelity, one ensemble of noisy
/// unitaries per noise scale, indistinguishable photons.
SweepResult fidelity_sweep(const InstanceConfig& cfg, const std::vector<double>& epsilon_grid,
                           int realizations);

/// Calibration of (potential constant, grid half-range) against target
/// values for the fine-grid reference and the base-grid instance. The
/// potential is linear in (C + 1/4), so for each half-range the constant
/// is solved exactly from the reference target and only the ratio
/// between the two grids is searched.
struct CalibrationPoint {
    double half_range = 0.0;
    double constant = 0.0; // solved C, negative when infeasible
    double e1_reference = 0.0;
    double e1_base = 0.0;
    double gap_fraction = 0.0; // (e1_base - e1_reference) / |e1_reference|
    bool feasible = false;     // solved C >= 0
    bool matched = false;      // all targets met
};

struct CalibrationReport {
    double target_reference = 0.0;
    double target_base = 0.0;
    double tolerance = 0.02;     // relative, on both targets
    double gap_limit = 0.01;     // |gap_fraction| must stay below this
    std::vector<CalibrationPoint> points;
    CalibrationPoint best;       // smallest target miss among feasible points
    bool matched = false;
};

CalibrationReport calibrate(const InstanceConfig& cfg, double target_reference,
                            double target_base, const std::vector<double>& half_range_grid);

/// Count-file comparison: TVD of the ingested distribution against the
/// ideal and the configured-noise simulations, per-pattern residuals, and
/// the energy estimate computed from the ingested distribution.
struct CompareReport {
    OutputDistribution ingested;
    OutputDistribution ideal;
    OutputDistribution noisy;
    double tvd_ideal = 0.0;
    double tvd_noisy = 0.0;
    EnergyEstimate e1_ingested;
    EnergyEstimate e1_ideal;
};

CompareReport compare_counts(const InstanceConfig& cfg, const std::string& counts_path);

} // namespace bsmc

#endif // BSMC_WORKBENCH_HPP
