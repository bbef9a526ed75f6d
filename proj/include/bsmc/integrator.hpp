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

#ifndef BSMC_INTEGRATOR_HPP
#define BSMC_INTEGRATOR_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "bsmc/pattern.hpp"
#include "bsmc/physics.hpp"
#include "bsmc/sampler.hpp"

namespace bsmc {

/// Per-configuration randomization of particle positions within their
/// mode bins. Disabled means deterministic evaluation at bin centers.
struct JitterConfig {
    bool enabled = true;
    std::int64_t samples = 1000; // draws per configuration
    std::uint64_t seed = 0;
};

/// Everything needed to re-run an estimate in isolation.
struct Provenance {
    int modes = 0;
    std::string gram = "s=1";
    double mean_overlap = 1.0;
    double epsilon = 0.0;
    double fidelity = 1.0;
    bool jitter_enabled = true;
    std::int64_t jitter_samples = 0;
    std::string boundary_rule = "include";
    double efimov_constant = 0.0;
    double half_range = 0.0;
    double hard_shell_radius = 0.0;
    std::uint64_t seed = 0;
    std::uint64_t jitter_seed = 0;
    std::uint64_t sample_seed = 0;
    std::uint64_t noise_seed = 0;
    std::uint64_t u_fingerprint = 0;
};

/// First-order energy correction in units of the unperturbed level
/// spacing, with the accepted probability mass I0 used for normalization.
struct EnergyEstimate {
    double e1 = 0.0;
    double stderr_ = 0.0;
    double i0 = 0.0;          // accepted probability mass, in (0, 1]
    std::int64_t n_samples = 0;
    Provenance provenance;
};

/// Jitter statistics for one configuration: per-draw means, sample
/// (co)variances of the accepted-potential value v and the acceptance
/// indicator a.
struct PatternStats {
    double mean_v = 0.0;
    double acceptance = 0.0;
    double var_v = 0.0;
    double var_a = 0.0;
    double cov_va = 0.0;
    std::int64_t draws = 0;
};

using PotentialFn = std::function<double(const ParticleConfiguration&)>;

/// Core bin evaluator. Draws jitter.samples position tuples uniformly
/// from the occupied modes' bins (or evaluates once at the bin centers
/// when jitter is disabled), applies the hard shell at radius d_hs
/// (d_hs = 0 disables it) and averages the potential over accepted
/// draws. Deterministic for a fixed seed.
PatternStats evaluate_pattern(const OccupationPattern& p, const SpatialGrid& grid,
                              const PotentialFn& potential, double d_hs, BoundaryRule rule,
                              const JitterConfig& jitter, std::uint64_t seed);

/// Spec'd convenience form over the three-body potential: returns the
/// jittered mean potential (rejected draws contribute zero) and the
/// accepted fraction.
std::pair<double, double> jittered_evaluate(const OccupationPattern& p, const SpatialGrid& grid,
                                            const EfimovParams& params, BoundaryRule rule,
                                            const JitterConfig& jitter);

/// Exact expectation of the de-biased estimator over an enumerated
/// collision-free distribution:
///   E1 = sum_p w_p mean_v(p) / I0,  I0 = sum_p w_p acceptance(p),
/// with common random numbers shared between numerator and denominator.
/// stderr reflects jitter randomness only (zero when disabled).
EnergyEstimate exact_e1(const OutputDistribution& dist, const SpatialGrid& grid,
                        const EfimovParams& params, BoundaryRule rule, const JitterConfig& jitter);

/// Monte Carlo average of jittered evaluations over drawn patterns,
/// normalized by the sampled acceptance mass; stderr by the first-order
/// delta method for the ratio.
EnergyEstimate sampled_e1(const std::vector<OccupationPattern>& samples, const SpatialGrid& grid,
                          const EfimovParams& params, BoundaryRule rule,
                          const JitterConfig& jitter);

struct SweepPoint {
    double abscissa = 0.0;
    EnergyEstimate estimate;
    double ensemble_stddev = 0.0; // across repeated seeds/realizations, 0 for single runs
};

struct SweepSeries {
    std::string name;
    std::vector<SweepPoint> points;
};

/// One or more curves over a common sweep axis.
struct SweepResult {
    std::string axis; // "modes" | "jitter" | "s" | "fidelity"
    std::vector<SweepSeries> series;
};

} // namespace bsmc

#endif // BSMC_INTEGRATOR_HPP
