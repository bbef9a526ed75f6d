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

#include "bsmc/integrator.hpp"

#include <cmath>
#include <stdexcept>

#include "bsmc/errors.hpp"
#include "bsmc/parallel.hpp"
#include "bsmc/rng.hpp"

namespace bsmc {

namespace {

bool accept_configuration(const ParticleConfiguration& x, double d_hs, BoundaryRule rule) {
    return d_hs <= 0.0 || hard_shell(x, d_hs, rule);
}

} // namespace

PatternStats evaluate_pattern(const OccupationPattern& p, const SpatialGrid& grid,
                              const PotentialFn& potential, double d_hs, BoundaryRule rule,
                              const JitterConfig& jitter, std::uint64_t seed) {
    if (!p.collision_free())
        throw std::invalid_argument("evaluate_pattern: pattern has collisions");
    if (p.modes() != grid.modes())
        throw std::invalid_argument("evaluate_pattern: pattern length mismatch");

    const std::vector<int> modes = p.occupied_modes();
    const int n = static_cast<int>(modes.size());
    ParticleConfiguration x;
    x.positions.resize(static_cast<std::size_t>(n));

    PatternStats stats;
    if (!jitter.enabled) {
        for (int k = 0; k < n; ++k)
            x.positions[static_cast<std::size_t>(k)] = grid.position(modes[static_cast<std::size_t>(k)]);
        stats.draws = 1;
        if (accept_configuration(x, d_hs, rule)) {
            stats.acceptance = 1.0;
            stats.mean_v = potential(x);
        }
        return stats;
    }

    if (jitter.samples < 1)
        throw std::invalid_argument("evaluate_pattern: jitter needs at least one sample");

    Rng rng(seed);
    double sum_v = 0.0, sum_a = 0.0, sum_vv = 0.0, sum_va = 0.0;
    for (std::int64_t t = 0; t < jitter.samples; ++t) {
        for (int k = 0; k < n; ++k) {
            const int j = modes[static_cast<std::size_t>(k)];
            x.positions[static_cast<std::size_t>(k)] = rng.uniform(grid.bin_lo(j), grid.bin_hi(j));
        }
        // jittered draws almost surely avoid the boundary band, so the
        // rule does not matter here; keep it for uniformity
        if (accept_configuration(x, d_hs, rule)) {
            const double v = potential(x);
            sum_v += v;
            sum_a += 1.0;
            sum_vv += v * v;
            sum_va += v;
        }
    }
    const double nd = static_cast<double>(jitter.samples);
    stats.draws = jitter.samples;
    stats.mean_v = sum_v / nd;
    stats.acceptance = sum_a / nd;
    if (jitter.samples > 1) {
        // a is an indicator, so sum of a^2 equals sum_a and sum of v*a equals sum_v
        stats.var_v = std::max(0.0, (sum_vv - nd * stats.mean_v * stats.mean_v) / (nd - 1.0));
        stats.var_a =
            std::max(0.0, (sum_a - nd * stats.acceptance * stats.acceptance) / (nd - 1.0));
        stats.cov_va = (sum_va - nd * stats.mean_v * stats.acceptance) / (nd - 1.0);
    }
    return stats;
}

std::pair<double, double> jittered_evaluate(const OccupationPattern& p, const SpatialGrid& grid,
                                            const EfimovParams& params, BoundaryRule rule,
                                            const JitterConfig& jitter) {
    params.validate();
    const PotentialFn potential = [&params](const ParticleConfiguration& x) {
        return efimov_potential(x, params);
    };
    const PatternStats stats =
        evaluate_pattern(p, grid, potential, params.hard_shell_radius, rule, jitter, jitter.seed);
    return {stats.mean_v, stats.acceptance};
}

namespace {

EnergyEstimate combine_ratio(const std::vector<double>& weights,
                             const std::vector<PatternStats>& stats) {
    double num = 0.0, i0 = 0.0;
    double var_num = 0.0, var_i0 = 0.0, cov = 0.0;
    std::int64_t draws_total = 0;
    for (std::size_t i = 0; i < stats.size(); ++i) {
        const double w = weights[i];
        const PatternStats& s = stats[i];
        num += w * s.mean_v;
        i0 += w * s.acceptance;
        if (s.draws > 1) {
            const double scale = w * w / static_cast<double>(s.draws);
            var_num += scale * s.var_v;
            var_i0 += scale * s.var_a;
            cov += scale * s.cov_va;
        }
        draws_total += s.draws;
    }
    if (i0 <= 0.0)
        throw degenerate_error("energy estimate: accepted probability mass I0 is zero");

    EnergyEstimate est;
    est.e1 = num / i0;
    est.i0 = i0;
    est.n_samples = draws_total;
    const double var_ratio =
        (var_num - 2.0 * est.e1 * cov + est.e1 * est.e1 * var_i0) / (i0 * i0);
    est.stderr_ = std::sqrt(std::max(0.0, var_ratio));
    return est;
}

void fill_common_provenance(EnergyEstimate& est, const SpatialGrid& grid,
                            const EfimovParams& params, BoundaryRule rule,
                            const JitterConfig& jitter, std::uint64_t u_fingerprint) {
    est.provenance.modes = grid.modes();
    est.provenance.jitter_enabled = jitter.enabled;
    est.provenance.jitter_samples = jitter.enabled ? jitter.samples : 0;
    est.provenance.jitter_seed = jitter.seed;
    est.provenance.boundary_rule = rule == BoundaryRule::include ? "include" : "exclude";
    est.provenance.efimov_constant = params.potential_constant;
    est.provenance.half_range = grid.half_range();
    est.provenance.hard_shell_radius = params.hard_shell_radius;
    est.provenance.u_fingerprint = u_fingerprint;
}

} // namespace

EnergyEstimate exact_e1(const OutputDistribution& dist, const SpatialGrid& grid,
                        const EfimovParams& params, BoundaryRule rule,
                        const JitterConfig& jitter) {
    params.validate();
    if (!dist.meta.collision_free)
        throw std::invalid_argument("exact_e1: distribution must be collision-free postselected");
    if (dist.size() == 0) throw std::invalid_argument("exact_e1: empty distribution");

    const PotentialFn potential = [&params](const ParticleConfiguration& x) {
        return efimov_potential(x, params);
    };

    std::vector<PatternStats> stats(dist.size());
    parallel_for(dist.size(), [&](std::size_t i) {
        stats[i] = evaluate_pattern(dist.patterns[i], grid, potential, params.hard_shell_radius,
                                    rule, jitter, derive_seed(jitter.seed, i));
    });

    EnergyEstimate est = combine_ratio(dist.probs, stats);
    fill_common_provenance(est, grid, params, rule, jitter, dist.meta.u_fingerprint);
    if (dist.meta.gram) {
        est.provenance.mean_overlap = dist.meta.gram->mean_overlap();
    }
    return est;
}

EnergyEstimate sampled_e1(const std::vector<OccupationPattern>& samples, const SpatialGrid& grid,
                          const EfimovParams& params, BoundaryRule rule,
                          const JitterConfig& jitter) {
    params.validate();
    if (samples.empty()) throw std::invalid_argument("sampled_e1: empty sample list");

    const PotentialFn potential = [&params](const ParticleConfiguration& x) {
        return efimov_potential(x, params);
    };

    const std::size_t n = samples.size();
    std::vector<double> u(n), a(n);
    parallel_for(n, [&](std::size_t k) {
        const PatternStats s = evaluate_pattern(samples[k], grid, potential,
                                                params.hard_shell_radius, rule, jitter,
                                                derive_seed(jitter.seed, k));
        u[k] = s.mean_v;
        a[k] = s.acceptance;
    });

    double sum_u = 0.0, sum_a = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        sum_u += u[k];
        sum_a += a[k];
    }
    const double nd = static_cast<double>(n);
    const double mean_u = sum_u / nd, mean_a = sum_a / nd;
    if (mean_a <= 0.0)
        throw degenerate_error("sampled_e1: every sample was rejected, I0 estimate is zero");

    EnergyEstimate est;
    est.e1 = mean_u / mean_a;
    est.i0 = mean_a;
    est.n_samples = static_cast<std::int64_t>(n);
    if (n > 1) {
        double s_uu = 0.0, s_aa = 0.0, s_ua = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            const double du = u[k] - mean_u, da = a[k] - mean_a;
            s_uu += du * du;
            s_aa += da * da;
            s_ua += du * da;
        }
        const double denom = nd - 1.0;
        const double var_ratio = (s_uu / denom - 2.0 * est.e1 * (s_ua / denom) +
                                  est.e1 * est.e1 * (s_aa / denom)) /
                                 (mean_a * mean_a * nd);
        est.stderr_ = std::sqrt(std::max(0.0, var_ratio));
    }
    fill_common_provenance(est, grid, params, rule, jitter, 0);
    return est;
}

} // namespace bsmc
