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

#ifndef BSMC_DIAGNOSTICS_HPP
#define BSMC_DIAGNOSTICS_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "bsmc/pattern.hpp"
#include "bsmc/sampler.hpp"

namespace bsmc {

/// k-photon detection rates over a mode subset: for each way nu of
/// placing k photons on the subset, the expected number of matching
/// k-fold coincidences, E[prod_j C(n_j, nu_j)]. For k = 1 these are the
/// single-mode expected counts (summing to n over all modes); for k = n
/// on all modes the table recovers the distribution itself.
struct MarginalDistribution {
    int k = 0;
    std::vector<int> mode_subset;            // ascending mode indices
    std::vector<OccupationPattern> events;   // occupations of the subset, canonical order
    std::vector<double> table;               // rate per event

    /// Contracts a (k+1)-order marginal to order k on the same subset.
    MarginalDistribution reduce_order(int photons_total) const;
};

/// Exact summation over the enumerated distribution.
MarginalDistribution k_marginal(const OutputDistribution& dist, const std::vector<int>& modes,
                                int k);

/// Total variation distance (1/2) sum |P - Q| over a shared support.
double tvd(const OutputDistribution& p, const OutputDistribution& q);

/// Partition of the output patterns into disjoint bins, with per-bin
/// probability masses and the flatness parameter (max intra-bin spread).
struct BinPartition {
    int num_bins = 0;
    std::vector<int> assignment; // pattern index -> bin index
    std::vector<double> masses;  // exact per-bin mass G_k
    double flatness = 0.0;       // max over bins of intra-bin probability spread

    static BinPartition from_assignment(const OutputDistribution& dist,
                                        std::vector<int> assignment, int num_bins);
    /// One bin per pattern.
    static BinPartition singletons(const OutputDistribution& dist);
    /// Everything in one bin.
    static BinPartition single(const OutputDistribution& dist);
    /// Uniformly random assignment of patterns to num_bins bins.
    static BinPartition random(const OutputDistribution& dist, int num_bins, std::uint64_t seed);
};

struct CoarseGrainResult {
    OutputDistribution approx;      // per-bin mass spread uniformly within each bin
    double tvd_bound = 0.0;         // sum_k (flatness |B_k| + delta_k)
    double tvd_actual = 0.0;
    std::vector<double> estimated_masses; // randomized mass estimates (exact when disabled)
    std::vector<double> deltas;           // |exact - estimated| per bin
};

/// Coarse-grained flatness approximation: redistributes the (randomized)
/// per-bin mass uniformly within each bin and checks the total-variation
/// bound against the actual distance. gurvits_samples = 0 keeps the exact
/// masses (deltas vanish); otherwise each pattern probability in a bin is
/// estimated from a product of two independent randomized permanent
/// estimates, which requires the generating unitary in dist.meta.
CoarseGrainResult coarse_grain(const OutputDistribution& dist, const BinPartition& partition,
                               std::int64_t gurvits_samples, std::uint64_t seed);

/// Reads a count CSV ("pattern,count" with an optional multiplicative
/// "efficiency_correction" column) over the collision-free support of
/// the given instance size and returns the normalized distribution with
/// Poisson (sqrt-count) uncertainties.
OutputDistribution ingest_counts(std::istream& in, int modes, int photons);
OutputDistribution ingest_counts_file(const std::string& path, int modes, int photons);

} // namespace bsmc

#endif // BSMC_DIAGNOSTICS_HPP
