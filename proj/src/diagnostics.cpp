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

#include "bsmc/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "bsmc/errors.hpp"
#include "bsmc/rng.hpp"

namespace bsmc {

namespace {

double binomial_coefficient(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double c = 1.0;
    for (int i = 1; i <= k; ++i) c *= static_cast<double>(n - k + i) / static_cast<double>(i);
    return c;
}

} // namespace

MarginalDistribution k_marginal(const OutputDistribution& dist, const std::vector<int>& modes,
                                int k) {
    const int n = dist.patterns.empty() ? 0 : dist.patterns.front().total();
    if (k < 0 || k > n) throw std::invalid_argument("k_marginal: order must lie in [0, n]");
    std::vector<int> subset = modes;
    std::sort(subset.begin(), subset.end());
    if (std::adjacent_find(subset.begin(), subset.end()) != subset.end())
        throw std::invalid_argument("k_marginal: duplicate mode in subset");
    const int m_full = dist.patterns.empty() ? 0 : dist.patterns.front().modes();
    for (int j : subset)
        if (j < 0 || j >= m_full) throw std::invalid_argument("k_marginal: mode out of range");

    MarginalDistribution marg;
    marg.k = k;
    marg.mode_subset = subset;
    marg.events = enumerate_patterns(static_cast<int>(subset.size()), k, false);
    marg.table.assign(marg.events.size(), 0.0);

    for (std::size_t pi = 0; pi < dist.patterns.size(); ++pi) {
        const OccupationPattern& p = dist.patterns[pi];
        const double w = dist.probs[pi];
        if (w == 0.0) continue;
        for (std::size_t ei = 0; ei < marg.events.size(); ++ei) {
            const OccupationPattern& ev = marg.events[ei];
            double ways = 1.0;
            for (std::size_t s = 0; s < subset.size() && ways > 0.0; ++s) {
                const int have = p.counts[static_cast<std::size_t>(subset[s])];
                const int want = ev.counts[s];
                ways *= binomial_coefficient(have, want);
            }
            if (ways > 0.0) marg.table[ei] += w * ways;
        }
    }
    return marg;
}

MarginalDistribution MarginalDistribution::reduce_order(int photons_total) const {
    if (k < 1) throw std::invalid_argument("reduce_order: already at order 0");
    MarginalDistribution out;
    out.k = k - 1;
    out.mode_subset = mode_subset;
    out.events = enumerate_patterns(static_cast<int>(mode_subset.size()), k - 1, false);
    out.table.assign(out.events.size(), 0.0);

    // rate_{k-1}(nu) = sum_j (nu_j + 1) rate_k(nu + e_j) / (n - k + 1)
    const double denom = static_cast<double>(photons_total - (k - 1));
    if (denom <= 0.0) throw std::invalid_argument("reduce_order: order exceeds photon number");
    for (std::size_t ei = 0; ei < out.events.size(); ++ei) {
        OccupationPattern nu = out.events[ei];
        double acc = 0.0;
        for (std::size_t j = 0; j < nu.counts.size(); ++j) {
            OccupationPattern up = nu;
            up.counts[j] += 1;
            // locate up in this marginal's canonical event list
            const auto it = std::lower_bound(events.begin(), events.end(), up,
                                             [](const OccupationPattern& a,
                                                const OccupationPattern& b) {
                                                 return a.counts > b.counts;
                                             });
            if (it == events.end() || !(*it == up)) continue;
            const std::size_t idx = static_cast<std::size_t>(it - events.begin());
            acc += static_cast<double>(nu.counts[j] + 1) * table[idx];
        }
        out.table[ei] = acc / denom;
    }
    return out;
}

double tvd(const OutputDistribution& p, const OutputDistribution& q) {
    if (p.size() != q.size()) throw std::invalid_argument("tvd: support size mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (!(p.patterns[i] == q.patterns[i]))
            throw std::invalid_argument("tvd: supports differ at index " + std::to_string(i));
        acc += std::abs(p.probs[i] - q.probs[i]);
    }
    return 0.5 * acc;
}

BinPartition BinPartition::from_assignment(const OutputDistribution& dist,
                                           std::vector<int> assignment, int num_bins) {
    if (assignment.size() != dist.size())
        throw std::invalid_argument("BinPartition: assignment length mismatch");
    if (num_bins < 1) throw std::invalid_argument("BinPartition: need at least one bin");

    BinPartition part;
    part.num_bins = num_bins;
    part.assignment = std::move(assignment);
    part.masses.assign(static_cast<std::size_t>(num_bins), 0.0);

    std::vector<double> lo(static_cast<std::size_t>(num_bins),
                           std::numeric_limits<double>::infinity());
    std::vector<double> hi(static_cast<std::size_t>(num_bins),
                           -std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < dist.size(); ++i) {
        const int b = part.assignment[i];
        if (b < 0 || b >= num_bins)
            throw std::invalid_argument("BinPartition: bin index out of range");
        part.masses[static_cast<std::size_t>(b)] += dist.probs[i];
        lo[static_cast<std::size_t>(b)] = std::min(lo[static_cast<std::size_t>(b)], dist.probs[i]);
        hi[static_cast<std::size_t>(b)] = std::max(hi[static_cast<std::size_t>(b)], dist.probs[i]);
    }
    part.flatness = 0.0;
    for (int b = 0; b < num_bins; ++b)
        if (hi[static_cast<std::size_t>(b)] >= lo[static_cast<std::size_t>(b)])
            part.flatness = std::max(part.flatness, hi[static_cast<std::size_t>(b)] -
                                                        lo[static_cast<std::size_t>(b)]);
    return part;
}

BinPartition BinPartition::singletons(const OutputDistribution& dist) {
    std::vector<int> assignment(dist.size());
    std::iota(assignment.begin(), assignment.end(), 0);
    return from_assignment(dist, std::move(assignment), static_cast<int>(dist.size()));
}

BinPartition BinPartition::single(const OutputDistribution& dist) {
    return from_assignment(dist, std::vector<int>(dist.size(), 0), 1);
}

BinPartition BinPartition::random(const OutputDistribution& dist, int num_bins,
                                  std::uint64_t seed) {
    if (num_bins < 1 || static_cast<std::size_t>(num_bins) > dist.size())
        throw std::invalid_argument("BinPartition: bin count out of range");
    Rng rng(seed);
    std::vector<int> assignment(dist.size());
    // keep every bin non-empty by seeding one pattern into each bin first
    std::vector<std::size_t> order(dist.size());
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t i = order.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng.uniform() * static_cast<double>(i));
        std::swap(order[i - 1], order[std::min(j, i - 1)]);
    }
    for (int b = 0; b < num_bins; ++b) assignment[order[static_cast<std::size_t>(b)]] = b;
    for (std::size_t i = static_cast<std::size_t>(num_bins); i < order.size(); ++i)
        assignment[order[i]] =
            static_cast<int>(rng.uniform() * static_cast<double>(num_bins)) % num_bins;
    return from_assignment(dist, std::move(assignment), num_bins);
}

CoarseGrainResult coarse_grain(const OutputDistribution& dist, const BinPartition& partition,
                               std::int64_t gurvits_samples, std::uint64_t seed) {
    if (partition.assignment.size() != dist.size())
        throw std::invalid_argument("coarse_grain: partition does not match the distribution");

    const int num_bins = partition.num_bins;
    std::vector<double> bin_sizes(static_cast<std::size_t>(num_bins), 0.0);
    for (int b : partition.assignment) bin_sizes[static_cast<std::size_t>(b)] += 1.0;

    CoarseGrainResult result;
    result.estimated_masses = partition.masses;
    result.deltas.assign(static_cast<std::size_t>(num_bins), 0.0);

    if (gurvits_samples > 0) {
        if (!dist.meta.unitary)
            throw std::invalid_argument(
                "coarse_grain: randomized mass estimation needs the generating unitary");
        const UnitaryMatrix u(*dist.meta.unitary);
        const double in_factorial = occupancy_factorial(dist.meta.mu_in);
        const double postselection = dist.meta.postselection_mass;
        std::vector<double> est(static_cast<std::size_t>(num_bins), 0.0);
        for (std::size_t i = 0; i < dist.size(); ++i) {
            const ComplexMatrix m = submatrix(u, dist.meta.mu_in, dist.patterns[i]);
            // |Perm|^2 from the product of two independent unbiased estimates
            const GurvitsEstimate g1 = gurvits_estimate(m, gurvits_samples, derive_seed(seed, i, 0));
            const GurvitsEstimate g2 = gurvits_estimate(m, gurvits_samples, derive_seed(seed, i, 1));
            const double norm = occupancy_factorial(dist.patterns[i]) * in_factorial;
            const double p_est =
                (g1.estimate * std::conj(g2.estimate)).real() / (norm * postselection);
            est[static_cast<std::size_t>(partition.assignment[i])] += p_est;
        }
        for (int b = 0; b < num_bins; ++b) {
            est[static_cast<std::size_t>(b)] = std::max(0.0, est[static_cast<std::size_t>(b)]);
            result.deltas[static_cast<std::size_t>(b)] =
                std::abs(est[static_cast<std::size_t>(b)] - partition.masses[static_cast<std::size_t>(b)]);
        }
        result.estimated_masses = std::move(est);
    }

    result.approx = dist;
    result.approx.prob_stderr.clear();
    for (std::size_t i = 0; i < dist.size(); ++i) {
        const int b = partition.assignment[i];
        result.approx.probs[i] =
            result.estimated_masses[static_cast<std::size_t>(b)] / bin_sizes[static_cast<std::size_t>(b)];
    }

    result.tvd_actual = tvd(dist, result.approx);
    result.tvd_bound = 0.0;
    for (int b = 0; b < num_bins; ++b)
        result.tvd_bound += partition.flatness * bin_sizes[static_cast<std::size_t>(b)] +
                            result.deltas[static_cast<std::size_t>(b)];
    return result;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) {
        // trim surrounding whitespace
        const auto b = field.find_first_not_of(" \t\r");
        const auto e = field.find_last_not_of(" \t\r");
        fields.push_back(b == std::string::npos ? "" : field.substr(b, e - b + 1));
    }
    if (!line.empty() && line.back() == ',') fields.push_back("");
    return fields;
}

} // namespace

OutputDistribution ingest_counts(std::istream& in, int modes, int photons) {
    OutputDistribution dist;
    dist.patterns = enumerate_patterns(modes, photons, true);
    std::vector<double> counts(dist.patterns.size(), 0.0);
    std::vector<double> variances(dist.patterns.size(), 0.0);

    std::string line;
    int line_no = 0;
    bool saw_any = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        const auto fields = split_csv_line(line);
        if (fields.empty() || (fields.size() == 1 && fields[0].empty())) continue;
        if (line_no == 1 && fields[0] == "pattern") continue; // header
        if (fields.size() < 2 || fields.size() > 3)
            throw data_error("counts line " + std::to_string(line_no) +
                             ": expected pattern,count[,efficiency_correction]");

        OccupationPattern p;
        try {
            p = OccupationPattern::from_string(fields[0]);
        } catch (const data_error& err) {
            throw data_error("counts line " + std::to_string(line_no) + ": " + err.what());
        }
        if (p.modes() != modes)
            throw data_error("counts line " + std::to_string(line_no) + ": pattern has " +
                             std::to_string(p.modes()) + " modes, expected " +
                             std::to_string(modes));
        if (!p.collision_free())
            throw data_error("counts line " + std::to_string(line_no) +
                             ": pattern has collisions, outside the collision-free support");

        double raw = 0.0, correction = 1.0;
        try {
            std::size_t pos = 0;
            raw = std::stod(fields[1], &pos);
            if (pos != fields[1].size()) throw std::invalid_argument("trailing characters");
            if (fields.size() == 3 && !fields[2].empty()) {
                correction = std::stod(fields[2], &pos);
                if (pos != fields[2].size()) throw std::invalid_argument("trailing characters");
            }
        } catch (const std::exception&) {
            throw data_error("counts line " + std::to_string(line_no) + ": malformed number");
        }
        if (raw < 0.0)
            throw data_error("counts line " + std::to_string(line_no) + ": negative count");
        if (correction <= 0.0)
            throw data_error("counts line " + std::to_string(line_no) +
                             ": efficiency correction must be positive");

        const std::ptrdiff_t idx = dist.index_of(p);
        if (idx < 0)
            throw data_error("counts line " + std::to_string(line_no) +
                             ": pattern outside the collision-free support");
        counts[static_cast<std::size_t>(idx)] += correction * raw;
        // Poisson on the raw count, scaled by the correction
        variances[static_cast<std::size_t>(idx)] += correction * correction * raw;
        saw_any = true;
    }
    if (!saw_any) throw data_error("counts file has no data rows");

    const double total = std::accumulate(counts.begin(), counts.end(), 0.0);
    if (total <= 0.0) throw data_error("counts file has zero total count");

    dist.probs.resize(counts.size());
    dist.prob_stderr.resize(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i) {
        dist.probs[i] = counts[i] / total;
        dist.prob_stderr[i] = std::sqrt(variances[i]) / total;
    }
    dist.meta.collision_free = true;
    dist.meta.postselection_mass = 1.0;
    dist.meta.mu_in = OccupationPattern(std::vector<int>(static_cast<std::size_t>(modes), 0));
    for (int k = 0; k < photons && k < modes; ++k)
        dist.meta.mu_in.counts[static_cast<std::size_t>(k)] = 1;
    return dist;
}

OutputDistribution ingest_counts_file(const std::string& path, int modes, int photons) {
    std::ifstream in(path);
    if (!in) throw data_error("cannot open counts file: " + path);
    return ingest_counts(in, modes, photons);
}

} // namespace bsmc
