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

#ifndef BSMC_SAMPLER_HPP
#define BSMC_SAMPLER_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bsmc/linalg.hpp"
#include "bsmc/pattern.hpp"

namespace bsmc {

/// Pairwise photon wave-function overlaps s_ij controlling partial
/// distinguishability. Symmetric, unit diagonal, positive semidefinite.
/// s = 1 everywhere means fully indistinguishable photons, s_ij = delta_ij
/// means classical (fully distinguishable) particles.
class GramMatrix {
  public:
    explicit GramMatrix(RealMatrix entries);

    /// Equal overlap s for every photon pair.
    static GramMatrix homogeneous(int dim, double s);
    static GramMatrix identity(int dim);

    /// Overlaps from two-photon interference dip visibilities V = s^2,
    /// upper-triangle row-major order: (0,1), (0,2), ..., (1,2), ...
    static GramMatrix from_visibilities(int dim, const std::vector<double>& visibilities);

    int dim() const { return static_cast<int>(entries_.rows()); }
    const RealMatrix& matrix() const { return entries_; }
    double operator()(int i, int j) const { return entries_(i, j); }

    /// Mean off-diagonal overlap, the single-number summary reported in
    /// provenance records.
    double mean_overlap() const;

    bool is_all_ones(double tol = 1e-14) const;
    bool is_identity(double tol = 1e-14) const;

  private:
    RealMatrix entries_;
};

struct DistributionMeta {
    std::uint64_t u_fingerprint = 0;
    OccupationPattern mu_in;
    std::optional<GramMatrix> gram; // absent means indistinguishable
    bool collision_free = false;
    double postselection_mass = 1.0; // collision-free mass before renormalization
    std::optional<ComplexMatrix> unitary; // generating matrix, when available
};

/// Normalized probability table over admissible output patterns, in the
/// canonical pattern order, tagged with its generation parameters.
struct OutputDistribution {
    std::vector<OccupationPattern> patterns;
    std::vector<double> probs;
    std::vector<double> prob_stderr; // only populated for ingested count data
    DistributionMeta meta;

    std::size_t size() const { return patterns.size(); }

    /// Index of a pattern in the canonical ordering, or -1 if absent.
    std::ptrdiff_t index_of(const OccupationPattern& p) const;
};

/// True when a precedes b in the canonical output ordering (descending
/// lexicographic on the count vector).
bool pattern_precedes(const OccupationPattern& a, const OccupationPattern& b);

/// The n x n transition submatrix between the occupied input and output
/// modes: with the convention U(i, j) = amplitude from input mode i to
/// output mode j, column c repeats per input occupancy and row r per
/// output occupancy, M(r, c) = U(in[c], out[r]).
ComplexMatrix submatrix(const UnitaryMatrix& u, const OccupationPattern& mu_in,
                        const OccupationPattern& mu_out);

/// |Perm(M)|^2 / (prod mu_out! prod mu_in!), exact for indistinguishable
/// photons. Sums to 1 over all output patterns.
double output_probability(const UnitaryMatrix& u, const OccupationPattern& mu_in,
                          const OccupationPattern& mu_out);

/// Output probability under partial distinguishability: double sum over
/// permutation pairs weighted by Gram-matrix overlaps. Reduces to
/// output_probability when S is all ones and to the distinguishable-
/// particle probability (permanent of element-wise |M|^2) when S is the
/// identity. Cost (n!)^2; guarded at n <= 6.
double output_probability_partial(const UnitaryMatrix& u, const OccupationPattern& mu_in,
                                  const OccupationPattern& mu_out, const GramMatrix& s);

/// Full or collision-free output distribution. When collision_free is
/// set, probabilities are renormalized over the collision-free support
/// and the retained mass is recorded in meta.postselection_mass.
OutputDistribution enumerate_distribution(const UnitaryMatrix& u, const OccupationPattern& mu_in,
                                          const GramMatrix& s, bool collision_free);

/// Indistinguishable-photon shorthand (all-ones Gram matrix).
OutputDistribution enumerate_distribution(const UnitaryMatrix& u, const OccupationPattern& mu_in,
                                          bool collision_free);

/// N i.i.d. draws by inverse CDF over the stored ordering; deterministic
/// for a fixed seed.
std::vector<OccupationPattern> sample_patterns(const OutputDistribution& dist, std::int64_t n,
                                               std::uint64_t seed);

/// Index-valued variant of sample_patterns.
std::vector<std::uint32_t> sample_indices(const OutputDistribution& dist, std::int64_t n,
                                          std::uint64_t seed);

struct PerturbedUnitary {
    UnitaryMatrix unitary;
    double fidelity; // amplitude fidelity against the unperturbed input
};

/// Adds i.i.d. complex Gaussian noise of scale epsilon to every element
/// and projects back to the nearest unitary. Fidelity is measured after
/// projection.
PerturbedUnitary perturb_unitary(const UnitaryMatrix& u, double epsilon, std::uint64_t seed);

/// Noise scale whose ensemble-mean amplitude fidelity hits the target,
/// solved by bisection over a fixed set of noise realizations.
double epsilon_for_fidelity(const UnitaryMatrix& u, double target_fidelity, int realizations,
                            std::uint64_t seed);

} // namespace bsmc

#endif // BSMC_SAMPLER_HPP
