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

#ifndef BSMC_PHYSICS_HPP
#define BSMC_PHYSICS_HPP

#include <vector>

#include "bsmc/linalg.hpp"
#include "bsmc/pattern.hpp"

namespace bsmc {

/// Normalized harmonic-oscillator eigenfunction psi_i(x) in oscillator
/// units, evaluated by the stable three-term recurrence (no factorial
/// overflow through i ~ 50).
double orbital(int i, double x);

/// Uniform spatial discretization, positions symmetric about 0 in
/// oscillator-length units. Mode bins are the regions between midpoints
/// of neighboring positions; the outer bins extend half a spacing beyond
/// the outermost positions so every bin has the same width.
class SpatialGrid {
  public:
    /// modes uniformly spaced positions spanning [-half_range, half_range].
    static SpatialGrid uniform(int modes, double half_range);

    /// Nested refinement: inserts the given number of equally spaced
    /// points into each gap, preserving the original positions exactly.
    SpatialGrid refined(int inserts_per_gap) const;

    int modes() const { return static_cast<int>(positions_.size()); }
    double spacing() const { return spacing_; }
    double half_range() const { return positions_.back(); }
    const std::vector<double>& positions() const { return positions_; }
    double position(int j) const { return positions_[static_cast<std::size_t>(j)]; }

    double bin_lo(int j) const;
    double bin_hi(int j) const;
    /// modes + 1 edges: outer edges plus interior midpoints.
    std::vector<double> bin_edges() const;

    /// Index of the mode whose position is nearest to x.
    int snap(double x) const;

  private:
    SpatialGrid(std::vector<double> positions, double spacing);

    std::vector<double> positions_;
    double spacing_;
};

/// Orbital quantum numbers of the occupied single-particle states.
struct OrbitalSet {
    std::vector<int> indices{0, 1, 2};
};

/// 1-D positions of the n particles, ascending, oscillator-length units.
struct ParticleConfiguration {
    std::vector<double> positions;

    int n() const { return static_cast<int>(positions.size()); }
};

struct EncodedUnitary {
    UnitaryMatrix unitary;
    /// Max element-wise deviation between the projected unitary and the
    /// raw orbital rows.
    double raw_deviation;
};

/// Row-normalized raw encoding rows sqrt(dx) psi_i(chi_j), one row per
/// orbital. These become the first rows of the encoding unitary before
/// projection.
RealMatrix encoding_rows(const OrbitalSet& orbitals, const SpatialGrid& grid);

/// Builds the m x m encoding matrix whose first rows are the orbital
/// rows, completes the remaining rows to an orthonormal basis, and
/// projects the result onto the nearest unitary.
EncodedUnitary encode_unitary(const OrbitalSet& orbitals, const SpatialGrid& grid);

/// Maps a collision-free pattern to the particle positions of its
/// occupied modes, ascending.
ParticleConfiguration pattern_to_configuration(const OccupationPattern& p,
                                               const SpatialGrid& grid);

struct EfimovParams {
    double potential_constant = 0.0; // C >= 0, dimensionless
    double hard_shell_radius = 0.0;  // d_HS > 0; defaults to the base grid spacing

    void validate() const;
};

/// Attractive three-body potential -(C + 1/4) / R^2 with the squared
/// hyperradius R^2 = (2/3)(r12^2 + r13^2 + r23^2). Strictly negative;
/// diverges as R -> 0, so callers must enforce the hard shell first.
double efimov_potential(const ParticleConfiguration& x, const EfimovParams& params);

/// Boundary convention for configurations with a pairwise distance
/// exactly at the hard-shell radius.
enum class BoundaryRule { include, exclude };

/// True when every pairwise distance clears the hard-shell radius. Ties
/// within a 1e-9 relative band around d_hs count as boundary points and
/// are resolved by the rule: include accepts them, exclude rejects.
bool hard_shell(const ParticleConfiguration& x, double d_hs, BoundaryRule rule);

} // namespace bsmc

#endif // BSMC_PHYSICS_HPP
