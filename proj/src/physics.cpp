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

#include "bsmc/physics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bsmc {

double orbital(int i, double x) {
    if (i < 0) throw std::invalid_argument("orbital: index must be >= 0");
    if (!std::isfinite(x)) throw std::invalid_argument("orbital: position must be finite");

    // psi_0 = pi^(-1/4) exp(-x^2/2); psi_k = sqrt(2/k) x psi_{k-1}
    //                                        - sqrt((k-1)/k) psi_{k-2}
    const double psi0 = 0.7511255444649424828587030047762276930510 * std::exp(-0.5 * x * x);
    if (i == 0) return psi0;
    double prev = psi0;
    double cur = std::sqrt(2.0) * x * psi0;
    for (int k = 2; k <= i; ++k) {
        const double next =
            std::sqrt(2.0 / k) * x * cur - std::sqrt((k - 1.0) / k) * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

SpatialGrid::SpatialGrid(std::vector<double> positions, double spacing)
    : positions_(std::move(positions)), spacing_(spacing) {
    const std::size_t m = positions_.size();
    if (m < 2) throw std::invalid_argument("SpatialGrid: needs at least 2 modes");
    const double scale = std::abs(positions_.back());
    for (std::size_t j = 0; j + 1 < m; ++j)
        if (positions_[j + 1] <= positions_[j])
            throw std::invalid_argument("SpatialGrid: positions must be strictly increasing");
    for (std::size_t j = 0; j < m; ++j)
        if (std::abs(positions_[j] + positions_[m - 1 - j]) > 1e-12 * scale)
            throw std::invalid_argument("SpatialGrid: positions must be symmetric about 0");
}

SpatialGrid SpatialGrid::uniform(int modes, double half_range) {
    if (modes < 2) throw std::invalid_argument("SpatialGrid: needs at least 2 modes");
    if (!(half_range > 0.0)) throw std::invalid_argument("SpatialGrid: half_range must be > 0");
    const double dx = 2.0 * half_range / (modes - 1);
    std::vector<double> pos(static_cast<std::size_t>(modes));
    for (int j = 0; j < modes; ++j) {
        // evaluate from both ends so the grid is symmetric to the last bit
        const int mirror = modes - 1 - j;
        pos[static_cast<std::size_t>(j)] = 0.5 * (j * dx - half_range) - 0.5 * (mirror * dx - half_range);
    }
    return SpatialGrid(std::move(pos), dx);
}

SpatialGrid SpatialGrid::refined(int inserts_per_gap) const {
    if (inserts_per_gap < 0)
        throw std::invalid_argument("SpatialGrid: inserts_per_gap must be >= 0");
    if (inserts_per_gap == 0) return *this;
    const int k = inserts_per_gap;
    std::vector<double> pos;
    pos.reserve(positions_.size() + (positions_.size() - 1) * static_cast<std::size_t>(k));
    for (std::size_t j = 0; j + 1 < positions_.size(); ++j) {
        const double lo = positions_[j], hi = positions_[j + 1];
        pos.push_back(lo);
        for (int t = 1; t <= k; ++t)
            pos.push_back(lo + (hi - lo) * static_cast<double>(t) / (k + 1));
    }
    pos.push_back(positions_.back());
    // enforce exact mirror symmetry on the inserted points
    for (std::size_t j = 0; j < pos.size() / 2; ++j) {
        const double v = 0.5 * (pos[j] - pos[pos.size() - 1 - j]);
        pos[j] = v;
        pos[pos.size() - 1 - j] = -v;
    }
    if (pos.size() % 2 == 1) pos[pos.size() / 2] = 0.0;
    return SpatialGrid(std::move(pos), spacing_ / (k + 1));
}

double SpatialGrid::bin_lo(int j) const {
    if (j == 0) return positions_.front() - 0.5 * spacing_;
    return 0.5 * (positions_[static_cast<std::size_t>(j) - 1] + positions_[static_cast<std::size_t>(j)]);
}

double SpatialGrid::bin_hi(int j) const {
    if (j == modes() - 1) return positions_.back() + 0.5 * spacing_;
    return 0.5 * (positions_[static_cast<std::size_t>(j)] + positions_[static_cast<std::size_t>(j) + 1]);
}

std::vector<double> SpatialGrid::bin_edges() const {
    std::vector<double> edges;
    edges.reserve(positions_.size() + 1);
    edges.push_back(bin_lo(0));
    for (int j = 0; j < modes(); ++j) edges.push_back(bin_hi(j));
    return edges;
}

int SpatialGrid::snap(double x) const {
    const auto it = std::lower_bound(positions_.begin(), positions_.end(), x);
    if (it == positions_.begin()) return 0;
    if (it == positions_.end()) return modes() - 1;
    const auto prev = it - 1;
    return (x - *prev <= *it - x) ? static_cast<int>(prev - positions_.begin())
                                  : static_cast<int>(it - positions_.begin());
}

RealMatrix encoding_rows(const OrbitalSet& orbitals, const SpatialGrid& grid) {
    const int m = grid.modes();
    const int k = static_cast<int>(orbitals.indices.size());
    if (k < 1) throw std::invalid_argument("encoding_rows: empty orbital set");
    if (k > m) throw std::invalid_argument("encoding_rows: more orbitals than modes");
    RealMatrix rows(k, m);
    const double sqrt_dx = std::sqrt(grid.spacing());
    for (int r = 0; r < k; ++r) {
        for (int j = 0; j < m; ++j)
            rows(r, j) = sqrt_dx * orbital(orbitals.indices[static_cast<std::size_t>(r)],
                                           grid.position(j));
        const double norm = rows.row(r).norm();
        if (norm <= 1e-12)
            throw std::invalid_argument("encoding_rows: orbital has no support on the grid");
        rows.row(r) /= norm;
    }
    return rows;
}

EncodedUnitary encode_unitary(const OrbitalSet& orbitals, const SpatialGrid& grid) {
    const int m = grid.modes();
    const int k = static_cast<int>(orbitals.indices.size());
    const RealMatrix orbital_rows = encoding_rows(orbitals, grid);

    ComplexMatrix a(m, m);
    a.setZero();
    for (int r = 0; r < k; ++r)
        for (int j = 0; j < m; ++j) a(r, j) = Complex(orbital_rows(r, j), 0.0);

    // Complete with canonical basis vectors, Gram-Schmidt against the rows
    // accumulated so far.
    int filled = k;
    for (int cand = 0; cand < m && filled < m; ++cand) {
        Eigen::VectorXcd v = Eigen::VectorXcd::Zero(m);
        v(cand) = 1.0;
        for (int r = 0; r < filled; ++r) {
            const Complex proj = a.row(r).dot(v); // conjugates the row
            v -= proj * a.row(r).transpose();
        }
        const double norm = v.norm();
        if (norm > 1e-8) {
            a.row(filled) = v.transpose() / norm;
            ++filled;
        }
    }
    if (filled < m)
        throw std::invalid_argument("encode_unitary: grid too coarse to complete the basis");

    UnitaryMatrix u = nearest_unitary(a);
    double deviation = 0.0;
    for (int r = 0; r < k; ++r)
        for (int j = 0; j < m; ++j)
            deviation = std::max(deviation, std::abs(u.matrix()(r, j) - a(r, j)));
    return {std::move(u), deviation};
}

ParticleConfiguration pattern_to_configuration(const OccupationPattern& p,
                                               const SpatialGrid& grid) {
    if (!p.collision_free())
        throw std::invalid_argument(
            "pattern_to_configuration: pattern has collisions (excluded by the hard shell)");
    if (p.modes() != grid.modes())
        throw std::invalid_argument("pattern_to_configuration: pattern length mismatch");
    ParticleConfiguration x;
    for (int j = 0; j < p.modes(); ++j)
        if (p.counts[static_cast<std::size_t>(j)] > 0) x.positions.push_back(grid.position(j));
    return x;
}

void EfimovParams::validate() const {
    if (potential_constant < 0.0)
        throw std::invalid_argument("EfimovParams: potential constant must be >= 0");
    if (!(hard_shell_radius > 0.0))
        throw std::invalid_argument("EfimovParams: hard-shell radius must be > 0");
}

double efimov_potential(const ParticleConfiguration& x, const EfimovParams& params) {
    if (x.n() != 3) throw std::invalid_argument("efimov_potential: expects three particles");
    const double r12 = x.positions[0] - x.positions[1];
    const double r13 = x.positions[0] - x.positions[2];
    const double r23 = x.positions[1] - x.positions[2];
    const double r_sq = (2.0 / 3.0) * (r12 * r12 + r13 * r13 + r23 * r23);
    if (r_sq <= 1e-15)
        throw std::domain_error("efimov_potential: hyperradius vanishes (hard shell not applied?)");
    return -(params.potential_constant + 0.25) / r_sq;
}

bool hard_shell(const ParticleConfiguration& x, double d_hs, BoundaryRule rule) {
    if (!(d_hs > 0.0)) throw std::invalid_argument("hard_shell: d_hs must be > 0");
    const double band = 1e-9 * d_hs;
    const int n = x.n();
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double r = std::abs(x.positions[static_cast<std::size_t>(i)] -
                                      x.positions[static_cast<std::size_t>(j)]);
            if (r < d_hs - band) return false;
            if (r <= d_hs + band && rule == BoundaryRule::exclude) return false;
        }
    return true;
}

} // namespace bsmc
