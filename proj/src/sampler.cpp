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

#include "bsmc/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "bsmc/errors.hpp"
#include "bsmc/parallel.hpp"
#include "bsmc/rng.hpp"

namespace bsmc {

GramMatrix::GramMatrix(RealMatrix entries) : entries_(std::move(entries)) {
    const Eigen::Index n = entries_.rows();
    if (n < 1 || entries_.cols() != n)
        throw std::invalid_argument("GramMatrix: must be square and non-empty");
    for (Eigen::Index i = 0; i < n; ++i) {
        if (std::abs(entries_(i, i) - 1.0) > 1e-12)
            throw std::invalid_argument("GramMatrix: diagonal must be 1");
        for (Eigen::Index j = 0; j < n; ++j) {
            if (!std::isfinite(entries_(i, j)) || std::abs(entries_(i, j)) > 1.0 + 1e-12)
                throw std::invalid_argument("GramMatrix: overlaps must lie in [-1, 1]");
            if (std::abs(entries_(i, j) - entries_(j, i)) > 1e-12)
                throw std::invalid_argument("GramMatrix: must be symmetric");
        }
    }
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(entries_, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-10)
        throw std::invalid_argument("GramMatrix: not positive semidefinite");
}

GramMatrix GramMatrix::homogeneous(int dim, double s) {
    RealMatrix m = RealMatrix::Constant(dim, dim, s);
    m.diagonal().setOnes();
    return GramMatrix(std::move(m));
}

GramMatrix GramMatrix::identity(int dim) {
    return GramMatrix(RealMatrix::Identity(dim, dim));
}

GramMatrix GramMatrix::from_visibilities(int dim, const std::vector<double>& visibilities) {
    const std::size_t pairs = static_cast<std::size_t>(dim) * (dim - 1) / 2;
    if (visibilities.size() != pairs)
        throw std::invalid_argument("GramMatrix: expected one visibility per photon pair");
    RealMatrix m = RealMatrix::Identity(dim, dim);
    std::size_t k = 0;
    for (int i = 0; i < dim; ++i)
        for (int j = i + 1; j < dim; ++j, ++k) {
            const double v = visibilities[k];
            if (v < 0.0 || v > 1.0)
                throw std::invalid_argument("GramMatrix: visibility outside [0, 1]");
            m(i, j) = m(j, i) = std::sqrt(v);
        }
    return GramMatrix(std::move(m));
}

double GramMatrix::mean_overlap() const {
    const int n = dim();
    if (n < 2) return 1.0;
    double sum = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) sum += entries_(i, j);
    return sum / (static_cast<double>(n) * (n - 1) / 2.0);
}

bool GramMatrix::is_all_ones(double tol) const {
    return (entries_.array() - 1.0).abs().maxCoeff() <= tol;
}

bool GramMatrix::is_identity(double tol) const {
    return (entries_ - RealMatrix::Identity(dim(), dim())).cwiseAbs().maxCoeff() <= tol;
}

bool pattern_precedes(const OccupationPattern& a, const OccupationPattern& b) {
    return a.counts > b.counts;
}

std::ptrdiff_t OutputDistribution::index_of(const OccupationPattern& p) const {
    auto it = std::lower_bound(patterns.begin(), patterns.end(), p,
                               [](const OccupationPattern& x, const OccupationPattern& y) {
                                   return pattern_precedes(x, y);
                               });
    if (it == patterns.end() || !(*it == p)) return -1;
    return it - patterns.begin();
}

ComplexMatrix submatrix(const UnitaryMatrix& u, const OccupationPattern& mu_in,
                        const OccupationPattern& mu_out) {
    const int n = mu_in.total();
    if (n != mu_out.total())
        throw std::invalid_argument("submatrix: input and output photon totals differ");
    if (mu_in.modes() != u.dim() || mu_out.modes() != u.dim())
        throw std::invalid_argument("submatrix: pattern length does not match the unitary");
    const std::vector<int> in = mu_in.occupied_modes();
    const std::vector<int> out = mu_out.occupied_modes();
    ComplexMatrix m(n, n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c)
            m(r, c) = u.matrix()(in[static_cast<std::size_t>(c)], out[static_cast<std::size_t>(r)]);
    return m;
}

double output_probability(const UnitaryMatrix& u, const OccupationPattern& mu_in,
                          const OccupationPattern& mu_out) {
    const ComplexMatrix m = submatrix(u, mu_in, mu_out);
    const double norm = occupancy_factorial(mu_out) * occupancy_factorial(mu_in);
    return std::norm(permanent(m)) / norm;
}

namespace {

std::vector<std::vector<int>> all_permutations(int n) {
    std::vector<int> idx(static_cast<std::size_t>(n));
    std::iota(idx.begin(), idx.end(), 0);
    std::vector<std::vector<int>> perms;
    do {
        perms.push_back(idx);
    } while (std::next_permutation(idx.begin(), idx.end()));
    return perms;
}

} // namespace

double output_probability_partial(const UnitaryMatrix& u, const OccupationPattern& mu_in,
                                  const OccupationPattern& mu_out, const GramMatrix& s) {
    const int n = mu_in.total();
    if (s.dim() != n)
        throw std::invalid_argument("output_probability_partial: Gram dimension must equal n");
    if (n > 6)
        throw std::invalid_argument("output_probability_partial: n above the n <= 6 guard");

    const ComplexMatrix m = submatrix(u, mu_in, mu_out);
    const auto perms = all_permutations(n);

    // P = norm^-1 sum_{sigma,rho} prod_k S(sigma(k), rho(k))
    //                              conj(M(k, sigma(k))) M(k, rho(k))
    Complex acc(0.0, 0.0);
    for (const auto& sigma : perms) {
        for (const auto& rho : perms) {
            Complex term(1.0, 0.0);
            for (int k = 0; k < n; ++k) {
                const int sk = sigma[static_cast<std::size_t>(k)];
                const int rk = rho[static_cast<std::size_t>(k)];
                term *= s(sk, rk) * std::conj(m(k, sk)) * m(k, rk);
            }
            acc += term;
        }
    }
    const double norm = occupancy_factorial(mu_out) * occupancy_factorial(mu_in);
    return acc.real() / norm;
}

OutputDistribution enumerate_distribution(const UnitaryMatrix& u, const OccupationPattern& mu_in,
                                          const GramMatrix& s, bool collision_free) {
    const int n = mu_in.total();
    const int m = static_cast<int>(u.dim());
    if (mu_in.modes() != m)
        throw std::invalid_argument("enumerate_distribution: input pattern length mismatch");
    if (s.dim() != n)
        throw std::invalid_argument("enumerate_distribution: Gram dimension must equal n");

    OutputDistribution dist;
    dist.patterns = enumerate_patterns(m, n, collision_free);
    dist.probs.assign(dist.patterns.size(), 0.0);

    const bool indistinguishable = s.is_all_ones();
    const bool distinguishable = s.is_identity();

    parallel_for(dist.patterns.size(), [&](std::size_t i) {
        const OccupationPattern& out = dist.patterns[i];
        double p;
        if (indistinguishable) {
            p = output_probability(u, mu_in, out);
        } else if (distinguishable) {
            // permanent of the element-wise squared-modulus submatrix
            const ComplexMatrix sub = submatrix(u, mu_in, out);
            const ComplexMatrix sq = sub.cwiseAbs2().cast<Complex>();
            p = permanent(sq).real() /
                (occupancy_factorial(out) * occupancy_factorial(mu_in));
        } else {
            p = output_probability_partial(u, mu_in, out, s);
        }
        dist.probs[i] = std::max(0.0, p);
    });

    double total = std::accumulate(dist.probs.begin(), dist.probs.end(), 0.0);
    if (collision_free) {
        if (total <= 0.0)
            throw degenerate_error("enumerate_distribution: no collision-free probability mass");
        for (double& p : dist.probs) p /= total;
        dist.meta.postselection_mass = total;
    } else {
        dist.meta.postselection_mass = 1.0;
    }

    dist.meta.u_fingerprint = fingerprint(u.matrix());
    dist.meta.mu_in = mu_in;
    dist.meta.gram = s;
    dist.meta.collision_free = collision_free;
    dist.meta.unitary = u.matrix();
    return dist;
}

OutputDistribution enumerate_distribution(const UnitaryMatrix& u, const OccupationPattern& mu_in,
                                          bool collision_free) {
    return enumerate_distribution(u, mu_in, GramMatrix::homogeneous(mu_in.total(), 1.0),
                                  collision_free);
}

std::vector<std::uint32_t> sample_indices(const OutputDistribution& dist, std::int64_t n,
                                          std::uint64_t seed) {
    if (n < 0) throw std::invalid_argument("sample_indices: negative sample count");
    std::vector<std::uint32_t> out;
    if (n == 0) return out;
    if (dist.size() == 0) throw std::invalid_argument("sample_indices: empty distribution");

    std::vector<double> cdf(dist.size());
    std::partial_sum(dist.probs.begin(), dist.probs.end(), cdf.begin());
    const double total = cdf.back();
    if (total <= 0.0) throw degenerate_error("sample_indices: distribution has zero mass");

    out.reserve(static_cast<std::size_t>(n));
    Rng rng(seed);
    for (std::int64_t k = 0; k < n; ++k) {
        const double x = rng.uniform() * total;
        const auto it = std::upper_bound(cdf.begin(), cdf.end(), x);
        const std::size_t idx = std::min<std::size_t>(
            static_cast<std::size_t>(it - cdf.begin()), dist.size() - 1);
        out.push_back(static_cast<std::uint32_t>(idx));
    }
    return out;
}

std::vector<OccupationPattern> sample_patterns(const OutputDistribution& dist, std::int64_t n,
                                               std::uint64_t seed) {
    const auto idx = sample_indices(dist, n, seed);
    std::vector<OccupationPattern> out;
    out.reserve(idx.size());
    for (std::uint32_t i : idx) out.push_back(dist.patterns[i]);
    return out;
}

PerturbedUnitary perturb_unitary(const UnitaryMatrix& u, double epsilon, std::uint64_t seed) {
    if (epsilon < 0.0) throw std::invalid_argument("perturb_unitary: epsilon must be >= 0");
    if (epsilon == 0.0) return {u, amplitude_fidelity(u, u)};
    Rng rng(seed);
    ComplexMatrix noisy = u.matrix();
    for (Eigen::Index j = 0; j < noisy.cols(); ++j)
        for (Eigen::Index i = 0; i < noisy.rows(); ++i)
            noisy(i, j) += epsilon * rng.complex_normal();
    UnitaryMatrix projected = nearest_unitary(noisy);
    const double f = amplitude_fidelity(u, projected);
    return {std::move(projected), f};
}

double epsilon_for_fidelity(const UnitaryMatrix& u, double target_fidelity, int realizations,
                            std::uint64_t seed) {
    if (realizations < 1)
        throw std::invalid_argument("epsilon_for_fidelity: realizations must be >= 1");
    if (target_fidelity > 1.0 || target_fidelity <= 0.0)
        throw config_error("epsilon_for_fidelity: target fidelity must lie in (0, 1]");
    if (target_fidelity == 1.0) return 0.0;

    auto mean_fidelity = [&](double eps) {
        std::vector<double> f(static_cast<std::size_t>(realizations));
        parallel_for(f.size(), [&](std::size_t r) {
            f[r] = perturb_unitary(u, eps, derive_seed(seed, r)).fidelity;
        });
        return std::accumulate(f.begin(), f.end(), 0.0) / static_cast<double>(realizations);
    };

    double lo = 0.0, hi = 0.05;
    while (mean_fidelity(hi) > target_fidelity) {
        lo = hi;
        hi *= 2.0;
        if (hi > 64.0)
            throw config_error("epsilon_for_fidelity: target below the large-noise plateau");
    }
    for (int it = 0; it < 40; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mean_fidelity(mid) > target_fidelity)
            lo = mid;
        else
            hi = mid;
        if (hi - lo < 1e-6) break;
    }
    return 0.5 * (lo + hi);
}

} // namespace bsmc
