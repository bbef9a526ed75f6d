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

#ifndef BSMC_LINALG_HPP
#define BSMC_LINALG_HPP

#include <complex>
#include <cstdint>

#include <Eigen/Dense>

namespace bsmc {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;

/// Tolerance on ||U^dag U - I||_max accepted at UnitaryMatrix construction.
/// About 100x the double-precision accumulation error at dimension 12.
inline constexpr double kUnitarityTolerance = 1e-10;

/// Max-norm of A^dag A - I.
double unitarity_defect(const ComplexMatrix& a);

/// True when every entry is finite.
bool all_finite(const ComplexMatrix& a);

/// Square complex matrix certified unitary at construction.
class UnitaryMatrix {
  public:
    explicit UnitaryMatrix(ComplexMatrix entries, double tolerance = kUnitarityTolerance);

    static UnitaryMatrix identity(Eigen::Index dim);

    Eigen::Index dim() const { return entries_.rows(); }
    const ComplexMatrix& matrix() const { return entries_; }
    double defect() const { return defect_; }

  private:
    ComplexMatrix entries_;
    double defect_;
};

/// Permanent of a square matrix, Ryser's formula with Gray-code updates,
/// O(2^n n). Guarded at n <= 30.
Complex permanent(const ComplexMatrix& a);

/// Glynn's formula with Gray-code updates, same complexity. Kept as an
/// independent route for cross-checking the Ryser path.
Complex permanent_glynn(const ComplexMatrix& a);

struct GurvitsEstimate {
    Complex estimate;
    double stderr_; // sample standard deviation / sqrt(num_samples)
};

/// Unbiased randomized permanent estimator (Glynn-type random-sign
/// sampling). Additive error decays as num_samples^(-1/2) for matrices
/// with entries bounded by 1. Deterministic for a fixed seed.
GurvitsEstimate gurvits_estimate(const ComplexMatrix& a, std::int64_t num_samples,
                                 std::uint64_t seed);

/// Polar factor U = W V^dag of the SVD A = W S V^dag: the unitary closest
/// to A in Frobenius norm. Requires full rank (singular values > 1e-12).
UnitaryMatrix nearest_unitary(const ComplexMatrix& a);

/// (1/m) Tr(|U_set^dag| |U_get|) with element-wise moduli. Equals the
/// normalized sum of |U_set_ij| |U_get_ij| and is symmetric in its
/// arguments. Reported raw; round-off can exceed 1 by ~1e-9 when column
/// moduli are not exactly normalized.
double amplitude_fidelity(const UnitaryMatrix& u_set, const UnitaryMatrix& u_get);

/// Haar-distributed random unitary (QR of a Ginibre matrix with the phase
/// convention fixed). Deterministic for a fixed seed.
UnitaryMatrix haar_random_unitary(Eigen::Index dim, std::uint64_t seed);

/// Order-independent content hash of the matrix bytes, for provenance.
std::uint64_t fingerprint(const ComplexMatrix& a);

} // namespace bsmc

#endif // BSMC_LINALG_HPP
