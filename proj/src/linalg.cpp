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

#include "bsmc/linalg.hpp"

#include <cmath>
#include <cstring>
#include <stdexcept>
#include <vector>

#include "bsmc/rng.hpp"

namespace bsmc {

namespace {

void require_square(const ComplexMatrix& a, const char* op) {
    if (a.rows() != a.cols() || a.rows() < 1)
        throw std::invalid_argument(std::string(op) + ": matrix must be square and non-empty");
    if (!all_finite(a))
        throw std::invalid_argument(std::string(op) + ": matrix has non-finite entries");
}

} // namespace

bool all_finite(const ComplexMatrix& a) {
    for (Eigen::Index j = 0; j < a.cols(); ++j)
        for (Eigen::Index i = 0; i < a.rows(); ++i)
            if (!std::isfinite(a(i, j).real()) || !std::isfinite(a(i, j).imag())) return false;
    return true;
}

double unitarity_defect(const ComplexMatrix& a) {
    ComplexMatrix g = a.adjoint() * a;
    g.diagonal().array() -= 1.0;
    return g.cwiseAbs().maxCoeff();
}

UnitaryMatrix::UnitaryMatrix(ComplexMatrix entries, double tolerance)
    : entries_(std::move(entries)) {
    require_square(entries_, "UnitaryMatrix");
    defect_ = unitarity_defect(entries_);
    if (defect_ > tolerance)
        throw std::invalid_argument("UnitaryMatrix: unitarity defect " + std::to_string(defect_) +
                                    " exceeds tolerance");
}

UnitaryMatrix UnitaryMatrix::identity(Eigen::Index dim) {
    return UnitaryMatrix(ComplexMatrix::Identity(dim, dim));
}

Complex permanent(const ComplexMatrix& a) {
    require_square(a, "permanent");
    const int n = static_cast<int>(a.rows());
    if (n > 30) throw std::invalid_argument("permanent: dimension above the n <= 30 guard");

    if (n == 1) return a(0, 0);
    if (n == 2) return a(0, 0) * a(1, 1) + a(0, 1) * a(1, 0);
    if (n == 3)
        return a(0, 0) * (a(1, 1) * a(2, 2) + a(1, 2) * a(2, 1)) +
               a(0, 1) * (a(1, 0) * a(2, 2) + a(1, 2) * a(2, 0)) +
               a(0, 2) * (a(1, 0) * a(2, 1) + a(1, 1) * a(2, 0));

    // Ryser: Perm(A) = (-1)^n sum_{S != 0} (-1)^|S| prod_i sum_{j in S} A_ij.
    // Gray-code iteration updates the row sums with one column per step.
    std::vector<Complex> rowsum(static_cast<std::size_t>(n), Complex(0.0, 0.0));
    Complex total(0.0, 0.0);
    const std::uint64_t count = 1ULL << n;
    std::uint64_t gray_prev = 0;
    int popcount = 0;
    for (std::uint64_t k = 1; k < count; ++k) {
        const std::uint64_t gray = k ^ (k >> 1);
        const std::uint64_t diff = gray ^ gray_prev;
        const int j = std::countr_zero(diff);
        if (gray & diff) {
            for (int i = 0; i < n; ++i) rowsum[static_cast<std::size_t>(i)] += a(i, j);
            ++popcount;
        } else {
            for (int i = 0; i < n; ++i) rowsum[static_cast<std::size_t>(i)] -= a(i, j);
            --popcount;
        }
        Complex prod(1.0, 0.0);
        for (int i = 0; i < n; ++i) prod *= rowsum[static_cast<std::size_t>(i)];
        total += (popcount & 1) ? -prod : prod;
        gray_prev = gray;
    }
    return (n & 1) ? -total : total;
}

Complex permanent_glynn(const ComplexMatrix& a) {
    require_square(a, "permanent_glynn");
    const int n = static_cast<int>(a.rows());
    if (n > 30) throw std::invalid_argument("permanent_glynn: dimension above the n <= 30 guard");
    if (n == 1) return a(0, 0);

    // Glynn: Perm(A) = 2^{1-n} sum_{d in {+1} x {+-1}^{n-1}} (prod d) prod_i sum_j d_j A_ij.
    std::vector<Complex> colsum(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        Complex s(0.0, 0.0);
        for (int j = 0; j < n; ++j) s += a(i, j);
        colsum[static_cast<std::size_t>(i)] = s;
    }
    Complex total(1.0, 0.0);
    for (int i = 0; i < n; ++i) total *= colsum[static_cast<std::size_t>(i)];

    const std::uint64_t count = 1ULL << (n - 1);
    std::uint64_t gray_prev = 0;
    int parity = 1;
    for (std::uint64_t k = 1; k < count; ++k) {
        const std::uint64_t gray = k ^ (k >> 1);
        const std::uint64_t diff = gray ^ gray_prev;
        const int j = std::countr_zero(diff) + 1; // delta_0 is pinned to +1
        const double step = (gray & diff) ? -2.0 : 2.0;
        for (int i = 0; i < n; ++i) colsum[static_cast<std::size_t>(i)] += step * a(i, j);
        parity = -parity;
        Complex prod(static_cast<double>(parity), 0.0);
        for (int i = 0; i < n; ++i) prod *= colsum[static_cast<std::size_t>(i)];
        total += prod;
        gray_prev = gray;
    }
    return total * std::ldexp(1.0, 1 - n);
}

GurvitsEstimate gurvits_estimate(const ComplexMatrix& a, std::int64_t num_samples,
                                 std::uint64_t seed) {
    require_square(a, "gurvits_estimate");
    if (num_samples < 1) throw std::invalid_argument("gurvits_estimate: num_samples must be >= 1");
    const int n = static_cast<int>(a.rows());

    Rng rng(seed);
    Complex sum(0.0, 0.0);
    double sum_sq = 0.0; // sum of |X_k|^2 for the spread estimate
    std::vector<double> signs(static_cast<std::size_t>(n));
    for (std::int64_t k = 0; k < num_samples; ++k) {
        double prod_sign = 1.0;
        for (int i = 0; i < n; ++i) {
            const double s = static_cast<double>(rng.sign());
            signs[static_cast<std::size_t>(i)] = s;
            prod_sign *= s;
        }
        Complex term(prod_sign, 0.0);
        for (int j = 0; j < n; ++j) {
            Complex dot(0.0, 0.0);
            for (int i = 0; i < n; ++i) dot += signs[static_cast<std::size_t>(i)] * a(i, j);
            term *= dot;
        }
        sum += term;
        sum_sq += std::norm(term);
    }

    const double nd = static_cast<double>(num_samples);
    const Complex mean = sum / nd;
    double stderr_ = 0.0;
    if (num_samples > 1) {
        const double var = std::max(0.0, (sum_sq - nd * std::norm(mean)) / (nd - 1.0));
        stderr_ = std::sqrt(var / nd);
    }
    return {mean, stderr_};
}

UnitaryMatrix nearest_unitary(const ComplexMatrix& a) {
    require_square(a, "nearest_unitary");
    Eigen::JacobiSVD<ComplexMatrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
    if (svd.singularValues().minCoeff() <= 1e-12)
        throw std::invalid_argument("nearest_unitary: matrix is rank deficient");
    return UnitaryMatrix(svd.matrixU() * svd.matrixV().adjoint());
}

double amplitude_fidelity(const UnitaryMatrix& u_set, const UnitaryMatrix& u_get) {
    if (u_set.dim() != u_get.dim())
        throw std::invalid_argument("amplitude_fidelity: dimension mismatch");
    // Tr(|U_set^dag| |U_get|) = sum_ij |U_set_ij| |U_get_ij|
    const double trace =
        (u_set.matrix().cwiseAbs().array() * u_get.matrix().cwiseAbs().array()).sum();
    return trace / static_cast<double>(u_set.dim());
}

UnitaryMatrix haar_random_unitary(Eigen::Index dim, std::uint64_t seed) {
    if (dim < 1) throw std::invalid_argument("haar_random_unitary: dim must be >= 1");
    Rng rng(seed);
    ComplexMatrix g(dim, dim);
    for (Eigen::Index j = 0; j < dim; ++j)
        for (Eigen::Index i = 0; i < dim; ++i) g(i, j) = rng.complex_normal();
    Eigen::HouseholderQR<ComplexMatrix> qr(g);
    ComplexMatrix q = qr.householderQ();
    ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    // Fix the phase gauge so the distribution is Haar and not QR-convention
    // dependent.
    for (Eigen::Index j = 0; j < dim; ++j) {
        const Complex d = r(j, j);
        const double m = std::abs(d);
        q.col(j) *= (m > 0.0) ? d / m : Complex(1.0, 0.0);
    }
    return UnitaryMatrix(std::move(q));
}

std::uint64_t fingerprint(const ComplexMatrix& a) {
    // FNV-1a over the row-major entry bytes plus the shape.
    std::uint64_t h = 1469598103934665603ULL;
    auto feed = [&h](const void* data, std::size_t len) {
        const auto* p = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < len; ++i) {
            h ^= p[i];
            h *= 1099511628211ULL;
        }
    };
    const std::int64_t rows = a.rows(), cols = a.cols();
    feed(&rows, sizeof rows);
    feed(&cols, sizeof cols);
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            const double re = a(i, j).real(), im = a(i, j).imag();
            feed(&re, sizeof re);
            feed(&im, sizeof im);
        }
    return h;
}

} // namespace bsmc
