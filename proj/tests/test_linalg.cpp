#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "bsmc/linalg.hpp"
#include "bsmc/rng.hpp"

using namespace bsmc;

namespace {

ComplexMatrix random_complex(int n, std::uint64_t seed) {
    Rng rng(seed);
    ComplexMatrix a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = Complex(rng.uniform(-1, 1), rng.uniform(-1, 1));
    return a;
}

// Direct permutation-sum oracle, usable up to n ~ 8.
Complex permanent_oracle(const ComplexMatrix& a) {
    const int n = static_cast<int>(a.rows());
    std::vector<int> idx(static_cast<std::size_t>(n));
    std::iota(idx.begin(), idx.end(), 0);
    Complex sum(0.0, 0.0);
    do {
        Complex prod(1.0, 0.0);
        for (int i = 0; i < n; ++i) prod *= a(i, idx[static_cast<std::size_t>(i)]);
        sum += prod;
    } while (std::next_permutation(idx.begin(), idx.end()));
    return sum;
}

} // namespace

TEST_CASE("permanent matches hand values") {
    ComplexMatrix id2 = ComplexMatrix::Identity(2, 2);
    CHECK(permanent(id2).real() == doctest::Approx(1.0).epsilon(1e-14));

    ComplexMatrix m(2, 2);
    m << Complex(1, 0), Complex(2, 0), Complex(3, 0), Complex(4, 0);
    CHECK(permanent(m).real() == doctest::Approx(10.0).epsilon(1e-14));

    ComplexMatrix ones = ComplexMatrix::Constant(3, 3, Complex(1, 0));
    CHECK(permanent(ones).real() == doctest::Approx(6.0).epsilon(1e-14));
}

TEST_CASE("permanent agrees with the permutation-sum oracle") {
    for (int n = 2; n <= 5; ++n) {
        for (int rep = 0; rep < 10; ++rep) {
            const ComplexMatrix a = random_complex(n, derive_seed(77, n, rep));
            const Complex fast = permanent(a);
            const Complex slow = permanent_oracle(a);
            CHECK(std::abs(fast - slow) <= 1e-12 * std::max(1.0, std::abs(slow)));
        }
    }
}

TEST_CASE("ryser and glynn routes agree") {
    for (int n = 2; n <= 7; ++n) {
        const ComplexMatrix a = random_complex(n, derive_seed(31, n));
        const Complex r = permanent(a);
        const Complex g = permanent_glynn(a);
        CHECK(std::abs(r - g) <= 1e-11 * std::max(1.0, std::abs(r)));
    }
}

TEST_CASE("permanent is multilinear in rows") {
    for (int n = 2; n <= 4; ++n) {
        ComplexMatrix a = random_complex(n, derive_seed(13, n));
        const Complex base = permanent(a);
        const Complex c(0.7, -1.3);
        a.row(n - 1) *= c;
        CHECK(std::abs(permanent(a) - c * base) <= 1e-12 * std::abs(c * base));
    }
}

TEST_CASE("permanent invariant under row and column permutation") {
    const ComplexMatrix a = random_complex(4, 99);
    ComplexMatrix b(4, 4);
    const int rows[4] = {2, 0, 3, 1};
    const int cols[4] = {1, 3, 0, 2};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) b(i, j) = a(rows[i], cols[j]);
    CHECK(std::abs(permanent(a) - permanent(b)) <= 1e-12 * std::abs(permanent(a)));
}

TEST_CASE("permanent rejects bad input") {
    CHECK_THROWS_AS(permanent(ComplexMatrix::Zero(2, 3)), std::invalid_argument);
    ComplexMatrix nan = ComplexMatrix::Zero(2, 2);
    nan(0, 0) = Complex(std::nan(""), 0.0);
    CHECK_THROWS_AS(permanent(nan), std::invalid_argument);
    CHECK_THROWS_AS(permanent(ComplexMatrix::Identity(31, 31)), std::invalid_argument);
}

TEST_CASE("gurvits estimate on all-zero matrix is exactly zero") {
    const auto est = gurvits_estimate(ComplexMatrix::Zero(3, 3), 50, 1);
    CHECK(est.estimate == Complex(0.0, 0.0));
    CHECK(est.stderr_ == 0.0);
}

TEST_CASE("gurvits estimate converges on the identity") {
    const auto est = gurvits_estimate(ComplexMatrix::Identity(3, 3), 100000, 42);
    CHECK(std::abs(est.estimate - Complex(1.0, 0.0)) <= 3.0 * est.stderr_);
}

TEST_CASE("gurvits stderr halves when samples quadruple") {
    const ComplexMatrix a = haar_random_unitary(5, 7).matrix().topLeftCorner(3, 3);
    double se_n = 0.0, se_4n = 0.0;
    const int reps = 12;
    for (int r = 0; r < reps; ++r) {
        se_n += gurvits_estimate(a, 20000, derive_seed(5, r)).stderr_;
        se_4n += gurvits_estimate(a, 80000, derive_seed(6, r)).stderr_;
    }
    const double ratio = se_n / se_4n;
    CHECK(ratio > 2.0 * 0.8);
    CHECK(ratio < 2.0 * 1.2);
}

TEST_CASE("gurvits mean over seeds brackets the exact permanent") {
    // random 3x3 submatrices of Haar unitaries, 50 independent seeds
    const ComplexMatrix a = haar_random_unitary(6, 11).matrix().topLeftCorner(3, 3);
    const Complex exact = permanent(a);
    Complex mean(0.0, 0.0);
    double var_of_mean = 0.0;
    const int seeds = 50;
    for (int s = 0; s < seeds; ++s) {
        const auto est = gurvits_estimate(a, 2000, derive_seed(21, s));
        mean += est.estimate;
        var_of_mean += est.stderr_ * est.stderr_;
    }
    mean /= static_cast<double>(seeds);
    const double combined = std::sqrt(var_of_mean) / static_cast<double>(seeds);
    CHECK(std::abs(mean - exact) <= 4.0 * combined);
}

TEST_CASE("nearest_unitary fixes a unitary and projects diagonals") {
    const UnitaryMatrix u = haar_random_unitary(4, 3);
    const UnitaryMatrix projected = nearest_unitary(u.matrix());
    CHECK((projected.matrix() - u.matrix()).norm() <= 1e-12);

    ComplexMatrix d = ComplexMatrix::Zero(2, 2);
    d(0, 0) = 2.0;
    d(1, 1) = 3.0;
    const UnitaryMatrix pd = nearest_unitary(d);
    CHECK((pd.matrix() - ComplexMatrix::Identity(2, 2)).norm() <= 1e-12);
}

TEST_CASE("nearest_unitary improves a perturbed unitary") {
    const UnitaryMatrix u = haar_random_unitary(5, 17);
    Rng rng(23);
    ComplexMatrix noisy = u.matrix();
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) noisy(i, j) += 0.02 * rng.complex_normal();
    const UnitaryMatrix projected = nearest_unitary(noisy);
    CHECK(projected.defect() <= 1e-10);
    CHECK((projected.matrix() - u.matrix()).norm() < (noisy - u.matrix()).norm());
}

TEST_CASE("nearest_unitary is idempotent") {
    const ComplexMatrix a = random_complex(4, 55) + 3.0 * ComplexMatrix::Identity(4, 4);
    const UnitaryMatrix once = nearest_unitary(a);
    const UnitaryMatrix twice = nearest_unitary(once.matrix());
    CHECK((twice.matrix() - once.matrix()).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("nearest_unitary rejects rank-deficient input") {
    ComplexMatrix a = ComplexMatrix::Zero(3, 3);
    a(0, 0) = 1.0;
    a(1, 1) = 1.0;
    CHECK_THROWS_AS(nearest_unitary(a), std::invalid_argument);
}

TEST_CASE("amplitude fidelity endpoints") {
    const UnitaryMatrix u = haar_random_unitary(4, 29);
    CHECK(amplitude_fidelity(u, u) == doctest::Approx(1.0).epsilon(1e-12));

    ComplexMatrix swap = ComplexMatrix::Zero(2, 2);
    swap(0, 1) = 1.0;
    swap(1, 0) = 1.0;
    CHECK(amplitude_fidelity(UnitaryMatrix::identity(2), UnitaryMatrix(swap)) ==
          doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("amplitude fidelity is symmetric") {
    for (int rep = 0; rep < 5; ++rep) {
        const UnitaryMatrix a = haar_random_unitary(5, derive_seed(101, rep));
        const UnitaryMatrix b = haar_random_unitary(5, derive_seed(102, rep));
        CHECK(std::abs(amplitude_fidelity(a, b) - amplitude_fidelity(b, a)) <= 1e-12);
    }
}

TEST_CASE("unitarity certificate rejects non-unitary input") {
    ComplexMatrix a = ComplexMatrix::Identity(3, 3);
    a(0, 0) = 1.001;
    CHECK_THROWS_AS(UnitaryMatrix{a}, std::invalid_argument);
}

TEST_CASE("fingerprint distinguishes matrices and is stable") {
    const ComplexMatrix a = random_complex(3, 1);
    ComplexMatrix b = a;
    b(2, 2) += Complex(1e-12, 0.0);
    CHECK(fingerprint(a) == fingerprint(a));
    CHECK(fingerprint(a) != fingerprint(b));
}
