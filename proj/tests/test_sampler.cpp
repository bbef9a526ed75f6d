#include <doctest.h>

#include <cmath>
#include <numeric>

#include "bsmc/rng.hpp"
#include "bsmc/sampler.hpp"

using namespace bsmc;

namespace {

UnitaryMatrix beamsplitter_50_50() {
    const double s = 1.0 / std::sqrt(2.0);
    ComplexMatrix u(2, 2);
    u << Complex(s, 0), Complex(s, 0), Complex(s, 0), Complex(-s, 0);
    return UnitaryMatrix(u);
}

OccupationPattern pat(std::vector<int> counts) { return OccupationPattern(std::move(counts)); }

} // namespace

TEST_CASE("gram matrix validation") {
    CHECK_NOTHROW(GramMatrix::homogeneous(3, 0.5));
    CHECK_NOTHROW(GramMatrix::identity(4));
    CHECK_THROWS_AS(GramMatrix::homogeneous(3, 1.5), std::invalid_argument);
    CHECK_THROWS_AS(GramMatrix::homogeneous(3, -0.9), std::invalid_argument); // not PSD
    RealMatrix bad = RealMatrix::Identity(2, 2);
    bad(0, 1) = 0.3;
    CHECK_THROWS_AS(GramMatrix{bad}, std::invalid_argument); // asymmetric

    const GramMatrix v = GramMatrix::from_visibilities(3, {0.98, 0.95, 0.90});
    CHECK(v(0, 1) == doctest::Approx(std::sqrt(0.98)));
    CHECK(v(0, 2) == doctest::Approx(std::sqrt(0.95)));
    CHECK(v(1, 2) == doctest::Approx(std::sqrt(0.90)));
    CHECK(v.mean_overlap() ==
          doctest::Approx((std::sqrt(0.98) + std::sqrt(0.95) + std::sqrt(0.90)) / 3.0));
}

TEST_CASE("pattern enumeration counts and order") {
    const auto cf = enumerate_patterns(12, 3, true);
    CHECK(cf.size() == 220);
    CHECK(cf.front().to_string() == "111000000000");
    CHECK(cf[1].to_string() == "110100000000");
    CHECK(cf.back().to_string() == "000000000111");

    const auto full = enumerate_patterns(12, 3, false);
    CHECK(full.size() == 364);
    CHECK(full.front().to_string() == "300000000000");
    for (std::size_t i = 1; i < full.size(); ++i) CHECK(pattern_precedes(full[i - 1], full[i]));
}

TEST_CASE("submatrix repeats rows and columns") {
    const UnitaryMatrix id = UnitaryMatrix::identity(4);
    const ComplexMatrix m = submatrix(id, pat({1, 1, 0, 0}), pat({1, 1, 0, 0}));
    CHECK((m - ComplexMatrix::Identity(2, 2)).norm() <= 1e-15);

    // doubly occupied output mode repeats the corresponding entries
    const UnitaryMatrix u = haar_random_unitary(4, 5);
    const ComplexMatrix m2 = submatrix(u, pat({1, 1, 0, 0}), pat({0, 2, 0, 0}));
    CHECK(m2(0, 0) == m2(1, 0));
    CHECK(m2(0, 1) == m2(1, 1));

    // index-by-index hand construction, n = 3
    const UnitaryMatrix u6 = haar_random_unitary(6, 9);
    const OccupationPattern in = pat({1, 1, 1, 0, 0, 0});
    const OccupationPattern out = pat({0, 1, 0, 1, 0, 1});
    const ComplexMatrix m3 = submatrix(u6, in, out);
    const int in_modes[3] = {0, 1, 2};
    const int out_modes[3] = {1, 3, 5};
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) CHECK(m3(r, c) == u6.matrix()(in_modes[c], out_modes[r]));

    CHECK_THROWS_AS(submatrix(id, pat({1, 1, 0, 0}), pat({1, 0, 0, 0})), std::invalid_argument);
}

TEST_CASE("hong-ou-mandel suppression and bunching") {
    const UnitaryMatrix bs = beamsplitter_50_50();
    CHECK(output_probability(bs, pat({1, 1}), pat({1, 1})) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(output_probability(bs, pat({1, 1}), pat({2, 0})) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(output_probability(bs, pat({1, 1}), pat({0, 2})) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("output probabilities sum to one") {
    const UnitaryMatrix u = haar_random_unitary(4, 33);
    const OccupationPattern in = pat({1, 1, 0, 0});
    double total = 0.0;
    for (const auto& out : enumerate_patterns(4, 2, false))
        total += output_probability(u, in, out);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("partial model reduces to both limits") {
    const UnitaryMatrix bs = beamsplitter_50_50();
    const GramMatrix ones = GramMatrix::homogeneous(2, 1.0);
    const GramMatrix id = GramMatrix::identity(2);

    CHECK(output_probability_partial(bs, pat({1, 1}), pat({1, 1}), ones) ==
          doctest::Approx(0.0).epsilon(1e-14));
    CHECK(output_probability_partial(bs, pat({1, 1}), pat({1, 1}), id) ==
          doctest::Approx(0.5).epsilon(1e-14));

    // visibility law at intermediate overlap: (1 - s^2) / 2
    for (double s : {0.0, 0.5, 1.0}) {
        const GramMatrix g = GramMatrix::homogeneous(2, s);
        CHECK(output_probability_partial(bs, pat({1, 1}), pat({1, 1}), g) ==
              doctest::Approx((1.0 - s * s) / 2.0).epsilon(1e-12));
    }
}

TEST_CASE("partial model matches limits element-wise on a bigger instance") {
    const UnitaryMatrix u = haar_random_unitary(6, 3);
    const OccupationPattern in = pat({1, 1, 1, 0, 0, 0});
    const GramMatrix ones = GramMatrix::homogeneous(3, 1.0);
    const GramMatrix id = GramMatrix::identity(3);
    for (const auto& out : enumerate_patterns(6, 3, false)) {
        const double p_exact = output_probability(u, in, out);
        const double p_ones = output_probability_partial(u, in, out, ones);
        CHECK(std::abs(p_ones - p_exact) <= 1e-12);

        const ComplexMatrix sq = submatrix(u, in, out).cwiseAbs2().cast<Complex>();
        const double p_classical = permanent(sq).real() / occupancy_factorial(out);
        const double p_id = output_probability_partial(u, in, out, id);
        CHECK(std::abs(p_id - p_classical) <= 1e-12);
    }
}

TEST_CASE("partial probabilities are in range and sum to one for any PSD gram") {
    const UnitaryMatrix u = haar_random_unitary(5, 21);
    const OccupationPattern in = pat({1, 1, 1, 0, 0});
    const GramMatrix g = GramMatrix::from_visibilities(3, {0.9, 0.6, 0.75});
    double total = 0.0;
    for (const auto& out : enumerate_patterns(5, 3, false)) {
        const double p = output_probability_partial(u, in, out, g);
        CHECK(p >= -1e-12);
        CHECK(p <= 1.0 + 1e-12);
        total += p;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("enumerate_distribution postselects and records the discarded mass") {
    const UnitaryMatrix u = haar_random_unitary(12, 8);
    const OccupationPattern in = pat({1, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0});

    const OutputDistribution full = enumerate_distribution(u, in, false);
    CHECK(full.size() == 364);
    CHECK(std::accumulate(full.probs.begin(), full.probs.end(), 0.0) ==
          doctest::Approx(1.0).epsilon(1e-10));

    const OutputDistribution cf = enumerate_distribution(u, in, true);
    CHECK(cf.size() == 220);
    CHECK(std::accumulate(cf.probs.begin(), cf.probs.end(), 0.0) ==
          doctest::Approx(1.0).epsilon(1e-12));
    double cf_mass = 0.0;
    for (std::size_t i = 0; i < full.size(); ++i)
        if (full.patterns[i].collision_free()) cf_mass += full.probs[i];
    CHECK(cf.meta.postselection_mass == doctest::Approx(cf_mass).epsilon(1e-12));
    CHECK(cf.meta.collision_free);
}

TEST_CASE("identity unitary passes photons straight through") {
    const UnitaryMatrix id = UnitaryMatrix::identity(12);
    OccupationPattern in = pat({1, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0});
    const OutputDistribution dist = enumerate_distribution(id, in, true);
    const auto idx = dist.index_of(in);
    REQUIRE(idx >= 0);
    CHECK(dist.probs[static_cast<std::size_t>(idx)] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("probabilities invariant under consistent mode relabeling") {
    const UnitaryMatrix u = haar_random_unitary(5, 77);
    const OccupationPattern in = pat({1, 1, 0, 0, 0});
    // swap modes 1 <-> 3 in both the unitary and the patterns
    ComplexMatrix relabeled = u.matrix();
    relabeled.row(1).swap(relabeled.row(3));
    relabeled.col(1).swap(relabeled.col(3));
    const UnitaryMatrix v{relabeled};
    for (const auto& out : enumerate_patterns(5, 2, false)) {
        OccupationPattern out_swapped = out;
        std::swap(out_swapped.counts[1], out_swapped.counts[3]);
        OccupationPattern in_swapped = in;
        std::swap(in_swapped.counts[1], in_swapped.counts[3]);
        CHECK(output_probability(u, in, out) ==
              doctest::Approx(output_probability(v, in_swapped, out_swapped)).epsilon(1e-11));
    }
}

TEST_CASE("sampling edge cases and determinism") {
    const UnitaryMatrix u = haar_random_unitary(12, 4);
    const OccupationPattern in = pat({1, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0});
    const OutputDistribution dist = enumerate_distribution(u, in, true);

    CHECK(sample_patterns(dist, 0, 1).empty());
    const auto a = sample_patterns(dist, 500, 99);
    const auto b = sample_patterns(dist, 500, 99);
    CHECK(a == b);

    // point mass
    OutputDistribution point = dist;
    std::fill(point.probs.begin(), point.probs.end(), 0.0);
    point.probs[7] = 1.0;
    for (const auto& p : sample_patterns(point, 100, 3)) CHECK(p == point.patterns[7]);
}

TEST_CASE("sampled frequencies pass a chi-square test") {
    const UnitaryMatrix u = haar_random_unitary(12, 15);
    const OccupationPattern in = pat({1, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0});
    const OutputDistribution dist = enumerate_distribution(u, in, true);

    const std::int64_t n = 1000000;
    const auto idx = sample_indices(dist, n, 2024);
    std::vector<double> counts(dist.size(), 0.0);
    for (auto i : idx) counts[i] += 1.0;

    double chi2 = 0.0;
    int dof = 0;
    for (std::size_t i = 0; i < dist.size(); ++i) {
        const double expected = dist.probs[i] * static_cast<double>(n);
        if (expected < 5.0) continue; // standard cell-size rule
        chi2 += (counts[i] - expected) * (counts[i] - expected) / expected;
        ++dof;
    }
    // significance 1e-3 via the Wilson-Hilferty approximation
    const double z = 3.0902; // upper 1e-3 normal quantile
    const double h = 2.0 / (9.0 * dof);
    const double critical = dof * std::pow(1.0 - h + z * std::sqrt(h), 3.0);
    CHECK(chi2 < critical);
}

TEST_CASE("perturb_unitary at zero noise is the identity operation") {
    const UnitaryMatrix u = haar_random_unitary(12, 6);
    const auto p = perturb_unitary(u, 0.0, 1);
    CHECK((p.unitary.matrix() - u.matrix()).norm() <= 1e-14);
    CHECK(p.fidelity == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("mean fidelity decreases with the noise scale") {
    const UnitaryMatrix u = haar_random_unitary(12, 61);
    const std::vector<double> eps{0.0, 0.02, 0.05, 0.1, 0.2};
    double prev = 2.0;
    for (double e : eps) {
        double mean = 0.0;
        const int reps = 100;
        for (int r = 0; r < reps; ++r)
            mean += perturb_unitary(u, e, derive_seed(900, r)).fidelity;
        mean /= reps;
        CHECK(mean < prev);
        prev = mean;
    }
}

TEST_CASE("large noise approaches the haar baseline") {
    const UnitaryMatrix u = haar_random_unitary(12, 62);
    const int reps = 60;
    double noisy_mean = 0.0;
    for (int r = 0; r < reps; ++r)
        noisy_mean += perturb_unitary(u, 10.0, derive_seed(901, r)).fidelity;
    noisy_mean /= reps;

    double haar_mean = 0.0;
    for (int r = 0; r < reps; ++r) {
        const UnitaryMatrix a = haar_random_unitary(12, derive_seed(902, r));
        const UnitaryMatrix b = haar_random_unitary(12, derive_seed(903, r));
        haar_mean += amplitude_fidelity(a, b);
    }
    haar_mean /= reps;
    CHECK(std::abs(noisy_mean - haar_mean) < 0.02);
}

TEST_CASE("epsilon_for_fidelity hits its target") {
    const UnitaryMatrix u = haar_random_unitary(12, 63);
    const double eps = epsilon_for_fidelity(u, 0.95, 40, 11);
    double mean = 0.0;
    const int reps = 40;
    for (int r = 0; r < reps; ++r)
        mean += perturb_unitary(u, eps, derive_seed(11, r)).fidelity;
    mean /= reps;
    CHECK(mean == doctest::Approx(0.95).epsilon(0.01));
}
