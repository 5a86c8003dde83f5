#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "cohortdiff/combine.hpp"
#include "cohortdiff/errors.hpp"
#include "cohortdiff/rng.hpp"
#include "cohortdiff/stats.hpp"

using namespace cohortdiff;

namespace {

// Reference survival function: the same closed-form series evaluated in
// 80-bit extended precision, independent of the library path.
long double chi2_sf_oracle(long double x, int dof) {
    const long double h = x / 2.0L;
    const int m = dof / 2;
    long double term = 1.0L;
    long double sum = 1.0L;
    for (int k = 1; k < m; ++k) {
        term *= h / static_cast<long double>(k);
        sum += term;
    }
    return expl(-h) * sum;
}

// Published per-instance values the combined reproductions are checked
// against (shuffle row and background row of the two-sided study, plus the
// five-week spike set).
const std::vector<double> kShuffleRow{0.01312, 0.02543, 0.10505, 0.06394,
                                      0.10809, 0.03104, 0.00233};
const std::vector<double> kBackgroundRow{0.00862, 0.06071, 0.44336, 0.45604,
                                         0.07581, 0.15288, 0.21411};
const std::vector<double> kSpikeWeeks{0.99988, 0.8216, 0.89666, 0.9994, 0.99502};

} // namespace

TEST_CASE("chi2_sf basics") {
    CHECK(chi2_sf(0.0, 2) == 1.0);
    CHECK(chi2_sf(0.0, 64) == 1.0);
    // Fisher single-input identity at dof 2.
    CHECK(chi2_sf(-2.0 * std::log(0.5), 2) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK_THROWS_AS(chi2_sf(-1.0, 2), InputError);
    CHECK_THROWS_AS(chi2_sf(1.0, 0), InputError);
    CHECK_THROWS_AS(chi2_sf(1.0, 7), InputError);
}

TEST_CASE("chi2_sf matches the extended-precision series to 1e-10 relative") {
    for (int dof = 2; dof <= 64; dof += 2) {
        for (double x : {0.1, 1.0, 10.0, 30.0, 100.0, 200.0}) {
            const double got = chi2_sf(x, dof);
            const long double want = chi2_sf_oracle(x, dof);
            CHECK(std::abs(got - static_cast<double>(want)) <=
                  1e-10 * static_cast<double>(want));
        }
    }
    // Spot value: dof 14 at the T of the shuffle-row reproduction scale.
    CHECK(chi2_sf(30.305, 14) == doctest::Approx(6.9267e-3).epsilon(2e-3));
}

TEST_CASE("chi2_sf is decreasing in x and increasing in dof") {
    double prev = 1.0;
    for (double x : {0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0}) {
        const double v = chi2_sf(x, 10);
        CHECK(v < prev);
        prev = v;
    }
    for (int dof = 4; dof <= 40; dof += 2) CHECK(chi2_sf(12.0, dof) > chi2_sf(12.0, dof - 2));
}

TEST_CASE("single input, direct transform, upper tail returns the input") {
    for (double p : {0.001, 0.25, 0.5, 0.99, 1.0}) {
        const auto r = fisher_combine(std::vector<double>{p}, Transform::direct, Tail::upper);
        CHECK(r.p_combined == doctest::Approx(p).epsilon(1e-13));
        CHECK(r.dof == 2);
    }
}

TEST_CASE("combined reproduction: shuffle row, direct/upper, ~7.3e-6") {
    const auto r = fisher_combine(kShuffleRow, Transform::direct, Tail::upper);
    CHECK(r.dof == 14);
    CHECK(r.p_combined < 1e-5);
    CHECK(r.p_combined == doctest::Approx(7.302e-6).epsilon(5e-3));
}

TEST_CASE("combined reproduction: background row, one_minus/lower, ~0.0022") {
    const auto r = fisher_combine(kBackgroundRow, Transform::one_minus, Tail::lower);
    CHECK(r.p_combined > 0.0019);
    CHECK(r.p_combined < 0.0029);
    CHECK(r.p_combined == doctest::Approx(2.213e-3).epsilon(5e-3));
}

TEST_CASE("combined reproduction: spike weeks, direct/lower, ~1.88e-5") {
    const auto r = fisher_combine(kSpikeWeeks, Transform::direct, Tail::lower);
    CHECK(r.p_combined > 1.7e-5);
    CHECK(r.p_combined < 2.1e-5);
    CHECK(r.p_combined == doctest::Approx(1.881e-5).epsilon(5e-3));
}

TEST_CASE("combination is permutation invariant") {
    std::vector<double> ps = kShuffleRow;
    const double base = fisher_combine(ps, Transform::direct, Tail::upper).p_combined;
    SplitMix64 rng(42);
    for (int trial = 0; trial < 10; ++trial) {
        for (std::size_t j = ps.size(); j > 1; --j) std::swap(ps[j - 1], ps[rng.below(j)]);
        CHECK(fisher_combine(ps, Transform::direct, Tail::upper).p_combined ==
              doctest::Approx(base).epsilon(1e-12));
    }
}

TEST_CASE("one_minus/lower equals direct/lower on complemented inputs, identically") {
    std::vector<double> ps{0.1, 0.4, 0.75, 0.33};
    std::vector<double> complement;
    for (double p : ps) complement.push_back(1.0 - p);
    const auto a = fisher_combine(ps, Transform::one_minus, Tail::lower);
    const auto b = fisher_combine(complement, Transform::direct, Tail::lower);
    CHECK(a.t_statistic == b.t_statistic);
    CHECK(a.p_combined == b.p_combined);
}

TEST_CASE("decreasing any input decreases the combined value (direct/upper)") {
    const std::vector<double> ps{0.3, 0.5, 0.7};
    const double base = fisher_combine(ps, Transform::direct, Tail::upper).p_combined;
    for (std::size_t i = 0; i < ps.size(); ++i) {
        auto smaller = ps;
        smaller[i] *= 0.5;
        CHECK(fisher_combine(smaller, Transform::direct, Tail::upper).p_combined < base);
    }
}

TEST_CASE("combined p of uniform inputs is itself uniform") {
    SplitMix64 rng(2024);
    std::vector<double> combined;
    for (int i = 0; i < 10000; ++i) {
        std::vector<double> ps;
        for (int j = 0; j < 5; ++j) ps.push_back(1.0 - rng.uniform01());
        combined.push_back(fisher_combine(ps, Transform::direct, Tail::upper).p_combined);
    }
    const double d = ks_statistic_uniform(combined);
    CHECK(ks_pvalue(d, combined.size()) > 0.01);
}

TEST_CASE("zeros and out-of-range inputs are rejected with guidance") {
    CHECK_THROWS_AS(fisher_combine(std::vector<double>{0.5, 0.0}, Transform::direct, Tail::upper),
                    InputError);
    CHECK_THROWS_AS(fisher_combine(std::vector<double>{0.5, 1.0}, Transform::one_minus, Tail::lower),
                    InputError);
    CHECK_THROWS_AS(fisher_combine(std::vector<double>{1.5}, Transform::direct, Tail::upper),
                    InputError);
    CHECK_THROWS_AS(fisher_combine(std::vector<double>{1e-310}, Transform::direct, Tail::upper),
                    InputError);
    try {
        fisher_combine(std::vector<double>{0.0}, Transform::direct, Tail::upper);
        FAIL("expected InputError");
    } catch (const InputError& e) {
        CHECK(std::string(e.what()).find("smoothed") != std::string::npos);
    }
}
