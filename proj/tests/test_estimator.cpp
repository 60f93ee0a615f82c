#include <doctest.h>

#include <cmath>
#include <vector>

#include "discover/estimator.hpp"

using namespace discover::estimator;

TEST_CASE("good_turing is the fraction of hapaxes") {
    CHECK(good_turing(0, 5) == 0.0);
    CHECK(good_turing(1, 4) == 0.25);
    CHECK(good_turing(3, 3) == 1.0);
    CHECK_THROWS_AS(good_turing(1, 0), std::invalid_argument);
    CHECK_THROWS_AS(good_turing(5, 4), std::invalid_argument);
    CHECK_THROWS_AS(good_turing(-1, 4), std::invalid_argument);
}

namespace {

// Exhaustive enumeration of all m^n equally weighted outcome sequences for a
// given distribution; returns E[R_n - R_hat_n]. Independent of the estimator
// path except for the final U/n evaluation under test.
double enumerate_bias(const std::vector<double>& probs, const std::vector<bool>& interesting,
                      int n) {
    const int m = static_cast<int>(probs.size());
    std::vector<int> seq(static_cast<std::size_t>(n), 0);
    double bias = 0.0;
    while (true) {
        double weight = 1.0;
        std::vector<int> occurrences(static_cast<std::size_t>(m), 0);
        for (int draw : seq) {
            weight *= probs[static_cast<std::size_t>(draw)];
            ++occurrences[static_cast<std::size_t>(draw)];
        }
        double missing = 0.0;
        std::int64_t hapaxes = 0;
        for (int x = 0; x < m; ++x) {
            if (!interesting[static_cast<std::size_t>(x)]) continue;
            if (occurrences[static_cast<std::size_t>(x)] == 0) missing += probs[static_cast<std::size_t>(x)];
            if (occurrences[static_cast<std::size_t>(x)] == 1) ++hapaxes;
        }
        bias += weight * (missing - good_turing(hapaxes, n));
        int pos = 0;
        while (pos < n && ++seq[static_cast<std::size_t>(pos)] == m) seq[static_cast<std::size_t>(pos++)] = 0;
        if (pos == n) break;
    }
    return bias;
}

} // namespace

TEST_CASE("exhaustive bias lies in [-1/n, 0]") {
    // 3-item uniform support, 2 interesting items, n = 2: the estimator's
    // expectation lies within 1/n of the true expected missing mass.
    const double bias = enumerate_bias({1.0 / 3, 1.0 / 3, 1.0 / 3}, {true, true, false}, 2);
    CHECK(bias >= -0.5 - 1e-12);
    CHECK(bias <= 1e-12);

    const std::vector<std::vector<double>> distributions = {
        {0.5, 0.5}, {0.7, 0.2, 0.1}, {0.4, 0.3, 0.2, 0.1}, {0.25, 0.25, 0.25, 0.25}};
    for (const auto& probs : distributions) {
        std::vector<bool> interesting(probs.size(), true);
        interesting.back() = false;
        for (int n = 1; n <= 3; ++n) {
            const double b = enumerate_bias(probs, interesting, n);
            CHECK(b <= 1e-12);
            CHECK(b >= -1.0 / n - 1e-12);
        }
    }
}

TEST_CASE("concentration radius closed form") {
    CHECK(concentration_radius(100, 0.01, 0.05) == doctest::Approx(0.4074304547221858).epsilon(1e-12));
    CHECK(concentration_radius(1, 1.0, 0.5) == doctest::Approx(2.4976638334730934).epsilon(1e-12));
    CHECK_THROWS_AS(concentration_radius(100, 0.01, 1.0), std::domain_error);
    CHECK_THROWS_AS(concentration_radius(100, 0.01, 0.0), std::domain_error);
    CHECK_THROWS_AS(concentration_radius(0, 0.01, 0.5), std::invalid_argument);
}

TEST_CASE("index bonus, practical variant") {
    const auto config = practical_index(0.5);
    CHECK(index_bonus(config, 10, 4) == doctest::Approx(0.3793567823462866).epsilon(1e-12));
    CHECK(index_bonus(config, 1, 4) == 0.0);

    // Strictly decreasing in n at fixed t, strictly increasing in t at fixed n.
    for (std::int64_t n = 1; n < 50; ++n)
        CHECK(index_bonus(config, 10, n) > index_bonus(config, 10, n + 1));
    for (std::int64_t t = 2; t < 50; ++t)
        CHECK(index_bonus(config, t, 7) < index_bonus(config, t + 1, 7));
}

TEST_CASE("index bonus, theoretical variant") {
    const auto config = theoretical_index(1000, 7);
    CHECK(index_bonus(config, 50, 100) == doctest::Approx(0.8169793324951623).epsilon(1e-12));
    // t does not enter the theoretical radius
    CHECK(index_bonus(config, 1, 100) == index_bonus(config, 999, 100));
}

TEST_CASE("ucb index is estimate plus bonus") {
    CHECK(ucb_index(0.25, 0.3793567823462866) == doctest::Approx(0.6293567823462866));
    CHECK(ucb_index(0.0, 0.0) == 0.0);
    CHECK(ucb_index(0.1, 0.5) == doctest::Approx(0.6));
}
