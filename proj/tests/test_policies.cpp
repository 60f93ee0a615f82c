#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "discover/policies.hpp"

using namespace discover;
using namespace discover::policies;

namespace {

const std::vector<double> kProfile7 = {0.512, 0.256, 0.128, 0.064, 0.032, 0.016, 0.008};

double allocation_value(const std::vector<double>& q, const std::vector<double>& nu) {
    double acc = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) acc += q[i] * std::exp(-nu[i]);
    return acc;
}

// Brute-force minimization of r(nu) over the constraint simplex, K <= 3.
// Grid points are clamped onto the feasible set so no coordinate goes
// negative.
double brute_force_residual(const std::vector<double>& q, double t, double step) {
    double best = std::numeric_limits<double>::infinity();
    if (q.size() == 1) return q[0] * std::exp(-t);
    const auto steps_a = static_cast<long>(std::ceil(t / step));
    if (q.size() == 2) {
        for (long ia = 0; ia <= steps_a; ++ia) {
            const double a = std::min(static_cast<double>(ia) * step, t);
            best = std::min(best, allocation_value(q, {a, t - a}));
        }
        return best;
    }
    for (long ia = 0; ia <= steps_a; ++ia) {
        const double a = std::min(static_cast<double>(ia) * step, t);
        const auto steps_b = static_cast<long>(std::ceil((t - a) / step));
        for (long ib = 0; ib <= steps_b; ++ib) {
            const double b = std::min(static_cast<double>(ib) * step, t - a);
            best = std::min(best, allocation_value(q, {a, b, t - a - b}));
        }
    }
    return best;
}

} // namespace

TEST_CASE("uniform choice cycles through experts") {
    CHECK(uniform_choose(1, 7) == 1);
    CHECK(uniform_choose(8, 7) == 1);
    CHECK(uniform_choose(9, 7) == 2);
    CHECK(uniform_choose(7, 7) == 7);
    CHECK_THROWS_AS(uniform_choose(0, 7), std::invalid_argument);
}

TEST_CASE("good-ucb round-robin initialization and index argmax") {
    PolicyState state(7);
    state.t = 2;
    state.pulls = {1, 1, 0, 0, 0, 0, 0};
    CHECK(good_ucb_choose(state, estimator::practical_index(0.5)) == 3);

    // Two identical experts: tie broken to the lowest index.
    PolicyState tied(2);
    tied.t = 10;
    tied.pulls = {5, 5};
    tied.hapax = {2, 2};
    CHECK(good_ucb_choose(tied, estimator::practical_index(0.5)) == 1);

    // Higher hapax count at equal pulls wins.
    PolicyState split(2);
    split.t = 20;
    split.pulls = {10, 10};
    split.hapax = {0, 5};
    CHECK(good_ucb_choose(split, estimator::practical_index(0.5)) == 2);
}

TEST_CASE("good-ucb argmax depends only on hapax counts at equal pulls") {
    std::mt19937_64 gen(3);
    for (int trial = 0; trial < 100; ++trial) {
        PolicyState state(4);
        state.t = 100;
        std::uniform_int_distribution<std::int64_t> hapax_dist(0, 20);
        for (auto& h : state.hapax) h = hapax_dist(gen);
        state.pulls = {25, 25, 25, 25};
        const int chosen = good_ucb_choose(state, estimator::practical_index(0.5));
        // Scaling all counts by the same factor leaves the argmax unchanged.
        PolicyState scaled = state;
        for (auto& h : scaled.hapax) h *= 3;
        for (auto& n : scaled.pulls) n *= 3;
        CHECK(good_ucb_choose(scaled, estimator::practical_index(0.5)) == chosen);
        CHECK(chosen ==
              1 + static_cast<int>(std::max_element(state.hapax.begin(), state.hapax.end()) -
                                   state.hapax.begin()));
    }
}

TEST_CASE("closed-loop oracle choice") {
    PolicyState state(3);
    state.undiscovered = {5, 5, 3};
    CHECK(oracle_cl_choose(state) == 1);
    state.undiscovered = {0, 2, 1};
    CHECK(oracle_cl_choose(state) == 2);
    state.undiscovered = {0, 0, 0};
    CHECK(oracle_cl_choose(state) == 1);
    PolicyState empty(3);
    CHECK_THROWS_AS(oracle_cl_choose(empty), std::invalid_argument);
}

TEST_CASE("open-loop allocation at zero budget and at the first breakpoint") {
    macroscopic::MacroProfile profile({0.512, 0.256});
    const auto zero = ool_allocation(profile, 0.0);
    CHECK(zero.nu == std::vector<double>{0.0, 0.0});
    CHECK(zero.residual == doctest::Approx(0.768).epsilon(1e-12));
    CHECK(zero.active_count == 1);

    const double ln2 = std::log(2.0);
    const auto boundary = ool_allocation(profile, ln2);
    CHECK(boundary.nu[0] == doctest::Approx(ln2).epsilon(1e-12));
    CHECK(boundary.nu[1] == doctest::Approx(0.0));
    CHECK(boundary.residual == doctest::Approx(0.512).epsilon(1e-12));

    CHECK_THROWS_AS(ool_allocation(profile, -1.0), std::invalid_argument);
}

TEST_CASE("allocation invariants on the 7-expert profile") {
    macroscopic::MacroProfile profile(kProfile7);
    const double three_ln2 = 3 * std::log(2.0);
    const auto alloc = ool_allocation(profile, three_ln2);
    CHECK(alloc.residual == doctest::Approx(0.504).epsilon(1e-9));

    std::mt19937_64 gen(4);
    std::uniform_real_distribution<double> t_dist(0.0, 15.0);
    for (int trial = 0; trial < 50; ++trial) {
        const double t = t_dist(gen);
        const auto a = ool_allocation(profile, t);
        CHECK(std::accumulate(a.nu.begin(), a.nu.end(), 0.0) == doctest::Approx(t).epsilon(1e-9));
        CHECK(allocation_value(kProfile7, a.nu) == doctest::Approx(a.residual).epsilon(1e-9));
        for (std::size_t i = 0; i < a.nu.size(); ++i) {
            CHECK(a.nu[i] >= -1e-12);
            if (i < a.active_count)
                CHECK(a.nu[i] >= 0.0);
            else
                CHECK(a.nu[i] == 0.0);
        }
        // Optimality against random feasible points on the constraint set.
        std::vector<double> random_nu(kProfile7.size());
        for (int probe = 0; probe < 20; ++probe) {
            double total = 0.0;
            for (auto& v : random_nu) total += (v = -std::log(t_dist(gen) / 15.0 + 1e-9));
            for (auto& v : random_nu) v *= t / total;
            CHECK(a.residual <= allocation_value(kProfile7, random_nu) + 1e-6);
        }
    }

    // Residual non-increasing, active count non-decreasing in t.
    double prev_residual = profile.q_total() + 1;
    std::size_t prev_active = 0;
    for (double t = 0.0; t <= 20.0; t += 0.01) {
        const auto a = ool_allocation(profile, t);
        CHECK(a.residual <= prev_residual + 1e-12);
        CHECK(a.active_count >= prev_active);
        prev_residual = a.residual;
        prev_active = a.active_count;
    }
}

TEST_CASE("open-loop allocation matches brute force") {
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> q_dist(0.05, 0.9);
    std::uniform_real_distribution<double> t_dist(0.0, 4.0);
    for (int trial = 0; trial < 6; ++trial) {
        const std::size_t K = 2 + trial % 2;
        std::vector<double> q(K);
        for (auto& v : q) v = q_dist(gen);
        std::sort(q.rbegin(), q.rend());
        macroscopic::MacroProfile profile(q);
        for (int probe = 0; probe < 3; ++probe) {
            const double t = t_dist(gen);
            const auto a = ool_allocation(profile, t);
            CHECK(a.residual <= brute_force_residual(q, t, 1e-3) + 1e-5);
        }
    }
}

TEST_CASE("breakpoints") {
    macroscopic::MacroProfile pair({0.512, 0.256});
    const auto bp2 = ool_breakpoints(pair);
    REQUIRE(bp2.size() == 1);
    CHECK(bp2[0] == doctest::Approx(std::log(2.0)).epsilon(1e-13));

    CHECK_THROWS_AS(ool_breakpoints(macroscopic::MacroProfile({0.5, 0.5})),
                    std::invalid_argument);

    macroscopic::MacroProfile profile(kProfile7);
    const auto bp = ool_breakpoints(profile);
    REQUIRE(bp.size() == 6);
    for (std::size_t i = 1; i < bp.size(); ++i) CHECK(bp[i] > bp[i - 1]);
    // The breakpoint equation from the active-set boundary holds at each root.
    const auto& q = profile.q();
    for (std::size_t i = 2; i <= q.size(); ++i) {
        const double t = bp[i - 2];
        const double lhs = q[i - 1] + static_cast<double>(i - 1) * profile.geometric_mean(i - 1) *
                                          std::exp(-t / static_cast<double>(i - 1));
        const double rhs = static_cast<double>(i) * profile.geometric_mean(i) *
                           std::exp(-t / static_cast<double>(i));
        CHECK(std::abs(lhs - rhs) < 1e-12);
    }
    // Active-count transitions of the allocation occur exactly at the roots.
    for (double t = 0.001; t <= bp.back() + 1.0; t += 0.0005) {
        const std::size_t active = ool_allocation(profile, t).active_count;
        std::size_t expected = 1;
        while (expected < q.size() && bp[expected - 1] < t - 1e-6) ++expected;
        const bool near_boundary =
            expected <= bp.size() && std::abs(t - bp[expected - 1]) <= 1e-6;
        if (!near_boundary) CHECK(active == expected);
    }
}

TEST_CASE("integer allocation") {
    macroscopic::MacroProfile pair({0.512, 0.256});
    CHECK(ool_integer_allocation(pair, 1000, 0) == std::vector<std::int64_t>{0, 0});
    CHECK(ool_integer_allocation(macroscopic::MacroProfile({0.3}), 1000, 777) ==
          std::vector<std::int64_t>{777});
    CHECK(ool_integer_allocation(pair, 1000, 693) == std::vector<std::int64_t>{693, 0});

    macroscopic::MacroProfile profile(kProfile7);
    for (std::int64_t horizon : {1, 17, 693, 5000, 60000}) {
        const auto counts = ool_integer_allocation(profile, 10000, horizon);
        CHECK(std::accumulate(counts.begin(), counts.end(), std::int64_t{0}) == horizon);
        for (std::int64_t c : counts) CHECK(c >= 0);
    }
}
