#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "discover/estimator.hpp"
#include "discover/macroscopic.hpp"

namespace discover::policies {

using macroscopic::MacroProfile;

// Mutable per-run bookkeeping shared by the closed-loop policies.
struct PolicyState {
    std::int64_t t = 0;                         // steps completed so far
    std::vector<std::int64_t> pulls;            // n_{i,t}
    std::vector<std::int64_t> hapax;            // U_{i,t} (Good-UCB)
    std::vector<std::int64_t> undiscovered;     // Q_i - F_i (oracle, count form)
    std::vector<double> undiscovered_mass;      // remaining mass (oracle, general)

    explicit PolicyState(int K)
        : pulls(static_cast<std::size_t>(K), 0), hapax(static_cast<std::size_t>(K), 0) {}

    int expert_count() const { return static_cast<int>(pulls.size()); }
};

// Good-UCB: round-robin for the first K steps, then the expert with the
// highest optimistic missing-mass index. Ties go to the lowest index.
inline int good_ucb_choose(const PolicyState& state, const estimator::IndexConfig& config) {
    const int K = state.expert_count();
    const std::int64_t t = state.t + 1; // the step being decided
    if (t <= K) return static_cast<int>(t);
    int best = 1;
    double best_index = -1.0;
    for (int i = 1; i <= K; ++i) {
        const auto idx = static_cast<std::size_t>(i - 1);
        const double estimate = estimator::good_turing(state.hapax[idx], state.pulls[idx]);
        const double bonus = estimator::index_bonus(config, t, state.pulls[idx]);
        const double value = estimator::ucb_index(estimate, bonus);
        if (value > best_index) {
            best_index = value;
            best = i;
        }
    }
    return best;
}

// Closed-loop oracle: the expert with the most undiscovered interesting
// items; ties to the lowest index; expert 1 once everything is found.
inline int oracle_cl_choose(const PolicyState& state) {
    if (state.undiscovered.empty())
        throw std::invalid_argument("oracle_cl_choose: no undiscovered counts in state");
    int best = 1;
    std::int64_t best_count = state.undiscovered[0];
    for (int i = 2; i <= static_cast<int>(state.undiscovered.size()); ++i) {
        const std::int64_t c = state.undiscovered[static_cast<std::size_t>(i - 1)];
        if (c > best_count) {
            best_count = c;
            best = i;
        }
    }
    return best;
}

// Mass-based oracle for environments without per-expert counts.
inline int oracle_mass_choose(const PolicyState& state) {
    if (state.undiscovered_mass.empty())
        throw std::invalid_argument("oracle_mass_choose: no undiscovered mass in state");
    int best = 1;
    double best_mass = state.undiscovered_mass[0];
    for (int i = 2; i <= static_cast<int>(state.undiscovered_mass.size()); ++i) {
        const double m = state.undiscovered_mass[static_cast<std::size_t>(i - 1)];
        if (m > best_mass) {
            best_mass = m;
            best = i;
        }
    }
    return best;
}

// Balanced sampling: cycle through the experts in order.
inline int uniform_choose(std::int64_t t, int K) {
    if (t < 1) throw std::invalid_argument("uniform_choose: t must be >= 1");
    return static_cast<int>((t - 1) % K) + 1;
}

// Optimal open-loop allocation at macroscopic time t.
struct Allocation {
    std::vector<double> nu;   // per-expert macroscopic pull budgets, sum = t
    std::size_t active_count; // I(t): experts with nu_i > 0
    double residual;          // r*(t) = sum q_i exp(-nu_i)
};

// Times at which experts 2..K enter the active set. Expert i enters when
//   q_i + (i-1) g_{i-1} exp(-t/(i-1)) = i g_i exp(-t/i),
// with g_i the geometric mean of q_1..q_i. The equation has a double root
// (both exponential terms equal the water level there), so we bisect on
// its derivative, g_i exp(-t/i) - g_{i-1} exp(-t/(i-1)), which crosses
// zero exactly once on the bracket. The first breakpoint is log(q_1/q_2)
// in closed form.
inline std::vector<double> ool_breakpoints(const MacroProfile& profile) {
    const auto& q = profile.q();
    for (std::size_t i = 1; i < q.size(); ++i)
        if (!(q[i] < q[i - 1]))
            throw std::invalid_argument("ool_breakpoints: profile must be strictly sorted");
    std::vector<double> breakpoints;
    if (q.size() < 2) return breakpoints;
    breakpoints.push_back(std::log(q[0] / q[1]));
    for (std::size_t i = 3; i <= q.size(); ++i) {
        const double gm_prev = profile.geometric_mean(i - 1);
        const double gm = profile.geometric_mean(i);
        const auto di = static_cast<double>(i);
        auto slope = [&](double t) {
            return gm * std::exp(-t / di) - gm_prev * std::exp(-t / (di - 1.0));
        };
        double lo = breakpoints.back();
        double hi = lo + 100.0;
        if (!(slope(lo) < 0.0) || !(slope(hi) > 0.0))
            throw std::runtime_error("ool_breakpoints: bracket failed");
        for (int iter = 0; iter < 200 && hi - lo > 1e-14; ++iter) {
            const double mid = lo + (hi - lo) / 2;
            (slope(mid) < 0.0 ? lo : hi) = mid;
        }
        breakpoints.push_back(lo + (hi - lo) / 2);
    }
    return breakpoints;
}

// Water-filling solution of min sum q_i exp(-nu_i) over nu >= 0, sum nu = t:
// active experts share nu_i = t/I + log(q_i / geo_mean(I)).
inline Allocation ool_allocation(const MacroProfile& profile, double t) {
    if (t < 0.0) throw std::invalid_argument("ool_allocation: t must be >= 0");
    const auto& q = profile.q();
    const std::size_t I = profile.active_count(t);
    const double gm = profile.geometric_mean(I);
    Allocation alloc;
    alloc.nu.assign(q.size(), 0.0);
    for (std::size_t i = 0; i < I; ++i)
        alloc.nu[i] = t / static_cast<double>(I) + std::log(q[i] / gm);
    alloc.active_count = I;
    alloc.residual = profile.r_star(t);
    return alloc;
}

// Integer pull counts for a finite run: round N * nu_i(horizon/N) with
// largest-remainder correction so the counts sum to the horizon exactly.
inline std::vector<std::int64_t> ool_integer_allocation(const MacroProfile& profile,
                                                        std::int64_t N, std::int64_t horizon) {
    if (N < 1) throw std::invalid_argument("ool_integer_allocation: N must be >= 1");
    if (horizon < 0) throw std::invalid_argument("ool_integer_allocation: horizon must be >= 0");
    const std::size_t K = profile.size();
    std::vector<std::int64_t> counts(K, 0);
    if (horizon == 0) return counts;
    if (K == 1) {
        counts[0] = horizon;
        return counts;
    }
    const Allocation alloc =
        ool_allocation(profile, static_cast<double>(horizon) / static_cast<double>(N));
    std::vector<double> exact(K);
    std::int64_t assigned = 0;
    for (std::size_t i = 0; i < K; ++i) {
        exact[i] = alloc.nu[i] * static_cast<double>(N);
        counts[i] = static_cast<std::int64_t>(std::floor(exact[i]));
        assigned += counts[i];
    }
    std::vector<std::size_t> order(K);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return exact[a] - std::floor(exact[a]) > exact[b] - std::floor(exact[b]);
    });
    for (std::size_t j = 0; assigned < horizon; ++j, ++assigned) ++counts[order[j % K]];
    for (std::size_t j = K; assigned > horizon; --assigned) {
        while (counts[order[--j]] == 0) {}
        --counts[order[j]];
    }
    return counts;
}

} // namespace discover::policies
