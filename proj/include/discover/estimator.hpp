#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <variant>

namespace discover::estimator {

// Hapax statistics for one expert: n pulls so far, and the number of
// interesting items whose single global occurrence was drawn by this expert.
struct HapaxStats {
    int expert = 1;
    std::int64_t n = 0;
    std::int64_t hapax_count = 0;
};

// Confidence-bonus variants for the optimistic index.
struct PracticalIndex {
    double c = 0.5;
};
struct TheoreticalIndex {
    std::int64_t support_size = 1; // N, per expert
    int expert_count = 1;          // K
};

struct IndexConfig {
    std::variant<PracticalIndex, TheoreticalIndex> variant = PracticalIndex{};
};

inline IndexConfig practical_index(double c) {
    if (!(c > 0.0)) throw std::invalid_argument("index constant c must be > 0");
    return IndexConfig{PracticalIndex{c}};
}

inline IndexConfig theoretical_index(std::int64_t support_size, int expert_count) {
    if (support_size < 1) throw std::invalid_argument("support size must be >= 1");
    if (expert_count < 1) throw std::invalid_argument("expert count must be >= 1");
    return IndexConfig{TheoreticalIndex{support_size, expert_count}};
}

// Good-Turing estimate of the missing mass: fraction of hapaxes U_n / n.
inline double good_turing(std::int64_t hapax_count, std::int64_t n) {
    if (n < 1) throw std::invalid_argument("good_turing: needs at least one pull");
    if (hapax_count < 0 || hapax_count > n)
        throw std::invalid_argument("good_turing: hapax count out of range");
    return static_cast<double>(hapax_count) / static_cast<double>(n);
}

// Two-sided concentration radius for the Good-Turing estimate:
// with probability >= 1-delta,
//   R_hat - 1/n - radius <= R <= R_hat + radius,
// where radius = sqrt((2/n + p_max)^2 * n * log(2/delta) / 2).
inline double concentration_radius(std::int64_t n, double p_max, double delta) {
    if (n < 1) throw std::invalid_argument("concentration_radius: n must be >= 1");
    if (!(p_max > 0.0) || p_max > 1.0)
        throw std::invalid_argument("concentration_radius: p_max must be in (0, 1]");
    if (!(delta > 0.0) || !(delta < 1.0))
        throw std::domain_error("concentration_radius: delta must be in (0, 1)");
    const double nd = static_cast<double>(n);
    const double width = 2.0 / nd + p_max;
    return std::sqrt(width * width * nd * std::log(2.0 / delta) / 2.0);
}

// Confidence bonus added to the estimate. Practical: c*sqrt(log(t)/n).
// Theoretical: sqrt((2/n + 1/N)^2 * n * log(2*K*N^4) / 2), finite supports only.
inline double index_bonus(const IndexConfig& config, std::int64_t t, std::int64_t n) {
    if (t < 1) throw std::invalid_argument("index_bonus: t must be >= 1");
    if (n < 1) throw std::invalid_argument("index_bonus: n must be >= 1");
    if (const auto* p = std::get_if<PracticalIndex>(&config.variant)) {
        return p->c * std::sqrt(std::log(static_cast<double>(t)) / static_cast<double>(n));
    }
    const auto& th = std::get<TheoreticalIndex>(config.variant);
    const double nd = static_cast<double>(n);
    const double N = static_cast<double>(th.support_size);
    const double width = 2.0 / nd + 1.0 / N;
    const double log_term =
        std::log(2.0 * static_cast<double>(th.expert_count)) + 4.0 * std::log(N);
    return std::sqrt(width * width * nd * log_term / 2.0);
}

inline double ucb_index(double estimate, double bonus) { return estimate + bonus; }

} // namespace discover::estimator
