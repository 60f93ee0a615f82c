#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace discover::macroscopic {

// Limiting proportions q_1 >= ... >= q_K of interesting items per expert.
// Segment data for the piecewise closed-form inverses is precomputed on
// construction; no iteration is needed at evaluation time.
class MacroProfile {
  public:
    explicit MacroProfile(std::vector<double> q) : q_(std::move(q)) {
        if (q_.empty()) throw std::invalid_argument("MacroProfile: empty profile");
        for (std::size_t i = 0; i < q_.size(); ++i) {
            if (!(q_[i] > 0.0) || !(q_[i] < 1.0))
                throw std::invalid_argument("MacroProfile: proportions must be in (0,1)");
            if (i > 0 && q_[i] > q_[i - 1])
                throw std::invalid_argument("MacroProfile: proportions must be sorted descending");
        }
        q_total_ = std::accumulate(q_.begin(), q_.end(), 0.0);
        // Prefix sums of log q_i, and entry times T(q_i) of each expert.
        log_prefix_.resize(q_.size() + 1, 0.0);
        for (std::size_t i = 0; i < q_.size(); ++i)
            log_prefix_[i + 1] = log_prefix_[i] + std::log(q_[i]);
        entry_time_.resize(q_.size());
        for (std::size_t i = 0; i < q_.size(); ++i) entry_time_[i] = T(q_[i]);
    }

    const std::vector<double>& q() const { return q_; }
    std::size_t size() const { return q_.size(); }
    double q_total() const { return q_total_; }

    // Geometric mean of q_1..q_i (1-based i).
    double geometric_mean(std::size_t i) const {
        return std::exp(log_prefix_[i] / static_cast<double>(i));
    }

    // Arithmetic mean of all proportions.
    double arithmetic_mean() const { return q_total_ / static_cast<double>(q_.size()); }

    // Macroscopic time at which expert i (1-based) starts being requested
    // by the optimal allocation; expert 1 enters at time 0.
    double entry_time(std::size_t i) const { return entry_time_[i - 1]; }

    // Number of experts i with entry_time(i) strictly below t.
    std::size_t active_count(double t) const {
        std::size_t count = 1;
        while (count < q_.size() && entry_time_[count] < t) ++count;
        return count;
    }

    // G(lambda) = sum_i (q_i - lambda)_+
    double G(double lambda) const {
        if (lambda < 0.0 || lambda > q_[0])
            throw std::domain_error("G: lambda outside [0, q_1]");
        double acc = 0.0;
        for (double qi : q_) acc += std::max(qi - lambda, 0.0);
        return acc;
    }

    // Inverse of G, piecewise linear with kinks at the q_i.
    double L(double phi) const {
        if (phi < 0.0 || phi > q_total_ + 1e-12)
            throw std::domain_error("L: phi outside [0, q_total]");
        phi = std::min(phi, q_total_);
        // On the segment where the first i experts exceed lambda:
        //   G(lambda) = (sum_{j<=i} q_j) - i*lambda.
        double prefix = 0.0;
        for (std::size_t i = 1; i <= q_.size(); ++i) {
            prefix += q_[i - 1];
            const double lo = (i < q_.size()) ? q_[i] : 0.0;
            const double lambda = (prefix - phi) / static_cast<double>(i);
            if (lambda >= lo - 1e-15) return std::clamp(lambda, 0.0, q_[0]);
        }
        return 0.0;
    }

    // T(lambda) = sum over experts with q_i > lambda of log(q_i / lambda).
    double T(double lambda) const {
        if (!(lambda > 0.0)) throw std::domain_error("T: lambda must be > 0");
        if (lambda > q_[0] + 1e-15) throw std::domain_error("T: lambda above q_1");
        double acc = 0.0;
        for (double qi : q_)
            if (qi > lambda) acc += std::log(qi / lambda);
        return acc;
    }

    // Closed-form inverse of T. On the segment where the first i experts are
    // above lambda:  lambda = exp((sum_{j<=i} log q_j - t) / i).
    double T_inverse(double t) const {
        if (t < 0.0) throw std::domain_error("T_inverse: t must be >= 0");
        if (t == 0.0) return q_[0];
        std::size_t i = active_count(t);
        return std::exp((log_prefix_[i] - t) / static_cast<double>(i));
    }

    // tau(phi) = T(L(phi)): macroscopic time to collect a proportion phi.
    double tau(double phi) const {
        if (phi < 0.0 || phi >= q_total_)
            throw std::domain_error("tau: phi outside [0, q_total)");
        if (phi == 0.0) return 0.0;
        return T(L(phi));
    }

    // F(t) = G(T^{-1}(t)): limiting proportion found by an optimal policy.
    double F_limit(double t) const {
        if (t < 0.0) throw std::domain_error("F_limit: t must be >= 0");
        return G(T_inverse(t));
    }

    // r*(t) = I(t) * geo_mean(I(t)) * exp(-t/I(t)) + sum_{i > I(t)} q_i:
    // undiscovered proportion under the optimal open-loop allocation.
    double r_star(double t) const {
        if (t < 0.0) throw std::domain_error("r_star: t must be >= 0");
        const std::size_t I = active_count(t);
        double tail = 0.0;
        for (std::size_t i = I; i < q_.size(); ++i) tail += q_[i];
        return static_cast<double>(I) * geometric_mean(I) *
                   std::exp(-t / static_cast<double>(I)) +
               tail;
    }

    // Undiscovered proportion under balanced sampling: K * mean(q) * exp(-t/K).
    double uniform_residual(double t) const {
        if (t < 0.0) throw std::domain_error("uniform_residual: t must be >= 0");
        return q_total_ * std::exp(-t / static_cast<double>(q_.size()));
    }

  private:
    std::vector<double> q_;
    double q_total_ = 0.0;
    std::vector<double> log_prefix_;
    std::vector<double> entry_time_;
};

// E[D_{i,k}] = N/Q + N/(Q-1) + ... + N/(Q-k+1): expected draw index of the
// k-th new interesting item for an expert with Q interesting items out of N.
// Summed smallest-terms-first so the Lemma-style bound tests are exact.
inline double expected_discovery_time(std::int64_t N, std::int64_t Q, std::int64_t k) {
    if (N < 1 || Q < 1 || Q > N) throw std::domain_error("expected_discovery_time: need 1 <= Q <= N");
    if (k < 1 || k > Q) throw std::domain_error("expected_discovery_time: need 1 <= k <= Q");
    double acc = 0.0;
    for (std::int64_t j = Q - k + 1; j <= Q; ++j) acc += 1.0 / static_cast<double>(j);
    return static_cast<double>(N) * acc;
}

// E[T^N(l)]: expected time until every expert has at most l undiscovered
// interesting items, under the closed-loop oracle.
inline double expected_T(std::int64_t N, const std::vector<std::int64_t>& Q, std::int64_t l) {
    if (l < 0) throw std::domain_error("expected_T: l must be >= 0");
    double acc = 0.0;
    for (std::int64_t Qi : Q)
        if (Qi > l) acc += expected_discovery_time(N, Qi, Qi - l);
    return acc;
}

struct HarmonicBounds {
    double lower;
    double sum;
    double upper;
};

// Bounds on the harmonic tail sum_{j=k+1}^{n} 1/j:
//   -1/k + log(n/k) <= sum <= log(n/k).
inline HarmonicBounds harmonic_bounds(std::int64_t k, std::int64_t n) {
    if (k < 1 || n < k) throw std::domain_error("harmonic_bounds: need 1 <= k <= n");
    double sum = 0.0;
    for (std::int64_t j = n; j > k; --j) sum += 1.0 / static_cast<double>(j);
    const double log_ratio = std::log(static_cast<double>(n) / static_cast<double>(k));
    return {-1.0 / static_cast<double>(k) + log_ratio, sum, log_ratio};
}

} // namespace discover::macroscopic
