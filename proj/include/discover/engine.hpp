#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "discover/environment.hpp"
#include "discover/policies.hpp"
#include "discover/rng.hpp"

namespace discover::engine {

using env::Environment;
using env::ItemId;

enum class PolicyKind { GoodUcb, OracleClosedLoop, Uniform, OracleOpenLoop };

struct PolicySpec {
    PolicyKind kind = PolicyKind::GoodUcb;
    estimator::IndexConfig index;     // Good-UCB only
    std::string name() const {
        switch (kind) {
            case PolicyKind::GoodUcb: return "good_ucb";
            case PolicyKind::OracleClosedLoop: return "oracle_cl";
            case PolicyKind::Uniform: return "uniform";
            case PolicyKind::OracleOpenLoop: return "oracle_ol";
        }
        return "?";
    }
};

struct StepRecord {
    std::int64_t t;
    int expert;
    ItemId item;
    bool interesting;
    bool newly_discovered;
    std::int64_t cumulative_found;
};

struct Trace {
    std::string policy_name;
    std::uint64_t seed = 0;
    std::int64_t horizon = 0;
    std::vector<StepRecord> records;              // empty in streaming mode
    std::vector<std::int64_t> found_at_step;      // F^N(t), index t-1
    std::vector<std::int64_t> pull_counts;        // per expert
    std::int64_t total_found = 0;
};

struct RunOptions {
    bool stop_when_exhausted = false;             // requires oracle knowledge
    // Above this horizon only the found curve and pull counts are kept.
    std::int64_t full_record_limit = 10'000'000;
};

namespace detail {

// Sparse global occurrence tracking for general-setting hapax counts:
// an item is a hapax of expert i when its global count is 1 and that one
// occurrence was drawn by expert i. Only interesting items are tracked.
struct HapaxTracker {
    std::unordered_map<ItemId, std::pair<std::int64_t, int>> counts; // item -> (count, first owner)

    // Returns the change this observation causes to each expert's hapax
    // count: {+expert} on 0->1, {-owner} on 1->2, nothing after.
    void observe(ItemId item, int expert, std::vector<std::int64_t>& hapax) {
        auto [it, inserted] = counts.try_emplace(item, 0, expert);
        auto& [count, owner] = it->second;
        ++count;
        if (count == 1) {
            owner = expert;
            ++hapax[static_cast<std::size_t>(expert - 1)];
        } else if (count == 2) {
            --hapax[static_cast<std::size_t>(owner - 1)];
        }
    }
};

} // namespace detail

// Executes the choose -> sample -> observe -> update loop. Deterministic
// given (env, policy, seed): expert i draws from its own substream.
inline Trace run(const Environment& environment, const PolicySpec& policy,
                 std::int64_t horizon, std::uint64_t seed, const RunOptions& options = {}) {
    if (horizon < 1) throw std::invalid_argument("run: horizon must be >= 1");
    const int K = environment.expert_count();

    policies::PolicyState state(K);
    detail::HapaxTracker hapax_tracker;
    std::unordered_set<ItemId> discovered;

    // Oracle knowledge, when needed.
    std::vector<std::int64_t> oracle_counts;
    std::unordered_map<ItemId, std::vector<std::pair<int, double>>> mass_of_item;
    const bool needs_oracle =
        policy.kind == PolicyKind::OracleClosedLoop || options.stop_when_exhausted;
    bool mass_oracle = false;
    if (needs_oracle || policy.kind == PolicyKind::OracleOpenLoop) {
        oracle_counts = environment.interesting_counts();
        if (oracle_counts.empty() && policy.kind == PolicyKind::OracleClosedLoop) {
            const auto tables = environment.interesting_mass_tables();
            state.undiscovered_mass.assign(static_cast<std::size_t>(K), 0.0);
            for (int i = 1; i <= K; ++i) {
                for (const auto& [item, p] : tables[static_cast<std::size_t>(i - 1)]) {
                    state.undiscovered_mass[static_cast<std::size_t>(i - 1)] += p;
                    mass_of_item[item].emplace_back(i, p);
                }
            }
            mass_oracle = true;
        } else if (oracle_counts.empty()) {
            throw std::invalid_argument("run: policy needs oracle knowledge this environment cannot supply");
        } else {
            state.undiscovered = oracle_counts;
        }
    }

    // Open-loop schedule: fixed per-expert budgets, spent largest-deficit-first.
    std::vector<std::int64_t> ool_budget;
    if (policy.kind == PolicyKind::OracleOpenLoop) {
        if (oracle_counts.empty())
            throw std::invalid_argument("run: open-loop oracle needs per-expert interesting counts");
        std::int64_t N = 0;
        for (int i = 1; i <= K; ++i) {
            const auto* u = environment.expert(i).as_uniform_disjoint();
            if (u == nullptr)
                throw std::invalid_argument("run: open-loop oracle needs uniform disjoint experts");
            N = u->N;
        }
        std::vector<double> q(oracle_counts.size());
        std::vector<std::size_t> order(q.size());
        for (std::size_t i = 0; i < q.size(); ++i)
            q[i] = static_cast<double>(oracle_counts[i]) / static_cast<double>(N);
        // Profile must be sorted descending; map budgets back afterwards.
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return q[a] > q[b]; });
        std::vector<double> sorted_q(q.size());
        for (std::size_t i = 0; i < q.size(); ++i) sorted_q[i] = q[order[i]];
        const auto sorted_budget = policies::ool_integer_allocation(
            macroscopic::MacroProfile(sorted_q), N, horizon);
        ool_budget.assign(q.size(), 0);
        for (std::size_t i = 0; i < q.size(); ++i) ool_budget[order[i]] = sorted_budget[i];
    }

    std::vector<rng::Stream> streams;
    streams.reserve(static_cast<std::size_t>(K));
    for (int i = 1; i <= K; ++i) streams.emplace_back(seed, static_cast<std::uint64_t>(i));

    Trace trace;
    trace.policy_name = policy.name();
    trace.seed = seed;
    trace.horizon = horizon;
    trace.pull_counts.assign(static_cast<std::size_t>(K), 0);
    trace.found_at_step.reserve(static_cast<std::size_t>(horizon));
    const bool keep_records = horizon <= options.full_record_limit;
    if (keep_records) trace.records.reserve(static_cast<std::size_t>(horizon));

    std::int64_t total_interesting = 0;
    if (options.stop_when_exhausted)
        for (std::int64_t Qi : oracle_counts) total_interesting += Qi;

    for (std::int64_t t = 1; t <= horizon; ++t) {
        int expert = 1;
        switch (policy.kind) {
            case PolicyKind::GoodUcb:
                expert = policies::good_ucb_choose(state, policy.index);
                break;
            case PolicyKind::OracleClosedLoop:
                expert = mass_oracle ? policies::oracle_mass_choose(state)
                                     : policies::oracle_cl_choose(state);
                break;
            case PolicyKind::Uniform:
                expert = policies::uniform_choose(t, K);
                break;
            case PolicyKind::OracleOpenLoop: {
                std::int64_t best_deficit = -1;
                for (int i = 1; i <= K; ++i) {
                    const std::int64_t deficit = ool_budget[static_cast<std::size_t>(i - 1)] -
                                                 state.pulls[static_cast<std::size_t>(i - 1)];
                    if (deficit > best_deficit) {
                        best_deficit = deficit;
                        expert = i;
                    }
                }
                break;
            }
        }

        const ItemId item = environment.sample(expert, streams[static_cast<std::size_t>(expert - 1)]);
        const bool interesting = environment.is_interesting(item);
        bool newly_discovered = false;
        if (interesting) {
            hapax_tracker.observe(item, expert, state.hapax);
            if (discovered.insert(item).second) {
                newly_discovered = true;
                ++trace.total_found;
                if (!state.undiscovered.empty()) {
                    // Disjoint supports: the item belongs to the drawn expert.
                    --state.undiscovered[static_cast<std::size_t>(expert - 1)];
                }
                if (mass_oracle) {
                    if (auto it = mass_of_item.find(item); it != mass_of_item.end())
                        for (const auto& [i, p] : it->second)
                            state.undiscovered_mass[static_cast<std::size_t>(i - 1)] -= p;
                }
            }
        }
        ++state.pulls[static_cast<std::size_t>(expert - 1)];
        ++trace.pull_counts[static_cast<std::size_t>(expert - 1)];
        state.t = t;
        trace.found_at_step.push_back(trace.total_found);
        if (keep_records)
            trace.records.push_back({t, expert, item, interesting, newly_discovered, trace.total_found});
        if (options.stop_when_exhausted && trace.total_found == total_interesting) break;
    }
    return trace;
}

// F^N(t) for t in 1..len(trace); F^N(0) = 0 by convention.
inline std::int64_t found_at(const Trace& trace, std::int64_t t) {
    if (t <= 0) return 0;
    const auto n = static_cast<std::int64_t>(trace.found_at_step.size());
    return trace.found_at_step[static_cast<std::size_t>(std::min(t, n) - 1)];
}

struct CurvePoint {
    std::int64_t t;
    std::int64_t found;
};

inline std::vector<CurvePoint> found_curve(const Trace& trace) {
    std::vector<CurvePoint> curve;
    curve.reserve(trace.found_at_step.size());
    for (std::size_t i = 0; i < trace.found_at_step.size(); ++i)
        curve.push_back({static_cast<std::int64_t>(i + 1), trace.found_at_step[i]});
    return curve;
}

// tau^N(f) = min{t : F^N(t) = f}; nullopt when never reached.
inline std::optional<std::int64_t> tau_of(const Trace& trace, std::int64_t f) {
    if (f < 0) throw std::invalid_argument("tau_of: f must be >= 0");
    if (f == 0) return 0;
    const auto it = std::lower_bound(trace.found_at_step.begin(), trace.found_at_step.end(), f);
    if (it == trace.found_at_step.end() || *it != f) return std::nullopt;
    return static_cast<std::int64_t>(it - trace.found_at_step.begin()) + 1;
}

// T^N(l): first step after which every expert has at most l undiscovered
// interesting items. Needs per-expert counts and full step records.
inline std::optional<std::int64_t> T_of(const Trace& trace, const Environment& environment,
                                        std::int64_t l) {
    const auto counts = environment.interesting_counts();
    if (counts.empty())
        throw std::invalid_argument("T_of: environment does not expose per-expert counts");
    if (trace.records.empty() && trace.horizon > 0)
        throw std::invalid_argument("T_of: trace was recorded in streaming mode");
    std::vector<std::int64_t> undiscovered = counts;
    auto all_below = [&] {
        for (std::int64_t u : undiscovered)
            if (u > l) return false;
        return true;
    };
    if (all_below()) return 0;
    for (const auto& record : trace.records) {
        if (record.newly_discovered) {
            --undiscovered[static_cast<std::size_t>(record.expert - 1)];
            if (all_below()) return record.t;
        }
    }
    return std::nullopt;
}

struct BatchSummary {
    std::vector<std::int64_t> checkpoints;
    std::vector<double> mean_found;
    std::vector<double> std_found;
};

struct BatchResult {
    std::vector<Trace> traces;
    BatchSummary summary;
};

inline std::vector<std::int64_t> default_checkpoints(std::int64_t horizon, int count = 200) {
    std::vector<std::int64_t> grid;
    grid.reserve(static_cast<std::size_t>(count));
    for (int j = 1; j <= count; ++j) {
        const std::int64_t t = horizon * j / count;
        if (t >= 1 && (grid.empty() || t != grid.back())) grid.push_back(t);
    }
    return grid;
}

// Independent runs, one per seed; summary statistics on the checkpoint grid.
inline BatchResult batch_run(const Environment& environment, const PolicySpec& policy,
                             std::int64_t horizon, const std::vector<std::uint64_t>& seeds,
                             std::vector<std::int64_t> checkpoints = {},
                             const RunOptions& options = {}) {
    if (seeds.empty()) throw std::invalid_argument("batch_run: need at least one seed");
    if (checkpoints.empty()) checkpoints = default_checkpoints(horizon);
    BatchResult result;
    result.traces.reserve(seeds.size());
    for (std::uint64_t seed : seeds) result.traces.push_back(run(environment, policy, horizon, seed, options));
    result.summary.checkpoints = checkpoints;
    for (std::int64_t t : checkpoints) {
        double mean = 0.0;
        for (const auto& trace : result.traces) mean += static_cast<double>(found_at(trace, t));
        mean /= static_cast<double>(result.traces.size());
        double var = 0.0;
        for (const auto& trace : result.traces) {
            const double d = static_cast<double>(found_at(trace, t)) - mean;
            var += d * d;
        }
        var /= static_cast<double>(result.traces.size());
        result.summary.mean_found.push_back(mean);
        result.summary.std_found.push_back(std::sqrt(var));
    }
    return result;
}

} // namespace discover::engine
