#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <variant>
#include <vector>

#include "discover/rng.hpp"

namespace discover::env {

using ItemId = std::int64_t;

// Deterministic Miller-Rabin, exact for all 64-bit inputs.
namespace detail {
inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}
inline std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}
} // namespace detail

inline bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % p == 0) return n == p;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    // This witness set is exact below 3.3e24 (Sorenson & Webster).
    for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        std::uint64_t x = detail::powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int r = 1; r < s; ++r) {
            x = detail::mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

// Uniform on {expert} x {1..N}; ids encoded as (expert-1)*N + x so supports
// are disjoint by construction.
struct UniformDisjoint {
    int expert = 1;
    std::int64_t N = 1;
};

// Geometric on {1, 2, ...} with P(x) = (1-p)^{x-1} p, p = 1/mean.
struct Geometric {
    double mean = 1.0;
};

struct ExplicitDiscrete {
    std::vector<std::pair<ItemId, double>> items;
};

class ExpertModel {
  public:
    explicit ExpertModel(UniformDisjoint u) : kind_(u) {
        if (u.N < 1) throw std::invalid_argument("UniformDisjoint: N must be >= 1");
        if (u.expert < 1) throw std::invalid_argument("UniformDisjoint: bad expert index");
    }
    explicit ExpertModel(Geometric g) : kind_(g) {
        if (!(g.mean >= 1.0)) throw std::invalid_argument("Geometric: mean must be >= 1");
    }
    explicit ExpertModel(ExplicitDiscrete d) : kind_(std::move(d)) {
        const auto& items = std::get<ExplicitDiscrete>(kind_).items;
        if (items.empty()) throw std::invalid_argument("ExplicitDiscrete: empty support");
        double total = 0.0;
        for (const auto& [id, p] : items) {
            if (!(p > 0.0)) throw std::invalid_argument("ExplicitDiscrete: probabilities must be > 0");
            total += p;
        }
        if (std::abs(total - 1.0) > 1e-12)
            throw std::invalid_argument("ExplicitDiscrete: probabilities must sum to 1");
    }

    ItemId sample(rng::Stream& stream) const {
        if (const auto* u = std::get_if<UniformDisjoint>(&kind_)) {
            const auto x = static_cast<std::int64_t>(
                stream.uniform_1_to_n(static_cast<std::uint64_t>(u->N)));
            return (static_cast<std::int64_t>(u->expert) - 1) * u->N + x;
        }
        if (const auto* g = std::get_if<Geometric>(&kind_)) {
            // Inverse CDF: X = ceil(log(u) / log(1-p)), u uniform in (0,1).
            const double p = 1.0 / g->mean;
            const double u = stream.uniform_open01();
            const double x = std::ceil(std::log(u) / std::log1p(-p));
            return x < 1.0 ? 1 : static_cast<ItemId>(x);
        }
        const auto& d = std::get<ExplicitDiscrete>(kind_);
        double u = stream.uniform_open01();
        for (const auto& [id, p] : d.items) {
            u -= p;
            if (u <= 0.0) return id;
        }
        return d.items.back().first;
    }

    double p_max() const {
        if (const auto* u = std::get_if<UniformDisjoint>(&kind_))
            return 1.0 / static_cast<double>(u->N);
        if (const auto* g = std::get_if<Geometric>(&kind_)) return 1.0 / g->mean;
        const auto& d = std::get<ExplicitDiscrete>(kind_);
        double best = 0.0;
        for (const auto& [id, p] : d.items) best = std::max(best, p);
        return best;
    }

    // Probability of a single item (0 outside the support).
    double probability(ItemId item) const {
        if (const auto* u = std::get_if<UniformDisjoint>(&kind_)) {
            const std::int64_t lo = (static_cast<std::int64_t>(u->expert) - 1) * u->N;
            return (item > lo && item <= lo + u->N) ? 1.0 / static_cast<double>(u->N) : 0.0;
        }
        if (const auto* g = std::get_if<Geometric>(&kind_)) {
            if (item < 1) return 0.0;
            const double p = 1.0 / g->mean;
            return std::exp(static_cast<double>(item - 1) * std::log1p(-p)) * p;
        }
        const auto& d = std::get<ExplicitDiscrete>(kind_);
        for (const auto& [id, p] : d.items)
            if (id == item) return p;
        return 0.0;
    }

    bool is_uniform_disjoint() const { return std::holds_alternative<UniformDisjoint>(kind_); }
    bool is_geometric() const { return std::holds_alternative<Geometric>(kind_); }
    const UniformDisjoint* as_uniform_disjoint() const { return std::get_if<UniformDisjoint>(&kind_); }
    const Geometric* as_geometric() const { return std::get_if<Geometric>(&kind_); }
    const ExplicitDiscrete* as_explicit() const { return std::get_if<ExplicitDiscrete>(&kind_); }

  private:
    std::variant<UniformDisjoint, Geometric, ExplicitDiscrete> kind_;
};

struct ExplicitSet {
    std::unordered_set<ItemId> items;
};

// Items (i, 1..Q_i) are interesting under the disjoint encoding.
struct PerExpertPrefix {
    std::vector<std::int64_t> counts; // Q_1..Q_K
    std::int64_t N = 1;
};

struct Primes {};

class InterestingSet {
  public:
    explicit InterestingSet(ExplicitSet s) : kind_(std::move(s)) {}
    explicit InterestingSet(PerExpertPrefix p) : kind_(std::move(p)) {
        const auto& pp = std::get<PerExpertPrefix>(kind_);
        for (std::int64_t Qi : pp.counts)
            if (Qi < 0 || Qi > pp.N)
                throw std::invalid_argument("PerExpertPrefix: need 0 <= Q_i <= N");
    }
    explicit InterestingSet(Primes p) : kind_(p) {}

    bool contains(ItemId item) const {
        if (const auto* s = std::get_if<ExplicitSet>(&kind_)) return s->items.count(item) > 0;
        if (const auto* p = std::get_if<PerExpertPrefix>(&kind_)) {
            if (item < 1) return false;
            const std::int64_t expert = (item - 1) / p->N; // 0-based
            const std::int64_t x = (item - 1) % p->N + 1;
            if (expert >= static_cast<std::int64_t>(p->counts.size())) return false;
            return x <= p->counts[static_cast<std::size_t>(expert)];
        }
        return item >= 2 && is_prime(static_cast<std::uint64_t>(item));
    }

    const PerExpertPrefix* as_prefix() const { return std::get_if<PerExpertPrefix>(&kind_); }
    const ExplicitSet* as_explicit() const { return std::get_if<ExplicitSet>(&kind_); }
    bool is_primes() const { return std::holds_alternative<Primes>(kind_); }

  private:
    std::variant<ExplicitSet, PerExpertPrefix, Primes> kind_;
};

// Immutable after construction; random streams live per run, not here.
class Environment {
  public:
    Environment(std::vector<ExpertModel> experts, InterestingSet interesting)
        : experts_(std::move(experts)), interesting_(std::move(interesting)) {
        if (experts_.empty()) throw std::invalid_argument("Environment: need at least one expert");
        disjoint_ = true;
        for (const auto& e : experts_)
            if (!e.is_uniform_disjoint()) disjoint_ = false;
    }

    int expert_count() const { return static_cast<int>(experts_.size()); }
    const ExpertModel& expert(int i) const { return experts_.at(static_cast<std::size_t>(i - 1)); }
    const InterestingSet& interesting() const { return interesting_; }
    bool disjoint_supports() const { return disjoint_; }

    ItemId sample(int expert, rng::Stream& stream) const {
        return this->expert(expert).sample(stream);
    }

    bool is_interesting(ItemId item) const { return interesting_.contains(item); }

    double p_max(int expert) const { return this->expert(expert).p_max(); }

    // Per-expert interesting counts, when exactly known (oracle knowledge).
    // Empty when the environment cannot supply them.
    std::vector<std::int64_t> interesting_counts() const {
        if (const auto* p = interesting_.as_prefix()) return p->counts;
        if (const auto* s = interesting_.as_explicit()) {
            std::vector<std::int64_t> counts(experts_.size(), 0);
            for (ItemId item : s->items) {
                for (std::size_t i = 0; i < experts_.size(); ++i)
                    if (experts_[i].probability(item) > 0.0) ++counts[i];
            }
            return counts;
        }
        return {};
    }

    // Per-expert interesting item lists with their probabilities, for
    // mass-based oracles on infinite supports. Geometric supports are
    // truncated at the 1e-12 upper tail quantile; the dropped mass per
    // expert is below 1e-12.
    std::vector<std::vector<std::pair<ItemId, double>>> interesting_mass_tables() const {
        std::vector<std::vector<std::pair<ItemId, double>>> tables(experts_.size());
        for (std::size_t i = 0; i < experts_.size(); ++i) {
            const auto& e = experts_[i];
            if (const auto* g = e.as_geometric()) {
                const double p = 1.0 / g->mean;
                const auto cutoff = static_cast<ItemId>(
                    std::ceil(std::log(1e-12) / std::log1p(-p)));
                for (ItemId x = 1; x <= cutoff; ++x)
                    if (interesting_.contains(x)) tables[i].emplace_back(x, e.probability(x));
            } else if (const auto* u = e.as_uniform_disjoint()) {
                const std::int64_t lo = (static_cast<std::int64_t>(u->expert) - 1) * u->N;
                for (std::int64_t x = 1; x <= u->N; ++x)
                    if (interesting_.contains(lo + x)) tables[i].emplace_back(lo + x, e.probability(lo + x));
            } else if (const auto* d = e.as_explicit()) {
                for (const auto& [id, prob] : d->items)
                    if (interesting_.contains(id)) tables[i].emplace_back(id, prob);
            }
        }
        return tables;
    }

  private:
    std::vector<ExpertModel> experts_;
    InterestingSet interesting_;
    bool disjoint_ = false;
};

// The standard benchmark environment: K uniform disjoint experts of support
// size N with interesting prefixes Q_1..Q_K.
inline Environment make_uniform_prefix_env(std::int64_t N, std::vector<std::int64_t> counts) {
    std::vector<ExpertModel> experts;
    const int K = static_cast<int>(counts.size());
    experts.reserve(static_cast<std::size_t>(K));
    for (int i = 1; i <= K; ++i) experts.emplace_back(UniformDisjoint{i, N});
    return Environment(std::move(experts), InterestingSet(PerExpertPrefix{std::move(counts), N}));
}

} // namespace discover::env
