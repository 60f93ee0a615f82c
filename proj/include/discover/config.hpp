#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "discover/engine.hpp"
#include "discover/environment.hpp"

namespace discover::config {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
    env::Environment environment;
    std::vector<engine::PolicySpec> policies;
    std::int64_t horizon = 1;
    std::vector<std::uint64_t> seeds;
    int checkpoints = 200;
    std::string output_dir = ".";
    std::string canonical; // canonical JSON dump, hashed into output headers
};

namespace detail {

inline env::Environment parse_environment(const nlohmann::json& j) {
    const std::string type = j.at("type").get<std::string>();
    auto parse_interesting = [&](std::int64_t N) -> env::InterestingSet {
        const auto& ji = j.at("interesting");
        const std::string itype = ji.at("type").get<std::string>();
        if (itype == "per_expert_prefix")
            return env::InterestingSet(
                env::PerExpertPrefix{ji.at("counts").get<std::vector<std::int64_t>>(), N});
        if (itype == "primes") return env::InterestingSet(env::Primes{});
        if (itype == "explicit_set") {
            env::ExplicitSet set;
            for (auto id : ji.at("items").get<std::vector<std::int64_t>>()) set.items.insert(id);
            return env::InterestingSet(std::move(set));
        }
        throw ConfigError("unknown interesting-set type in field 'environment.interesting.type': " + itype);
    };
    if (type == "uniform_disjoint") {
        const auto N = j.at("N").get<std::int64_t>();
        int K = 0;
        if (j.contains("experts")) K = j.at("experts").get<int>();
        auto interesting = parse_interesting(N);
        if (K == 0) {
            const auto* prefix = interesting.as_prefix();
            if (prefix == nullptr)
                throw ConfigError("field 'environment.experts' is required unless interesting is per_expert_prefix");
            K = static_cast<int>(prefix->counts.size());
        }
        std::vector<env::ExpertModel> experts;
        for (int i = 1; i <= K; ++i) experts.emplace_back(env::UniformDisjoint{i, N});
        return env::Environment(std::move(experts), std::move(interesting));
    }
    if (type == "geometric") {
        std::vector<env::ExpertModel> experts;
        for (double mean : j.at("means").get<std::vector<double>>())
            experts.emplace_back(env::Geometric{mean});
        return env::Environment(std::move(experts), parse_interesting(0));
    }
    if (type == "explicit") {
        std::vector<env::ExpertModel> experts;
        for (const auto& je : j.at("experts")) {
            env::ExplicitDiscrete d;
            for (const auto& item : je.at("items"))
                d.items.emplace_back(item.at(0).get<std::int64_t>(), item.at(1).get<double>());
            experts.emplace_back(std::move(d));
        }
        return env::Environment(std::move(experts), parse_interesting(0));
    }
    throw ConfigError("unknown environment type in field 'environment.type': " + type);
}

inline engine::PolicySpec parse_policy(const nlohmann::json& j) {
    engine::PolicySpec spec;
    const std::string name = j.at("name").get<std::string>();
    if (name == "good_ucb") {
        spec.kind = engine::PolicyKind::GoodUcb;
        if (j.value("variant", "practical") == "theoretical") {
            spec.index = estimator::theoretical_index(j.at("N").get<std::int64_t>(),
                                                      j.at("K").get<int>());
        } else {
            spec.index = estimator::practical_index(j.value("c", 0.5));
        }
    } else if (name == "oracle_cl") {
        spec.kind = engine::PolicyKind::OracleClosedLoop;
    } else if (name == "uniform") {
        spec.kind = engine::PolicyKind::Uniform;
    } else if (name == "oracle_ol") {
        spec.kind = engine::PolicyKind::OracleOpenLoop;
    } else {
        throw ConfigError("unknown policy name in field 'policies[].name': " + name);
    }
    return spec;
}

} // namespace detail

inline ExperimentConfig parse(const nlohmann::json& j) {
    try {
        if (j.value("schema", 0) != 1) throw ConfigError("field 'schema' must be 1");
        ExperimentConfig config{detail::parse_environment(j.at("environment")), {}, 1, {}, 200, ".", ""};
        for (const auto& jp : j.at("policies")) config.policies.push_back(detail::parse_policy(jp));
        if (config.policies.empty()) throw ConfigError("field 'policies' must list at least one policy");
        config.horizon = j.at("horizon").get<std::int64_t>();
        if (config.horizon < 1) throw ConfigError("field 'horizon' must be >= 1");
        if (j.contains("seeds"))
            config.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
        else
            config.seeds = {j.value("seed", std::uint64_t{1})};
        config.checkpoints = j.value("checkpoints", 200);
        config.output_dir = j.value("output_dir", std::string("."));
        config.canonical = j.dump();
        return config;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config error: ") + e.what());
    }
}

inline ExperimentConfig load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in, nullptr, true, true);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("malformed config: ") + e.what());
    }
    return parse(j);
}

} // namespace discover::config
