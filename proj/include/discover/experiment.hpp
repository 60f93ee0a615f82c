#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "discover/config.hpp"
#include "discover/csv.hpp"
#include "discover/engine.hpp"
#include "discover/macroscopic.hpp"

namespace discover::experiment {

// The 7-expert benchmark proportions.
inline const std::vector<double> kSevenExpertProfile = {0.512, 0.256, 0.128,
                                                        0.064, 0.032, 0.016, 0.008};

// Round-half-up interesting counts Q_i = round(q_i * N).
inline std::vector<std::int64_t> scaled_counts(const std::vector<double>& q, std::int64_t N) {
    std::vector<std::int64_t> counts;
    counts.reserve(q.size());
    for (double qi : q)
        counts.push_back(static_cast<std::int64_t>(std::floor(qi * static_cast<double>(N) + 0.5)));
    return counts;
}

struct SimulationOutput {
    std::vector<std::string> files;
    std::vector<engine::Trace> traces; // first seed of each policy, in order
};

// Runs every configured policy and writes one per-policy CSV plus a
// combined comparison CSV. Data rows are a pure function of the config,
// so identical invocations reproduce them byte for byte.
inline SimulationOutput run_simulation(const config::ExperimentConfig& config,
                                       const std::optional<macroscopic::MacroProfile>& reference =
                                           std::nullopt,
                                       std::int64_t reference_scale = 1) {
    namespace fs = std::filesystem;
    fs::create_directories(config.output_dir);
    const std::string config_hash = csv::hash_hex(csv::fnv1a64(config.canonical));

    SimulationOutput output;
    auto add_metadata = [&](csv::Writer& writer, const engine::PolicySpec& policy) {
        writer.metadata("generator", rng::kGeneratorName);
        writer.metadata("seed", std::to_string(config.seeds.front()));
        writer.metadata("config_hash", config_hash);
        writer.metadata("policy", policy.name());
        writer.metadata("horizon", std::to_string(config.horizon));
    };

    for (const auto& policy : config.policies) {
        const auto result = engine::batch_run(config.environment, policy, config.horizon,
                                              config.seeds,
                                              engine::default_checkpoints(config.horizon,
                                                                          config.checkpoints));
        const std::string path =
            (fs::path(config.output_dir) / (policy.name() + ".csv")).string();
        csv::Writer writer(path);
        add_metadata(writer, policy);
        writer.header({"step", "found"});
        for (const auto& point : engine::found_curve(result.traces.front()))
            writer.write_row({std::to_string(point.t), std::to_string(point.found)});
        output.files.push_back(path);
        output.traces.push_back(result.traces.front());
    }

    const std::string combined_path = (fs::path(config.output_dir) / "comparison.csv").string();
    csv::Writer writer(combined_path);
    writer.metadata("generator", rng::kGeneratorName);
    writer.metadata("seed", std::to_string(config.seeds.front()));
    writer.metadata("config_hash", config_hash);
    std::vector<std::string> columns = {"step"};
    for (const auto& policy : config.policies) columns.push_back("found_" + policy.name());
    if (reference.has_value()) columns.push_back("f_limit_ref");
    writer.header(columns);
    for (std::int64_t t = 1; t <= config.horizon; ++t) {
        std::vector<std::string> row = {std::to_string(t)};
        for (const auto& trace : output.traces)
            row.push_back(std::to_string(engine::found_at(trace, t)));
        if (reference.has_value()) {
            const double scale = static_cast<double>(reference_scale);
            row.push_back(csv::format_double(
                reference->F_limit(static_cast<double>(t) / scale) * scale));
        }
        writer.write_row(row);
    }
    output.files.push_back(combined_path);
    return output;
}

} // namespace discover::experiment
