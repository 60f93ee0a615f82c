// Command-line front end for the discovery simulator: experiment presets,
// config-driven runs, and macroscopic-limit evaluation, all emitting CSV.

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "discover/config.hpp"
#include "discover/experiment.hpp"
#include "discover/macroscopic.hpp"
#include "discover/policies.hpp"

namespace {

constexpr int kExitConfigError = 2;
constexpr int kExitRuntimeError = 3;

std::string resolve_output_dir(const std::string& flag_value) {
    if (!flag_value.empty()) return flag_value;
    if (const char* dir = std::getenv("DISCOVER_OUT_DIR")) return dir;
    return ".";
}

nlohmann::json fig1_config(std::int64_t N, std::uint64_t seed, const std::string& out_dir) {
    const auto counts = discover::experiment::scaled_counts(
        discover::experiment::kSevenExpertProfile, N);
    return nlohmann::json{
        {"schema", 1},
        {"environment",
         {{"type", "uniform_disjoint"},
          {"N", N},
          {"interesting", {{"type", "per_expert_prefix"}, {"counts", counts}}}}},
        {"policies",
         {{{"name", "good_ucb"}, {"c", 0.5}}, {{"name", "oracle_cl"}}, {{"name", "uniform"}}}},
        {"horizon", 6 * N},
        {"seed", seed},
        {"output_dir", out_dir}};
}

nlohmann::json fig2_config(double c, std::int64_t horizon, std::uint64_t seed,
                           const std::string& out_dir) {
    return nlohmann::json{
        {"schema", 1},
        {"environment",
         {{"type", "geometric"},
          {"means", {100.0, 300.0, 500.0, 700.0, 900.0}},
          {"interesting", {{"type", "primes"}}}}},
        {"policies",
         {{{"name", "good_ucb"}, {"c", c}}, {{"name", "oracle_cl"}}, {{"name", "uniform"}}}},
        {"horizon", horizon},
        {"seed", seed},
        {"output_dir", out_dir}};
}

struct GridSpec {
    double from = 0.0;
    double to = 1.0;
    double step = 0.1;
};

GridSpec parse_grid(const std::string& text) {
    GridSpec grid;
    char sep1 = 0;
    char sep2 = 0;
    std::istringstream in(text);
    if (!(in >> grid.from >> sep1 >> grid.to >> sep2 >> grid.step) || sep1 != ':' ||
        sep2 != ':' || !(grid.step > 0.0) || grid.to < grid.from)
        throw discover::config::ConfigError("bad grid spec (expected a:b:step): " + text);
    return grid;
}

int cmd_macro(const std::vector<double>& q, const std::string& fn, const std::string& grid_text) {
    const discover::macroscopic::MacroProfile profile(q);
    const GridSpec grid = parse_grid(grid_text);
    std::cout << "t," << fn << "\n";
    for (double t = grid.from; t <= grid.to + 1e-12; t += grid.step) {
        double value = 0.0;
        if (fn == "G")
            value = profile.G(t);
        else if (fn == "L")
            value = profile.L(t);
        else if (fn == "T")
            value = profile.T(t);
        else if (fn == "T_inverse")
            value = profile.T_inverse(t);
        else if (fn == "tau")
            value = profile.tau(t);
        else if (fn == "F_limit")
            value = profile.F_limit(t);
        else if (fn == "r_star")
            value = profile.r_star(t);
        else if (fn == "uniform_residual")
            value = profile.uniform_residual(t);
        else
            throw discover::config::ConfigError("unknown function name: " + fn);
        std::cout << discover::csv::format_double(t) << ","
                  << discover::csv::format_double(value) << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sequential discovery with probabilistic experts: Good-UCB, oracle baselines, "
                 "and macroscopic-limit analytics"};
    app.require_subcommand(1);

    std::string config_path;
    auto* simulate = app.add_subcommand("simulate", "Run the policies described in a JSON config");
    simulate->add_option("config", config_path, "Path to the JSON configuration")->required();

    std::int64_t fig1_n = 1000;
    std::uint64_t seed = 1;
    std::string out_dir;
    auto* fig1 = app.add_subcommand(
        "fig1", "7-expert uniform benchmark: Good-UCB vs oracle vs uniform sampling");
    fig1->add_option("--n", fig1_n, "Support size per expert (128, 500, 1000 or 10000)");
    fig1->add_option("--seed", seed, "Random seed");
    fig1->add_option("-o,--out", out_dir, "Output directory");

    double fig2_c = 0.1;
    std::int64_t fig2_horizon = 100000;
    auto* fig2 = app.add_subcommand(
        "fig2", "Geometric experts hunting prime numbers: Good-UCB vs oracle vs uniform");
    fig2->add_option("--c", fig2_c, "Good-UCB exploration constant");
    fig2->add_option("--horizon", fig2_horizon, "Number of steps");
    fig2->add_option("--seed", seed, "Random seed");
    fig2->add_option("-o,--out", out_dir, "Output directory");

    std::vector<double> q_list;
    std::string fn_name;
    std::string grid_text = "0:6:0.05";
    auto* macro = app.add_subcommand("macro", "Evaluate a macroscopic-limit function on a grid");
    macro->add_option("--q", q_list, "Limiting proportions, sorted descending")->required();
    macro->add_option("--fn", fn_name,
                      "One of G, L, T, T_inverse, tau, F_limit, r_star, uniform_residual")
        ->required();
    macro->add_option("--grid", grid_text, "Evaluation grid a:b:step");

    auto* breakpoints = app.add_subcommand(
        "breakpoints", "Print the open-loop entry times of experts 2..K");
    breakpoints->add_option("--q", q_list, "Limiting proportions, strictly sorted descending")
        ->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (simulate->parsed()) {
            auto config = discover::config::load(config_path);
            if (const char* dir = std::getenv("DISCOVER_OUT_DIR")) config.output_dir = dir;
            const auto output = discover::experiment::run_simulation(config);
            for (const auto& file : output.files) std::cout << file << "\n";
            return 0;
        }
        if (fig1->parsed()) {
            if (fig1_n != 128 && fig1_n != 500 && fig1_n != 1000 && fig1_n != 10000)
                std::cerr << "warning: N=" << fig1_n << " is not one of the standard sizes\n";
            auto config = discover::config::parse(
                fig1_config(fig1_n, seed, resolve_output_dir(out_dir)));
            const discover::macroscopic::MacroProfile profile(
                discover::experiment::kSevenExpertProfile);
            const auto output = discover::experiment::run_simulation(config, profile, fig1_n);
            for (const auto& file : output.files) std::cout << file << "\n";
            return 0;
        }
        if (fig2->parsed()) {
            if (!(fig2_c > 0.0)) {
                std::cerr << "error: --c must be > 0\n";
                return kExitConfigError;
            }
            auto config = discover::config::parse(
                fig2_config(fig2_c, fig2_horizon, seed, resolve_output_dir(out_dir)));
            const auto output = discover::experiment::run_simulation(config);
            for (const auto& file : output.files) std::cout << file << "\n";
            return 0;
        }
        if (macro->parsed()) return cmd_macro(q_list, fn_name, grid_text);
        if (breakpoints->parsed()) {
            const discover::macroscopic::MacroProfile profile(q_list);
            std::cout << "expert,entry_time\n";
            const auto times = discover::policies::ool_breakpoints(profile);
            for (std::size_t i = 0; i < times.size(); ++i)
                std::cout << (i + 2) << "," << discover::csv::format_double(times[i]) << "\n";
            return 0;
        }
    } catch (const discover::config::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntimeError;
    }
    return 0;
}
