#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "jiomber/complexity.hpp"
#include "jiomber/config.hpp"
#include "jiomber/harness.hpp"
#include "jiomber/validation.hpp"

namespace {

jiomber::ExperimentConfig load_config(const std::string& config_path,
                                      const std::string& preset_name) {
    if (!config_path.empty() && !preset_name.empty())
        throw jiomber::ConfigError("--config and --preset are mutually exclusive");
    if (!preset_name.empty()) return jiomber::preset(preset_name);
    if (config_path.empty())
        throw jiomber::ConfigError("run needs --config PATH or --preset NAME");
    std::ifstream in(config_path);
    if (!in) throw jiomber::ConfigError("cannot open config file '" + config_path + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return jiomber::parse_config(text.str());
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw jiomber::ConfigError("cannot open output file '" + path.string() + "'");
    out << content;
}

int do_run(const std::string& config_path, const std::string& preset_name,
           std::vector<std::string> overrides, const std::optional<long long>& runs,
           const std::optional<std::uint64_t>& seed, const std::string& out_path) {
    jiomber::ExperimentConfig config = load_config(config_path, preset_name);
    if (runs) overrides.push_back("runs=" + std::to_string(*runs));
    if (seed) overrides.push_back("seed=" + std::to_string(*seed));
    for (const std::string& assignment : overrides)
        jiomber::apply_override(config, assignment);
    jiomber::validate_config(config);

    const jiomber::ExperimentResult result = jiomber::run_experiment(config);
    const std::string csv = jiomber::to_csv(result);
    if (out_path.empty()) {
        std::cout << csv;
        return 0;
    }
    const std::filesystem::path csv_path(out_path);
    std::filesystem::path json_path(out_path);
    json_path.replace_extension(".json");
    if (json_path == csv_path) json_path += ".json";
    write_file(csv_path, csv);
    write_file(json_path, jiomber::to_json(result, overrides));
    std::cerr << "wrote " << csv_path.string() << " and " << json_path.string() << "\n";
    return 0;
}

int do_preset(const std::string& name) {
    if (name.empty()) {
        for (const std::string& n : jiomber::preset_names()) std::cout << n << "\n";
        return 0;
    }
    std::cout << jiomber::serialize_config(jiomber::preset(name));
    return 0;
}

int do_complexity(long long m, long long d, const std::string& out_path) {
    std::string csv = "algorithm,multiplications,additions\n";
    std::cout << "per-symbol complex operations at M = " << m << ", D = " << d << "\n\n";
    std::cout.setf(std::ios::left);
    std::cout.width(16);
    std::cout << "algorithm";
    std::cout.width(16);
    std::cout << "multiplications";
    std::cout << "additions\n";
    for (jiomber::Algorithm alg : jiomber::all_algorithms()) {
        const jiomber::OpCount ops = jiomber::count_ops(alg, m, d);
        const std::string mul = ops.exact ? std::to_string(ops.mul) : ops.order;
        const std::string add = ops.exact ? std::to_string(ops.add) : ops.order;
        std::cout.width(16);
        std::cout << jiomber::algorithm_name(alg);
        std::cout.width(16);
        std::cout << mul;
        std::cout << add << "\n";
        csv += std::string(jiomber::algorithm_name(alg)) + "," + mul + "," + add + "\n";
    }
    if (!out_path.empty()) {
        write_file(out_path, csv);
        std::cerr << "wrote " << out_path << "\n";
    }
    return 0;
}

int do_validate(std::uint64_t seed) {
    bool all_pass = true;
    for (const jiomber::CheckResult& check : jiomber::run_all_checks(seed)) {
        std::cout << (check.pass ? "[PASS] " : "[FAIL] ") << check.name << ": "
                  << check.detail << "\n";
        all_pass = all_pass && check.pass;
    }
    return all_pass ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Reduced-rank adaptive MBER receiver simulations"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "Run a Monte-Carlo experiment");
    std::string config_path, run_preset, out_path;
    std::vector<std::string> overrides;
    std::optional<long long> runs;
    std::optional<std::uint64_t> seed;
    run->add_option("--config", config_path, "Experiment config file (key = value lines)");
    run->add_option("--preset", run_preset, "Built-in preset name (see `preset`)");
    run->add_option("--set", overrides, "KEY=VALUE override, repeatable");
    run->add_option("--runs", runs, "Override the number of Monte-Carlo runs");
    run->add_option("--seed", seed, "Override the base seed");
    run->add_option("--out", out_path,
                    "CSV output path, with a JSON summary alongside (default: CSV to stdout)");

    auto* preset_cmd =
        app.add_subcommand("preset", "List presets, or print one in config-file form");
    std::string preset_name;
    preset_cmd->add_option("name", preset_name, "Preset to print");

    auto* complexity_cmd =
        app.add_subcommand("complexity", "Per-symbol operation counts of every detector");
    long long m = 32, d = 6;
    std::string complexity_out;
    complexity_cmd->add_option("--m", m, "Number of antennas")->check(CLI::PositiveNumber);
    complexity_cmd->add_option("--d", d, "Operating rank")->check(CLI::PositiveNumber);
    complexity_cmd->add_option("--out", complexity_out, "Also write the table as CSV");

    auto* validate_cmd = app.add_subcommand("validate", "Run the self-check suite");
    std::uint64_t validate_seed = 1;
    validate_cmd->add_option("--seed", validate_seed, "Seed for the randomized checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (run->parsed()) return do_run(config_path, run_preset, overrides, runs, seed, out_path);
        if (preset_cmd->parsed()) return do_preset(preset_name);
        if (complexity_cmd->parsed()) return do_complexity(m, d, complexity_out);
        if (validate_cmd->parsed()) return do_validate(validate_seed);
    } catch (const jiomber::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
