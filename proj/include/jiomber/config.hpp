#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

// Experiment description and its flat key = value file format. Every field
// of ExperimentConfig maps to one key; parse/serialize round-trip exactly
// (doubles are printed with the shortest representation that parses back to
// the same bits).

namespace jiomber {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class SweepKind { Symbols, Snr, Users, Doppler };

struct ReceiverSpec {
    enum class Alg { FullLms, FullMber, MwfLms, MwfMber, JioLms, Eig, JioMber };
    Alg alg = Alg::JioMber;
    std::size_t rank = 0;       // fixed rank; unused for the full-rank detectors
    bool auto_rank = false;     // jio-mber only
    std::size_t d_min = 0, d_max = 0;

    // Grammar: "full-rank-lms" | "full-rank-mber" | "mwf-lms:D" |
    // "mwf-mber:D" | "jio-lms:D" | "eig:D" | "jio-mber:D" |
    // "jio-mber:MIN-MAX" (automatic rank selection over [MIN, MAX]).
    static ReceiverSpec parse(const std::string& text);
    std::string label() const;
};

struct ExperimentConfig {
    std::size_t num_antennas = 16;   // m
    std::size_t num_users = 4;       // k
    double snr_db = 15.0;
    double doppler = 1e-5;
    long training_symbols = 250;
    long data_symbols = 1500;
    int runs = 10;
    std::uint64_t seed = 1;
    SweepKind sweep = SweepKind::Symbols;
    std::vector<double> snr_grid;
    std::vector<double> users_grid;
    std::vector<double> doppler_grid;
    std::vector<ReceiverSpec> receivers;
    double mu_w = 0.01;
    double mu_s = 0.025;
    double mu_full_lms = 0.085;
    double mu_full_mber = 0.05;
    double mu_reduced = 0.035;
    double rho_factor = 2.0;      // rho = rho_factor * sigma
    double cov_lambda = 0.998;
    long window = 200;            // learning-curve smoothing window
    bool parallel = true;         // execution = parallel | serial
};

// Shortest decimal form that parses back bit-exactly.
std::string format_double(double v);

ExperimentConfig parse_config(const std::string& text);
std::string serialize_config(const ExperimentConfig& config);

// "key=value" as given on the command line.
void apply_override(ExperimentConfig& config, const std::string& assignment);

// Throws ConfigError naming the offending field.
void validate_config(const ExperimentConfig& config);

// sigma^2 for a desired-user amplitude of 1.
double noise_variance_for_snr(double snr_db);

ExperimentConfig preset(const std::string& name);
const std::vector<std::string>& preset_names();

}  // namespace jiomber
