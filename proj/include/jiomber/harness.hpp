#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "jiomber/channel.hpp"
#include "jiomber/config.hpp"

// Monte-Carlo experiment driver. A job is one (grid point, run) pair: the
// channel/symbol/noise streams are generated once per job and every receiver
// in the experiment detects the same frames, so receiver comparisons are
// paired. Jobs are independent and may execute under OpenMP; results are
// stored by job index and reduced in a fixed order, so serial and parallel
// execution produce byte-identical output.

namespace jiomber {

// One receiver over one run.
struct RunTrace {
    std::vector<int> decisions;     // every symbol, training included
    long errors = 0;                // decision-directed symbols only
    std::vector<long> error_prefix; // errors among the first j data symbols
    std::uint64_t frame_digest = 0; // FNV-1a over the received samples
    long mwf_deficient = 0;         // symbols processed below the target rank
    long rank_fallbacks = 0;        // auto-rank symbols with no valid candidate
    std::vector<int> selected_ranks;
};

// The training + data frames of one run, from the config's scalar fields
// (num_users, snr_db, doppler; sweeps materialize a config per grid point).
std::vector<SymbolFrame> generate_frames(const ExperimentConfig& config,
                                         std::uint64_t run_seed);

RunTrace run_single(const ExperimentConfig& config, const ReceiverSpec& spec,
                    const std::vector<SymbolFrame>& frames);

// Convenience form regenerating the frames from the seed.
RunTrace run_single(const ExperimentConfig& config, const ReceiverSpec& spec,
                    std::uint64_t run_seed);

struct BerPoint {
    double x = 0;
    long long errors = 0; // across runs
    long long bits = 0;
    double ber = 0;       // errors / bits, exactly
    double std_err = 0;   // sample std of the per-run BERs / sqrt(runs)
    std::vector<double> per_run_ber; // kept where a comparison consumes it
};

struct BerCurve {
    std::string receiver;
    std::string x_name; // "symbol", "snr_db", "users", "doppler"
    std::vector<BerPoint> points;
};

struct ExperimentResult {
    ExperimentConfig config;
    std::vector<BerCurve> curves;
};

// Runs the full experiment. For the symbols sweep each curve is a learning
// curve: point j is the BER over the trailing `window` data symbols ending
// at symbol training + j + 1, and only the terminal point keeps per-run
// BERs. Grid sweeps produce one point per grid value, counting errors over
// all data symbols, per-run BERs kept everywhere.
ExperimentResult run_experiment(const ExperimentConfig& config);

// receiver,x_name,x_value,ber,errors,bits,runs,seed with round-trip floats.
std::string to_csv(const ExperimentResult& result);

// Config echo (file key names), the command-line overrides that produced it,
// and the curves with standard errors.
std::string to_json(const ExperimentResult& result,
                    const std::vector<std::string>& overrides = {});

}  // namespace jiomber
