#include "jiomber/harness.hpp"

#include <cmath>
#include <cstring>
#include <memory>
#include <stdexcept>
#include <utility>

#include "jiomber/baselines.hpp"
#include "jiomber/jio_mber.hpp"
#include "jiomber/rank_select.hpp"
#include "json.hpp"

namespace jiomber {

namespace {

std::uint64_t fnv1a_append(std::uint64_t h, const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t digest_frames(const std::vector<SymbolFrame>& frames) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const SymbolFrame& f : frames)
        for (const Complex& z : f.received) {
            const double re = z.real(), im = z.imag();
            h = fnv1a_append(h, &re, sizeof re);
            h = fnv1a_append(h, &im, sizeof im);
        }
    return h;
}

// Uniform stepping interface over the seven receiver families.
struct Detector {
    virtual ~Detector() = default;
    virtual int step(const CVector& r, std::optional<int> training_bit) = 0;
    virtual void annotate(RunTrace&) const {}
};

template <class R>
struct Plain final : Detector {
    R rx;
    explicit Plain(R r) : rx(std::move(r)) {}
    int step(const CVector& r, std::optional<int> bit) override { return rx.step(r, bit); }
};

template <class R>
struct MwfLike final : Detector {
    R rx;
    explicit MwfLike(R r) : rx(std::move(r)) {}
    int step(const CVector& r, std::optional<int> bit) override { return rx.step(r, bit); }
    void annotate(RunTrace& t) const override { t.mwf_deficient = rx.deficient_symbols(); }
};

struct AutoRank final : Detector {
    AutoRankReceiver rx;
    explicit AutoRank(AutoRankReceiver r) : rx(std::move(r)) {}
    int step(const CVector& r, std::optional<int> bit) override { return rx.step(r, bit); }
    void annotate(RunTrace& t) const override {
        t.rank_fallbacks = rx.fallback_count();
        t.selected_ranks = rx.rank_history();
    }
};

std::unique_ptr<Detector> make_detector(const ExperimentConfig& c, const ReceiverSpec& spec) {
    const std::size_t m = c.num_antennas;
    const double sigma2 = noise_variance_for_snr(c.snr_db);
    const double rho = c.rho_factor * std::sqrt(sigma2);
    using Alg = ReceiverSpec::Alg;
    switch (spec.alg) {
        case Alg::FullLms:
            return std::make_unique<Plain<FullRankLms>>(FullRankLms(m, c.mu_full_lms));
        case Alg::FullMber:
            return std::make_unique<Plain<FullRankMber>>(FullRankMber(m, c.mu_full_mber, rho));
        case Alg::MwfLms:
            return std::make_unique<MwfLike<MwfLms>>(MwfLms(m, spec.rank, c.mu_reduced, c.cov_lambda));
        case Alg::MwfMber:
            return std::make_unique<MwfLike<MwfMber>>(
                MwfMber(m, spec.rank, c.mu_reduced, rho, c.cov_lambda));
        case Alg::JioLms:
            return std::make_unique<Plain<JioLms>>(JioLms(m, spec.rank, c.mu_reduced, c.mu_reduced));
        case Alg::Eig:
            return std::make_unique<Plain<EigMber>>(
                EigMber(m, spec.rank, c.mu_reduced, rho, c.cov_lambda));
        case Alg::JioMber:
            if (spec.auto_rank)
                return std::make_unique<AutoRank>(AutoRankReceiver::standard(
                    m, spec.d_min, spec.d_max, rho, c.mu_w, c.mu_s, c.training_symbols));
            return std::make_unique<Plain<JioMberReceiver>>(JioMberReceiver::standard(
                m, spec.rank, rho, c.mu_w, c.mu_s, c.training_symbols));
    }
    throw std::logic_error("make_detector: unhandled receiver");
}

ChannelConfig channel_of(const ExperimentConfig& c) {
    ChannelConfig ch;
    ch.num_users = c.num_users;
    ch.num_antennas = c.num_antennas;
    ch.doppler = c.doppler;
    ch.noise_variance = noise_variance_for_snr(c.snr_db);
    return ch;
}

}  // namespace

std::vector<SymbolFrame> generate_frames(const ExperimentConfig& config,
                                         std::uint64_t run_seed) {
    const ChannelConfig ch = channel_of(config);
    ChannelState state(ch, stream_seed(run_seed, Stream::ChannelPhases));
    Rng symbols(stream_seed(run_seed, Stream::Symbols));
    Rng noise(stream_seed(run_seed, Stream::Noise));
    const long total = config.training_symbols + config.data_symbols;
    std::vector<SymbolFrame> frames;
    frames.reserve(static_cast<std::size_t>(total));
    for (long i = 0; i < total; ++i) {
        frames.push_back(emit_frame(state, ch, symbols, noise));
        state.advance_in_place();
    }
    return frames;
}

RunTrace run_single(const ExperimentConfig& config, const ReceiverSpec& spec,
                    const std::vector<SymbolFrame>& frames) {
    const long training = config.training_symbols;
    const long total = static_cast<long>(frames.size());
    auto detector = make_detector(config, spec);

    RunTrace trace;
    trace.decisions.reserve(static_cast<std::size_t>(total));
    trace.error_prefix.reserve(static_cast<std::size_t>(total - training) + 1);
    trace.error_prefix.push_back(0);
    for (long i = 0; i < total; ++i) {
        const SymbolFrame& frame = frames[static_cast<std::size_t>(i)];
        const int sent = frame.bits.at(0); // user 0 is the desired user
        std::optional<int> supervision;
        if (i < training) supervision = sent;
        const int decision = detector->step(frame.received, supervision);
        trace.decisions.push_back(decision);
        if (i >= training) {
            if (decision != sent) ++trace.errors;
            trace.error_prefix.push_back(trace.errors);
        }
    }
    trace.frame_digest = digest_frames(frames);
    detector->annotate(trace);
    return trace;
}

RunTrace run_single(const ExperimentConfig& config, const ReceiverSpec& spec,
                    std::uint64_t run_seed) {
    return run_single(config, spec, generate_frames(config, run_seed));
}

namespace {

double sample_std_err(const std::vector<double>& values) {
    const std::size_t n = values.size();
    if (n < 2) return 0.0;
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    return std::sqrt(ss / static_cast<double>(n - 1)) / std::sqrt(static_cast<double>(n));
}

struct GridPoint {
    double x;
    ExperimentConfig config;
};

std::vector<GridPoint> materialize_grid(const ExperimentConfig& c) {
    std::vector<GridPoint> points;
    switch (c.sweep) {
        case SweepKind::Symbols:
            points.push_back({0.0, c});
            break;
        case SweepKind::Snr:
            for (double v : c.snr_grid) {
                GridPoint p{v, c};
                p.config.snr_db = v;
                points.push_back(std::move(p));
            }
            break;
        case SweepKind::Users:
            for (double v : c.users_grid) {
                GridPoint p{v, c};
                p.config.num_users = static_cast<std::size_t>(v);
                points.push_back(std::move(p));
            }
            break;
        case SweepKind::Doppler:
            for (double v : c.doppler_grid) {
                GridPoint p{v, c};
                p.config.doppler = v;
                points.push_back(std::move(p));
            }
            break;
    }
    return points;
}

const char* x_name_of(SweepKind k) {
    switch (k) {
        case SweepKind::Symbols: return "symbol";
        case SweepKind::Snr: return "snr_db";
        case SweepKind::Users: return "users";
        case SweepKind::Doppler: return "doppler";
    }
    return "?";
}

const char* sweep_key(SweepKind k) {
    switch (k) {
        case SweepKind::Symbols: return "symbols";
        case SweepKind::Snr: return "snr";
        case SweepKind::Users: return "users";
        case SweepKind::Doppler: return "doppler";
    }
    return "?";
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config) {
    validate_config(config);
    const std::vector<GridPoint> grid = materialize_grid(config);
    const long long runs = config.runs;
    const long long n_jobs = static_cast<long long>(grid.size()) * runs;

    // traces[job][receiver]; jobs ordered point-major, run-minor.
    std::vector<std::vector<RunTrace>> traces(static_cast<std::size_t>(n_jobs));
    std::exception_ptr failure;

#pragma omp parallel for schedule(dynamic) if (config.parallel)
    for (long long job = 0; job < n_jobs; ++job) {
        try {
            const GridPoint& point = grid[static_cast<std::size_t>(job / runs)];
            const std::uint64_t run = static_cast<std::uint64_t>(job % runs);
            const std::uint64_t seed = derive_run_seed(config.seed, 0.0, run);
            const std::vector<SymbolFrame> frames = generate_frames(point.config, seed);
            auto& slot = traces[static_cast<std::size_t>(job)];
            slot.reserve(config.receivers.size());
            for (const ReceiverSpec& spec : config.receivers)
                slot.push_back(run_single(point.config, spec, frames));
        } catch (...) {
#pragma omp critical(jiomber_harness_failure)
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);

    ExperimentResult result;
    result.config = config;
    const long data = config.data_symbols;
    const char* x_name = x_name_of(config.sweep);

    for (std::size_t rec = 0; rec < config.receivers.size(); ++rec) {
        BerCurve curve;
        curve.receiver = config.receivers[rec].label();
        curve.x_name = x_name;

        if (config.sweep == SweepKind::Symbols) {
            curve.points.reserve(static_cast<std::size_t>(data));
            std::vector<double> per_run(static_cast<std::size_t>(runs));
            for (long j = 0; j < data; ++j) {
                const long lo = std::max(0L, j + 1 - config.window);
                const long long window_bits = j + 1 - lo;
                BerPoint pt;
                pt.x = static_cast<double>(config.training_symbols + j + 1);
                for (long long run = 0; run < runs; ++run) {
                    const auto& prefix = traces[static_cast<std::size_t>(run)][rec].error_prefix;
                    const long e = prefix[static_cast<std::size_t>(j + 1)] -
                                   prefix[static_cast<std::size_t>(lo)];
                    pt.errors += e;
                    per_run[static_cast<std::size_t>(run)] =
                        static_cast<double>(e) / static_cast<double>(window_bits);
                }
                pt.bits = window_bits * runs;
                pt.ber = static_cast<double>(pt.errors) / static_cast<double>(pt.bits);
                pt.std_err = sample_std_err(per_run);
                if (j == data - 1) pt.per_run_ber = per_run;
                curve.points.push_back(std::move(pt));
            }
        } else {
            for (std::size_t g = 0; g < grid.size(); ++g) {
                BerPoint pt;
                pt.x = grid[g].x;
                pt.per_run_ber.resize(static_cast<std::size_t>(runs));
                for (long long run = 0; run < runs; ++run) {
                    const std::size_t job = g * static_cast<std::size_t>(runs) +
                                            static_cast<std::size_t>(run);
                    const long e = traces[job][rec].errors;
                    pt.errors += e;
                    pt.per_run_ber[static_cast<std::size_t>(run)] =
                        static_cast<double>(e) / static_cast<double>(data);
                }
                pt.bits = static_cast<long long>(data) * runs;
                pt.ber = static_cast<double>(pt.errors) / static_cast<double>(pt.bits);
                pt.std_err = sample_std_err(pt.per_run_ber);
                curve.points.push_back(std::move(pt));
            }
        }
        result.curves.push_back(std::move(curve));
    }
    return result;
}

std::string to_csv(const ExperimentResult& result) {
    std::string out = "receiver,x_name,x_value,ber,errors,bits,runs,seed\n";
    const std::string tail = "," + std::to_string(result.config.runs) + "," +
                             std::to_string(result.config.seed) + "\n";
    for (const BerCurve& curve : result.curves)
        for (const BerPoint& pt : curve.points) {
            out += curve.receiver;
            out += ",";
            out += curve.x_name;
            out += ",";
            out += format_double(pt.x);
            out += ",";
            out += format_double(pt.ber);
            out += ",";
            out += std::to_string(pt.errors);
            out += ",";
            out += std::to_string(pt.bits);
            out += tail;
        }
    return out;
}

std::string to_json(const ExperimentResult& result, const std::vector<std::string>& overrides) {
    using json = nlohmann::ordered_json;
    const ExperimentConfig& c = result.config;
    json cfg;
    cfg["m"] = c.num_antennas;
    cfg["k"] = c.num_users;
    cfg["snr_db"] = c.snr_db;
    cfg["doppler"] = c.doppler;
    cfg["training_symbols"] = c.training_symbols;
    cfg["data_symbols"] = c.data_symbols;
    cfg["runs"] = c.runs;
    cfg["seed"] = c.seed;
    cfg["sweep"] = sweep_key(c.sweep);
    if (c.sweep == SweepKind::Snr) cfg["snr_grid"] = c.snr_grid;
    if (c.sweep == SweepKind::Users) cfg["users_grid"] = c.users_grid;
    if (c.sweep == SweepKind::Doppler) cfg["doppler_grid"] = c.doppler_grid;
    json receivers = json::array();
    for (const ReceiverSpec& spec : c.receivers) receivers.push_back(spec.label());
    cfg["receivers"] = receivers;
    cfg["mu_w"] = c.mu_w;
    cfg["mu_s"] = c.mu_s;
    cfg["mu_full_lms"] = c.mu_full_lms;
    cfg["mu_full_mber"] = c.mu_full_mber;
    cfg["mu_reduced"] = c.mu_reduced;
    cfg["rho_factor"] = c.rho_factor;
    cfg["cov_lambda"] = c.cov_lambda;
    cfg["window"] = c.window;
    cfg["execution"] = c.parallel ? "parallel" : "serial";

    json root;
    root["config"] = cfg;
    root["overrides"] = overrides;
    json curves = json::array();
    for (const BerCurve& curve : result.curves) {
        json jc;
        jc["receiver"] = curve.receiver;
        jc["x_name"] = curve.x_name;
        json pts = json::array();
        for (const BerPoint& pt : curve.points) {
            json jp;
            jp["x"] = pt.x;
            jp["ber"] = pt.ber;
            jp["std_err"] = pt.std_err;
            jp["errors"] = pt.errors;
            jp["bits"] = pt.bits;
            pts.push_back(std::move(jp));
        }
        jc["points"] = std::move(pts);
        curves.push_back(std::move(jc));
    }
    root["curves"] = std::move(curves);
    return root.dump(2) + "\n";
}

}  // namespace jiomber
