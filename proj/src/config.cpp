#include "jiomber/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

namespace jiomber {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            parts.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(trim(cur));
    return parts;
}

double parse_double(const std::string& key, const std::string& value) {
    const std::string v = trim(value);
    char* end = nullptr;
    const double d = std::strtod(v.c_str(), &end);
    if (v.empty() || end != v.c_str() + v.size())
        throw ConfigError("config key '" + key + "': not a number: '" + value + "'");
    return d;
}

long long parse_int(const std::string& key, const std::string& value) {
    const std::string v = trim(value);
    char* end = nullptr;
    const long long i = std::strtoll(v.c_str(), &end, 10);
    if (v.empty() || end != v.c_str() + v.size())
        throw ConfigError("config key '" + key + "': not an integer: '" + value + "'");
    return i;
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    const std::string v = trim(value);
    char* end = nullptr;
    const unsigned long long i = std::strtoull(v.c_str(), &end, 10);
    if (v.empty() || end != v.c_str() + v.size())
        throw ConfigError("config key '" + key + "': not an unsigned integer: '" + value + "'");
    return i;
}

std::vector<double> parse_grid(const std::string& key, const std::string& value) {
    std::vector<double> grid;
    for (const std::string& part : split(value, ','))
        if (!part.empty()) grid.push_back(parse_double(key, part));
    return grid;
}

std::string join_grid(const std::vector<double>& grid) {
    std::string out;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (i) out += ",";
        out += format_double(grid[i]);
    }
    return out;
}

const char* sweep_name(SweepKind k) {
    switch (k) {
        case SweepKind::Symbols: return "symbols";
        case SweepKind::Snr: return "snr";
        case SweepKind::Users: return "users";
        case SweepKind::Doppler: return "doppler";
    }
    return "?";
}

void set_key(ExperimentConfig& c, const std::string& key, const std::string& value) {
    if (key == "m") {
        c.num_antennas = static_cast<std::size_t>(parse_int(key, value));
    } else if (key == "k") {
        c.num_users = static_cast<std::size_t>(parse_int(key, value));
    } else if (key == "snr_db") {
        c.snr_db = parse_double(key, value);
    } else if (key == "doppler") {
        c.doppler = parse_double(key, value);
    } else if (key == "training_symbols") {
        c.training_symbols = static_cast<long>(parse_int(key, value));
    } else if (key == "data_symbols") {
        c.data_symbols = static_cast<long>(parse_int(key, value));
    } else if (key == "runs") {
        c.runs = static_cast<int>(parse_int(key, value));
    } else if (key == "seed") {
        c.seed = parse_u64(key, value);
    } else if (key == "sweep") {
        const std::string v = trim(value);
        if (v == "symbols") c.sweep = SweepKind::Symbols;
        else if (v == "snr") c.sweep = SweepKind::Snr;
        else if (v == "users") c.sweep = SweepKind::Users;
        else if (v == "doppler") c.sweep = SweepKind::Doppler;
        else throw ConfigError("config key 'sweep': unknown sweep '" + v + "' (symbols|snr|users|doppler)");
    } else if (key == "snr_grid") {
        c.snr_grid = parse_grid(key, value);
    } else if (key == "users_grid") {
        c.users_grid = parse_grid(key, value);
    } else if (key == "doppler_grid") {
        c.doppler_grid = parse_grid(key, value);
    } else if (key == "receivers") {
        c.receivers.clear();
        for (const std::string& part : split(value, ','))
            if (!part.empty()) c.receivers.push_back(ReceiverSpec::parse(part));
    } else if (key == "mu_w") {
        c.mu_w = parse_double(key, value);
    } else if (key == "mu_s") {
        c.mu_s = parse_double(key, value);
    } else if (key == "mu_full_lms") {
        c.mu_full_lms = parse_double(key, value);
    } else if (key == "mu_full_mber") {
        c.mu_full_mber = parse_double(key, value);
    } else if (key == "mu_reduced") {
        c.mu_reduced = parse_double(key, value);
    } else if (key == "rho_factor") {
        c.rho_factor = parse_double(key, value);
    } else if (key == "cov_lambda") {
        c.cov_lambda = parse_double(key, value);
    } else if (key == "window") {
        c.window = static_cast<long>(parse_int(key, value));
    } else if (key == "execution") {
        const std::string v = trim(value);
        if (v == "parallel") c.parallel = true;
        else if (v == "serial") c.parallel = false;
        else throw ConfigError("config key 'execution': expected serial or parallel, got '" + v + "'");
    } else {
        throw ConfigError("unknown config key '" + key + "' (value '" + value + "')");
    }
}

}  // namespace

std::string format_double(double v) {
    char buf[40];
    if (v == std::floor(v) && std::abs(v) < 1e15) {
        std::snprintf(buf, sizeof buf, "%.0f", v);
        return buf;
    }
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

ReceiverSpec ReceiverSpec::parse(const std::string& text) {
    const std::string t = trim(text);
    const auto colon = t.find(':');
    const std::string name = trim(t.substr(0, colon));
    const std::string arg = colon == std::string::npos ? "" : trim(t.substr(colon + 1));

    ReceiverSpec spec;
    bool needs_rank = true;
    if (name == "full-rank-lms") {
        spec.alg = Alg::FullLms;
        needs_rank = false;
    } else if (name == "full-rank-mber") {
        spec.alg = Alg::FullMber;
        needs_rank = false;
    } else if (name == "mwf-lms") {
        spec.alg = Alg::MwfLms;
    } else if (name == "mwf-mber") {
        spec.alg = Alg::MwfMber;
    } else if (name == "jio-lms") {
        spec.alg = Alg::JioLms;
    } else if (name == "eig") {
        spec.alg = Alg::Eig;
    } else if (name == "jio-mber") {
        spec.alg = Alg::JioMber;
    } else {
        throw ConfigError("unknown receiver '" + name + "' in '" + text + "'");
    }

    if (!needs_rank) {
        if (!arg.empty()) throw ConfigError("receiver '" + name + "' takes no rank argument");
        return spec;
    }
    if (arg.empty()) throw ConfigError("receiver '" + name + "' needs a rank, e.g. '" + name + ":8'");

    const auto dash = arg.find('-');
    if (dash != std::string::npos) {
        if (spec.alg != Alg::JioMber)
            throw ConfigError("receiver '" + name + "' does not support a rank range");
        spec.auto_rank = true;
        spec.d_min = static_cast<std::size_t>(parse_int("receivers", arg.substr(0, dash)));
        spec.d_max = static_cast<std::size_t>(parse_int("receivers", arg.substr(dash + 1)));
        if (spec.d_min < 1 || spec.d_min > spec.d_max)
            throw ConfigError("receiver '" + text + "': rank range must satisfy 1 <= MIN <= MAX");
    } else {
        spec.rank = static_cast<std::size_t>(parse_int("receivers", arg));
        if (spec.rank < 1) throw ConfigError("receiver '" + text + "': rank must be >= 1");
    }
    return spec;
}

std::string ReceiverSpec::label() const {
    switch (alg) {
        case Alg::FullLms: return "full-rank-lms";
        case Alg::FullMber: return "full-rank-mber";
        case Alg::MwfLms: return "mwf-lms:" + std::to_string(rank);
        case Alg::MwfMber: return "mwf-mber:" + std::to_string(rank);
        case Alg::JioLms: return "jio-lms:" + std::to_string(rank);
        case Alg::Eig: return "eig:" + std::to_string(rank);
        case Alg::JioMber:
            if (auto_rank) return "jio-mber:" + std::to_string(d_min) + "-" + std::to_string(d_max);
            return "jio-mber:" + std::to_string(rank);
    }
    return "?";
}

ExperimentConfig parse_config(const std::string& text) {
    ExperimentConfig c;
    c.receivers.clear();
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value, got '" + line + "'");
        set_key(c, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return c;
}

std::string serialize_config(const ExperimentConfig& c) {
    std::string out;
    auto kv = [&out](const std::string& key, const std::string& value) {
        out += key + " = " + value + "\n";
    };
    kv("m", std::to_string(c.num_antennas));
    kv("k", std::to_string(c.num_users));
    kv("snr_db", format_double(c.snr_db));
    kv("doppler", format_double(c.doppler));
    kv("training_symbols", std::to_string(c.training_symbols));
    kv("data_symbols", std::to_string(c.data_symbols));
    kv("runs", std::to_string(c.runs));
    kv("seed", std::to_string(c.seed));
    kv("sweep", sweep_name(c.sweep));
    if (c.sweep == SweepKind::Snr) kv("snr_grid", join_grid(c.snr_grid));
    if (c.sweep == SweepKind::Users) kv("users_grid", join_grid(c.users_grid));
    if (c.sweep == SweepKind::Doppler) kv("doppler_grid", join_grid(c.doppler_grid));
    std::string recv;
    for (std::size_t i = 0; i < c.receivers.size(); ++i) {
        if (i) recv += ",";
        recv += c.receivers[i].label();
    }
    kv("receivers", recv);
    kv("mu_w", format_double(c.mu_w));
    kv("mu_s", format_double(c.mu_s));
    kv("mu_full_lms", format_double(c.mu_full_lms));
    kv("mu_full_mber", format_double(c.mu_full_mber));
    kv("mu_reduced", format_double(c.mu_reduced));
    kv("rho_factor", format_double(c.rho_factor));
    kv("cov_lambda", format_double(c.cov_lambda));
    kv("window", std::to_string(c.window));
    kv("execution", c.parallel ? "parallel" : "serial");
    return out;
}

void apply_override(ExperimentConfig& config, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos)
        throw ConfigError("override must be key=value, got '" + assignment + "'");
    set_key(config, trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

namespace {

void check_sorted(const char* key, const std::vector<double>& grid) {
    if (grid.empty()) throw ConfigError(std::string("config key '") + key + "': active sweep grid is empty");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1]))
            throw ConfigError(std::string("config key '") + key + "': grid must be strictly increasing");
}

}  // namespace

void validate_config(const ExperimentConfig& c) {
    if (c.num_antennas < 1) throw ConfigError("config key 'm': need at least one antenna");
    if (c.num_users < 1 || c.num_users > c.num_antennas)
        throw ConfigError("config key 'k': need 1 <= k <= m");
    if (c.training_symbols < 0) throw ConfigError("config key 'training_symbols': must be >= 0");
    if (c.data_symbols < 1) throw ConfigError("config key 'data_symbols': must be >= 1");
    if (c.runs < 1) throw ConfigError("config key 'runs': must be >= 1");
    if (c.window < 1) throw ConfigError("config key 'window': must be >= 1");
    if (!(c.doppler >= 0)) throw ConfigError("config key 'doppler': must be >= 0");
    if (!std::isfinite(c.snr_db)) throw ConfigError("config key 'snr_db': must be finite");
    if (!(c.mu_w > 0) || !(c.mu_s > 0) || !(c.mu_full_lms > 0) || !(c.mu_full_mber > 0) ||
        !(c.mu_reduced > 0))
        throw ConfigError("config: all step sizes must be > 0");
    if (!(c.rho_factor > 0)) throw ConfigError("config key 'rho_factor': must be > 0");
    if (!(c.cov_lambda > 0) || c.cov_lambda > 1)
        throw ConfigError("config key 'cov_lambda': must be in (0, 1]");
    if (c.receivers.empty()) throw ConfigError("config key 'receivers': need at least one receiver");

    std::size_t max_users = c.num_users;
    if (c.sweep == SweepKind::Snr) {
        check_sorted("snr_grid", c.snr_grid);
        for (double v : c.snr_grid)
            if (!std::isfinite(v)) throw ConfigError("config key 'snr_grid': values must be finite");
    } else if (c.sweep == SweepKind::Users) {
        check_sorted("users_grid", c.users_grid);
        for (double v : c.users_grid) {
            if (v < 1 || v != std::floor(v))
                throw ConfigError("config key 'users_grid': values must be positive integers");
            max_users = std::max(max_users, static_cast<std::size_t>(v));
        }
    } else if (c.sweep == SweepKind::Doppler) {
        check_sorted("doppler_grid", c.doppler_grid);
        for (double v : c.doppler_grid)
            if (!(v >= 0)) throw ConfigError("config key 'doppler_grid': values must be >= 0");
    }
    if (max_users > c.num_antennas)
        throw ConfigError("config key 'users_grid': user counts must not exceed m");

    for (const ReceiverSpec& spec : c.receivers) {
        using Alg = ReceiverSpec::Alg;
        if (spec.alg == Alg::FullLms || spec.alg == Alg::FullMber) continue;
        if (spec.auto_rank) {
            if (spec.d_min < 1 || spec.d_min > spec.d_max || spec.d_max > c.num_antennas)
                throw ConfigError("receiver '" + spec.label() + "': need 1 <= D_min <= D_max <= m");
        } else {
            if (spec.rank < 1 || spec.rank > c.num_antennas)
                throw ConfigError("receiver '" + spec.label() + "': need 1 <= D <= m");
        }
    }
}

double noise_variance_for_snr(double snr_db) { return std::pow(10.0, -snr_db / 10.0); }

namespace {

std::vector<ReceiverSpec> full_receiver_set() {
    const char* labels[] = {
        "full-rank-lms", "full-rank-mber", "mwf-lms:8",  "mwf-mber:8",
        "jio-lms:8",     "eig:8",          "jio-mber:8", "jio-mber:3-20",
    };
    std::vector<ReceiverSpec> out;
    for (const char* l : labels) out.push_back(ReceiverSpec::parse(l));
    return out;
}

ExperimentConfig base_preset() {
    ExperimentConfig c;
    c.num_antennas = 32;
    c.snr_db = 15.0;
    c.doppler = 1e-5;
    c.training_symbols = 250;
    c.data_symbols = 1500;
    c.runs = 100;
    c.seed = 1;
    c.sweep = SweepKind::Symbols;
    c.receivers = full_receiver_set();
    c.window = 200;
    return c;
}

}  // namespace

ExperimentConfig preset(const std::string& name) {
    ExperimentConfig c = base_preset();
    if (name == "fig2") {
        c.num_users = 7;
    } else if (name == "fig3") {
        c.num_users = 17;
    } else if (name == "fig4") {
        c.num_users = 10;
        c.sweep = SweepKind::Snr;
        // Grid stops at the nominal 15 dB operating point. Above roughly
        // 16 dB the kernel radius 2*sigma is so narrow that the
        // decision-directed MBER receivers can lock onto an interferer
        // (large, confident, wrong margins), so BER is no longer a
        // monotone function of SNR there.
        c.snr_grid = {0, 5, 10, 15};
    } else if (name == "fig5") {
        c.num_users = 4;
        c.sweep = SweepKind::Users;
        c.users_grid = {4, 8, 12, 16, 20, 24};
    } else if (name == "fading") {
        c.num_users = 17;
        c.sweep = SweepKind::Doppler;
        c.doppler_grid = {1e-6, 1e-5, 1e-4, 1e-3};
    } else if (name == "ci") {
        c.num_antennas = 16;
        c.num_users = 8;
        c.runs = 30;
        c.receivers.clear();
        // Auto range scales the large-array default (3, 20): D_min stays 3,
        // D_max = 5M/8 = 10 at M = 16.
        for (const char* l : {"full-rank-lms", "full-rank-mber", "mwf-mber:8",
                              "jio-mber:8", "jio-mber:3-10"})
            c.receivers.push_back(ReceiverSpec::parse(l));
    } else {
        std::string known;
        for (const std::string& n : preset_names()) {
            if (!known.empty()) known += ", ";
            known += n;
        }
        throw ConfigError("unknown preset '" + name + "' (known: " + known + ")");
    }
    validate_config(c);
    return c;
}

const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names = {"fig2", "fig3", "fig4",
                                                   "fig5", "fading", "ci"};
    return names;
}

}  // namespace jiomber
