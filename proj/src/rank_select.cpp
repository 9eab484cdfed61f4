#include "jiomber/rank_select.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

#include "jiomber/jio_mber.hpp"

namespace jiomber {

CVector partial_outputs(const ReceiverState& state, const CVector& r) {
    const CVector rbar = project(state, r);
    CVector out(rbar.size());
    // Same products and addition order as inner(filter, rbar), so the last
    // entry is bit-identical to the full-rank output.
    Complex acc = 0.0;
    for (std::size_t d = 0; d < rbar.size(); ++d) {
        acc += std::conj(state.filter[d]) * rbar[d];
        out[d] = acc;
    }
    return out;
}

RankCandidates rank_error_probabilities(const ReceiverState& state, const CVector& r,
                                        int b, std::size_t d_min) {
    if (b != 1 && b != -1) throw std::invalid_argument("rank_error_probabilities: bit must be +-1");
    const std::size_t d_max = state.projection.cols();
    if (d_min < 1 || d_min > d_max)
        throw std::invalid_argument("rank_error_probabilities: need 1 <= d_min <= D_max");
    const CVector partial = partial_outputs(state, r);
    const std::size_t m = state.projection.rows();
    const double rho = state.kernel_radius;

    RankCandidates out;
    out.d_min = d_min;
    out.p.reserve(d_max - d_min + 1);
    out.valid.reserve(d_max - d_min + 1);

    // Truncated constraint norms share one prefix accumulation of S w.
    CVector y(m, 0.0);
    for (std::size_t d = 0; d < d_max; ++d) {
        const Complex wd = state.filter[d];
        for (std::size_t f = 0; f < m; ++f) y[f] += state.projection(f, d) * wd;
        if (d + 1 < d_min) continue;
        const double nrm = norm_sq(y);
        if (nrm > 0.0) {
            out.p.push_back(q_function(b * partial[d].real() / (rho * std::sqrt(nrm))));
            out.valid.push_back(1);
        } else {
            out.p.push_back(std::numeric_limits<double>::quiet_NaN());
            out.valid.push_back(0);
        }
    }
    return out;
}

std::size_t select_rank(const RankCandidates& candidates) {
    std::size_t best = 0;
    bool found = false;
    double best_p = 0.0;
    for (std::size_t i = 0; i < candidates.p.size(); ++i) {
        if (!candidates.valid[i]) continue;
        if (!found || candidates.p[i] < best_p) {
            found = true;
            best_p = candidates.p[i];
            best = candidates.d_min + i;
        }
    }
    if (!found) throw std::runtime_error("select_rank: no valid rank candidates");
    return best;
}

AutoRankReceiver::AutoRankReceiver(ReceiverState initial, std::size_t d_min,
                                   std::size_t d_max, long training_length)
    : training_(training_length), prev_rank_(d_max) {
    if (d_min < 1 || d_min > d_max) throw std::invalid_argument("AutoRankReceiver: need 1 <= D_min <= D_max");
    if (initial.projection.cols() != d_max)
        throw std::invalid_argument("AutoRankReceiver: projection columns != D_max");
    if (initial.filter.size() != d_max)
        throw std::invalid_argument("AutoRankReceiver: filter length != D_max");
    if (initial.kernel_radius <= 0) throw std::invalid_argument("AutoRankReceiver: rho must be > 0");
    if (training_ < 0) throw std::invalid_argument("AutoRankReceiver: negative training length");
    bank_.state = std::move(initial);
    bank_.d_min = d_min;
    bank_.d_max = d_max;
    bank_.state.mode = training_ > 0 ? Mode::Training : Mode::DecisionDirected;
}

AutoRankReceiver AutoRankReceiver::standard(std::size_t m, std::size_t d_min, std::size_t d_max,
                                            double rho, double mu_w, double mu_s,
                                            long training_length) {
    if (d_max > m) throw std::invalid_argument("AutoRankReceiver: D_max must be <= M");
    ReceiverState st;
    st.projection = truncation_projection(m, d_max);
    st.filter = CVector(d_max, 0.0);
    st.kernel_radius = rho;
    st.step_w = mu_w;
    st.step_s = mu_s;
    return AutoRankReceiver(std::move(st), d_min, d_max, training_length);
}

int AutoRankReceiver::step(const CVector& r, std::optional<int> training_bit) {
    ReceiverState& st = bank_.state;
    const CVector rbar = project(st, r);
    // Prefix outputs, inline to reuse rbar (same arithmetic as partial_outputs).
    CVector partial(rbar.size());
    {
        Complex acc = 0.0;
        for (std::size_t d = 0; d < rbar.size(); ++d) {
            acc += std::conj(st.filter[d]) * rbar[d];
            partial[d] = acc;
        }
    }

    int b;
    if (st.mode == Mode::Training) {
        if (!training_bit) throw std::invalid_argument("auto_rank step: training bit required in Training mode");
        if (*training_bit != 1 && *training_bit != -1)
            throw std::invalid_argument("auto_rank step: training bit must be +-1");
        b = *training_bit;
    } else {
        b = decide(partial[prev_rank_ - 1]);
    }

    // Candidate scores with truncated norms.
    const std::size_t m = st.projection.rows();
    CVector y(m, 0.0);
    std::size_t best = 0;
    bool found = false;
    double best_p = 0.0;
    for (std::size_t d = 0; d < bank_.d_max; ++d) {
        const Complex wd = st.filter[d];
        for (std::size_t f = 0; f < m; ++f) y[f] += st.projection(f, d) * wd;
        if (d + 1 < bank_.d_min) continue;
        const double nrm = norm_sq(y);
        if (nrm <= 0.0) continue;
        const double p = q_function(b * partial[d].real() / (st.kernel_radius * std::sqrt(nrm)));
        if (!found || p < best_p) {
            found = true;
            best_p = p;
            best = d + 1;
        }
    }
    std::size_t d_opt;
    if (found) {
        d_opt = best;
    } else {
        d_opt = prev_rank_; // zero-filter bootstrap: keep the previous rank
        ++fallbacks_;
    }

    const int decision = decide(partial[d_opt - 1]);
    bank_.selected.push_back(static_cast<int>(d_opt));

    scaled_ = jio_mber_update(st, r, rbar, partial[bank_.d_max - 1], b);
    prev_rank_ = d_opt;
    ++index_;
    if (index_ >= training_) st.mode = Mode::DecisionDirected;
    return decision;
}

}  // namespace jiomber
